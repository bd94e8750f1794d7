//! Lab-frame physical parameters.
//!
//! Units: ħ = 1, every frequency in rad/time. Library functions take absolute
//! values; the command-line front end fixes ω_c = 1.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest modulation amplitude; the Bessel evaluation is certified up to here.
pub const MAX_XI: f64 = 50.0;

/// Parameters of the frequency-modulated quantum Rabi model.
///
/// The atomic frequency is modulated as `ω₀ + ξ v cos(v t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    omega0: f64,
    omega_c: f64,
    g: f64,
    xi: f64,
    v: f64,
}

impl ModelParams {
    pub fn new(omega0: f64, omega_c: f64, g: f64, xi: f64, v: f64) -> Result<Self> {
        let finite = [omega0, omega_c, g, xi, v].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if omega_c <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "omega_c must be > 0, got {omega_c}"
            )));
        }
        if v <= 0.0 {
            return Err(Error::InvalidParams(format!("v must be > 0, got {v}")));
        }
        if g < 0.0 {
            return Err(Error::InvalidParams(format!("g must be >= 0, got {g}")));
        }
        if !(0.0..=MAX_XI).contains(&xi) {
            return Err(Error::InvalidParams(format!(
                "xi must lie in [0, {MAX_XI}], got {xi}"
            )));
        }
        Ok(Self {
            omega0,
            omega_c,
            g,
            xi,
            v,
        })
    }

    /// Parameters with ω_c = 1 and ω₀ = 1 + δ.
    pub fn dimensionless(delta: f64, g: f64, xi: f64, v: f64) -> Result<Self> {
        Self::new(1.0 + delta, 1.0, g, xi, v)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// Atom-cavity detuning δ = ω₀ − ω_c.
    pub fn delta(&self) -> f64 {
        self.omega0 - self.omega_c
    }

    pub fn with_xi(&self, xi: f64) -> Result<Self> {
        Self::new(self.omega0, self.omega_c, self.g, xi, self.v)
    }

    pub fn with_v(&self, v: f64) -> Result<Self> {
        Self::new(self.omega0, self.omega_c, self.g, self.xi, v)
    }

    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(self.omega0, self.omega_c, g, self.xi, self.v)
    }

    /// Keeps ω_c and moves ω₀ so that ω₀ − ω_c = `delta`.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(self.omega_c + delta, self.omega_c, self.g, self.xi, self.v)
    }

    /// Multiplies every frequency by `factor` (ξ is dimensionless and kept).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.omega0 * factor,
            self.omega_c * factor,
            self.g * factor,
            self.xi,
            self.v * factor,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeLabel {
    Strong,
    Ultrastrong,
    DeepStrong,
}

impl std::fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegimeLabel::Strong => "strong",
            RegimeLabel::Ultrastrong => "ultrastrong",
            RegimeLabel::DeepStrong => "deep-strong",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingRegime {
    pub label: RegimeLabel,
    /// g / ω_c
    pub ratio: f64,
}

/// Classifies a coupling-to-frequency ratio. Boundaries belong to the
/// stronger regime: 0.1 is ultrastrong, 1 is deep-strong.
pub fn classify_ratio(ratio: f64) -> CouplingRegime {
    let label = if ratio >= 1.0 {
        RegimeLabel::DeepStrong
    } else if ratio >= 0.1 {
        RegimeLabel::Ultrastrong
    } else {
        RegimeLabel::Strong
    };
    CouplingRegime { label, ratio }
}

pub fn classify_regime(p: &ModelParams) -> CouplingRegime {
    classify_ratio(p.g() / p.omega_c())
}
