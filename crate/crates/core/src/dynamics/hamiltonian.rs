use std::f64::consts::TAU;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fockspace::{AtomLevel, FockSpace, OperatorMatrix, C64};
use crate::model::ModelParams;
use crate::modulation::{
    bessel_j_range, effective_params, sideband_detuning, EffectiveParams, MAX_ORDER,
};

/// Tail weight below which a sideband is dropped from the exact rotating-frame sum.
pub const SIDEBAND_TAIL: f64 = 1e-12;

/// Which model to evolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum HamiltonianKind {
    /// `½[ω₀ + ξv cos(vt)]σ_z + ω_c a†a + g(a† + a)(σ₊ + σ₋)`
    Lab,
    /// Lab model in the frame that removes the modulated free part; all
    /// sidebands with `|n| ≤ bessel_cutoff` are kept.
    RotFrameExact { bessel_cutoff: u32 },
    /// Carrier of the rotating terms plus the `m₀` counter-rotating sideband.
    EffFirstFrame,
    /// `ω̃₀σ_z/2 + ω̃_c a†a + g_r(a†σ₋ + aσ₊) + g_c(a†σ₊ + aσ₋)`
    AnisoRabi,
    /// Anisotropic Rabi model without its counter-rotating part.
    EffJC,
}

impl HamiltonianKind {
    pub fn is_time_dependent(&self) -> bool {
        matches!(
            self,
            HamiltonianKind::Lab
                | HamiltonianKind::RotFrameExact { .. }
                | HamiltonianKind::EffFirstFrame
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            HamiltonianKind::Lab => "lab",
            HamiltonianKind::RotFrameExact { .. } => "rot-frame-exact",
            HamiltonianKind::EffFirstFrame => "eff-first-frame",
            HamiltonianKind::AnisoRabi => "aniso-rabi",
            HamiltonianKind::EffJC => "eff-jc",
        }
    }
}

/// Every model here has the form
/// `½·atom·σ_z + cavity·a†a + rotating·aσ₊ + counter·a†σ₊ + h.c.`
/// with the coefficients evaluated at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiCoefficients {
    pub atom: f64,
    pub cavity: f64,
    pub rotating: C64,
    pub counter: C64,
}

impl RabiCoefficients {
    /// Upper bound on the operator norm over `space` (maximum absolute row sum).
    pub fn norm_bound(&self, space: FockSpace) -> f64 {
        let n_max = space.n_max() as f64;
        0.5 * self.atom.abs()
            + self.cavity.abs() * n_max
            + (self.rotating.norm() + self.counter.norm()) * (n_max + 1.0).sqrt()
    }

    /// `out = H ψ` without forming the matrix.
    pub fn apply(&self, space: FockSpace, psi: &[C64], out: &mut [C64]) {
        let n_max = space.n_max();
        let rot_c = self.rotating.conj();
        let ctr_c = self.counter.conj();
        for n in 0..=n_max {
            let ig = space.index(n, AtomLevel::Ground);
            let ie = ig + 1;
            let nf = n as f64;
            let mut g_out = psi[ig] * (-0.5 * self.atom + self.cavity * nf);
            let mut e_out = psi[ie] * (0.5 * self.atom + self.cavity * nf);
            // ⟨g,n| a†σ₋ |e,n−1⟩ = √n, ⟨g,n| aσ₋ |e,n+1⟩ = √(n+1)
            if n > 0 {
                g_out += rot_c * nf.sqrt() * psi[ie - 2];
            }
            if n < n_max {
                g_out += ctr_c * (nf + 1.0).sqrt() * psi[ie + 2];
            }
            // ⟨e,n| aσ₊ |g,n+1⟩ = √(n+1), ⟨e,n| a†σ₊ |g,n−1⟩ = √n
            if n < n_max {
                e_out += self.rotating * (nf + 1.0).sqrt() * psi[ig + 2];
            }
            if n > 0 {
                e_out += self.counter * nf.sqrt() * psi[ig - 2];
            }
            out[ig] = g_out;
            out[ie] = e_out;
        }
    }

    pub fn matrix(&self, space: FockSpace) -> OperatorMatrix {
        let d = space.dim();
        let mut m = DMatrix::<C64>::zeros(d, d);
        let n_max = space.n_max();
        for n in 0..=n_max {
            let ig = space.index(n, AtomLevel::Ground);
            let ie = ig + 1;
            let nf = n as f64;
            m[(ig, ig)] = C64::new(-0.5 * self.atom + self.cavity * nf, 0.0);
            m[(ie, ie)] = C64::new(0.5 * self.atom + self.cavity * nf, 0.0);
            if n < n_max {
                let amp = (nf + 1.0).sqrt();
                // aσ₊: |g,n+1⟩ → |e,n⟩
                m[(ie, ig + 2)] = self.rotating * amp;
                m[(ig + 2, ie)] = self.rotating.conj() * amp;
                // a†σ₊: |g,n⟩ → |e,n+1⟩
                m[(ie + 2, ig)] = self.counter * amp;
                m[(ig, ie + 2)] = self.counter.conj() * amp;
            }
        }
        OperatorMatrix::from_matrix(space, m)
            .and_then(OperatorMatrix::into_hermitian)
            .expect("Rabi-form matrix is Hermitian by construction")
    }
}

/// Bessel weights `J_n(ξ)` for `n ∈ [−cutoff, cutoff]`.
#[derive(Debug, Clone, PartialEq)]
struct SidebandTable {
    cutoff: i64,
    /// `J_n(ξ)` at index `n + cutoff`.
    weights: Vec<f64>,
}

impl SidebandTable {
    fn new(xi: f64, cutoff: u32) -> Result<Self> {
        let positive = bessel_j_range(cutoff, xi)?;
        let c = cutoff as i64;
        let weights = (-c..=c)
            .map(|n| {
                let j = positive[n.unsigned_abs() as usize];
                if n < 0 && n % 2 != 0 {
                    -j
                } else {
                    j
                }
            })
            .collect();
        Ok(Self { cutoff: c, weights })
    }

    fn orders(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(k, &w)| (k as i64 - self.cutoff, w))
    }
}

/// A model together with its parameters; the effective parameters are
/// derived once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    kind: HamiltonianKind,
    params: ModelParams,
    eff: EffectiveParams,
    sidebands: Option<SidebandTable>,
}

impl HamiltonianSpec {
    pub fn new(kind: HamiltonianKind, params: ModelParams) -> Result<Self> {
        let eff = effective_params(&params);
        let sidebands = match kind {
            HamiltonianKind::RotFrameExact { bessel_cutoff } => {
                let min = eff.m0.unsigned_abs() + 5;
                if (bessel_cutoff as u64) < min {
                    return Err(Error::InvalidParams(format!(
                        "bessel_cutoff {bessel_cutoff} below |m0| + 5 = {min}"
                    )));
                }
                if bessel_cutoff as i32 > MAX_ORDER {
                    return Err(Error::InvalidParams(format!(
                        "bessel_cutoff {bessel_cutoff} exceeds {MAX_ORDER}"
                    )));
                }
                Some(SidebandTable::new(params.xi(), bessel_cutoff)?)
            }
            _ => None,
        };
        Ok(Self {
            kind,
            params,
            eff,
            sidebands,
        })
    }

    /// Exact rotating frame with the default cutoff: `|m₀| + 15`, raised
    /// until the outermost sideband coupling falls below 1e-12.
    pub fn rot_frame_exact(params: ModelParams) -> Result<Self> {
        let cutoff = default_bessel_cutoff(&params)?;
        Self::new(
            HamiltonianKind::RotFrameExact {
                bessel_cutoff: cutoff,
            },
            params,
        )
    }

    pub fn kind(&self) -> HamiltonianKind {
        self.kind
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn effective(&self) -> &EffectiveParams {
        &self.eff
    }

    pub fn is_time_dependent(&self) -> bool {
        self.kind.is_time_dependent()
    }

    /// Default integration step: 1/200 of a modulation period.
    pub fn default_step(&self, steps_per_period: u32) -> f64 {
        TAU / self.params.v() / steps_per_period as f64
    }

    pub fn coefficients(&self, t: f64) -> RabiCoefficients {
        let p = &self.params;
        let eff = &self.eff;
        let zero = C64::new(0.0, 0.0);
        match self.kind {
            HamiltonianKind::Lab => RabiCoefficients {
                atom: p.omega0() + p.xi() * p.v() * (p.v() * t).cos(),
                cavity: p.omega_c(),
                rotating: C64::new(p.g(), 0.0),
                counter: C64::new(p.g(), 0.0),
            },
            HamiltonianKind::RotFrameExact { .. } => {
                let table = self
                    .sidebands
                    .as_ref()
                    .expect("sideband table built in new");
                let delta = p.delta();
                let mut rotating = zero;
                let mut counter = zero;
                for (n, j) in table.orders() {
                    // e^{i(δ + n v)t} aσ₊ and e^{iΔ_n t} a†σ₊
                    rotating += j * C64::from_polar(1.0, (delta + n as f64 * p.v()) * t);
                    counter += j * C64::from_polar(1.0, sideband_detuning(p, n) * t);
                }
                RabiCoefficients {
                    atom: 0.0,
                    cavity: 0.0,
                    rotating: rotating * p.g(),
                    counter: counter * p.g(),
                }
            }
            HamiltonianKind::EffFirstFrame => RabiCoefficients {
                atom: 0.0,
                cavity: 0.0,
                rotating: C64::from_polar(eff.g_r, eff.delta_eff * t),
                counter: C64::from_polar(eff.g_c, eff.delta_m0 * t),
            },
            HamiltonianKind::AnisoRabi => RabiCoefficients {
                atom: eff.omega0_eff,
                cavity: eff.omega_c_eff,
                rotating: C64::new(eff.g_r, 0.0),
                counter: C64::new(eff.g_c, 0.0),
            },
            HamiltonianKind::EffJC => RabiCoefficients {
                atom: eff.omega0_eff,
                cavity: eff.omega_c_eff,
                rotating: C64::new(eff.g_r, 0.0),
                counter: zero,
            },
        }
    }
}

pub fn default_bessel_cutoff(params: &ModelParams) -> Result<u32> {
    let eff = effective_params(params);
    let mut cutoff = (eff.m0.unsigned_abs() + 15).max(params.xi().ceil() as u64 + 1) as u32;
    loop {
        if cutoff as i32 > MAX_ORDER {
            return Err(Error::InvalidParams(format!(
                "no Bessel cutoff up to {MAX_ORDER} brings the sideband tail below {SIDEBAND_TAIL:e}"
            )));
        }
        let j = bessel_j_range(cutoff, params.xi())?;
        if params.g() * j[cutoff as usize].abs() < SIDEBAND_TAIL {
            return Ok(cutoff);
        }
        cutoff += 5;
    }
}

/// Dense Hermitian matrix of `spec` at time `t`; time-independent kinds ignore `t`.
pub fn build_hamiltonian(spec: &HamiltonianSpec, t: f64, space: FockSpace) -> OperatorMatrix {
    spec.coefficients(t).matrix(space)
}
