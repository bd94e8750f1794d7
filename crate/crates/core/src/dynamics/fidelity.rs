use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use serde::Serialize;

use crate::csvio::{fmt_num, CsvDocument};
use crate::error::{Error, Result};
use crate::fockspace::{coherent_state, FockSpace, StateVector, C64};
use crate::model::ModelParams;
use crate::modulation::effective_params;

use super::hamiltonian::{HamiltonianKind, HamiltonianSpec};
use super::propagate::{propagate_with, PropagationOptions, Trajectory};

pub const DEFAULT_SAMPLES: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelitySummary {
    pub min: f64,
    #[serde(rename = "final")]
    pub final_value: f64,
    pub argmin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityTrace {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub summary: FidelitySummary,
}

impl FidelityTrace {
    fn from_values(times: Vec<f64>, values: Vec<f64>) -> Self {
        let (argmin, min) =
            times
                .iter()
                .zip(&values)
                .fold((times[0], values[0]), |best, (&t, &f)| {
                    if f < best.1 {
                        (t, f)
                    } else {
                        best
                    }
                });
        let final_value = *values.last().expect("grid is non-empty");
        Self {
            times,
            values,
            summary: FidelitySummary {
                min,
                final_value,
                argmin,
            },
        }
    }

    pub fn to_csv(&self) -> CsvDocument {
        let mut doc = CsvDocument::new(&["t", "F"]);
        doc.meta("f_min", fmt_num(self.summary.min))
            .meta("f_final", fmt_num(self.summary.final_value))
            .meta("t_argmin", fmt_num(self.summary.argmin));
        for (t, f) in self.times.iter().zip(&self.values) {
            doc.push_row(vec![fmt_num(*t), fmt_num(*f)]);
        }
        doc
    }
}

/// `F(t) = |⟨ψ_A(t)|ψ_B(t)⟩|²` with both runs started from `psi0`.
pub fn fidelity_trace(
    spec_a: &HamiltonianSpec,
    spec_b: &HamiltonianSpec,
    psi0: &StateVector,
    t_grid: &[f64],
) -> Result<FidelityTrace> {
    fidelity_trace_with(spec_a, spec_b, psi0, t_grid, &PropagationOptions::default())
}

pub fn fidelity_trace_with(
    spec_a: &HamiltonianSpec,
    spec_b: &HamiltonianSpec,
    psi0: &StateVector,
    t_grid: &[f64],
    opts: &PropagationOptions,
) -> Result<FidelityTrace> {
    let (a, b) = rayon::join(
        || propagate_with(spec_a, psi0, t_grid, opts),
        || propagate_with(spec_b, psi0, t_grid, opts),
    );
    Ok(trace_from(&a?, &b?))
}

fn trace_from(a: &Trajectory, b: &Trajectory) -> FidelityTrace {
    let values = a
        .states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| x.fidelity(y))
        .collect();
    FidelityTrace::from_values(a.times.clone(), values)
}

/// Which pair of descriptions to compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    /// Full sideband sum against carrier plus `m₀` sideband.
    First,
    /// Anisotropic Rabi model against the effective JC model.
    Second,
}

impl Frame {
    /// The exact and approximate descriptions, in that order. `bessel_cutoff`
    /// overrides the default sideband cutoff of the first frame.
    pub fn specs(
        &self,
        p: ModelParams,
        bessel_cutoff: Option<u32>,
    ) -> Result<(HamiltonianSpec, HamiltonianSpec)> {
        Ok(match self {
            Frame::First => (
                match bessel_cutoff {
                    Some(c) => HamiltonianSpec::new(
                        HamiltonianKind::RotFrameExact { bessel_cutoff: c },
                        p,
                    )?,
                    None => HamiltonianSpec::rot_frame_exact(p)?,
                },
                HamiltonianSpec::new(HamiltonianKind::EffFirstFrame, p)?,
            ),
            Frame::Second => (
                HamiltonianSpec::new(HamiltonianKind::AnisoRabi, p)?,
                HamiltonianSpec::new(HamiltonianKind::EffJC, p)?,
            ),
        })
    }

    /// One modulation period for the first frame, one effective vacuum Rabi
    /// period for the second.
    pub fn default_window(&self) -> Window {
        match self {
            Frame::First => Window::ModulationPeriods(1.0),
            Frame::Second => Window::RabiPeriods(1.0),
        }
    }
}

/// Length of the simulated interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "unit", content = "count")]
pub enum Window {
    /// Multiples of `2π/v`.
    ModulationPeriods(f64),
    /// Multiples of `2π/|g_r|`.
    RabiPeriods(f64),
    /// Absolute duration in `1/ω_c`.
    Duration(f64),
}

impl Window {
    pub fn duration(&self, p: &ModelParams) -> Result<f64> {
        let t = match *self {
            Window::ModulationPeriods(k) => k * TAU / p.v(),
            Window::RabiPeriods(k) => {
                let g_r = effective_params(p).g_r;
                if g_r == 0.0 {
                    return Err(Error::InvalidParams(
                        "g_r = 0: the effective Rabi period is infinite".into(),
                    ));
                }
                k * TAU / g_r.abs()
            }
            Window::Duration(t) => t,
        };
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "window length {t} must be positive"
            )));
        }
        Ok(t)
    }
}

/// `samples` equally spaced times from 0 to `t_end` inclusive.
pub fn time_grid(t_end: f64, samples: usize) -> Result<Vec<f64>> {
    if samples < 2 || !(t_end > 0.0) {
        return Err(Error::InvalidParams(format!(
            "need at least 2 samples over a positive window (got {samples} over {t_end})"
        )));
    }
    let last = (samples - 1) as f64;
    Ok((0..samples).map(|k| t_end * k as f64 / last).collect())
}

/// `(|g⟩ + |e⟩)/√2 ⊗ |α⟩`
pub fn superposed_coherent_state(space: FockSpace, alpha: C64) -> Result<StateVector> {
    let cavity = coherent_state(alpha, space.n_max())?;
    let half = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::product(space, [half, half], &cavity)
}

/// A complete fidelity comparison at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityRun {
    pub frame: Frame,
    pub params: ModelParams,
    pub window: Window,
    pub samples: usize,
    pub alpha: C64,
    pub n_max: u32,
    pub bessel_cutoff: Option<u32>,
    pub options: PropagationOptions,
}

impl FidelityRun {
    pub fn new(frame: Frame, params: ModelParams) -> Self {
        Self {
            frame,
            params,
            window: frame.default_window(),
            samples: DEFAULT_SAMPLES,
            alpha: C64::new(0.1, 0.0),
            n_max: 8,
            bessel_cutoff: None,
            options: PropagationOptions::default(),
        }
    }

    pub fn run(&self) -> Result<FidelityTrace> {
        let (a, b) = self.frame.specs(self.params, self.bessel_cutoff)?;
        let space = FockSpace::new(self.n_max)?;
        let psi0 = superposed_coherent_state(space, self.alpha)?;
        let grid = time_grid(self.window.duration(&self.params)?, self.samples)?;
        fidelity_trace_with(&a, &b, &psi0, &grid, &self.options)
    }
}
