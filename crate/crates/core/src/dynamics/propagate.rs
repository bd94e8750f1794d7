use std::f64::consts::TAU;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::fockspace::{diagonalize, FockSpace, StateVector, C64};

use super::hamiltonian::{HamiltonianSpec, RabiCoefficients};

/// Largest `‖H‖·τ` handed to the Taylor series in one slice.
const TAYLOR_SLICE: f64 = 0.5;
const TAYLOR_MAX_TERMS: usize = 60;

/// Something that yields Rabi-form coefficients as a function of time.
pub trait CoefficientSource: Sync {
    fn coefficients_at(&self, t: f64) -> RabiCoefficients;
    fn is_time_dependent(&self) -> bool;
    /// Coarsest step the convergence guard starts from.
    fn base_step(&self, steps_per_period: u32) -> f64;
}

impl CoefficientSource for HamiltonianSpec {
    fn coefficients_at(&self, t: f64) -> RabiCoefficients {
        self.coefficients(t)
    }

    fn is_time_dependent(&self) -> bool {
        HamiltonianSpec::is_time_dependent(self)
    }

    fn base_step(&self, steps_per_period: u32) -> f64 {
        self.default_step(steps_per_period)
    }
}

impl CoefficientSource for RabiCoefficients {
    fn coefficients_at(&self, _t: f64) -> RabiCoefficients {
        *self
    }

    fn is_time_dependent(&self) -> bool {
        false
    }

    fn base_step(&self, _steps_per_period: u32) -> f64 {
        TAU
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationOptions {
    pub steps_per_period: u32,
    /// Largest amplitude change tolerated between a run and its halved-step rerun.
    pub tolerance: f64,
    pub max_halvings: u32,
}

impl Default for PropagationOptions {
    fn default() -> Self {
        Self {
            steps_per_period: 200,
            tolerance: 1e-8,
            max_halvings: 12,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    /// Halvings applied to the base step; 0 for exact evolution.
    pub halvings: u32,
    /// Last amplitude change seen by the convergence guard.
    pub guard_deviation: f64,
    /// `max |‖ψ(t)‖ − 1|` over the grid.
    pub norm_drift: f64,
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    match t_grid.first() {
        None => return Err(Error::InvalidParams("empty time grid".into())),
        Some(&t0) if t0 != 0.0 => {
            return Err(Error::InvalidParams(format!(
                "time grid starts at {t0}, not 0"
            )))
        }
        _ => {}
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) || t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParams(
            "time grid must be finite and strictly ascending".into(),
        ));
    }
    Ok(())
}

pub fn propagate<S: CoefficientSource>(
    spec: &S,
    psi0: &StateVector,
    t_grid: &[f64],
) -> Result<Trajectory> {
    propagate_with(spec, psi0, t_grid, &PropagationOptions::default())
}

/// Evolves `psi0` and reports the state at every grid time.
///
/// Time-independent sources are evolved exactly through one
/// diagonalization. Time-dependent sources use midpoint-exponential steps;
/// the run is repeated with the step halved until two successive runs agree
/// amplitude-wise to `opts.tolerance`, and the finer run is returned.
pub fn propagate_with<S: CoefficientSource>(
    spec: &S,
    psi0: &StateVector,
    t_grid: &[f64],
    opts: &PropagationOptions,
) -> Result<Trajectory> {
    check_grid(t_grid)?;
    let space = psi0.space();
    if !spec.is_time_dependent() {
        let states = evolve_exact(&spec.coefficients_at(0.0), psi0, t_grid)?;
        return Ok(finish(t_grid, states, 0, 0.0));
    }

    let h0 = spec.base_step(opts.steps_per_period);
    let base: Vec<usize> = t_grid
        .windows(2)
        .map(|w| (((w[1] - w[0]) / h0) - 1e-9).ceil().max(1.0) as usize)
        .collect();

    let mut coarse = evolve_midpoint(spec, space, psi0, t_grid, &base, 0);
    let mut level = 1;
    loop {
        let fine = evolve_midpoint(spec, space, psi0, t_grid, &base, level);
        let deviation = max_amplitude_change(&coarse, &fine);
        if deviation <= opts.tolerance {
            let states = fine
                .into_iter()
                .map(|amps| StateVector::from_unitary_image(space, amps))
                .collect();
            return Ok(finish(t_grid, states, level, deviation));
        }
        if level >= opts.max_halvings {
            return Err(Error::StepTooLarge {
                deviation,
                tolerance: opts.tolerance,
                halvings: level,
            });
        }
        log::debug!("step halving {level}: amplitude change {deviation:.3e}");
        coarse = fine;
        level += 1;
    }
}

fn finish(
    times: &[f64],
    states: Vec<StateVector>,
    halvings: u32,
    guard_deviation: f64,
) -> Trajectory {
    let norm_drift = states
        .iter()
        .map(|s| (s.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    Trajectory {
        times: times.to_vec(),
        states,
        halvings,
        guard_deviation,
        norm_drift,
    }
}

fn max_amplitude_change(a: &[DVector<C64>], b: &[DVector<C64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y.iter()).map(|(p, q)| (p - q).norm()))
        .fold(0.0, f64::max)
}

fn evolve_exact(
    c: &RabiCoefficients,
    psi0: &StateVector,
    t_grid: &[f64],
) -> Result<Vec<StateVector>> {
    let space = psi0.space();
    let eig = diagonalize(&c.matrix(space))?;
    let projections = eig.vectors.adjoint() * psi0.amplitudes();
    Ok(t_grid
        .iter()
        .map(|&t| {
            let rotated = DVector::from_fn(projections.len(), |k, _| {
                projections[k] * C64::from_polar(1.0, -eig.values[k] * t)
            });
            StateVector::from_unitary_image(space, &eig.vectors * rotated)
        })
        .collect())
}

fn evolve_midpoint<S: CoefficientSource>(
    spec: &S,
    space: FockSpace,
    psi0: &StateVector,
    t_grid: &[f64],
    base: &[usize],
    level: u32,
) -> Vec<DVector<C64>> {
    let mut psi: Vec<C64> = psi0.amplitudes().iter().copied().collect();
    let mut work = TaylorWork::new(space.dim());
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(psi0.amplitudes().clone());
    for (k, w) in t_grid.windows(2).enumerate() {
        let substeps = base[k] << level;
        let h = (w[1] - w[0]) / substeps as f64;
        for j in 0..substeps {
            let mid = w[0] + (j as f64 + 0.5) * h;
            work.exp_apply(&spec.coefficients_at(mid), space, h, &mut psi);
        }
        out.push(DVector::from_column_slice(&psi));
    }
    out
}

struct TaylorWork {
    term: Vec<C64>,
    next: Vec<C64>,
}

impl TaylorWork {
    fn new(dim: usize) -> Self {
        Self {
            term: vec![C64::new(0.0, 0.0); dim],
            next: vec![C64::new(0.0, 0.0); dim],
        }
    }

    /// `psi ← exp(−iHτ) psi` by a truncated Taylor series on slices short
    /// enough that `‖H‖·slice ≤ 0.5`.
    fn exp_apply(&mut self, c: &RabiCoefficients, space: FockSpace, tau: f64, psi: &mut [C64]) {
        let slices = (c.norm_bound(space) * tau.abs() / TAYLOR_SLICE)
            .ceil()
            .max(1.0) as usize;
        let dt = tau / slices as f64;
        for _ in 0..slices {
            self.term.copy_from_slice(psi);
            for k in 1..=TAYLOR_MAX_TERMS {
                c.apply(space, &self.term, &mut self.next);
                let factor = C64::new(0.0, -dt / k as f64);
                let mut size = 0.0;
                for (t, n) in self.term.iter_mut().zip(&self.next) {
                    *t = n * factor;
                    size += t.norm_sqr();
                }
                for (p, t) in psi.iter_mut().zip(&self.term) {
                    *p += t;
                }
                if size < 1e-34 {
                    break;
                }
            }
        }
    }
}
