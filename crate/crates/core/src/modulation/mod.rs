//! Sideband bookkeeping for the modulated atom.
//!
//! Modulating the atomic frequency as `ω₀ + ξ v cos(v t)` splits every
//! coupling into Bessel-weighted sidebands `g J_n(ξ)` spaced by `v`. The
//! counter-rotating sideband closest to resonance, index `m₀`, survives the
//! first rotating-wave approximation together with the carrier of the
//! rotating terms; the resulting couplings and frequencies are collected in
//! [`EffectiveParams`].

mod bessel;

pub use bessel::{bessel_j, bessel_j_range, MAX_ARG, MAX_ORDER};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Outcome of the `m₀` search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SidebandSelection {
    pub m0: i64,
    /// Two indices reached the same `|Δ_m|`; the smaller `|m|` was taken.
    pub tie: bool,
}

/// `Δ_m = ω₀ + ω_c + m v`
pub fn sideband_detuning(p: &ModelParams, m: i64) -> f64 {
    p.omega0() + p.omega_c() + m as f64 * p.v()
}

/// Integer `m` minimizing `|ω₀ + ω_c + m v|`.
pub fn select_m0(p: &ModelParams) -> SidebandSelection {
    let target = -(p.omega0() + p.omega_c()) / p.v();
    let lo = target.floor() as i64;
    let hi = lo + 1;
    let d_lo = sideband_detuning(p, lo).abs();
    let d_hi = sideband_detuning(p, hi).abs();
    if d_lo < d_hi {
        SidebandSelection { m0: lo, tie: false }
    } else if d_hi < d_lo {
        SidebandSelection { m0: hi, tie: false }
    } else {
        let m0 = if lo.abs() <= hi.abs() { lo } else { hi };
        log::warn!("sideband tie between m = {lo} and m = {hi}; using {m0}");
        SidebandSelection { m0, tie: true }
    }
}

/// Notes attached to derived quantities that the analysis does not cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Advisory {
    /// `m₀` was chosen by the tie-break rule.
    SidebandTie,
    /// `Δ_{m₀}`, `ω̃₀` or `ω̃_c` is negative.
    NegativeFrequency,
    /// Two candidate ground states are degenerate; the lower photon number won.
    Degenerate,
}

/// Effective model in the second rotating frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveParams {
    pub m0: i64,
    /// `Δ_{m₀} = ω₀ + ω_c + m₀ v`
    pub delta_m0: f64,
    /// `g J₀(ξ)`
    pub g_r: f64,
    /// `g J_{m₀}(ξ)`
    pub g_c: f64,
    /// `ω̃₀ = (Δ_{m₀} + δ)/2`
    pub omega0_eff: f64,
    /// `ω̃_c = (Δ_{m₀} − δ)/2`
    pub omega_c_eff: f64,
    /// `ω̃₀ − ω̃_c`, identical to the lab detuning.
    pub delta_eff: f64,
    pub advisories: Vec<Advisory>,
}

impl EffectiveParams {
    pub fn has(&self, advisory: Advisory) -> bool {
        self.advisories.contains(&advisory)
    }

    /// `g_r / ω̃_c`
    pub fn rotating_ratio_cavity(&self) -> f64 {
        self.g_r / self.omega_c_eff
    }

    /// `g_r / ω̃₀`
    pub fn rotating_ratio_atom(&self) -> f64 {
        self.g_r / self.omega0_eff
    }

    /// `|g_c| / |Δ_{m₀}|`
    pub fn counter_rotating_ratio(&self) -> f64 {
        self.g_c.abs() / self.delta_m0.abs()
    }
}

pub fn effective_params(p: &ModelParams) -> EffectiveParams {
    let sel = select_m0(p);
    let delta = p.delta();
    let delta_m0 = sideband_detuning(p, sel.m0);
    let xi = p.xi();
    let g_r = p.g() * bessel_in_envelope(0, xi);
    let g_c = p.g() * bessel_in_envelope(sel.m0, xi);
    let omega0_eff = (delta_m0 + delta) / 2.0;
    let omega_c_eff = (delta_m0 - delta) / 2.0;

    let mut advisories = Vec::new();
    if sel.tie {
        advisories.push(Advisory::SidebandTie);
    }
    if delta_m0 < 0.0 || omega0_eff < 0.0 || omega_c_eff < 0.0 {
        advisories.push(Advisory::NegativeFrequency);
    }
    EffectiveParams {
        m0: sel.m0,
        delta_m0,
        g_r,
        g_c,
        omega0_eff,
        omega_c_eff,
        delta_eff: delta,
        advisories,
    }
}

/// `ModelParams` caps ξ at the Bessel envelope, where orders beyond it weigh
/// less than 1e-60; those are treated as zero.
fn bessel_in_envelope(m: i64, xi: f64) -> f64 {
    if m.unsigned_abs() > MAX_ORDER as u64 {
        return 0.0;
    }
    bessel_j(m as i32, xi).expect("xi validated by ModelParams")
}

/// Modulation frequency `v = −(ω₀ + ω_c)/m₀` at which the current branch has
/// `Δ_{m₀} = 0`.
pub fn zero_point(p: &ModelParams) -> Result<f64> {
    let m0 = select_m0(p).m0;
    zero_point_for(p, m0)
}

pub fn zero_point_for(p: &ModelParams, m0: i64) -> Result<f64> {
    if m0 == 0 {
        return Err(Error::M0Zero);
    }
    Ok(-(p.omega0() + p.omega_c()) / m0 as f64)
}

/// One rotating-wave condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RwaCheck {
    pub ratio: f64,
    pub pass: bool,
}

/// Validity of the two rotating-wave approximations.
///
/// The first-frame conditions require `v` to dominate `|δ|`, `|Δ_{m₀}|` and
/// `g` by `threshold`; since `|J_n| ≤ 1`, `v ≫ g` covers every sideband
/// coupling. The second-frame condition asks `|g_c|/|Δ_{m₀}|` to stay at or
/// below `1/(10·threshold)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RwaReport {
    pub threshold: f64,
    /// `v/|δ|`; absent at resonance.
    pub v_over_delta: Option<RwaCheck>,
    pub v_over_delta_m0: RwaCheck,
    pub v_over_g: RwaCheck,
    pub gc_over_delta_m0: RwaCheck,
}

impl RwaReport {
    /// All first-frame conditions hold.
    pub fn first_frame_ok(&self) -> bool {
        self.v_over_delta.map_or(true, |c| c.pass)
            && self.v_over_delta_m0.pass
            && self.v_over_g.pass
    }

    pub fn second_frame_ok(&self) -> bool {
        self.gc_over_delta_m0.pass
    }
}

pub const DEFAULT_RWA_THRESHOLD: f64 = 10.0;

pub fn rwa_report(p: &ModelParams, threshold: f64) -> RwaReport {
    let eff = effective_params(p);
    let v = p.v();
    let at_least = |ratio: f64| RwaCheck {
        ratio,
        pass: ratio >= threshold,
    };
    let v_over_delta = (p.delta() != 0.0).then(|| at_least(v / p.delta().abs()));
    let gc_ratio = eff.counter_rotating_ratio();
    RwaReport {
        threshold,
        v_over_delta,
        v_over_delta_m0: at_least(v / eff.delta_m0.abs()),
        v_over_g: at_least(v / p.g()),
        gc_over_delta_m0: RwaCheck {
            ratio: gc_ratio,
            pass: gc_ratio <= 1.0 / (10.0 * threshold),
        },
    }
}

/// One row of a ξ sweep of the relative couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioSample {
    pub xi: f64,
    pub gr_over_omega_c: f64,
    pub gr_over_omega0: f64,
    pub gc_over_delta_m0: f64,
}

pub fn ratio_sweep(base: &ModelParams, xi_grid: &[f64]) -> Result<Vec<RatioSample>> {
    xi_grid
        .iter()
        .map(|&xi| {
            let eff = effective_params(&base.with_xi(xi)?);
            Ok(RatioSample {
                xi,
                gr_over_omega_c: eff.rotating_ratio_cavity(),
                gr_over_omega0: eff.rotating_ratio_atom(),
                gc_over_delta_m0: eff.counter_rotating_ratio(),
            })
        })
        .collect()
}

/// Values of ξ in `[xi_lo, xi_hi]` where `|g_c|/|Δ_{m₀}|` crosses `level`,
/// from a scan with step `resolution` refined by bisection to 1e-10.
pub fn counter_rotating_crossings(
    base: &ModelParams,
    xi_lo: f64,
    xi_hi: f64,
    level: f64,
    resolution: f64,
) -> Result<Vec<f64>> {
    if !(xi_hi > xi_lo) || !(resolution > 0.0) {
        return Err(Error::InvalidParams(
            "empty ξ range or non-positive resolution".into(),
        ));
    }
    let f = |xi: f64| -> Result<f64> {
        Ok(effective_params(&base.with_xi(xi)?).counter_rotating_ratio() - level)
    };
    let steps = ((xi_hi - xi_lo) / resolution).ceil() as usize;
    let mut out = Vec::new();
    let mut a = xi_lo;
    let mut fa = f(a)?;
    for k in 1..=steps {
        let b = (xi_lo + k as f64 * resolution).min(xi_hi);
        let fb = f(b)?;
        if fa == 0.0 {
            out.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid)?;
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    Ok(out)
}
