use nalgebra::DVector;

use crate::fockspace::{AtomLevel, StateVector, C64};
use crate::model::ModelParams;
use crate::modulation::EffectiveParams;

fn diagonal_phase(state: &StateVector, phase: impl Fn(u32, AtomLevel) -> f64) -> StateVector {
    let space = state.space();
    let amps = DVector::from_fn(space.dim(), |i, _| {
        let (n, level) = space.decode(i);
        state.amplitudes()[i] * C64::from_polar(1.0, phase(n, level))
    });
    StateVector::from_unitary_image(space, amps)
}

/// Lab-frame state mapped into the first rotating frame, `U₁(t)†ψ`, with
/// `U₁(t) = exp[−i(φ(t)σ_z + ω_c t a†a)]` and `φ(t) = [ω₀t + ξ sin(vt)]/2`.
pub fn frame_transform_u1(state: &StateVector, t: f64, p: &ModelParams) -> StateVector {
    let phi = 0.5 * (p.omega0() * t + p.xi() * (p.v() * t).sin());
    let wc_t = p.omega_c() * t;
    diagonal_phase(state, |n, level| level.sigma_z() * phi + wc_t * n as f64)
}

/// First-frame state mapped into the second rotating frame, `U₂(t)†ψ`, with
/// `U₂(t) = exp[i(ω̃_c a†a + ω̃₀σ_z/2)t]`.
pub fn frame_transform_u2(state: &StateVector, t: f64, eff: &EffectiveParams) -> StateVector {
    diagonal_phase(state, |n, level| {
        -(eff.omega_c_eff * n as f64 + 0.5 * eff.omega0_eff * level.sigma_z()) * t
    })
}
