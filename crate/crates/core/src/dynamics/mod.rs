//! Time evolution of the lab-frame, rotating-frame and effective models.

mod fidelity;
mod frames;
mod hamiltonian;
mod propagate;

pub use fidelity::{
    fidelity_trace, fidelity_trace_with, superposed_coherent_state, time_grid, FidelityRun,
    FidelitySummary, FidelityTrace, Frame, Window, DEFAULT_SAMPLES,
};
pub use frames::{frame_transform_u1, frame_transform_u2};
pub use hamiltonian::{
    build_hamiltonian, default_bessel_cutoff, HamiltonianKind, HamiltonianSpec, RabiCoefficients,
    SIDEBAND_TAIL,
};
pub use propagate::{propagate, propagate_with, CoefficientSource, PropagationOptions, Trajectory};
