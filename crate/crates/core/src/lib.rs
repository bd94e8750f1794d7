//! Frequency-modulated quantum Rabi model and its effective deep-strong
//! Jaynes–Cummings description.
//!
//! All frequencies and couplings are in units of the cavity frequency ω_c;
//! times are in units of 1/ω_c.

pub mod cli;
pub mod csvio;
pub mod dynamics;
pub mod error;
pub mod fockspace;
pub mod model;
pub mod modulation;
pub mod phases;
pub mod spectrum;

pub use error::{Error, Result};
pub use model::ModelParams;
