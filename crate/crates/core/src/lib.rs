//! Numerical laboratory for periodic one-dimensional gravity-capillary water waves.
//!
//! The crate covers the dispersion relation, three-wave resonances, the cubic
//! Birkhoff normal form in complex coordinates, the truncated resonant
//! dynamics and a pseudo-spectral solver for the full free-boundary problem.

pub mod birkhoff;
pub mod error;
pub mod resonance;
pub mod resonant_flow;
pub mod spectra;
pub mod state;
pub mod transforms;
pub mod waterwaves;

pub use error::{Error, Result};
pub use spectra::{Depth, PhysicalParams};
pub use state::SpectralState;
