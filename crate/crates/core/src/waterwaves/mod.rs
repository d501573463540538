//! Full free-boundary problem: grid, Dirichlet-Neumann expansion, time
//! integration and the lifespan experiment.

pub mod dno;
pub mod grid;
pub mod lifespan;
pub mod solver;

pub use dno::{dno_apply, dno_apply_hat, dno_terms, MAX_ORDER};
pub use grid::Grid;
pub use lifespan::{fit_exponent, lifespan_experiment, seed_state, ExponentFit, LifespanConfig, LifespanResult, LifespanRow};
pub use solver::{integrate_ww, HatState, Solver, SolverConfig, WaveState, WwRecord, WwStatus, WwTrajectory};
