//! Cubic Birkhoff normal form in complex coordinates.
//!
//! Coefficient tables, Poisson brackets, Hamiltonian vector fields, the
//! projector onto resonant vector fields, the homological equation and a
//! real-variable oracle for the cubic coefficients.

pub mod homological;
pub mod io;
pub mod oracle;
pub mod poly;
pub mod table;

pub use homological::{solve_homological, solve_homological_auto, HomKey, HomologicalCoefficients, HomologicalSolution};
pub use io::{read_table, write_table};
pub use oracle::{expand_h3_from_real, max_coefficient_diff};
pub use poly::{h2_table, hamiltonian_vector_field, pi_ker, poisson_bracket, Monomial, PolyTable, VectorFieldTable};
pub use table::{
    assemble_cubic_hamiltonian, assemble_resonant_hamiltonian, gradient_zbar, h3_coefficient, hamiltonian_h2,
    CubicHamiltonian, CubicKey, CubicTerm,
};
