//! Pauli-string algebra: phase-free strings, complex Pauli polynomials and
//! truncated operator power series in a formal step parameter.

mod polynomial;
mod series;
mod string;

pub use polynomial::{PauliPolynomial, PolyTermJson, PRUNE_RELATIVE};
pub use series::OperatorSeries;
pub use string::{Letter, PauliString, Phase, PhasedPauli};
