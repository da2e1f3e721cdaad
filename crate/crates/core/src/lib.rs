//! Randomly corrected product formulas.
//!
//! A symmetric Suzuki step `S_{2k}` is split into two halves and a random Pauli rotation is
//! inserted in between. The rotation is drawn from a small ensemble whose average cancels the
//! leading error terms, so the averaged channel is accurate to order `4k+1` while each sample
//! costs a single extra exponential.
//!
//! The pipeline is [`Hamiltonian`] → [`ExponentialSchedule`] → [`correction_series`] →
//! [`CorrectionEnsemble`], with [`metrics`] measuring the result on dense matrices.

pub mod bench;
pub mod bounds;
pub mod correction;
pub mod dense;
pub mod error;
pub mod fit;
pub mod hamiltonian;
pub mod metrics;
pub mod pauli;
pub mod sampler;
pub mod schedule;

pub use bounds::{apriori_bounds, TheoremBounds};
pub use correction::{correction_series, CorrectionSeries, CorrectionTerm};
pub use dense::DenseOperator;
pub use error::{Error, Result};
pub use hamiltonian::{Hamiltonian, HamiltonianStats, HamiltonianTerm, Model};
pub use pauli::{OperatorSeries, PauliPolynomial, PauliString, Phase, PhasedPauli};
pub use sampler::{CorrectionEnsemble, CorrectionEntry, SampledStep};
pub use schedule::ExponentialSchedule;
