//! Finite-matrix laboratory for entanglement decay of the lattice Dirac ground state.
//!
//! The pipeline runs bottom-up:
//!
//! * [`clifford`]: gamma matrices, charge conjugation, chirality and time reversal.
//! * [`lattice`]: Dirac and Lichnerowicz operators on flat periodic tori, regions and cutoffs.
//! * [`quasifree`]: the ground-state symbol `Σ₀ = H/|H|` and its restrictions.
//! * [`modular`]: restricted one-particle modular data and its norm identities.
//! * [`bounds`]: the cut-operator trace norm, appendix decay norms and rate fits.
//! * [`gaussian_ref`]: region entropies and mutual information as an independent observable.
//! * [`cli`]: the configuration-driven scan runner behind the binary.

pub mod bounds;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod gaussian_ref;
pub mod lattice;
pub mod linalg;
pub mod modular;
pub mod quasifree;

pub use error::{Error, Result};
