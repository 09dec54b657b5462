//! Exact entanglement spectra of a contiguous block in the spin-S AKLT chain.
//!
//! The crate has two halves that are meant to be played against each other:
//!
//! - [`angular`], [`spectrum`] and [`entropy`] evaluate the block density
//!   matrix eigenvalues Λ(J) in exact rational arithmetic, by a three-term
//!   polynomial recurrence and by a closed triple sum over Wigner 3j squares.
//! - [`oracle`] builds the valence-bond-solid state in the Schwinger-boson
//!   Fock basis, traces out the environment and diagonalises numerically.
//!   For spin 1 it also carries an independent Pauli-string representation.
//!
//! Spins are carried as [`TwiceSpin`] so that the spin-S/2 chain ends are
//! exact integers.

pub mod angular;
pub mod entropy;
pub mod error;
pub mod oracle;
pub mod spectrum;

pub use angular::{SignedSqrtRational, TwiceSpin};
pub use error::{Error, Result};
pub use num_rational::BigRational;
pub use spectrum::{BlockSpectrum, Eigenvalue, Method};
