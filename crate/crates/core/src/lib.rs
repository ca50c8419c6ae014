//! Exact-arithmetic toolkit for Cauchy-type structured matrices.
//!
//! The crate builds Cauchy, Hilbert, Toeplitz and the sequence-driven
//! families `A_n`, `B_n`, `C` and the blocked `[C | D]` matrix over the
//! rationals, evaluates closed-form determinant formulas for them, and
//! checks every formula against fraction-free elimination.
//!
//! Layout:
//! - [`exactcore`]: rationals, dense matrices, cofactor and Bareiss
//!   determinants, fraction-free rank.
//! - [`families`]: sequences `a_l` and the matrix constructors.
//! - [`closedform`]: closed-form determinants split into a scalar
//!   prefactor and a structural product of differences.
//! - [`verifier`]: oracle sweeps, prefactor resolution and reports.
//! - [`par`]: execution mode switch; rayon behind the `parallel` feature.

pub mod closedform;
mod error;
pub mod exactcore;
pub mod families;
pub mod par;
pub mod verifier;

pub use error::{Error, Result};
pub use exactcore::{BigInt, BigRational, ExactMatrix};
pub use families::SequenceSpec;
pub use par::Execution;
