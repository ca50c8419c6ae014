//! Exact rational arithmetic and dense-matrix kernels.

mod det;
mod matrix;
mod rational;

pub use det::{
    det_bareiss, det_bareiss_stats, det_bareiss_with, det_cofactor, rank_fraction_free, EliminationStats,
    COFACTOR_MAX_N,
};
pub use matrix::ExactMatrix;
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
pub use rational::{bit_length, format_rat, parse_rat, parse_rat_canonical, rat_int, rat_make, rat_pow, sign_pow};

/// Exact determinant: cofactor expansion up to [`COFACTOR_MAX_N`], Bareiss
/// beyond.
pub fn det_oracle(m: &ExactMatrix) -> crate::Result<BigRational> {
    if m.rows() <= COFACTOR_MAX_N {
        det_cofactor(m)
    } else {
        det_bareiss(m)
    }
}
