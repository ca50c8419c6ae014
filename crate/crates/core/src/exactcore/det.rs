//! Determinants and rank.
//!
//! Two independent determinant routes: Laplace expansion on rationals
//! (small n only, used as the oracle) and fraction-free Bareiss
//! elimination on an integer image of the matrix. Rank uses the same
//! fraction-free elimination in echelon form.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::ExactMatrix;
use crate::par::{self, Execution};
use crate::{Error, Result};

/// Largest size accepted by [`det_cofactor`].
pub const COFACTOR_MAX_N: usize = 8;

/// Rows below this count are eliminated sequentially even in parallel mode.
const PAR_MIN_ROWS: usize = 32;

/// Laplace expansion along the first remaining row.
pub fn det_cofactor(m: &ExactMatrix) -> Result<BigRational> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n > COFACTOR_MAX_N {
        return Err(Error::CofactorTooLarge { n, max: COFACTOR_MAX_N });
    }
    let cols: Vec<usize> = (0..n).collect();
    Ok(laplace(m, 0, &cols))
}

fn laplace(m: &ExactMatrix, row: usize, cols: &[usize]) -> BigRational {
    if cols.is_empty() {
        return BigRational::one();
    }
    let mut acc = BigRational::zero();
    for (k, &c) in cols.iter().enumerate() {
        let a = m.get(row, c);
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = a * laplace(m, row + 1, &rest);
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Clears denominators row by row. Returns the integer rows and the product
/// of the row multipliers, so `det(m) = det(int_rows) / scale`.
fn integer_image(m: &ExactMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
            scale *= &lcm;
            ints
        })
        .collect();
    (rows, scale)
}

/// Divisors below this many bits use plain long division.
const INVERSE_DIVISION_MIN_BITS: u64 = 2048;

/// Exact division by a fixed divisor `d = +/- 2^shift * u` (`u` odd) via a
/// 2-adic inverse of `u`: when `x / d` is known to be an integer, its
/// magnitude is `(|x| >> shift) * u^-1 mod 2^m` for any `m` exceeding the
/// quotient's bit length. Turns each division into one truncated product.
struct ExactDivisor {
    negative: bool,
    shift: u64,
    odd: BigUint,
    /// `u^-1 mod 2^precision`
    inverse: BigUint,
    precision: u64,
}

impl ExactDivisor {
    /// Divisor good for dividends of up to `max_bits` bits.
    fn new(divisor: &BigInt, max_bits: u64) -> Self {
        let mag = divisor.magnitude();
        let shift = mag.trailing_zeros().unwrap_or(0);
        let odd = mag >> shift;
        let precision = max_bits.saturating_sub(shift).max(1);
        let mut inverse = BigUint::one();
        let mut bits = 1u64;
        // Newton: inv <- inv * (2 - odd * inv), doubling correct bits
        while bits < precision {
            bits = (bits * 2).min(precision);
            let mask = low_mask(bits);
            let t = (&odd * &inverse) & &mask;
            // 2 - t mod 2^bits, kept nonnegative
            let correction = ((&mask + 3u32) - t) & &mask;
            inverse = (&inverse * correction) & mask;
        }
        Self { negative: divisor.sign() == Sign::Minus, shift, odd, inverse, precision }
    }

    fn divide(&self, x: BigInt) -> BigInt {
        let (sign, mut mag) = x.into_parts();
        if sign == Sign::NoSign {
            return BigInt::zero();
        }
        if self.shift > 0 {
            mag >>= self.shift;
        }
        let sign = if (sign == Sign::Minus) == (self.negative) { Sign::Plus } else { Sign::Minus };
        let m = (mag.bits() + 1).saturating_sub(self.odd.bits()).max(1);
        if m > self.precision {
            return BigInt::from_biguint(sign, mag / &self.odd);
        }
        let mask = low_mask(m);
        mag &= &mask;
        let mut q = mag * (&self.inverse & &mask);
        q &= mask;
        BigInt::from_biguint(sign, q)
    }
}

fn low_mask(bits: u64) -> BigUint {
    (BigUint::one() << bits) - 1u32
}

/// Elimination statistics reported by [`det_bareiss_stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EliminationStats {
    /// Largest bit length of any integer intermediate.
    pub max_bits: u64,
}

/// Exact determinant by fraction-free elimination.
pub fn det_bareiss(m: &ExactMatrix) -> Result<BigRational> {
    det_bareiss_with(m, Execution::default()).map(|(d, _)| d)
}

pub fn det_bareiss_stats(m: &ExactMatrix, exec: Execution) -> Result<(BigRational, EliminationStats)> {
    det_bareiss_with(m, exec)
}

/// Bareiss elimination: pivot on the first row with a nonzero candidate,
/// swap it up and track the sign. Row updates below the pivot run in
/// parallel when `exec` allows it.
pub fn det_bareiss_with(m: &ExactMatrix, exec: Execution) -> Result<(BigRational, EliminationStats)> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let (mut a, scale) = integer_image(m);
    let mut stats = EliminationStats {
        max_bits: a.iter().flatten().map(BigInt::bits).max().unwrap_or(0).max(scale.bits()),
    };
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok((BigRational::zero(), stats));
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = &pivot_row[k];
        let divisor = if prev.bits() >= INVERSE_DIVISION_MIN_BITS {
            let widest = |rows: &[Vec<BigInt>]| {
                rows.iter().flat_map(|r| r[k..].iter()).map(BigInt::bits).max().unwrap_or(0)
            };
            let bound = widest(tail).max(widest(std::slice::from_ref(pivot_row))) * 2 + 2;
            Some(ExactDivisor::new(&prev, bound))
        } else {
            None
        };
        let prev_ref = &prev;
        let divide = |x: BigInt| match &divisor {
            Some(d) => d.divide(x),
            None => x / prev_ref,
        };
        let update = |row: &mut Vec<BigInt>| {
            let lead = std::mem::take(&mut row[k]);
            if lead.is_zero() {
                // row[j] * pivot / prev, still exact
                for x in row[k + 1..].iter_mut() {
                    if !x.is_zero() {
                        *x = divide(&*x * pivot);
                    }
                }
            } else {
                for (x, pk) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                    *x = divide(&*x * pivot - &lead * pk);
                }
            }
        };
        let exec = if tail.len() >= PAR_MIN_ROWS { exec } else { Execution::Sequential };
        par::for_each_mut(exec, tail, update);
        let step_bits = tail.iter().flat_map(|r| r[k + 1..].iter()).map(BigInt::bits).max().unwrap_or(0);
        stats.max_bits = stats.max_bits.max(step_bits);
        prev = head[k][k].clone();
    }
    let det_int = if n == 0 { BigInt::one() } else { prev };
    let mut det = BigRational::new(det_int, scale);
    if negate {
        det = -det;
    }
    Ok((det, stats))
}

/// Rank over the rationals by fraction-free row echelon reduction.
pub fn rank_fraction_free(m: &ExactMatrix) -> usize {
    let (mut a, _) = integer_image(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for (x, pk) in row[c + 1..].iter_mut().zip(&pivot_row[c + 1..]) {
                *x = (&*x * pivot - &lead * pk) / &prev;
            }
        }
        prev = pivot.clone();
        rank += 1;
    }
    rank
}
