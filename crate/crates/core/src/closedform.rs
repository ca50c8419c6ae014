//! Closed-form determinants.
//!
//! Each formula is split into a structural product of differences and a
//! scalar prefactor. Two prefactors are carried: the constant as printed in
//! the source formula, and the constant recomputed from its derivation. The
//! verifier decides which one the elimination oracle agrees with.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactcore::{rat_pow, sign_pow, ExactMatrix};
use crate::families::{check_cauchy_nodes, IndexSelection, Sequence, SequenceSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cauchy,
    Hilbert,
    Amatrix,
    Cprime,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Cauchy => "cauchy",
            Family::Hilbert => "hilbert",
            Family::Amatrix => "amatrix",
            Family::Cprime => "cprime",
        }
    }
}

/// `prefactor * structural`, with both candidate prefactors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralDet {
    pub family: Family,
    pub structural: BigRational,
    pub printed_prefactor: BigRational,
    pub derived_prefactor: BigRational,
}

impl StructuralDet {
    pub fn printed_value(&self) -> BigRational {
        &self.printed_prefactor * &self.structural
    }

    pub fn derived_value(&self) -> BigRational {
        &self.derived_prefactor * &self.structural
    }
}

/// Running product kept as separate numerator and denominator, reduced
/// once at the end. Multiplies through a balanced tree.
#[derive(Default)]
struct Product {
    num: Vec<BigInt>,
    den: Vec<BigInt>,
}

impl Product {
    fn mul(&mut self, x: &BigRational) {
        self.num.push(x.numer().clone());
        self.den.push(x.denom().clone());
    }

    fn div(&mut self, x: &BigRational) {
        self.num.push(x.denom().clone());
        self.den.push(x.numer().clone());
    }

    fn finish(self) -> BigRational {
        BigRational::new(tree_product(self.num), tree_product(self.den))
    }
}

fn tree_product(mut v: Vec<BigInt>) -> BigInt {
    if v.is_empty() {
        return BigInt::one();
    }
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a * b,
                None => a,
            });
        }
        v = next;
    }
    v.pop().unwrap()
}

/// `prod_{i<j} (x_j - x_i)(y_i - y_j) / prod_{i,j} (x_i - y_j)`.
fn cauchy_structural(xs: &[BigRational], ys: &[BigRational]) -> BigRational {
    let n = xs.len();
    let mut p = Product::default();
    for j in 0..n {
        for i in 0..j {
            p.mul(&(&xs[j] - &xs[i]));
            p.mul(&(&ys[i] - &ys[j]));
        }
    }
    for x in xs {
        for y in ys {
            p.div(&(x - y));
        }
    }
    p.finish()
}

/// Cauchy determinant. The printed numerator `prod_{i<j}(x_i-x_j)(y_i-y_j)`
/// differs from the determinant by `(-1)^(n(n-1)/2)`; the derived prefactor
/// is 1.
pub fn cauchy_det_closed(xs: &[BigRational], ys: &[BigRational]) -> Result<StructuralDet> {
    check_cauchy_nodes(xs, ys)?;
    let n = xs.len() as u64;
    Ok(StructuralDet {
        family: Family::Cauchy,
        structural: cauchy_structural(xs, ys),
        printed_prefactor: sign_pow(n * (n - 1) / 2),
        derived_prefactor: BigRational::one(),
    })
}

/// `c_n = 1! * 2! * ... * (n-1)!`
pub fn superfactorial(n: usize) -> BigInt {
    let mut fact = BigInt::one();
    let mut acc = BigInt::one();
    for i in 1..n {
        fact *= i;
        acc *= &fact;
    }
    acc
}

/// `det H_n = c_n^4 / c_{2n}`.
pub fn hilbert_det_closed(n: usize) -> BigRational {
    let c = superfactorial(n);
    BigRational::new(num_traits::pow(c, 4), superfactorial(2 * n))
}

/// `1/det H_n = n! * prod_{i=1}^{2n-1} binom(i, floor(i/2))`, with the
/// binomials read off Pascal's triangle row by row.
pub fn hilbert_recip_int(n: usize) -> BigInt {
    let mut acc: BigInt = (1..=n).map(BigInt::from).product();
    let mut row = vec![BigInt::one()];
    for i in 1..2 * n {
        let mut next = Vec::with_capacity(i + 1);
        next.push(BigInt::one());
        next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
        next.push(BigInt::one());
        row = next;
        acc *= &row[i / 2];
    }
    acc
}

/// Both sides of `a_s d_(l,e) - a_l d_(s,e) = -a_e d_(s,l)`, each computed
/// from the terms directly.
pub fn lemma31_first(spec: &SequenceSpec, e: usize, l: usize, s: usize) -> Result<(BigRational, BigRational)> {
    if e == 0 || l == 0 || s == 0 {
        return Err(Error::ZeroSequenceIndex);
    }
    let seq = spec.materialize(e.max(l).max(s))?;
    let lhs = seq.a(s) * seq.d(l, e) - seq.a(l) * seq.d(s, e);
    let rhs = -(seq.a(e) * seq.d(s, l));
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma31Second {
    /// `d_(t,e)/d_(t,l) - d_(s,e)/d_(s,l)`
    pub lhs: BigRational,
    /// `d_(t,s) d_(l,e) / (d_(t,l) d_(s,l))`
    pub printed_rhs: BigRational,
    /// `d_(t,s) d_(e,l) / (d_(t,l) d_(s,l))`
    pub derived_rhs: BigRational,
}

/// The ratio-difference identity. Needs `t != l` and `s != l`; `t = s` is
/// allowed and gives zero on both sides.
pub fn lemma31_second(spec: &SequenceSpec, e: usize, l: usize, s: usize, t: usize) -> Result<Lemma31Second> {
    if [e, l, s, t].contains(&0) {
        return Err(Error::ZeroSequenceIndex);
    }
    if t == l || s == l {
        return Err(Error::CoincidentIndices { t, s, l });
    }
    let seq = spec.materialize(e.max(l).max(s).max(t))?;
    let lhs = seq.d(t, e) / seq.d(t, l) - seq.d(s, e) / seq.d(s, l);
    let denom = seq.d(t, l) * seq.d(s, l);
    let printed_rhs = seq.d(t, s) * seq.d(l, e) / &denom;
    let derived_rhs = seq.d(t, s) * seq.d(e, l) / &denom;
    Ok(Lemma31Second { lhs, printed_rhs, derived_rhs })
}

/// Determinant of `A_n`.
///
/// Structural part `prod_{s'<s} d_(i_s, i_s') / prod_{s,j} d_(i_s, e_j)`,
/// times the sign of the permutation sorting `e_idx` (`D(E)` depends only on
/// the set, the columns on its order). Printed prefactor `D(E)` on the column index set; the derived prefactor
/// carries the extra `(-1)^(n(n-1)/2)` from the Cauchy sign.
pub fn amatrix_det_closed(spec: &SequenceSpec, i_idx: &[usize], e_idx: &[usize]) -> Result<StructuralDet> {
    let sel = IndexSelection::new(i_idx.to_vec(), e_idx.to_vec())?;
    if e_idx.is_empty() || i_idx.len() != e_idx.len() + 1 {
        return Err(Error::IndexLengths(format!(
            "A_n closed form needs n >= 1 with n+1 row and n column indices, got {} and {}",
            i_idx.len(),
            e_idx.len()
        )));
    }
    let seq = spec.materialize(sel.max_index())?;
    Ok(amatrix_closed_from(&seq, &sel))
}

pub(crate) fn amatrix_closed_from(seq: &Sequence, sel: &IndexSelection) -> StructuralDet {
    let n = sel.e_idx.len() as u64;
    let mut p = Product::default();
    for (k, &is) in sel.i_idx.iter().enumerate() {
        for &is_prev in &sel.i_idx[..k] {
            p.mul(&seq.d(is, is_prev));
        }
        for &e in &sel.e_idx {
            p.div(&seq.d(is, e));
        }
    }
    let d_e = seq.scalar_d(&sel.e_idx);
    let inversions = sel.e_idx.iter().tuple_combinations().filter(|(a, b)| a > b).count();
    StructuralDet {
        family: Family::Amatrix,
        structural: sign_pow(inversions as u64) * p.finish(),
        derived_prefactor: sign_pow(n * (n - 1) / 2) * &d_e,
        printed_prefactor: d_e,
    }
}

/// Checks `i_idx` for the `C'` selection: `r+1` strictly increasing indices,
/// all greater than `r`.
pub fn check_cprime_indices(r: usize, i_idx: &[usize]) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidShape { r, n: i_idx.iter().copied().max().unwrap_or(0) });
    }
    if i_idx.len() != r + 1 {
        return Err(Error::IndexLengths(format!("C' needs r+1 = {} row indices, got {}", r + 1, i_idx.len())));
    }
    if i_idx.iter().any(|&i| i <= r) || i_idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidIndices(format!(
            "C' row indices must be strictly increasing and > {r}, got {i_idx:?}"
        )));
    }
    Ok(())
}

/// The square row selection `C' = [C_(i_s - r, j)]` of the `C` block.
pub fn cprime_matrix(spec: &SequenceSpec, r: usize, i_idx: &[usize]) -> Result<ExactMatrix> {
    check_cprime_indices(r, i_idx)?;
    let seq = spec.materialize(*i_idx.last().unwrap())?;
    Ok(seq.c_rows(r, i_idx))
}

/// Determinant of `C'`.
///
/// Structural part `prod_{s'<s} d_(i_s, i_s')`. Printed prefactor
/// `(-1)^(r^2+3r) D_r^(r+1)`; the derived prefactor is `(-1)^r D_r^r`.
pub fn cprime_det_closed(spec: &SequenceSpec, r: usize, i_idx: &[usize]) -> Result<StructuralDet> {
    check_cprime_indices(r, i_idx)?;
    let seq = spec.materialize(*i_idx.last().unwrap())?;
    Ok(cprime_closed_from(&seq, r, i_idx))
}

pub(crate) fn cprime_closed_from(seq: &Sequence, r: usize, i_idx: &[usize]) -> StructuralDet {
    let mut p = Product::default();
    for (k, &is) in i_idx.iter().enumerate() {
        for &is_prev in &i_idx[..k] {
            p.mul(&seq.d(is, is_prev));
        }
    }
    let d_r = seq.scalar_d(&(1..=r).collect::<Vec<_>>());
    let r64 = r as u64;
    StructuralDet {
        family: Family::Cprime,
        structural: p.finish(),
        printed_prefactor: sign_pow(r64 * r64 + 3 * r64) * rat_pow(&d_r, r as u32 + 1),
        derived_prefactor: sign_pow(r64) * rat_pow(&d_r, r as u32),
    }
}

/// A closed-form determinant recognised from a matrix's entries alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recognized {
    pub family: Family,
    pub det: BigRational,
}

/// Tries to recover closed-form parameters from `m` and evaluate its
/// determinant without elimination.
///
/// Recognises Cauchy-structured matrices (`1/m_ij = x_i - y_j` for some
/// nodes; this covers Hilbert, `V_n` and `B_n`) and `A_n`-structured
/// matrices (first column ones, `1 - 1/m_sj = a_{e_j} / a_{i_s}`). Returns
/// `None` for anything else.
pub fn recognize(m: &ExactMatrix) -> Option<Recognized> {
    if !m.is_square() || m.rows() == 0 {
        return None;
    }
    recognize_cauchy(m).or_else(|| recognize_amatrix(m))
}

fn recognize_cauchy(m: &ExactMatrix) -> Option<Recognized> {
    let n = m.rows();
    if m.entries().iter().any(Zero::is_zero) {
        return None;
    }
    let inv = ExactMatrix::from_fn(n, n, |i, j| m.get(i, j).recip());
    for i in 1..n {
        for j in 1..n {
            if inv.get(i, j) - inv.get(i, 0) - inv.get(0, j) + inv.get(0, 0) != BigRational::zero() {
                return None;
            }
        }
    }
    let xs: Vec<_> = (0..n).map(|i| inv.get(i, 0).clone()).collect();
    let ys: Vec<_> = (0..n).map(|j| inv.get(0, 0) - inv.get(0, j)).collect();
    let det = cauchy_structural(&xs, &ys);
    let family = if is_hilbert(m) { Family::Hilbert } else { Family::Cauchy };
    Some(Recognized { family, det })
}

fn is_hilbert(m: &ExactMatrix) -> bool {
    let n = m.rows();
    (0..n).all(|i| (0..n).all(|j| m.get(i, j) == &BigRational::new(BigInt::one(), BigInt::from(i + j + 1))))
}

fn recognize_amatrix(m: &ExactMatrix) -> Option<Recognized> {
    let size = m.rows();
    if size < 2 || (0..size).any(|s| !m.get(s, 0).is_one()) {
        return None;
    }
    let n = size - 1;
    // w_sj = 1 - 1/m_sj = a_{e_j} / a_{i_s}
    let mut w = Vec::with_capacity(size);
    for s in 0..size {
        let mut row = Vec::with_capacity(n);
        for j in 1..size {
            let v = m.get(s, j);
            if v.is_zero() {
                return None;
            }
            let ws = BigRational::one() - v.recip();
            if ws.is_zero() {
                return None;
            }
            row.push(ws);
        }
        w.push(row);
    }
    // scale fixed by a_{i_1} = 1
    let a_e: Vec<BigRational> = w[0].clone();
    let a_i: Vec<BigRational> = w.iter().map(|row| &a_e[0] / &row[0]).collect();
    for (s, row) in w.iter().enumerate() {
        for (j, ws) in row.iter().enumerate() {
            if &(&a_e[j] / &a_i[s]) != ws {
                return None;
            }
        }
    }
    let mut terms = a_i;
    terms.extend(a_e);
    let spec = SequenceSpec::explicit(terms).ok()?;
    let i_idx: Vec<usize> = (1..=size).collect();
    let e_idx: Vec<usize> = (size + 1..=size + n).collect();
    let det = amatrix_det_closed(&spec, &i_idx, &e_idx).ok()?.derived_value();
    Some(Recognized { family: Family::Amatrix, det })
}

/// `n!`
pub fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// `binom(n, k)` by the multiplicative formula.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Returns the `e` with `x = sign * base^e` for `sign = +/-1`, searching
/// `0..=max_exp`. Used to read off `D_r` exponents.
pub fn exponent_of(x: &BigRational, base: &BigRational, max_exp: u32) -> Vec<(u32, BigRational)> {
    (0..=max_exp)
        .filter_map(|k| {
            let p = rat_pow(base, k);
            if p.is_zero() {
                return None;
            }
            let ratio = x / p;
            (ratio.is_one() || (-&ratio).is_one()).then_some((k, ratio))
        })
        .collect()
}
