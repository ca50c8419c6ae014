//! Sequences `a_1, a_2, ...` of distinct nonzero rationals and the matrix
//! families built from them.
//!
//! Sequence indices (`l`, `e`, `i`) are 1-based everywhere in this module's
//! public API; matrix storage is 0-based.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactcore::{format_rat, parse_rat, rat_int, ExactMatrix};
use crate::{Error, Result};

/// Attempts per term before a random sequence gives up on finding a fresh
/// value.
const RANDOM_ATTEMPTS: usize = 10_000;

/// Rule producing the terms `a_l`.
///
/// Text syntax: `nat`, `recip`, `list:1,2,5/3`, `random:<seed>:<bound>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SequenceSpec {
    /// `a_l = l`
    Natural,
    /// `a_l = 1/l`
    Reciprocal,
    /// Finite list; `a_l` is the l-th entry.
    Explicit(Vec<BigRational>),
    /// Seeded draws `p/q` with `p` in `[-bound, bound] \ {0}` and `q` in
    /// `[1, bound]`, rejecting repeats. Generated by ChaCha8 seeded from
    /// `seed`, so the terms are identical on every platform.
    Random { seed: u64, bound: u64 },
}

impl SequenceSpec {
    pub fn explicit(terms: Vec<BigRational>) -> Result<Self> {
        let mut seen = HashSet::new();
        for (k, t) in terms.iter().enumerate() {
            if t.is_zero() || !seen.insert(t.clone()) {
                return Err(Error::InvalidExplicitTerm(k + 1));
            }
        }
        Ok(SequenceSpec::Explicit(terms))
    }

    pub fn random(seed: u64, bound: u64) -> Result<Self> {
        if bound == 0 {
            return Err(Error::InvalidArgument("random sequence bound must be positive".into()));
        }
        Ok(SequenceSpec::Random { seed, bound })
    }

    /// Short label used in case ids.
    pub fn label(&self) -> String {
        match self {
            SequenceSpec::Natural => "nat".into(),
            SequenceSpec::Reciprocal => "recip".into(),
            SequenceSpec::Explicit(t) => format!("list{}", t.len()),
            SequenceSpec::Random { seed, bound } => format!("random{seed}b{bound}"),
        }
    }

    /// `a_l` for `l >= 1`.
    pub fn term(&self, l: usize) -> Result<BigRational> {
        if l == 0 {
            return Err(Error::ZeroSequenceIndex);
        }
        match self {
            SequenceSpec::Natural => Ok(rat_int(l as i64)),
            SequenceSpec::Reciprocal => Ok(BigRational::new(BigInt::one(), BigInt::from(l))),
            SequenceSpec::Explicit(t) => {
                t.get(l - 1).cloned().ok_or(Error::ExplicitOutOfRange { index: l, len: t.len() })
            }
            SequenceSpec::Random { .. } => Ok(self.materialize(l)?.a(l).clone()),
        }
    }

    /// Terms `a_1..=a_len`.
    pub fn materialize(&self, len: usize) -> Result<Sequence> {
        let terms = match self {
            SequenceSpec::Natural | SequenceSpec::Reciprocal => {
                (1..=len).map(|l| self.term(l)).collect::<Result<Vec<_>>>()?
            }
            SequenceSpec::Explicit(t) => {
                if len > t.len() {
                    return Err(Error::ExplicitOutOfRange { index: len, len: t.len() });
                }
                t[..len].to_vec()
            }
            &SequenceSpec::Random { seed, bound } => random_terms(seed, bound, len)?,
        };
        Ok(Sequence { terms })
    }
}

fn random_terms(seed: u64, bound: u64, len: usize) -> Result<Vec<BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = bound as i64;
    let mut seen = HashSet::with_capacity(len);
    let mut terms = Vec::with_capacity(len);
    for index in 1..=len {
        let term = (0..RANDOM_ATTEMPTS).find_map(|_| {
            let mut p = rng.random_range(-b..b);
            if p >= 0 {
                p += 1; // skip zero: [-b, -1] and [1, b]
            }
            let q = rng.random_range(1..=b);
            let t = BigRational::new(BigInt::from(p), BigInt::from(q));
            seen.insert(t.clone()).then_some(t)
        });
        match term {
            Some(t) => terms.push(t),
            None => return Err(Error::RandomExhausted { seed, bound, index }),
        }
    }
    Ok(terms)
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Natural => f.write_str("nat"),
            SequenceSpec::Reciprocal => f.write_str("recip"),
            SequenceSpec::Explicit(t) => {
                let parts: Vec<String> = t.iter().map(format_rat).collect();
                write!(f, "list:{}", parts.join(","))
            }
            SequenceSpec::Random { seed, bound } => write!(f, "random:{seed}:{bound}"),
        }
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseSequence(s.to_string());
        match s.trim() {
            "nat" => return Ok(SequenceSpec::Natural),
            "recip" => return Ok(SequenceSpec::Reciprocal),
            _ => {}
        }
        if let Some(list) = s.trim().strip_prefix("list:") {
            let terms = list.split(',').map(parse_rat).collect::<Result<Vec<_>>>().map_err(|_| bad())?;
            return SequenceSpec::explicit(terms);
        }
        if let Some(rest) = s.trim().strip_prefix("random:") {
            let (seed, bound) = rest.split_once(':').ok_or_else(bad)?;
            let seed = seed.parse().map_err(|_| bad())?;
            let bound = bound.parse().map_err(|_| bad())?;
            return SequenceSpec::random(seed, bound);
        }
        Err(bad())
    }
}

/// Materialized prefix `a_1..=a_len` of a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    terms: Vec<BigRational>,
}

impl Sequence {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `a_l`. Panics if `l` is 0 or beyond the materialized prefix.
    pub fn a(&self, l: usize) -> &BigRational {
        &self.terms[l - 1]
    }

    /// `d_(l,e) = a_l - a_e`
    pub fn d(&self, l: usize, e: usize) -> BigRational {
        self.a(l) - self.a(e)
    }

    /// `D(E) = (-1)^|E| * prod_{l in E} a_l * prod_{e < l in E} d_(l,e)`
    pub fn scalar_d(&self, set: &[usize]) -> BigRational {
        let mut idx = set.to_vec();
        idx.sort_unstable();
        let mut acc = if idx.len().is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
        for &l in &idx {
            acc *= self.a(l);
        }
        for (k, &l) in idx.iter().enumerate() {
            for &e in &idx[..k] {
                acc *= self.d(l, e);
            }
        }
        acc
    }

    /// Entry of the `C` block for sequence row `i` (in `r+1..=n`) and
    /// column `j` (in `0..=r`).
    pub fn c_entry(&self, r: usize, i: usize, j: usize) -> BigRational {
        let set: Vec<usize> = (1..=r).filter(|&l| l != j).collect();
        let mut acc = if (r + j).is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
        if j > 0 {
            acc *= self.a(i);
        }
        for &l in &set {
            acc *= self.d(i, l);
            if j > 0 {
                acc *= self.a(l);
            }
        }
        for (k, &l) in set.iter().enumerate() {
            for &e in &set[..k] {
                acc *= self.d(l, e);
            }
        }
        acc
    }

    /// Rows of `C` for the sequence indices `rows` (each in `r+1..`).
    pub fn c_rows(&self, r: usize, rows: &[usize]) -> ExactMatrix {
        ExactMatrix::from_fn(rows.len(), r + 1, |s, j| self.c_entry(r, rows[s], j))
    }
}

/// `a_l`.
pub fn seq_term(spec: &SequenceSpec, l: usize) -> Result<BigRational> {
    spec.term(l)
}

/// `d_(l,e) = a_l - a_e`.
pub fn diff(spec: &SequenceSpec, l: usize, e: usize) -> Result<BigRational> {
    let seq = spec.materialize(l.max(e))?;
    if l == 0 || e == 0 {
        return Err(Error::ZeroSequenceIndex);
    }
    Ok(seq.d(l, e))
}

/// `D(E)`; see [`Sequence::scalar_d`].
pub fn scalar_d(spec: &SequenceSpec, set: &[usize]) -> Result<BigRational> {
    if set.is_empty() {
        return Err(Error::InvalidIndices("D(E) needs a nonempty index set".into()));
    }
    check_positive_distinct(set)?;
    let seq = spec.materialize(*set.iter().max().unwrap())?;
    Ok(seq.scalar_d(set))
}

/// `D_r = D({1, ..., r})`.
pub fn scalar_d_r(spec: &SequenceSpec, r: usize) -> Result<BigRational> {
    scalar_d(spec, &(1..=r).collect::<Vec<_>>())
}

fn check_positive_distinct(idx: &[usize]) -> Result<()> {
    if idx.contains(&0) {
        return Err(Error::ZeroSequenceIndex);
    }
    let mut seen = HashSet::new();
    if let Some(&dup) = idx.iter().find(|&&i| !seen.insert(i)) {
        return Err(Error::InvalidIndices(format!("index {dup} repeated")));
    }
    Ok(())
}

/// Row indices `i_s` and column indices `e_j` for the `A_n`/`B_n`
/// families: positive, no repeats, and the two lists disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSelection {
    pub i_idx: Vec<usize>,
    pub e_idx: Vec<usize>,
}

impl IndexSelection {
    pub fn new(i_idx: Vec<usize>, e_idx: Vec<usize>) -> Result<Self> {
        check_positive_distinct(&i_idx)?;
        check_positive_distinct(&e_idx)?;
        if let Some(&x) = i_idx.iter().find(|i| e_idx.contains(i)) {
            return Err(Error::IndexOverlap(x));
        }
        Ok(Self { i_idx, e_idx })
    }

    pub fn max_index(&self) -> usize {
        self.i_idx.iter().chain(&self.e_idx).copied().max().unwrap_or(0)
    }
}

/// Cauchy matrix `1/(x_i - y_j)`.
pub fn build_cauchy(xs: &[BigRational], ys: &[BigRational]) -> Result<ExactMatrix> {
    check_cauchy_nodes(xs, ys)?;
    let n = xs.len();
    Ok(ExactMatrix::from_fn(n, n, |i, j| (&xs[i] - &ys[j]).recip()))
}

/// Integer nodes `x_i = i`, `y_j = -j` (entries `1/(i + j)`), used for
/// benchmarking the closed form against elimination.
pub fn integer_cauchy_nodes(n: usize) -> (Vec<BigRational>, Vec<BigRational>) {
    let xs = (1..=n).map(|i| BigRational::from_integer(BigInt::from(i))).collect();
    let ys = (1..=n).map(|j| -BigRational::from_integer(BigInt::from(j))).collect();
    (xs, ys)
}

pub(crate) fn check_cauchy_nodes(xs: &[BigRational], ys: &[BigRational]) -> Result<()> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::NodeLengthMismatch { xs: xs.len(), ys: ys.len() });
    }
    for (name, nodes) in [("x", xs), ("y", ys)] {
        let mut seen = HashSet::new();
        for v in nodes {
            if v.is_zero() {
                return Err(Error::InvalidNodes(format!("{name} node is zero")));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidNodes(format!("{name} node {} repeated", format_rat(v))));
            }
        }
    }
    for (i, x) in xs.iter().enumerate() {
        if let Some(j) = ys.iter().position(|y| y == x) {
            return Err(Error::NodeCollision { i, j, value: format_rat(x) });
        }
    }
    Ok(())
}

/// Hilbert matrix `1/(i + j - 1)` (1-based).
pub fn build_hilbert(n: usize) -> ExactMatrix {
    ExactMatrix::from_fn(n, n, |i, j| BigRational::new(BigInt::one(), BigInt::from(i + j + 1)))
}

/// Toeplitz matrix from its diagonals `v_{1-n}, ..., v_0, ..., v_{n-1}`:
/// entry `(i, j)` is `v_{j-i}`.
pub fn build_toeplitz(diag: &[BigRational]) -> Result<ExactMatrix> {
    if diag.len().is_multiple_of(2) {
        return Err(Error::EvenToeplitzLength(diag.len()));
    }
    let n = diag.len().div_ceil(2);
    Ok(ExactMatrix::from_fn(n, n, |i, j| diag[j + n - 1 - i].clone()))
}

/// Toeplitz matrix with entry `1/(n + i - j)` (1-based); first row
/// `1/n, 1/(n-1), ..., 1`.
pub fn build_vmatrix(n: usize) -> ExactMatrix {
    ExactMatrix::from_fn(n, n, |i, j| BigRational::new(BigInt::one(), BigInt::from(n + i - j)))
}

/// `A_n`: `(n+1) x (n+1)`, first column all ones, entry `(s, j)` equal to
/// `a_{i_s} / d_(i_s, e_j)`. Needs `|i_idx| = |e_idx| + 1`.
pub fn build_amatrix(spec: &SequenceSpec, i_idx: &[usize], e_idx: &[usize]) -> Result<ExactMatrix> {
    let sel = IndexSelection::new(i_idx.to_vec(), e_idx.to_vec())?;
    if i_idx.len() != e_idx.len() + 1 {
        return Err(Error::IndexLengths(format!(
            "A_n needs n+1 row indices and n column indices, got {} and {}",
            i_idx.len(),
            e_idx.len()
        )));
    }
    let seq = spec.materialize(sel.max_index())?;
    Ok(amatrix_from(&seq, &sel))
}

pub(crate) fn amatrix_from(seq: &Sequence, sel: &IndexSelection) -> ExactMatrix {
    let n = sel.e_idx.len();
    ExactMatrix::from_fn(n + 1, n + 1, |s, j| {
        let i = sel.i_idx[s];
        if j == 0 {
            BigRational::one()
        } else {
            seq.a(i) / seq.d(i, sel.e_idx[j - 1])
        }
    })
}

/// `B_n`: the Cauchy matrix `1/d_(i_s, e_j)`.
pub fn build_bmatrix(spec: &SequenceSpec, i_idx: &[usize], e_idx: &[usize]) -> Result<ExactMatrix> {
    let sel = IndexSelection::new(i_idx.to_vec(), e_idx.to_vec())?;
    if i_idx.len() != e_idx.len() || i_idx.is_empty() {
        return Err(Error::IndexLengths(format!(
            "B_n needs equal nonempty index lists, got {} and {}",
            i_idx.len(),
            e_idx.len()
        )));
    }
    let seq = spec.materialize(sel.max_index())?;
    let n = i_idx.len();
    Ok(ExactMatrix::from_fn(n, n, |s, j| seq.d(i_idx[s], e_idx[j]).recip()))
}

fn check_shape(r: usize, n: usize) -> Result<()> {
    if r < 2 || r >= n {
        return Err(Error::InvalidShape { r, n });
    }
    Ok(())
}

/// The `(n-r) x (r+1)` block `C`.
///
/// Row `i - r` (for `i` in `r+1..=n`), with `I = {1..r}` and `I_j = I \ {j}`:
/// - column 0: `(-1)^r * prod_{l in I} d_(i,l) * prod_{e<l in I} d_(l,e)`
/// - column j: `(-1)^(r+j) * a_i * prod_{l in I_j} d_(i,l) * prod_{l in I_j} a_l
///   * prod_{e<l in I_j} d_(l,e)`
pub fn build_cmatrix(spec: &SequenceSpec, r: usize, n: usize) -> Result<ExactMatrix> {
    check_shape(r, n)?;
    let seq = spec.materialize(n)?;
    Ok(seq.c_rows(r, &((r + 1)..=n).collect::<Vec<_>>()))
}

/// The blocked `(n-r) x (n+1)` matrix `[C | D_r * I]`.
pub fn build_crn(spec: &SequenceSpec, r: usize, n: usize) -> Result<ExactMatrix> {
    check_shape(r, n)?;
    let seq = spec.materialize(n)?;
    Ok(crn_from(&seq, r, n))
}

pub(crate) fn crn_from(seq: &Sequence, r: usize, n: usize) -> ExactMatrix {
    let c = seq.c_rows(r, &((r + 1)..=n).collect::<Vec<_>>());
    let d_r = seq.scalar_d(&(1..=r).collect::<Vec<_>>());
    let k = n - r;
    let d_block = ExactMatrix::from_fn(k, k, |i, j| if i == j { d_r.clone() } else { BigRational::zero() });
    c.hconcat(&d_block).expect("C and D blocks share n - r rows")
}
