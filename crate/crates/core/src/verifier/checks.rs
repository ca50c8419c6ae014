//! Rank and minor checks on the `C` block and the blocked `[C | D]` matrix,
//! column-scaling invariance, and the `B_n` / `V_n` / `H_n` determinant
//! chain.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{CaseResult, Params, Value};
use crate::closedform::{binomial, factorial};
use crate::exactcore::{det_bareiss, rank_fraction_free, sign_pow, ExactMatrix};
use crate::families::{build_bmatrix, build_hilbert, build_vmatrix, crn_from, SequenceSpec};
use crate::par::{self, Execution};
use crate::{Error, Result};

/// Maximal minors of `[C | D]` are all checked when there are at most this
/// many column selections.
pub const MAXIMAL_MINOR_BUDGET: usize = 3000;

/// Sub-minor sweeps of `C` above this many selections fall back to a
/// seeded random sample of this size.
pub const SUBMINOR_BUDGET: usize = 100_000;

fn check_shape(r: usize, n: usize) -> Result<()> {
    if r < 2 || r >= n {
        return Err(Error::InvalidShape { r, n });
    }
    Ok(())
}

fn base_params(spec: &SequenceSpec, r: usize, n: usize) -> Params {
    Params::new().with("seq", spec).with("r", r).with("n", n)
}

fn case_key(suite: &str, spec: &SequenceSpec, r: usize, n: usize) -> String {
    format!("{suite}/{}/r{r:02}/n{n:02}", spec.label())
}

/// `rank [C | D] = n - r`, plus every maximal minor nonzero when the number
/// of `(n-r)`-column selections is within [`MAXIMAL_MINOR_BUDGET`].
///
/// Returns the rank case, followed by the maximal-minor case when it ran
/// (expected = selections checked, actual = selections with nonzero
/// determinant).
pub fn check_theorem(spec: &SequenceSpec, r: usize, n: usize, exec: Execution) -> Result<Vec<CaseResult>> {
    check_shape(r, n)?;
    let seq = spec.materialize(n)?;
    let m = crn_from(&seq, r, n);
    let key = case_key("theorem", spec, r, n);
    let rank = rank_fraction_free(&m);
    let mut out = vec![CaseResult::compare(
        "theorem",
        format!("{key}/rank"),
        base_params(spec, r, n),
        Value::Count(n - r),
        Value::Count(rank),
    )];

    let k = n - r;
    let selections = binomial(n + 1, k);
    if selections <= BigInt::from(MAXIMAL_MINOR_BUDGET) {
        let rows: Vec<usize> = (0..k).collect();
        let cols: Vec<Vec<usize>> = (0..=n).combinations(k).collect();
        let total = cols.len();
        let zero: Vec<Vec<usize>> = par::map(exec, cols, |c| {
            let sub = m.submatrix(&rows, &c).expect("indices in range");
            det_bareiss(&sub).expect("square").is_zero().then_some(c)
        })
        .into_iter()
        .flatten()
        .collect();
        let mut case = CaseResult::compare(
            "theorem",
            format!("{key}/maxminors"),
            base_params(spec, r, n).with("selections", total),
            Value::Count(total),
            Value::Count(total - zero.len()),
        );
        if let Some(first) = zero.first() {
            case = case.with_note(format!("zero maximal minor on columns {first:?}"));
        }
        out.push(case);
    }
    Ok(out)
}

/// Every `m x m` minor of `C` with `m <= min(r+1, n-r)` is nonzero, and
/// `rank C = min(n-r, r+1)`.
///
/// Returns the minor case (expected = minors checked, actual = nonzero
/// ones) and the rank case. When the number of selections exceeds
/// [`SUBMINOR_BUDGET`] a seeded sample is checked and the minor case is
/// flagged `coverage = partial`.
pub fn check_minors(spec: &SequenceSpec, r: usize, n: usize, seed: u64, exec: Execution) -> Result<Vec<CaseResult>> {
    check_shape(r, n)?;
    let seq = spec.materialize(n)?;
    let c = seq.c_rows(r, &((r + 1)..=n).collect::<Vec<_>>());
    let (rows, cols) = (n - r, r + 1);
    let max_m = rows.min(cols);
    let key = case_key("minors", spec, r, n);

    let total: BigInt = (1..=max_m).map(|m| binomial(rows, m) * binomial(cols, m)).sum();
    let (selections, partial) = if total <= BigInt::from(SUBMINOR_BUDGET) {
        let all: Vec<(Vec<usize>, Vec<usize>)> = (1..=max_m)
            .flat_map(|m| {
                (0..rows)
                    .combinations(m)
                    .cartesian_product((0..cols).combinations(m).collect::<Vec<_>>())
            })
            .collect();
        (all, false)
    } else {
        (sample_selections(rows, cols, max_m, seed), true)
    };

    let checked = selections.len();
    let zero: Vec<(Vec<usize>, Vec<usize>)> = par::map(exec, selections, |(ri, ci)| {
        let sub = c.submatrix(&ri, &ci).expect("indices in range");
        det_bareiss(&sub).expect("square").is_zero().then_some((ri, ci))
    })
    .into_iter()
    .flatten()
    .collect();

    let params = base_params(spec, r, n).with("coverage", if partial { "partial" } else { "full" });
    let mut minors = CaseResult::compare(
        "minors",
        format!("{key}/minors"),
        params,
        Value::Count(checked),
        Value::Count(checked - zero.len()),
    );
    if let Some((ri, ci)) = zero.first() {
        minors = minors.with_note(format!("zero minor rows {ri:?} cols {ci:?}"));
    }
    let rank = CaseResult::compare(
        "minors",
        format!("{key}/rank"),
        base_params(spec, r, n),
        Value::Count(max_m),
        Value::Count(rank_fraction_free(&c)),
    );
    Ok(vec![minors, rank])
}

fn sample_selections(rows: usize, cols: usize, max_m: usize, seed: u64) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..SUBMINOR_BUDGET)
        .map(|_| {
            let m = rng.random_range(1..=max_m);
            let mut ri = sample(&mut rng, rows, m).into_vec();
            let mut ci = sample(&mut rng, cols, m).into_vec();
            ri.sort_unstable();
            ci.sort_unstable();
            (ri, ci)
        })
        .collect()
}

/// Random nonzero column scales `p/q`, `p` in `[-9, 9] \ {0}`, `q` in `[1, 9]`.
pub fn random_scales(count: usize, seed: u64) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut p: i64 = rng.random_range(-9..9);
            if p >= 0 {
                p += 1;
            }
            let q: i64 = rng.random_range(1..=9);
            BigRational::new(p.into(), q.into())
        })
        .collect()
}

/// Rank of `[C | D]` after scaling every column by an independent random
/// nonzero rational is still `n - r`.
pub fn check_scaling_invariance(spec: &SequenceSpec, r: usize, n: usize, seed: u64) -> Result<CaseResult> {
    check_shape(r, n)?;
    let seq = spec.materialize(n)?;
    let m = crn_from(&seq, r, n);
    let scaled = m.scale_columns(&random_scales(m.cols(), seed))?;
    Ok(CaseResult::compare(
        "scaling",
        format!("{}/seed{seed}", case_key("scaling", spec, r, n)),
        base_params(spec, r, n).with("seed", seed),
        Value::Count(n - r),
        Value::Count(rank_fraction_free(&scaled)),
    ))
}

/// For the reciprocal sequence with `e = (1..n)` and `i = (n+1..2n)`:
/// `det B_n = (-1)^n (2n)! det V_n`, `det V_n = (-1)^floor(n/2) det H_n`,
/// and reversing the columns of `V_n` gives `H_n` entrywise.
pub fn check_toeplitz_chain(n: usize) -> Result<Vec<CaseResult>> {
    if n == 0 {
        return Err(Error::InvalidArgument("Toeplitz chain needs n >= 1".into()));
    }
    let e_idx: Vec<usize> = (1..=n).collect();
    let i_idx: Vec<usize> = (n + 1..=2 * n).collect();
    let b = build_bmatrix(&SequenceSpec::Reciprocal, &i_idx, &e_idx)?;
    let v = build_vmatrix(n);
    let h = build_hilbert(n);
    let det_b = det_bareiss(&b)?;
    let det_v = det_bareiss(&v)?;
    let det_h = det_bareiss(&h)?;
    let fact = BigRational::from_integer(factorial(2 * n));
    let key = format!("toeplitz-chain/n{n:02}");
    let params = || Params::new().with("n", n);

    let reversed = v.reverse_columns();
    let matching = reversed.entries().iter().zip(h.entries()).filter(|(a, b)| a == b).count();

    Ok(vec![
        CaseResult::compare(
            "toeplitz-chain",
            format!("{key}/b-vs-v"),
            params(),
            Value::Rational(sign_pow(n as u64) * fact * &det_v),
            Value::Rational(det_b),
        ),
        CaseResult::compare(
            "toeplitz-chain",
            format!("{key}/v-vs-h"),
            params(),
            Value::Rational(sign_pow((n / 2) as u64) * det_h),
            Value::Rational(det_v),
        ),
        CaseResult::compare(
            "toeplitz-chain",
            format!("{key}/reversal"),
            params(),
            Value::Count(n * n),
            Value::Count(matching),
        ),
    ])
}

/// Whether `m` has a nonzero `rows x rows` minor on the given columns.
pub fn has_nonzero_square_witness(m: &ExactMatrix, cols: &[usize]) -> Result<bool> {
    let rows: Vec<usize> = (0..m.rows()).collect();
    Ok(!det_bareiss(&m.submatrix(&rows, cols)?)?.is_zero())
}
