//! Empirical prefactor resolution: divide oracle determinants by the
//! structural part over many random instances and require the quotient to
//! be one constant (after normalising by `D(E)` or a power of `D_r`).

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sample_sorted;
use crate::closedform::{
    amatrix_closed_from, cauchy_det_closed, cprime_closed_from, exponent_of, hilbert_det_closed, Family,
};
use crate::exactcore::{det_bareiss, det_oracle};
use crate::families::{amatrix_from, build_cauchy, build_hilbert, IndexSelection, SequenceSpec};
use crate::{Error, Result};

/// Bound for the random sequences used while resolving.
const RESOLVE_BOUND: u64 = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedPrefactor {
    pub family: Family,
    /// `n` for cauchy/hilbert/amatrix, `r` for cprime.
    pub shape: usize,
    /// Common value of `oracle / structural`, divided by `D(E)` (amatrix)
    /// or `D_r^k` (cprime).
    pub constant: BigRational,
    /// The power `k` of `D_r` (cprime only).
    pub d_exponent: Option<u32>,
}

fn not_constant(family: Family, shape: usize, a: &BigRational, b: &BigRational) -> Error {
    Error::NotStructural(format!(
        "{} at shape {shape}: ratio {} differs from {}",
        family.name(),
        crate::exactcore::format_rat(a),
        crate::exactcore::format_rat(b)
    ))
}

fn fold_constant(family: Family, shape: usize, ratios: Vec<BigRational>) -> Result<BigRational> {
    let mut it = ratios.into_iter();
    let first = it.next().expect("trials >= 2");
    for r in it {
        if r != first {
            return Err(not_constant(family, shape, &r, &first));
        }
    }
    Ok(first)
}

/// Resolves the scalar constant of `family` at `shape` from `trials`
/// random instances.
pub fn resolve_prefactor(family: Family, shape: usize, trials: usize, seed: u64) -> Result<ResolvedPrefactor> {
    if trials < 2 {
        return Err(Error::InvalidArgument("prefactor resolution needs at least 2 trials".into()));
    }
    if shape == 0 || (family == Family::Cprime && shape < 2) {
        return Err(Error::InvalidArgument(format!("invalid shape {shape} for {}", family.name())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next_spec = || SequenceSpec::Random { seed: rng.random(), bound: RESOLVE_BOUND };

    match family {
        Family::Cauchy => {
            let n = shape;
            let ratios = (0..trials)
                .map(|_| {
                    let seq = next_spec().materialize(2 * n)?;
                    let xs: Vec<_> = (1..=n).map(|l| seq.a(l).clone()).collect();
                    let ys: Vec<_> = (n + 1..=2 * n).map(|l| seq.a(l).clone()).collect();
                    let closed = cauchy_det_closed(&xs, &ys)?;
                    Ok(det_oracle(&build_cauchy(&xs, &ys)?)? / closed.structural)
                })
                .collect::<Result<Vec<_>>>()?;
            let constant = fold_constant(family, shape, ratios)?;
            Ok(ResolvedPrefactor { family, shape, constant, d_exponent: None })
        }
        Family::Hilbert => {
            let ratios = (0..trials)
                .map(|_| Ok(det_bareiss(&build_hilbert(shape))? / hilbert_det_closed(shape)))
                .collect::<Result<Vec<_>>>()?;
            let constant = fold_constant(family, shape, ratios)?;
            Ok(ResolvedPrefactor { family, shape, constant, d_exponent: None })
        }
        Family::Amatrix => {
            let n = shape;
            let pool = 3 * n + 3;
            let mut idx_rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5);
            let ratios = (0..trials)
                .map(|_| {
                    let spec = next_spec();
                    let seq = spec.materialize(pool)?;
                    let sel = random_selection(&mut idx_rng, pool, n);
                    let closed = amatrix_closed_from(&seq, &sel);
                    let oracle = det_oracle(&amatrix_from(&seq, &sel))?;
                    Ok(oracle / (closed.structural * seq.scalar_d(&sel.e_idx)))
                })
                .collect::<Result<Vec<_>>>()?;
            let constant = fold_constant(family, shape, ratios)?;
            Ok(ResolvedPrefactor { family, shape, constant, d_exponent: None })
        }
        Family::Cprime => {
            let r = shape;
            let pool = 2 * r + 4;
            let mut idx_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5A5A);
            let max_exp = 2 * r as u32 + 2;
            let mut candidates: Option<Vec<(u32, BigRational)>> = None;
            for _ in 0..trials {
                let seq = next_spec().materialize(pool)?;
                let i_idx: Vec<usize> =
                    sample_sorted(&mut idx_rng, pool - r, r + 1).into_iter().map(|k| k + r + 1).collect();
                let closed = cprime_closed_from(&seq, r, &i_idx);
                let oracle = det_oracle(&seq.c_rows(r, &i_idx))?;
                if closed.structural.is_zero() {
                    return Err(Error::NotStructural("zero structural part".into()));
                }
                let ratio = oracle / closed.structural;
                let d_r = seq.scalar_d(&(1..=r).collect::<Vec<_>>());
                let found = exponent_of(&ratio, &d_r, max_exp);
                candidates = Some(match candidates {
                    None => found,
                    Some(prev) => prev.into_iter().filter(|c| found.contains(c)).collect(),
                });
            }
            match candidates.unwrap_or_default().as_slice() {
                [(k, c)] => Ok(ResolvedPrefactor { family, shape, constant: c.clone(), d_exponent: Some(*k) }),
                [] => Err(Error::NotStructural(format!("cprime at r = {r}: no common +/- D_r^k"))),
                many => Err(Error::NotStructural(format!(
                    "cprime at r = {r}: {} candidate exponents remain; increase trials",
                    many.len()
                ))),
            }
        }
    }
}

/// `n+1` row and `n` column indices drawn without replacement from
/// `1..=pool`, each list sorted.
pub(crate) fn random_selection(rng: &mut ChaCha8Rng, pool: usize, n: usize) -> IndexSelection {
    let mut picks: Vec<usize> =
        rand::seq::index::sample(rng, pool, 2 * n + 1).into_iter().map(|k| k + 1).collect();
    let mut e_idx = picks.split_off(n + 1);
    picks.sort_unstable();
    e_idx.sort_unstable();
    IndexSelection::new(picks, e_idx).expect("distinct draws")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rat_int;

    #[test]
    fn amatrix_sign() {
        let r = resolve_prefactor(Family::Amatrix, 2, 5, 11).unwrap();
        assert_eq!(r.constant, rat_int(-1));
        assert_eq!(resolve_prefactor(Family::Amatrix, 1, 3, 11).unwrap().constant, rat_int(1));
    }

    #[test]
    fn cprime_exponent() {
        let r2 = resolve_prefactor(Family::Cprime, 2, 5, 3).unwrap();
        assert_eq!(r2.d_exponent, Some(2));
        assert_eq!(r2.constant, rat_int(1));
        let r3 = resolve_prefactor(Family::Cprime, 3, 5, 3).unwrap();
        assert_eq!(r3.d_exponent, Some(3));
        assert_eq!(r3.constant, rat_int(-1));
    }

    #[test]
    fn cauchy_and_hilbert() {
        assert_eq!(resolve_prefactor(Family::Cauchy, 1, 3, 0).unwrap().constant, rat_int(1));
        assert_eq!(resolve_prefactor(Family::Cauchy, 4, 4, 0).unwrap().constant, rat_int(1));
        assert_eq!(resolve_prefactor(Family::Hilbert, 5, 2, 0).unwrap().constant, rat_int(1));
    }

    #[test]
    fn rejects_single_trial() {
        assert!(resolve_prefactor(Family::Cauchy, 2, 1, 0).is_err());
        assert!(resolve_prefactor(Family::Cprime, 1, 3, 0).is_err());
    }

    #[test]
    fn non_constant_ratio_is_reported() {
        let err = fold_constant(Family::Amatrix, 2, vec![rat_int(1), rat_int(2)]).unwrap_err();
        assert!(matches!(err, Error::NotStructural(_)));
    }
}
