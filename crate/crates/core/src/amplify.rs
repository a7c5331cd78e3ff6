//! Deterministic uniqueness amplification.
//!
//! Euclidean mode appends one tiny coordinate per basis vector, so that distinct
//! shortest vectors acquire distinct lengths. Max-norm mode instead adds a tiny,
//! per-vector constant to every entry. Both constructions need an integral,
//! LLL-reduced input; the input is reduced first when necessary.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::certificate::Certificate;
use crate::error::{LatticeError, Result};
use crate::gso::{is_lll_reduced, l2_coeff_exponent, lll_reduce, LllParams};
use crate::lattice::Basis;
use crate::scalar::{big, int, linf, norm_sq, pow2, LatticeVector, Scalar};
use crate::svp::{Enumerator, LatticePoint, Norm};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmplifyMode {
    L2,
    Linf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AmplifyParams {
    pub mode: AmplifyMode,
    /// Max-norm exponent; ignored in Euclidean mode.
    pub eta: u32,
}

impl AmplifyParams {
    pub fn l2() -> Self {
        Self {
            mode: AmplifyMode::L2,
            eta: 0,
        }
    }

    pub fn linf(eta: u32) -> Self {
        Self {
            mode: AmplifyMode::Linf,
            eta,
        }
    }

    /// Max-norm parameters with the smallest admissible exponent for `b`.
    pub fn linf_for(b: &Basis) -> Self {
        Self::linf(default_linf_eta(b))
    }
}

/// Proven bound on the coefficients of a max-norm shortest vector w.r.t. an LLL basis:
/// `ceil(sqrt(m)) * 2^ceil(3n/2)`, from the Euclidean bound and `|v|_2 <= sqrt(m) |v|_inf`.
pub fn linf_coefficient_bound(b: &Basis) -> BigInt {
    let m = BigInt::from(b.ambient_dim());
    let mut root = m.sqrt();
    if &root * &root < m {
        root += 1u32;
    }
    root << l2_coeff_exponent(b.rank()) as usize
}

/// Smallest `eta >= max(n, 2)` with `2^eta` strictly above [`linf_coefficient_bound`].
pub fn default_linf_eta(b: &Basis) -> u32 {
    let bound = linf_coefficient_bound(b);
    let mut eta = (b.rank() as u32).max(2);
    while (BigInt::one() << eta as usize) <= bound {
        eta += 1;
    }
    eta
}

fn check_eta(b: &Basis, eta: u32) -> Result<()> {
    let bound = linf_coefficient_bound(b);
    if (BigInt::one() << eta as usize) <= bound || (eta as usize) < b.rank().max(2) {
        return Err(LatticeError::Parameter(format!(
            "eta = {eta} too small: need 2^eta > {bound} and eta >= max(n, 2)"
        )));
    }
    Ok(())
}

/// `2^(2 i n) / 2^(2 n^2)` for the zero-based column index `i`.
pub fn l2_tail(i: usize, n: usize) -> Scalar {
    pow2(2 * (i * n) as i64 - 2 * (n * n) as i64)
}

/// `2^(2 i eta) / 2^(2 eta^2)` for the zero-based column index `i`.
pub fn linf_shift(i: usize, eta: u32) -> Scalar {
    let eta = eta as i64;
    pow2(2 * i as i64 * eta - 2 * eta * eta)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmplifiedBasis {
    /// The integral, LLL-reduced basis the construction was applied to.
    pub original: Basis,
    pub amplified: Basis,
    pub params: AmplifyParams,
    /// Whether `original` had to be LLL-reduced from the caller's input.
    pub reduced_first: bool,
}

impl AmplifiedBasis {
    /// The vector of the amplified lattice with the same coefficients.
    pub fn lift(&self, coeffs: &[BigInt]) -> LatticeVector {
        self.amplified.combine(coeffs)
    }
}

pub fn amplify(b: &Basis, params: AmplifyParams) -> Result<AmplifiedBasis> {
    if !b.is_integral() {
        return Err(LatticeError::Domain(
            "amplification needs an integer lattice".into(),
        ));
    }
    if params.mode == AmplifyMode::Linf {
        check_eta(b, params.eta)?;
    }
    let lll = LllParams::default();
    let reduced_first = !is_lll_reduced(b, &lll);
    let original = if reduced_first {
        lll_reduce(b, &lll)
    } else {
        b.clone()
    };
    let n = original.rank();
    let m = original.ambient_dim();
    let columns = original
        .columns()
        .iter()
        .enumerate()
        .map(|(i, col)| match params.mode {
            AmplifyMode::L2 => {
                let mut c = col.clone();
                c.extend((0..n).map(|k| {
                    if k == i {
                        l2_tail(i, n)
                    } else {
                        Scalar::zero()
                    }
                }));
                debug_assert_eq!(c.len(), m + n);
                c
            }
            AmplifyMode::Linf => {
                let s = linf_shift(i, params.eta);
                col.iter().map(|x| x + &s).collect()
            }
        })
        .collect();
    Ok(AmplifiedBasis {
        amplified: Basis::new(columns)?,
        original,
        params,
        reduced_first,
    })
}

fn min_pairwise_gap(values: &[Scalar]) -> Option<Scalar> {
    let mut best: Option<Scalar> = None;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d = (&values[i] - &values[j]).abs();
            if best.as_ref().is_none_or(|b| d < *b) {
                best = Some(d);
            }
        }
    }
    best
}

/// The four Euclidean certificates: sandwich, separation, non-minimal lift and gap.
pub fn certify_l2(a: &AmplifiedBasis) -> Result<Vec<Certificate>> {
    certify_l2_with(&Enumerator::default(), a)
}

pub fn certify_l2_with(e: &Enumerator, a: &AmplifiedBasis) -> Result<Vec<Certificate>> {
    if a.params.mode != AmplifyMode::L2 {
        return Err(LatticeError::Parameter(
            "expected a Euclidean amplification".into(),
        ));
    }
    let n = a.original.rank();
    let base = e.shortest(&a.original, Norm::L2)?;
    let lifted = e.shortest(&a.amplified, Norm::L2)?;
    let l1 = &base.lambda1;
    let l1p = &lifted.lambda1;

    let diff = l1p - l1;
    let slack_sq = pow2(-(n as i64));
    let sandwich = Certificate::new("amplify.l2.sandwich")
        .witness("lambda1_sq", l1.clone())
        .witness("amplified_lambda1_sq", l1p.clone())
        .witness("increase", diff.clone())
        .witness("increase_bound_squared", slack_sq.clone())
        .note("lambda1^2(L) <= lambda1^2(L') <= lambda1^2(L) + 2^(-n/2), upper side compared in squared form")
        .passed_if(!diff.is_negative() && &diff * &diff <= slack_sq);

    let threshold = pow2(-4 * (n * n) as i64);
    let lifted_lengths: Vec<Scalar> = base
        .minimal_pairs
        .iter()
        .map(|p| norm_sq(&a.lift(&p.coeffs)))
        .collect();
    let gap = min_pairwise_gap(&lifted_lengths);
    let separated = gap.as_ref().is_none_or(|g| *g > threshold);
    let mut separation = Certificate::new("amplify.l2.separation")
        .count("minimal_pairs", base.pair_count())
        .count("amplified_minimal_pairs", lifted.pair_count())
        .witness("threshold", threshold.clone());
    if let Some(g) = &gap {
        separation = separation.witness("min_lifted_difference", g.clone());
    }
    let separation = separation.passed_if(separated && lifted.pair_count() == 1);

    let shell_radius = base.lambda2.clone().unwrap_or_else(|| int(4) * l1);
    let shell = e.ball(&a.original, Norm::L2, &shell_radius)?;
    let mut checked = 0usize;
    let mut violations = 0usize;
    let mut min_excess: Option<Scalar> = None;
    for p in shell.iter().filter(|p| norm_sq(&p.vector) > *l1) {
        checked += 1;
        let excess = norm_sq(&a.lift(&p.coeffs)) - l1 - int(1);
        if !excess.is_positive() {
            violations += 1;
        }
        if min_excess.as_ref().is_none_or(|m| excess < *m) {
            min_excess = Some(excess);
        }
    }
    let mut nonminimal = Certificate::new("amplify.l2.nonminimal_lift")
        .witness("shell_radius_sq", shell_radius)
        .count("checked", checked)
        .count("violations", violations);
    if let Some(m) = min_excess {
        nonminimal = nonminimal.witness("min_excess_over_lambda1_sq_plus_1", m);
    }
    let nonminimal = nonminimal.passed_if(violations == 0);

    let gap_cert = match &lifted.lambda2 {
        None => Certificate::new("amplify.l2.gap")
            .note("rank 1: no second minimum")
            .passed_if(true),
        Some(l2p) => {
            let ratio = l2p / l1p;
            let rhs = int(1) + int(1) / (pow2(4 * (n * n) as i64) * l1p);
            Certificate::new("amplify.l2.gap")
                .witness("amplified_lambda1_sq", l1p.clone())
                .witness("amplified_lambda2_sq", l2p.clone())
                .witness("ratio_sq", ratio.clone())
                .witness("required_ratio_sq", rhs.clone())
                .passed_if(ratio > rhs)
        }
    };
    Ok(vec![sandwich, separation, nonminimal, gap_cert])
}

/// The four max-norm certificates: lifted upper bound, unit separation,
/// coordinate attainment and pairwise separation with uniqueness.
pub fn certify_linf(a: &AmplifiedBasis) -> Result<Vec<Certificate>> {
    certify_linf_with(&Enumerator::default(), a)
}

pub fn certify_linf_with(e: &Enumerator, a: &AmplifiedBasis) -> Result<Vec<Certificate>> {
    if a.params.mode != AmplifyMode::Linf {
        return Err(LatticeError::Parameter(
            "expected a max-norm amplification".into(),
        ));
    }
    let eta = a.params.eta;
    let base = e.shortest(&a.original, Norm::Linf)?;
    let lifted = e.shortest(&a.amplified, Norm::Linf)?;
    let l1 = &base.lambda1;
    let l1p = &lifted.lambda1;

    let bound = l1 + pow2(1 - eta as i64);
    let lifted_norms: Vec<Scalar> = base
        .minimal_pairs
        .iter()
        .map(|p| linf(&a.lift(&p.coeffs)))
        .collect();
    let lifts_within = lifted_norms.iter().all(|v| *v <= bound);
    let upper = Certificate::new("amplify.linf.upper_bound")
        .count("eta", eta as usize)
        .witness("lambda1", l1.clone())
        .witness("amplified_lambda1", l1p.clone())
        .witness("bound", bound.clone())
        .passed_if(lifts_within && *l1p <= bound);

    let shell_radius = base.lambda2.clone().unwrap_or_else(|| int(2) * l1);
    let shell = e.ball(&a.original, Norm::Linf, &shell_radius)?;
    let values: BTreeSet<Scalar> = shell.iter().map(|p| linf(&p.vector)).collect();
    let integral = values.iter().all(|v| v.is_integer());
    let values: Vec<Scalar> = values.into_iter().collect();
    let min_gap = values.windows(2).map(|w| &w[1] - &w[0]).min();
    let mut unit = Certificate::new("amplify.linf.unit_separation")
        .witness("shell_radius", shell_radius.clone())
        .count("shell_points", shell.len())
        .count("distinct_lengths", values.len())
        .flag("lengths_integral", integral);
    if let Some(g) = &min_gap {
        unit = unit.witness("min_gap", g.clone());
    }
    let unit = unit.passed_if(integral && min_gap.as_ref().is_none_or(|g| *g >= int(1)));

    let mut attain_violations = 0usize;
    for p in &shell {
        let lifted_v = a.lift(&p.coeffs);
        let top = linf(&lifted_v);
        let orig_top = linf(&p.vector);
        for (x, y) in lifted_v.iter().zip(&p.vector) {
            if x.abs() == top && y.abs() != orig_top {
                attain_violations += 1;
            }
        }
    }
    let attainment = Certificate::new("amplify.linf.coordinate_attainment")
        .count("shell_points", shell.len())
        .count("violations", attain_violations)
        .passed_if(attain_violations == 0);

    let threshold = pow2(-2 * (eta as i64) * (eta as i64));
    let gap = min_pairwise_gap(&lifted_norms);
    let separated = gap.as_ref().is_none_or(|g| *g > threshold);
    let eta_limit = BigInt::one() << eta as usize;
    let eta_sufficient = lifted
        .minimal_pairs
        .iter()
        .all(|p| p.coeffs.iter().all(|c| c.abs() < eta_limit));
    let matches_lift = lifted.minimal_pairs.iter().all(|q| {
        base.minimal_pairs
            .iter()
            .any(|p| p.coeffs == q.coeffs || p.negated().coeffs == q.coeffs)
    });
    let mut pairwise = Certificate::new("amplify.linf.pairwise_separation")
        .count("minimal_pairs", base.pair_count())
        .count("amplified_minimal_pairs", lifted.pair_count())
        .flag(
            "meets_threshold",
            gap.as_ref().is_none_or(|g| *g >= threshold),
        )
        .witness("threshold", threshold)
        .flag("eta_sufficient", eta_sufficient)
        .flag("minimum_is_lifted_minimum", matches_lift)
        .note("distinct lifted max-norms differ by a nonzero multiple of 2^(-2 eta^2)");
    if let Some(g) = gap {
        pairwise = pairwise.witness("min_lifted_difference", g);
    }
    let pairwise =
        pairwise.passed_if(separated && lifted.pair_count() == 1 && eta_sufficient && matches_lift);

    Ok(vec![upper, unit, attainment, pairwise])
}

/// Lifted-minus-original squared length predicted from the coefficients alone.
pub fn l2_tail_energy(coeffs: &[BigInt]) -> Scalar {
    let n = coeffs.len();
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let t = l2_tail(i, n);
            big(c * c) * &t * &t
        })
        .fold(Scalar::zero(), |acc, x| acc + x)
}

/// Minimal points of `a.original` as seen through the correspondence map.
pub fn lifted_minimal(a: &AmplifiedBasis, points: &[LatticePoint]) -> Vec<LatticeVector> {
    points.iter().map(|p| a.lift(&p.coeffs)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn l2_construction_on_z2() {
        let a = amplify(&Basis::identity(2), AmplifyParams::l2()).unwrap();
        assert!(!a.reduced_first);
        assert_eq!(a.amplified.ambient_dim(), 4);
        assert_eq!(a.amplified.column(0)[2], ratio(1, 256));
        assert_eq!(a.amplified.column(1)[3], ratio(1, 16));
        assert_eq!(a.amplified.column(0)[3], int(0));
        assert_eq!(a.amplified.column(1)[2], int(0));
    }

    #[test]
    fn linf_construction_on_z2() {
        let a = amplify(&Basis::identity(2), AmplifyParams::linf(6)).unwrap();
        assert_eq!(a.amplified.column(0), &vec![int(1) + pow2(-72), pow2(-72)]);
        assert_eq!(
            a.amplified.column(1),
            &vec![pow2(12 - 72), int(1) + pow2(12 - 72)]
        );
    }

    #[test]
    fn rejects_rational_and_small_eta() {
        let b = Basis::new(vec![vec![ratio(1, 2), int(0)], vec![int(0), int(1)]]).unwrap();
        assert!(matches!(
            amplify(&b, AmplifyParams::l2()),
            Err(LatticeError::Domain(_))
        ));
        assert!(matches!(
            amplify(&Basis::identity(2), AmplifyParams::linf(3)),
            Err(LatticeError::Parameter(_))
        ));
    }

    #[test]
    fn certify_l2_on_z2() {
        let a = amplify(&Basis::identity(2), AmplifyParams::l2()).unwrap();
        let certs = certify_l2(&a).unwrap();
        assert!(certs.iter().all(Certificate::is_pass), "{certs:#?}");
        let gap = &certs[3];
        assert_eq!(gap.get("amplified_lambda1_sq"), Some(&(int(1) + pow2(-16))));
        assert_eq!(gap.get("amplified_lambda2_sq"), Some(&(int(1) + pow2(-8))));
        assert_eq!(
            certs[1].get("min_lifted_difference"),
            Some(&(pow2(-8) - pow2(-16)))
        );
    }

    #[test]
    fn certify_l2_on_diag() {
        let a = amplify(&Basis::diagonal(&[1, 5]), AmplifyParams::l2()).unwrap();
        let certs = certify_l2(&a).unwrap();
        assert!(certs.iter().all(Certificate::is_pass));
        let l1p = certs[0].get("amplified_lambda1_sq").unwrap();
        assert!(*l1p >= int(1) && *l1p <= ratio(3, 2));
        // Unique pair already: separation is vacuous.
        assert_eq!(certs[1].get("min_lifted_difference"), None);
    }

    #[test]
    fn hexagonal_lattice_meets_separation_threshold_exactly() {
        // A2: three minimal pairs b1, b2, b1+b2. The pair (0,1) vs (1,1) differs only in
        // the lowest slot, where the lifted difference is exactly 2^(-4n^2).
        let b = Basis::from_integer_columns(&[vec![1, -1, 0], vec![0, 1, -1]]).unwrap();
        let a = amplify(&b, AmplifyParams::l2()).unwrap();
        let certs = certify_l2(&a).unwrap();
        assert_eq!(certs[1].get("min_lifted_difference"), Some(&pow2(-16)));
        assert!(certs[1].is_failed());
        // The two lightest lifts still differ by far more, so the gap survives.
        assert!(certs[3].is_pass());
        assert_eq!(certs[1].get("amplified_minimal_pairs"), Some(&int(1)));
    }

    #[test]
    fn certify_linf_examples() {
        // Z^2 has four max-norm minimal pairs; the lifts of (0,1) and (1,1)
        // differ by exactly 2^(-72), so the strict separation fails while the
        // amplified minimum is still unique.
        let a = amplify(&Basis::identity(2), AmplifyParams::linf(6)).unwrap();
        let certs = certify_linf(&a).unwrap();
        assert!(certs[..3].iter().all(Certificate::is_pass), "{certs:#?}");
        assert!(certs[3].is_failed());
        assert_eq!(certs[3].get("min_lifted_difference"), Some(&pow2(-72)));
        assert_eq!(certs[3].get("meets_threshold"), Some(&int(1)));
        assert_eq!(certs[3].get("amplified_minimal_pairs"), Some(&int(1)));

        let a = amplify(&Basis::diagonal(&[1, 3]), AmplifyParams::linf(6)).unwrap();
        let certs = certify_linf(&a).unwrap();
        assert!(certs.iter().all(Certificate::is_pass));
        assert_eq!(certs[0].get("bound"), Some(&(int(1) + pow2(-5))));

        let b = Basis::from_integer_columns(&[vec![3]]).unwrap();
        let a = amplify(&b, AmplifyParams::linf_for(&b)).unwrap();
        assert!(certify_linf(&a).unwrap().iter().all(Certificate::is_pass));
    }

    #[test]
    fn default_eta_is_admissible() {
        let b = Basis::identity(4);
        let eta = default_linf_eta(&b);
        assert!(check_eta(&b, eta).is_ok());
        assert!(check_eta(&b, eta - 1).is_err());
    }
}
