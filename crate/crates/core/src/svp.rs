//! Exhaustive shortest-vector computation and the exact decision oracles built on it.
//!
//! Enumeration always runs on an LLL-reduced copy of the input and walks the
//! Gram-Schmidt tree depth first, pruning with exact partial squared lengths.
//! Only one representative of every antipodal pair is visited: the one whose
//! highest nonzero coefficient is positive. Reported points are then flipped to
//! the lexicographically larger of `{v, -v}`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::certificate::Certificate;
use crate::error::{LatticeError, Result};
use crate::gso::{gram_gso, lll_reduce_with_transform, LllOutput, LllParams};
use crate::lattice::Basis;
use crate::scalar::{
    big, int, is_lex_positive, linf, norm_sq, pow2, CoeffVector, LatticeVector, Scalar,
};

pub const DEFAULT_RANK_CAP: usize = 8;
pub const MAX_RANK_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Norm {
    L2,
    Linf,
}

impl Norm {
    pub fn as_str(self) -> &'static str {
        match self {
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        }
    }
}

/// The quantity the oracle reports for a vector: `|v|_2^2` for `L2`, `|v|_inf` for `Linf`.
pub fn norm_value(v: &[Scalar], norm: Norm) -> Scalar {
    match norm {
        Norm::L2 => norm_sq(v),
        Norm::Linf => linf(v),
    }
}

/// The square of the norm, comparable across both norms.
pub fn norm_squared(v: &[Scalar], norm: Norm) -> Scalar {
    match norm {
        Norm::L2 => norm_sq(v),
        Norm::Linf => {
            let m = linf(v);
            &m * &m
        }
    }
}

/// A lattice point with its coefficients w.r.t. the basis the caller supplied.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub vector: LatticeVector,
    pub coeffs: CoeffVector,
}

impl LatticePoint {
    fn canonical(mut self) -> Self {
        if !is_lex_positive(&self.vector) {
            self.vector.iter_mut().for_each(|x| *x = -&*x);
            self.coeffs.iter_mut().for_each(|x| *x = -&*x);
        }
        self
    }

    pub fn negated(&self) -> Self {
        Self {
            vector: self.vector.iter().map(|x| -x).collect(),
            coeffs: self.coeffs.iter().map(|x| -x).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvpSummary {
    pub norm: Norm,
    /// `lambda_1^2` for `L2`, `lambda_1` for `Linf`.
    pub lambda1: Scalar,
    /// Same convention as `lambda1`; `None` for rank-1 lattices.
    pub lambda2: Option<Scalar>,
    /// One representative per antipodal pair, sorted.
    pub minimal_pairs: Vec<LatticePoint>,
}

impl SvpSummary {
    pub fn pair_count(&self) -> usize {
        self.minimal_pairs.len()
    }

    pub fn vector_count(&self) -> usize {
        2 * self.minimal_pairs.len()
    }

    pub fn lambda1_sq(&self) -> Scalar {
        squared(&self.lambda1, self.norm)
    }

    pub fn lambda2_sq(&self) -> Option<Scalar> {
        self.lambda2.as_ref().map(|l| squared(l, self.norm))
    }

    /// `lambda_2 >= gamma * lambda_1`, decided on squares. Vacuous at rank 1.
    pub fn is_gamma_unique(&self, gamma_sq: &Scalar) -> bool {
        match self.lambda2_sq() {
            Some(l2) => l2 >= gamma_sq * self.lambda1_sq(),
            None => true,
        }
    }
}

fn squared(v: &Scalar, norm: Norm) -> Scalar {
    match norm {
        Norm::L2 => v.clone(),
        Norm::Linf => v * v,
    }
}

/// Exhaustive enumerator with a rank ceiling.
#[derive(Clone, Copy, Debug)]
pub struct Enumerator {
    cap: usize,
}

impl Default for Enumerator {
    fn default() -> Self {
        Self {
            cap: DEFAULT_RANK_CAP,
        }
    }
}

struct Prepared {
    lll: LllOutput,
    mu: Vec<Vec<Scalar>>,
    bsq: Vec<Scalar>,
}

impl Enumerator {
    pub fn new(cap: usize) -> Result<Self> {
        if cap == 0 || cap > MAX_RANK_CAP {
            return Err(LatticeError::Parameter(format!(
                "rank cap must be in 1..={MAX_RANK_CAP}, got {cap}"
            )));
        }
        Ok(Self { cap })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn prepare(&self, b: &Basis) -> Result<Prepared> {
        if b.rank() > self.cap {
            return Err(LatticeError::RankCapExceeded {
                rank: b.rank(),
                cap: self.cap,
            });
        }
        let lll = lll_reduce_with_transform(b, &LllParams::default());
        let (mu, bsq) = gram_gso(&lll.reduced);
        Ok(Prepared { lll, mu, bsq })
    }

    pub fn shortest(&self, b: &Basis, norm: Norm) -> Result<SvpSummary> {
        let prep = self.prepare(b)?;
        let red = &prep.lll.reduced;
        let m = int(b.ambient_dim() as i64);
        // Euclidean pruning radius for a target value in the chosen norm.
        let radius_for = |value: &Scalar| -> Scalar {
            match norm {
                Norm::L2 => value.clone(),
                Norm::Linf => &m * value * value,
            }
        };

        let start = red
            .columns()
            .iter()
            .map(|c| norm_value(c, norm))
            .min()
            .expect("rank >= 1");
        let mut best = start.clone();
        let mut found: Vec<CoeffVector> = Vec::new();
        search(&prep.mu, &prep.bsq, radius_for(&start), &mut |x, l2| {
            let value = match norm {
                Norm::L2 => l2.clone(),
                Norm::Linf => linf(&red.combine(x)),
            };
            if value < best {
                best = value;
                found.clear();
                found.push(x.to_vec());
            } else if value == best {
                found.push(x.to_vec());
            } else {
                return None;
            }
            Some(radius_for(&best))
        });

        let mut pairs: Vec<LatticePoint> = found
            .iter()
            .map(|x| {
                LatticePoint {
                    vector: red.combine(x),
                    coeffs: prep.lll.to_input_coeffs(x),
                }
                .canonical()
            })
            .collect();
        pairs.sort();

        let lambda2 = if b.rank() >= 2 {
            // Non-parallel to the first minimal vector; at least one reduced basis vector qualifies.
            let anchor = reduced_coeffs_of(&prep, &found, &pairs[0]);
            let bound = red
                .columns()
                .iter()
                .enumerate()
                .filter(|(i, _)| !parallel(&unit(b.rank(), *i), &anchor))
                .map(|(_, c)| norm_value(c, norm))
                .min()
                .expect("rank >= 2 leaves a non-parallel basis vector");
            let mut best2 = bound.clone();
            search(&prep.mu, &prep.bsq, radius_for(&bound), &mut |x, l2| {
                if parallel(x, &anchor) {
                    return None;
                }
                let value = match norm {
                    Norm::L2 => l2.clone(),
                    Norm::Linf => linf(&red.combine(x)),
                };
                if value < best2 {
                    best2 = value;
                    Some(radius_for(&best2))
                } else {
                    None
                }
            });
            Some(best2)
        } else {
            None
        };

        Ok(SvpSummary {
            norm,
            lambda1: best,
            lambda2,
            minimal_pairs: pairs,
        })
    }

    /// Every nonzero lattice point with norm value at most `radius`, one per antipodal pair.
    ///
    /// `radius` follows the [`norm_value`] convention (squared for `L2`).
    pub fn ball(&self, b: &Basis, norm: Norm, radius: &Scalar) -> Result<Vec<LatticePoint>> {
        let prep = self.prepare(b)?;
        let red = &prep.lll.reduced;
        let l2_radius = match norm {
            Norm::L2 => radius.clone(),
            Norm::Linf => int(b.ambient_dim() as i64) * radius * radius,
        };
        let mut out = Vec::new();
        search(&prep.mu, &prep.bsq, l2_radius, &mut |x, _| {
            let v = red.combine(x);
            if norm_value(&v, norm) <= *radius {
                out.push(
                    LatticePoint {
                        vector: v,
                        coeffs: prep.lll.to_input_coeffs(x),
                    }
                    .canonical(),
                );
            }
            None
        });
        out.sort();
        Ok(out)
    }
}

fn unit(n: usize, i: usize) -> CoeffVector {
    (0..n)
        .map(|j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
        .collect()
}

fn reduced_coeffs_of(prep: &Prepared, found: &[CoeffVector], point: &LatticePoint) -> CoeffVector {
    found
        .iter()
        .find(|x| {
            let v = prep.lll.reduced.combine(x);
            v == point.vector || v.iter().zip(&point.vector).all(|(a, b)| *a == -b)
        })
        .cloned()
        .expect("canonical point comes from the enumerated set")
}

/// Whether two nonzero integer vectors are rational multiples of each other.
pub(crate) fn parallel(x: &[BigInt], y: &[BigInt]) -> bool {
    let Some(p) = y.iter().position(|v| !v.is_zero()) else {
        return true;
    };
    (0..x.len()).all(|i| &x[i] * &y[p] == &x[p] * &y[i])
}

/// Depth-first enumeration of `{x != 0 : |sum x_i b_i|^2 <= radius}` up to sign.
///
/// `visit` receives the coefficient vector and its squared length and may return a
/// new (tighter) radius.
fn search(
    mu: &[Vec<Scalar>],
    bsq: &[Scalar],
    radius: Scalar,
    visit: &mut dyn FnMut(&[BigInt], &Scalar) -> Option<Scalar>,
) {
    let n = bsq.len();
    let mut x = vec![BigInt::zero(); n];
    let mut radius = radius;
    descend(
        mu,
        bsq,
        n - 1,
        &mut x,
        &Scalar::zero(),
        true,
        &mut radius,
        visit,
    );
}

#[allow(clippy::too_many_arguments)]
fn descend(
    mu: &[Vec<Scalar>],
    bsq: &[Scalar],
    k: usize,
    x: &mut Vec<BigInt>,
    partial: &Scalar,
    zero_above: bool,
    radius: &mut Scalar,
    visit: &mut dyn FnMut(&[BigInt], &Scalar) -> Option<Scalar>,
) {
    let n = bsq.len();
    let mut shift = Scalar::zero();
    for j in k + 1..n {
        if !x[j].is_zero() {
            shift += &mu[j][k] * big(x[j].clone());
        }
    }
    // Contribution of level k is (x_k + shift)^2 * bsq[k]; centre is -shift.
    let start = if zero_above {
        BigInt::zero()
    } else {
        (-&shift).round().to_integer()
    };
    let directions: &[i32] = if zero_above { &[1] } else { &[1, -1] };
    for &dir in directions {
        let mut t = if dir == 1 { start.clone() } else { &start - 1 };
        loop {
            let y = big(t.clone()) + &shift;
            let total = partial + &y * &y * &bsq[k];
            if total > *radius {
                break;
            }
            x[k] = t.clone();
            let still_zero = zero_above && t.is_zero();
            if k == 0 {
                if !still_zero {
                    if let Some(r) = visit(x, &total) {
                        *radius = r;
                    }
                }
            } else {
                descend(mu, bsq, k - 1, x, &total, still_zero, radius, visit);
            }
            t += dir;
        }
    }
    x[k] = BigInt::zero();
}

pub fn enumerate_shortest(b: &Basis, norm: Norm) -> Result<SvpSummary> {
    Enumerator::default().shortest(b, norm)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryKind {
    GapSvp,
    Dusvp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
        }
    }
}

/// A decision query. Threshold and gap are carried squared so that derived
/// queries with irrational `d` or `gamma` remain exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleQuery {
    pub basis: Basis,
    pub d_sq: Scalar,
    pub gamma_sq: Scalar,
    pub kind: QueryKind,
    pub norm: Norm,
}

impl OracleQuery {
    pub fn new(
        basis: Basis,
        d: Scalar,
        gamma: Scalar,
        kind: QueryKind,
        norm: Norm,
    ) -> Result<Self> {
        if !d.is_positive() {
            return Err(LatticeError::Parameter("d must be positive".into()));
        }
        let d_sq = &d * &d;
        let gamma_sq = &gamma * &gamma;
        if gamma < int(1) {
            return Err(LatticeError::Parameter("gamma must be at least 1".into()));
        }
        Self::from_squares(basis, d_sq, gamma_sq, kind, norm)
    }

    pub fn from_squares(
        basis: Basis,
        d_sq: Scalar,
        gamma_sq: Scalar,
        kind: QueryKind,
        norm: Norm,
    ) -> Result<Self> {
        if !d_sq.is_positive() {
            return Err(LatticeError::Parameter("d must be positive".into()));
        }
        if gamma_sq < int(1) {
            return Err(LatticeError::Parameter("gamma must be at least 1".into()));
        }
        Ok(Self {
            basis,
            d_sq,
            gamma_sq,
            kind,
            norm,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleAnswer {
    pub verdict: Answer,
    pub promise_checked: bool,
    pub promise_holds: bool,
    pub summary: SvpSummary,
}

/// Exact answer to a GapSVP or dUSVP query; promise violations are reported, not hidden.
pub fn decision_oracle(q: &OracleQuery) -> Result<OracleAnswer> {
    decision_oracle_with(&Enumerator::default(), q)
}

pub fn decision_oracle_with(e: &Enumerator, q: &OracleQuery) -> Result<OracleAnswer> {
    let summary = e.shortest(&q.basis, q.norm)?;
    let l1 = summary.lambda1_sq();
    let yes = l1 <= q.d_sq;
    let promise_holds = match q.kind {
        QueryKind::GapSvp => yes || l1 > &q.gamma_sq * &q.d_sq,
        QueryKind::Dusvp => summary.is_gamma_unique(&q.gamma_sq),
    };
    Ok(OracleAnswer {
        verdict: if yes { Answer::Yes } else { Answer::No },
        promise_checked: true,
        promise_holds,
        summary,
    })
}

/// Coefficient parities of `coeffs`, as a bit vector.
pub(crate) fn parity(coeffs: &[BigInt]) -> Vec<bool> {
    coeffs.iter().map(|c| c.is_odd()).collect()
}

/// Counts Euclidean minimal vectors against `2^(n+1)` and re-derives the mod-2 argument.
pub fn count_shortest_certificate(b: &Basis) -> Result<Certificate> {
    count_shortest_certificate_with(&Enumerator::default(), b)
}

pub fn count_shortest_certificate_with(e: &Enumerator, b: &Basis) -> Result<Certificate> {
    let s = e.shortest(b, Norm::L2)?;
    let n = b.rank();
    let limit = pow2(n as i64 + 1);
    let count = s.vector_count();
    let parities: Vec<Vec<bool>> = s.minimal_pairs.iter().map(|p| parity(&p.coeffs)).collect();
    let nonzero = parities.iter().all(|p| p.iter().any(|&b| b));
    let distinct = parities.iter().collect::<HashSet<_>>().len() == parities.len();
    Ok(Certificate::new("svp.minimal_count")
        .count("rank", n)
        .count("minimal_vectors", count)
        .witness("bound", limit.clone())
        .witness("lambda1_sq", s.lambda1.clone())
        .flag("parities_nonzero", nonzero)
        .flag("parities_distinct", distinct)
        .passed_if(big(BigInt::from(count)) <= limit && nonzero && distinct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::vector;

    fn basis(cols: &[&[i64]]) -> Basis {
        Basis::from_integer_columns(&cols.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn z2_summary() {
        let s = enumerate_shortest(&Basis::identity(2), Norm::L2).unwrap();
        assert_eq!(s.lambda1, int(1));
        assert_eq!(s.lambda2, Some(int(1)));
        assert_eq!(s.pair_count(), 2);
        let vs: Vec<_> = s.minimal_pairs.iter().map(|p| p.vector.clone()).collect();
        assert_eq!(vs, vec![vector(&[0, 1]), vector(&[1, 0])]);
    }

    #[test]
    fn diag_and_skew_examples() {
        let s = enumerate_shortest(&Basis::diagonal(&[1, 5]), Norm::L2).unwrap();
        assert_eq!(
            (s.lambda1.clone(), s.lambda2.clone(), s.pair_count()),
            (int(1), Some(int(25)), 1)
        );
        let s = enumerate_shortest(&basis(&[&[2, 0], &[1, 2]]), Norm::L2).unwrap();
        assert_eq!(s.lambda1, int(4));
        assert_eq!(s.lambda2, Some(int(5)));
        assert_eq!(s.minimal_pairs[0].vector, vector(&[2, 0]));
        assert_eq!(
            s.minimal_pairs[0].coeffs,
            vec![BigInt::from(1), BigInt::from(0)]
        );
    }

    #[test]
    fn linf_z2_has_four_pairs() {
        let s = enumerate_shortest(&Basis::identity(2), Norm::Linf).unwrap();
        assert_eq!(s.lambda1, int(1));
        assert_eq!(s.pair_count(), 4);
        assert_eq!(s.lambda2, Some(int(1)));
    }

    #[test]
    fn rank_one_has_no_second_minimum() {
        let s = enumerate_shortest(&basis(&[&[3, 4]]), Norm::L2).unwrap();
        assert_eq!(s.lambda1, int(25));
        assert_eq!(s.lambda2, None);
    }

    #[test]
    fn rank_cap_refuses() {
        let e = Enumerator::new(2).unwrap();
        assert!(matches!(
            e.shortest(&Basis::identity(3), Norm::L2),
            Err(LatticeError::RankCapExceeded { rank: 3, cap: 2 })
        ));
        assert!(Enumerator::new(11).is_err());
    }

    #[test]
    fn ball_counts_z2() {
        // Points of Z^2 with |v|^2 <= 2, up to sign: e1, e2, e1+e2, e1-e2.
        let pts = Enumerator::default()
            .ball(&Basis::identity(2), Norm::L2, &int(2))
            .unwrap();
        assert_eq!(pts.len(), 4);
    }

    #[test]
    fn decision_examples() {
        let q = OracleQuery::new(
            Basis::identity(2),
            int(1),
            int(1),
            QueryKind::GapSvp,
            Norm::L2,
        )
        .unwrap();
        let a = decision_oracle(&q).unwrap();
        assert_eq!(a.verdict, Answer::Yes);
        assert!(a.promise_holds);

        let q = OracleQuery::new(
            Basis::diagonal(&[1, 5]),
            crate::scalar::ratio(1, 2),
            int(2),
            QueryKind::Dusvp,
            Norm::L2,
        )
        .unwrap();
        let a = decision_oracle(&q).unwrap();
        assert_eq!(a.verdict, Answer::No);
        assert!(a.promise_holds);

        let q = OracleQuery::new(
            Basis::identity(2),
            int(1),
            int(2),
            QueryKind::Dusvp,
            Norm::L2,
        )
        .unwrap();
        assert!(!decision_oracle(&q).unwrap().promise_holds);

        // Gap region: d < lambda_1 <= gamma d.
        let q = OracleQuery::new(
            Basis::diagonal(&[3, 7]),
            int(2),
            int(2),
            QueryKind::GapSvp,
            Norm::L2,
        )
        .unwrap();
        let a = decision_oracle(&q).unwrap();
        assert_eq!(a.verdict, Answer::No);
        assert!(!a.promise_holds);
    }

    #[test]
    fn count_examples() {
        let c = count_shortest_certificate(&Basis::identity(2)).unwrap();
        assert!(c.is_pass());
        assert_eq!(c.get("minimal_vectors"), Some(&int(4)));
        assert_eq!(c.get("bound"), Some(&int(8)));
        let c = count_shortest_certificate(&basis(&[&[1, 1], &[1, -1]])).unwrap();
        assert!(c.is_pass());
        assert_eq!(c.get("minimal_vectors"), Some(&int(4)));
        let c = count_shortest_certificate(&Basis::diagonal(&[1, 5])).unwrap();
        assert_eq!(c.get("minimal_vectors"), Some(&int(2)));
    }
}
