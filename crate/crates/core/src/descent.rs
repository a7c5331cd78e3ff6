//! Search-to-decision for unique SVP.
//!
//! Only a decision oracle is consulted. The driver estimates `|u|` to within a
//! factor of two, then repeatedly passes to an index-2 sublattice that still
//! contains `u`. Once the determinant has grown enough, a short dual vector must
//! be orthogonal to `u`, and the rank drops by one. At rank 1 the generator is `u`
//! up to a scalar.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use crate::certificate::Certificate;
use crate::error::{LatticeError, Result};
use crate::gso::{gram_gso, lll_reduce, LllParams};
use crate::lattice::{
    det_squared, dual_basis, membership_coeffs, reduce_dimension, Basis, ReduceMode,
};
use crate::scalar::{
    add_vec, big, ceil_log4, floor_log4, gcd_all, int, norm_sq, pow2, CoeffVector, LatticeVector,
    Scalar,
};
use crate::svp::{decision_oracle_with, Answer, Enumerator, Norm, OracleQuery, QueryKind};

/// A dUSVP decision procedure. Answers `Yes` iff the first minimum is at most `d`.
pub trait DusvpOracle {
    fn query(&mut self, b: &Basis, d: &Scalar) -> Result<Answer>;
    fn calls(&self) -> usize;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryRecord {
    pub basis_hash: String,
    pub rank: usize,
    pub d: Scalar,
    pub verdict: Answer,
    pub promise_holds: bool,
}

/// SHA-256 of the lattice text form of `b`.
pub fn basis_hash(b: &Basis) -> String {
    hex::encode(Sha256::digest(b.to_string().as_bytes()))
}

/// Exact oracle that checks the uniqueness promise on every query and aborts on violation.
#[derive(Clone, Debug)]
pub struct ExactDusvpOracle {
    enumerator: Enumerator,
    gamma_sq: Scalar,
    pub transcript: Vec<QueryRecord>,
}

impl ExactDusvpOracle {
    pub fn new(gamma: &Scalar) -> Result<Self> {
        Self::with_enumerator(Enumerator::default(), gamma)
    }

    pub fn with_enumerator(enumerator: Enumerator, gamma: &Scalar) -> Result<Self> {
        if *gamma < int(1) {
            return Err(LatticeError::Parameter(
                "oracle gamma must be at least 1".into(),
            ));
        }
        Ok(Self {
            enumerator,
            gamma_sq: gamma * gamma,
            transcript: Vec::new(),
        })
    }

    pub fn gamma_sq(&self) -> &Scalar {
        &self.gamma_sq
    }
}

impl DusvpOracle for ExactDusvpOracle {
    fn query(&mut self, b: &Basis, d: &Scalar) -> Result<Answer> {
        let q = OracleQuery::from_squares(
            b.clone(),
            d * d,
            self.gamma_sq.clone(),
            QueryKind::Dusvp,
            Norm::L2,
        )?;
        let a = decision_oracle_with(&self.enumerator, &q)?;
        let record = QueryRecord {
            basis_hash: basis_hash(b),
            rank: b.rank(),
            d: d.clone(),
            verdict: a.verdict,
            promise_holds: a.promise_holds,
        };
        self.transcript.push(record);
        if !a.promise_holds {
            return Err(LatticeError::PromiseViolation(format!(
                "query {} (basis {}, d = {}): lambda2^2 = {:?} below {} * lambda1^2 = {}",
                self.transcript.len(),
                basis_hash(b),
                d,
                a.summary.lambda2.as_ref().map(ToString::to_string),
                self.gamma_sq,
                a.summary.lambda1
            )));
        }
        Ok(a.verdict)
    }

    fn calls(&self) -> usize {
        self.transcript.len()
    }
}

/// Smallest `t` with `t > n (n + log2 n)`, i.e. `2^t > 2^(n^2) n^n`.
pub fn t_target(n: usize) -> usize {
    let rhs = (BigInt::one() << (n * n)) * BigInt::from(n).pow(n as u32);
    let mut t = n * n;
    while (BigInt::one() << t) <= rhs {
        t += 1;
    }
    t
}

/// Upper bound on the oracle calls made by [`solve_usvp`] at rank `n`.
pub fn call_budget(n: usize) -> usize {
    let log = usize::BITS as usize - n.saturating_sub(1).leading_zeros() as usize;
    3 * t_target(n) * n + n * (log + 3)
}

/// Returns `d = 2^k` with `d/2 < lambda1 <= d`, by binary search over `k` between the
/// smallest Gram-Schmidt length and the first vector of the LLL-reduced basis.
pub fn estimate_norm(b: &Basis, oracle: &mut dyn DusvpOracle) -> Result<Scalar> {
    let reduced = lll_reduce(b, &LllParams::default());
    let (_, bsq) = gram_gso(&reduced);
    let min_bsq = bsq.iter().min().expect("nonempty basis").clone();
    let mut lo = floor_log4(&min_bsq);
    let mut hi = ceil_log4(&norm_sq(reduced.column(0)));
    if oracle.query(&reduced, &pow2(hi))? == Answer::No {
        return Err(LatticeError::InvariantBreach(format!(
            "oracle says lambda1 > 2^{hi} although |b1| <= 2^{hi}"
        )));
    }
    // Invariant: 2^hi is YES; every k < lo is NO because 2^k < lambda1.
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match oracle.query(&reduced, &pow2(mid))? {
            Answer::Yes => hi = mid,
            Answer::No => lo = mid + 1,
        }
    }
    Ok(pow2(hi))
}

/// Candidate index-2 sublattices, in preference order.
pub fn descent_candidates(b: &Basis) -> Result<[Basis; 3]> {
    if b.rank() < 2 {
        return Err(LatticeError::Dimension(
            "descent needs rank at least 2".into(),
        ));
    }
    let cols = b.columns();
    let double = |v: &LatticeVector| v.iter().map(|x| x * int(2)).collect::<LatticeVector>();
    let with = |c0: LatticeVector, c1: LatticeVector| {
        let mut c = cols.to_vec();
        c[0] = c0;
        c[1] = c1;
        b.with_columns(c)
    };
    Ok([
        with(double(&cols[0]), cols[1].clone()),
        with(cols[0].clone(), double(&cols[1])),
        with(add_vec(&cols[0], &cols[1]), double(&cols[1])),
    ])
}

/// One descent step; returns the first candidate with a YES answer and its 1-based index.
pub fn descend_step(b: &Basis, d: &Scalar, oracle: &mut dyn DusvpOracle) -> Result<(Basis, usize)> {
    for (i, c) in descent_candidates(b)?.into_iter().enumerate() {
        if oracle.query(&c, d)? == Answer::Yes {
            return Ok((c, i + 1));
        }
    }
    Err(LatticeError::InvariantBreach(format!(
        "no descent candidate contains a vector of length at most {d}"
    )))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReduction {
    pub basis: Basis,
    pub dual_vector: LatticeVector,
    pub certificate: Certificate,
}

/// Passes from `level` to the rank-`(n-1)` sublattice orthogonal to a short vector of
/// the dual of `s`, where `s` is a deep enough sublattice of `level` containing `u`.
pub fn rank_reduce(level: &Basis, s: &Basis) -> Result<RankReduction> {
    let n = s.rank();
    if n < 2 || level.rank() != n {
        return Err(LatticeError::Dimension(
            "rank reduction needs matching ranks of at least 2".into(),
        ));
    }
    if !level.is_integral() {
        return Err(LatticeError::Domain(
            "rank reduction needs an integer lattice".into(),
        ));
    }
    let t = t_target(n);
    let det_level = det_squared(level)?;
    let det_s = det_squared(s)?;
    let growth = big(BigInt::one() << (2 * t));
    if det_s < &growth * &det_level {
        return Err(LatticeError::Refused(format!(
            "sublattice determinant has not grown by 2^{t}; descend further"
        )));
    }
    let dual = dual_basis(s)?;
    let v = lll_reduce(&dual.basis, &LllParams::default())
        .column(0)
        .clone();
    let v_sq = norm_sq(&v);
    // |<u, v>| <= |u| |v| <= sqrt(n) det(level)^(1/n) |v| < 1, compared as an n-th power.
    let mut lhs = det_level.clone();
    let nv = int(n as i64) * &v_sq;
    for _ in 0..n {
        lhs *= &nv;
    }
    let certificate = Certificate::new("descent.orthogonality_bound")
        .count("rank", n)
        .count("t", t)
        .witness("det_sq_level", det_level)
        .witness("det_sq_sublattice", det_s)
        .witness("dual_vector_norm_sq", v_sq)
        .witness("bound_nth_power", lhs.clone())
        .passed_if(lhs < int(1));
    if !certificate.is_pass() {
        return Err(LatticeError::InvariantBreach(format!(
            "dual vector too long: (n |v|^2)^n det^2 = {lhs}"
        )));
    }
    let basis = reduce_dimension(level, &v, ReduceMode::IntersectKernel)?;
    Ok(RankReduction {
        basis,
        dual_vector: v,
        certificate,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentState {
    pub current: Basis,
    pub rank: usize,
    pub steps_this_level: usize,
    pub t_target: usize,
    pub oracle_calls: usize,
    pub d_estimate: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelRecord {
    pub rank: usize,
    pub d_estimate: Scalar,
    /// Chosen candidate (1, 2 or 3) per descent step.
    pub choices: Vec<usize>,
    /// Lattice of the level followed by the lattice after every step.
    pub states: Vec<Basis>,
    pub reduction: RankReduction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UsvpSolution {
    pub vector: LatticeVector,
    /// Coefficients w.r.t. the input basis.
    pub coeffs: CoeffVector,
    pub oracle_calls: usize,
    pub levels: Vec<LevelRecord>,
}

/// Finds a shortest vector of a `gamma`-unique integer lattice with a dUSVP oracle
/// promised for `gamma / 2`.
pub fn solve_usvp(b: &Basis, gamma: &Scalar) -> Result<(UsvpSolution, Vec<QueryRecord>)> {
    let half = gamma / int(2);
    if *gamma < int(2) {
        return Err(LatticeError::Parameter("gamma must be at least 2".into()));
    }
    let e = Enumerator::default();
    let mut oracle = ExactDusvpOracle::with_enumerator(e, &half)?;
    let out = solve_usvp_with(&e, b, gamma, &mut oracle);
    out.map(|s| (s, oracle.transcript))
}

/// As [`solve_usvp`], with the promise on the input checked by `e` and all
/// decisions delegated to `oracle`.
pub fn solve_usvp_with(
    e: &Enumerator,
    b: &Basis,
    gamma: &Scalar,
    oracle: &mut dyn DusvpOracle,
) -> Result<UsvpSolution> {
    if *gamma < int(2) {
        return Err(LatticeError::Parameter("gamma must be at least 2".into()));
    }
    if !b.is_integral() {
        return Err(LatticeError::Domain(
            "search-to-decision needs an integer lattice".into(),
        ));
    }
    let s = e.shortest(b, Norm::L2)?;
    if !s.is_gamma_unique(&(gamma * gamma)) {
        return Err(LatticeError::PromiseViolation(format!(
            "input is not gamma-unique: lambda1^2 = {}, lambda2^2 = {:?}",
            s.lambda1,
            s.lambda2.as_ref().map(ToString::to_string)
        )));
    }
    let lll = LllParams::default();
    let start_calls = oracle.calls();
    let mut level = lll_reduce(b, &lll);
    let mut levels = Vec::new();
    while level.rank() > 1 {
        let n = level.rank();
        let d = estimate_norm(&level, oracle)?;
        let mut state = DescentState {
            current: level.clone(),
            rank: n,
            steps_this_level: 0,
            t_target: t_target(n),
            oracle_calls: oracle.calls() - start_calls,
            d_estimate: d.clone(),
        };
        let mut choices = Vec::with_capacity(state.t_target);
        let mut states = vec![level.clone()];
        while state.steps_this_level < state.t_target {
            let (next, choice) = descend_step(&state.current, &d, oracle)?;
            state.current = lll_reduce(&next, &lll);
            state.steps_this_level += 1;
            state.oracle_calls = oracle.calls() - start_calls;
            choices.push(choice);
            states.push(state.current.clone());
        }
        let reduction = rank_reduce(&level, &state.current)?;
        level = lll_reduce(&reduction.basis, &lll);
        levels.push(LevelRecord {
            rank: n,
            d_estimate: d,
            choices,
            states,
            reduction,
        });
    }
    let generator = level.column(0);
    let coeffs = membership_coeffs(b, generator)?
        .coeffs()
        .cloned()
        .ok_or_else(|| LatticeError::InvariantBreach("final generator left the lattice".into()))?;
    let g = gcd_all(&coeffs);
    if g.is_zero() {
        return Err(LatticeError::InvariantBreach(
            "final generator is zero".into(),
        ));
    }
    let mut coeffs: CoeffVector = coeffs.iter().map(|c| c / &g).collect();
    if coeffs
        .iter()
        .find(|c| !c.is_zero())
        .is_some_and(|c| c.is_negative())
    {
        coeffs = coeffs.iter().map(|c| -c).collect();
    }
    Ok(UsvpSolution {
        vector: b.combine(&coeffs),
        coeffs,
        oracle_calls: oracle.calls() - start_calls,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, vector};

    #[test]
    fn t_target_values() {
        // n (n + log2 n): 1 -> 1, 2 -> 6, 3 -> 13.75, 4 -> 24
        assert_eq!(t_target(1), 2);
        assert_eq!(t_target(2), 7);
        assert_eq!(t_target(3), 14);
        assert_eq!(t_target(4), 25);
    }

    #[test]
    fn estimate_examples() {
        let mut o = ExactDusvpOracle::new(&int(5)).unwrap();
        assert_eq!(
            estimate_norm(&Basis::diagonal(&[1, 5]), &mut o).unwrap(),
            int(1)
        );
        assert_eq!(o.transcript[0].verdict, Answer::Yes);
        let mut o = ExactDusvpOracle::new(&ratio(7, 6)).unwrap();
        assert_eq!(
            estimate_norm(&Basis::diagonal(&[3, 7]), &mut o).unwrap(),
            int(4)
        );
        let mut o = ExactDusvpOracle::new(&int(1)).unwrap();
        assert!(estimate_norm(&Basis::identity(2), &mut o).is_ok());
        let mut o = ExactDusvpOracle::new(&int(2)).unwrap();
        assert!(matches!(
            estimate_norm(&Basis::identity(2), &mut o),
            Err(LatticeError::PromiseViolation(_))
        ));
    }

    #[test]
    fn descend_examples() {
        let mut o = ExactDusvpOracle::new(&ratio(5, 2)).unwrap();
        let (b, choice) = descend_step(&Basis::diagonal(&[1, 5]), &int(1), &mut o).unwrap();
        assert_eq!(choice, 2);
        assert_eq!(b, Basis::diagonal(&[1, 10]));
        // u = b1 + b2 with both coefficients odd
        let b = Basis::from_integer_columns(&[vec![1, -7], vec![0, 7]]).unwrap();
        let (c, choice) = descend_step(&b, &int(1), &mut o).unwrap();
        assert_eq!(choice, 3);
        assert!(membership_coeffs(&c, &vector(&[1, 0])).unwrap().is_member());
        let r = Basis::from_integer_columns(&[vec![1, 0]]).unwrap();
        assert!(descend_step(&r, &int(1), &mut o).is_err());
    }

    #[test]
    fn rank_reduce_on_diag() {
        let b = Basis::diagonal(&[1, 5]);
        let t = t_target(2);
        let s = Basis::new(vec![vector(&[1, 0]), vec![int(0), pow2(t as i64) * int(5)]]).unwrap();
        let r = rank_reduce(&b, &s).unwrap();
        assert!(r.certificate.is_pass());
        assert_eq!(r.basis.rank(), 1);
        assert_eq!(r.basis.column(0), &vector(&[1, 0]));
        let shallow = Basis::diagonal(&[1, 10]);
        assert!(matches!(
            rank_reduce(&b, &shallow),
            Err(LatticeError::Refused(_))
        ));
    }

    #[test]
    fn solve_examples() {
        let (s, transcript) = solve_usvp(&Basis::diagonal(&[1, 5]), &int(5)).unwrap();
        assert_eq!(s.vector, vector(&[1, 0]));
        assert_eq!(s.oracle_calls, transcript.len());
        assert!(s.oracle_calls <= call_budget(2));
        let (s, _) = solve_usvp(&Basis::diagonal(&[3, 7, 8]), &ratio(7, 3)).unwrap();
        assert_eq!(s.vector, vector(&[3, 0, 0]));
        assert!(s.oracle_calls <= call_budget(3));
        assert!(matches!(
            solve_usvp(&Basis::identity(2), &int(2)),
            Err(LatticeError::PromiseViolation(_))
        ));
        assert!(matches!(
            solve_usvp(&Basis::diagonal(&[1, 5]), &ratio(3, 2)),
            Err(LatticeError::Parameter(_))
        ));
    }

    #[test]
    fn hash_is_stable() {
        let h = basis_hash(&Basis::identity(2));
        assert_eq!(h.len(), 64);
        assert_eq!(h, basis_hash(&Basis::identity(2)));
    }
}
