//! Verifying that a unique-SVP instance is a NO instance.
//!
//! A witness is a primitive lattice vector `v`. Projecting the lattice orthogonally
//! to `v` leaves a lattice whose first minimum is large exactly when `v` was the
//! shortest vector, and a GapSVP sub-verifier confirms that on the projection.
//! Here the sub-verifier is the exact enumeration oracle.

use num_traits::Signed;

use crate::certificate::{Certificate, Verdict};
use crate::error::{LatticeError, Result};
use crate::lattice::{is_primitive, membership_coeffs, reduce_dimension, Basis, ReduceMode};
use crate::scalar::{int, is_zero_vec, norm_sq, ratio, LatticeVector, Scalar};
use crate::svp::{
    decision_oracle_with, Answer, Enumerator, Norm, OracleQuery, QueryKind, SvpSummary,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoInstanceWitness {
    pub v: LatticeVector,
    /// Payload for a non-exact sub-verifier; empty for the exact oracle.
    pub sub_witness: Vec<u8>,
}

impl NoInstanceWitness {
    pub fn new(v: LatticeVector) -> Result<Self> {
        if is_zero_vec(&v) {
            return Err(LatticeError::Domain(
                "witness vector must be nonzero".into(),
            ));
        }
        Ok(Self {
            v,
            sub_witness: Vec::new(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RejectReason {
    NotMember,
    NotPrimitive,
    NotLongerThanD,
    SubVerifier,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::NotMember => "witness is not a lattice vector",
            RejectReason::NotPrimitive => "witness is not primitive",
            RejectReason::NotLongerThanD => "witness is not longer than d",
            RejectReason::SubVerifier => "projected lattice has a short vector",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject(RejectReason),
}

impl Decision {
    pub fn is_accept(self) -> bool {
        self == Decision::Accept
    }
}

fn check_promise(e: &Enumerator, b: &Basis, gamma_sq: &Scalar) -> Result<SvpSummary> {
    let s = e.shortest(b, Norm::L2)?;
    if !s.is_gamma_unique(gamma_sq) {
        return Err(LatticeError::Domain(format!(
            "lattice is not gamma-unique for gamma^2 = {gamma_sq}"
        )));
    }
    Ok(s)
}

fn gamma_sq_of(gamma: &Scalar) -> Result<Scalar> {
    if *gamma < int(1) {
        return Err(LatticeError::Parameter("gamma must be at least 1".into()));
    }
    Ok(gamma * gamma)
}

/// Checks the applicable branch of the projection dichotomy for a primitive `v`.
pub fn projection_dichotomy_check(b: &Basis, gamma: &Scalar, v: &[Scalar]) -> Result<Certificate> {
    projection_dichotomy_check_with(&Enumerator::default(), b, gamma, v)
}

pub fn projection_dichotomy_check_with(
    e: &Enumerator,
    b: &Basis,
    gamma: &Scalar,
    v: &[Scalar],
) -> Result<Certificate> {
    if b.rank() < 2 {
        return Err(LatticeError::Dimension(
            "cannot project a rank-1 lattice".into(),
        ));
    }
    let gamma_sq = gamma_sq_of(gamma)?;
    let s = check_promise(e, b, &gamma_sq)?;
    if !is_primitive(b, v)? {
        return Err(LatticeError::Domain(
            "v is not a primitive lattice vector".into(),
        ));
    }
    let projected = reduce_dimension(b, v, ReduceMode::ProjectMember)?;
    let p = e.shortest(&projected, Norm::L2)?;
    let v_sq = norm_sq(v);
    let shortest = v_sq == s.lambda1;
    let (bound, holds) = if shortest {
        let bound = (&gamma_sq - ratio(1, 4)) * &v_sq;
        let holds = p.lambda1 >= bound;
        (bound, holds)
    } else {
        let bound = &v_sq / &gamma_sq;
        let holds = p.lambda1 <= bound;
        (bound, holds)
    };
    Ok(Certificate::new("verifier.projection_dichotomy")
        .flag("v_is_shortest", shortest)
        .witness("v_norm_sq", v_sq)
        .witness("lambda1_sq", s.lambda1.clone())
        .witness("projected_lambda1_sq", p.lambda1.clone())
        .witness("bound_sq", bound)
        .count("projected_rank", projected.rank())
        .passed_if(holds))
}

/// Runs the verifier on one witness; the dUSVP promise must hold for `b`.
pub fn verify_no_instance(
    b: &Basis,
    d: &Scalar,
    gamma: &Scalar,
    witness: &NoInstanceWitness,
) -> Result<Decision> {
    verify_no_instance_with(&Enumerator::default(), b, d, gamma, witness)
}

pub fn verify_no_instance_with(
    e: &Enumerator,
    b: &Basis,
    d: &Scalar,
    gamma: &Scalar,
    witness: &NoInstanceWitness,
) -> Result<Decision> {
    if !d.is_positive() {
        return Err(LatticeError::Parameter("d must be positive".into()));
    }
    let gamma_sq = gamma_sq_of(gamma)?;
    check_promise(e, b, &gamma_sq)?;
    decide(e, b, &(d * d), &gamma_sq, &witness.v)
}

fn decide(
    e: &Enumerator,
    b: &Basis,
    d_sq: &Scalar,
    gamma_sq: &Scalar,
    v: &[Scalar],
) -> Result<Decision> {
    if v.len() != b.ambient_dim() {
        return Err(LatticeError::Dimension(format!(
            "witness has {} entries, lattice lives in dimension {}",
            v.len(),
            b.ambient_dim()
        )));
    }
    if !membership_coeffs(b, v)?.is_member() {
        return Ok(Decision::Reject(RejectReason::NotMember));
    }
    if !is_primitive(b, v)? {
        return Ok(Decision::Reject(RejectReason::NotPrimitive));
    }
    let v_sq = norm_sq(v);
    if v_sq <= *d_sq {
        return Ok(Decision::Reject(RejectReason::NotLongerThanD));
    }
    if b.rank() == 1 {
        // The projection is the zero lattice; its first minimum is unbounded.
        return Ok(Decision::Accept);
    }
    let projected = reduce_dimension(b, v, ReduceMode::ProjectMember)?;
    let sub_d_sq = &v_sq / gamma_sq;
    let sub_gamma_sq = gamma_sq * (gamma_sq - ratio(1, 4));
    let q = OracleQuery::from_squares(
        projected,
        sub_d_sq,
        sub_gamma_sq.max(int(1)),
        QueryKind::GapSvp,
        Norm::L2,
    )?;
    Ok(match decision_oracle_with(e, &q)?.verdict {
        Answer::No => Decision::Accept,
        Answer::Yes => Decision::Reject(RejectReason::SubVerifier),
    })
}

/// The shortest vector, which the verifier accepts on every NO instance.
pub fn canonical_witness(b: &Basis) -> Result<NoInstanceWitness> {
    let s = Enumerator::default().shortest(b, Norm::L2)?;
    NoInstanceWitness::new(s.minimal_pairs[0].vector.clone())
}

/// On a NO instance, certifies that the shortest vector is accepted.
pub fn completeness_certificate(b: &Basis, d: &Scalar, gamma: &Scalar) -> Result<Certificate> {
    completeness_certificate_with(&Enumerator::default(), b, d, gamma)
}

pub fn completeness_certificate_with(
    e: &Enumerator,
    b: &Basis,
    d: &Scalar,
    gamma: &Scalar,
) -> Result<Certificate> {
    let gamma_sq = gamma_sq_of(gamma)?;
    if gamma_sq < int(2) {
        return Err(LatticeError::Parameter(
            "completeness needs gamma^2 >= 2".into(),
        ));
    }
    let s = check_promise(e, b, &gamma_sq)?;
    let cert = Certificate::new("verifier.completeness")
        .witness("lambda1_sq", s.lambda1.clone())
        .witness("d_sq", d * d);
    if s.lambda1 <= d * d {
        return Ok(cert.note("YES instance").verdict(Verdict::NotApplicable));
    }
    let v = &s.minimal_pairs[0].vector;
    let decision = decide(e, b, &(d * d), &gamma_sq, v)?;
    Ok(cert
        .flag("accepted", decision.is_accept())
        .passed_if(decision.is_accept()))
}

/// On a YES instance, runs the verifier on every primitive vector up to twice the
/// second minimum and certifies that none is accepted. Longer vectors are not
/// shortest, so the projection dichotomy already makes the sub-verifier reject them.
pub fn exhaustive_witness_search(b: &Basis, d: &Scalar, gamma: &Scalar) -> Result<Certificate> {
    exhaustive_witness_search_with(&Enumerator::default(), b, d, gamma)
}

pub fn exhaustive_witness_search_with(
    e: &Enumerator,
    b: &Basis,
    d: &Scalar,
    gamma: &Scalar,
) -> Result<Certificate> {
    if !d.is_positive() {
        return Err(LatticeError::Parameter("d must be positive".into()));
    }
    let gamma_sq = gamma_sq_of(gamma)?;
    let s = check_promise(e, b, &gamma_sq)?;
    let d_sq = d * d;
    let cert = Certificate::new("verifier.soundness_search")
        .witness("lambda1_sq", s.lambda1.clone())
        .witness("d_sq", d_sq.clone());
    if s.lambda1 > d_sq {
        return Ok(cert.note("NO instance").verdict(Verdict::NotApplicable));
    }
    let second = s.lambda2.clone().unwrap_or_else(|| s.lambda1.clone());
    let radius = int(4) * &second;
    let shell = e.ball(b, Norm::L2, &radius)?;
    let mut primitive = 0usize;
    let mut accepted = 0usize;
    for p in &shell {
        if !is_primitive(b, &p.vector)? {
            continue;
        }
        primitive += 1;
        if decide(e, b, &d_sq, &gamma_sq, &p.vector)?.is_accept() {
            accepted += 1;
        }
    }
    Ok(cert
        .witness("shell_radius_sq", radius)
        .count("shell_pairs", shell.len())
        .count("primitive_checked", primitive)
        .count("accepted", accepted)
        .note("vectors beyond the shell are not shortest; the projection bound rejects them")
        .passed_if(accepted == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::vector;

    #[test]
    fn dichotomy_examples() {
        let b = Basis::diagonal(&[1, 5]);
        let c = projection_dichotomy_check(&b, &int(5), &vector(&[0, 5])).unwrap();
        assert!(c.is_pass());
        assert_eq!(c.get("projected_lambda1_sq"), Some(&int(1)));
        assert_eq!(c.get("bound_sq"), Some(&int(1)));
        let c = projection_dichotomy_check(&b, &int(5), &vector(&[1, 0])).unwrap();
        assert!(c.is_pass());
        assert_eq!(c.get("projected_lambda1_sq"), Some(&int(25)));
        let r = Basis::from_integer_columns(&[vec![1, 0]]).unwrap();
        assert!(matches!(
            projection_dichotomy_check(&r, &int(5), &vector(&[1, 0])),
            Err(LatticeError::Dimension(_))
        ));
        assert!(matches!(
            projection_dichotomy_check(&Basis::identity(2), &int(2), &vector(&[1, 0])),
            Err(LatticeError::Domain(_))
        ));
    }

    #[test]
    fn verify_examples() {
        let b = Basis::diagonal(&[3, 15]);
        let w = |x: i64, y: i64| NoInstanceWitness::new(vector(&[x, y])).unwrap();
        assert_eq!(
            verify_no_instance(&b, &int(2), &int(5), &w(3, 0)).unwrap(),
            Decision::Accept
        );
        assert_eq!(
            verify_no_instance(&b, &int(2), &int(5), &w(6, 0)).unwrap(),
            Decision::Reject(RejectReason::NotPrimitive)
        );
        assert_eq!(
            verify_no_instance(&b, &int(2), &int(5), &w(1, 0)).unwrap(),
            Decision::Reject(RejectReason::NotMember)
        );
        let b = Basis::diagonal(&[1, 5]);
        for (x, y) in [(1, 0), (0, 5), (1, 5), (2, 5)] {
            assert!(!verify_no_instance(&b, &int(1), &int(5), &w(x, y))
                .unwrap()
                .is_accept());
        }
        assert!(NoInstanceWitness::new(vector(&[0, 0])).is_err());
    }

    #[test]
    fn search_examples() {
        let b = Basis::diagonal(&[1, 5]);
        assert!(exhaustive_witness_search(&b, &int(1), &int(5))
            .unwrap()
            .is_pass());
        let c = exhaustive_witness_search(&b, &ratio(1, 2), &int(5)).unwrap();
        assert_eq!(c.verdict, Verdict::NotApplicable);
        let b = Basis::diagonal(&[2, 2]);
        assert!(exhaustive_witness_search(&b, &int(2), &int(1))
            .unwrap()
            .is_pass());
    }

    #[test]
    fn completeness_on_scaled_diag() {
        let b = Basis::diagonal(&[3, 15]);
        assert!(completeness_certificate(&b, &int(2), &int(5))
            .unwrap()
            .is_pass());
        assert!(completeness_certificate(&b, &int(2), &int(1)).is_err());
    }
}
