//! The acceptance suite: every module's invariants, checked over the corpus.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use usvp_core::amplify::{amplify, certify_l2_with, certify_linf_with, AmplifyParams};
use usvp_core::descent::{call_budget, solve_usvp_with, ExactDusvpOracle};
use usvp_core::gso::{coeff_bound_check, lll_reduce_with_transform, CoefficientBound, LllParams};
use usvp_core::lattice::{det_squared, is_primitive, membership_coeffs};
use usvp_core::scalar::{big, dot, floor_sqrt, int, norm_sq, ratio};
use usvp_core::sparsify::{
    isolated_gap_certificate_with, trial_seed, IsolationReport, Sparsifier, ISOLATION_TRIALS,
};
use usvp_core::svp::{count_shortest_certificate_with, Enumerator, Norm};
use usvp_core::verifier::{
    completeness_certificate_with, exhaustive_witness_search_with, projection_dichotomy_check_with,
};
use usvp_core::{Basis, Certificate, LatticeError, Scalar, Verdict};

use crate::corpus::{generate_corpus, Corpus, CorpusSpec, Instance};
use crate::error::LabError;
use crate::report::certificate_stream;

/// Highest rank of the max-norm sub-corpus.
pub const LINF_MAX_RANK: usize = 4;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub corpus: CorpusSpec,
    pub enumerator: Enumerator,
    pub trials: usize,
}

impl SuiteConfig {
    pub fn standard(seed: u64) -> Self {
        Self {
            corpus: CorpusSpec::standard(seed),
            enumerator: Enumerator::default(),
            trials: ISOLATION_TRIALS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: &'static str,
    pub checked: usize,
    pub violations: usize,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.checked > 0
    }

    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} [{}] {}: checked {}, violations {}{}",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.checked,
            self.violations,
            if self.detail.is_empty() {
                String::new()
            } else {
                format!("; {}", self.detail)
            }
        )
    }

    fn certificate(&self) -> Certificate {
        Certificate::new(format!("suite.criterion.{}", self.id))
            .count("checked", self.checked)
            .count("violations", self.violations)
            .note(self.title)
            .passed_if(self.passed())
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionOutcome>,
    pub certificates: Vec<Certificate>,
    pub timing_ms: BTreeMap<String, u64>,
}

impl SuiteReport {
    pub fn certificate_stream(&self) -> String {
        certificate_stream(&self.certificates)
    }

    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(CriterionOutcome::passed)
    }
}

struct Collector<'a> {
    report: &'a mut SuiteReport,
}

impl Collector<'_> {
    fn push(&mut self, outcome: CriterionOutcome, certs: Vec<Certificate>, started: Instant) {
        self.report.timing_ms.insert(
            format!("criterion_{:02}", outcome.id),
            started.elapsed().as_millis() as u64,
        );
        self.report.certificates.extend(certs);
        self.report.certificates.push(outcome.certificate());
        self.report.criteria.push(outcome);
    }
}

fn tag(c: Certificate, id: &str) -> Certificate {
    c.with_instance(id)
}

fn failures(certs: &[Certificate]) -> usize {
    certs.iter().filter(|c| c.is_failed()).count()
}

fn outcome(
    id: usize,
    title: &'static str,
    checked: usize,
    violations: usize,
    detail: String,
) -> CriterionOutcome {
    CriterionOutcome {
        id,
        title,
        checked,
        violations,
        detail,
    }
}

/// Collects the first failing instance ids for the detail line.
fn failing_ids(certs: &[Certificate]) -> String {
    let mut ids: Vec<&str> = certs
        .iter()
        .filter(|c| c.is_failed())
        .map(|c| c.instance_id.as_str())
        .collect();
    ids.dedup();
    if ids.is_empty() {
        return String::new();
    }
    let shown: Vec<&str> = ids.iter().take(5).copied().collect();
    format!(
        "failing: {}{}",
        shown.join(", "),
        if ids.len() > 5 { ", ..." } else { "" }
    )
}

fn par_certs<F>(instances: &[&Instance], f: F) -> Result<Vec<Certificate>, LabError>
where
    F: Fn(&Instance) -> Result<Vec<Certificate>, LatticeError> + Sync,
{
    let per: Vec<Result<Vec<Certificate>, LatticeError>> = instances
        .par_iter()
        .map(|inst| f(inst).map(|cs| cs.into_iter().map(|c| tag(c, &inst.id)).collect()))
        .collect();
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}

fn lll_contract(inst: &Instance) -> Result<Vec<Certificate>, LatticeError> {
    Ok(vec![crate::commands::lll_contract(&inst.basis)?])
}

fn coefficient_bound(e: &Enumerator, inst: &Instance) -> Result<Vec<Certificate>, LatticeError> {
    let reduced = lll_reduce_with_transform(&inst.basis, &LllParams::default()).reduced;
    let s = e.shortest(&inst.basis, Norm::L2)?;
    let mut worst: Option<Vec<BigInt>> = None;
    let max_abs = |c: &[BigInt]| c.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero);
    for p in &s.minimal_pairs {
        let c = membership_coeffs(&reduced, &p.vector)?
            .coeffs()
            .cloned()
            .ok_or_else(|| {
                LatticeError::InvariantBreach("minimal vector left the lattice".into())
            })?;
        if worst.as_ref().is_none_or(|w| max_abs(&c) > max_abs(w)) {
            worst = Some(c);
        }
    }
    let worst = worst.expect("at least one minimal pair");
    Ok(vec![coeff_bound_check(
        &reduced,
        &worst,
        CoefficientBound::L2,
    )?
    .count("minimal_pairs", s.pair_count())])
}

fn amplification_l2(e: &Enumerator, inst: &Instance) -> Result<Vec<Certificate>, LatticeError> {
    let a = amplify(&inst.basis, AmplifyParams::l2())?;
    certify_l2_with(e, &a)
}

fn amplification_linf(e: &Enumerator, inst: &Instance) -> Result<Vec<Certificate>, LatticeError> {
    let a = amplify(&inst.basis, AmplifyParams::linf_for(&inst.basis))?;
    certify_linf_with(e, &a)
}

fn minimal_count(e: &Enumerator, inst: &Instance) -> Result<Vec<Certificate>, LatticeError> {
    Ok(vec![count_shortest_certificate_with(e, &inst.basis)?])
}

struct IsolationRun {
    id: String,
    report: IsolationReport,
    gap_certs: Vec<Certificate>,
}

fn isolation_run(
    e: &Enumerator,
    id: &str,
    b: &Basis,
    trials: usize,
    master_seed: u64,
) -> Result<IsolationRun, LatticeError> {
    let s = Sparsifier::with_enumerator(e, b)?;
    let per: Vec<Result<(_, Option<Certificate>), LatticeError>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let trace = s.chain(trial_seed(master_seed, t))?;
            let o = s.outcome(&trace)?;
            let gap = match o.first_isolation {
                Some(_) => Some(tag(
                    isolated_gap_certificate_with(e, &trace)?,
                    &format!("{id}/trial-{t:03}"),
                )),
                None => None,
            };
            Ok((o, gap))
        })
        .collect();
    let mut outcomes = Vec::with_capacity(trials);
    let mut gap_certs = Vec::new();
    for r in per {
        let (o, g) = r?;
        outcomes.push(o);
        gap_certs.extend(g);
    }
    Ok(IsolationRun {
        id: id.to_string(),
        report: IsolationReport {
            master_seed,
            outcomes,
        },
        gap_certs,
    })
}

fn dichotomy(e: &Enumerator, inst: &Instance) -> Result<Vec<Certificate>, LatticeError> {
    let gamma = inst.gamma.clone().expect("gamma-unique instance");
    let s = e.shortest(&inst.basis, Norm::L2)?;
    let mut certs = vec![projection_dichotomy_check_with(
        e,
        &inst.basis,
        &gamma,
        &s.minimal_pairs[0].vector,
    )?];
    let l2 = s.lambda2.clone().expect("rank at least 2");
    for p in e.ball(&inst.basis, Norm::L2, &l2)? {
        if norm_sq(&p.vector) > s.lambda1 && is_primitive(&inst.basis, &p.vector)? {
            certs.push(projection_dichotomy_check_with(
                e,
                &inst.basis,
                &gamma,
                &p.vector,
            )?);
        }
    }
    Ok(certs)
}

/// Thresholds on either side of `lambda1`: the largest integer below it (or 1/2),
/// and the smallest integer at or above it.
fn no_and_yes_d(lambda1_sq: &Scalar) -> (Scalar, Scalar) {
    let below = floor_sqrt(&(lambda1_sq - int(1)));
    let no = if below.is_zero() {
        ratio(1, 2)
    } else {
        big(below)
    };
    let mut above = floor_sqrt(lambda1_sq);
    if big(&above * &above) < *lambda1_sq {
        above += 1u32;
    }
    (no, big(above))
}

fn verifier_checks(e: &Enumerator, inst: &Instance) -> Result<Vec<Certificate>, LatticeError> {
    let gamma = inst.gamma.clone().expect("gamma-unique instance");
    let s = e.shortest(&inst.basis, Norm::L2)?;
    let (d_no, d_yes) = no_and_yes_d(&s.lambda1);
    Ok(vec![
        completeness_certificate_with(e, &inst.basis, &d_no, &gamma)?,
        exhaustive_witness_search_with(e, &inst.basis, &d_yes, &gamma)?,
    ])
}

fn end_to_end(e: &Enumerator, inst: &Instance) -> Result<Vec<Certificate>, LatticeError> {
    let gamma = inst.gamma.clone().expect("gamma-unique instance");
    let b = &inst.basis;
    let n = b.rank();
    let s = e.shortest(b, Norm::L2)?;
    let u = s.minimal_pairs[0].vector.clone();
    let mut oracle = ExactDusvpOracle::with_enumerator(*e, &(&gamma / int(2)))?;
    let cert = Certificate::new("descent.end_to_end").count("rank", n);
    let sol = match solve_usvp_with(e, b, &gamma, &mut oracle) {
        Ok(sol) => sol,
        Err(err @ (LatticeError::PromiseViolation(_) | LatticeError::InvariantBreach(_))) => {
            return Ok(vec![cert
                .count("oracle_calls", oracle.transcript.len())
                .note(err.to_string())
                .passed_if(false)]);
        }
        Err(err) => return Err(err),
    };
    let exact = norm_sq(&sol.vector) == s.lambda1;
    let promises = oracle.transcript.iter().all(|q| q.promise_holds);
    let budget = call_budget(n);
    let mut u_kept = true;
    let mut index_two = true;
    let mut orthogonal = true;
    for level in &sol.levels {
        for st in &level.states {
            u_kept &= membership_coeffs(st, &u)?.is_member();
        }
        for w in level.states.windows(2) {
            index_two &= det_squared(&w[1])? == int(4) * det_squared(&w[0])?;
        }
        orthogonal &= dot(&u, &level.reduction.dual_vector).is_zero();
        u_kept &= membership_coeffs(&level.reduction.basis, &u)?.is_member();
    }
    Ok(vec![cert
        .witness("lambda1_sq", s.lambda1.clone())
        .witness("solution_norm_sq", norm_sq(&sol.vector))
        .count("oracle_calls", sol.oracle_calls)
        .count("call_budget", budget)
        .count("levels", sol.levels.len())
        .flag("promises_hold", promises)
        .flag("u_preserved", u_kept)
        .flag("index_two_steps", index_two)
        .flag("dual_vector_orthogonal", orthogonal)
        .passed_if(
            exact && promises && sol.oracle_calls <= budget && u_kept && index_two && orthogonal,
        )])
}

fn by_name<'a>(certs: &'a [Certificate], name: &str) -> Vec<&'a Certificate> {
    certs.iter().filter(|c| c.name == name).collect()
}

/// Runs criteria 1 to 12 on the corpus of `cfg`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let e = &cfg.enumerator;
    let started = Instant::now();
    let corpus = generate_corpus(e, &cfg.corpus)?;
    let mut report = SuiteReport::default();
    report
        .timing_ms
        .insert("corpus".into(), started.elapsed().as_millis() as u64);
    run_on_corpus(cfg, &corpus, &mut report)?;
    report
        .timing_ms
        .insert("total".into(), started.elapsed().as_millis() as u64);
    Ok(report)
}

pub fn run_on_corpus(
    cfg: &SuiteConfig,
    corpus: &Corpus,
    report: &mut SuiteReport,
) -> Result<(), LabError> {
    let e = &cfg.enumerator;
    let mut col = Collector { report };
    let all: Vec<&Instance> = corpus.all().collect();
    let unique: Vec<&Instance> = corpus.gamma_unique.iter().collect();

    let t = Instant::now();
    let certs = par_certs(&all, lll_contract)?;
    let o = outcome(
        1,
        "LLL output is reduced and generates the input lattice",
        certs.len(),
        failures(&certs),
        failing_ids(&certs),
    );
    col.push(o, certs, t);

    let t = Instant::now();
    let certs = par_certs(&all, |i| coefficient_bound(e, i))?;
    let o = outcome(
        2,
        "minimal-vector coefficients below 2^ceil(3n/2)",
        certs.len(),
        failures(&certs),
        failing_ids(&certs),
    );
    col.push(o, certs, t);

    let t = Instant::now();
    let certs = par_certs(&all, |i| amplification_l2(e, i))?;
    let sandwich = by_name(&certs, "amplify.l2.sandwich");
    let o3 = outcome(
        3,
        "Euclidean amplification keeps lambda1 within 2^(-n/2)",
        sandwich.len(),
        sandwich.iter().filter(|c| c.is_failed()).count(),
        String::new(),
    );
    let separation: Vec<&Certificate> = by_name(&certs, "amplify.l2.separation")
        .into_iter()
        .filter(|c| c.get("minimal_pairs").is_some_and(|p| *p >= int(2)))
        .collect();
    let sep_fail: Vec<&Certificate> = separation
        .iter()
        .copied()
        .filter(|c| c.is_failed())
        .collect();
    let sep_equal = sep_fail
        .iter()
        .filter(|c| {
            c.get("min_lifted_difference") == c.get("threshold")
                && c.get("amplified_minimal_pairs") == Some(&int(1))
        })
        .count();
    let sep_ids: Vec<&str> = sep_fail.iter().map(|c| c.instance_id.as_str()).collect();
    let o4 = outcome(
        4,
        "lifted minimal lengths differ by more than 2^(-4n^2); unique lifted pair",
        separation.len(),
        sep_fail.len(),
        if sep_fail.is_empty() {
            String::new()
        } else {
            format!(
                "{sep_equal} failing instances meet the bound with equality and keep one lifted pair; failing: {}",
                sep_ids.join(", ")
            )
        },
    );
    let gap = by_name(&certs, "amplify.l2.gap");
    let gap_fail: Vec<&Certificate> = gap.iter().copied().filter(|c| c.is_failed()).collect();
    let gap_equal = gap_fail
        .iter()
        .filter(|c| c.get("ratio_sq") == c.get("required_ratio_sq"))
        .count();
    let o5 = outcome(
        5,
        "amplified lattice gap exceeds 1 + 1/(2^(4n^2) lambda1^2)",
        gap.len(),
        gap_fail.len(),
        if gap_fail.is_empty() {
            String::new()
        } else {
            let ids: Vec<&str> = gap_fail.iter().map(|c| c.instance_id.as_str()).collect();
            format!(
                "{gap_equal} failing instances meet the bound with equality; failing: {}",
                ids.join(", ")
            )
        },
    );
    col.push(o3, certs, t);
    let t = Instant::now();
    col.push(o4, Vec::new(), t);
    col.push(o5, Vec::new(), t);

    let t = Instant::now();
    let small: Vec<&Instance> = all
        .iter()
        .copied()
        .filter(|i| i.basis.rank() <= LINF_MAX_RANK)
        .collect();
    let certs = par_certs(&small, |i| amplification_linf(e, i))?;
    let mut ids: Vec<&str> = certs
        .iter()
        .filter(|c| c.is_failed())
        .map(|c| c.instance_id.as_str())
        .collect();
    ids.dedup();
    let equal = by_name(&certs, "amplify.linf.pairwise_separation")
        .into_iter()
        .filter(|c| {
            c.is_failed()
                && c.get("meets_threshold") == Some(&int(1))
                && c.get("amplified_minimal_pairs") == Some(&int(1))
        })
        .count();
    let detail = if ids.is_empty() {
        String::new()
    } else {
        format!(
            "{equal} instances meet the pairwise bound with equality and keep one lifted pair; {}",
            failing_ids(&certs)
        )
    };
    let o = outcome(
        6,
        "max-norm amplification certificates",
        small.len(),
        ids.len(),
        detail,
    );
    col.push(o, certs, t);

    let t = Instant::now();
    let certs = par_certs(&all, |i| minimal_count(e, i))?;
    let o = outcome(
        7,
        "at most 2^(n+1) minimal vectors with distinct parities",
        certs.len(),
        failures(&certs),
        failing_ids(&certs),
    );
    col.push(o, certs, t);

    let t = Instant::now();
    let mut targets: Vec<(String, Basis)> = vec![
        ("Z2".into(), Basis::identity(2)),
        ("Z4".into(), Basis::identity(4)),
    ];
    targets.extend(
        corpus
            .multi_minimal
            .iter()
            .map(|i| (i.id.clone(), i.basis.clone())),
    );
    let mut runs = Vec::with_capacity(targets.len());
    for (k, (id, b)) in targets.iter().enumerate() {
        let master = cfg.corpus.seed.wrapping_add(((k as u64) + 1) << 40);
        runs.push(isolation_run(e, id, b, cfg.trials, master)?);
    }
    let freq: Vec<Certificate> = runs
        .iter()
        .map(|r| tag(r.report.certificate(), &r.id))
        .collect();
    let o8 = outcome(
        8,
        "isolation frequency at least 0.58 with exact parity laws",
        freq.len(),
        failures(&freq),
        failing_ids(&freq),
    );
    col.push(o8, freq, t);

    let t = Instant::now();
    let gaps: Vec<Certificate> = runs.into_iter().flat_map(|r| r.gap_certs).collect();
    let applicable = gaps
        .iter()
        .filter(|c| c.verdict != Verdict::NotApplicable)
        .count();
    let integral_only = gaps
        .iter()
        .filter(|c| c.is_failed() && c.get("squared_gap_at_least_one") == Some(&int(1)))
        .count();
    let o9 = outcome(
        9,
        "isolated lattice has lambda2 >= lambda1 + 1",
        applicable,
        failures(&gaps),
        format!(
            "{} failing trials still satisfy lambda2^2 >= lambda1^2 + 1",
            integral_only
        ),
    );
    col.push(o9, gaps, t);

    let t = Instant::now();
    let certs = par_certs(&unique, |i| dichotomy(e, i))?;
    let o = outcome(
        10,
        "projection dichotomy on shortest and shell vectors",
        certs.len(),
        failures(&certs),
        failing_ids(&certs),
    );
    col.push(o, certs, t);

    let t = Instant::now();
    let certs = par_certs(&unique, |i| verifier_checks(e, i))?;
    let o = outcome(
        11,
        "NO instances accept the shortest vector; YES instances accept nothing",
        certs.len(),
        failures(&certs),
        failing_ids(&certs),
    );
    col.push(o, certs, t);

    let t = Instant::now();
    let certs = par_certs(&unique, |i| end_to_end(e, i))?;
    let o = outcome(
        12,
        "search-to-decision returns a shortest vector within the call budget",
        certs.len(),
        failures(&certs),
        failing_ids(&certs),
    );
    col.push(o, certs, t);
    Ok(())
}

/// Runs the suite twice and adds the determinism criterion comparing the two
/// certificate streams.
pub fn run_full_suite(cfg: &SuiteConfig) -> Result<SuiteReport, LabError> {
    let mut first = run_suite(cfg)?;
    let t = Instant::now();
    let second = run_suite(cfg)?;
    let (a, b) = (first.certificate_stream(), second.certificate_stream());
    let o = outcome(
        13,
        "re-running with the same seed reproduces the certificate stream",
        1,
        usize::from(a != b),
        format!("{} certificate lines, {} bytes", a.lines().count(), a.len()),
    );
    let mut col = Collector { report: &mut first };
    col.push(o, Vec::new(), t);
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_around_lambda1() {
        assert_eq!(no_and_yes_d(&int(1)), (ratio(1, 2), int(1)));
        assert_eq!(no_and_yes_d(&int(2)), (int(1), int(2)));
        assert_eq!(no_and_yes_d(&int(9)), (int(2), int(3)));
    }

    #[test]
    fn tiny_suite_runs() {
        let cfg = SuiteConfig {
            corpus: CorpusSpec {
                seed: 3,
                count: 4,
                min_rank: 2,
                max_rank: 3,
                entry_bound: 6,
                unique_count: 2,
                multi_count: 1,
            },
            enumerator: Enumerator::default(),
            trials: 20,
        };
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.criteria.len(), 12);
        for c in &r.criteria {
            match c.id {
                // Strict bounds can be met with equality; every failure must be such a case.
                4..=6 => {
                    let equal: usize = c
                        .detail
                        .split_whitespace()
                        .next()
                        .and_then(|w| w.parse().ok())
                        .unwrap_or(0);
                    assert!(c.passed() || equal == c.violations, "{}", c.line());
                }
                // Too few trials for the frequency bound; the gap bound is not universal.
                8 | 9 => {}
                _ => assert!(c.passed(), "{}", c.line()),
            }
        }
        assert_eq!(
            r.certificate_stream(),
            run_suite(&cfg).unwrap().certificate_stream()
        );
    }
}
