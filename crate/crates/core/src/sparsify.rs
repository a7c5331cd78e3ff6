//! Randomized sublattice chains and isolation of a single shortest pair.
//!
//! Each step draws a subset `W` of the basis indices by fair coin flips and
//! replaces `b_j` by `b_j - b_i` for `j` in `W` other than the pivot `i`, and
//! `b_i` by `2 b_i`. A vector with coefficients `alpha` survives the step iff
//! the sum of `alpha_j` over `W` is even.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::{Certificate, Verdict};
use crate::error::{LatticeError, Result};
use crate::lattice::{Basis, CoordinateSolver, Membership};
use crate::scalar::{big, int, ratio, sub_vec, CoeffVector, LatticeVector, Scalar};
use crate::svp::{parity, Enumerator, Norm};

/// Name of the generator behind every seed; traces are only portable between
/// builds that agree on it.
pub const GENERATOR: &str = "ChaCha8Rng";

/// Isolation frequency required over [`ISOLATION_TRIALS`] trials.
pub const ISOLATION_THRESHOLD: (i64, i64) = (58, 100);
pub const ISOLATION_TRIALS: usize = 500;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StepChoice {
    /// Zero-based, sorted.
    pub subset: Vec<usize>,
    pub pivot: Option<usize>,
}

impl StepChoice {
    pub fn new(mut subset: Vec<usize>) -> Self {
        subset.sort_unstable();
        subset.dedup();
        let pivot = subset.first().copied();
        Self { subset, pivot }
    }

    pub fn is_empty(&self) -> bool {
        self.subset.is_empty()
    }

    pub fn draw<R: Rng>(rank: usize, rng: &mut R) -> Self {
        Self::new((0..rank).filter(|_| rng.gen::<bool>()).collect())
    }

    /// Whether coefficients `alpha` w.r.t. the step's input basis describe a member
    /// of the output lattice.
    pub fn keeps(&self, alpha: &[BigInt]) -> bool {
        let sum: BigInt = self.subset.iter().map(|&j| &alpha[j]).sum();
        sum.is_even()
    }

    /// Coefficients w.r.t. the output basis of a surviving vector.
    pub fn transform_coeffs(&self, alpha: &[BigInt]) -> CoeffVector {
        let mut out = alpha.to_vec();
        if let Some(i) = self.pivot {
            let sum: BigInt = self.subset.iter().map(|&j| &alpha[j]).sum();
            out[i] = sum / 2;
        }
        out
    }

    pub fn apply(&self, b: &Basis) -> Basis {
        let Some(i) = self.pivot else {
            return b.clone();
        };
        let pivot = b.column(i).clone();
        let columns = b
            .columns()
            .iter()
            .enumerate()
            .map(|(j, col)| {
                if j == i {
                    col.iter().map(|x| x * int(2)).collect()
                } else if self.subset.binary_search(&j).is_ok() {
                    sub_vec(col, &pivot)
                } else {
                    col.clone()
                }
            })
            .collect();
        b.with_columns(columns)
    }
}

pub fn sparsify_step<R: Rng>(b: &Basis, rng: &mut R) -> (Basis, StepChoice) {
    let choice = StepChoice::draw(b.rank(), rng);
    (choice.apply(b), choice)
}

/// Minimal pairs of the starting lattice, tracked through a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survivors {
    pub lambda1_sq: Scalar,
    /// One representative per antipodal pair.
    pub minimal: Vec<LatticeVector>,
    /// For each chain index, the surviving pair indices with their coefficients
    /// w.r.t. that chain basis.
    pub per_step: Vec<Vec<(usize, CoeffVector)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsifyTrace {
    pub chain: Vec<Basis>,
    pub choices: Vec<StepChoice>,
    pub seed: u64,
    pub generator: &'static str,
    /// Survivor set sizes in pairs; `None` when the rank exceeds the oracle cap.
    pub survivor_pairs: Option<Vec<usize>>,
    pub survivors: Option<Survivors>,
}

impl SparsifyTrace {
    pub fn first_isolation(&self) -> Option<usize> {
        self.survivor_pairs.as_ref()?.iter().position(|&c| c == 1)
    }
}

pub fn chain_length(rank: usize) -> usize {
    2 * rank + 3
}

/// Runs chains over a fixed starting basis, computing its minimal pairs once.
#[derive(Clone, Debug)]
pub struct Sparsifier {
    basis: Basis,
    lambda1_sq: Option<Scalar>,
    minimal: Option<Vec<LatticeVector>>,
}

impl Sparsifier {
    pub fn new(b: &Basis) -> Result<Self> {
        Self::with_enumerator(&Enumerator::default(), b)
    }

    pub fn with_enumerator(e: &Enumerator, b: &Basis) -> Result<Self> {
        let (lambda1_sq, minimal) = match e.shortest(b, Norm::L2) {
            Ok(s) => {
                let minimal = s.minimal_pairs.iter().map(|p| p.vector.clone()).collect();
                (Some(s.lambda1), Some(minimal))
            }
            Err(LatticeError::RankCapExceeded { .. }) => (None, None),
            Err(err) => return Err(err),
        };
        Ok(Self {
            basis: b.clone(),
            lambda1_sq,
            minimal,
        })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn chain(&self, seed: u64) -> Result<SparsifyTrace> {
        let n = self.basis.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut chain = vec![self.basis.clone()];
        let mut choices = Vec::with_capacity(2 * n + 2);
        for _ in 0..2 * n + 2 {
            let (next, choice) = sparsify_step(chain.last().expect("nonempty chain"), &mut rng);
            chain.push(next);
            choices.push(choice);
        }
        let survivors = match (&self.minimal, &self.lambda1_sq) {
            (Some(minimal), Some(l1)) => {
                let mut per_step = Vec::with_capacity(chain.len());
                for b in &chain {
                    let solver = CoordinateSolver::new(b)?;
                    let mut alive = Vec::new();
                    for (idx, v) in minimal.iter().enumerate() {
                        if let Membership::Member(c) = solver.solve(v)? {
                            alive.push((idx, c));
                        }
                    }
                    per_step.push(alive);
                }
                Some(Survivors {
                    lambda1_sq: l1.clone(),
                    minimal: minimal.clone(),
                    per_step,
                })
            }
            _ => None,
        };
        let survivor_pairs = survivors
            .as_ref()
            .map(|s| s.per_step.iter().map(Vec::len).collect());
        Ok(SparsifyTrace {
            chain,
            choices,
            seed,
            generator: GENERATOR,
            survivor_pairs,
            survivors,
        })
    }

    pub fn trial(&self, seed: u64) -> Result<TrialOutcome> {
        self.outcome(&self.chain(seed)?)
    }

    /// Checks the parity laws along a trace produced by [`Sparsifier::chain`].
    pub fn outcome(&self, trace: &SparsifyTrace) -> Result<TrialOutcome> {
        let seed = trace.seed;
        let survivors = trace
            .survivors
            .as_ref()
            .ok_or(LatticeError::RankCapExceeded {
                rank: self.basis.rank(),
                cap: Enumerator::default().cap(),
            })?;
        let mut parity_ok = true;
        let mut parity_law_ok = true;
        let mut exposed = 0usize;
        let mut survived = 0usize;
        for (k, alive) in survivors.per_step.iter().enumerate() {
            let parities: Vec<Vec<bool>> = alive.iter().map(|(_, c)| parity(c)).collect();
            for (a, pa) in parities.iter().enumerate() {
                if pa.iter().all(|bit| !bit) || parities[..a].contains(pa) {
                    parity_ok = false;
                }
            }
            let Some(choice) = trace.choices.get(k) else {
                continue;
            };
            let next = &survivors.per_step[k + 1];
            for (idx, c) in alive {
                let predicted = choice.keeps(c);
                let actual = next.iter().find(|(j, _)| j == idx);
                match actual {
                    Some((_, c2)) if predicted => {
                        parity_law_ok &= *c2 == choice.transform_coeffs(c);
                    }
                    None if !predicted => {}
                    _ => parity_law_ok = false,
                }
                exposed += 1;
                survived += usize::from(predicted);
            }
        }
        Ok(TrialOutcome {
            seed,
            first_isolation: trace.first_isolation(),
            parity_ok,
            parity_law_ok,
            exposed,
            survived,
        })
    }
}

pub fn sparsify_chain(b: &Basis, seed: u64) -> Result<SparsifyTrace> {
    Sparsifier::new(b)?.chain(seed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub seed: u64,
    pub first_isolation: Option<usize>,
    /// Surviving pairs had distinct, nonzero coefficient parities at every step.
    pub parity_ok: bool,
    /// Survival matched the parity rule, with the predicted new coefficients.
    pub parity_law_ok: bool,
    /// Pair-steps taken by surviving pairs, and how many of those survived.
    pub exposed: usize,
    pub survived: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationReport {
    pub master_seed: u64,
    pub outcomes: Vec<TrialOutcome>,
}

impl IsolationReport {
    pub fn trials(&self) -> usize {
        self.outcomes.len()
    }

    pub fn isolated(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| o.first_isolation.is_some())
            .count()
    }

    pub fn frequency(&self) -> Scalar {
        big(BigInt::from(self.isolated())) / big(BigInt::from(self.trials().max(1)))
    }

    /// Aggregate per-step survival rate of pairs; exactly one half in expectation.
    pub fn survival_rate(&self) -> Option<Scalar> {
        let exposed: usize = self.outcomes.iter().map(|o| o.exposed).sum();
        let survived: usize = self.outcomes.iter().map(|o| o.survived).sum();
        (exposed > 0).then(|| big(BigInt::from(survived)) / big(BigInt::from(exposed)))
    }

    pub fn parity_ok(&self) -> bool {
        self.outcomes.iter().all(|o| o.parity_ok && o.parity_law_ok)
    }

    pub fn meets_threshold(&self) -> bool {
        self.frequency() >= ratio(ISOLATION_THRESHOLD.0, ISOLATION_THRESHOLD.1)
    }

    pub fn certificate(&self) -> Certificate {
        let mut c = Certificate::new("sparsify.isolation_frequency")
            .count("trials", self.trials())
            .count("isolated", self.isolated())
            .witness("frequency", self.frequency())
            .witness(
                "threshold",
                ratio(ISOLATION_THRESHOLD.0, ISOLATION_THRESHOLD.1),
            )
            .flag("parity_checks", self.parity_ok());
        if let Some(r) = self.survival_rate() {
            c = c.witness("survival_rate", r);
        }
        c.passed_if(self.meets_threshold() && self.parity_ok())
    }
}

pub fn trial_seed(master_seed: u64, trial: usize) -> u64 {
    master_seed.wrapping_add(trial as u64)
}

pub fn isolation_stats(b: &Basis, trials: usize, master_seed: u64) -> Result<IsolationReport> {
    isolation_stats_with(&Enumerator::default(), b, trials, master_seed)
}

pub fn isolation_stats_with(
    e: &Enumerator,
    b: &Basis,
    trials: usize,
    master_seed: u64,
) -> Result<IsolationReport> {
    if trials == 0 {
        return Err(LatticeError::Parameter("trials must be positive".into()));
    }
    let s = Sparsifier::with_enumerator(e, b)?;
    let outcomes = (0..trials)
        .map(|t| s.trial(trial_seed(master_seed, t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(IsolationReport {
        master_seed,
        outcomes,
    })
}

/// Checks the lattice at the first isolating step: same first minimum as the
/// start, and a second minimum at least one above it.
pub fn isolated_gap_certificate(trace: &SparsifyTrace) -> Result<Certificate> {
    isolated_gap_certificate_with(&Enumerator::default(), trace)
}

pub fn isolated_gap_certificate_with(e: &Enumerator, trace: &SparsifyTrace) -> Result<Certificate> {
    if !trace.chain[0].is_integral() {
        return Err(LatticeError::Domain(
            "isolation gap needs an integer lattice".into(),
        ));
    }
    let survivors = trace
        .survivors
        .as_ref()
        .ok_or_else(|| LatticeError::Refused("trace has no survivor data".into()))?;
    let base = Certificate::new("sparsify.isolated_gap");
    let Some(k) = trace.first_isolation() else {
        return Ok(base
            .note("no step isolates a single pair")
            .verdict(Verdict::NotApplicable));
    };
    let s = e.shortest(&trace.chain[k], Norm::L2)?;
    let l1 = &s.lambda1;
    let same_l1 = *l1 == survivors.lambda1_sq;
    let cert = base
        .count("step", k)
        .count("isolated_minimal_pairs", s.pair_count())
        .witness("lambda1_sq", l1.clone())
        .witness("original_lambda1_sq", survivors.lambda1_sq.clone())
        .flag("lambda1_preserved", same_l1);
    let Some(l2) = &s.lambda2 else {
        return Ok(cert.note("rank 1: no second minimum").passed_if(same_l1));
    };
    // lambda2 >= lambda1 + 1  <=>  lambda2^2 - lambda1^2 - 1 >= 0 and its square >= 4 lambda1^2.
    let lhs = l2 - l1 - int(1);
    let gap_holds = !lhs.is_negative() && &lhs * &lhs >= int(4) * l1;
    let integral_gap = *l2 >= l1 + int(1);
    Ok(cert
        .witness("lambda2_sq", l2.clone())
        .witness("ratio_sq", l2 / l1)
        .flag("squared_gap_at_least_one", integral_gap)
        .passed_if(same_l1 && gap_holds))
}

/// Parity of the coefficient vector is nonzero for every minimal vector of an
/// integer lattice, checked on every basis of a chain.
pub fn minimal_parity_nonzero(trace: &SparsifyTrace) -> Option<bool> {
    let s = trace.survivors.as_ref()?;
    Some(
        s.per_step
            .iter()
            .flatten()
            .all(|(_, c)| c.iter().any(|x| x.is_odd())),
    )
}

/// Sum of the coefficients of `alpha` on `subset`; exposed for diagnostics.
pub fn subset_sum(subset: &[usize], alpha: &[BigInt]) -> BigInt {
    subset
        .iter()
        .fold(BigInt::zero(), |acc, &j| acc + &alpha[j])
}
