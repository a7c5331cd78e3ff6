//! Seeded corpus generation.
//!
//! Three families are produced: uniformly random integer bases, constructed
//! bases whose shortest vector is unique by a factor of at least two, and
//! random bases with several minimal pairs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use usvp_core::scalar::{int, ratio};
use usvp_core::svp::{Enumerator, Norm};
use usvp_core::{Basis, LatticeError, Scalar};

use crate::error::LabError;
use crate::format::write_lattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub min_rank: usize,
    pub max_rank: usize,
    pub entry_bound: i64,
    pub unique_count: usize,
    pub multi_count: usize,
}

impl CorpusSpec {
    /// The desk-scale corpus the suite runs on.
    pub fn standard(seed: u64) -> Self {
        Self {
            seed,
            count: 200,
            min_rank: 2,
            max_rank: 6,
            entry_bound: 16,
            unique_count: 50,
            multi_count: 20,
        }
    }

    fn validate(&self, cap: usize) -> Result<(), LabError> {
        if self.min_rank == 0 || self.min_rank > self.max_rank {
            return Err(LabError::Usage(format!(
                "invalid rank range {}..={}",
                self.min_rank, self.max_rank
            )));
        }
        if self.max_rank > cap {
            return Err(LatticeError::RankCapExceeded {
                rank: self.max_rank,
                cap,
            }
            .into());
        }
        if self.entry_bound < 1 {
            return Err(LabError::Usage("entry bound must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    Random,
    GammaUnique,
    MultiMinimal,
}

impl InstanceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::Random => "random",
            InstanceKind::GammaUnique => "gamma-unique",
            InstanceKind::MultiMinimal => "multi-minimal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub id: String,
    pub seed: u64,
    pub kind: InstanceKind,
    pub basis: Basis,
    /// Uniqueness factor the instance was verified for.
    pub gamma: Option<Scalar>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub random: Vec<Instance>,
    pub gamma_unique: Vec<Instance>,
    pub multi_minimal: Vec<Instance>,
}

impl Corpus {
    pub fn all(&self) -> impl Iterator<Item = &Instance> {
        self.random
            .iter()
            .chain(&self.gamma_unique)
            .chain(&self.multi_minimal)
    }

    pub fn len(&self) -> usize {
        self.random.len() + self.gamma_unique.len() + self.multi_minimal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

// Disjoint seed ranges per family; instance `i` of a family uses `base + offset + i`.
const UNIQUE_OFFSET: u64 = 1 << 32;
const MULTI_OFFSET: u64 = 2 << 32;
const MULTI_BOUND: i64 = 3;
const MULTI_MAX_RANK: usize = 4;

/// Uniform entries in `[-bound, bound]`, redrawn until the columns are independent.
pub fn random_basis<R: Rng>(rng: &mut R, rank: usize, bound: i64) -> Basis {
    loop {
        let cols: Vec<Vec<i64>> = (0..rank)
            .map(|_| (0..rank).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        if let Ok(b) = Basis::from_integer_columns(&cols) {
            return b;
        }
    }
}

fn rank_for(spec: &CorpusSpec, i: usize, max: usize) -> usize {
    spec.min_rank + i % (max - spec.min_rank + 1)
}

pub fn random_corpus(spec: &CorpusSpec) -> Vec<Instance> {
    (0..spec.count)
        .map(|i| {
            let seed = spec.seed.wrapping_add(i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Instance {
                id: format!("rand-{i:04}"),
                seed,
                kind: InstanceKind::Random,
                basis: random_basis(&mut rng, rank_for(spec, i, spec.max_rank), spec.entry_bound),
                gamma: None,
            }
        })
        .collect()
}

/// An upper-triangular basis with a short first column and long later diagonal
/// entries, mixed by a random unimodular transform.
fn unique_candidate<R: Rng>(rng: &mut R, rank: usize) -> Basis {
    let mut m = vec![vec![0i64; rank]; rank];
    for j in 0..rank {
        m[j][j] = if j == 0 {
            rng.gen_range(1..=3)
        } else {
            rng.gen_range(8..=16)
        };
        for row in m.iter_mut().take(j) {
            row[j] = rng.gen_range(-3..=3);
        }
    }
    let mut cols: Vec<Vec<i64>> = (0..rank)
        .map(|j| (0..rank).map(|i| m[i][j]).collect())
        .collect();
    for _ in 0..2 * rank {
        let a = rng.gen_range(0..rank);
        let b = rng.gen_range(0..rank);
        if a != b {
            let c = if rng.gen::<bool>() { 1 } else { -1 };
            let src = cols[b].clone();
            for (x, y) in cols[a].iter_mut().zip(src) {
                *x += c * y;
            }
        }
    }
    Basis::from_integer_columns(&cols).expect("unimodular image of a nonsingular basis")
}

/// Largest of a few factors at least 2 for which `b` is unique, if any.
fn verified_gamma(e: &Enumerator, b: &Basis) -> Result<Option<Scalar>, LatticeError> {
    let s = e.shortest(b, Norm::L2)?;
    Ok([int(4), int(3), ratio(5, 2), int(2)]
        .into_iter()
        .find(|g| s.is_gamma_unique(&(g * g))))
}

pub fn gamma_unique_corpus(e: &Enumerator, spec: &CorpusSpec) -> Result<Vec<Instance>, LabError> {
    let max = spec.max_rank.min(5).max(spec.min_rank);
    let mut out = Vec::with_capacity(spec.unique_count);
    for i in 0..spec.unique_count {
        let seed = spec.seed.wrapping_add(UNIQUE_OFFSET + i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = rank_for(spec, i, max);
        let (basis, gamma) = loop {
            let b = unique_candidate(&mut rng, rank);
            if let Some(g) = verified_gamma(e, &b)? {
                break (b, g);
            }
        };
        out.push(Instance {
            id: format!("uniq-{i:04}"),
            seed,
            kind: InstanceKind::GammaUnique,
            basis,
            gamma: Some(gamma),
        });
    }
    Ok(out)
}

/// Random lattices with at least two minimal pairs: first those of `base`, then
/// fresh draws with small entries, which tie far more often.
pub fn multi_minimal_corpus(
    e: &Enumerator,
    spec: &CorpusSpec,
    base: &[Instance],
) -> Result<Vec<Instance>, LabError> {
    let mut out = Vec::with_capacity(spec.multi_count);
    for inst in base {
        if out.len() == spec.multi_count {
            return Ok(out);
        }
        if e.shortest(&inst.basis, Norm::L2)?.pair_count() >= 2 {
            out.push(Instance {
                id: format!("multi-{}", inst.id),
                kind: InstanceKind::MultiMinimal,
                ..inst.clone()
            });
        }
    }
    let max = spec.max_rank.min(MULTI_MAX_RANK).max(spec.min_rank);
    let mut i = 0usize;
    while out.len() < spec.multi_count {
        let seed = spec.seed.wrapping_add(MULTI_OFFSET + i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_basis(&mut rng, rank_for(spec, i, max), MULTI_BOUND);
        if e.shortest(&b, Norm::L2)?.pair_count() >= 2 {
            out.push(Instance {
                id: format!("multi-new-{i:04}"),
                seed,
                kind: InstanceKind::MultiMinimal,
                basis: b,
                gamma: None,
            });
        }
        i += 1;
    }
    Ok(out)
}

pub fn generate_corpus(e: &Enumerator, spec: &CorpusSpec) -> Result<Corpus, LabError> {
    spec.validate(e.cap())?;
    let random = random_corpus(spec);
    let gamma_unique = gamma_unique_corpus(e, spec)?;
    let multi_minimal = multi_minimal_corpus(e, spec, &random)?;
    Ok(Corpus {
        random,
        gamma_unique,
        multi_minimal,
    })
}

/// One line per instance: `id kind seed rank gamma file`.
pub fn manifest(corpus: &Corpus) -> String {
    let mut s = String::from("# id kind seed rank gamma file\n");
    for inst in corpus.all() {
        let gamma = inst
            .gamma
            .as_ref()
            .map_or("-".to_string(), ToString::to_string);
        let _ = writeln!(
            s,
            "{} {} {} {} {} {}.lat",
            inst.id,
            inst.kind.as_str(),
            inst.seed,
            inst.basis.rank(),
            gamma,
            inst.id
        );
    }
    s
}

/// Writes `<id>.lat` per instance and `manifest.txt` into `dir`.
pub fn write_corpus(dir: &Path, corpus: &Corpus) -> Result<(), LabError> {
    fs::create_dir_all(dir)?;
    for inst in corpus.all() {
        fs::write(
            dir.join(format!("{}.lat", inst.id)),
            write_lattice(&inst.basis),
        )?;
    }
    fs::write(dir.join("manifest.txt"), manifest(corpus))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn small(seed: u64, count: usize) -> CorpusSpec {
        CorpusSpec {
            seed,
            count,
            min_rank: 2,
            max_rank: 4,
            entry_bound: 10,
            unique_count: 0,
            multi_count: 0,
        }
    }

    #[test]
    fn random_corpus_is_reproducible() {
        let e = Enumerator::default();
        let a = generate_corpus(&e, &small(1, 10)).unwrap();
        let b = generate_corpus(&e, &small(1, 10)).unwrap();
        assert_eq!(a.random.len(), 10);
        assert_eq!(manifest(&a), manifest(&b));
        assert_eq!(a, b);
        for inst in &a.random {
            assert!((2..=4).contains(&inst.basis.rank()));
            assert!(inst
                .basis
                .columns()
                .iter()
                .flatten()
                .all(|x| x.is_integer() && x.abs() <= int(10)));
        }
    }

    #[test]
    fn empty_corpus() {
        let c = generate_corpus(&Enumerator::default(), &small(1, 0)).unwrap();
        assert!(c.is_empty());
        assert_eq!(manifest(&c).lines().count(), 1);
    }

    #[test]
    fn gamma_unique_instances_verify() {
        let e = Enumerator::default();
        let spec = CorpusSpec {
            unique_count: 6,
            ..small(5, 0)
        };
        for inst in gamma_unique_corpus(&e, &spec).unwrap() {
            let g = inst.gamma.unwrap();
            assert!(g >= int(2));
            assert!(e
                .shortest(&inst.basis, Norm::L2)
                .unwrap()
                .is_gamma_unique(&(&g * &g)));
        }
    }

    #[test]
    fn rejects_bad_ranges() {
        let e = Enumerator::default();
        assert!(generate_corpus(
            &e,
            &CorpusSpec {
                min_rank: 3,
                max_rank: 2,
                ..small(0, 1)
            }
        )
        .is_err());
        assert!(matches!(
            generate_corpus(
                &e,
                &CorpusSpec {
                    max_rank: 9,
                    ..small(0, 1)
                }
            ),
            Err(LabError::Lattice(LatticeError::RankCapExceeded { .. }))
        ));
    }
}
