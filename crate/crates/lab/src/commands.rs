//! Command dispatch shared by the binary and the tests.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use usvp_core::amplify::{amplify, certify_l2_with, certify_linf_with, AmplifyMode, AmplifyParams};
use usvp_core::descent::{solve_usvp_with, ExactDusvpOracle};
use usvp_core::gso::gso;
use usvp_core::gso::{is_lll_reduced, lll_reduce_with_transform, LllParams};
use usvp_core::lattice::hnf_canonical;
use usvp_core::scalar::{int, norm_sq};
use usvp_core::sparsify::{
    isolated_gap_certificate_with, isolation_stats_with, trial_seed, Sparsifier,
};
use usvp_core::svp::{
    count_shortest_certificate_with, Enumerator, Norm, DEFAULT_RANK_CAP, MAX_RANK_CAP,
};
use usvp_core::verifier::{verify_no_instance_with, Decision, NoInstanceWitness};
use usvp_core::{Basis, Certificate, LatticeError, Scalar};

use crate::corpus::{generate_corpus, manifest, write_corpus, CorpusSpec};
use crate::error::LabError;
use crate::format::{parse_lattice, parse_vector, write_lattice, Tuple};
use crate::report::{json_lines, ConfigEcho, OracleRecord, Record, Report, StepRecord};
use crate::suite::{run_full_suite, SuiteConfig};

pub const RANK_CAP_ENV: &str = "USVP_LAB_RANK_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Gso,
    Lll,
    Svp,
    Amplify,
    Certify,
    Sparsify,
    Isolate,
    VerifyNo,
    SolveUsvp,
    Suite,
    GenerateCorpus,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Gso => "gso",
            Command::Lll => "lll",
            Command::Svp => "svp",
            Command::Amplify => "amplify",
            Command::Certify => "certify",
            Command::Sparsify => "sparsify",
            Command::Isolate => "isolate",
            Command::VerifyNo => "verify-no",
            Command::SolveUsvp => "solve-usvp",
            Command::Suite => "suite",
            Command::GenerateCorpus => "generate-corpus",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub seed: u64,
    pub norm: Norm,
    pub rank_cap: usize,
    pub output: Option<PathBuf>,
    pub mode: AmplifyMode,
    pub eta: Option<u32>,
    pub trials: Option<usize>,
    pub d: Option<Scalar>,
    pub gamma: Option<Scalar>,
    pub witness: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub corpus: Option<CorpusSpec>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            seed: 1,
            norm: Norm::L2,
            rank_cap: DEFAULT_RANK_CAP,
            output: None,
            mode: AmplifyMode::L2,
            eta: None,
            trials: None,
            d: None,
            gamma: None,
            witness: None,
            trace: None,
            corpus: None,
        }
    }

    pub fn echo(&self) -> ConfigEcho {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        ConfigEcho {
            command: self.command.as_str().into(),
            input: path(&self.input),
            seed: self.seed,
            norm: self.norm.as_str().into(),
            rank_cap: self.rank_cap,
            output: path(&self.output),
            mode: matches!(self.command, Command::Amplify | Command::Certify)
                .then(|| mode_str(self.mode).into()),
            eta: self.eta,
            trials: self.trials,
            d: self.d.as_ref().map(ToString::to_string),
            gamma: self.gamma.as_ref().map(ToString::to_string),
        }
    }
}

fn mode_str(m: AmplifyMode) -> &'static str {
    match m {
        AmplifyMode::L2 => "l2",
        AmplifyMode::Linf => "linf",
    }
}

/// Cap from the flag, else the environment, else the default; at most the hard ceiling.
pub fn resolve_rank_cap(flag: Option<usize>, env: Option<&str>) -> Result<usize, LabError> {
    let cap = match (flag, env) {
        (Some(c), _) => c,
        (None, Some(v)) => v.trim().parse().map_err(|_| {
            LabError::Usage(format!("{RANK_CAP_ENV} must be an integer, got `{v}`"))
        })?,
        (None, None) => DEFAULT_RANK_CAP,
    };
    if cap == 0 || cap > MAX_RANK_CAP {
        return Err(LabError::Usage(format!(
            "rank cap must be in 1..={MAX_RANK_CAP}, got {cap}"
        )));
    }
    Ok(cap)
}

pub struct RunOutcome {
    pub report: Report,
    pub echo: ConfigEcho,
    pub exit_code: i32,
    /// Human-readable lines for stderr.
    pub notes: Vec<String>,
}

impl RunOutcome {
    pub fn json_lines(&self) -> String {
        self.report.to_json_lines(&self.echo)
    }
}

fn read_input(cfg: &RunConfig) -> Result<Basis, LabError> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| LabError::Usage(format!("`{}` needs --input", cfg.command.as_str())))?;
    let text = fs::read_to_string(path)?;
    Ok(parse_lattice(&text)?)
}

fn need<'a, T>(v: &'a Option<T>, flag: &str, cmd: Command) -> Result<&'a T, LabError> {
    v.as_ref()
        .ok_or_else(|| LabError::Usage(format!("`{}` needs {flag}", cmd.as_str())))
}

fn check_cap(b: &Basis, cap: usize) -> Result<(), LabError> {
    if b.rank() > cap {
        return Err(LatticeError::RankCapExceeded {
            rank: b.rank(),
            cap,
        }
        .into());
    }
    Ok(())
}

pub(crate) fn lll_contract(b: &Basis) -> Result<Certificate, LatticeError> {
    let out = lll_reduce_with_transform(b, &LllParams::default());
    let reduced = is_lll_reduced(&out.reduced, &LllParams::default());
    let same = hnf_canonical(out.reduced.columns())? == hnf_canonical(b.columns())?;
    Ok(Certificate::new("lll.contract")
        .count("rank", b.rank())
        .flag("lll_reduced", reduced)
        .flag("same_lattice", same)
        .passed_if(reduced && same))
}

pub fn run(cfg: &RunConfig) -> Result<RunOutcome, LabError> {
    let started = Instant::now();
    let e = Enumerator::new(cfg.rank_cap)?;
    let mut r = Report::default();
    let mut notes = Vec::new();
    match cfg.command {
        Command::Gso => {
            let b = read_input(cfg)?;
            let g = gso(&b);
            for (i, n) in g.gs_norms_sq.iter().enumerate() {
                r.value(format!("gs_norm_sq.{i}"), n);
            }
            for (i, row) in g.mu.iter().enumerate() {
                for (j, m) in row.iter().enumerate().take(i) {
                    r.value(format!("mu.{i}.{j}"), m);
                }
            }
        }
        Command::Lll => {
            let b = read_input(cfg)?;
            let out = lll_reduce_with_transform(&b, &LllParams::default());
            r.value("reduced", write_lattice(&out.reduced));
            let cols: Vec<String> = out
                .transform
                .iter()
                .map(|col| {
                    col.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            r.value("transform_columns", cols.join("; "));
            r.certify(lll_contract(&b)?);
        }
        Command::Svp => {
            let b = read_input(cfg)?;
            check_cap(&b, cfg.rank_cap)?;
            let s = e.shortest(&b, cfg.norm)?;
            let suffix = if cfg.norm == Norm::L2 { "_sq" } else { "" };
            r.value(format!("lambda1{suffix}"), &s.lambda1);
            if let Some(l2) = &s.lambda2 {
                r.value(format!("lambda2{suffix}"), l2);
            }
            r.value("minimal_pairs", s.pair_count());
            for (k, p) in s.minimal_pairs.iter().enumerate() {
                r.value(format!("minimal.{k}"), Tuple(&p.vector));
            }
            if cfg.norm == Norm::L2 {
                r.certify(count_shortest_certificate_with(&e, &b)?);
            }
        }
        Command::Amplify | Command::Certify => {
            let b = read_input(cfg)?;
            let params = match (cfg.mode, cfg.eta) {
                (AmplifyMode::L2, _) => AmplifyParams::l2(),
                (AmplifyMode::Linf, Some(eta)) => AmplifyParams::linf(eta),
                (AmplifyMode::Linf, None) => AmplifyParams::linf_for(&b),
            };
            let a = amplify(&b, params)?;
            if cfg.command == Command::Amplify {
                r.value("amplified", write_lattice(&a.amplified));
                if a.reduced_first {
                    r.value("reduced_input", write_lattice(&a.original));
                }
                if params.mode == AmplifyMode::Linf {
                    r.value("eta", params.eta);
                }
            } else {
                check_cap(&b, cfg.rank_cap)?;
                let certs = match params.mode {
                    AmplifyMode::L2 => certify_l2_with(&e, &a)?,
                    AmplifyMode::Linf => certify_linf_with(&e, &a)?,
                };
                certs.into_iter().for_each(|c| r.certify(c));
            }
        }
        Command::Sparsify => {
            let b = read_input(cfg)?;
            let s = Sparsifier::with_enumerator(&e, &b)?;
            for t in 0..cfg.trials.unwrap_or(1) {
                let trace = s.chain(trial_seed(cfg.seed, t))?;
                r.steps.extend(StepRecord::from_trace(&trace));
                if let Some(k) = trace.first_isolation() {
                    r.value(format!("first_isolation.{t}"), k);
                }
                if trace.survivors.is_some() && b.is_integral() {
                    r.certify(
                        isolated_gap_certificate_with(&e, &trace)?
                            .with_instance(format!("trial-{t}")),
                    );
                }
            }
        }
        Command::Isolate => {
            let b = read_input(cfg)?;
            check_cap(&b, cfg.rank_cap)?;
            let trials = cfg.trials.unwrap_or(usvp_core::sparsify::ISOLATION_TRIALS);
            let rep = isolation_stats_with(&e, &b, trials, cfg.seed)?;
            r.value("frequency", rep.frequency());
            r.value("isolated", rep.isolated());
            r.certify(rep.certificate());
        }
        Command::VerifyNo => {
            let b = read_input(cfg)?;
            check_cap(&b, cfg.rank_cap)?;
            let d = need(&cfg.d, "--d", cfg.command)?;
            let gamma = need(&cfg.gamma, "--gamma", cfg.command)?;
            let path = need(&cfg.witness, "--witness", cfg.command)?;
            let v = parse_vector(&fs::read_to_string(path)?)?;
            let w = NoInstanceWitness::new(v.clone())?;
            let decision = verify_no_instance_with(&e, &b, d, gamma, &w)?;
            let text = match decision {
                Decision::Accept => "accept".to_string(),
                Decision::Reject(reason) => format!("reject: {}", reason.as_str()),
            };
            r.value("decision", &text);
            r.certify(
                Certificate::new("verifier.no_instance")
                    .witness("v_norm_sq", norm_sq(&v))
                    .witness("d_sq", d * d)
                    .note(text)
                    .passed_if(decision.is_accept()),
            );
        }
        Command::SolveUsvp => {
            let b = read_input(cfg)?;
            check_cap(&b, cfg.rank_cap)?;
            let gamma = need(&cfg.gamma, "--gamma", cfg.command)?;
            if *gamma < int(2) {
                return Err(LatticeError::Parameter("gamma must be at least 2".into()).into());
            }
            let mut oracle = ExactDusvpOracle::with_enumerator(e, &(gamma / int(2)))?;
            let result = solve_usvp_with(&e, &b, gamma, &mut oracle);
            if let Some(path) = &cfg.trace {
                let records: Vec<Record> = oracle
                    .transcript
                    .iter()
                    .enumerate()
                    .map(|(i, q)| Record::Oracle(OracleRecord::new(i, q)))
                    .collect();
                fs::write(path, json_lines(&records))?;
            }
            r.oracle = oracle.transcript.clone();
            let sol = result?;
            for level in &sol.levels {
                r.certify(
                    level
                        .reduction
                        .certificate
                        .clone()
                        .with_instance(format!("rank-{}", level.rank)),
                );
            }
            let lambda1 = e.shortest(&b, Norm::L2)?.lambda1;
            r.value("vector", Tuple(&sol.vector));
            r.value("oracle_calls", sol.oracle_calls);
            r.certify(
                Certificate::new("descent.solution")
                    .witness("lambda1_sq", lambda1.clone())
                    .witness("solution_norm_sq", norm_sq(&sol.vector))
                    .count("oracle_calls", sol.oracle_calls)
                    .passed_if(norm_sq(&sol.vector) == lambda1),
            );
        }
        Command::Suite => {
            let mut sc = SuiteConfig::standard(cfg.seed);
            sc.enumerator = e;
            if let Some(c) = cfg.corpus {
                sc.corpus = c;
            }
            if let Some(t) = cfg.trials {
                sc.trials = t;
            }
            let s = run_full_suite(&sc)?;
            for c in &s.criteria {
                r.value(format!("criterion.{:02}", c.id), c.line());
                notes.push(c.line());
            }
            r.certificates = s.certificates;
            r.timing_ms.extend(s.timing_ms);
        }
        Command::GenerateCorpus => {
            let dir = need(&cfg.output, "--output DIR", cfg.command)?;
            let spec = cfg.corpus.unwrap_or(CorpusSpec {
                seed: cfg.seed,
                ..CorpusSpec::standard(cfg.seed)
            });
            let corpus = generate_corpus(&e, &spec)?;
            write_corpus(dir, &corpus)?;
            r.value("instances", corpus.len());
            r.value("manifest", manifest(&corpus));
        }
    }
    r.timing_ms
        .insert("run".into(), started.elapsed().as_millis() as u64);
    let exit_code = r.exit_code();
    Ok(RunOutcome {
        report: r,
        echo: cfg.echo(),
        exit_code,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_cap_resolution() {
        assert_eq!(resolve_rank_cap(None, None).unwrap(), DEFAULT_RANK_CAP);
        assert_eq!(resolve_rank_cap(None, Some("5")).unwrap(), 5);
        assert_eq!(resolve_rank_cap(Some(3), Some("5")).unwrap(), 3);
        assert!(resolve_rank_cap(Some(11), None).is_err());
        assert!(resolve_rank_cap(None, Some("x")).is_err());
    }
}
