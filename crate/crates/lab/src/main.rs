use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use usvp_core::amplify::AmplifyMode;
use usvp_core::scalar::parse_scalar;
use usvp_core::{Norm, Scalar};
use usvp_lab::commands::{resolve_rank_cap, RANK_CAP_ENV};
use usvp_lab::corpus::CorpusSpec;
use usvp_lab::error::EXIT_INPUT;
use usvp_lab::{run, Command, LabError, RunConfig};

#[derive(Parser)]
#[command(name = "usvp-lab", version, about = "Exact lattice laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Lattice file.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = NormArg::L2)]
    norm: NormArg,
    /// Rank ceiling for exhaustive work; overrides the environment.
    #[arg(long, global = true)]
    rank_cap: Option<usize>,
    /// Report file (a directory for `generate-corpus`); stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    L2,
    Linf,
}

#[derive(Args)]
struct AmplifyArgs {
    #[arg(long, value_enum, default_value_t = NormArg::L2)]
    mode: NormArg,
    #[arg(long)]
    eta: Option<u32>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gram-Schmidt data.
    Gso,
    /// LLL reduction with delta = 3/4.
    Lll,
    /// Exhaustive shortest vectors.
    Svp,
    /// Build the amplified basis.
    Amplify(AmplifyArgs),
    /// Amplify and certify.
    Certify(AmplifyArgs),
    /// Sparsification chains with survivor traces.
    Sparsify {
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Isolation frequency over seeded trials.
    Isolate {
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Check a NO-instance witness.
    VerifyNo {
        #[arg(long, value_parser = scalar)]
        d: Scalar,
        #[arg(long, value_parser = scalar)]
        gamma: Scalar,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Search-to-decision with the exact oracle.
    SolveUsvp {
        #[arg(long, value_parser = scalar)]
        gamma: Scalar,
        /// Oracle transcript file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Every acceptance criterion over the generated corpus.
    Suite {
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Write a seeded corpus and its manifest.
    GenerateCorpus {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        min_rank: usize,
        #[arg(long, default_value_t = 6)]
        max_rank: usize,
        #[arg(long, default_value_t = 16)]
        bound: i64,
        /// Constructed instances unique by a factor of at least 2.
        #[arg(long, default_value_t = 0)]
        unique: usize,
        /// Random instances with several minimal pairs.
        #[arg(long, default_value_t = 0)]
        multi: usize,
    },
}

fn scalar(s: &str) -> Result<Scalar, String> {
    parse_scalar(s).ok_or_else(|| format!("expected an integer or p/q, got `{s}`"))
}

fn config(cli: Cli) -> Result<RunConfig, LabError> {
    let env = std::env::var(RANK_CAP_ENV).ok();
    let rank_cap = resolve_rank_cap(cli.common.rank_cap, env.as_deref())?;
    let mode = |m: NormArg| match m {
        NormArg::L2 => AmplifyMode::L2,
        NormArg::Linf => AmplifyMode::Linf,
    };
    let command = match &cli.command {
        Cmd::Gso => Command::Gso,
        Cmd::Lll => Command::Lll,
        Cmd::Svp => Command::Svp,
        Cmd::Amplify(_) => Command::Amplify,
        Cmd::Certify(_) => Command::Certify,
        Cmd::Sparsify { .. } => Command::Sparsify,
        Cmd::Isolate { .. } => Command::Isolate,
        Cmd::VerifyNo { .. } => Command::VerifyNo,
        Cmd::SolveUsvp { .. } => Command::SolveUsvp,
        Cmd::Suite { .. } => Command::Suite,
        Cmd::GenerateCorpus { .. } => Command::GenerateCorpus,
    };
    let mut cfg = RunConfig::new(command);
    cfg.input = cli.common.input;
    cfg.seed = cli.common.seed;
    cfg.norm = match cli.common.norm {
        NormArg::L2 => Norm::L2,
        NormArg::Linf => Norm::Linf,
    };
    cfg.rank_cap = rank_cap;
    cfg.output = cli.common.output;
    match cli.command {
        Cmd::Amplify(a) | Cmd::Certify(a) => {
            cfg.mode = mode(a.mode);
            cfg.eta = a.eta;
        }
        Cmd::Sparsify { trials } | Cmd::Isolate { trials } | Cmd::Suite { trials } => {
            cfg.trials = trials
        }
        Cmd::VerifyNo { d, gamma, witness } => {
            cfg.d = Some(d);
            cfg.gamma = Some(gamma);
            cfg.witness = Some(witness);
        }
        Cmd::SolveUsvp { gamma, trace } => {
            cfg.gamma = Some(gamma);
            cfg.trace = trace;
        }
        Cmd::GenerateCorpus {
            count,
            min_rank,
            max_rank,
            bound,
            unique,
            multi,
        } => {
            cfg.corpus = Some(CorpusSpec {
                seed: cfg.seed,
                count,
                min_rank,
                max_rank,
                entry_bound: bound,
                unique_count: unique,
                multi_count: multi,
            });
        }
        Cmd::Gso | Cmd::Lll | Cmd::Svp => {}
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    for line in &outcome.notes {
        eprintln!("{line}");
    }
    let text = outcome.json_lines();
    let written = match (&cfg.output, cfg.command) {
        (Some(path), c) if c != Command::GenerateCorpus => std::fs::write(path, text),
        _ => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    ExitCode::from(outcome.exit_code as u8)
}
