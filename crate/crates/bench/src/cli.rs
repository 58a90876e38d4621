//! The `copq` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use copq_core::classical::{DeltaScale, SaConfig};
use copq_core::{instance_to_string, parse_instance, random_instance, InstanceFormat, ProblemKind};
use copq_qsim::variational::{AnsatzForm, Method, Objective, SpsaConfig};

use crate::error::{Error, Result};
use crate::experiment::{hamiltonian, run_experiment, ExperimentConfig, DEFAULT_TRIALS};
use crate::report::{render, ReportFormat};
use crate::verify::verify_suite;

#[derive(Debug, Parser)]
#[command(
    name = "copq",
    version,
    about = "Classical and variational quantum solvers for TSP and QAP"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Encode an instance as an Ising Hamiltonian (JSON).
    Encode(EncodeArgs),
    /// Run a single trial of one method and print the trial record.
    Solve(RunArgs),
    /// Run a multi-trial experiment and write a JSON or CSV report.
    Bench(RunArgs),
    /// Check the fast paths against exhaustive oracles on small sizes.
    Verify,
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// tsp or qap.
    #[arg(long, default_value = "tsp")]
    problem: String,
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Instance seed; trial k of an experiment uses seed + k.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Read the instance from a file instead of generating it.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// matrix, tsplib or qaplib.
    #[arg(long, default_value = "matrix")]
    instance_format: String,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Instance file format (matrix only).
    #[arg(long, default_value = "matrix")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EncodeArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    source: SourceArgs,
    /// Constraint penalty weight (default: just above the largest objective).
    #[arg(long)]
    penalty: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    source: SourceArgs,
    /// bnb, sa, vqe or qaoa.
    #[arg(long, default_value = "sa")]
    method: String,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 1024)]
    shots: u64,
    /// VQE form: two_local (TL) or real_amplitudes (RA).
    #[arg(long, default_value = "two_local")]
    form: String,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// QAOA depth.
    #[arg(long, default_value_t = 3)]
    p: usize,
    #[arg(long, default_value_t = 100)]
    spsa_maxiter: usize,
    /// Annealing schedule "tol,len,cool,t0".
    #[arg(long)]
    sa: Option<String>,
    /// Annealing acceptance on the relative or absolute cost change.
    #[arg(long, default_value = "relative")]
    sa_delta: String,
    #[arg(long)]
    penalty: Option<f64>,
    /// exact or sampled energy during optimisation.
    #[arg(long, default_value = "sampled")]
    objective: String,
    /// Start from a random point instead of an exact-energy warm start.
    #[arg(long)]
    no_warm_start: bool,
    /// Report format: json or csv (default: from --out extension).
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn validation<E: std::fmt::Display>(e: E) -> Error {
    Error::Validation(e.to_string())
}

fn parse_kind(s: &str) -> Result<ProblemKind> {
    s.parse().map_err(validation)
}

fn load_or_generate(p: &ProblemArgs, s: &SourceArgs) -> Result<copq_core::ProblemInstance> {
    match &s.instance {
        Some(path) => {
            let fmt: InstanceFormat = s.instance_format.parse().map_err(validation)?;
            Ok(parse_instance(path, fmt)?)
        }
        None => Ok(random_instance(parse_kind(&p.problem)?, p.n, p.seed)?),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

impl RunArgs {
    fn config(&self, trials_default: usize) -> Result<ExperimentConfig> {
        let inst = self
            .source
            .instance
            .as_ref()
            .map(|_| load_or_generate(&self.problem, &self.source))
            .transpose()?;
        let (problem, n) = match &inst {
            Some(i) => (i.kind(), i.n()),
            None => (parse_kind(&self.problem.problem)?, self.problem.n),
        };
        let method: Method = self.method.parse().map_err(validation)?;
        let mut cfg = ExperimentConfig::new(problem, n, method);
        cfg.instance = inst;
        cfg.trials = self.trials.unwrap_or(trials_default);
        cfg.seed_base = self.problem.seed;
        cfg.sa = self
            .sa
            .as_deref()
            .map(str::parse::<SaConfig>)
            .transpose()
            .map_err(validation)?;
        let delta: DeltaScale = self.sa_delta.parse().map_err(validation)?;
        if method == Method::Sa {
            let mut sa = cfg.sa_config();
            sa.delta = delta;
            cfg.sa = Some(sa);
        }
        cfg.spsa = SpsaConfig::with_maxiter(self.spsa_maxiter);
        cfg.form = self.form.parse().map_err(validation)?;
        cfg.reps = self.reps;
        cfg.p = self.p;
        cfg.shots = self.shots;
        cfg.penalty = self.penalty;
        cfg.objective = match self.objective.to_ascii_lowercase().as_str() {
            "exact" => Objective::Exact,
            "sampled" => Objective::Sampled,
            other => return Err(Error::Validation(format!("unknown objective '{other}'"))),
        };
        cfg.warm_start = !self.no_warm_start;
        if method == Method::Qaoa {
            cfg.form = AnsatzForm::Qaoa;
        }
        Ok(cfg)
    }

    fn report_format(&self) -> Result<ReportFormat> {
        match (&self.format, &self.out) {
            (Some(f), _) => f.parse(),
            (None, Some(p)) => Ok(ReportFormat::from_path(p)),
            (None, None) => Ok(ReportFormat::Json),
        }
    }
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gen(a) => {
            let fmt: InstanceFormat = a.format.parse().map_err(validation)?;
            if fmt != InstanceFormat::Matrix {
                return Err(Error::Validation(format!(
                    "instances can only be written in the matrix format, not {}",
                    a.format
                )));
            }
            let inst =
                random_instance(parse_kind(&a.problem.problem)?, a.problem.n, a.problem.seed)?;
            write_output(a.out.as_deref(), &instance_to_string(&inst))
        }
        Command::Encode(a) => {
            let inst = load_or_generate(&a.problem, &a.source)?;
            let h = hamiltonian(&inst, a.penalty)?;
            let mut text = serde_json::to_string_pretty(&h)?;
            text.push('\n');
            write_output(a.out.as_deref(), &text)
        }
        Command::Solve(a) => {
            let cfg = a.config(1)?;
            let outcome = run_experiment(&cfg)?;
            let mut text = serde_json::to_string_pretty(&outcome.records[0])?;
            text.push('\n');
            write_output(a.out.as_deref(), &text)
        }
        Command::Bench(a) => {
            let format = a.report_format()?;
            let cfg = a.config(DEFAULT_TRIALS)?;
            let outcome = run_experiment(&cfg)?;
            let text = render(&outcome, format)?;
            write_output(a.out.as_deref(), &text)?;
            if a.out.is_some() {
                let s = &outcome.summary;
                println!(
                    "{} n={} {}: sr99 {:.1} sr95 {:.1} feas {:.1} at {:.4}s mt {:.4}s",
                    cfg.problem,
                    cfg.n,
                    cfg.method,
                    s.sr99,
                    s.sr95,
                    s.feasibility,
                    s.at_seconds,
                    s.mt_seconds
                );
            }
            Ok(())
        }
        Command::Verify => {
            let results = verify_suite();
            for r in &results {
                if r.passed {
                    println!("PASS {}", r.name);
                } else {
                    println!("FAIL {}: {}", r.name, r.detail);
                }
            }
            if results.iter().all(|r| r.passed) {
                Ok(())
            } else {
                Err(Error::Validation("verification failed".into()))
            }
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status: 0 on success, 1 on usage or validation errors, 2 when
/// the request exceeds what this build can run.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
