//! Multi-trial experiments with seeded fan-out over a worker pool.

use std::time::Instant;

use copq_core::classical::{bnb_solve_with, sa_solve, BnbOptions, SaConfig};
use copq_core::ising::{
    default_penalty, encode, permutation_bits, qubo_to_ising, IsingHamiltonian,
};
use copq_core::oracle::BRUTE_FORCE_MAX_N;
use copq_core::{brute_force_optimum, random_instance, ProblemInstance, ProblemKind};
use copq_qsim::sim::max_qubits;
use copq_qsim::variational::{
    run_with_history, warm_start, AnsatzForm, AnsatzSpec, Method, Objective, RunConfig, SpsaConfig,
    TrialRecord,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{summarize, MetricsSummary};

pub const DEFAULT_TRIALS: usize = 30;

/// Everything that determines an experiment's results. Trial `k` uses seed
/// `seed_base + k`; the generated instance (when no explicit one is given)
/// uses `seed_base`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    pub n: usize,
    pub method: Method,
    pub trials: usize,
    pub seed_base: u64,
    /// Explicit instance; generated from `seed_base` when absent.
    pub instance: Option<ProblemInstance>,
    /// Annealing schedule; the per-problem default when absent.
    pub sa: Option<SaConfig>,
    pub spsa: SpsaConfig,
    /// VQE variational form.
    pub form: AnsatzForm,
    pub reps: usize,
    /// QAOA depth.
    pub p: usize,
    pub shots: u64,
    /// Penalty weight; the encoder default when absent.
    pub penalty: Option<f64>,
    pub objective: Objective,
    /// Optimise against the exact energy first and start the shot-based
    /// run from that point.
    pub warm_start: bool,
    /// Known optimum; computed by exhaustive search or BNB when absent.
    pub optimum: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(problem: ProblemKind, n: usize, method: Method) -> Self {
        ExperimentConfig {
            problem,
            n,
            method,
            trials: DEFAULT_TRIALS,
            seed_base: 0,
            instance: None,
            sa: None,
            spsa: SpsaConfig::default(),
            form: AnsatzForm::TwoLocal,
            reps: 1,
            p: 3,
            shots: 1024,
            penalty: None,
            objective: Objective::Sampled,
            warm_start: true,
            optimum: None,
        }
    }

    pub fn sa_config(&self) -> SaConfig {
        self.sa.unwrap_or(match self.problem {
            ProblemKind::Tsp => SaConfig::tsp_default(),
            ProblemKind::Qap => SaConfig::qap_default(),
        })
    }

    pub fn ansatz(&self) -> Result<AnsatzSpec> {
        let spec = match self.method {
            Method::Qaoa => AnsatzSpec::new(AnsatzForm::Qaoa, self.p, self.n * self.n),
            _ => AnsatzSpec::new(self.form, self.reps, self.n * self.n),
        };
        Ok(spec?)
    }

    /// Method parameters as shown in the report's `par` column.
    pub fn par_label(&self) -> String {
        match self.method {
            Method::Bnb => "-".to_string(),
            Method::Sa => self.sa_config().to_string(),
            Method::Vqe => format!("[{}, {}]", self.spsa.maxiter, self.form.short()),
            Method::Qaoa => format!("[{}, p={}]", self.spsa.maxiter, self.p),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Validation(m));
        if self.trials < 1 {
            return fail("trials must be at least 1".into());
        }
        if self.n < 2 {
            return fail(format!("size must be at least 2, got {}", self.n));
        }
        if let Some(inst) = &self.instance {
            if inst.kind() != self.problem || inst.n() != self.n {
                return fail(format!(
                    "instance is {} of size {}, config asks for {} of size {}",
                    inst.kind(),
                    inst.n(),
                    self.problem,
                    self.n
                ));
            }
        }
        if let Some(p) = self.penalty {
            if !(p.is_finite() && p > 0.0) {
                return fail(format!("penalty must be positive, got {p}"));
            }
        }
        match self.method {
            Method::Sa => self.sa_config().validate()?,
            Method::Vqe | Method::Qaoa => {
                self.spsa.validate()?;
                if self.shots < 1 {
                    return fail("shots must be at least 1".into());
                }
                if self.method == Method::Vqe && !self.form.is_vqe() {
                    return fail(format!("VQE cannot use the {} form", self.form));
                }
                self.ansatz()?;
            }
            Method::Bnb => {}
        }
        Ok(())
    }

    /// Rejects combinations this build cannot run, before any trial starts.
    pub fn check_capability(&self) -> Result<()> {
        if self.method.is_quantum() {
            let width = self.n * self.n;
            let cap = max_qubits();
            if width > cap {
                return Err(Error::Capability(format!(
                    "{} at size {} needs {width} qubits, simulator cap is {cap} (set COPQ_MAX_QUBITS to raise it, up to {})",
                    self.method,
                    self.n,
                    copq_qsim::sim::HARD_MAX_QUBITS
                )));
            }
        }
        let bnb_max = BnbOptions::default().max_n;
        if self.method == Method::Bnb && self.n > bnb_max {
            return Err(Error::Capability(format!(
                "branch and bound is limited to size {bnb_max}"
            )));
        }
        if self.optimum.is_none() && self.n > bnb_max {
            return Err(Error::Capability(format!(
                "no reference optimum for size {} (exact search is limited to {bnb_max})",
                self.n
            )));
        }
        Ok(())
    }

    pub fn build_instance(&self) -> Result<ProblemInstance> {
        match &self.instance {
            Some(i) => Ok(i.clone()),
            None => Ok(random_instance(self.problem, self.n, self.seed_base)?),
        }
    }

    pub fn trial_seed(&self, k: usize) -> u64 {
        self.seed_base.wrapping_add(k as u64)
    }
}

/// Exhaustive search up to size 9, branch and bound beyond.
pub fn reference_optimum(inst: &ProblemInstance) -> Result<f64> {
    if inst.n() <= BRUTE_FORCE_MAX_N {
        Ok(brute_force_optimum(inst)?.1)
    } else {
        Ok(bnb_solve_with(inst, BnbOptions::default())?.cost)
    }
}

pub fn hamiltonian(inst: &ProblemInstance, penalty: Option<f64>) -> Result<IsingHamiltonian> {
    let a = penalty.unwrap_or_else(|| default_penalty(inst));
    Ok(qubo_to_ising(&encode(inst, a)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub config: ExperimentConfig,
    pub instance: ProblemInstance,
    pub optimum: f64,
    pub summary: MetricsSummary,
    pub records: Vec<TrialRecord>,
}

struct Prepared<'a> {
    cfg: &'a ExperimentConfig,
    inst: ProblemInstance,
    h: Option<IsingHamiltonian>,
}

impl Prepared<'_> {
    fn trial(&self, k: usize) -> Result<TrialRecord> {
        let cfg = self.cfg;
        let seed = cfg.trial_seed(k);
        let start = Instant::now();
        let classical = |pi: copq_core::Permutation, cost: f64| TrialRecord {
            seed,
            method: cfg.method,
            params: vec![],
            best_bits: Some(permutation_bits(&pi, &self.inst)),
            pi: Some(pi),
            cost: Some(cost),
            probability: 1.0,
            distribution: None,
            elapsed_s: 0.0,
            feasible: true,
        };
        let mut record = match cfg.method {
            Method::Bnb => {
                let r = bnb_solve_with(&self.inst, BnbOptions::default())?;
                classical(r.pi, r.cost)
            }
            Method::Sa => {
                let r = sa_solve(&self.inst, &cfg.sa_config(), seed)?;
                classical(r.pi, r.cost)
            }
            Method::Vqe | Method::Qaoa => {
                let h = self
                    .h
                    .as_ref()
                    .expect("Hamiltonian prepared for quantum methods");
                let spec = cfg.ansatz()?;
                let initial_point = if cfg.warm_start {
                    Some(warm_start(h, &spec, &cfg.spsa, seed)?)
                } else {
                    None
                };
                let run_cfg = RunConfig {
                    spsa: cfg.spsa,
                    shots: cfg.shots,
                    objective: cfg.objective,
                    initial_point,
                };
                run_with_history(h, &spec, &run_cfg, seed, &self.inst)?.0
            }
        };
        record.elapsed_s = start.elapsed().as_secs_f64();
        Ok(record)
    }
}

/// Runs all trials (in parallel, collected in trial order) and scores them
/// against the reference optimum.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    cfg.check_capability()?;
    let inst = cfg.build_instance()?;
    let optimum = match cfg.optimum {
        Some(v) => v,
        None => reference_optimum(&inst)?,
    };
    let h = if cfg.method.is_quantum() {
        Some(hamiltonian(&inst, cfg.penalty)?)
    } else {
        None
    };
    let prepared = Prepared { cfg, inst, h };
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|k| prepared.trial(k))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&records, optimum);
    Ok(ExperimentOutcome {
        config: cfg.clone(),
        instance: prepared.inst,
        optimum,
        summary,
        records,
    })
}
