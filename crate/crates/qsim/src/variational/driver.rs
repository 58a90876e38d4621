//! VQE and QAOA runs: optimise the ansatz with SPSA, sample the optimised
//! circuit and keep the most frequent feasible assignment.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use copq_core::ising::{decode, BitString, IsingHamiltonian};
use copq_core::{Permutation, ProblemInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ansatz::{build_ansatz, AnsatzForm, AnsatzSpec};
use super::spsa::{spsa_minimize, SpsaConfig, SpsaResult};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::sim::{expectation_with_diagonal, run, sample, sample_indices, ShotDistribution};

pub const DEFAULT_SHOTS: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bnb,
    Sa,
    Vqe,
    Qaoa,
}

impl Method {
    pub fn is_quantum(self) -> bool {
        matches!(self, Method::Vqe | Method::Qaoa)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Bnb => "bnb",
            Method::Sa => "sa",
            Method::Vqe => "vqe",
            Method::Qaoa => "qaoa",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bnb" => Ok(Method::Bnb),
            "sa" => Ok(Method::Sa),
            "vqe" => Ok(Method::Vqe),
            "qaoa" => Ok(Method::Qaoa),
            _ => Err(Error::invalid(format!("unknown method '{s}'"))),
        }
    }
}

/// How SPSA sees the energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Noiseless statevector expectation.
    Exact,
    /// Shot estimate with the run's `shots`, fresh sampling seed per call.
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub spsa: SpsaConfig,
    pub shots: u64,
    pub objective: Objective,
    pub initial_point: Option<Vec<f64>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            spsa: SpsaConfig::default(),
            shots: DEFAULT_SHOTS,
            objective: Objective::Sampled,
            initial_point: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibleOutcome {
    pub bits: BitString,
    pub pi: Permutation,
    pub cost: f64,
    pub probability: f64,
}

/// The most frequent feasible bitstring (ties go to the lexicographically
/// smallest), or `None` when no sampled string decodes to a permutation.
pub fn feasible_output(
    dist: &ShotDistribution,
    n: usize,
    inst: &ProblemInstance,
) -> Result<Option<FeasibleOutcome>> {
    if dist.width != n * n {
        return Err(Error::invalid(format!(
            "distribution width {} is not {n}^2",
            dist.width
        )));
    }
    let mut best: Option<(&BitString, u64, Permutation, f64)> = None;
    for (bits, &count) in &dist.counts {
        if best.as_ref().is_some_and(|b| count <= b.1) {
            continue;
        }
        let d = decode(bits, n, inst)?;
        if let (true, Some(pi), Some(cost)) = (d.feasible, d.pi, d.cost) {
            best = Some((bits, count, pi, cost));
        }
    }
    Ok(best.map(|(bits, count, pi, cost)| FeasibleOutcome {
        bits: bits.clone(),
        pi,
        cost,
        probability: count as f64 / dist.shots as f64,
    }))
}

/// One trial's outcome, shared by the classical and quantum methods.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub method: Method,
    /// Optimised ansatz parameters; empty for classical methods.
    pub params: Vec<f64>,
    pub best_bits: Option<BitString>,
    pub pi: Option<Permutation>,
    pub cost: Option<f64>,
    /// Frequency of `best_bits` among the shots; 1 for classical solutions.
    pub probability: f64,
    pub distribution: Option<ShotDistribution>,
    pub elapsed_s: f64,
    pub feasible: bool,
}

impl TrialRecord {
    pub fn from_quantum(
        seed: u64,
        method: Method,
        params: Vec<f64>,
        outcome: Option<FeasibleOutcome>,
        distribution: ShotDistribution,
        elapsed_s: f64,
    ) -> Self {
        let feasible = outcome.is_some();
        let (best_bits, pi, cost, probability) = match outcome {
            Some(o) => (Some(o.bits), Some(o.pi), Some(o.cost), o.probability),
            None => (None, None, None, 0.0),
        };
        TrialRecord {
            seed,
            method,
            params,
            best_bits,
            pi,
            cost,
            probability,
            distribution: Some(distribution),
            elapsed_s,
            feasible,
        }
    }
}

/// Energy of the ansatz at `theta`, exact or shot-estimated.
struct EnergyFn<'a> {
    circ: &'a Circuit,
    diag: Vec<f64>,
    objective: Objective,
    shots: u64,
    rng: ChaCha8Rng,
}

impl EnergyFn<'_> {
    fn eval(&mut self, theta: &[f64]) -> Result<f64> {
        let state = run(self.circ, theta)?;
        match self.objective {
            Objective::Exact => Ok(expectation_with_diagonal(&state, &self.diag)),
            Objective::Sampled => {
                let counts = sample_indices(&state, self.shots, self.rng.gen())?;
                Ok(counts
                    .iter()
                    .map(|&(i, c)| c as f64 * self.diag[i])
                    .sum::<f64>()
                    / self.shots as f64)
            }
        }
    }
}

fn check_spec(h: &IsingHamiltonian, spec: &AnsatzSpec) -> Result<()> {
    if spec.width != h.num_qubits {
        return Err(Error::invalid(format!(
            "ansatz width {} does not match Hamiltonian width {}",
            spec.width, h.num_qubits
        )));
    }
    crate::sim::check_width(spec.width)
}

fn optimise(
    h: &IsingHamiltonian,
    circ: &Circuit,
    spsa: &SpsaConfig,
    objective: Objective,
    shots: u64,
    initial_point: Option<&[f64]>,
    rng: &mut ChaCha8Rng,
) -> Result<SpsaResult> {
    spsa.validate()?;
    let dim = circ.num_params();
    let theta0: Vec<f64> = match initial_point {
        Some(p) if p.len() != dim => {
            return Err(Error::invalid(format!(
                "initial point has {} entries, ansatz has {dim} parameters",
                p.len()
            )))
        }
        Some(p) => p.to_vec(),
        None => (0..dim).map(|_| rng.gen_range(-PI..=PI)).collect(),
    };
    let mut energy = EnergyFn {
        circ,
        diag: h.diagonal(),
        objective,
        shots,
        rng: ChaCha8Rng::seed_from_u64(rng.gen()),
    };
    spsa_minimize(|t| energy.eval(t), &theta0, spsa, rng.gen())
}

/// Runs a VQE or QAOA trial and also returns the optimiser trace.
pub fn run_with_history(
    h: &IsingHamiltonian,
    spec: &AnsatzSpec,
    cfg: &RunConfig,
    seed: u64,
    inst: &ProblemInstance,
) -> Result<(TrialRecord, SpsaResult)> {
    let start = Instant::now();
    check_spec(h, spec)?;
    if cfg.shots < 1 {
        return Err(Error::invalid("shots must be at least 1"));
    }
    let n = inst.n();
    if n * n != h.num_qubits {
        return Err(Error::invalid(format!(
            "instance of size {n} needs {} qubits, Hamiltonian has {}",
            n * n,
            h.num_qubits
        )));
    }
    let circ = build_ansatz(spec, Some(h))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let result = optimise(
        h,
        &circ,
        &cfg.spsa,
        cfg.objective,
        cfg.shots,
        cfg.initial_point.as_deref(),
        &mut rng,
    )?;
    let state = run(&circ, &result.theta)?;
    let dist = sample(&state, cfg.shots, rng.gen())?;
    let outcome = feasible_output(&dist, n, inst)?;
    let method = if spec.form == AnsatzForm::Qaoa {
        Method::Qaoa
    } else {
        Method::Vqe
    };
    let record = TrialRecord::from_quantum(
        seed,
        method,
        result.theta.clone(),
        outcome,
        dist,
        start.elapsed().as_secs_f64(),
    );
    Ok((record, result))
}

/// VQE with a TwoLocal or RealAmplitudes ansatz.
pub fn vqe_run(
    h: &IsingHamiltonian,
    spec: &AnsatzSpec,
    cfg: &RunConfig,
    seed: u64,
    inst: &ProblemInstance,
) -> Result<TrialRecord> {
    if !spec.form.is_vqe() {
        return Err(Error::invalid(format!(
            "VQE needs a two_local or real_amplitudes ansatz, got {}",
            spec.form
        )));
    }
    run_with_history(h, spec, cfg, seed, inst).map(|(r, _)| r)
}

/// QAOA of depth `p`; parameters are `(gamma_1..gamma_p, beta_1..beta_p)`.
pub fn qaoa_run(
    h: &IsingHamiltonian,
    p: usize,
    cfg: &RunConfig,
    seed: u64,
    inst: &ProblemInstance,
) -> Result<TrialRecord> {
    let spec = AnsatzSpec::new(AnsatzForm::Qaoa, p, h.num_qubits)?;
    run_with_history(h, &spec, cfg, seed, inst).map(|(r, _)| r)
}

/// SPSA against the exact energy from a seeded random start; the result is
/// meant as `initial_point` for shot-based runs.
pub fn warm_start(
    h: &IsingHamiltonian,
    spec: &AnsatzSpec,
    spsa: &SpsaConfig,
    seed: u64,
) -> Result<Vec<f64>> {
    check_spec(h, spec)?;
    let circ = build_ansatz(spec, Some(h))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(optimise(h, &circ, spsa, Objective::Exact, 1, None, &mut rng)?.theta)
}
