//! Simulated annealing with Metropolis acceptance, a fixed-length Markov
//! chain per temperature and geometric cooling.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{SolveResult, SolverMeta};
use crate::error::{Error, Result};
use crate::problem::{Permutation, ProblemInstance};

/// What the Metropolis test divides by the temperature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaScale {
    /// `(new - current) / current`, so temperatures do not depend on the
    /// magnitude of the instance's costs.
    #[default]
    Relative,
    /// Plain `new - current`.
    Absolute,
}

impl FromStr for DeltaScale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "relative" => Ok(DeltaScale::Relative),
            "absolute" => Ok(DeltaScale::Absolute),
            _ => Err(Error::invalid(format!("unknown delta scale '{s}'"))),
        }
    }
}

/// `[tolerance, Markov chain length, cooldown factor, starting temperature]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaConfig {
    /// Annealing stops once the temperature falls below this floor.
    pub tolerance: f64,
    /// Neighbour moves attempted at each temperature.
    pub markov_len: usize,
    /// Geometric cooling factor in `(0, 1)`.
    pub cooldown: f64,
    pub t_start: f64,
    /// Hard cap on the number of temperature steps.
    #[serde(default = "default_max_chains")]
    pub max_chains: usize,
    #[serde(default)]
    pub delta: DeltaScale,
}

fn default_max_chains() -> usize {
    10_000
}

impl SaConfig {
    pub fn new(tolerance: f64, markov_len: usize, cooldown: f64, t_start: f64) -> Result<Self> {
        let cfg = SaConfig {
            tolerance,
            markov_len,
            cooldown,
            t_start,
            max_chains: default_max_chains(),
            delta: DeltaScale::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Settings used for the TSP benchmarks.
    pub fn tsp_default() -> Self {
        SaConfig::new(0.01, 10, 0.8, 10.0).unwrap()
    }

    /// Settings used for the QAP benchmarks.
    pub fn qap_default() -> Self {
        SaConfig::new(1.0, 20, 0.90, 20.0).unwrap()
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.tolerance.is_finite()
            && self.tolerance > 0.0
            && self.markov_len >= 1
            && self.cooldown > 0.0
            && self.cooldown < 1.0
            && self.t_start.is_finite()
            && self.t_start > 0.0
            && self.max_chains >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "invalid annealing configuration {self}"
            )))
        }
    }
}

impl fmt::Display for SaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}, {}, {}]",
            self.tolerance, self.markov_len, self.cooldown, self.t_start
        )
    }
}

/// Parses `"tolerance,markov_len,cooldown,t_start"`.
impl FromStr for SaConfig {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(str::trim)
            .collect();
        let bad = || Error::invalid(format!("expected 'tol,len,cool,t0', got '{s}'"));
        let [tol, len, cool, t0] = parts.as_slice() else {
            return Err(bad());
        };
        SaConfig::new(
            tol.parse().map_err(|_| bad())?,
            len.parse().map_err(|_| bad())?,
            cool.parse().map_err(|_| bad())?,
            t0.parse().map_err(|_| bad())?,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaStats {
    pub temperature_steps: usize,
    pub moves: usize,
    pub accepted: usize,
    pub initial_cost: f64,
    pub final_temperature: f64,
}

pub fn sa_solve(inst: &ProblemInstance, cfg: &SaConfig, seed: u64) -> Result<SolveResult> {
    cfg.validate()?;
    let n = inst.n();
    if n < 2 {
        return Err(Error::invalid(format!("annealing needs n >= 2, got {n}")));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut current = Permutation::random(n, &mut rng);
    let mut current_cost = inst.cost(&current)?;
    let initial_cost = current_cost;
    let mut best = current.clone();
    let mut best_cost = current_cost;

    let mut temperature = cfg.t_start;
    let mut stats = SaStats {
        temperature_steps: 0,
        moves: 0,
        accepted: 0,
        initial_cost,
        final_temperature: temperature,
    };

    while temperature >= cfg.tolerance && stats.temperature_steps < cfg.max_chains {
        for _ in 0..cfg.markov_len {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            current.swap(i, j);
            let candidate = inst.cost(&current)?;
            let delta = match cfg.delta {
                DeltaScale::Absolute => candidate - current_cost,
                // costs are non-negative; a zero-cost state is already optimal
                DeltaScale::Relative if current_cost > 0.0 => {
                    (candidate - current_cost) / current_cost
                }
                DeltaScale::Relative => candidate - current_cost,
            };
            stats.moves += 1;
            if delta <= 0.0 || rng.gen::<f64>() < (-delta / temperature).exp() {
                current_cost = candidate;
                stats.accepted += 1;
                if current_cost < best_cost {
                    best_cost = current_cost;
                    best = current.clone();
                }
            } else {
                current.swap(i, j);
            }
        }
        temperature *= cfg.cooldown;
        stats.temperature_steps += 1;
    }
    stats.final_temperature = temperature;

    Ok(SolveResult {
        pi: best,
        cost: best_cost,
        elapsed_s: start.elapsed().as_secs_f64(),
        meta: SolverMeta::Sa(stats),
    })
}
