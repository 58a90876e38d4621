//! Simultaneous perturbation stochastic approximation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpsaConfig {
    /// Number of SPSA iterations ("trials").
    pub maxiter: usize,
    pub a: f64,
    pub c: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for SpsaConfig {
    fn default() -> Self {
        SpsaConfig {
            maxiter: 100,
            a: 0.2,
            c: 0.1,
            alpha: 0.602,
            gamma: 0.101,
        }
    }
}

impl SpsaConfig {
    pub fn with_maxiter(maxiter: usize) -> Self {
        SpsaConfig {
            maxiter,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.maxiter < 1 {
            return Err(Error::invalid("SPSA maxiter must be at least 1"));
        }
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !pos(self.a) || !pos(self.c) || !self.alpha.is_finite() || !self.gamma.is_finite() {
            return Err(Error::invalid(format!("invalid SPSA gains {self:?}")));
        }
        Ok(())
    }

    /// Evaluations made by [`spsa_minimize`]: one at the start, then two for
    /// the gradient and one at the updated point per iteration.
    pub fn evaluations(&self) -> usize {
        1 + 3 * self.maxiter
    }
}

/// Objective value at `theta` after `iteration` updates (0 is the start).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpsaStep {
    pub iteration: usize,
    pub value: f64,
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpsaResult {
    /// Lowest-valued point in `history`.
    pub theta: Vec<f64>,
    pub value: f64,
    pub history: Vec<SpsaStep>,
    pub evaluations: usize,
}

/// Minimises `f` from `theta0`. With `a_k = a/(k+1)^alpha` and
/// `c_k = c/(k+1)^gamma`, each step draws a Rademacher vector `delta` and
/// moves `theta -= a_k (f(theta + c_k delta) - f(theta - c_k delta)) / (2 c_k) * delta`.
pub fn spsa_minimize<F>(mut f: F, theta0: &[f64], cfg: &SpsaConfig, seed: u64) -> Result<SpsaResult>
where
    F: FnMut(&[f64]) -> Result<f64>,
{
    cfg.validate()?;
    if theta0.is_empty() {
        return Err(Error::invalid("SPSA needs at least one parameter"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = theta0.len();
    let mut theta = theta0.to_vec();
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        f(x)
    };

    let v0 = eval(&theta)?;
    let mut history = vec![SpsaStep {
        iteration: 0,
        value: v0,
        theta: theta.clone(),
    }];
    let mut plus = vec![0.0; dim];
    let mut minus = vec![0.0; dim];
    for k in 0..cfg.maxiter {
        let kf = (k + 1) as f64;
        let ak = cfg.a / kf.powf(cfg.alpha);
        let ck = cfg.c / kf.powf(cfg.gamma);
        let delta: Vec<f64> = (0..dim)
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        for i in 0..dim {
            plus[i] = theta[i] + ck * delta[i];
            minus[i] = theta[i] - ck * delta[i];
        }
        let diff = (eval(&plus)? - eval(&minus)?) / (2.0 * ck);
        for i in 0..dim {
            // 1/delta_i == delta_i for +-1 entries
            theta[i] -= ak * diff * delta[i];
        }
        let v = eval(&theta)?;
        history.push(SpsaStep {
            iteration: k + 1,
            value: v,
            theta: theta.clone(),
        });
    }

    let best = history
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.value.total_cmp(&b.value).then(i.cmp(j)))
        .map(|(i, _)| i)
        .expect("history is never empty");
    Ok(SpsaResult {
        theta: history[best].theta.clone(),
        value: history[best].value,
        history,
        evaluations,
    })
}
