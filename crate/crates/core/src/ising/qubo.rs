use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bits::BitString;
use super::var_index;
use crate::error::{Error, Result};
use crate::problem::{ProblemInstance, QapInstance, TspInstance};

/// Quadratic pseudo-boolean polynomial over `num_vars` binary variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuboModel {
    pub num_vars: usize,
    pub linear: BTreeMap<usize, f64>,
    /// Keys are `(i, j)` with `i < j`.
    pub quadratic: BTreeMap<(usize, usize), f64>,
    pub offset: f64,
    /// Constraint weight the model was built with.
    pub penalty: f64,
}

impl QuboModel {
    pub fn new(num_vars: usize, penalty: f64) -> Self {
        QuboModel {
            num_vars,
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
            offset: 0.0,
            penalty,
        }
    }

    pub fn add_linear(&mut self, i: usize, coeff: f64) {
        debug_assert!(i < self.num_vars);
        *self.linear.entry(i).or_insert(0.0) += coeff;
    }

    /// Adds `coeff * x_i * x_j`; `x_i * x_i` collapses to the linear `x_i`.
    pub fn add_quadratic(&mut self, i: usize, j: usize, coeff: f64) {
        debug_assert!(i < self.num_vars && j < self.num_vars);
        if i == j {
            self.add_linear(i, coeff);
        } else {
            *self.quadratic.entry((i.min(j), i.max(j))).or_insert(0.0) += coeff;
        }
    }

    /// Adds `weight * (1 - sum_{v in vars} x_v)^2` expanded with `x^2 = x`.
    pub fn add_one_hot_penalty(&mut self, vars: &[usize], weight: f64) {
        self.offset += weight;
        for (a, &u) in vars.iter().enumerate() {
            self.add_linear(u, -weight);
            for &v in &vars[a + 1..] {
                self.add_quadratic(u, v, 2.0 * weight);
            }
        }
    }

    pub fn evaluate(&self, bits: &BitString) -> Result<f64> {
        if bits.len() != self.num_vars {
            return Err(Error::invalid(format!(
                "bitstring has {} bits, model has {} variables",
                bits.len(),
                self.num_vars
            )));
        }
        let lin: f64 = self
            .linear
            .iter()
            .filter(|(&i, _)| bits.get(i))
            .map(|(_, c)| c)
            .sum();
        let quad: f64 = self
            .quadratic
            .iter()
            .filter(|(&(i, j), _)| bits.get(i) && bits.get(j))
            .map(|(_, c)| c)
            .sum();
        Ok(self.offset + lin + quad)
    }
}

fn check_penalty(penalty: f64) -> Result<()> {
    if penalty.is_finite() && penalty > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "penalty must be positive, got {penalty}"
        )))
    }
}

fn add_assignment_penalties(q: &mut QuboModel, n: usize, weight: f64) {
    for col in 0..n {
        let vars: Vec<usize> = (0..n).map(|row| var_index(n, row, col)).collect();
        q.add_one_hot_penalty(&vars, weight);
    }
    for row in 0..n {
        let vars: Vec<usize> = (0..n).map(|col| var_index(n, row, col)).collect();
        q.add_one_hot_penalty(&vars, weight);
    }
}

/// `sum_{i != j} d_ij sum_p x_ip x_j(p+1 mod n)` plus the position and city
/// one-hot penalties weighted by `penalty`.
pub fn encode_tsp(inst: &TspInstance, penalty: f64) -> Result<QuboModel> {
    check_penalty(penalty)?;
    let n = inst.n();
    if n < 2 {
        return Err(Error::invalid("TSP encoding needs at least two cities"));
    }
    let d = inst.distances();
    let mut q = QuboModel::new(n * n, penalty);
    for i in 0..n {
        for j in 0..n {
            if i == j || d.get(i, j) == 0.0 {
                continue;
            }
            for p in 0..n {
                q.add_quadratic(
                    var_index(n, i, p),
                    var_index(n, j, (p + 1) % n),
                    d.get(i, j),
                );
            }
        }
    }
    add_assignment_penalties(&mut q, n, penalty);
    Ok(q)
}

/// `sum_{u,m,k,l} c_lk b_um x_ul x_mk` plus the location and facility one-hot
/// penalties weighted by `penalty`.
pub fn encode_qap(inst: &QapInstance, penalty: f64) -> Result<QuboModel> {
    check_penalty(penalty)?;
    let n = inst.n();
    if n < 2 {
        return Err(Error::invalid("QAP encoding needs at least two facilities"));
    }
    let (b, c) = (inst.flow(), inst.distance());
    let mut q = QuboModel::new(n * n, penalty);
    for u in 0..n {
        for m in 0..n {
            let flow = b.get(u, m);
            if flow == 0.0 {
                continue;
            }
            for l in 0..n {
                for k in 0..n {
                    let w = c.get(l, k) * flow;
                    if w != 0.0 {
                        q.add_quadratic(var_index(n, u, l), var_index(n, m, k), w);
                    }
                }
            }
        }
    }
    add_assignment_penalties(&mut q, n, penalty);
    Ok(q)
}

pub fn encode(inst: &ProblemInstance, penalty: f64) -> Result<QuboModel> {
    match inst {
        ProblemInstance::Tsp(t) => encode_tsp(t, penalty),
        ProblemInstance::Qap(q) => encode_qap(q, penalty),
    }
}

/// A penalty strictly above the largest attainable objective value, so every
/// infeasible assignment has higher energy than every feasible one:
/// `n * max(d) + 1` for TSP and `n^2 * max(b) * max(c) + 1` for QAP.
pub fn default_penalty(inst: &ProblemInstance) -> f64 {
    let n = inst.n() as f64;
    match inst {
        ProblemInstance::Tsp(t) => n * t.distances().max() + 1.0,
        ProblemInstance::Qap(q) => n * n * q.flow().max() * q.distance().max() + 1.0,
    }
}
