//! Classical baselines: exact best-first branch and bound and simulated
//! annealing over permutations.

mod bnb;
mod sa;

use serde::{Deserialize, Serialize};

use crate::problem::Permutation;

pub use bnb::{bnb_solve, bnb_solve_with, lower_bound, AuditEntry, BnbOptions, BnbStats};
pub use sa::{sa_solve, DeltaScale, SaConfig, SaStats};

/// Outcome of a classical solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub pi: Permutation,
    pub cost: f64,
    pub elapsed_s: f64,
    pub meta: SolverMeta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "solver", rename_all = "lowercase")]
pub enum SolverMeta {
    Bnb(BnbStats),
    Sa(SaStats),
}
