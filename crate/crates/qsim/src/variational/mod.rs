//! Ansatz construction, SPSA and the VQE / QAOA drivers.

pub mod ansatz;
pub mod driver;
pub mod spsa;

pub use ansatz::{build_ansatz, AnsatzForm, AnsatzSpec};
pub use driver::{
    feasible_output, qaoa_run, run_with_history, vqe_run, warm_start, FeasibleOutcome, Method,
    Objective, RunConfig, TrialRecord,
};
pub use spsa::{spsa_minimize, SpsaConfig, SpsaResult, SpsaStep};
