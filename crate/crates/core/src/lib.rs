//! Problem model, classical solvers and Ising encodings for benchmarking
//! classical and variational quantum methods on TSP and QAP.

pub mod classical;
pub mod error;
pub mod io;
pub mod ising;
pub mod oracle;
pub mod problem;

pub use error::{Error, Result};
pub use io::{
    instance_to_string, parse_instance, parse_instance_str, write_instance, InstanceFormat,
};
pub use oracle::brute_force_optimum;
pub use problem::{
    qap_cost, random_instance, tour_cost, Matrix, Permutation, ProblemInstance, ProblemKind,
    QapInstance, TspInstance,
};
