//! Gate-level statevector simulation, basis-gate transpilation and the
//! variational drivers (VQE and QAOA optimised with SPSA).

pub mod circuit;
pub mod error;
pub mod gate;
pub mod sim;
pub mod transpile;
pub mod variational;

pub use circuit::{Circuit, CircuitMetrics};
pub use error::{Error, Result};
pub use gate::{Angle, Gate};
pub use sim::{
    apply_gate, estimate_expectation, exact_expectation, max_qubits, run, sample, ShotDistribution,
    Statevector,
};
pub use transpile::transpile_to_basis;
