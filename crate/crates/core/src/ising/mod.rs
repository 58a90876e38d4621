//! Penalty QUBO encodings of TSP and QAP over `n^2` one-hot variables, their
//! diagonal Pauli-Z Hamiltonians, and decoding of measured bitstrings.
//!
//! Variable `i * n + p` is `x_ip` (city `i` at tour position `p`, or facility
//! `i` at location `p`) and maps to qubit `i * n + p`.

mod bits;
mod decode;
mod hamiltonian;
mod qubo;

pub use bits::BitString;
pub use decode::{decode, permutation_bits, DecodedSolution};
pub use hamiltonian::{
    ground_state_bruteforce, qubo_to_ising, IsingHamiltonian, ZTerm, GROUND_STATE_MAX_QUBITS,
};
pub use qubo::{default_penalty, encode, encode_qap, encode_tsp, QuboModel};

/// Index of the one-hot variable for row `row` (city / facility) and column
/// `col` (position / location).
#[inline]
pub fn var_index(n: usize, row: usize, col: usize) -> usize {
    row * n + col
}
