use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bits::BitString;
use super::qubo::QuboModel;
use crate::error::{Error, Result};

/// Largest Hamiltonian accepted by [`ground_state_bruteforce`].
pub const GROUND_STATE_MAX_QUBITS: usize = 20;

/// `coeff * prod_{q in qubits} Z_q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZTerm {
    pub coeff: f64,
    pub qubits: Vec<usize>,
}

/// A Hamiltonian built only from Pauli-Z products, hence diagonal in the
/// computational basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingHamiltonian {
    pub num_qubits: usize,
    pub constant: f64,
    pub terms: Vec<ZTerm>,
}

impl IsingHamiltonian {
    /// Collects terms, merging duplicate supports and dropping zero
    /// coefficients. Supports are stored sorted.
    pub fn new(
        num_qubits: usize,
        constant: f64,
        terms: impl IntoIterator<Item = ZTerm>,
    ) -> Result<Self> {
        let mut merged: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        let mut constant = constant;
        for ZTerm { coeff, mut qubits } in terms {
            qubits.sort_unstable();
            if qubits.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!(
                    "repeated qubit in support {qubits:?}"
                )));
            }
            if let Some(&q) = qubits.iter().find(|&&q| q >= num_qubits) {
                return Err(Error::invalid(format!(
                    "qubit {q} out of range for {num_qubits} qubits"
                )));
            }
            if qubits.is_empty() {
                constant += coeff;
            } else {
                *merged.entry(qubits).or_insert(0.0) += coeff;
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(qubits, coeff)| ZTerm { coeff, qubits })
            .collect();
        Ok(IsingHamiltonian {
            num_qubits,
            constant,
            terms,
        })
    }

    /// `constant + sum coeff * prod (1 - 2 bit_q)`.
    pub fn energy(&self, bits: &BitString) -> Result<f64> {
        if bits.len() != self.num_qubits {
            return Err(Error::invalid(format!(
                "bitstring has {} bits, Hamiltonian has {} qubits",
                bits.len(),
                self.num_qubits
            )));
        }
        Ok(self.constant
            + self
                .terms
                .iter()
                .map(|t| {
                    let flips = t.qubits.iter().filter(|&&q| bits.get(q)).count();
                    if flips % 2 == 0 {
                        t.coeff
                    } else {
                        -t.coeff
                    }
                })
                .sum::<f64>())
    }

    /// Energy of basis state `index` (qubit 0 least significant).
    #[inline]
    pub fn energy_of_index(&self, index: usize) -> f64 {
        self.constant
            + self
                .terms
                .iter()
                .map(|t| {
                    let mask = t.qubits.iter().fold(0usize, |m, &q| m | (1 << q));
                    if (index & mask).count_ones().is_multiple_of(2) {
                        t.coeff
                    } else {
                        -t.coeff
                    }
                })
                .sum::<f64>()
    }

    /// All `2^num_qubits` diagonal entries, indexed by basis state.
    pub fn diagonal(&self) -> Vec<f64> {
        let dim = 1usize << self.num_qubits;
        let masks: Vec<(usize, f64)> = self
            .terms
            .iter()
            .map(|t| (t.qubits.iter().fold(0usize, |m, &q| m | (1 << q)), t.coeff))
            .collect();
        (0..dim)
            .map(|s| {
                self.constant
                    + masks
                        .iter()
                        .map(|&(m, c)| if (s & m).count_ones() % 2 == 0 { c } else { -c })
                        .sum::<f64>()
            })
            .collect()
    }

    /// Largest support size among the terms.
    pub fn locality(&self) -> usize {
        self.terms.iter().map(|t| t.qubits.len()).max().unwrap_or(0)
    }
}

/// Exact substitution `x_k -> (1 - Z_k) / 2`.
pub fn qubo_to_ising(q: &QuboModel) -> IsingHamiltonian {
    let mut constant = q.offset;
    let mut terms = Vec::with_capacity(q.linear.len() + 3 * q.quadratic.len());
    for (&i, &a) in &q.linear {
        constant += a / 2.0;
        terms.push(ZTerm {
            coeff: -a / 2.0,
            qubits: vec![i],
        });
    }
    for (&(i, j), &w) in &q.quadratic {
        constant += w / 4.0;
        terms.push(ZTerm {
            coeff: -w / 4.0,
            qubits: vec![i],
        });
        terms.push(ZTerm {
            coeff: -w / 4.0,
            qubits: vec![j],
        });
        terms.push(ZTerm {
            coeff: w / 4.0,
            qubits: vec![i, j],
        });
    }
    IsingHamiltonian::new(q.num_vars, constant, terms)
        .expect("QUBO variable indices are within range")
}

/// Exhaustive minimum over all basis states. Ties resolve to the
/// lexicographically smallest bitstring.
pub fn ground_state_bruteforce(h: &IsingHamiltonian) -> Result<(BitString, f64)> {
    if h.num_qubits > GROUND_STATE_MAX_QUBITS {
        return Err(Error::SizeLimit {
            what: "ground-state search qubit count",
            size: h.num_qubits,
            limit: GROUND_STATE_MAX_QUBITS,
        });
    }
    let diag = h.diagonal();
    let mut best = 0usize;
    let mut best_bits = BitString::from_index(0, h.num_qubits);
    for (s, &e) in diag.iter().enumerate().skip(1) {
        if e < diag[best] {
            best = s;
            best_bits = BitString::from_index(s, h.num_qubits);
        } else if e == diag[best] {
            let bits = BitString::from_index(s, h.num_qubits);
            if bits < best_bits {
                best = s;
                best_bits = bits;
            }
        }
    }
    Ok((best_bits, diag[best]))
}
