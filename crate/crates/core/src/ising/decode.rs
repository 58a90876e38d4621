use serde::{Deserialize, Serialize};

use super::bits::BitString;
use super::var_index;
use crate::error::{Error, Result};
use crate::problem::{Permutation, ProblemInstance};

/// Result of reading a measured bitstring as an `n x n` assignment matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodedSolution {
    pub feasible: bool,
    pub pi: Option<Permutation>,
    pub cost: Option<f64>,
}

impl DecodedSolution {
    fn infeasible() -> Self {
        DecodedSolution {
            feasible: false,
            pi: None,
            cost: None,
        }
    }
}

/// Interprets `bits` row-major, rows being cities / facilities and columns
/// tour positions / locations. Feasible iff the matrix is a permutation
/// matrix.
pub fn decode(bits: &BitString, n: usize, inst: &ProblemInstance) -> Result<DecodedSolution> {
    if bits.len() != n * n || inst.n() != n {
        return Err(Error::invalid(format!(
            "bitstring of length {} cannot be decoded for n = {n} (instance size {})",
            bits.len(),
            inst.n()
        )));
    }
    let mut col_of_row = vec![usize::MAX; n];
    let mut col_used = vec![false; n];
    for (row, slot) in col_of_row.iter_mut().enumerate() {
        for (col, used) in col_used.iter_mut().enumerate() {
            if bits.get(var_index(n, row, col)) {
                if *slot != usize::MAX || *used {
                    return Ok(DecodedSolution::infeasible());
                }
                *slot = col;
                *used = true;
            }
        }
        if *slot == usize::MAX {
            return Ok(DecodedSolution::infeasible());
        }
    }
    let pi = match inst {
        // pi[position] = city
        ProblemInstance::Tsp(_) => {
            let mut tour = vec![0; n];
            for (city, &pos) in col_of_row.iter().enumerate() {
                tour[pos] = city;
            }
            Permutation::new(tour)?
        }
        // pi[facility] = location
        ProblemInstance::Qap(_) => Permutation::new(col_of_row)?,
    };
    let cost = inst.cost(&pi)?;
    Ok(DecodedSolution {
        feasible: true,
        pi: Some(pi),
        cost: Some(cost),
    })
}

/// The permutation-matrix bitstring that [`decode`] maps back to `pi`.
pub fn permutation_bits(pi: &Permutation, inst: &ProblemInstance) -> BitString {
    let n = pi.len();
    let mut bits = BitString::zeros(n * n);
    for (k, &v) in pi.as_slice().iter().enumerate() {
        let idx = match inst {
            ProblemInstance::Tsp(_) => var_index(n, v, k),
            ProblemInstance::Qap(_) => var_index(n, k, v),
        };
        bits.set(idx, true);
    }
    bits
}
