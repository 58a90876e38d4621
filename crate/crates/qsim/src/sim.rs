//! Dense statevector simulation. Basis index bit `k` is qubit `k`.

use std::collections::BTreeMap;

use copq_core::ising::{BitString, IsingHamiltonian};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::Gate;

/// Width accepted when `COPQ_MAX_QUBITS` is unset.
pub const DEFAULT_MAX_QUBITS: usize = 16;
/// Absolute ceiling regardless of the environment (2^25 amplitudes, 512 MiB).
pub const HARD_MAX_QUBITS: usize = 25;
pub const MAX_QUBITS_ENV: &str = "COPQ_MAX_QUBITS";

/// Current simulator width cap: `COPQ_MAX_QUBITS` if set and valid, clamped
/// to [`HARD_MAX_QUBITS`].
pub fn max_qubits() -> usize {
    std::env::var(MAX_QUBITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
        .min(HARD_MAX_QUBITS)
}

pub fn check_width(width: usize) -> Result<()> {
    let limit = max_qubits();
    if width > limit {
        Err(Error::SizeLimit {
            what: "simulator width",
            size: width,
            limit,
        })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    width: usize,
    amps: Vec<Complex64>,
}

type M2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2x2 matrix of a bound single-qubit gate.
fn matrix_1q(g: &Gate) -> Option<M2> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    Some(match *g {
        Gate::X(_) => [[z, one], [one, z]],
        Gate::SX(_) => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        Gate::H(_) => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
        }
        Gate::Id(_) => [[one, z], [z, one]],
        Gate::RX(_, a) => {
            let (s, co) = (a.offset / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        Gate::RY(_, a) => {
            let (s, co) = (a.offset / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        Gate::RZ(_, a) => {
            let (s, co) = (a.offset / 2.0).sin_cos();
            [[c(co, -s), z], [z, c(co, s)]]
        }
        Gate::CX(..) | Gate::RZZ(..) => return None,
    })
}

impl Statevector {
    /// `|0...0>` on `width` qubits.
    pub fn zero(width: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << width];
        amps[0] = Complex64::new(1.0, 0.0);
        Statevector { width, amps }
    }

    pub fn basis(width: usize, index: usize) -> Result<Self> {
        if index >= 1 << width {
            return Err(Error::invalid(format!(
                "basis index {index} out of range for {width} qubits"
            )));
        }
        let mut s = Statevector::zero(width);
        s.amps[0] = Complex64::new(0.0, 0.0);
        s.amps[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Wraps explicit amplitudes; the length must be a power of two and the
    /// norm 1 within 1e-9.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::invalid(format!(
                "{} amplitudes is not a power of two",
                amps.len()
            )));
        }
        let width = amps.len().trailing_zeros() as usize;
        let s = Statevector { width, amps };
        if (s.norm_sqr() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "state norm {} is not 1",
                s.norm_sqr()
            )));
        }
        Ok(s)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Applies a gate in place. Parametric angles must already be bound.
    pub fn apply(&mut self, g: &Gate) -> Result<()> {
        let qs = g.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.width) {
            return Err(Error::invalid(format!(
                "{} on qubit {q} of a {}-qubit state",
                g.name(),
                self.width
            )));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::invalid(format!(
                "{} needs distinct qubits",
                g.name()
            )));
        }
        if let Some(a) = g.angle() {
            if !a.is_bound() {
                return Err(Error::Binding(format!("{g} has an unbound parameter")));
            }
        }
        match *g {
            Gate::Id(_) => {}
            Gate::CX(ctl, tgt) => {
                let (cm, tm) = (1usize << ctl, 1usize << tgt);
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
            Gate::RZZ(a, b, angle) => {
                let (s, co) = (angle.offset / 2.0).sin_cos();
                let even = c(co, -s);
                let odd = c(co, s);
                let (am, bm) = (1usize << a, 1usize << b);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    let parity = ((i & am != 0) as u8) ^ ((i & bm != 0) as u8);
                    *amp *= if parity == 0 { even } else { odd };
                }
            }
            _ => {
                let m = matrix_1q(g).expect("single-qubit gate");
                let step = 1usize << qs[0];
                for base in (0..self.amps.len()).step_by(step << 1) {
                    for i in base..base + step {
                        let (a0, a1) = (self.amps[i], self.amps[i + step]);
                        self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                        self.amps[i + step] = m[1][0] * a0 + m[1][1] * a1;
                    }
                }
            }
        }
        Ok(())
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Whether two states agree up to a global phase within `tol` (max
    /// amplitude deviation after phase alignment).
    pub fn equal_up_to_phase(&self, other: &Statevector, tol: f64) -> bool {
        if self.width != other.width {
            return false;
        }
        let ov = self.inner(other);
        let phase = if ov.norm() > 0.0 {
            ov / ov.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (a * phase - b).norm() <= tol)
    }
}

/// Functional form of [`Statevector::apply`].
pub fn apply_gate(mut state: Statevector, g: &Gate) -> Result<Statevector> {
    state.apply(g)?;
    Ok(state)
}

/// Evolves `|0...0>` through the circuit with the given parameter values.
pub fn run(circ: &Circuit, bindings: &[f64]) -> Result<Statevector> {
    check_width(circ.width())?;
    let bound = circ.bind(bindings)?;
    let mut state = Statevector::zero(circ.width());
    for g in bound.gates() {
        state.apply(g)?;
    }
    Ok(state)
}

/// Histogram of measured bitstrings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotDistribution {
    pub width: usize,
    pub shots: u64,
    pub counts: BTreeMap<BitString, u64>,
}

impl ShotDistribution {
    pub fn new(width: usize, counts: BTreeMap<BitString, u64>) -> Result<Self> {
        if let Some(b) = counts.keys().find(|b| b.len() != width) {
            return Err(Error::invalid(format!(
                "bitstring {b} does not have width {width}"
            )));
        }
        if counts.values().any(|&c| c == 0) {
            return Err(Error::invalid("counts must be positive"));
        }
        let shots = counts.values().sum();
        Ok(ShotDistribution {
            width,
            shots,
            counts,
        })
    }

    pub fn count(&self, bits: &BitString) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }
}

/// Raw per-basis-index counts, ascending by index.
pub fn sample_indices(state: &Statevector, shots: u64, seed: u64) -> Result<Vec<(usize, u64)>> {
    if shots < 1 {
        return Err(Error::invalid("shots must be at least 1"));
    }
    let mut cdf = Vec::with_capacity(state.amps.len());
    let mut acc = 0.0;
    for a in &state.amps {
        acc += a.norm_sqr();
        cdf.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.gen::<f64>() * total;
        let mut idx = cdf.partition_point(|&c| c <= u);
        // never land on a zero-probability tail entry
        while idx > 0 && (idx >= cdf.len() || state.amps[idx].norm_sqr() == 0.0) {
            idx -= 1;
        }
        *counts.entry(idx).or_insert(0) += 1;
    }
    Ok(counts.into_iter().collect())
}

/// Multinomial measurement of all qubits, deterministic in `seed`.
pub fn sample(state: &Statevector, shots: u64, seed: u64) -> Result<ShotDistribution> {
    let counts = sample_indices(state, shots, seed)?
        .into_iter()
        .map(|(i, c)| (BitString::from_index(i, state.width), c))
        .collect();
    ShotDistribution::new(state.width, counts)
}

fn check_hamiltonian_width(state: &Statevector, h: &IsingHamiltonian) -> Result<()> {
    if h.num_qubits != state.width {
        return Err(Error::invalid(format!(
            "Hamiltonian has {} qubits, state has {}",
            h.num_qubits, state.width
        )));
    }
    Ok(())
}

/// `sum_s |amp_s|^2 E(s)` for a diagonal Hamiltonian.
pub fn exact_expectation(state: &Statevector, h: &IsingHamiltonian) -> Result<f64> {
    check_hamiltonian_width(state, h)?;
    Ok(expectation_with_diagonal(state, &h.diagonal()))
}

/// Same as [`exact_expectation`] with a precomputed `h.diagonal()`.
pub fn expectation_with_diagonal(state: &Statevector, diag: &[f64]) -> f64 {
    state
        .amps
        .iter()
        .zip(diag)
        .map(|(a, e)| a.norm_sqr() * e)
        .sum()
}

/// Shot-noise estimate of the energy; exact in expectation because the
/// Hamiltonian is diagonal in the measurement basis.
pub fn estimate_expectation(
    circ: &Circuit,
    bindings: &[f64],
    h: &IsingHamiltonian,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    let state = run(circ, bindings)?;
    check_hamiltonian_width(&state, h)?;
    let counts = sample_indices(&state, shots, seed)?;
    Ok(counts
        .iter()
        .map(|&(i, c)| c as f64 * h.energy_of_index(i))
        .sum::<f64>()
        / shots as f64)
}
