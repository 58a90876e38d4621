#![allow(clippy::needless_range_loop)]

//! Dense-matrix reference model of the gate set, independent of the
//! simulator's in-place kernels.
#![allow(dead_code)]

use copq_qsim::{Circuit, Gate};
use num_complex::Complex64 as C;

pub type Dense = Vec<Vec<C>>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn single_qubit(g: &Gate) -> [[C; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let t = |a: &copq_qsim::Angle| a.offset;
    match g {
        Gate::X(_) => [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
        Gate::SX(_) => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        Gate::H(_) => [[c(h, 0.), c(h, 0.)], [c(h, 0.), c(-h, 0.)]],
        Gate::Id(_) => [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]],
        Gate::RX(_, a) => {
            let th = t(a) / 2.0;
            [
                [c(th.cos(), 0.), c(0., -th.sin())],
                [c(0., -th.sin()), c(th.cos(), 0.)],
            ]
        }
        Gate::RY(_, a) => {
            let th = t(a) / 2.0;
            [
                [c(th.cos(), 0.), c(-th.sin(), 0.)],
                [c(th.sin(), 0.), c(th.cos(), 0.)],
            ]
        }
        Gate::RZ(_, a) => {
            let th = t(a) / 2.0;
            [
                [C::from_polar(1.0, -th), c(0., 0.)],
                [c(0., 0.), C::from_polar(1.0, th)],
            ]
        }
        _ => panic!("not a single-qubit gate"),
    }
}

/// Full `2^w x 2^w` unitary of one bound gate.
pub fn gate_unitary(g: &Gate, w: usize) -> Dense {
    let dim = 1 << w;
    let mut u = vec![vec![c(0., 0.); dim]; dim];
    match *g {
        Gate::CX(ctl, tgt) => {
            for j in 0..dim {
                let i = if (j >> ctl) & 1 == 1 {
                    j ^ (1 << tgt)
                } else {
                    j
                };
                u[i][j] = c(1., 0.);
            }
        }
        Gate::RZZ(a, b, ang) => {
            for i in 0..dim {
                let odd = ((i >> a) ^ (i >> b)) & 1 == 1;
                let phase = if odd {
                    ang.offset / 2.0
                } else {
                    -ang.offset / 2.0
                };
                u[i][i] = C::from_polar(1.0, phase);
            }
        }
        _ => {
            let q = g.qubits()[0];
            let m = single_qubit(g);
            for i in 0..dim {
                for j in 0..dim {
                    if (i & !(1 << q)) == (j & !(1 << q)) {
                        u[i][j] = m[(i >> q) & 1][(j >> q) & 1];
                    }
                }
            }
        }
    }
    u
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![c(0., 0.); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == c(0., 0.) {
                continue;
            }
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn identity(dim: usize) -> Dense {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { c(1., 0.) } else { c(0., 0.) })
                .collect()
        })
        .collect()
}

/// Product of gate unitaries for a parameter-free circuit.
pub fn circuit_unitary(circ: &Circuit) -> Dense {
    circ.gates()
        .iter()
        .fold(identity(1 << circ.width()), |acc, g| {
            matmul(&gate_unitary(g, circ.width()), &acc)
        })
}

/// Max elementwise distance after removing the best global phase.
pub fn phase_distance(a: &Dense, b: &Dense) -> f64 {
    let mut overlap = c(0., 0.);
    for (ra, rb) in a.iter().zip(b) {
        for (x, y) in ra.iter().zip(rb) {
            overlap += x.conj() * y;
        }
    }
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1., 0.)
    };
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(move |(x, y)| (x * phase - y).norm()))
        .fold(0.0, f64::max)
}

/// First column of a unitary, i.e. its action on |0...0>.
pub fn first_column(u: &Dense) -> Vec<C> {
    u.iter().map(|row| row[0]).collect()
}
