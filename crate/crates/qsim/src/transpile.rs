//! Rewriting into the native gate set {CX, ID, RZ, SX, X}.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::circuit::Circuit;
use crate::error::Result;
use crate::gate::{Angle, Gate};

/// Basis sequence for one gate, equal to it up to a global phase.
pub fn decompose(g: &Gate) -> Vec<Gate> {
    let quarter = Angle::fixed(FRAC_PI_2);
    match *g {
        Gate::H(q) => vec![Gate::RZ(q, quarter), Gate::SX(q), Gate::RZ(q, quarter)],
        // H RZ(t) H with the inner RZ(pi/2) pairs merged
        Gate::RX(q, a) => vec![
            Gate::RZ(q, quarter),
            Gate::SX(q),
            Gate::RZ(q, a.plus(PI)),
            Gate::SX(q),
            Gate::RZ(q, quarter),
        ],
        // RZ(pi/2) RX(t) RZ(-pi/2), outer rotations merged
        Gate::RY(q, a) => vec![
            Gate::SX(q),
            Gate::RZ(q, a.plus(PI)),
            Gate::SX(q),
            Gate::RZ(q, Angle::fixed(PI)),
        ],
        Gate::RZZ(p, q, a) => vec![Gate::CX(p, q), Gate::RZ(q, a), Gate::CX(p, q)],
        g => vec![g],
    }
}

/// Parameter slots survive the rewrite; output gates are all basis gates.
pub fn transpile_to_basis(circ: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(circ.width(), circ.num_params());
    for g in circ.gates() {
        out.extend(decompose(g))?;
    }
    Ok(out)
}
