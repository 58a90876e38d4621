use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{Angle, Gate};

/// An ordered gate list over `width` qubits with `num_params` symbolic
/// parameter slots.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    num_params: usize,
    gates: Vec<Gate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitMetrics {
    pub op_count: usize,
    pub depth: usize,
}

impl Circuit {
    pub fn new(width: usize, num_params: usize) -> Self {
        Circuit {
            width,
            num_params,
            gates: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qubits = gate.qubits();
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.width) {
            return Err(Error::invalid(format!(
                "{} acts on qubit {q} of a {}-qubit circuit",
                gate.name(),
                self.width
            )));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::invalid(format!(
                "{} needs two distinct qubits",
                gate.name()
            )));
        }
        if let Some(a) = gate.angle() {
            if !a.is_finite() {
                return Err(Error::invalid(format!("non-finite angle in {gate}")));
            }
            if let Some(i) = a.param.filter(|&i| i >= self.num_params) {
                return Err(Error::invalid(format!(
                    "parameter slot {i} out of range ({} slots)",
                    self.num_params
                )));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    /// Substitutes every parameter slot, yielding a parameter-free circuit.
    pub fn bind(&self, params: &[f64]) -> Result<Circuit> {
        if params.len() != self.num_params {
            return Err(Error::Binding(format!(
                "circuit has {} parameter slots, got {} values",
                self.num_params,
                params.len()
            )));
        }
        if let Some(p) = params.iter().find(|p| !p.is_finite()) {
            return Err(Error::Binding(format!("non-finite parameter value {p}")));
        }
        Ok(Circuit {
            width: self.width,
            num_params: 0,
            gates: self
                .gates
                .iter()
                .map(|g| g.bind(params))
                .collect::<Result<_>>()?,
        })
    }

    /// Operation count (identity gates excluded) and ASAP layer depth.
    pub fn metrics(&self) -> CircuitMetrics {
        let mut level = vec![0usize; self.width];
        let mut op_count = 0;
        for g in self.gates.iter().filter(|g| !matches!(g, Gate::Id(_))) {
            op_count += 1;
            let qs = g.qubits();
            let layer = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for q in qs {
                level[q] = layer;
            }
        }
        CircuitMetrics {
            op_count,
            depth: level.into_iter().max().unwrap_or(0),
        }
    }

    /// Line-oriented text form: a `QUBITS w PARAMS k` header, then one gate
    /// per line such as `RY 0 1.375` or `RZZ 0 1 2*p0`.
    pub fn dump(&self) -> String {
        let mut out = format!("QUBITS {} PARAMS {}\n", self.width, self.num_params);
        for g in &self.gates {
            writeln!(out, "{g}").unwrap();
        }
        out
    }

    pub fn parse_dump(text: &str) -> Result<Circuit> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let perr = |line: usize, message: String| Error::Parse { line, message };

        let (hl, header) = lines
            .next()
            .ok_or_else(|| perr(1, "missing QUBITS header".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        let (width, num_params) = match h.as_slice() {
            ["QUBITS", w, "PARAMS", p] => (
                w.parse()
                    .map_err(|_| perr(hl, format!("bad width '{w}'")))?,
                p.parse()
                    .map_err(|_| perr(hl, format!("bad parameter count '{p}'")))?,
            ),
            _ => {
                return Err(perr(
                    hl,
                    format!("expected 'QUBITS w PARAMS k', got '{header}'"),
                ))
            }
        };

        let mut circ = Circuit::new(width, num_params);
        for (ln, line) in lines {
            let tok: Vec<&str> = line.split_whitespace().collect();
            let q = |i: usize| -> Result<usize> {
                let t = tok
                    .get(i)
                    .ok_or_else(|| perr(ln, format!("missing operand in '{line}'")))?;
                t.parse()
                    .map_err(|_| perr(ln, format!("bad qubit index '{t}'")))
            };
            let a = |i: usize| -> Result<Angle> {
                let t = tok
                    .get(i)
                    .ok_or_else(|| perr(ln, format!("missing angle in '{line}'")))?;
                parse_angle(t).ok_or_else(|| perr(ln, format!("bad angle '{t}'")))
            };
            let (gate, arity) = match tok[0] {
                "X" => (Gate::X(q(1)?), 2),
                "SX" => (Gate::SX(q(1)?), 2),
                "H" => (Gate::H(q(1)?), 2),
                "ID" => (Gate::Id(q(1)?), 2),
                "RX" => (Gate::RX(q(1)?, a(2)?), 3),
                "RY" => (Gate::RY(q(1)?, a(2)?), 3),
                "RZ" => (Gate::RZ(q(1)?, a(2)?), 3),
                "CX" => (Gate::CX(q(1)?, q(2)?), 3),
                "RZZ" => (Gate::RZZ(q(1)?, q(2)?, a(3)?), 4),
                other => return Err(Error::UnsupportedGate(other.to_string())),
            };
            if tok.len() != arity {
                return Err(perr(ln, format!("trailing tokens in '{line}'")));
            }
            circ.push(gate).map_err(|e| perr(ln, e.to_string()))?;
        }
        Ok(circ)
    }
}

/// Accepts `1.5`, `p3`, `-2*p3`, `p3+0.5`, `2*p3-1e-3`.
fn parse_angle(tok: &str) -> Option<Angle> {
    let Some(ppos) = tok.find('p') else {
        return tok.parse().ok().map(Angle::fixed);
    };
    let scale = match &tok[..ppos] {
        "" => 1.0,
        s => s.strip_suffix('*')?.parse().ok()?,
    };
    let rest = &tok[ppos + 1..];
    let split = rest.find(['+', '-']).unwrap_or(rest.len());
    let index = rest[..split].parse().ok()?;
    let offset = match &rest[split..] {
        "" => 0.0,
        s => s.parse().ok()?,
    };
    Some(Angle {
        offset,
        scale,
        param: Some(index),
    })
}
