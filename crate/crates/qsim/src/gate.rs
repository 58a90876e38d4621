use std::fmt;

use crate::error::{Error, Result};

/// Rotation angle `offset + scale * params[param]`, or just `offset` when no
/// parameter slot is referenced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    pub offset: f64,
    pub scale: f64,
    pub param: Option<usize>,
}

impl Angle {
    pub fn fixed(value: f64) -> Self {
        Angle {
            offset: value,
            scale: 0.0,
            param: None,
        }
    }

    pub fn param(index: usize) -> Self {
        Angle::scaled(index, 1.0)
    }

    pub fn scaled(index: usize, scale: f64) -> Self {
        Angle {
            offset: 0.0,
            scale,
            param: Some(index),
        }
    }

    /// The same angle shifted by a constant.
    pub fn plus(self, shift: f64) -> Self {
        Angle {
            offset: self.offset + shift,
            ..self
        }
    }

    pub fn is_bound(&self) -> bool {
        self.param.is_none()
    }

    pub fn is_finite(&self) -> bool {
        self.offset.is_finite() && self.scale.is_finite()
    }

    pub fn value(&self, params: &[f64]) -> Result<f64> {
        match self.param {
            None => Ok(self.offset),
            Some(i) => params
                .get(i)
                .map(|p| self.offset + self.scale * p)
                .ok_or_else(|| Error::Binding(format!("parameter slot {i} is unbound"))),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param {
            None => write!(f, "{}", self.offset),
            Some(i) => {
                if self.scale == 1.0 {
                    write!(f, "p{i}")?;
                } else {
                    write!(f, "{}*p{i}", self.scale)?;
                }
                if self.offset != 0.0 {
                    write!(f, "{:+}", self.offset)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    X(usize),
    SX(usize),
    H(usize),
    Id(usize),
    RX(usize, Angle),
    RY(usize, Angle),
    RZ(usize, Angle),
    /// Control first, then target.
    CX(usize, usize),
    /// `exp(-i theta/2 Z Z)`.
    RZZ(usize, usize, Angle),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::SX(_) => "SX",
            Gate::H(_) => "H",
            Gate::Id(_) => "ID",
            Gate::RX(..) => "RX",
            Gate::RY(..) => "RY",
            Gate::RZ(..) => "RZ",
            Gate::CX(..) => "CX",
            Gate::RZZ(..) => "RZZ",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::SX(q) | Gate::H(q) | Gate::Id(q) => vec![q],
            Gate::RX(q, _) | Gate::RY(q, _) | Gate::RZ(q, _) => vec![q],
            Gate::CX(a, b) | Gate::RZZ(a, b, _) => vec![a, b],
        }
    }

    pub fn angle(&self) -> Option<Angle> {
        match *self {
            Gate::RX(_, a) | Gate::RY(_, a) | Gate::RZ(_, a) | Gate::RZZ(_, _, a) => Some(a),
            _ => None,
        }
    }

    /// Member of the native set {CX, ID, RZ, SX, X}.
    pub fn is_basis(&self) -> bool {
        matches!(
            self,
            Gate::CX(..) | Gate::Id(_) | Gate::RZ(..) | Gate::SX(_) | Gate::X(_)
        )
    }

    /// Replaces a parametric angle by its value under `params`.
    pub fn bind(&self, params: &[f64]) -> Result<Gate> {
        let fix = |a: &Angle| a.value(params).map(Angle::fixed);
        Ok(match self {
            Gate::RX(q, a) => Gate::RX(*q, fix(a)?),
            Gate::RY(q, a) => Gate::RY(*q, fix(a)?),
            Gate::RZ(q, a) => Gate::RZ(*q, fix(a)?),
            Gate::RZZ(p, q, a) => Gate::RZZ(*p, *q, fix(a)?),
            g => *g,
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        if let Some(a) = self.angle() {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}
