use std::fmt;
use std::str::FromStr;

use copq_core::ising::IsingHamiltonian;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{Angle, Gate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzForm {
    TwoLocal,
    RealAmplitudes,
    Qaoa,
}

impl AnsatzForm {
    pub fn is_vqe(self) -> bool {
        !matches!(self, AnsatzForm::Qaoa)
    }

    /// Short label used in report tables.
    pub fn short(self) -> &'static str {
        match self {
            AnsatzForm::TwoLocal => "TL",
            AnsatzForm::RealAmplitudes => "RA",
            AnsatzForm::Qaoa => "QAOA",
        }
    }
}

impl fmt::Display for AnsatzForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnsatzForm::TwoLocal => "two_local",
            AnsatzForm::RealAmplitudes => "real_amplitudes",
            AnsatzForm::Qaoa => "qaoa",
        })
    }
}

impl FromStr for AnsatzForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "two_local" | "twolocal" | "tl" => Ok(AnsatzForm::TwoLocal),
            "real_amplitudes" | "realamplitudes" | "ra" => Ok(AnsatzForm::RealAmplitudes),
            "qaoa" => Ok(AnsatzForm::Qaoa),
            _ => Err(Error::invalid(format!("unknown ansatz form '{s}'"))),
        }
    }
}

/// `reps` is the entangling repetition count for the VQE forms and the depth
/// `p` for QAOA.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzSpec {
    pub form: AnsatzForm,
    pub reps: usize,
    pub width: usize,
}

impl AnsatzSpec {
    pub fn new(form: AnsatzForm, reps: usize, width: usize) -> Result<Self> {
        if reps == 0 {
            return Err(Error::invalid("ansatz repetitions must be at least 1"));
        }
        if width == 0 {
            return Err(Error::invalid("ansatz width must be at least 1"));
        }
        Ok(AnsatzSpec { form, reps, width })
    }

    pub fn num_params(&self) -> usize {
        match self.form {
            AnsatzForm::Qaoa => 2 * self.reps,
            _ => self.width * (self.reps + 1),
        }
    }
}

fn ry_layer(c: &mut Circuit, layer: usize) -> Result<()> {
    let w = c.width();
    c.extend((0..w).map(|q| Gate::RY(q, Angle::param(layer * w + q))))
}

/// Builds the parametrised circuit. QAOA needs the Hamiltonian for its cost
/// layer; the VQE forms ignore it.
pub fn build_ansatz(spec: &AnsatzSpec, h: Option<&IsingHamiltonian>) -> Result<Circuit> {
    if spec.reps == 0 {
        return Err(Error::invalid("ansatz repetitions must be at least 1"));
    }
    let w = spec.width;
    let mut c = Circuit::new(w, spec.num_params());
    match spec.form {
        AnsatzForm::TwoLocal | AnsatzForm::RealAmplitudes => {
            for r in 0..spec.reps {
                ry_layer(&mut c, r)?;
                let chain: Vec<Gate> = (0..w.saturating_sub(1))
                    .map(|k| Gate::CX(k, k + 1))
                    .collect();
                // RealAmplitudes walks the chain from the far end
                if spec.form == AnsatzForm::RealAmplitudes {
                    c.extend(chain.into_iter().rev())?;
                } else {
                    c.extend(chain)?;
                }
            }
            ry_layer(&mut c, spec.reps)?;
        }
        AnsatzForm::Qaoa => {
            let h = h.ok_or_else(|| Error::invalid("QAOA ansatz requires a Hamiltonian"))?;
            if h.num_qubits != w {
                return Err(Error::invalid(format!(
                    "ansatz width {w} does not match Hamiltonian width {}",
                    h.num_qubits
                )));
            }
            if h.locality() > 2 {
                return Err(Error::invalid(format!(
                    "QAOA cost layer supports 1- and 2-local terms, got {}-local",
                    h.locality()
                )));
            }
            let p = spec.reps;
            c.extend((0..w).map(Gate::H))?;
            for j in 0..p {
                for t in &h.terms {
                    let angle = Angle::scaled(j, 2.0 * t.coeff);
                    match t.qubits.as_slice() {
                        [q] => c.push(Gate::RZ(*q, angle))?,
                        [a, b] => c.push(Gate::RZZ(*a, *b, angle))?,
                        _ => unreachable!("locality checked above"),
                    }
                }
                c.extend((0..w).map(|q| Gate::RX(q, Angle::scaled(p + j, 2.0))))?;
            }
        }
    }
    debug_assert_eq!(c.num_params(), spec.num_params());
    Ok(c)
}
