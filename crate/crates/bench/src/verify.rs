//! Self-check comparing every fast path against an exhaustive oracle on
//! instances of size at most 4.

use std::f64::consts::PI;

use copq_core::classical::bnb_solve;
use copq_core::ising::{
    decode, default_penalty, encode, ground_state_bruteforce, permutation_bits, qubo_to_ising,
    BitString,
};
use copq_core::{brute_force_optimum, random_instance, ProblemKind};
use copq_qsim::variational::{build_ansatz, AnsatzForm, AnsatzSpec};
use copq_qsim::{exact_expectation, run, transpile_to_basis, Angle, Circuit, Gate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

const KINDS: [ProblemKind; 2] = [ProblemKind::Tsp, ProblemKind::Qap];
const SEEDS: u64 = 5;

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn check(name: &str, f: impl FnOnce() -> Result<Option<String>>) -> CheckResult {
    let (passed, detail) = match f() {
        Ok(None) => (true, String::new()),
        Ok(Some(why)) => (false, why),
        Err(e) => (false, e.to_string()),
    };
    CheckResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn encoding_matches_qubo() -> Result<Option<String>> {
    for kind in KINDS {
        for n in 2..=3 {
            for seed in 0..SEEDS {
                let inst = random_instance(kind, n, seed)?;
                let q = encode(&inst, default_penalty(&inst))?;
                let h = qubo_to_ising(&q);
                for s in 0..1usize << (n * n) {
                    let bits = BitString::from_index(s, n * n);
                    let (qv, hv) = (q.evaluate(&bits)?, h.energy(&bits)?);
                    if !rel_close(qv, hv) {
                        return Ok(Some(format!(
                            "{kind} n={n} seed={seed} {bits}: {qv} vs {hv}"
                        )));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn ground_state_is_optimum() -> Result<Option<String>> {
    for kind in KINDS {
        for n in 2..=4 {
            let inst = random_instance(kind, n, n as u64)?;
            let h = qubo_to_ising(&encode(&inst, default_penalty(&inst))?);
            let (bits, e) = ground_state_bruteforce(&h)?;
            let opt = brute_force_optimum(&inst)?.1;
            let d = decode(&bits, n, &inst)?;
            if !d.feasible || !rel_close(e, opt) || d.cost.is_none_or(|c| !rel_close(c, opt)) {
                return Ok(Some(format!(
                    "{kind} n={n}: ground {e} at {bits}, optimum {opt}"
                )));
            }
        }
    }
    Ok(None)
}

fn penalty_dominates() -> Result<Option<String>> {
    for kind in KINDS {
        for n in 2..=3 {
            for seed in 0..SEEDS {
                let inst = random_instance(kind, n, seed)?;
                let diag = qubo_to_ising(&encode(&inst, default_penalty(&inst))?).diagonal();
                let (mut feas, mut infeas) = (f64::NEG_INFINITY, f64::INFINITY);
                for (s, e) in diag.iter().enumerate() {
                    if decode(&BitString::from_index(s, n * n), n, &inst)?.feasible {
                        feas = feas.max(*e);
                    } else {
                        infeas = infeas.min(*e);
                    }
                }
                if infeas <= feas {
                    return Ok(Some(format!(
                        "{kind} n={n} seed={seed}: {infeas} <= {feas}"
                    )));
                }
            }
        }
    }
    Ok(None)
}

fn bnb_is_exact() -> Result<Option<String>> {
    for kind in KINDS {
        for n in 2..=4 {
            for seed in 0..SEEDS {
                let inst = random_instance(kind, n, seed)?;
                let (b, o) = (bnb_solve(&inst)?.cost, brute_force_optimum(&inst)?.1);
                if b != o {
                    return Ok(Some(format!("{kind} n={n} seed={seed}: {b} vs {o}")));
                }
            }
        }
    }
    Ok(None)
}

fn decode_round_trips() -> Result<Option<String>> {
    for kind in KINDS {
        let inst = random_instance(kind, 4, 0)?;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..24 {
            let pi = copq_core::Permutation::random(4, &mut rng);
            let d = decode(&permutation_bits(&pi, &inst), 4, &inst)?;
            if d.pi.as_ref() != Some(&pi) || d.cost != Some(inst.cost(&pi)?) {
                return Ok(Some(format!("{kind}: {pi} did not round-trip")));
            }
        }
    }
    Ok(None)
}

/// A seeded circuit using every gate kind.
pub fn random_circuit(rng: &mut impl Rng, width: usize, gates: usize) -> Circuit {
    let mut c = Circuit::new(width, 0);
    for _ in 0..gates {
        let q = rng.gen_range(0..width);
        let mut r = rng.gen_range(0..width.max(2) - 1);
        if r >= q {
            r += 1;
        }
        let a = Angle::fixed(rng.gen_range(-2.0 * PI..2.0 * PI));
        let kinds = if width > 1 { 9 } else { 7 };
        let g = match rng.gen_range(0..kinds) {
            0 => Gate::X(q),
            1 => Gate::SX(q),
            2 => Gate::H(q),
            3 => Gate::Id(q),
            4 => Gate::RX(q, a),
            5 => Gate::RY(q, a),
            6 => Gate::RZ(q, a),
            7 => Gate::CX(q, r),
            _ => Gate::RZZ(q, r, a),
        };
        c.push(g).expect("generated gate is valid");
    }
    c
}

fn transpiler_is_equivalent() -> Result<Option<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..25 {
        let width = 1 + i % 4;
        let c = random_circuit(&mut rng, width, 20);
        let t = transpile_to_basis(&c)?;
        if !t.gates().iter().all(Gate::is_basis) {
            return Ok(Some(format!("circuit {i}: non-basis gate left")));
        }
        if !run(&c, &[])?.equal_up_to_phase(&run(&t, &[])?, 1e-9) {
            return Ok(Some(format!("circuit {i}: statevectors differ")));
        }
    }
    Ok(None)
}

fn variational_bound_holds() -> Result<Option<String>> {
    let inst = random_instance(ProblemKind::Tsp, 2, 0)?;
    let h = qubo_to_ising(&encode(&inst, default_penalty(&inst))?);
    let ground = ground_state_bruteforce(&h)?.1;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for form in [
        AnsatzForm::TwoLocal,
        AnsatzForm::RealAmplitudes,
        AnsatzForm::Qaoa,
    ] {
        let c = build_ansatz(&AnsatzSpec::new(form, 2, 4)?, Some(&h))?;
        for _ in 0..50 {
            let theta: Vec<f64> = (0..c.num_params())
                .map(|_| rng.gen_range(-PI..PI))
                .collect();
            let e = exact_expectation(&run(&c, &theta)?, &h)?;
            if e < ground - 1e-9 {
                return Ok(Some(format!("{form}: {e} below ground {ground}")));
            }
        }
    }
    Ok(None)
}

pub fn verify_suite() -> Vec<CheckResult> {
    vec![
        check("ising energy equals qubo value", encoding_matches_qubo),
        check(
            "ground state equals brute-force optimum",
            ground_state_is_optimum,
        ),
        check("penalty separates feasible states", penalty_dominates),
        check("branch and bound equals brute force", bnb_is_exact),
        check("decode inverts encoding", decode_round_trips),
        check(
            "transpiled circuits are equivalent",
            transpiler_is_equivalent,
        ),
        check(
            "expectation never below ground energy",
            variational_bound_holds,
        ),
    ]
}
