//! Acceptance suite. Each test prints one `PASS`/`FAIL` line with the
//! measured values (written straight to stderr so it survives output
//! capture) and then asserts the same condition.

use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use copq_bench::metrics::{format_percent, uncertainty_stats};
use copq_bench::verify::random_circuit;
use copq_bench::{run_experiment, ExperimentConfig};
use copq_core::classical::{bnb_solve, SaConfig};
use copq_core::ising::{
    decode, default_penalty, encode, ground_state_bruteforce, qubo_to_ising, BitString,
    IsingHamiltonian,
};
use copq_core::{brute_force_optimum, random_instance, ProblemInstance, ProblemKind};
use copq_qsim::variational::{
    build_ansatz, AnsatzForm, AnsatzSpec, Method, Objective, SpsaConfig, TrialRecord,
};
use copq_qsim::{exact_expectation, run, transpile_to_basis, Gate, ShotDistribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ENERGY_REL_TOL: f64 = 1e-9;
const VARIATIONAL_TOL: f64 = 1e-9;
const TRANSPILE_TOL: f64 = 1e-9;
/// 29 of 30 trials.
const SA_SR99_MIN: f64 = 96.7;
const QAOA_FEAS_MIN: f64 = 80.0;
/// Instance and trial seeds for the experiment criteria: the instance uses
/// this seed and trial k uses SEED_BASE + k.
const SEED_BASE: u64 = 1;
const TRIALS: usize = 30;

fn report(id: u32, pass: bool, what: &str, detail: String, elapsed: Duration) {
    let line = format!(
        "acceptance {id:>2} {}: {what} [{detail}; {:.2}s]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    writeln!(std::io::stderr().lock(), "\n{line}").unwrap();
    assert!(pass, "{line}");
}

fn hamiltonian(inst: &ProblemInstance) -> IsingHamiltonian {
    qubo_to_ising(&encode(inst, default_penalty(inst)).unwrap())
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= ENERGY_REL_TOL * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn criterion_01_encoding_correctness() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for kind in [ProblemKind::Tsp, ProblemKind::Qap] {
        for seed in 0..5 {
            let inst = random_instance(kind, 3, seed).unwrap();
            let q = encode(&inst, default_penalty(&inst)).unwrap();
            let h = qubo_to_ising(&q);
            for s in 0..512 {
                let bits = BitString::from_index(s, 9);
                if !rel_close(h.energy(&bits).unwrap(), q.evaluate(&bits).unwrap()) {
                    failures.push(format!("{kind}/{seed}/{bits}"));
                }
            }
            let (bits, e) = ground_state_bruteforce(&h).unwrap();
            let opt = brute_force_optimum(&inst).unwrap().1;
            let d = decode(&bits, 3, &inst).unwrap();
            if !d.feasible || !rel_close(d.cost.unwrap(), opt) || !rel_close(e, opt) {
                failures.push(format!("{kind}/{seed} ground {bits}"));
            }
        }
    }
    let el = t.elapsed();
    report(
        1,
        failures.is_empty() && el < Duration::from_secs(1),
        "Ising energy equals QUBO value on all 512 states; ground state is the optimum",
        format!("{} mismatches", failures.len()),
        el,
    );
}

#[test]
fn criterion_02_penalty_dominance() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for kind in [ProblemKind::Tsp, ProblemKind::Qap] {
        for seed in 0..20 {
            let inst = random_instance(kind, 3, seed).unwrap();
            let diag = hamiltonian(&inst).diagonal();
            let (mut feas, mut infeas) = (f64::NEG_INFINITY, f64::INFINITY);
            for (s, e) in diag.iter().enumerate() {
                if decode(&BitString::from_index(s, 9), 3, &inst)
                    .unwrap()
                    .feasible
                {
                    feas = feas.max(*e);
                } else {
                    infeas = infeas.min(*e);
                }
            }
            if infeas <= feas {
                bad.push(format!("{kind}/{seed}"));
            }
        }
    }
    let el = t.elapsed();
    report(
        2,
        bad.is_empty() && el < Duration::from_secs(5),
        "min infeasible energy exceeds max feasible energy (n=3, 20 seeds per problem)",
        format!("{} violations {:?}", bad.len(), bad),
        el,
    );
}

#[test]
fn criterion_03_bnb_exactness() {
    let t = Instant::now();
    let mut matched = 0;
    for kind in [ProblemKind::Tsp, ProblemKind::Qap] {
        for seed in 0..50u64 {
            let n = 3 + (seed as usize % 5);
            let inst = random_instance(kind, n, seed).unwrap();
            if bnb_solve(&inst).unwrap().cost == brute_force_optimum(&inst).unwrap().1 {
                matched += 1;
            }
        }
    }
    let el = t.elapsed();
    report(
        3,
        matched == 100 && el < Duration::from_secs(60),
        "branch and bound matches brute force on 50 TSP + 50 QAP instances, n in 3..=7",
        format!("{matched}/100 matched"),
        el,
    );
}

fn experiment(problem: ProblemKind, n: usize, method: Method) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(problem, n, method);
    c.seed_base = SEED_BASE;
    c.trials = TRIALS;
    c
}

#[test]
fn criterion_04_sa_success_rates() {
    let t = Instant::now();
    let mut rows = Vec::new();
    let mut ok = true;
    for (kind, sizes, sa) in [
        (
            ProblemKind::Tsp,
            3..=6,
            SaConfig::new(0.01, 10, 0.8, 10.0).unwrap(),
        ),
        (
            ProblemKind::Qap,
            3..=5,
            SaConfig::new(1.0, 20, 0.90, 20.0).unwrap(),
        ),
    ] {
        for n in sizes {
            let mut c = experiment(kind, n, Method::Sa);
            c.sa = Some(sa);
            let s = run_experiment(&c).unwrap().summary;
            ok &= s.sr99 >= SA_SR99_MIN;
            rows.push(format!("{kind}{n}={:.1}", s.sr99));
        }
    }
    let el = t.elapsed();
    report(
        4,
        ok && el < Duration::from_secs(120),
        "simulated annealing SR99 >= 96.7% for TSP n=3..6 and QAP n=3..5",
        rows.join(" "),
        el,
    );
}

#[test]
fn criterion_05_vqe_simulator_rows() {
    let t = Instant::now();
    let mut tsp = experiment(ProblemKind::Tsp, 3, Method::Vqe);
    tsp.form = AnsatzForm::TwoLocal;
    tsp.spsa = SpsaConfig::with_maxiter(100);
    tsp.shots = 1024;
    tsp.objective = Objective::Sampled;
    tsp.warm_start = true;
    let ts = run_experiment(&tsp).unwrap().summary;
    let mut qap = tsp.clone();
    qap.problem = ProblemKind::Qap;
    qap.spsa = SpsaConfig::with_maxiter(1000);
    let qs = run_experiment(&qap).unwrap().summary;
    let el = t.elapsed();
    report(
        5,
        ts.feasibility == 100.0
            && ts.sr99 == 100.0
            && qs.feasibility == 100.0
            && el < Duration::from_secs(600),
        "VQE TwoLocal, warm start + 1024 shots: TSP n=3 feasibility and SR99 100%, QAP n=3 feasibility 100%",
        format!(
            "tsp feas {:.1} sr99 {:.1}; qap feas {:.1} sr99 {:.1}",
            ts.feasibility, ts.sr99, qs.feasibility, qs.sr99
        ),
        el,
    );
}

#[test]
fn criterion_06_qaoa_simulator_row() {
    let t = Instant::now();
    let mut c = experiment(ProblemKind::Tsp, 3, Method::Qaoa);
    c.p = 3;
    c.spsa = SpsaConfig::with_maxiter(50);
    let s = run_experiment(&c).unwrap().summary;
    let el = t.elapsed();
    report(
        6,
        s.feasibility >= QAOA_FEAS_MIN && el < Duration::from_secs(900),
        "QAOA p=3, 50 SPSA iterations, TSP n=3: feasibility >= 80%",
        format!("feas {:.1} sr99 {:.1}", s.feasibility, s.sr99),
        el,
    );
}

#[test]
fn criterion_07_variational_principle() {
    let t = Instant::now();
    let inst = random_instance(ProblemKind::Tsp, 3, SEED_BASE).unwrap();
    let h = hamiltonian(&inst);
    let ground = ground_state_bruteforce(&h).unwrap().1;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut violations = 0;
    let mut lowest = f64::INFINITY;
    for (form, reps) in [
        (AnsatzForm::TwoLocal, 1),
        (AnsatzForm::RealAmplitudes, 1),
        (AnsatzForm::Qaoa, 3),
    ] {
        let c = build_ansatz(&AnsatzSpec::new(form, reps, 9).unwrap(), Some(&h)).unwrap();
        for _ in 0..200 {
            let theta: Vec<f64> = (0..c.num_params())
                .map(|_| rng.gen_range(-PI..PI))
                .collect();
            let e = exact_expectation(&run(&c, &theta).unwrap(), &h).unwrap();
            lowest = lowest.min(e);
            if e < ground - VARIATIONAL_TOL {
                violations += 1;
            }
        }
    }
    report(
        7,
        violations == 0,
        "exact expectation never below the ground energy (200 bindings per form)",
        format!("{violations} violations, ground {ground}, lowest sampled {lowest:.3}"),
        t.elapsed(),
    );
}

#[test]
fn criterion_08_transpiler_equivalence() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = 0;
    let mut kinds = std::collections::BTreeSet::new();
    for i in 0..100 {
        let width = 1 + i % 4;
        let gates = rng.gen_range(1..=20);
        let c = random_circuit(&mut rng, width, gates);
        kinds.extend(c.gates().iter().map(Gate::name));
        let tc = transpile_to_basis(&c).unwrap();
        let basis_only = tc.gates().iter().all(Gate::is_basis);
        let same = run(&c, &[])
            .unwrap()
            .equal_up_to_phase(&run(&tc, &[]).unwrap(), TRANSPILE_TOL);
        if !basis_only || !same {
            failures += 1;
        }
    }
    report(
        8,
        failures == 0 && kinds.len() == 9,
        "100 random circuits transpile to {CX, ID, RZ, SX, X} with equal statevectors",
        format!("{failures} failures, {} gate kinds exercised", kinds.len()),
        t.elapsed(),
    );
}

#[test]
fn criterion_09_qubit_scaling() {
    let t = Instant::now();
    let mut widths = Vec::new();
    let mut metrics = std::collections::BTreeMap::new();
    for n in 2..=7 {
        let inst = random_instance(ProblemKind::Tsp, n, SEED_BASE).unwrap();
        let h = hamiltonian(&inst);
        widths.push(h.num_qubits);
        for (form, reps) in [(AnsatzForm::TwoLocal, 1), (AnsatzForm::Qaoa, 3)] {
            let spec = AnsatzSpec::new(form, reps, h.num_qubits).unwrap();
            let m = build_ansatz(&spec, Some(&h)).unwrap().metrics();
            metrics.entry(form.short()).or_insert_with(Vec::new).push(m);
        }
    }
    let widths_ok = widths == (2..=7).map(|n| n * n).collect::<Vec<_>>();
    let monotone = metrics.values().all(|ms| {
        ms.windows(2)
            .all(|w| w[1].op_count > w[0].op_count && w[1].depth > w[0].depth)
    });
    let detail = metrics
        .iter()
        .map(|(k, ms)| {
            let v: Vec<String> = ms
                .iter()
                .map(|m| format!("{}/{}", m.op_count, m.depth))
                .collect();
            format!("{k} ops/depth {}", v.join(","))
        })
        .collect::<Vec<_>>()
        .join("; ");
    report(
        9,
        widths_ok && monotone,
        "Hamiltonian width is n^2 for n=2..7; op count and depth grow with n",
        format!("widths {widths:?}; {detail}"),
        t.elapsed(),
    );
}

fn synthetic(counts: &[(&str, u64)], inst: &ProblemInstance) -> TrialRecord {
    let map = counts
        .iter()
        .map(|(b, c)| (b.parse().unwrap(), *c))
        .collect();
    let dist = ShotDistribution::new(9, map).unwrap();
    let best = copq_qsim::variational::feasible_output(&dist, 3, inst).unwrap();
    TrialRecord::from_quantum(0, Method::Vqe, vec![], best, dist, 0.0)
}

#[test]
fn criterion_10_uncertainty_rendering() {
    let t = Instant::now();
    let inst = random_instance(ProblemKind::Tsp, 3, SEED_BASE).unwrap();
    let one = synthetic(&[("100010001", 1), ("110000000", 1023)], &inst);
    let none = synthetic(&[("110000000", 1000), ("000000000", 24)], &inst);
    let u1 = uncertainty_stats(&[one]);
    let u0 = uncertainty_stats(&[none]);
    let rendered1 = [u1.mean, u1.max, u1.min].map(format_percent);
    let rendered0 = [u0.mean, u0.max, u0.min, u0.std].map(format_percent);
    report(
        10,
        rendered1.iter().all(|s| s == "0.10") && rendered0.iter().all(|s| s == "-"),
        "1 feasible count in 1024 shots renders 0.10; no feasible trials render '-'",
        format!("{rendered1:?} / {rendered0:?}"),
        t.elapsed(),
    );
}

fn without_timing(json: &str) -> String {
    let mut v: serde_json::Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    serde_json::to_string_pretty(&v).unwrap()
}

#[test]
fn criterion_11_bench_determinism() {
    let t = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for (i, method) in ["sa", "qaoa", "sa", "qaoa"].iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_copq"))
            .args([
                "bench",
                "--problem",
                "tsp",
                "--n",
                "3",
                "--method",
                method,
                "--trials",
                "8",
                "--spsa-maxiter",
                "20",
                "--seed",
                "1",
                "--out",
            ])
            .arg(&path)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        texts.push(std::fs::read_to_string(&path).unwrap());
    }
    // the timing section is the last key, so the bytes before it must agree
    let prefix = |s: &str| s[..s.find("\"timing\"").unwrap()].to_string();
    let same = (0..2).all(|k| {
        prefix(&texts[k]) == prefix(&texts[k + 2])
            && without_timing(&texts[k]) == without_timing(&texts[k + 2])
    });
    report(
        11,
        same,
        "two identical bench invocations give byte-identical JSON outside the timing section",
        format!(
            "sa report {} bytes, qaoa report {} bytes",
            texts[0].len(),
            texts[1].len()
        ),
        t.elapsed(),
    );
}
