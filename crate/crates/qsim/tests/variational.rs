mod common;

use std::f64::consts::PI;

use common::{circuit_unitary, first_column, gate_unitary, matmul};
use copq_core::ising::{
    decode, default_penalty, encode, ground_state_bruteforce, qubo_to_ising, IsingHamiltonian,
    ZTerm,
};
use copq_core::{
    brute_force_optimum, random_instance, Matrix, ProblemInstance, ProblemKind, TspInstance,
};
use copq_qsim::variational::{
    build_ansatz, qaoa_run, run_with_history, spsa_minimize, vqe_run, warm_start, AnsatzForm,
    AnsatzSpec, Objective, RunConfig, SpsaConfig,
};
use copq_qsim::{exact_expectation, run, sample, Angle, Circuit, Gate};
use num_complex::Complex64;

fn hamiltonian(inst: &ProblemInstance) -> IsingHamiltonian {
    qubo_to_ising(&encode(inst, default_penalty(inst)).unwrap())
}

fn uniform_tsp(n: usize) -> ProblemInstance {
    TspInstance::new(Matrix::from_fn(n, |i, j| if i == j { 0.0 } else { 1.0 }))
        .unwrap()
        .into()
}

fn exact_cfg(maxiter: usize) -> RunConfig {
    RunConfig {
        spsa: SpsaConfig::with_maxiter(maxiter),
        objective: Objective::Exact,
        ..Default::default()
    }
}

fn two_local(width: usize) -> AnsatzSpec {
    AnsatzSpec::new(AnsatzForm::TwoLocal, 1, width).unwrap()
}

#[test]
fn parameter_counts() {
    for w in 1..10 {
        for reps in 1..4 {
            for form in [AnsatzForm::TwoLocal, AnsatzForm::RealAmplitudes] {
                let spec = AnsatzSpec::new(form, reps, w).unwrap();
                assert_eq!(
                    build_ansatz(&spec, None).unwrap().num_params(),
                    w * (reps + 1)
                );
            }
        }
    }
    let h = hamiltonian(&uniform_tsp(3));
    let spec = AnsatzSpec::new(AnsatzForm::Qaoa, 3, 9).unwrap();
    assert_eq!(build_ansatz(&spec, Some(&h)).unwrap().num_params(), 6);
}

#[test]
fn qaoa_layer_matches_matrix_exponential() {
    let (gamma, beta, j) = (0.37, -0.81, 1.3);
    let h = IsingHamiltonian::new(
        2,
        0.0,
        [ZTerm {
            coeff: j,
            qubits: vec![0, 1],
        }],
    )
    .unwrap();
    let spec = AnsatzSpec::new(AnsatzForm::Qaoa, 1, 2).unwrap();
    let state = run(&build_ansatz(&spec, Some(&h)).unwrap(), &[gamma, beta]).unwrap();

    // e^{-i gamma J Z0 Z1} is diagonal; e^{-i beta X} = cos(beta) I - i sin(beta) X
    let mut cost = vec![vec![Complex64::new(0.0, 0.0); 4]; 4];
    for (s, row) in cost.iter_mut().enumerate() {
        let zz = if (s & 1) == ((s >> 1) & 1) { 1.0 } else { -1.0 };
        row[s] = Complex64::from_polar(1.0, -gamma * j * zz);
    }
    let mixer1 = |q: usize| {
        let mut c = Circuit::new(2, 0);
        c.push(Gate::RX(q, Angle::fixed(2.0 * beta))).unwrap();
        circuit_unitary(&c)
    };
    let mut h2 = Circuit::new(2, 0);
    h2.extend([Gate::H(0), Gate::H(1)]).unwrap();
    let u = matmul(
        &mixer1(1),
        &matmul(&mixer1(0), &matmul(&cost, &circuit_unitary(&h2))),
    );
    let oracle = first_column(&u);
    let diff = state
        .amplitudes()
        .iter()
        .zip(&oracle)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(diff < 1e-10, "{diff}");

    // mixer factor itself against cos(beta) I - i sin(beta) X
    let rx = gate_unitary(&Gate::RX(0, Angle::fixed(2.0 * beta)), 1);
    assert!((rx[0][0] - Complex64::new(beta.cos(), 0.0)).norm() < 1e-12);
    assert!((rx[0][1] - Complex64::new(0.0, -beta.sin())).norm() < 1e-12);
}

#[test]
fn single_qubit_qaoa_reaches_grid_optimum() {
    let h = IsingHamiltonian::new(
        1,
        0.0,
        [ZTerm {
            coeff: 1.0,
            qubits: vec![0],
        }],
    )
    .unwrap();
    let spec = AnsatzSpec::new(AnsatzForm::Qaoa, 1, 1).unwrap();
    let circ = build_ansatz(&spec, Some(&h)).unwrap();
    // closed form for |+> -> RZ(2g) -> RX(2b): <Z> = -sin(2b) sin(2g)
    let steps = 200;
    let grid_min = (0..steps)
        .flat_map(|a| (0..steps).map(move |b| (a, b)))
        .map(|(a, b)| {
            let g = PI * a as f64 / steps as f64;
            let bb = PI * b as f64 / steps as f64;
            -(2.0 * bb).sin() * (2.0 * g).sin()
        })
        .fold(f64::INFINITY, f64::min);
    assert!(grid_min <= -0.99);
    let theta = warm_start(&h, &spec, &SpsaConfig::with_maxiter(300), 3).unwrap();
    let e = exact_expectation(&run(&circ, &theta).unwrap(), &h).unwrap();
    assert!(e <= -0.99, "{e}");
    assert!(e >= grid_min - 1e-3);
}

#[test]
fn vqe_uniform_three_cities_is_optimal() {
    let inst = uniform_tsp(3);
    let h = hamiltonian(&inst);
    let r = vqe_run(&h, &two_local(9), &exact_cfg(100), 0, &inst).unwrap();
    assert!(r.feasible);
    assert_eq!(r.cost, Some(3.0));
}

#[test]
fn zero_iterations_rejected() {
    let inst = uniform_tsp(3);
    let h = hamiltonian(&inst);
    assert!(matches!(
        vqe_run(&h, &two_local(9), &exact_cfg(0), 0, &inst),
        Err(copq_qsim::Error::InvalidArgument(_))
    ));
    assert!(vqe_run(&h, &two_local(8), &exact_cfg(5), 0, &inst).is_err());
    let qaoa = AnsatzSpec::new(AnsatzForm::Qaoa, 1, 9).unwrap();
    assert!(vqe_run(&h, &qaoa, &exact_cfg(5), 0, &inst).is_err());
}

#[test]
fn two_city_cost_is_fixed() {
    let inst = random_instance(ProblemKind::Tsp, 2, 6).unwrap();
    let ProblemInstance::Tsp(t) = &inst else {
        unreachable!()
    };
    let d01 = t.distances().get(0, 1);
    let h = hamiltonian(&inst);
    for seed in 0..10 {
        let r = vqe_run(&h, &two_local(4), &RunConfig::default(), seed, &inst).unwrap();
        if r.feasible {
            assert_eq!(r.cost, Some(2.0 * d01));
        }
    }
}

#[test]
fn qaoa_three_cities_mostly_feasible() {
    let inst = random_instance(ProblemKind::Tsp, 3, 1).unwrap();
    let h = hamiltonian(&inst);
    let feasible = (0..30)
        .filter(|&s| qaoa_run(&h, 3, &exact_cfg(50), s, &inst).unwrap().feasible)
        .count();
    assert!(feasible >= 24, "{feasible}/30");
}

#[test]
fn runs_are_deterministic() {
    let inst = random_instance(ProblemKind::Qap, 2, 2).unwrap();
    let h = hamiltonian(&inst);
    let cfg = RunConfig {
        spsa: SpsaConfig::with_maxiter(20),
        ..Default::default()
    };
    let strip = |mut r: copq_qsim::variational::TrialRecord| {
        r.elapsed_s = 0.0;
        r
    };
    let a = strip(qaoa_run(&h, 2, &cfg, 4, &inst).unwrap());
    let b = strip(qaoa_run(&h, 2, &cfg, 4, &inst).unwrap());
    assert_eq!(a, b);
    let c = strip(vqe_run(&h, &two_local(4), &cfg, 4, &inst).unwrap());
    let d = strip(vqe_run(&h, &two_local(4), &cfg, 4, &inst).unwrap());
    assert_eq!(c, d);
}

#[test]
fn warm_start_shape_and_determinism() {
    let inst = random_instance(ProblemKind::Tsp, 3, 2).unwrap();
    let h = hamiltonian(&inst);
    let spsa = SpsaConfig::with_maxiter(15);
    for spec in [
        two_local(9),
        AnsatzSpec::new(AnsatzForm::RealAmplitudes, 2, 9).unwrap(),
        AnsatzSpec::new(AnsatzForm::Qaoa, 3, 9).unwrap(),
    ] {
        let a = warm_start(&h, &spec, &spsa, 8).unwrap();
        assert_eq!(a.len(), spec.num_params());
        assert_eq!(a, warm_start(&h, &spec, &spsa, 8).unwrap());
    }
}

/// First SPSA iterate whose 1024-shot sample contains a feasible string.
fn iterations_to_feasible(
    inst: &ProblemInstance,
    circ: &Circuit,
    history: &[copq_qsim::variational::SpsaStep],
) -> usize {
    history
        .iter()
        .find(|step| {
            let d = sample(&run(circ, &step.theta).unwrap(), 1024, 0).unwrap();
            d.counts
                .keys()
                .any(|b| decode(b, 3, inst).unwrap().feasible)
        })
        .map(|s| s.iteration)
        .unwrap_or(usize::MAX)
}

#[test]
fn warm_start_needs_no_more_iterations_than_cold() {
    let inst = random_instance(ProblemKind::Tsp, 3, 1).unwrap();
    let h = hamiltonian(&inst);
    let spec = two_local(9);
    let circ = build_ansatz(&spec, None).unwrap();
    let spsa = SpsaConfig::with_maxiter(100);
    let (mut warm, mut cold) = (Vec::new(), Vec::new());
    for seed in 0..10 {
        let mut cfg = RunConfig {
            spsa,
            ..Default::default()
        };
        let (_, hist) = run_with_history(&h, &spec, &cfg, seed, &inst).unwrap();
        cold.push(iterations_to_feasible(&inst, &circ, &hist.history));
        cfg.initial_point = Some(warm_start(&h, &spec, &spsa, seed).unwrap());
        let (_, hist) = run_with_history(&h, &spec, &cfg, seed, &inst).unwrap();
        warm.push(iterations_to_feasible(&inst, &circ, &hist.history));
    }
    warm.sort_unstable();
    cold.sort_unstable();
    assert!(warm[5] <= cold[5], "warm {warm:?} cold {cold:?}");
}

#[test]
fn exact_histories_respect_ground_energy() {
    for kind in [ProblemKind::Tsp, ProblemKind::Qap] {
        let inst = random_instance(kind, 3, 5).unwrap();
        let h = hamiltonian(&inst);
        let ground = ground_state_bruteforce(&h).unwrap().1;
        for spec in [
            two_local(9),
            AnsatzSpec::new(AnsatzForm::Qaoa, 2, 9).unwrap(),
        ] {
            let (_, res) = run_with_history(&h, &spec, &exact_cfg(40), 3, &inst).unwrap();
            assert!(res.history.iter().all(|s| s.value >= ground - 1e-9));
        }
    }
}

#[test]
fn records_are_consistent_with_oracles() {
    for kind in [ProblemKind::Tsp, ProblemKind::Qap] {
        let inst = random_instance(kind, 3, 9).unwrap();
        let h = hamiltonian(&inst);
        let opt = brute_force_optimum(&inst).unwrap().1;
        for seed in 0..6 {
            let r = vqe_run(&h, &two_local(9), &RunConfig::default(), seed, &inst).unwrap();
            let dist = r.distribution.as_ref().unwrap();
            assert_eq!(dist.counts.values().sum::<u64>(), dist.shots);
            assert_eq!(r.feasible, r.best_bits.is_some());
            if let Some(bits) = &r.best_bits {
                let d = decode(bits, 3, &inst).unwrap();
                assert!(d.feasible);
                let cost = inst.cost(r.pi.as_ref().unwrap()).unwrap();
                assert_eq!(d.cost, Some(cost));
                assert_eq!(r.cost, Some(cost));
                assert!(cost >= opt);
                assert_eq!(r.probability, dist.count(bits) as f64 / dist.shots as f64);
            } else {
                assert_eq!(r.probability, 0.0);
            }
        }
    }
}

#[test]
fn record_json_has_trial_fields() {
    let inst = uniform_tsp(2);
    let h = hamiltonian(&inst);
    let r = vqe_run(&h, &two_local(4), &exact_cfg(5), 1, &inst).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    for key in [
        "seed",
        "method",
        "params",
        "best_bits",
        "cost",
        "probability",
        "elapsed_s",
        "feasible",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["method"], "vqe");
    let back: copq_qsim::variational::TrialRecord = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}

#[test]
fn spsa_on_sphere_with_default_gains() {
    let r = spsa_minimize(
        |x| Ok(x.iter().map(|v| v * v).sum()),
        &[1.0, 1.0],
        &SpsaConfig::with_maxiter(200),
        1,
    )
    .unwrap();
    assert!(r.value < 0.01);
    assert_eq!(r.evaluations, 601);
}
