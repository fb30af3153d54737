//! Acceptance suite: one test per criterion with the tolerances stated in
//! the project contract. Each test prints a `PASS` line; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ionbell::analysis::{Subsystem, fidelity, negativity, partial_trace, von_neumann_entropy};
use ionbell::hilbert::{BipartiteState, FockCutoffs, PureState, Qubit, inner_product};
use ionbell::operators::{
    SystemParams, blue_rwa_hamiltonian, excited_projector, field_number, full_hamiltonian,
    lamb_dicke_hamiltonian, red_rwa_hamiltonian, vib_number,
};
use ionbell::propagation::{
    HermitianEigen, LEAKAGE_THRESHOLD, analytic_blue_propagate, analytic_red_propagate,
    to_interaction_picture,
};
use ionbell::protocol::{
    BellTarget, ProtocolConfig, Sideband, bell_target, evolve_protocol, measure_qubit,
    run_bell_protocol,
};

const CUTOFFS: (usize, usize) = (8, 8);

fn cutoffs() -> FockCutoffs {
    FockCutoffs::new(CUTOFFS.0, CUTOFFS.1).unwrap()
}

fn params(sideband: Sideband) -> SystemParams {
    match sideband {
        Sideband::Red => SystemParams::red_resonant(500.0, 1e4, 100.0, 0.01),
        Sideband::Blue => SystemParams::blue_resonant(500.0, 1e4, 100.0, 0.01),
    }
    .unwrap()
}

fn protocol(sideband: Sideband, n: usize, m: usize, theta: f64, phi: f64) -> ProtocolConfig {
    ProtocolConfig::new(sideband, n, m, theta, phi, 0, params(sideband), cutoffs()).unwrap()
}

fn random_state(
    rng: &mut ChaCha8Rng,
    cut: FockCutoffs,
    keep: impl Fn(usize, usize, Qubit) -> bool,
) -> PureState {
    let amps: Vec<C64> = cut
        .basis_labels()
        .map(|(n_f, m_v, q)| {
            if keep(n_f, m_v, q) {
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    PureState::from_amplitudes(cut, amps).unwrap()
}

/// Support mask keeping the lower-sideband propagator inside the cutoffs.
fn red_safe(cut: FockCutoffs) -> impl Fn(usize, usize, Qubit) -> bool {
    move |n_f, m_v, q| q == Qubit::G || (n_f + 1 < cut.field_dim() && m_v + 1 < cut.vib_dim())
}

/// Support mask keeping the upper-sideband propagator inside the cutoffs.
fn blue_safe(cut: FockCutoffs) -> impl Fn(usize, usize, Qubit) -> bool {
    move |n_f, m_v, q| match q {
        Qubit::E => m_v == 0 || n_f + 1 < cut.field_dim(),
        Qubit::G => n_f == 0 || m_v + 1 < cut.vib_dim(),
    }
}

fn max_amp_diff(a: &PureState, b: &PureState) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_1_resonant_bell_run() {
    let start = Instant::now();
    let config = protocol(Sideband::Red, 0, 0, FRAC_PI_4, -FRAC_PI_2);
    assert!((config.interaction_time() - PI / (2.0 * config.params().eta_g())).abs() < 1e-14);
    let report = run_bell_protocol(&config).unwrap();
    assert!(
        (report.record.probability - 1.0).abs() <= 1e-10,
        "ground-state probability {}",
        report.record.probability
    );
    assert_eq!(report.best_target, BellTarget::PhiPlus);
    assert!(
        report.best_fidelity >= 1.0 - 1e-10,
        "fidelity {}",
        report.best_fidelity
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1 (resonant Bell run, P(g) and fidelity at 1e-10): PASS");
}

#[test]
fn criterion_2_all_four_targets_reachable() {
    let cases = [
        (Sideband::Red, 0, 0, -FRAC_PI_2, BellTarget::PhiPlus),
        (Sideband::Red, 0, 0, FRAC_PI_2, BellTarget::PhiMinus),
        (Sideband::Blue, 0, 1, -FRAC_PI_2, BellTarget::PsiPlus),
        (Sideband::Blue, 0, 1, FRAC_PI_2, BellTarget::PsiMinus),
    ];
    for (sideband, n, m, phi, expected) in cases {
        let report = run_bell_protocol(&protocol(sideband, n, m, FRAC_PI_4, phi)).unwrap();
        assert_eq!(report.best_target, expected, "{sideband} phi={phi}");
        assert!(
            report.best_fidelity >= 1.0 - 1e-10,
            "{sideband} phi={phi}: fidelity {}",
            report.best_fidelity
        );
    }
    println!("criterion 2 (all four Bell targets reachable at 1e-10): PASS");
}

#[test]
fn criterion_3_closed_form_amplitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let cut = cutoffs();
    for trial in 0..50 {
        let sideband = if trial % 2 == 0 {
            Sideband::Red
        } else {
            Sideband::Blue
        };
        let n = rng.random_range(0..=4usize);
        let m = rng.random_range(0..=4usize);
        let theta = rng.random_range(0.0..FRAC_PI_2);
        let phi = PI - rng.random_range(0.0..2.0 * PI);
        let config =
            ProtocolConfig::new(sideband, n, m, theta, phi, 0, params(sideband), cut).unwrap();
        let w = config.params().eta_g();
        let t = rng.random_range(0.0..4.0 * PI / w);
        let evolved = config.evolve_for(t).unwrap();

        // each electronic branch rotates inside its own two-level pair
        let mut expected = vec![C64::new(0.0, 0.0); cut.total_dim()];
        let e_amp = C64::new(theta.cos(), 0.0);
        let g_amp = C64::from_polar(theta.sin(), phi);
        let (e_rabi, e_partner) = match sideband {
            Sideband::Red => (
                w * (((n + 1) * (m + 1)) as f64).sqrt(),
                Some((n + 1, m + 1)),
            ),
            Sideband::Blue => (
                w * (((n + 1) * m) as f64).sqrt(),
                (m >= 1).then(|| (n + 1, m - 1)),
            ),
        };
        let (g_rabi, g_partner) = match sideband {
            Sideband::Red => (
                w * ((n * m) as f64).sqrt(),
                (n >= 1 && m >= 1).then(|| (n - 1, m - 1)),
            ),
            Sideband::Blue => (
                w * ((n * (m + 1)) as f64).sqrt(),
                (n >= 1).then(|| (n - 1, m + 1)),
            ),
        };
        expected[cut.index(n, m, Qubit::E)] = e_amp * (e_rabi * t).cos();
        if let Some((pn, pm)) = e_partner {
            expected[cut.index(pn, pm, Qubit::G)] = e_amp * C64::new(0.0, -(e_rabi * t).sin());
        }
        expected[cut.index(n, m, Qubit::G)] = g_amp * (g_rabi * t).cos();
        if let Some((pn, pm)) = g_partner {
            expected[cut.index(pn, pm, Qubit::E)] = g_amp * C64::new(0.0, -(g_rabi * t).sin());
        }
        for (i, (got, want)) in evolved.amplitudes().iter().zip(&expected).enumerate() {
            assert!(
                (got - want).norm() <= 1e-12,
                "trial {trial} ({sideband}, n={n}, m={m}): index {i} \
                 differs, got {got}, want {want}"
            );
        }
    }
    println!("criterion 3 (closed-form amplitudes on 50 random runs at 1e-12): PASS");
}

#[test]
fn criterion_4_analytic_matches_numeric() {
    let cut = cutoffs();
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    for sideband in [Sideband::Red, Sideband::Blue] {
        let p = params(sideband);
        let h = match sideband {
            Sideband::Red => red_rwa_hamiltonian(&p, cut),
            Sideband::Blue => blue_rwa_hamiltonian(&p, cut),
        };
        let eigen = HermitianEigen::new(&h).unwrap();
        for trial in 0..50 {
            let state = match sideband {
                Sideband::Red => random_state(&mut rng, cut, red_safe(cut)),
                Sideband::Blue => random_state(&mut rng, cut, blue_safe(cut)),
            };
            let t = rng.random_range(0.0..10.0 / p.eta_g());
            let analytic = match sideband {
                Sideband::Red => analytic_red_propagate(&p, &state, t).unwrap(),
                Sideband::Blue => analytic_blue_propagate(&p, &state, t).unwrap(),
            };
            let numeric = eigen.propagate(&state, t).unwrap().state;
            let diff = max_amp_diff(&analytic, &numeric);
            assert!(
                diff <= 1e-10,
                "{sideband} trial {trial}: amplitudes differ by {diff:.3e}"
            );
        }
    }
    println!("criterion 4 (analytic vs numeric on 100 random states at 1e-10): PASS");
}

#[test]
fn criterion_5_conserved_quantities() {
    let cut = cutoffs();
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let n_vib = vib_number(cut);
    let n_field = field_number(cut);
    let p_e = excited_projector(cut);

    for sideband in [Sideband::Red, Sideband::Blue] {
        let p = params(sideband);
        // each sideband fixes its own pair of conserved observables
        let conserved = match sideband {
            Sideband::Red => [n_vib.clone() - n_field.clone(), n_vib.clone() + p_e.clone()],
            Sideband::Blue => [
                n_vib.clone() + n_field.clone(),
                n_field.clone() + p_e.clone(),
            ],
        };
        for trial in 0..10 {
            let state = match sideband {
                Sideband::Red => random_state(&mut rng, cut, red_safe(cut)),
                Sideband::Blue => random_state(&mut rng, cut, blue_safe(cut)),
            };
            let t = rng.random_range(0.0..8.0 / p.eta_g());
            let evolved = match sideband {
                Sideband::Red => analytic_red_propagate(&p, &state, t).unwrap(),
                Sideband::Blue => analytic_blue_propagate(&p, &state, t).unwrap(),
            };
            for (which, op) in conserved.iter().enumerate() {
                let before = op.expectation(&state).unwrap().re;
                let after = op.expectation(&evolved).unwrap().re;
                assert!(
                    (before - after).abs() <= 1e-10,
                    "{sideband} trial {trial}, observable {which}: \
                     {before} drifted to {after}"
                );
            }
        }
    }
    println!("criterion 5 (sideband constants of motion on 20 random runs at 1e-10): PASS");
}

#[test]
fn criterion_6_sideband_picture_improves_with_trap_frequency() {
    let start = Instant::now();
    let cut = cutoffs();
    let (eta, g, omega0) = (0.01, 100.0, 1e4);
    let mut fidelities = Vec::new();
    for ratio in [50.0, 200.0, 500.0] {
        let nu = ratio * eta * g;
        let p = SystemParams::red_resonant(nu, omega0, g, eta).unwrap();
        let config =
            ProtocolConfig::new(Sideband::Red, 0, 0, FRAC_PI_4, -FRAC_PI_2, 0, p, cut).unwrap();
        let eigen = HermitianEigen::new(&full_hamiltonian(&p, cut)).unwrap();
        let t0 = config.interaction_time();
        let initial = config.prepare_initial();

        let samples = 8;
        let mut leakage = 0.0f64;
        let mut lab_frame = None;
        for i in 1..=samples {
            let t = t0 * i as f64 / samples as f64;
            let step = eigen.propagate(&initial, t).unwrap();
            leakage = leakage.max(step.leakage.max());
            if i == samples {
                lab_frame = Some(step.state);
            }
        }
        assert!(
            leakage < LEAKAGE_THRESHOLD,
            "ratio {ratio}: leakage {leakage:.3e}"
        );

        let rotating = to_interaction_picture(&p, &lab_frame.unwrap(), t0).unwrap();
        let analytic = evolve_protocol(&config).unwrap();
        let f = inner_product(&analytic, &rotating).unwrap().norm_sqr();
        fidelities.push((ratio, f));
    }
    for pair in fidelities.windows(2) {
        assert!(
            pair[1].1 >= pair[0].1,
            "fidelity must not decrease: {pair:?}"
        );
    }
    let last = fidelities.last().unwrap();
    assert!(last.1 >= 0.99, "fidelity {} at ratio {}", last.1, last.0);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "criterion 6 (full-model fidelity {:.6} at nu/(eta g) = 500, \
         non-decreasing, leakage trusted): PASS",
        last.1
    );
}

#[test]
fn criterion_7_displaced_pairs_from_higher_phonon_numbers() {
    let phi = 0.4;
    for m in [1usize, 2, 3] {
        let config = protocol(Sideband::Red, 0, m, FRAC_PI_4, phi);
        let w = config.params().eta_g();
        let expected_t = PI / (2.0 * w * ((m + 1) as f64).sqrt());
        assert!((config.interaction_time() - expected_t).abs() < 1e-14);

        let record = measure_qubit(&evolve_protocol(&config).unwrap(), Qubit::G).unwrap();
        let cut = config.cutoffs();
        let mut amps = vec![C64::new(0.0, 0.0); cut.pair_dim()];
        let r = 0.5f64.sqrt();
        amps[cut.pair_index(0, m)] = C64::from_polar(r, phi);
        amps[cut.pair_index(1, m + 1)] = C64::new(0.0, -r);
        let target = BipartiteState::from_amplitudes(cut, amps).unwrap();
        let f = fidelity(&target, &record.post_state).unwrap();
        assert!(f >= 1.0 - 1e-10, "m = {m}: fidelity {f}");
    }
    println!("criterion 7 (displaced pairs for m = 1, 2, 3 at 1e-10): PASS");
}

#[test]
fn criterion_8_entanglement_diagnostics() {
    let report = run_bell_protocol(&protocol(Sideband::Red, 0, 0, FRAC_PI_4, -FRAC_PI_2)).unwrap();
    let pair = &report.record.post_state;
    let entropy = von_neumann_entropy(&partial_trace(pair, Subsystem::Field));
    assert!((entropy - LN_2).abs() <= 1e-9, "entropy {entropy}");
    let neg = negativity(pair);
    assert!((neg - 0.5).abs() <= 1e-9, "negativity {neg}");

    // consistency with the target itself
    let reference = bell_target(cutoffs(), report.best_target).unwrap();
    assert!((fidelity(&reference, pair).unwrap() - report.best_fidelity).abs() < 1e-12);

    let mut entropies = Vec::new();
    for i in 0..9 {
        let theta = FRAC_PI_2 * i as f64 / 8.0;
        let run = run_bell_protocol(&protocol(Sideband::Red, 0, 0, theta, -FRAC_PI_2)).unwrap();
        entropies.push(von_neumann_entropy(&partial_trace(
            &run.record.post_state,
            Subsystem::Field,
        )));
    }
    assert!(entropies[0].abs() <= 1e-9, "product state at theta = 0");
    assert!(entropies[8].abs() <= 1e-9, "product state at theta = pi/2");
    let argmax = entropies
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    assert_eq!(
        argmax, 4,
        "entropy must peak at theta = pi/4: {entropies:?}"
    );
    println!("criterion 8 (Bell entropy ln 2 and negativity 1/2 at 1e-9, peak at pi/4): PASS");
}

#[test]
fn criterion_9_coupling_linearization_order() {
    let cut = cutoffs();
    let samples: Vec<(f64, f64)> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&eta| {
            let p = SystemParams::red_resonant(500.0, 1e4, 10.0, eta).unwrap();
            let error =
                (full_hamiltonian(&p, cut) - lamb_dicke_hamiltonian(&p, cut)).max_abs() / p.eta_g();
            (eta.ln(), error.ln())
        })
        .collect();

    let n = samples.len() as f64;
    let mean_x = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let mean_y = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let slope = samples
        .iter()
        .map(|s| (s.0 - mean_x) * (s.1 - mean_y))
        .sum::<f64>()
        / samples.iter().map(|s| (s.0 - mean_x).powi(2)).sum::<f64>();
    assert!(
        (slope - 2.0).abs() <= 0.5,
        "relative linearization error must scale as eta^2, fitted order {slope:.3}"
    );
    println!("criterion 9 (linearization error order {slope:.3}, within 0.5 of 2): PASS");
}
