//! Integrator properties across the catalog.

use geomech::hamiltonian::{integrate, symplecticity_defect, Method, PhaseState};
use geomech::manifold::wrapped_difference;
use geomech::sweep::{energy_identity_sweep, random_states, Execution};
use geomech::systems::{build_system, harmonic_reference, MechanicalSystem, SystemConfig, CATALOG};

fn system(name: &str, params: &[(&str, f64)]) -> MechanicalSystem {
    build_system(&SystemConfig::new(name, params)).unwrap()
}

fn unit_params(name: &str) -> MechanicalSystem {
    let entry = CATALOG.iter().find(|e| e.name == name).unwrap();
    let params: Vec<(&str, f64)> = entry
        .parameters
        .iter()
        .map(|p| (*p, if *p == "g" { 9.81 } else { 1.0 }))
        .collect();
    system(name, &params)
}

#[test]
fn energy_identity_holds_across_the_catalog() {
    for entry in CATALOG {
        let sys = unit_params(entry.name);
        let states = random_states(&sys, 1000, 2.0, 3);
        let worst = energy_identity_sweep(Execution::default(), &sys, &states).unwrap();
        let bound = if sys.has_constant_mass() { 1e-12 } else { 1e-8 };
        assert!(worst <= bound, "{}: {worst:e}", entry.name);
    }
}

#[test]
fn symplectic_methods_preserve_the_two_form() {
    let harmonic = system("harmonic-particle", &[("m", 1.0), ("k", 1.0)]);
    let pendulum = unit_params("pendulum");
    for sys in [&harmonic, &pendulum] {
        for s in random_states(sys, 20, 2.0, 5) {
            for method in Method::ALL.into_iter().filter(|m| m.is_symplectic()) {
                for h in [0.01, 0.1] {
                    let d = symplecticity_defect(sys, &s, h, method).unwrap();
                    assert!(d <= 1e-6, "{} {method} h={h}: {d:e}", sys.name());
                }
            }
        }
    }
}

#[test]
fn rk4_breaks_the_two_form_on_the_pendulum() {
    // near the bottom the local frequency is √(g/l); towards θ = ±π/2 it
    // vanishes and the RK4 defect drops below the 1e-6 resolution
    let sys = unit_params("pendulum");
    for s in random_states(&sys, 40, 1.0, 7) {
        let theta = wrapped_difference(0.0, s.q().coords()[0]);
        if theta.abs() > 0.5 {
            continue;
        }
        let d = symplecticity_defect(&sys, &s, 0.1, Method::Rk4Reference).unwrap();
        assert!(d > 1e-6, "θ = {theta}: {d:e}");
    }
}

#[test]
fn rk4_defect_on_the_oscillator_matches_its_stability_polynomial() {
    // |R(ih)|² − 1 = −h⁶/72 + h⁸/576 for the unit-frequency oscillator
    let sys = system("harmonic-particle", &[("m", 1.0), ("k", 1.0)]);
    let h: f64 = 0.1;
    let expected = h.powi(6) / 72.0 - h.powi(8) / 576.0;
    for s in random_states(&sys, 5, 1.0, 8) {
        let d = symplecticity_defect(&sys, &s, h, Method::Rk4Reference).unwrap();
        // central differences with δ = 1e-6 carry ~ulp/δ roundoff
        assert!((d - expected).abs() <= 1e-9, "{d:e} vs {expected:e}");
    }
}

#[test]
fn convergence_orders_against_the_analytic_oscillator() {
    let sys = system("harmonic-particle", &[("m", 1.0), ("k", 1.0)]);
    let (q0, p0) = ([1.0, 0.0, -0.5], [0.2, 1.0, 0.0]);
    let s0 = PhaseState::from_coords(sys.manifold(), q0.to_vec(), p0.to_vec()).unwrap();
    let error = |method: Method, h: f64| {
        let n = (10.0 / h).round() as usize;
        let last = integrate(&sys, &s0, h, n, method).unwrap();
        let exact = harmonic_reference(1.0, 1.0, &q0, &p0, 10.0).unwrap();
        last.last()
            .q()
            .coords()
            .iter()
            .zip(exact.q().coords())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    for (method, order) in [
        (Method::SymplecticEuler, 1),
        (Method::Verlet, 2),
        (Method::ImplicitMidpoint, 2),
    ] {
        let ratio = error(method, 2e-3) / error(method, 1e-3);
        let expected = f64::from(1 << order);
        assert!((ratio / expected - 1.0).abs() <= 0.1, "{method}: ratio {ratio}");
    }
}

#[test]
fn light_lower_bob_leaves_the_upper_pendulum_alone() {
    let g = 9.81;
    let double = system(
        "double-pendulum",
        &[("m1", 1.0), ("m2", 1e-9), ("l1", 1.0), ("l2", 1.0), ("g", g)],
    );
    let single = system("pendulum", &[("m", 1.0), ("l", 1.0), ("g", g)]);
    let (h, n) = (1e-3, 5000);
    let d0 = PhaseState::from_coords(double.manifold(), vec![0.8, 0.3], vec![0.0, 0.0]).unwrap();
    let s0 = PhaseState::from_coords(single.manifold(), vec![0.8], vec![0.0]).unwrap();
    let a = integrate(&double, &d0, h, n, Method::ImplicitMidpoint).unwrap();
    let b = integrate(&single, &s0, h, n, Method::ImplicitMidpoint).unwrap();
    let worst = a
        .states
        .iter()
        .zip(&b.states)
        .map(|(x, y)| wrapped_difference(x.q().coords()[0], y.q().coords()[0]).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-4, "{worst:e}");
}

#[test]
fn harmonic_long_run_returns_home() {
    let sys = system("harmonic-particle", &[("m", 1.0), ("k", 1.0)]);
    let s0 = PhaseState::from_coords(sys.manifold(), vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]).unwrap();
    let traj = integrate(&sys, &s0, 0.01, 62_832, Method::Verlet).unwrap();
    let end = traj.last();
    let gap = end
        .q()
        .coords()
        .iter()
        .chain(end.p().components())
        .zip(s0.q().coords().iter().chain(s0.p().components()))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(gap <= 0.05, "{gap}");
}

#[test]
fn parallel_and_sequential_sweeps_agree() {
    let sys = unit_params("double-pendulum");
    let starts = random_states(&sys, 16, 1.0, 9);
    let run = |exec| {
        geomech::sweep::integrate_many(exec, &sys, &starts, 1e-2, 50, Method::ImplicitMidpoint).unwrap()
    };
    let (a, b) = (run(Execution::Sequential), run(Execution::Parallel));
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.states, y.states);
    }
}
