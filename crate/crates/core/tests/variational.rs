use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use geomech::lagrangian::{directional_action_derivative, integrate_variational, DiscretePath, PathVariation};
use geomech::manifold::chart_displacement;
use geomech::systems::{build_system, MechanicalSystem, SystemConfig};
use geomech::ManifoldPoint;

fn double_pendulum() -> MechanicalSystem {
    build_system(&SystemConfig::new(
        "double-pendulum",
        &[("m1", 1.0), ("m2", 0.5), ("l1", 1.0), ("l2", 0.7), ("g", 9.81)],
    ))
    .unwrap()
}

fn random_path(sys: &MechanicalSystem, nodes: usize, seed: u64) -> DiscretePath {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = vec![sys.manifold().sample(&mut rng)];
    for _ in 1..nodes {
        let u: Vec<f64> = (0..sys.dim()).map(|_| rng.gen_range(-0.3..0.3)).collect();
        let next = pts[pts.len() - 1].retract(&u).unwrap();
        pts.push(next);
    }
    DiscretePath::new(0.0, 0.1, pts).unwrap()
}

fn variation(dim: usize, interior: &[f64]) -> PathVariation {
    let mut c = vec![vec![0.0; dim]];
    c.extend(interior.chunks(dim).map(|ch| ch.to_vec()));
    c.push(vec![0.0; dim]);
    PathVariation::new(c).unwrap()
}

#[test]
fn free_particle_discrete_momentum_is_conserved() {
    let m = 2.5;
    let sys = build_system(&SystemConfig::new("free-particle", &[("m", m)])).unwrap();
    let q0 = ManifoldPoint::new(sys.manifold().clone(), vec![0.0, 1.0, -1.0]).unwrap();
    let q1 = ManifoldPoint::new(sys.manifold().clone(), vec![0.03, 0.98, -0.95]).unwrap();
    let h = 0.01;
    let path = integrate_variational(&sys, &q0, &q1, h, 400).unwrap();
    let momentum = |i: usize| -> Vec<f64> {
        chart_displacement(&path.points()[i], &path.points()[i + 1])
            .unwrap()
            .iter()
            .map(|d| m * d / h)
            .collect()
    };
    let first = momentum(0);
    for i in 0..path.segments() {
        for (a, b) in momentum(i).iter().zip(&first) {
            assert!((a - b).abs() <= 1e-12, "segment {i}: {a} vs {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn directional_derivative_is_linear(
        seed in any::<u64>(),
        alpha in -5.0f64..5.0,
        r1 in prop::collection::vec(-1.0f64..1.0, 16),
        r2 in prop::collection::vec(-1.0f64..1.0, 16),
    ) {
        let sys = double_pendulum();
        let path = random_path(&sys, 10, seed);
        let (v1, v2) = (variation(2, &r1), variation(2, &r2));
        let d1 = directional_action_derivative(&sys, &path, &v1).unwrap();
        let d2 = directional_action_derivative(&sys, &path, &v2).unwrap();
        let combined = directional_action_derivative(&sys, &path, &v1.axpy(alpha, &v2).unwrap()).unwrap();
        prop_assert!((combined - alpha * d1 - d2).abs() <= 1e-10, "{combined} vs {}", alpha * d1 + d2);
    }
}
