use proptest::prelude::*;

use geomech::manifold::{canonicalize, chart_displacement, pair};
use geomech::{CotangentValue, Manifold, ManifoldPoint, TangentValue};

fn manifolds() -> impl Strategy<Value = Manifold> {
    prop_oneof![
        (1usize..4).prop_map(Manifold::Euclidean),
        Just(Manifold::Circle),
        Just(Manifold::RotationGroup3),
        Just(Manifold::torus()),
        Just(Manifold::Product(vec![
            Manifold::Euclidean(2),
            Manifold::Circle,
            Manifold::RotationGroup3,
        ])),
    ]
}

/// Manifolds without rotation factors, where `⊕` is plain coordinate addition.
fn flat_manifolds() -> impl Strategy<Value = Manifold> {
    prop_oneof![
        (1usize..4).prop_map(Manifold::Euclidean),
        Just(Manifold::Circle),
        Just(Manifold::torus()),
        Just(Manifold::Product(vec![Manifold::Circle, Manifold::Euclidean(2)])),
    ]
}

fn raw_point(m: Manifold) -> impl Strategy<Value = ManifoldPoint> {
    prop::collection::vec(-50.0f64..50.0, m.coord_len())
        .prop_filter_map("degenerate quaternion", move |c| ManifoldPoint::raw(m.clone(), c).ok())
        .prop_filter("degenerate quaternion", |p| canonicalize(p).is_ok())
}

fn point_and_step(m: Manifold) -> impl Strategy<Value = (ManifoldPoint, Vec<f64>)> {
    let n = m.dim();
    (raw_point(m), prop::collection::vec(-0.9f64..0.9, n))
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(p in manifolds().prop_flat_map(raw_point)) {
        let once = canonicalize(&p).unwrap();
        let twice = canonicalize(&once).unwrap();
        prop_assert_eq!(once.coords(), twice.coords());
    }

    #[test]
    fn displacement_is_antisymmetric(
        (a, b) in flat_manifolds().prop_flat_map(|m| (raw_point(m.clone()), raw_point(m)))
    ) {
        let (a, b) = (canonicalize(&a).unwrap(), canonicalize(&b).unwrap());
        let ab = chart_displacement(&a, &b).unwrap();
        let ba = chart_displacement(&b, &a).unwrap();
        for (x, y) in ab.iter().zip(&ba) {
            prop_assert!((x + y).abs() <= 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn displacement_recovers_coordinate_step((a, u) in flat_manifolds().prop_flat_map(point_and_step)) {
        let a = canonicalize(&a).unwrap();
        let shifted: Vec<f64> = a.coords().iter().zip(&u).map(|(x, d)| x + d).collect();
        let b = canonicalize(&ManifoldPoint::raw(a.manifold().clone(), shifted).unwrap()).unwrap();
        let d = chart_displacement(&a, &b).unwrap();
        for (x, y) in d.iter().zip(&u) {
            prop_assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn displacement_recovers_retraction((a, u) in manifolds().prop_flat_map(point_and_step)) {
        let a = canonicalize(&a).unwrap();
        let b = a.retract(&u).unwrap();
        let d = chart_displacement(&a, &b).unwrap();
        for (x, y) in d.iter().zip(&u) {
            prop_assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn pairing_is_bilinear(
        n in 1usize..5,
        alpha in -10.0f64..10.0,
        seed in prop::collection::vec(-10.0f64..10.0, 15),
    ) {
        let q = ManifoldPoint::origin(Manifold::Euclidean(n));
        let p = CotangentValue::new(q.clone(), seed[..n].to_vec()).unwrap();
        let u = TangentValue::new(q.clone(), seed[5..5 + n].to_vec()).unwrap();
        let v = TangentValue::new(q, seed[10..10 + n].to_vec()).unwrap();
        let puv = pair(&p, &u.add(&v).unwrap()).unwrap();
        prop_assert!((puv - pair(&p, &u).unwrap() - pair(&p, &v).unwrap()).abs() <= 1e-14 * (1.0 + puv.abs()));
        let scaled = pair(&p.scaled(alpha), &u).unwrap();
        prop_assert!((scaled - alpha * pair(&p, &u).unwrap()).abs() <= 1e-14 * (1.0 + scaled.abs()));
    }
}
