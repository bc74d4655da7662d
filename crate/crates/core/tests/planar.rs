use dynex_core::planar::{
    classify_curve, classify_linear, eval_field, first_integral, homothety_check, integrate, reversibility_residual,
    sample_curve, verify_portrait, EquilibriumType, Family, InvariantCurve, PlanarSystem, Terminal,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quadratic() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::F1), Just(Family::F2)]
}

/// `mu` in `[0.3, 3]` away from the logarithmic branch, or exactly 1.
fn random_mu(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(0.2) {
        return 1.0;
    }
    loop {
        let mu = rng.gen_range(0.3..3.0);
        if (mu - 1.0f64).abs() > 0.05 {
            return mu;
        }
    }
}

/// Size of the terms whose difference forms `H`, used to make errors relative.
fn term_scale(family: Family, mu: f64, x: f64, y: f64) -> f64 {
    if mu == 1.0 {
        x * x / (y * y) + 2.0 * y.ln().abs()
    } else {
        let _ = family;
        (x * x + y * y / (1.0 - mu).abs()) * y.powf(-2.0 / mu)
    }
}

#[test]
fn gradient_is_orthogonal_to_the_field() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let h = 1e-6;
    for (family, unit) in [(Family::F1, false), (Family::F1, true), (Family::F2, false), (Family::F2, true)] {
        for _ in 0..1000 {
            let mu = if unit { 1.0 } else { loop { let m = random_mu(&mut rng); if m != 1.0 { break m; } } };
            let x = rng.gen_range(-3.0..3.0);
            let y = rng.gen_range(0.3..3.0);
            let hx = (first_integral(family, mu, x + h, y).unwrap() - first_integral(family, mu, x - h, y).unwrap()) / (2.0 * h);
            let hy = (first_integral(family, mu, x, y + h).unwrap() - first_integral(family, mu, x, y - h).unwrap()) / (2.0 * h);
            let (f, g) = eval_field(&PlanarSystem::new(family, mu).unwrap(), x, y).unwrap();
            let dot = hx * f + hy * g;
            let rel = dot.abs() / (hx.hypot(hy) * f.hypot(g)).max(1e-300);
            assert!(rel < 1e-8, "{family:?} mu={mu} ({x}, {y}): {rel}");
        }
    }
}

#[test]
fn trajectories_conserve_the_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..100 {
        let family = if rng.gen_bool(0.5) { Family::F1 } else { Family::F2 };
        let mu = random_mu(&mut rng);
        let (x0, y0) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.5..1.5));
        let sys = PlanarSystem::new(family, mu).unwrap();
        let tr = integrate(&sys, x0, y0, 0.2, 1e-9).unwrap();
        assert_eq!(tr.terminal, Terminal::ReachedTime);
        let (x1, y1) = tr.last();
        let drift = (first_integral(family, mu, x1, y1).unwrap() - first_integral(family, mu, x0, y0).unwrap()).abs();
        assert!(drift < 1e-6, "{family:?} mu={mu} from ({x0}, {y0}): drift {drift}");
    }
}

#[test]
fn normalized_field_is_bounded() {
    for family in [Family::F1, Family::F2] {
        for mu in [0.3, 1.0, 2.5] {
            let sys = PlanarSystem::new(family, mu).unwrap().normalized();
            let n = 1000;
            let (mut fx, mut fy) = (0.0f64, 0.0f64);
            for i in 0..n {
                let x = -50.0 + 100.0 * i as f64 / (n - 1) as f64;
                for j in 0..n {
                    let y = 50.0 * j as f64 / (n - 1) as f64;
                    let (f, g) = eval_field(&sys, x, y).unwrap();
                    fx = fx.max(f.abs());
                    fy = fy.max(g.abs());
                }
            }
            assert!(fx <= 1.0, "{family:?} mu={mu}: {fx}");
            assert!(fy <= mu / 2.0 + 1e-12, "{family:?} mu={mu}: {fy}");
        }
    }
}

#[test]
fn homothety_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for i in 0..1000 {
        let family = if i % 2 == 0 { Family::F1 } else { Family::F2 };
        let mu = random_mu(&mut rng);
        let k = rng.gen_range(0.1f64..10.0);
        let (x, y) = (rng.gen_range(-3.0..3.0), rng.gen_range(0.1..3.0));
        let (scaled, predicted) = homothety_check(family, mu, k, x, y).unwrap();
        let scale = term_scale(family, mu, k * x, k * y).max(1.0);
        assert!((scaled - predicted).abs() <= 1e-10 * scale, "{family:?} mu={mu} k={k} ({x}, {y})");
    }
}

#[test]
fn reversible_for_five_mu() {
    for family in [Family::F1, Family::F2] {
        for mu in [0.3, 0.5, 1.0, 2.0, 3.0] {
            assert!(reversibility_residual(&PlanarSystem::new(family, mu).unwrap(), 201) < 1e-12);
        }
    }
}

#[test]
fn linear_type_changes_only_at_thresholds() {
    let n = 60_000;
    let thresholds = [1.0 / 3.0, 1.0, 3.0];
    let mut prev = classify_linear(1e-4).unwrap().kind;
    let mut kinds = vec![prev];
    let mut changes = Vec::new();
    for i in 1..=n {
        let mu = 1e-4 + 6.0 * i as f64 / n as f64;
        if thresholds.iter().any(|t| (mu - t).abs() < 1e-9) {
            continue;
        }
        let kind = classify_linear(mu).unwrap().kind;
        if kind != prev {
            changes.push(mu);
            kinds.push(kind);
            prev = kind;
        }
    }
    assert_eq!(
        kinds,
        [EquilibriumType::UnstableNode, EquilibriumType::UnstableFocus, EquilibriumType::StableFocus, EquilibriumType::StableNode]
    );
    for (c, t) in changes.iter().zip(thresholds) {
        assert!((c - t).abs() <= 6.0 / n as f64 + 1e-12, "change at {c}, expected near {t}");
    }
    assert_eq!(classify_linear(1.0 / 3.0).unwrap().kind, EquilibriumType::UnstableDegenerateNode);
    assert_eq!(classify_linear(1.0).unwrap().kind, EquilibriumType::Center);
    assert_eq!(classify_linear(3.0).unwrap().kind, EquilibriumType::StableDegenerateNode);
}

#[test]
fn sampled_points_stay_on_their_curve_under_the_flow() {
    let grid: Vec<f64> = (1..=12).map(|i| 0.25 * i as f64).collect();
    for (family, mu, a) in [
        (Family::F1, 0.5, -1.0),
        (Family::F1, 0.5, 0.5),
        (Family::F1, 1.0, 0.3),
        (Family::F1, 2.0, 2.0),
        (Family::F2, 0.5, 2.0),
        (Family::F2, 1.0, -0.5),
        (Family::F2, 2.0, -1.0),
        (Family::F2, 2.0, 1.0),
    ] {
        let c = InvariantCurve::new(family, mu, a).unwrap();
        let sys = PlanarSystem::new(family, mu).unwrap();
        for p in sample_curve(&c, &grid) {
            if p.x.hypot(p.y) > 3.0 {
                continue;
            }
            let tr = integrate(&sys, p.x, p.y, 0.05, 1e-9).unwrap();
            let (x, y) = tr.last();
            let h = first_integral(family, mu, x, y).unwrap();
            assert!((h - a).abs() < 1e-6, "{family:?} mu={mu} a={a} from {p:?}: H = {h}");
        }
    }
}

#[test]
fn portraits_verify() {
    for family in [Family::F1, Family::F2] {
        for mu in [0.5, 1.0, 2.0] {
            for r in verify_portrait(&PlanarSystem::new(family, mu).unwrap(), 9).unwrap() {
                assert!(r.passed(), "{r:?}");
            }
        }
    }
}

proptest! {
    #[test]
    fn invariant_axis_has_quadratic_dynamics(family in quadratic(), mu in 0.1f64..5.0, x in -10.0f64..10.0) {
        let (f, g) = eval_field(&PlanarSystem::new(family, mu).unwrap(), x, 0.0).unwrap();
        prop_assert_eq!(g, 0.0);
        prop_assert_eq!(f, x * x);
    }

    #[test]
    fn axis_ray_solution(family in quadratic(), x0 in 0.1f64..2.0) {
        let sys = PlanarSystem::new(family, 1.5).unwrap();
        let t = 0.5 / x0;
        let tr = integrate(&sys, x0, 0.0, t, 1e-10).unwrap();
        let (x, y) = tr.last();
        prop_assert_eq!(y, 0.0);
        prop_assert!((x - x0 / (1.0 - x0 * t)).abs() < 1e-8 * x.abs());
    }

    #[test]
    fn crossings_match_closed_forms(family in quadratic(), mu in 0.2f64..4.0, a in -3.0f64..3.0) {
        // near mu = 1 the power-law crossings are astronomically large
        prop_assume!((mu - 1.0f64).abs() < 1e-3 || (mu - 1.0f64).abs() > 0.05);
        let unit = (mu - 1.0f64).abs() < 1e-3;
        let mu = if unit { 1.0 } else { mu };
        if let Ok(c) = InvariantCurve::new(family, mu, a) {
            let k = classify_curve(&c).unwrap();
            if let Some(y) = k.axis_crossing {
                let expected = match (family, unit) {
                    (Family::F1, true) => (a / 2.0).exp(),
                    (Family::F2, true) => (-a / 2.0).exp(),
                    (Family::F1, false) => (a * (mu - 1.0)).powf(mu / (2.0 * mu - 2.0)),
                    _ => (a * (1.0 - mu)).powf(mu / (2.0 * mu - 2.0)),
                };
                prop_assert!((y - expected).abs() <= 1e-10 * expected.max(1.0));
                let h = first_integral(family, mu, 0.0, y).unwrap();
                prop_assert!((h - a).abs() <= 1e-10 * (1.0 + a.abs()));
            }
        }
    }
}
