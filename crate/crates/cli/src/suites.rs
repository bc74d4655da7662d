//! Check suites behind each subcommand. Core errors become failing checks so
//! that a bad parameter shows up in the report and the exit code.

use std::f64::consts::PI;
use std::path::Path;

use dynex_core::annulus::{
    distance_s_to_r, radial_profile_derivative_minima, s_fourth_power_residual, verify_counterexample, ShearParams,
};
use dynex_core::geometry::{chi, eta, exactness_defect, AnnulusPoint, CylinderLoop, CylinderMap, TAU};
use dynex_core::planar::{
    classify_curve, corroborate_curve_with, verify_linear, verify_portrait, Family, InvariantCurve, PlanarSystem,
};
use dynex_core::torus::{verify_torus, Exponent, RotationSpec, TorusSpec};
use dynex_core::CheckReport;

use crate::error::Result;
use crate::figures::{render_figure, FigureId, FigureSpec};

/// Probe count passed to `verify_portrait`.
pub const PROBE_N: usize = 9;

/// Inserts `scope` after the first component of every id:
/// `torus.not_lagrangian` becomes `torus.k1.not_lagrangian`.
pub fn scoped(reports: Vec<CheckReport>, scope: &str) -> Vec<CheckReport> {
    reports
        .into_iter()
        .map(|mut r| {
            r.id = match r.id.split_once('.') {
                Some((head, tail)) => format!("{head}.{scope}.{tail}"),
                None => format!("{}.{scope}", r.id),
            };
            r
        })
        .collect()
}

fn failed(id: &str, err: impl std::fmt::Display) -> Vec<CheckReport> {
    vec![CheckReport::holds(id, false).note(err.to_string())]
}

pub fn annulus_suite(eps1: f64, eps2: f64, samples: usize) -> Vec<CheckReport> {
    let params = match ShearParams::new(eps1, eps2) {
        Ok(p) => p,
        Err(e) => return failed("annulus.config", e),
    };
    match verify_counterexample(params, samples) {
        Ok(r) => r,
        Err(e) => failed("annulus.verify", e),
    }
}

/// Points spread over the annulus along a golden-angle spiral.
pub fn spiral_points(n: usize) -> Vec<AnnulusPoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .filter_map(|i| {
            let r = (1.0 + 24.0 * (i as f64 + 0.5) / n as f64).sqrt();
            let t = golden * i as f64;
            AnnulusPoint::new(r * t.cos(), r * t.sin()).ok()
        })
        .collect()
}

fn frame_anchor_residual() -> f64 {
    let anchors = [
        (chi(3.0), 4.0),
        (eta(3.0), 2.0),
        (chi(1.4), 2.0),
        (eta(4.6), 4.0),
        (chi(1.0), 1.0),
        (eta(1.0), 1.0),
        (chi(5.0), 5.0),
        (eta(5.0), 5.0),
    ];
    anchors.iter().map(|(v, e)| (v - e).abs()).fold(0.0, f64::max)
}

/// Twisted rotation number `i` of a fixed deterministic family.
fn twist(i: usize) -> CylinderMap {
    let c = 0.3 * (i as f64) - 2.0;
    let d = 0.5 * ((i * 7) % 5) as f64;
    CylinderMap::twist(move |p: f64| c * p + d * p.sin())
}

fn exactness_checks() -> Vec<CheckReport> {
    let lp = CylinderLoop::graph(|q: f64| 0.5 + 0.3 * q.sin() + 0.1 * (2.0 * q).cos());
    let mut worst: f64 = 0.0;
    let mut maps = 0usize;
    for i in 0..20 {
        let mut candidates = vec![twist(i), twist(i).inverse()];
        for j in 0..20 {
            if j != i {
                candidates.push(twist(i).then(twist(j)));
            }
        }
        for m in candidates {
            match exactness_defect(&m, &lp) {
                Ok(d) => worst = worst.max(d.abs()),
                Err(e) => return failed("annulus.exactness_twists", e),
            }
            maps += 1;
        }
    }
    let c = 0.75;
    let translation = exactness_defect(&CylinderMap::Translation(c), &lp).map(|d| (d - TAU * c).abs() / (TAU * c));
    let translation = match translation {
        Ok(r) => CheckReport::below("annulus.exactness_translation", r, 1e-8)
            .param("c", c)
            .note("relative error of the defect against 2πc"),
        Err(e) => return failed("annulus.exactness_translation", e),
    };
    vec![
        CheckReport::below("annulus.exactness_twists", worst, 1e-8)
            .param("maps", maps)
            .note("twisted rotations, their inverses and pairwise compositions"),
        translation,
    ]
}

/// Frame anchors, the extrema of `P'`, exactness of twisted rotations and the
/// closeness of `S` to `R`.
pub fn annulus_extras() -> Vec<CheckReport> {
    let mut out = vec![CheckReport::below("annulus.frame_anchors", frame_anchor_residual(), 1e-12)];

    let (x, v, _, vl) = radial_profile_derivative_minima(4001);
    let global = (v + 16.0).abs().max((x - 1.0).abs());
    out.push(CheckReport::below("annulus.profile_derivative_minimum", global, 1e-6).param("value", v).param("at", x));
    let expected = -(16.0 / 3.0) * (2.0f64 / 3.0).sqrt();
    out.push(
        CheckReport::below("annulus.profile_derivative_local_minimum", (vl - expected).abs(), 1e-6)
            .param("value", vl),
    );
    out.extend(exactness_checks());

    let pts = spiral_points(1000);
    let small = ShearParams::new(1e-3, 1e-3).expect("valid amplitudes");
    match distance_s_to_r(small, &pts) {
        Ok(d) => out.push(CheckReport::below("annulus.s_near_r", d, 1e-2).param("eps1", 1e-3).param("eps2", 1e-3)),
        Err(e) => out.extend(failed("annulus.s_near_r", e)),
    }
    let figure = ShearParams::new(0.05, 0.4).expect("valid amplitudes");
    match s_fourth_power_residual(figure, &pts) {
        Ok(d) => out.push(CheckReport::below("annulus.s_order_four", d, 1e-9)),
        Err(e) => out.extend(failed("annulus.s_order_four", e)),
    }
    out
}

pub fn torus_suite(n: usize, k: u32, eps: f64, v1: f64, grid_n: usize) -> Vec<CheckReport> {
    let spec = Exponent::from_int(k).and_then(|k| TorusSpec::at_origin(n, eps, k));
    let spec = match spec {
        Ok(s) => s,
        Err(e) => return failed("torus.config", e),
    };
    match verify_torus(&spec, &RotationSpec::first_angle(n, v1), grid_n) {
        Ok(r) => r,
        Err(e) => failed("torus.verify", e),
    }
}

pub fn portrait_suite(family: Family, mu: f64, a: Option<f64>, tol: f64) -> Vec<CheckReport> {
    if family == Family::Linear {
        return match verify_linear(mu) {
            Ok(r) => vec![r],
            Err(e) => failed("linear.config", e),
        };
    }
    let sys = match PlanarSystem::new(family, mu) {
        Ok(s) => s,
        Err(e) => return failed("portrait.config", e),
    };
    let mut out = match verify_portrait(&sys, PROBE_N) {
        Ok(r) => r,
        Err(e) => return failed("portrait.verify", e),
    };
    if let Some(a) = a {
        let id = format!("portrait.{}.mu{mu}.curve_a{a}", family.name());
        let checked = InvariantCurve::new(family, mu, a)
            .and_then(|c| Ok((classify_curve(&c)?, corroborate_curve_with(&c, tol)?)));
        match checked {
            Ok((classes, k)) => {
                let kinds: Vec<String> = classes.curves.iter().map(|c| format!("{:?} {:?}", c.side, c.class)).collect();
                let mut r = CheckReport::holds(&id, k.agrees() && k.max_drift < 1e-6)
                    .param("a", a)
                    .param("tol", tol)
                    .param("max_drift", k.max_drift)
                    .note(kinds.join(", "));
                if let Some(y) = classes.axis_crossing {
                    r = r.param("axis_crossing", y);
                }
                out.push(r);
            }
            Err(e) => out.extend(failed(&id, e)),
        }
    }
    out
}

/// Renders every figure twice and checks byte equality; writes them to
/// `out_dir` when given.
pub fn figure_suite(out_dir: Option<&Path>) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for id in FigureId::ALL {
        let spec = FigureSpec::default_for(id);
        let first = render_figure(&spec)?;
        let second = render_figure(&spec)?;
        let mut r = CheckReport::holds(format!("figure.{id}.deterministic"), first == second)
            .param("bytes", first.len());
        if id == FigureId::Annulus {
            let paths = first.matches("<path").count();
            r = CheckReport::holds(format!("figure.{id}.deterministic"), first == second && paths == 6)
                .param("bytes", first.len())
                .param("paths", paths);
        }
        if let Some(dir) = out_dir {
            crate::error::write_file(&dir.join(format!("{id}.svg")), first.as_bytes())?;
        }
        out.push(r);
    }
    Ok(out)
}

/// Everything at the default parameters.
pub fn run_all(figure_dir: Option<&Path>) -> Result<Vec<CheckReport>> {
    let mut out = annulus_suite(0.05, 0.4, 4096);
    out.extend(scoped(annulus_suite(1e-3, 1e-3, 4096), "shrink"));
    out.extend(annulus_extras());
    for k in [1, 3] {
        out.extend(scoped(torus_suite(2, k, 0.1, PI, 512), &format!("k{k}")));
    }
    for family in [Family::F1, Family::F2] {
        for mu in [0.5, 1.0, 2.0] {
            out.extend(portrait_suite(family, mu, None, 1e-9));
        }
    }
    for mu in [0.2, 1.0 / 3.0, 0.5, 1.0, 2.0, 3.0, 4.0] {
        out.extend(portrait_suite(Family::Linear, mu, None, 1e-9));
    }
    out.extend(figure_suite(figure_dir)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scoping() {
        let r = scoped(vec![CheckReport::holds("torus.a.b", true), CheckReport::holds("x", true)], "k1");
        assert_eq!(r[0].id, "torus.k1.a.b");
        assert_eq!(r[1].id, "x.k1");
    }

    #[test]
    fn bad_eps1_is_a_failed_check() {
        let r = annulus_suite(0.07, 0.4, 512);
        assert_eq!(r.len(), 1);
        assert!(!r[0].passed());
        assert_eq!(r[0].id, "annulus.config");
    }

    #[test]
    fn extras_pass() {
        for r in annulus_extras() {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn spiral_fills_the_annulus() {
        let pts = spiral_points(1000);
        assert_eq!(pts.len(), 1000);
        let r: Vec<f64> = pts.iter().map(|p| p.x().hypot(p.y())).collect();
        assert!(r.iter().cloned().fold(f64::INFINITY, f64::min) < 1.1);
        assert!(r.iter().cloned().fold(0.0, f64::max) > 4.9);
    }
}
