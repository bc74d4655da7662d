use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::report::CheckReport;

use super::curves::{classify_curve, crossing_residual, InvariantCurve, PhaseCurveClass, Side};
use super::flow::{integrate_with, FlowSettings, Terminal};
use super::integral::{first_integral, homothety_check};
use super::linear::{classify_linear, Eigenvalues, EquilibriumType};
use super::{is_unit_mu, reversibility_residual, Family, PlanarSystem};

/// Curve parameters always probed, where admissible.
pub const PROBE_SET: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];

const FLOW_TMAX: f64 = 1e8;
const FLOW_TOL: f64 = 1e-9;
const DRIFT_BOUND: f64 = 1e-6;
/// Drift is measured only where `first_integral` is well conditioned.
const DRIFT_WINDOW: (f64, f64) = (0.05, 20.0);

/// Which kinds of phase curves occur in `{y > 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PortraitSignature {
    pub has_homoclinic: bool,
    pub has_origin_to_infinity: bool,
    /// Includes homoclinic curves.
    pub has_asymptotic_to_origin: bool,
    pub has_infinity_to_infinity: bool,
}

impl PortraitSignature {
    fn record(&mut self, class: PhaseCurveClass) {
        match class {
            PhaseCurveClass::Homoclinic => {
                self.has_homoclinic = true;
                self.has_asymptotic_to_origin = true;
            }
            PhaseCurveClass::ForwardAsymptoticToO | PhaseCurveClass::BackwardAsymptoticToO => {
                self.has_origin_to_infinity = true;
                self.has_asymptotic_to_origin = true;
            }
            PhaseCurveClass::InfinityToInfinity => self.has_infinity_to_infinity = true,
            PhaseCurveClass::BoundaryRay | PhaseCurveClass::Equilibrium => {}
        }
    }
}

/// Reference signatures by `mu` range, independent of the curve tables.
pub fn expected_signature(family: Family, mu: f64) -> Result<PortraitSignature> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(domain!("mu = {mu} must be positive"));
    }
    let below = mu < 1.0 && !is_unit_mu(mu);
    let above = mu > 1.0 && !is_unit_mu(mu);
    match family {
        Family::Linear => Err(domain!("portrait signatures are defined for F1 and F2 only")),
        Family::F1 => Ok(PortraitSignature {
            has_homoclinic: true,
            has_origin_to_infinity: below,
            has_asymptotic_to_origin: true,
            has_infinity_to_infinity: false,
        }),
        Family::F2 => Ok(PortraitSignature {
            has_homoclinic: false,
            has_origin_to_infinity: above,
            has_asymptotic_to_origin: above,
            has_infinity_to_infinity: true,
        }),
    }
}

/// Probe values: `PROBE_SET` together with `probe_n` evenly spaced values
/// in `[-2, 2]`.
fn probe_values(probe_n: usize) -> Vec<f64> {
    let mut a: Vec<f64> = PROBE_SET.to_vec();
    if probe_n == 1 {
        a.push(0.0);
    } else {
        a.extend((0..probe_n).map(|i| -2.0 + 4.0 * i as f64 / (probe_n - 1) as f64));
    }
    a.sort_by(f64::total_cmp);
    a.dedup();
    a
}

fn admissible_curves(sys: &PlanarSystem, probe_n: usize) -> Vec<InvariantCurve> {
    probe_values(probe_n)
        .into_iter()
        .filter_map(|a| InvariantCurve::new(sys.family(), sys.mu(), a).ok())
        .collect()
}

/// Signature of the portrait computed from the curve classification of
/// every admissible probe value.
pub fn portrait_signature(sys: &PlanarSystem, probe_n: usize) -> Result<PortraitSignature> {
    if !sys.family().is_quadratic() {
        return Err(domain!("portrait signatures are defined for F1 and F2 only"));
    }
    let mut sig = PortraitSignature::default();
    for c in admissible_curves(sys, probe_n) {
        for pc in classify_curve(&c)?.curves {
            sig.record(pc.class);
        }
    }
    Ok(sig)
}

/// Outcome of integrating along one invariant curve in both time directions.
#[derive(Debug, Clone, PartialEq)]
pub struct Corroboration {
    pub runs: usize,
    /// Runs whose terminal behavior differs from the classification.
    pub mismatches: Vec<String>,
    /// Largest `|H - a|/(1 + |a|)` seen inside the conditioning window.
    pub max_drift: f64,
}

impl Corroboration {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn expected_terminals(class: PhaseCurveClass) -> (Terminal, Terminal) {
    match class {
        PhaseCurveClass::Homoclinic => (Terminal::NearEquilibrium, Terminal::NearEquilibrium),
        PhaseCurveClass::InfinityToInfinity => (Terminal::Escaped, Terminal::Escaped),
        PhaseCurveClass::ForwardAsymptoticToO => (Terminal::NearEquilibrium, Terminal::Escaped),
        PhaseCurveClass::BackwardAsymptoticToO => (Terminal::Escaped, Terminal::NearEquilibrium),
        PhaseCurveClass::BoundaryRay | PhaseCurveClass::Equilibrium => (Terminal::ReachedTime, Terminal::ReachedTime),
    }
}

/// Integrates forward and backward from a point of each phase curve carried
/// by `c` and compares the terminal behavior with `classify_curve`.
pub fn corroborate_curve(c: &InvariantCurve) -> Result<Corroboration> {
    corroborate_curve_with(c, FLOW_TOL)
}

/// [`corroborate_curve`] with integrator tolerance `tol`.
pub fn corroborate_curve_with(c: &InvariantCurve, tol: f64) -> Result<Corroboration> {
    let sys = PlanarSystem::new(c.family(), c.mu())?;
    let classes = classify_curve(c)?;
    let a = c.a();
    let mut out = Corroboration { runs: 0, mismatches: Vec::new(), max_drift: 0.0 };
    for pc in &classes.curves {
        let start = match pc.side {
            Side::Whole => {
                let y = classes.axis_crossing.ok_or_else(|| domain!("whole curve without an axis crossing"))?;
                (0.0, y)
            }
            Side::Left | Side::Right => {
                let x2 = c.x_squared(1.0);
                if !(x2 >= 0.0) {
                    return Err(domain!("branch does not reach y = 1"));
                }
                let x = libm::sqrt(x2);
                (if pc.side == Side::Left { -x } else { x }, 1.0)
            }
        };
        let (fwd, bwd) = expected_terminals(pc.class);
        for (settings, expected) in [
            (FlowSettings::new(FLOW_TMAX, tol), fwd),
            (FlowSettings::new(FLOW_TMAX, tol).backward(), bwd),
        ] {
            let tr = integrate_with(&sys, start, settings)?;
            out.runs += 1;
            if tr.terminal != expected {
                out.mismatches.push(format!(
                    "a = {a}, {:?} side, {:?}: expected {expected:?}, observed {:?}",
                    pc.side, settings.direction, tr.terminal
                ));
            }
            for &(x, y) in &tr.states {
                let r = libm::hypot(x, y);
                if r >= DRIFT_WINDOW.0 && r <= DRIFT_WINDOW.1 && y > 0.0 {
                    let h = first_integral(c.family(), c.mu(), x, y)?;
                    out.max_drift = out.max_drift.max((h - a).abs() / (1.0 + a.abs()));
                }
            }
        }
    }
    Ok(out)
}

fn portrait_id(sys: &PlanarSystem, check: &str) -> String {
    format!("portrait.{}.mu{}.{}", sys.family().name(), sys.mu(), check)
}

fn homothety_residual(sys: &PlanarSystem) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in [0.25, 0.5, 2.0, 3.0] {
        for (x, y) in [(-1.5, 0.3), (0.0, 1.0), (0.7, 0.9), (2.0, 2.5), (-0.2, 3.0)] {
            let (scaled, predicted) = homothety_check(sys.family(), sys.mu(), k, x, y)?;
            worst = worst.max((scaled - predicted).abs() / scaled.abs().max(predicted.abs()).max(1.0));
        }
    }
    Ok(worst)
}

/// Checks a quadratic portrait: signature against the reference, flow
/// corroboration and conservation along every probe curve, axis crossings,
/// reversibility and the homothety law.
pub fn verify_portrait(sys: &PlanarSystem, probe_n: usize) -> Result<Vec<CheckReport>> {
    let family = sys.family();
    let mu = sys.mu();
    let expected = expected_signature(family, mu)?;
    let sig = portrait_signature(sys, probe_n)?;
    let tag = |r: CheckReport| r.param("family", family.name()).param("mu", mu);

    let mut reports = Vec::new();
    reports.push(tag(CheckReport::holds(portrait_id(sys, "signature"), sig == expected).note(format!(
        "homoclinic={} origin_to_infinity={} asymptotic_to_origin={} infinity_to_infinity={}",
        sig.has_homoclinic, sig.has_origin_to_infinity, sig.has_asymptotic_to_origin, sig.has_infinity_to_infinity
    ))));

    let curves = admissible_curves(sys, probe_n);
    let mut mismatches = Vec::new();
    let mut drift: f64 = 0.0;
    let mut crossing: f64 = 0.0;
    for c in &curves {
        let k = corroborate_curve(c)?;
        mismatches.extend(k.mismatches);
        drift = drift.max(k.max_drift);
        if let Some(r) = crossing_residual(c)? {
            crossing = crossing.max(r);
        }
    }
    let mut corroborated = CheckReport::holds(portrait_id(sys, "flow_corroborates"), mismatches.is_empty())
        .param("curves", curves.len());
    if !mismatches.is_empty() {
        corroborated = corroborated.note(mismatches.join("; "));
    }
    reports.push(tag(corroborated));
    reports.push(tag(CheckReport::below(portrait_id(sys, "conservation"), drift, DRIFT_BOUND)));
    reports.push(tag(CheckReport::below(portrait_id(sys, "axis_crossing"), crossing, 1e-10)));
    reports.push(tag(CheckReport::below(portrait_id(sys, "reversibility"), reversibility_residual(sys, 101), 1e-12)));
    reports.push(tag(CheckReport::below(portrait_id(sys, "homothety"), homothety_residual(sys)?, 1e-10)));
    Ok(reports)
}

fn expected_linear_kind(mu: f64) -> EquilibriumType {
    let third = 1.0 / 3.0;
    let near = |t: f64| (mu - t).abs() <= 1e-12 * t;
    if near(third) {
        EquilibriumType::UnstableDegenerateNode
    } else if near(1.0) {
        EquilibriumType::Center
    } else if near(3.0) {
        EquilibriumType::StableDegenerateNode
    } else if mu < third {
        EquilibriumType::UnstableNode
    } else if mu < 1.0 {
        EquilibriumType::UnstableFocus
    } else if mu < 3.0 {
        EquilibriumType::StableFocus
    } else {
        EquilibriumType::StableNode
    }
}

/// Checks the linear classification at `mu`: the type matches its `mu`
/// range and the eigenvalues solve `l^2 + 3(mu - 1) l + 3 mu = 0`.
pub fn verify_linear(mu: f64) -> Result<CheckReport> {
    let lc = classify_linear(mu)?;
    let residual = |re: f64, im: f64| {
        // |p(re + i im)| for p(l) = l^2 + b l + c
        let b = 3.0 * (mu - 1.0);
        let c = 3.0 * mu;
        let pr = re * re - im * im + b * re + c;
        let pi = 2.0 * re * im + b * im;
        libm::hypot(pr, pi) / (1.0 + c)
    };
    let worst = match lc.eigenvalues {
        Eigenvalues::Real(l1, l2) => residual(l1, 0.0).max(residual(l2, 0.0)),
        Eigenvalues::Complex { re, im } => residual(re, im),
    };
    let kind_ok = lc.kind == expected_linear_kind(mu);
    let ok = kind_ok && worst < 1e-12;
    Ok(CheckReport::holds(format!("linear.mu{mu}.classification"), ok)
        .param("mu", mu)
        .param("kind", format!("{:?}", lc.kind))
        .param("eigen_residual", worst)
        .note(format!("{:?}", lc.eigenvalues)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(h: bool, oi: bool, ao: bool, ii: bool) -> PortraitSignature {
        PortraitSignature {
            has_homoclinic: h,
            has_origin_to_infinity: oi,
            has_asymptotic_to_origin: ao,
            has_infinity_to_infinity: ii,
        }
    }

    #[test]
    fn signature_table() {
        for (fam, mu, want) in [
            (Family::F1, 0.5, sig(true, true, true, false)),
            (Family::F1, 1.0, sig(true, false, true, false)),
            (Family::F1, 2.0, sig(true, false, true, false)),
            (Family::F2, 0.5, sig(false, false, false, true)),
            (Family::F2, 1.0, sig(false, false, false, true)),
            (Family::F2, 2.0, sig(false, true, true, true)),
        ] {
            let s = PlanarSystem::new(fam, mu).unwrap();
            assert_eq!(portrait_signature(&s, 9).unwrap(), want, "{fam:?} mu={mu}");
            assert_eq!(expected_signature(fam, mu).unwrap(), want);
        }
    }

    #[test]
    fn linear_rejected() {
        let s = PlanarSystem::new(Family::Linear, 0.5).unwrap();
        assert!(portrait_signature(&s, 3).is_err());
    }

    #[test]
    fn corroboration_examples() {
        for (fam, mu, a) in [(Family::F1, 2.0, 1.0), (Family::F1, 0.5, 0.5), (Family::F2, 1.0, 0.0), (Family::F2, 2.0, 0.0)] {
            let k = corroborate_curve(&InvariantCurve::new(fam, mu, a).unwrap()).unwrap();
            assert!(k.agrees(), "{:?}", k.mismatches);
            assert!(k.max_drift < 1e-6, "drift {}", k.max_drift);
        }
    }

    #[test]
    fn linear_checks_pass() {
        for mu in [0.1, 1.0 / 3.0, 0.5, 1.0, 2.0, 3.0, 5.0] {
            assert!(verify_linear(mu).unwrap().passed(), "mu = {mu}");
        }
    }
}
