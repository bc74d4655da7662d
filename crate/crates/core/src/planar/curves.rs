use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Result};

use super::{is_unit_mu, Family};

/// Ordinates below this (but positive) are clamped before evaluating
/// `y^(2/mu)` and `ln y`.
pub const Y_FLOOR: f64 = 1e-8;

/// The invariant curve with parameter `a` of a quadratic family:
///
/// - F1: `x^2 = a y^(2/mu) + y^2/(1 - mu)`, or `x^2 = y^2 (a - 2 ln y)` at `mu = 1`;
/// - F2: `x^2 = a y^(2/mu) + y^2/(mu - 1)`, or `x^2 = y^2 (a + 2 ln y)` at `mu = 1`.
///
/// F1 with `mu > 1` and F2 with `mu < 1` require `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantCurve {
    family: Family,
    mu: f64,
    a: f64,
}

impl InvariantCurve {
    pub fn new(family: Family, mu: f64, a: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(domain!("mu = {mu} must be positive"));
        }
        if !a.is_finite() {
            return Err(domain!("curve parameter a = {a} is not finite"));
        }
        let unit = is_unit_mu(mu);
        match family {
            Family::Linear => return Err(domain!("invariant curves are defined for F1 and F2 only")),
            Family::F1 if !unit && mu > 1.0 && !(a > 0.0) => {
                return Err(domain!("F1 with mu = {mu} > 1 requires a > 0, got {a}"))
            }
            Family::F2 if !unit && mu < 1.0 && !(a > 0.0) => {
                return Err(domain!("F2 with mu = {mu} < 1 requires a > 0, got {a}"))
            }
            _ => {}
        }
        Ok(InvariantCurve { family, mu, a })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Right-hand side `x^2(y)` of the curve equation, with the convention
    /// `y^2 ln y = 0` at `y = 0`.
    pub fn x_squared(&self, y: f64) -> f64 {
        if y == 0.0 {
            return 0.0;
        }
        let (mu, a) = (self.mu, self.a);
        let y2 = y * y;
        match (self.family, is_unit_mu(mu)) {
            (Family::F1, true) => y2 * (a - 2.0 * libm::log(y)),
            (Family::F2, true) => y2 * (a + 2.0 * libm::log(y)),
            (Family::F1, false) => a * libm::pow(y, 2.0 / mu) + y2 / (1.0 - mu),
            (Family::F2, false) => a * libm::pow(y, 2.0 / mu) + y2 / (mu - 1.0),
            (Family::Linear, _) => f64::NAN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseCurveClass {
    Homoclinic,
    InfinityToInfinity,
    ForwardAsymptoticToO,
    BackwardAsymptoticToO,
    BoundaryRay,
    Equilibrium,
}

/// Which part of an invariant curve forms a phase curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Whole,
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseCurve {
    pub side: Side,
    pub class: PhaseCurveClass,
    /// The curve is a straight ray through the origin (`a = 0`).
    pub straight: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveClassification {
    pub curves: Vec<PhaseCurve>,
    /// Positive ordinate where the curve meets `{x = 0}`, if any.
    pub axis_crossing: Option<f64>,
}

impl CurveClassification {
    fn whole(class: PhaseCurveClass, crossing: f64) -> Self {
        CurveClassification {
            curves: vec![PhaseCurve { side: Side::Whole, class, straight: false }],
            axis_crossing: Some(crossing),
        }
    }

    fn branches(straight: bool) -> Self {
        CurveClassification {
            curves: vec![
                PhaseCurve { side: Side::Left, class: PhaseCurveClass::ForwardAsymptoticToO, straight },
                PhaseCurve { side: Side::Right, class: PhaseCurveClass::BackwardAsymptoticToO, straight },
            ],
            axis_crossing: None,
        }
    }

    /// The closure of the phase curves contains the origin.
    pub fn touches_origin(&self) -> bool {
        self.curves.iter().any(|c| c.class != PhaseCurveClass::InfinityToInfinity)
    }
}

/// Phase curves carried by an invariant curve in `{y > 0}`, with the
/// ordinate where it crosses `{x = 0}`.
pub fn classify_curve(c: &InvariantCurve) -> Result<CurveClassification> {
    let c = InvariantCurve::new(c.family, c.mu, c.a)?;
    let (mu, a) = (c.mu, c.a);
    let power_crossing = |base: f64| libm::pow(base, mu / (2.0 * mu - 2.0));
    let out = match (c.family, is_unit_mu(mu)) {
        (Family::F1, true) => CurveClassification::whole(PhaseCurveClass::Homoclinic, libm::exp(a / 2.0)),
        (Family::F2, true) => CurveClassification::whole(PhaseCurveClass::InfinityToInfinity, libm::exp(-a / 2.0)),
        (Family::F1, false) if mu < 1.0 => {
            if a < 0.0 {
                CurveClassification::whole(PhaseCurveClass::Homoclinic, power_crossing(a * (mu - 1.0)))
            } else {
                CurveClassification::branches(a == 0.0)
            }
        }
        // mu > 1, a > 0
        (Family::F1, false) => CurveClassification::whole(PhaseCurveClass::Homoclinic, power_crossing(a * (mu - 1.0))),
        // mu < 1, a > 0
        (Family::F2, false) if mu < 1.0 => {
            CurveClassification::whole(PhaseCurveClass::InfinityToInfinity, power_crossing(a * (1.0 - mu)))
        }
        (Family::F2, false) => {
            if a < 0.0 {
                CurveClassification::whole(PhaseCurveClass::InfinityToInfinity, power_crossing(a * (1.0 - mu)))
            } else {
                CurveClassification::branches(a == 0.0)
            }
        }
        (Family::Linear, _) => unreachable!("rejected by InvariantCurve::new"),
    };
    Ok(out)
}

/// `|x^2(y*)| / max(1, y*^2)` at the reported axis crossing `y*`; zero when
/// the crossing really lies on the curve.
pub fn crossing_residual(c: &InvariantCurve) -> Result<Option<f64>> {
    Ok(classify_curve(c)?
        .axis_crossing
        .map(|y| c.x_squared(y).abs() / (y * y).max(1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Left,
    Right,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Left => "left",
            Branch::Right => "right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub branch: Branch,
    pub x: f64,
    pub y: f64,
}

/// Points `(±sqrt(x^2(y)), y)` for each `y` of the grid where `x^2(y) >= 0`.
///
/// Both branches are emitted for every admissible ordinate. `y = 0` yields
/// the origin only for curves whose phase curves end at it.
pub fn sample_curve(c: &InvariantCurve, y_grid: &[f64]) -> Vec<CurvePoint> {
    let touches_origin = classify_curve(c).map(|k| k.touches_origin()).unwrap_or(false);
    let mut out = Vec::with_capacity(2 * y_grid.len());
    for &y in y_grid {
        if !(y >= 0.0) {
            continue;
        }
        let (y, x2) = if y == 0.0 {
            if !touches_origin {
                continue;
            }
            (0.0, 0.0)
        } else {
            let y = y.max(Y_FLOOR);
            (y, c.x_squared(y))
        };
        if !(x2 >= 0.0) || !x2.is_finite() {
            continue;
        }
        let x = libm::sqrt(x2);
        out.push(CurvePoint { branch: Branch::Left, x: -x, y });
        out.push(CurvePoint { branch: Branch::Right, x, y });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planar::first_integral;

    #[test]
    fn admissibility() {
        assert!(InvariantCurve::new(Family::F1, 2.0, 0.0).is_err());
        assert!(InvariantCurve::new(Family::F1, 2.0, -1.0).is_err());
        assert!(InvariantCurve::new(Family::F2, 0.5, 0.0).is_err());
        assert!(InvariantCurve::new(Family::F1, 1.0, -3.0).is_ok());
        assert!(InvariantCurve::new(Family::F2, 2.0, -3.0).is_ok());
        assert!(InvariantCurve::new(Family::Linear, 2.0, 1.0).is_err());
    }

    #[test]
    fn classify_examples() {
        let k = classify_curve(&InvariantCurve::new(Family::F1, 0.5, -1.0).unwrap()).unwrap();
        assert_eq!(k.curves[0].class, PhaseCurveClass::Homoclinic);
        assert!((k.axis_crossing.unwrap() - libm::sqrt(2.0)).abs() < 1e-14);

        let k = classify_curve(&InvariantCurve::new(Family::F1, 2.0, 1.0).unwrap()).unwrap();
        assert_eq!(k.curves[0].class, PhaseCurveClass::Homoclinic);
        assert!((k.axis_crossing.unwrap() - 1.0).abs() < 1e-15);

        let k = classify_curve(&InvariantCurve::new(Family::F2, 2.0, 0.0).unwrap()).unwrap();
        assert_eq!(k.curves.len(), 2);
        assert!(k.curves.iter().all(|c| c.straight));
        assert_eq!(k.curves[0].class, PhaseCurveClass::ForwardAsymptoticToO);
        assert_eq!(k.curves[1].class, PhaseCurveClass::BackwardAsymptoticToO);
        assert_eq!(k.axis_crossing, None);
    }

    #[test]
    fn straight_rays_are_diagonals() {
        let c = InvariantCurve::new(Family::F2, 2.0, 0.0).unwrap();
        for p in sample_curve(&c, &[0.5, 1.0, 3.0]) {
            assert!((p.x.abs() - p.y).abs() < 1e-15);
        }
    }

    #[test]
    fn sample_examples() {
        let pts = sample_curve(&InvariantCurve::new(Family::F1, 2.0, 1.0).unwrap(), &[0.5]);
        assert_eq!(pts.len(), 2);
        assert!((pts[0].x + 0.5).abs() < 1e-15 && (pts[1].x - 0.5).abs() < 1e-15);

        let pts = sample_curve(&InvariantCurve::new(Family::F1, 1.0, 0.0).unwrap(), &[1.0]);
        assert!(pts.iter().all(|p| p.x == 0.0));

        let pts = sample_curve(&InvariantCurve::new(Family::F2, 0.5, 1.0).unwrap(), &[0.1, 0.2]);
        assert!(pts.is_empty());
    }

    #[test]
    fn origin_endpoint_only_for_curves_through_it() {
        let homoclinic = InvariantCurve::new(Family::F1, 2.0, 1.0).unwrap();
        assert!(sample_curve(&homoclinic, &[0.0]).iter().all(|p| p.x == 0.0 && p.y == 0.0));
        assert_eq!(sample_curve(&homoclinic, &[0.0]).len(), 2);
        let through = InvariantCurve::new(Family::F2, 1.0, 0.0).unwrap();
        assert!(sample_curve(&through, &[0.0]).is_empty());
    }

    #[test]
    fn sampled_points_are_level_sets() {
        let grid: Vec<f64> = (1..60).map(|i| 0.05 * i as f64).collect();
        for (fam, mu, a) in [
            (Family::F1, 0.5, -1.0),
            (Family::F1, 0.5, 1.0),
            (Family::F1, 1.0, 0.3),
            (Family::F1, 3.0, 2.0),
            (Family::F2, 0.5, 2.0),
            (Family::F2, 1.0, -0.4),
            (Family::F2, 2.0, -1.0),
            (Family::F2, 2.5, 1.0),
        ] {
            let c = InvariantCurve::new(fam, mu, a).unwrap();
            for p in sample_curve(&c, &grid) {
                let h = first_integral(fam, mu, p.x, p.y).unwrap();
                assert!((h - a).abs() < 1e-9 * (1.0 + a.abs()), "{fam:?} mu={mu} a={a}: H = {h} at {p:?}");
            }
        }
    }

    #[test]
    fn crossings_lie_on_curves() {
        for (fam, mu, a) in [(Family::F1, 0.5, -2.0), (Family::F1, 3.0, 0.5), (Family::F2, 0.25, 1.5), (Family::F2, 2.0, -0.3)] {
            let c = InvariantCurve::new(fam, mu, a).unwrap();
            assert!(crossing_residual(&c).unwrap().unwrap() < 1e-12);
        }
    }
}
