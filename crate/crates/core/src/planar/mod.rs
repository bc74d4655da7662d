//! Planar systems `x' = f(x, y)`, `y' = mu g(x, y)`.
//!
//! - `Linear`: `x' = 3(x + y)`, `y' = -mu (4x + 3y)` on the whole plane;
//! - `F1`: `x' = x^2 - y^2`, `y' = mu x y` on `{y >= 0}`;
//! - `F2`: `x' = x^2 + y^2`, `y' = mu x y` on `{y >= 0}`.
//!
//! The quadratic families leave `{y = 0}` invariant, are reversible under
//! `(x, y) -> (-x, y)` and commute with the homotheties `(x, y) -> (kx, ky)`.
//! Their phase portraits in `{y > 0}` are the level sets of explicit first
//! integrals; the portrait type changes as `mu` crosses 1.

mod curves;
mod flow;
mod integral;
mod linear;
mod signature;

pub use curves::{
    classify_curve, crossing_residual, sample_curve, Branch, CurveClassification, CurvePoint,
    InvariantCurve, PhaseCurve, PhaseCurveClass, Side,
};
pub use flow::{integrate, integrate_with, Direction, FlowSettings, Terminal, Trajectory};
pub use integral::{first_integral, homothety_check};
pub use linear::{classify_linear, Eigenvalues, EquilibriumType, LinearClassification};
pub use signature::{
    corroborate_curve, corroborate_curve_with, expected_signature, portrait_signature, verify_linear, verify_portrait,
    Corroboration, PortraitSignature, PROBE_SET,
};

use crate::error::{domain, Result};

/// `mu` within this relative distance of 1 takes the logarithmic branch.
pub const UNIT_MU_TOL: f64 = 1e-12;

pub(crate) fn is_unit_mu(mu: f64) -> bool {
    (mu - 1.0).abs() <= UNIT_MU_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Linear,
    F1,
    F2,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Linear => "linear",
            Family::F1 => "f1",
            Family::F2 => "f2",
        }
    }

    pub fn is_quadratic(self) -> bool {
        !matches!(self, Family::Linear)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarSystem {
    family: Family,
    mu: f64,
    normalized: bool,
}

impl PlanarSystem {
    pub fn new(family: Family, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(domain!("mu = {mu} must be positive"));
        }
        Ok(PlanarSystem { family, mu, normalized: false })
    }

    /// Same phase portrait, right-hand side divided by `1 + x^2 + y^2`.
    pub fn normalized(mut self) -> Self {
        self.normalized = true;
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Field without the half-plane check.
    pub(crate) fn field(&self, x: f64, y: f64) -> (f64, f64) {
        let mu = self.mu;
        let (f, g) = match self.family {
            Family::Linear => (3.0 * (x + y), -mu * (4.0 * x + 3.0 * y)),
            Family::F1 => (x * x - y * y, mu * x * y),
            Family::F2 => (x * x + y * y, mu * x * y),
        };
        if self.normalized {
            let d = 1.0 + x * x + y * y;
            (f / d, g / d)
        } else {
            (f, g)
        }
    }
}

pub fn eval_field(sys: &PlanarSystem, x: f64, y: f64) -> Result<(f64, f64)> {
    if sys.family.is_quadratic() && y < 0.0 {
        return Err(domain!("({x}, {y}) is below the invariant line y = 0"));
    }
    Ok(sys.field(x, y))
}

/// `max |(f(-x, y) - f(x, y), g(-x, y) + g(x, y))|` over a `grid_n x grid_n`
/// grid of `[-4, 4] x [0, 4]`.
pub fn reversibility_residual(sys: &PlanarSystem, grid_n: usize) -> f64 {
    let n = grid_n.max(2);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let x = -4.0 + 8.0 * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let y = 4.0 * j as f64 / (n - 1) as f64;
            let (f, g) = sys.field(x, y);
            let (fm, gm) = sys.field(-x, y);
            worst = worst.max(libm::hypot(fm - f, gm + g));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_examples() {
        let f1 = PlanarSystem::new(Family::F1, 2.0).unwrap();
        assert_eq!(eval_field(&f1, 1.0, 1.0).unwrap(), (0.0, 2.0));
        let f2 = PlanarSystem::new(Family::F2, 1.0).unwrap();
        assert_eq!(eval_field(&f2, 0.0, 1.0).unwrap(), (1.0, 0.0));
        let lin = PlanarSystem::new(Family::Linear, 1.0).unwrap();
        assert_eq!(eval_field(&lin, 1.0, 0.0).unwrap(), (3.0, -4.0));
    }

    #[test]
    fn lower_half_plane_rejected() {
        let f1 = PlanarSystem::new(Family::F1, 2.0).unwrap();
        assert!(matches!(eval_field(&f1, 0.0, -0.1), Err(crate::Error::Domain(_))));
        let lin = PlanarSystem::new(Family::Linear, 2.0).unwrap();
        assert!(eval_field(&lin, 0.0, -0.1).is_ok());
        assert!(PlanarSystem::new(Family::F1, 0.0).is_err());
    }

    #[test]
    fn invariant_axis() {
        for fam in [Family::F1, Family::F2] {
            let s = PlanarSystem::new(fam, 0.7).unwrap();
            for x in [-3.0, -0.5, 0.0, 2.0] {
                let (f, g) = eval_field(&s, x, 0.0).unwrap();
                assert_eq!(g, 0.0);
                assert_eq!(f, x * x);
            }
        }
    }

    #[test]
    fn reversibility() {
        for fam in [Family::F1, Family::F2] {
            for mu in [0.3, 0.5, 1.0, 2.0, 3.0] {
                let s = PlanarSystem::new(fam, mu).unwrap();
                assert!(reversibility_residual(&s, 41) < 1e-12);
            }
        }
        let lin = PlanarSystem::new(Family::Linear, 1.0).unwrap();
        assert!(reversibility_residual(&lin, 41) > 0.0);
    }
}
