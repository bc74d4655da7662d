use crate::error::{domain, numerical, Result};
use crate::roots::{bisect, newton_polish};

use super::TAU;

pub const RHO_MIN: f64 = 1.0;
pub const RHO_MAX: f64 = 5.0;

/// Relative slack when testing membership of `1 <= x^2 + y^2 <= 25`; points
/// produced on the boundary circles by trigonometry land within a few ulps.
const MEMBERSHIP_SLACK: f64 = 1e-9;

/// Root bracket width for the radial coordinate before Newton polishing.
const RHO_BISECTION_TOL: f64 = 1e-12;

/// Horizontal semi-axis of the ellipse `{rho = const}`.
pub fn chi(rho: f64) -> f64 {
    (7.0 * rho - 5.0) / (rho + 1.0)
}

pub fn chi_prime(rho: f64) -> f64 {
    12.0 / ((rho + 1.0) * (rho + 1.0))
}

/// Vertical semi-axis of the ellipse `{rho = const}`.
pub fn eta(rho: f64) -> f64 {
    (rho + 5.0) / (7.0 - rho)
}

pub fn eta_prime(rho: f64) -> f64 {
    12.0 / ((7.0 - rho) * (7.0 - rho))
}

/// A point of the annulus in the elliptic frame `(rho, theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePoint {
    rho: f64,
    theta: f64,
}

impl FramePoint {
    /// `theta` is reduced into `[0, 2π)`.
    pub fn new(rho: f64, theta: f64) -> Result<Self> {
        if !(RHO_MIN..=RHO_MAX).contains(&rho) {
            return Err(domain!("rho = {rho} outside [1, 5]"));
        }
        if !theta.is_finite() {
            return Err(domain!("theta = {theta} is not finite"));
        }
        Ok(FramePoint { rho, theta: canonical_angle(theta) })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// A point of `M = {1 <= x^2 + y^2 <= 25}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusPoint {
    x: f64,
    y: f64,
}

impl AnnulusPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let r2 = x * x + y * y;
        if !(1.0 - MEMBERSHIP_SLACK..=25.0 * (1.0 + MEMBERSHIP_SLACK)).contains(&r2) {
            return Err(domain!("({x}, {y}) outside the annulus 1 <= x^2 + y^2 <= 25"));
        }
        Ok(AnnulusPoint { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn distance(&self, other: &AnnulusPoint) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }
}

pub(crate) fn canonical_angle(theta: f64) -> f64 {
    let mut t = libm::fmod(theta, TAU);
    if t < 0.0 {
        t += TAU;
    }
    // adding TAU to a tiny negative remainder can round up to TAU
    if t >= TAU {
        0.0
    } else {
        t
    }
}

pub fn frame_to_cartesian(fp: FramePoint) -> Result<AnnulusPoint> {
    let (s, c) = libm::sincos(fp.theta);
    AnnulusPoint::new(chi(fp.rho) * c, eta(fp.rho) * s)
}

/// Inverse of [`frame_to_cartesian`].
///
/// `h(rho) = x^2/chi^2 + y^2/eta^2 - 1` is strictly decreasing on `[1, 5]`, so
/// its root is bracketed by the interval itself. The result is checked by a
/// round trip and rejected if it misses `p` by more than `tol`.
pub fn cartesian_to_frame(p: AnnulusPoint, tol: f64) -> Result<FramePoint> {
    if !(tol > 0.0) {
        return Err(domain!("tolerance must be positive, got {tol}"));
    }
    let (x, y) = (p.x, p.y);
    let (x2, y2) = (x * x, y * y);
    let h = |rho: f64| {
        let (a, b) = (chi(rho), eta(rho));
        x2 / (a * a) + y2 / (b * b) - 1.0
    };
    let dh = |rho: f64| {
        let (a, b) = (chi(rho), eta(rho));
        -2.0 * x2 * chi_prime(rho) / (a * a * a) - 2.0 * y2 * eta_prime(rho) / (b * b * b)
    };
    let rho = if h(RHO_MIN) <= 0.0 {
        RHO_MIN
    } else if h(RHO_MAX) >= 0.0 {
        RHO_MAX
    } else {
        let r = bisect(h, RHO_MIN, RHO_MAX, RHO_BISECTION_TOL)?;
        newton_polish(h, dh, r, RHO_MIN, RHO_MAX, 2)
    };
    let theta = libm::atan2(y / eta(rho), x / chi(rho));
    let fp = FramePoint::new(rho, theta)?;
    let back = frame_to_cartesian(fp)?;
    let miss = back.distance(&p);
    if !(miss <= tol) {
        return Err(numerical!(
            "frame inversion of ({x}, {y}) misses by {miss:e} > {tol:e}"
        ));
    }
    Ok(fp)
}
