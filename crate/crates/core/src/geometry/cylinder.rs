use alloc::boxed::Box;
use alloc::sync::Arc;
use core::fmt;

use crate::error::{domain, numerical, Result};

use super::frame::canonical_angle;
use super::TAU;

/// Absolute tolerance for successive Richardson estimates of a loop integral.
pub const QUADRATURE_TOL: f64 = 1e-8;

const MIN_PANELS: usize = 64;
const MAX_PANELS: usize = 1 << 22;

/// Point `(p, q mod 2π)` of the cylinder `T*S^1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderPoint {
    pub p: f64,
    q: f64,
}

impl CylinderPoint {
    pub fn new(p: f64, q: f64) -> Self {
        CylinderPoint { p, q: canonical_angle(q) }
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Closed loop on the cylinder given in lifted coordinates: for
/// `t in [0, 2π]` it returns `(p, q)` with `q` real, not reduced mod 2π.
#[derive(Clone)]
pub struct CylinderLoop {
    f: Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>,
}

impl fmt::Debug for CylinderLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CylinderLoop")
    }
}

impl CylinderLoop {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        CylinderLoop { f: Arc::new(f) }
    }

    /// The graph `{p = p(q)}` traversed once in `q`.
    pub fn graph<F>(p: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        CylinderLoop::new(move |t| (p(t), t))
    }

    pub fn at(&self, t: f64) -> (f64, f64) {
        (self.f)(t)
    }

    pub fn mapped(&self, map: &CylinderMap) -> CylinderLoop {
        let inner = self.f.clone();
        let map = map.clone();
        CylinderLoop::new(move |t| {
            let (p, q) = inner(t);
            map.apply(p, q)
        })
    }
}

/// Velocity profile `v(p)` of a twisted rotation.
pub type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Diffeomorphisms of the cylinder, acting on lifted coordinates.
#[derive(Clone)]
pub enum CylinderMap {
    Identity,
    /// `(p, q) -> (p, q + v(p))`.
    TwistedRotation(Profile),
    /// `(p, q) -> (p, q - v(p))`.
    InverseTwist(Profile),
    /// `(p, q) -> (p + c, q)`; symplectic but not exact.
    Translation(f64),
    /// `Compose(a, b)` is `a ∘ b`: `b` is applied first.
    Compose(Box<CylinderMap>, Box<CylinderMap>),
}

impl fmt::Debug for CylinderMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CylinderMap::Identity => f.write_str("Identity"),
            CylinderMap::TwistedRotation(_) => f.write_str("TwistedRotation"),
            CylinderMap::InverseTwist(_) => f.write_str("InverseTwist"),
            CylinderMap::Translation(c) => write!(f, "Translation({c})"),
            CylinderMap::Compose(a, b) => write!(f, "Compose({a:?}, {b:?})"),
        }
    }
}

impl CylinderMap {
    pub fn twist<F>(v: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        CylinderMap::TwistedRotation(Arc::new(v))
    }

    pub fn then(self, next: CylinderMap) -> Self {
        CylinderMap::Compose(Box::new(next), Box::new(self))
    }

    pub fn apply(&self, p: f64, q: f64) -> (f64, f64) {
        match self {
            CylinderMap::Identity => (p, q),
            CylinderMap::TwistedRotation(v) => (p, q + v(p)),
            CylinderMap::InverseTwist(v) => (p, q - v(p)),
            CylinderMap::Translation(c) => (p + c, q),
            CylinderMap::Compose(a, b) => {
                let (p, q) = b.apply(p, q);
                a.apply(p, q)
            }
        }
    }

    pub fn inverse(&self) -> CylinderMap {
        match self {
            CylinderMap::Identity => CylinderMap::Identity,
            CylinderMap::TwistedRotation(v) => CylinderMap::InverseTwist(v.clone()),
            CylinderMap::InverseTwist(v) => CylinderMap::TwistedRotation(v.clone()),
            CylinderMap::Translation(c) => CylinderMap::Translation(-c),
            CylinderMap::Compose(a, b) => CylinderMap::Compose(Box::new(b.inverse()), Box::new(a.inverse())),
        }
    }
}

fn trapezoid(c: &CylinderLoop, panels: usize) -> f64 {
    let h = TAU / panels as f64;
    let (mut p_prev, mut q_prev) = c.at(0.0);
    let mut sum = 0.0;
    for i in 1..=panels {
        let (p, q) = c.at(h * i as f64);
        sum += 0.5 * (p + p_prev) * (q - q_prev);
        p_prev = p;
        q_prev = q;
    }
    sum
}

/// `∮ p dq` over a loop that winds once in `q`.
///
/// Trapezoidal sums with Richardson extrapolation; the panel count doubles
/// until two successive extrapolated values differ by less than
/// [`QUADRATURE_TOL`].
pub fn loop_action_integral(c: &CylinderLoop) -> Result<f64> {
    let (p0, q0) = c.at(0.0);
    let (p1, q1) = c.at(TAU);
    if !((p1 - p0).abs() <= 1e-9 * (1.0 + p0.abs())) {
        return Err(domain!("loop is not closed: p(0) = {p0}, p(2π) = {p1}"));
    }
    let turns = (q1 - q0) / TAU;
    if !((turns.abs() - 1.0).abs() <= 1e-9) {
        return Err(domain!("loop must wind once in q, winds {turns}"));
    }
    let mut panels = MIN_PANELS;
    let mut coarse = trapezoid(c, panels);
    let mut previous: Option<f64> = None;
    while panels < MAX_PANELS {
        panels *= 2;
        let fine = trapezoid(c, panels);
        let extrapolated = (4.0 * fine - coarse) / 3.0;
        if let Some(prev) = previous {
            if (extrapolated - prev).abs() < QUADRATURE_TOL {
                return Ok(extrapolated);
            }
        }
        previous = Some(extrapolated);
        coarse = fine;
    }
    Err(numerical!("loop integral did not converge with {MAX_PANELS} panels"))
}

/// `∮_{A c} p dq - ∮_c p dq`; vanishes for exact symplectomorphisms `A`.
pub fn exactness_defect(map: &CylinderMap, c: &CylinderLoop) -> Result<f64> {
    Ok(loop_action_integral(&c.mapped(map))? - loop_action_integral(c)?)
}
