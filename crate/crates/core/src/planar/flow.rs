use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::ode::{solve, Control};

use super::PlanarSystem;

/// Trajectories closer to the origin than this are treated as having
/// reached it.
pub const DEFAULT_R_IN: f64 = 1e-6;
/// Trajectories farther from the origin than this are treated as escaped.
pub const DEFAULT_R_OUT: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Terminal {
    ReachedTime,
    NearEquilibrium,
    Escaped,
    BoundaryHit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSettings {
    pub tmax: f64,
    pub tol: f64,
    pub r_in: f64,
    pub r_out: f64,
    pub direction: Direction,
}

impl FlowSettings {
    pub fn new(tmax: f64, tol: f64) -> Self {
        FlowSettings { tmax, tol, r_in: DEFAULT_R_IN, r_out: DEFAULT_R_OUT, direction: Direction::Forward }
    }

    pub fn backward(mut self) -> Self {
        self.direction = Direction::Backward;
        self
    }
}

/// A computed orbit. `times` is elapsed time, increasing in both directions.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<(f64, f64)>,
    pub terminal: Terminal,
    pub direction: Direction,
}

impl Trajectory {
    pub fn last(&self) -> (f64, f64) {
        *self.states.last().expect("a trajectory holds at least its start")
    }
}

pub fn integrate(sys: &PlanarSystem, x0: f64, y0: f64, tmax: f64, tol: f64) -> Result<Trajectory> {
    integrate_with(sys, (x0, y0), FlowSettings::new(tmax, tol))
}

/// Adaptive Dormand–Prince integration of the system from `start`.
///
/// Stops with `NearEquilibrium` once the state is within `r_in` of the
/// origin, `Escaped` beyond `r_out`, and `BoundaryHit` if a quadratic system
/// drops below `y = -tol`. A start at an equilibrium yields the constant
/// trajectory.
pub fn integrate_with(sys: &PlanarSystem, start: (f64, f64), s: FlowSettings) -> Result<Trajectory> {
    let (x0, y0) = start;
    if !(x0.is_finite() && y0.is_finite()) {
        return Err(domain!("start ({x0}, {y0}) is not finite"));
    }
    if sys.family().is_quadratic() && y0 < 0.0 {
        return Err(domain!("start ({x0}, {y0}) is below the invariant line y = 0"));
    }
    if !(s.tol > 0.0 && s.tmax >= 0.0) {
        return Err(domain!("need tol > 0 and tmax >= 0"));
    }
    let sign = match s.direction {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    if sys.field(x0, y0) == (0.0, 0.0) {
        return Ok(Trajectory {
            times: Vec::from([0.0, s.tmax]),
            states: Vec::from([start, start]),
            terminal: Terminal::ReachedTime,
            direction: s.direction,
        });
    }
    let quadratic = sys.family().is_quadratic();
    let sol = solve(
        |u: &[f64; 2]| {
            let (f, g) = sys.field(u[0], u[1]);
            [sign * f, sign * g]
        },
        [x0, y0],
        s.tmax,
        s.tol,
        |t, u| {
            if t == 0.0 {
                return Control::Continue;
            }
            let r = libm::hypot(u[0], u[1]);
            if quadratic && u[1] < -s.tol {
                Control::Stop(Terminal::BoundaryHit)
            } else if r < s.r_in {
                Control::Stop(Terminal::NearEquilibrium)
            } else if r > s.r_out {
                Control::Stop(Terminal::Escaped)
            } else {
                Control::Continue
            }
        },
    )?;
    Ok(Trajectory {
        times: sol.times,
        states: sol.states.into_iter().map(|u| (u[0], u[1])).collect(),
        terminal: sol.stopped.unwrap_or(Terminal::ReachedTime),
        direction: s.direction,
    })
}
