//! Adaptive Dormand–Prince 5(4) integrator for autonomous systems on `R^N`.

use alloc::vec::Vec;

use crate::error::{domain, numerical, Result};


const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

// fifth-order weights (also the last stage row, FSAL)
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// difference between fifth- and fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
const MAX_STEPS: usize = 2_000_000;

/// Returned by the step monitor after every accepted step.
pub enum Control<T> {
    Continue,
    Stop(T),
}

#[derive(Debug, Clone)]
pub struct Solution<const N: usize, T> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    /// `None` when the integration reached `t_end`.
    pub stopped: Option<T>,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Integrates `y' = field(y)` from `y0` over `[0, t_end]`.
///
/// The local error of each accepted step satisfies
/// `|e_i| <= tol * (1 + max(|y_i|, |y_i_new|))` componentwise. `monitor` sees
/// the initial state and every accepted state and may stop the run.
pub fn solve<const N: usize, F, C, T>(
    field: F,
    y0: [f64; N],
    t_end: f64,
    tol: f64,
    mut monitor: C,
) -> Result<Solution<N, T>>
where
    F: Fn(&[f64; N]) -> [f64; N],
    C: FnMut(f64, &[f64; N]) -> Control<T>,
{
    if !(tol > 0.0) || !(t_end >= 0.0) {
        return Err(domain!("need tol > 0 and t_end >= 0, got tol = {tol}, t_end = {t_end}"));
    }
    let mut times = Vec::from([0.0]);
    let mut states = Vec::from([y0]);
    if let Control::Stop(s) = monitor(0.0, &y0) {
        return Ok(Solution { times, states, stopped: Some(s) });
    }
    let mut t = 0.0;
    let mut y = y0;
    let mut k1 = field(&y);
    let speed = k1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut h = (0.01 / (1.0 + speed)).min(t_end);
    if h == 0.0 {
        return Ok(Solution { times, states, stopped: None });
    }
    for _ in 0..MAX_STEPS {
        if t >= t_end {
            return Ok(Solution { times, states, stopped: None });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        let k2 = field(&axpy(&y, h, &[(A21, &k1)]));
        let k3 = field(&axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = field(&axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = field(&axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = field(&axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
        let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = field(&y_new);

        let mut err: f64 = 0.0;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = tol * (1.0 + y[i].abs().max(y_new[i].abs()));
            let r = e.abs() / scale;
            err = if r.is_finite() { err.max(r) } else { f64::INFINITY };
        }

        if err <= 1.0 {
            t = if last { t_end } else { t + h };
            y = y_new;
            k1 = k7;
            times.push(t);
            states.push(y);
            if let Control::Stop(s) = monitor(t, &y) {
                return Ok(Solution { times, states, stopped: Some(s) });
            }
        }
        let factor = if err == 0.0 {
            MAX_FACTOR
        } else if err.is_finite() {
            (SAFETY * libm::pow(err, -0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
        } else {
            MIN_FACTOR
        };
        h *= factor;
        if h < 1e-14 * (1.0 + t.abs()) {
            return Err(numerical!("step size underflow at t = {t}"));
        }
    }
    Err(numerical!("step budget of {MAX_STEPS} exhausted at t = {t}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        let sol = solve::<2, _, _, ()>(|y| [y[1], -y[0]], [1.0, 0.0], 2.0 * core::f64::consts::PI, 1e-10, |_, _| Control::Continue)
            .unwrap();
        let end = sol.states.last().unwrap();
        assert!((end[0] - 1.0).abs() < 1e-8 && end[1].abs() < 1e-8);
        assert!(sol.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn exponential_growth() {
        let sol = solve::<1, _, _, ()>(|y| [y[0]], [1.0], 1.0, 1e-11, |_, _| Control::Continue).unwrap();
        assert!((sol.states.last().unwrap()[0] - core::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn monitor_stops_early() {
        let sol = solve(|y: &[f64; 1]| [y[0] * y[0]], [1.0], 10.0, 1e-9, |_, y| {
            if y[0] > 100.0 {
                Control::Stop(())
            } else {
                Control::Continue
            }
        })
        .unwrap();
        assert!(sol.stopped.is_some());
        // x' = x^2 from 1 blows up at t = 1
        assert!(*sol.times.last().unwrap() < 1.0);
    }
}
