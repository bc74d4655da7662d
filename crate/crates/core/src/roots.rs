//! One-dimensional root finding and minimization.
//!
//! Everything here works on scalar closures. Bisection needs a sign change on
//! the bracket; the minimizers assume a smooth objective whose grid minimizer
//! sits in the basin of the true minimizer.

use crate::error::{numerical, Result};

const MAX_BISECTIONS: usize = 200;

/// Root of `f` in `[lo, hi]` by bisection, stopping once the bracket is
/// narrower than `xtol`. `f(lo)` and `f(hi)` must differ in sign (or vanish).
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(numerical!(
            "no sign change on [{lo}, {hi}]: f = ({flo:e}, {fhi:e})"
        ));
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton steps from `x`, clamped to `[lo, hi]`. A step with a vanishing or
/// non-finite derivative leaves `x` unchanged.
pub fn newton_polish<F, D>(f: F, df: D, mut x: f64, lo: f64, hi: f64, steps: usize) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    for _ in 0..steps {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - f(x) / d;
        if !next.is_finite() {
            break;
        }
        x = next.clamp(lo, hi);
    }
    x
}

/// Golden-section search for the minimizer of a unimodal `f` on `[a, b]`.
pub fn golden_section_min<F>(f: F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let inv_phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..MAX_BISECTIONS {
        if (b - a).abs() <= xtol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // the interior probes can beat the midpoint on a flat valley
    [(x, fx), (c, fc), (d, fd)]
        .into_iter()
        .fold((x, fx), |best, cand| if cand.1 < best.1 { cand } else { best })
}

/// Minimum of `f` over `[lo, hi]`: uniform grid of `n + 1` points, then
/// golden-section refinement on the two cells around the best grid point.
pub fn grid_min<F>(f: F, lo: f64, hi: f64, n: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let n = n.max(2);
    let h = (hi - lo) / n as f64;
    let mut best = (lo, f(lo));
    for i in 1..=n {
        let x = lo + h * i as f64;
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    let a = (best.0 - h).max(lo);
    let b = (best.0 + h).min(hi);
    let refined = golden_section_min(&f, a, b, 1e-13 * (1.0 + best.0.abs()));
    if refined.1 < best.1 {
        refined
    } else {
        best
    }
}

/// Minimum of a 2π-periodic `f`, sampled on `n` equispaced angles.
pub fn periodic_min<F>(f: F, n: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let tau = 2.0 * core::f64::consts::PI;
    let n = n.max(2);
    let h = tau / n as f64;
    let mut best = (0.0, f(0.0));
    for i in 1..n {
        let x = h * i as f64;
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    // golden section around the grid minimizer; the bracket may cross 0 / 2π
    let refined = golden_section_min(&f, best.0 - h, best.0 + h, 1e-13);
    if refined.1 < best.1 {
        (crate::geometry::canonical_angle(refined.0), refined.1)
    } else {
        best
    }
}

/// Maximum of a 2π-periodic `f`; mirror of [`periodic_min`].
pub fn periodic_max<F>(f: F, n: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (x, v) = periodic_min(|t| -f(t), n);
    (x, -v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_without_sign_change_fails() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(crate::Error::Numerical(_))
        ));
    }

    #[test]
    fn newton_polish_improves_bisection() {
        let f = |x: f64| x * x * x - 3.0;
        let x0 = bisect(f, 0.0, 3.0, 1e-6).unwrap();
        let x = newton_polish(f, |x| 3.0 * x * x, x0, 0.0, 3.0, 3);
        assert!((x - libm::cbrt(3.0)).abs() < 1e-15);
    }

    #[test]
    fn golden_section_parabola() {
        let (x, v) = golden_section_min(|x| (x - 0.3) * (x - 0.3) + 1.0, -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn periodic_min_finds_cosine_trough() {
        let (x, v) = periodic_min(libm::cos, 7);
        assert!((x - PI).abs() < 1e-7);
        assert!((v + 1.0).abs() < 1e-14);
    }

    #[test]
    fn periodic_min_wraps_through_zero() {
        let (x, v) = periodic_min(|t| -libm::cos(t - 0.01), 16);
        assert!((x - 0.01).abs() < 1e-7, "{x}");
        assert!((v + 1.0).abs() < 1e-14);
    }
}
