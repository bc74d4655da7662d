//! Two diffeomorphisms `R`, `S` of the closed annulus `M` with the
//! intersection property whose composition `RS` lacks it.
//!
//! `R` is the quarter rotation `(x, y) -> (-y, x)`. In the elliptic frame
//! `(rho, theta)` the shear `G` acts by
//! `(rho, theta) -> (rho + eps1 P(rho), theta + eps2 sin 2theta)` with
//! `P(rho) = (rho - 1)(rho - 3)^2 (rho - 5)`, and `S = G R G^-1`.
//! `G` fixes the ellipse `R gamma = {rho = 3}` and pulls the ellipse
//! `gamma = {x^2/4 + y^2/16 = 1}` strictly inside itself, onto `delta`.
//! Then `RS` maps `R gamma` onto `R delta` (strictly inside `R gamma`) and
//! `delta` onto `gamma` (strictly outside `delta`).

use alloc::boxed::Box;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{config, domain, Error, Result};
use crate::geometry::{
    cartesian_to_frame, frame_to_cartesian, inside_curve, min_separation, AnnulusPoint,
    ClosedCurve, FramePoint, Vec2, DEFAULT_CHORD_BOUND, RHO_MAX, RHO_MIN, TAU,
};
use crate::report::CheckReport;
use crate::roots::{bisect, newton_polish};

/// Tolerance handed to the frame inversion inside map evaluation.
pub const FRAME_TOL: f64 = 1e-9;

/// Bracket width for inverting the one-dimensional shears.
const SHEAR_INVERSION_TOL: f64 = 1e-12;

/// Default number of samples on `gamma`.
pub const DEFAULT_RESOLUTION: usize = 4096;

/// Smallest resolution accepted by [`verify_counterexample`].
pub const MIN_RESOLUTION: usize = 256;

/// `P(rho) = (rho - 1)(rho - 3)^2 (rho - 5)`.
pub fn radial_profile(rho: f64) -> f64 {
    (rho - 1.0) * (rho - 3.0) * (rho - 3.0) * (rho - 5.0)
}

/// `P'(rho) = 4 (rho - 3)(rho^2 - 6 rho + 7)`.
pub fn radial_profile_prime(rho: f64) -> f64 {
    4.0 * (rho - 3.0) * (rho * rho - 6.0 * rho + 7.0)
}

/// `P''(rho) = 4 (3 rho^2 - 18 rho + 25)`.
pub fn radial_profile_second(rho: f64) -> f64 {
    4.0 * (3.0 * rho * rho - 18.0 * rho + 25.0)
}

/// `Theta(theta) = sin 2theta`.
pub fn angular_profile(theta: f64) -> f64 {
    libm::sin(2.0 * theta)
}

/// Shear amplitudes, with `0 < eps1 < 1/16` and `0 < eps2 < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearParams {
    eps1: f64,
    eps2: f64,
}

impl ShearParams {
    pub fn new(eps1: f64, eps2: f64) -> Result<Self> {
        check_eps1(eps1)?;
        check_eps2(eps2)?;
        Ok(ShearParams { eps1, eps2 })
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }
}

fn check_eps1(eps1: f64) -> Result<()> {
    if eps1 > 0.0 && eps1 < 1.0 / 16.0 {
        Ok(())
    } else {
        Err(config!("eps1 = {eps1} must satisfy 0 < eps1 < 1/16"))
    }
}

fn check_eps2(eps2: f64) -> Result<()> {
    if eps2 > 0.0 && eps2 < 0.5 {
        Ok(())
    } else {
        Err(config!("eps2 = {eps2} must satisfy 0 < eps2 < 1/2"))
    }
}

/// A diffeomorphism of `M` built from the quarter rotation and the two
/// frame shears.
#[derive(Debug, Clone, PartialEq)]
pub enum AnnulusMap {
    /// `(x, y) -> (-y, x)`.
    RotationQuarter,
    /// `G2: (rho, theta) -> (rho + eps1 P(rho), theta)`.
    RadialShear(f64),
    /// `G1: (rho, theta) -> (rho, theta + eps2 sin 2theta)`.
    AngularShear(f64),
    /// Composition in written order: `Composite([a, b, c])` is `a ∘ b ∘ c`,
    /// so `c` acts first.
    Composite(Vec<AnnulusMap>),
    Inverse(Box<AnnulusMap>),
}

impl AnnulusMap {
    /// `G = G2 ∘ G1` (the two shears commute).
    pub fn shear(params: ShearParams) -> Self {
        AnnulusMap::Composite(vec![
            AnnulusMap::RadialShear(params.eps1),
            AnnulusMap::AngularShear(params.eps2),
        ])
    }

    /// `S = G R G^-1`.
    pub fn conjugated_rotation(params: ShearParams) -> Self {
        let g = AnnulusMap::shear(params);
        AnnulusMap::Composite(vec![g.clone(), AnnulusMap::RotationQuarter, g.inverse()])
    }

    /// `RS`.
    pub fn rotation_after_s(params: ShearParams) -> Self {
        AnnulusMap::Composite(vec![AnnulusMap::RotationQuarter, AnnulusMap::conjugated_rotation(params)])
    }

    pub fn inverse(&self) -> Self {
        match self {
            AnnulusMap::Inverse(m) => (**m).clone(),
            m => AnnulusMap::Inverse(Box::new(m.clone())),
        }
    }

    /// Checks every shear amplitude in the map against its admissible range.
    pub fn validate(&self) -> Result<()> {
        match self {
            AnnulusMap::RotationQuarter => Ok(()),
            AnnulusMap::RadialShear(e) => check_eps1(*e),
            AnnulusMap::AngularShear(e) => check_eps2(*e),
            AnnulusMap::Composite(ms) => ms.iter().try_for_each(AnnulusMap::validate),
            AnnulusMap::Inverse(m) => m.validate(),
        }
    }

    pub fn apply(&self, pt: AnnulusPoint) -> Result<AnnulusPoint> {
        self.validate()?;
        self.apply_unchecked(pt)
    }

    fn apply_unchecked(&self, pt: AnnulusPoint) -> Result<AnnulusPoint> {
        match self {
            AnnulusMap::RotationQuarter => AnnulusPoint::new(-pt.y(), pt.x()),
            AnnulusMap::RadialShear(e) => in_frame(pt, |fp| FramePoint::new(radial_shear(*e, fp.rho()), fp.theta())),
            AnnulusMap::AngularShear(e) => in_frame(pt, |fp| FramePoint::new(fp.rho(), angular_shear(*e, fp.theta()))),
            AnnulusMap::Composite(ms) => ms.iter().rev().try_fold(pt, |p, m| m.apply_unchecked(p)),
            AnnulusMap::Inverse(m) => match &**m {
                AnnulusMap::RotationQuarter => AnnulusPoint::new(pt.y(), -pt.x()),
                AnnulusMap::RadialShear(e) => {
                    in_frame(pt, |fp| FramePoint::new(inverse_radial_shear(*e, fp.rho())?, fp.theta()))
                }
                AnnulusMap::AngularShear(e) => {
                    in_frame(pt, |fp| FramePoint::new(fp.rho(), inverse_angular_shear(*e, fp.theta())?))
                }
                AnnulusMap::Composite(ms) => ms.iter().try_fold(pt, |p, m| m.inverse().apply_unchecked(p)),
                AnnulusMap::Inverse(inner) => inner.apply_unchecked(pt),
            },
        }
    }
}

fn in_frame<F>(pt: AnnulusPoint, f: F) -> Result<AnnulusPoint>
where
    F: FnOnce(FramePoint) -> Result<FramePoint>,
{
    frame_to_cartesian(f(cartesian_to_frame(pt, FRAME_TOL)?)?)
}

pub fn radial_shear(eps1: f64, rho: f64) -> f64 {
    (rho + eps1 * radial_profile(rho)).clamp(RHO_MIN, RHO_MAX)
}

pub fn angular_shear(eps2: f64, theta: f64) -> f64 {
    theta + eps2 * angular_profile(theta)
}

/// Solves `rho + eps1 P(rho) = target` on `[1, 5]`; the left side is
/// strictly increasing there for `eps1 < 1/16`.
pub fn inverse_radial_shear(eps1: f64, target: f64) -> Result<f64> {
    let f = |r: f64| r + eps1 * radial_profile(r) - target;
    let r = bisect(f, RHO_MIN, RHO_MAX, SHEAR_INVERSION_TOL)?;
    Ok(newton_polish(f, |r| 1.0 + eps1 * radial_profile_prime(r), r, RHO_MIN, RHO_MAX, 2))
}

/// Solves `theta + eps2 sin 2theta = target`; since `|eps2 sin 2theta| < 1/2`
/// the root lies within `1/2` of `target`.
pub fn inverse_angular_shear(eps2: f64, target: f64) -> Result<f64> {
    let f = |t: f64| t + eps2 * angular_profile(t) - target;
    let lo = target - 0.5;
    let hi = target + 0.5;
    let t = bisect(f, lo, hi, SHEAR_INVERSION_TOL)?;
    Ok(newton_polish(f, |t| 1.0 + 2.0 * eps2 * libm::cos(2.0 * t), t, lo, hi, 2))
}

pub fn apply(map: &AnnulusMap, pt: AnnulusPoint) -> Result<AnnulusPoint> {
    map.apply(pt)
}

#[allow(non_snake_case)]
pub fn apply_S(params: ShearParams, pt: AnnulusPoint) -> Result<AnnulusPoint> {
    AnnulusMap::conjugated_rotation(params).apply_unchecked(pt)
}

pub fn push_curve(map: &AnnulusMap, c: &ClosedCurve) -> Result<ClosedCurve> {
    map.validate()?;
    let map = map.clone();
    c.pushed(move |p| map.apply_unchecked(p))
}

/// `gamma = {x^2/4 + y^2/16 = 1}`, counter-clockwise.
pub fn gamma(samples: usize) -> Result<ClosedCurve> {
    ellipse(2.0, 4.0, samples)
}

/// `R gamma = {x^2/16 + y^2/4 = 1} = {rho = 3}`.
pub fn r_gamma(samples: usize) -> Result<ClosedCurve> {
    ellipse(4.0, 2.0, samples)
}

fn ellipse(a: f64, b: f64, samples: usize) -> Result<ClosedCurve> {
    ClosedCurve::from_parametrization(
        Arc::new(move |t| {
            let (s, c) = libm::sincos(t);
            AnnulusPoint::new(a * c, b * s)
        }),
        samples,
        DEFAULT_CHORD_BOUND,
    )
}

/// The four vertices of `gamma` in frame coordinates.
pub fn gamma_vertices() -> [FramePoint; 4] {
    let pi = core::f64::consts::PI;
    [
        frame(1.4, 0.0),
        frame(1.4, pi),
        frame(4.6, 0.5 * pi),
        frame(4.6, 1.5 * pi),
    ]
}

fn frame(rho: f64, theta: f64) -> FramePoint {
    FramePoint::new(rho, theta).expect("vertex inside the frame")
}

/// `x^2/4 + y^2/16`; below one exactly inside `gamma`.
pub fn gamma_level(p: AnnulusPoint) -> f64 {
    p.x() * p.x() / 4.0 + p.y() * p.y() / 16.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub resolution: usize,
    /// Each sample of the `S`-images is displaced by this distance before
    /// the containment tests.
    pub perturbation: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { resolution: DEFAULT_RESOLUTION, perturbation: 0.0 }
    }
}

/// Certifies that `RS` displaces both `R gamma` and `delta`.
///
/// Emits four reports, in order: `delta` strictly inside `gamma`,
/// `RS(R gamma)` strictly inside `R gamma`, `RS(delta)` strictly outside
/// `delta`, and the images of the four vertices of `gamma` strictly inside
/// `gamma`. A curve passes as "strictly inside" when every sample is inside
/// and the polylines are separated by more than ten times their refinement
/// bound.
pub fn verify_counterexample(params: ShearParams, resolution: usize) -> Result<Vec<CheckReport>> {
    verify_counterexample_with(params, VerifyOptions { resolution, ..VerifyOptions::default() })
}

pub fn verify_counterexample_with(params: ShearParams, opts: VerifyOptions) -> Result<Vec<CheckReport>> {
    if opts.resolution < MIN_RESOLUTION {
        return Err(domain!("resolution {} below the minimum {MIN_RESOLUTION}", opts.resolution));
    }
    let g = AnnulusMap::shear(params);
    let rs = AnnulusMap::rotation_after_s(params);
    let gam = gamma(opts.resolution)?;
    let rgam = r_gamma(opts.resolution)?;
    let delta = push_curve(&g, &gam)?;
    let jitter = |c: ClosedCurve| -> Result<ClosedCurve> {
        if opts.perturbation == 0.0 {
            return Ok(c);
        }
        // golden-angle directions: deterministic and well spread
        let golden = core::f64::consts::PI * (3.0 - libm::sqrt(5.0));
        c.perturbed(|i| {
            let (s, co) = libm::sincos(golden * i as f64);
            Vec2::new(opts.perturbation * co, opts.perturbation * s)
        })
    };
    let rs_rgam = jitter(push_curve(&rs, &rgam)?)?;
    let rs_delta = jitter(push_curve(&rs, &delta)?)?;

    let tag = |r: CheckReport| {
        r.param("eps1", params.eps1)
            .param("eps2", params.eps2)
            .param("resolution", opts.resolution)
            .param("perturbation", opts.perturbation)
    };
    let mut reports = Vec::with_capacity(4);

    let mut analytic_max: f64 = 0.0;
    for p in delta.samples() {
        analytic_max = analytic_max.max(gamma_level(*p));
    }
    reports.push(tag(strictly_nested("annulus.delta_inside_gamma", &delta, &gam, true))
        .param("max_gamma_level", analytic_max));
    if analytic_max >= 1.0 {
        let last = reports.last_mut().expect("just pushed");
        *last = tag(CheckReport::holds("annulus.delta_inside_gamma", false))
            .param("max_gamma_level", analytic_max)
            .note("a sample of delta satisfies x^2/4 + y^2/16 >= 1");
    }
    reports.push(tag(strictly_nested("annulus.rs_r_gamma_inside_r_gamma", &rs_rgam, &rgam, true)));
    reports.push(tag(strictly_nested("annulus.rs_delta_outside_delta", &rs_delta, &delta, false)));

    let mut vertex_margin = f64::INFINITY;
    for v in gamma_vertices() {
        let image = g.apply(frame_to_cartesian(v)?)?;
        vertex_margin = vertex_margin.min(1.0 - gamma_level(image));
    }
    reports.push(
        tag(CheckReport::exceeds("annulus.vertices_move_inward", vertex_margin, 0.0))
            .note("min over the four vertices of 1 - (x^2/4 + y^2/16) at their G-images"),
    );
    Ok(reports)
}

/// Every sample of `moving` lies inside (or, with `inside = false`, outside)
/// `fixed`, and the two polylines are more than ten refinement bounds apart.
fn strictly_nested(id: &str, moving: &ClosedCurve, fixed: &ClosedCurve, inside: bool) -> CheckReport {
    let bound = 10.0 * moving.refinement_bound().max(fixed.refinement_bound());
    let mut wrong_side = 0usize;
    for &p in moving.samples() {
        match inside_curve(p, fixed) {
            Ok(v) if v == inside => {}
            Ok(_) => wrong_side += 1,
            Err(Error::Indeterminate(msg)) => return CheckReport::indeterminate(id, msg),
            Err(e) => return CheckReport::holds(id, false).note(format!("{e}")),
        }
    }
    let sep = min_separation(moving, fixed);
    let side = if inside { "inside" } else { "outside" };
    if wrong_side > 0 {
        return CheckReport::holds(id, false)
            .param("samples_wrong_side", wrong_side)
            .param("min_separation", sep)
            .note(format!("{wrong_side} samples are not {side}"));
    }
    CheckReport::exceeds(id, sep, bound)
        .param("samples", moving.len())
        .param("refinement_bound", bound / 10.0)
        .param("max_chord", moving.max_chord().max(fixed.max_chord()))
        .note(format!("all samples {side}; margin is the polyline separation, tolerance ten refinement bounds"))
}

/// `max_i |S^4(p_i) - p_i|`.
pub fn s_fourth_power_residual(params: ShearParams, points: &[AnnulusPoint]) -> Result<f64> {
    let s = AnnulusMap::conjugated_rotation(params);
    let mut worst: f64 = 0.0;
    for &p in points {
        let mut q = p;
        for _ in 0..4 {
            q = s.apply_unchecked(q)?;
        }
        worst = worst.max(q.distance(&p));
    }
    Ok(worst)
}

/// `max_i |S(p_i) - R(p_i)|`.
pub fn distance_s_to_r(params: ShearParams, points: &[AnnulusPoint]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &p in points {
        let s = apply_S(params, p)?;
        let r = AnnulusMap::RotationQuarter.apply_unchecked(p)?;
        worst = worst.max(s.distance(&r));
    }
    Ok(worst)
}

/// The minimum of `P'` over `[1, 5]` and the interior local minimum, each
/// located by a grid scan refined with golden-section search.
pub fn radial_profile_derivative_minima(grid: usize) -> (f64, f64, f64, f64) {
    let (x_glob, v_glob) = crate::roots::grid_min(radial_profile_prime, RHO_MIN, RHO_MAX, grid);
    // the interior local minimum sits right of rho = 3, where P'' vanishes
    let (x_loc, v_loc) = crate::roots::grid_min(radial_profile_prime, 3.0, RHO_MAX - 0.5, grid);
    (x_glob, v_glob, x_loc, v_loc)
}

/// `n_rho` radii spanning `[1, 5]` times `n_theta` equally spaced angles.
pub fn frame_grid(n_rho: usize, n_theta: usize) -> Vec<FramePoint> {
    let mut out = Vec::with_capacity(n_rho * n_theta);
    for i in 0..n_rho {
        let rho = RHO_MIN + (RHO_MAX - RHO_MIN) * i as f64 / (n_rho - 1) as f64;
        for j in 0..n_theta {
            out.push(frame(rho, TAU * j as f64 / n_theta as f64));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    fn pt(x: f64, y: f64) -> AnnulusPoint {
        AnnulusPoint::new(x, y).unwrap()
    }

    fn paper_params() -> ShearParams {
        ShearParams::new(0.05, 0.4).unwrap()
    }

    #[test]
    fn rotation_quarter() {
        let q = AnnulusMap::RotationQuarter.apply(pt(4.0, 0.0)).unwrap();
        assert!(q.x().abs() < 1e-15 && (q.y() - 4.0).abs() < 1e-15);
        let back = AnnulusMap::RotationQuarter.inverse().apply(q).unwrap();
        assert!((back.x() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn shear_fixes_top_of_r_gamma() {
        let g = AnnulusMap::shear(paper_params());
        let p = frame_to_cartesian(frame(3.0, FRAC_PI_2)).unwrap();
        let q = g.apply(p).unwrap();
        assert!(q.distance(&p) < 1e-12);
    }

    #[test]
    fn radial_shear_value() {
        // P(2) = 1 * 1 * (-3) = -3
        assert_eq!(radial_profile(2.0), -3.0);
        let g = AnnulusMap::shear(ShearParams::new(0.05, 0.4).unwrap());
        let q = g.apply(frame_to_cartesian(frame(2.0, 0.0)).unwrap()).unwrap();
        let fp = cartesian_to_frame(q, 1e-10).unwrap();
        assert!((fp.rho() - 1.85).abs() < 1e-10);
        assert!(fp.theta().abs() < 1e-10 || (fp.theta() - TAU).abs() < 1e-10);
    }

    #[test]
    fn parameter_violations() {
        assert!(matches!(ShearParams::new(0.2, 0.1), Err(Error::Configuration(_))));
        assert!(matches!(ShearParams::new(0.01, 0.5), Err(Error::Configuration(_))));
        assert!(matches!(ShearParams::new(0.0, 0.1), Err(Error::Configuration(_))));
        let bad = AnnulusMap::RadialShear(0.1);
        assert!(matches!(bad.apply(pt(3.0, 0.0)), Err(Error::Configuration(_))));
    }

    #[test]
    fn double_inverse_collapses() {
        let g = AnnulusMap::shear(paper_params());
        assert_eq!(g.inverse().inverse(), g);
    }

    #[test]
    fn inverse_shears_round_trip() {
        for &r in &[1.0, 1.3, 2.9, 3.0, 4.2, 5.0] {
            let back = inverse_radial_shear(0.06, radial_shear(0.06, r)).unwrap();
            assert!((back - r).abs() < 1e-13, "{r} -> {back}");
        }
        for &t in &[0.0, 0.3, PI, 4.0, 6.2] {
            let back = inverse_angular_shear(0.45, angular_shear(0.45, t)).unwrap();
            assert!((back - t).abs() < 1e-13);
        }
    }

    #[test]
    fn s_swaps_r_gamma_and_delta() {
        use crate::geometry::hausdorff_distance;
        let params = paper_params();
        let s = AnnulusMap::conjugated_rotation(params);
        let delta = push_curve(&AnnulusMap::shear(params), &gamma(512).unwrap()).unwrap();
        let rgam = r_gamma(512).unwrap();
        let s_rgam = push_curve(&s, &rgam).unwrap();
        let s_delta = push_curve(&s, &delta).unwrap();
        assert!(hausdorff_distance(&s_rgam, &delta) < 1e-4);
        assert!(hausdorff_distance(&s_delta, &rgam) < 1e-4);
    }

    #[test]
    fn s_converges_to_r() {
        let params = ShearParams::new(1e-6, 1e-6).unwrap();
        let pts: Vec<_> = frame_grid(9, 16).into_iter().map(|f| frame_to_cartesian(f).unwrap()).collect();
        assert!(distance_s_to_r(params, &pts).unwrap() < 1e-4);
    }

    #[test]
    fn resolution_floor() {
        assert!(matches!(verify_counterexample(paper_params(), 100), Err(Error::Domain(_))));
    }

    #[test]
    fn paper_parameters_pass() {
        let reports = verify_counterexample(paper_params(), 512).unwrap();
        assert_eq!(reports.len(), 4);
        for r in &reports {
            assert!(r.passed(), "{r:?}");
        }
    }
}
