use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{domain, Error, Result};

use super::frame::{canonical_angle, AnnulusPoint};
use super::TAU;

/// Parametrization `t in [0, 2π) -> M` of a closed curve.
pub type Parametrization = Arc<dyn Fn(f64) -> Result<AnnulusPoint> + Send + Sync>;

/// Plain planar vector used by the polyline geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }

    fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }
}

impl From<AnnulusPoint> for Vec2 {
    fn from(p: AnnulusPoint) -> Self {
        Vec2::new(p.x(), p.y())
    }
}

/// Refinement never halves a parameter interval more often than this.
const MAX_REFINE_DEPTH: u32 = 24;

/// Floor for the reported refinement bound, so that exact polylines still
/// have a positive indeterminacy radius.
const MIN_REFINEMENT_BOUND: f64 = 1e-12;

/// A closed polyline sampling a curve that winds once around the origin.
///
/// Samples are ordered cyclically; the last sample connects back to the
/// first. Consecutive samples are at most `chord_bound` apart. The
/// refinement bound is the largest distance between a segment and the curve
/// point at the segment's parameter midpoint.
#[derive(Clone)]
pub struct ClosedCurve {
    samples: Vec<AnnulusPoint>,
    params: Vec<f64>,
    chord_bound: f64,
    max_chord: f64,
    deviation: f64,
    source: Parametrization,
}

impl fmt::Debug for ClosedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedCurve")
            .field("len", &self.samples.len())
            .field("chord_bound", &self.chord_bound)
            .field("max_chord", &self.max_chord)
            .field("deviation", &self.deviation)
            .finish()
    }
}

impl ClosedCurve {
    /// Samples `source` at `n` equispaced parameters, then bisects every
    /// parameter interval whose chord exceeds `chord_bound`.
    pub fn from_parametrization(source: Parametrization, n: usize, chord_bound: f64) -> Result<Self> {
        if n < 3 {
            return Err(domain!("a closed curve needs at least 3 samples, got {n}"));
        }
        if !(chord_bound > 0.0) {
            return Err(domain!("chord bound must be positive, got {chord_bound}"));
        }
        let params: Vec<f64> = (0..n).map(|i| TAU * i as f64 / n as f64).collect();
        let samples = params.iter().map(|&t| source(t)).collect::<Result<Vec<_>>>()?;
        Self::assemble(source, params, samples, chord_bound)
    }

    /// Closed curve through the given polyline vertices, parametrized by
    /// normalized arclength with linear interpolation between vertices.
    pub fn from_polyline(points: Vec<AnnulusPoint>, chord_bound: f64) -> Result<Self> {
        if points.len() < 3 {
            return Err(domain!("a closed curve needs at least 3 samples, got {}", points.len()));
        }
        let n = points.len();
        let mut cumulative = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for i in 0..n {
            acc += points[i].distance(&points[(i + 1) % n]);
            cumulative.push(acc);
        }
        if !(acc > 0.0) {
            return Err(domain!("degenerate polyline"));
        }
        let params: Vec<f64> = cumulative[..n].iter().map(|s| TAU * s / acc).collect();
        let knots: Arc<(Vec<AnnulusPoint>, Vec<f64>)> = Arc::new((points.clone(), params.clone()));
        let source: Parametrization = Arc::new(move |t: f64| {
            let (pts, ts) = &*knots;
            let t = canonical_angle(t);
            let i = match ts.binary_search_by(|v| v.total_cmp(&t)) {
                Ok(i) => return Ok(pts[i]),
                Err(i) => i - 1,
            };
            let j = (i + 1) % pts.len();
            let t1 = if j == 0 { TAU } else { ts[j] };
            let w = (t - ts[i]) / (t1 - ts[i]);
            AnnulusPoint::new(
                pts[i].x() + w * (pts[j].x() - pts[i].x()),
                pts[i].y() + w * (pts[j].y() - pts[i].y()),
            )
        });
        Self::assemble(source, params, points, chord_bound)
    }

    fn assemble(
        source: Parametrization,
        params: Vec<f64>,
        samples: Vec<AnnulusPoint>,
        chord_bound: f64,
    ) -> Result<Self> {
        let (params, samples) = refine(&source, params, samples, chord_bound)?;
        let n = samples.len();
        let mut max_chord: f64 = 0.0;
        let mut deviation: f64 = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            let (a, b) = (Vec2::from(samples[i]), Vec2::from(samples[j]));
            max_chord = max_chord.max(b.sub(a).norm());
            let t_end = if j == 0 { TAU } else { params[j] };
            let mid = Vec2::from(source(0.5 * (params[i] + t_end))?);
            deviation = deviation.max(point_segment_distance(mid, a, b));
        }
        let curve = ClosedCurve { samples, params, chord_bound, max_chord, deviation, source };
        let w = curve.winding_number();
        if w != 1 {
            return Err(domain!("curve winds {w} times around the origin, expected 1"));
        }
        Ok(curve)
    }

    /// Image of this curve under `map`: the existing samples are mapped one by
    /// one, then the result is re-refined to the same chord bound.
    pub fn pushed<F>(&self, map: F) -> Result<ClosedCurve>
    where
        F: Fn(AnnulusPoint) -> Result<AnnulusPoint> + Send + Sync + 'static,
    {
        let map = Arc::new(map);
        let samples = self.samples.iter().map(|&p| map(p)).collect::<Result<Vec<_>>>()?;
        let inner = self.source.clone();
        let source: Parametrization = Arc::new(move |t| map(inner(t)?));
        Self::assemble(source, self.params.clone(), samples, self.chord_bound)
    }

    /// Same curve with each sample displaced by `offset(i)`. The displaced
    /// polyline becomes the curve itself.
    pub fn perturbed<F>(&self, offset: F) -> Result<ClosedCurve>
    where
        F: Fn(usize) -> Vec2,
    {
        let pts = self
            .samples
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d = offset(i);
                AnnulusPoint::new(p.x() + d.x, p.y() + d.y)
            })
            .collect::<Result<Vec<_>>>()?;
        ClosedCurve::from_polyline(pts, self.chord_bound)
    }

    pub fn samples(&self) -> &[AnnulusPoint] {
        &self.samples
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn chord_bound(&self) -> f64 {
        self.chord_bound
    }

    pub fn max_chord(&self) -> f64 {
        self.max_chord
    }

    /// Distance within which the polyline cannot stand in for the curve.
    pub fn refinement_bound(&self) -> f64 {
        self.deviation.max(MIN_REFINEMENT_BOUND)
    }

    pub fn eval(&self, t: f64) -> Result<AnnulusPoint> {
        (self.source)(t)
    }

    /// Winding number of the polyline around the origin.
    pub fn winding_number(&self) -> i64 {
        let n = self.samples.len();
        let mut total = 0.0;
        for i in 0..n {
            let a = self.samples[i];
            let b = self.samples[(i + 1) % n];
            let d = libm::atan2(a.x() * b.y() - a.y() * b.x(), a.x() * b.x() + a.y() * b.y());
            total += d;
        }
        libm::round(total / TAU) as i64
    }

    fn segments(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.samples.len();
        (0..n).map(move |i| (self.samples[i].into(), self.samples[(i + 1) % n].into()))
    }
}

fn refine(
    source: &Parametrization,
    params: Vec<f64>,
    samples: Vec<AnnulusPoint>,
    chord_bound: f64,
) -> Result<(Vec<f64>, Vec<AnnulusPoint>)> {
    let n = samples.len();
    let mut out_t = Vec::with_capacity(n);
    let mut out_p = Vec::with_capacity(n);
    for i in 0..n {
        let j = (i + 1) % n;
        let t_end = if j == 0 { TAU } else { params[j] };
        out_t.push(params[i]);
        out_p.push(samples[i]);
        subdivide(source, (params[i], samples[i]), (t_end, samples[j]), chord_bound, 0, &mut out_t, &mut out_p)?;
    }
    Ok((out_t, out_p))
}

fn subdivide(
    source: &Parametrization,
    (t0, p0): (f64, AnnulusPoint),
    (t1, p1): (f64, AnnulusPoint),
    chord_bound: f64,
    depth: u32,
    out_t: &mut Vec<f64>,
    out_p: &mut Vec<AnnulusPoint>,
) -> Result<()> {
    if p0.distance(&p1) <= chord_bound {
        return Ok(());
    }
    if depth >= MAX_REFINE_DEPTH {
        return Err(Error::Numerical(format!(
            "refinement stalled between t = {t0} and t = {t1}; curve may be discontinuous"
        )));
    }
    let tm = 0.5 * (t0 + t1);
    let pm = source(tm)?;
    subdivide(source, (t0, p0), (tm, pm), chord_bound, depth + 1, out_t, out_p)?;
    out_t.push(tm);
    out_p.push(pm);
    subdivide(source, (tm, pm), (t1, p1), chord_bound, depth + 1, out_t, out_p)
}

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b.sub(a);
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.sub(a).norm();
    }
    let s = (p.sub(a).dot(ab) / len2).clamp(0.0, 1.0);
    p.sub(Vec2::new(a.x + s * ab.x, a.y + s * ab.y)).norm()
}

fn segments_cross(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> bool {
    let d1 = b1.sub(b0).cross(a0.sub(b0));
    let d2 = b1.sub(b0).cross(a1.sub(b0));
    let d3 = a1.sub(a0).cross(b0.sub(a0));
    let d4 = a1.sub(a0).cross(b1.sub(a0));
    // touching and collinear cases are caught by the endpoint distances
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn segment_distance(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> f64 {
    if segments_cross(a0, a1, b0, b1) {
        return 0.0;
    }
    point_segment_distance(a0, b0, b1)
        .min(point_segment_distance(a1, b0, b1))
        .min(point_segment_distance(b0, a0, a1))
        .min(point_segment_distance(b1, a0, a1))
}

#[derive(Clone, Copy)]
struct Aabb {
    lo: Vec2,
    hi: Vec2,
}

impl Aabb {
    fn of(a: Vec2, b: Vec2) -> Self {
        Aabb {
            lo: Vec2::new(a.x.min(b.x), a.y.min(b.y)),
            hi: Vec2::new(a.x.max(b.x), a.y.max(b.y)),
        }
    }

    fn distance(&self, o: &Aabb) -> f64 {
        let dx = (o.lo.x - self.hi.x).max(self.lo.x - o.hi.x).max(0.0);
        let dy = (o.lo.y - self.hi.y).max(self.lo.y - o.hi.y).max(0.0);
        libm::hypot(dx, dy)
    }
}

/// Distance from `p` to the closed polyline through `pts`.
pub fn point_polyline_distance(p: Vec2, pts: &[AnnulusPoint]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|i| point_segment_distance(p, pts[i].into(), pts[(i + 1) % n].into()))
        .fold(f64::INFINITY, f64::min)
}

/// Whether `pt` lies in the component of `M \ c` that contains the inner
/// boundary circle.
///
/// Decided by even-odd ray casting against the polyline. Points closer to
/// the polyline than its refinement bound are reported as indeterminate.
pub fn inside_curve(pt: AnnulusPoint, c: &ClosedCurve) -> Result<bool> {
    let p = Vec2::from(pt);
    let d = point_polyline_distance(p, c.samples());
    if !(d > c.refinement_bound()) {
        return Err(Error::Indeterminate(format!(
            "point ({}, {}) is {d:e} from the curve, within its refinement bound {:e}",
            pt.x(),
            pt.y(),
            c.refinement_bound()
        )));
    }
    let mut inside = false;
    for (a, b) in c.segments() {
        if (a.y > p.y) != (b.y > p.y) {
            let x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x_cross {
                inside = !inside;
            }
        }
    }
    Ok(inside)
}

/// Minimum Euclidean distance between two closed polylines; zero iff they
/// touch or cross.
pub fn min_separation(a: &ClosedCurve, b: &ClosedCurve) -> f64 {
    let bs: Vec<(Vec2, Vec2, Aabb)> = b.segments().map(|(p, q)| (p, q, Aabb::of(p, q))).collect();
    let mut best = f64::INFINITY;
    for (a0, a1) in a.segments() {
        let boxa = Aabb::of(a0, a1);
        for &(b0, b1, ref boxb) in &bs {
            if boxa.distance(boxb) >= best {
                continue;
            }
            let d = segment_distance(a0, a1, b0, b1);
            if d < best {
                best = d;
                if best == 0.0 {
                    return 0.0;
                }
            }
        }
    }
    best
}

/// Symmetric Hausdorff distance between the vertex sets of `a` and the
/// polyline of `b`, and vice versa.
pub fn hausdorff_distance(a: &ClosedCurve, b: &ClosedCurve) -> f64 {
    let one_way = |x: &ClosedCurve, y: &ClosedCurve| {
        x.samples()
            .iter()
            .map(|&p| point_polyline_distance(p.into(), y.samples()))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipse(a: f64, b: f64, n: usize) -> ClosedCurve {
        ClosedCurve::from_parametrization(
            Arc::new(move |t| AnnulusPoint::new(a * libm::cos(t), b * libm::sin(t))),
            n,
            super::super::DEFAULT_CHORD_BOUND,
        )
        .unwrap()
    }

    #[test]
    fn refinement_meets_chord_bound() {
        let c = ellipse(2.0, 4.0, 16);
        assert!(c.max_chord() <= c.chord_bound());
        assert!(c.len() > 16);
        assert!(c.params().windows(2).all(|w| w[0] < w[1]));
        assert!(c.refinement_bound() < 1e-4);
    }

    #[test]
    fn winding_must_be_one() {
        let cw = ClosedCurve::from_parametrization(
            Arc::new(|t: f64| AnnulusPoint::new(3.0 * libm::cos(t), -3.0 * libm::sin(t))),
            64,
            0.5,
        );
        assert!(matches!(cw, Err(Error::Domain(_))));
    }

    #[test]
    fn containment_examples() {
        let gamma = ellipse(2.0, 4.0, 512);
        assert!(inside_curve(AnnulusPoint::new(0.0, 1.5).unwrap(), &gamma).unwrap());
        assert!(!inside_curve(AnnulusPoint::new(3.0, 0.0).unwrap(), &gamma).unwrap());
        let on = gamma.samples()[7];
        assert!(matches!(inside_curve(on, &gamma), Err(Error::Indeterminate(_))));
    }

    #[test]
    fn identical_curves_touch() {
        let g = ellipse(2.0, 4.0, 256);
        assert_eq!(min_separation(&g, &g), 0.0);
    }

    #[test]
    fn nested_circles_separation() {
        let inner = ellipse(2.0, 2.0, 256);
        let outer = ellipse(3.0, 3.0, 256);
        let d = min_separation(&inner, &outer);
        assert!((d - 1.0).abs() < 1e-4, "{d}");
    }

    #[test]
    fn polyline_curve_interpolates() {
        let pts: Vec<_> = (0..4)
            .map(|i| {
                let t = TAU * i as f64 / 4.0;
                AnnulusPoint::new(3.0 * libm::cos(t), 3.0 * libm::sin(t)).unwrap()
            })
            .collect();
        let c = ClosedCurve::from_polyline(pts, 0.1).unwrap();
        assert!(c.max_chord() <= 0.1);
        let mid = c.eval(TAU / 8.0).unwrap();
        assert!((mid.x() - 1.5).abs() < 1e-12 && (mid.y() - 1.5).abs() < 1e-12);
        assert!(c.refinement_bound() <= 1e-12);
    }
}
