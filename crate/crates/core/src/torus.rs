//! A non-Lagrangian torus `L0 = {p = p0 + eps f(q1)}` in `T*T^n` with
//! `f = (sin^k q1, cos q1, 0, ..., 0)`, `k` in `{1, 3}`.
//!
//! The restricted symplectic form is `-eps sin q1 dq1 ∧ dq2`. `L0` misses the
//! torus `{p = p0}` and every rotated copy `{p = p0 + eps f(q1 - v1)}` with
//! `v1` not a multiple of 2π.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{config, domain, Result};
use crate::geometry::TAU;
use crate::report::CheckReport;
use crate::roots::{golden_section_min, periodic_max, periodic_min};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    One,
    Three,
}

impl Exponent {
    pub fn from_int(k: u32) -> Result<Self> {
        match k {
            1 => Ok(Exponent::One),
            3 => Ok(Exponent::Three),
            _ => Err(config!("exponent k = {k} must be 1 or 3")),
        }
    }

    pub fn value(self) -> u32 {
        match self {
            Exponent::One => 1,
            Exponent::Three => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusSpec {
    p0: Vec<f64>,
    eps: f64,
    k: Exponent,
}

impl TorusSpec {
    pub fn new(p0: Vec<f64>, eps: f64, k: Exponent) -> Result<Self> {
        if p0.len() < 2 {
            return Err(config!("torus dimension n = {} must be at least 2", p0.len()));
        }
        if eps == 0.0 || !eps.is_finite() {
            return Err(config!("amplitude eps = {eps} must be finite and non-zero"));
        }
        Ok(TorusSpec { p0, eps, k })
    }

    /// `p0 = 0` in dimension `n`.
    pub fn at_origin(n: usize, eps: f64, k: Exponent) -> Result<Self> {
        Self::new(vec![0.0; n], eps, k)
    }

    pub fn n(&self) -> usize {
        self.p0.len()
    }

    pub fn p0(&self) -> &[f64] {
        &self.p0
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn k(&self) -> Exponent {
        self.k
    }

    /// The two non-trivial profile components `(f1, f2)` at `q1`.
    pub fn profile(&self, q1: f64) -> (f64, f64) {
        let (s, c) = libm::sincos(q1);
        let f1 = match self.k {
            Exponent::One => s,
            Exponent::Three => s * s * s,
        };
        (f1, c)
    }

    /// `(f1', f2')` at `q1`.
    pub fn profile_derivative(&self, q1: f64) -> (f64, f64) {
        let (s, c) = libm::sincos(q1);
        let d1 = match self.k {
            Exponent::One => c,
            Exponent::Three => 3.0 * s * s * c,
        };
        (d1, -s)
    }

    fn check_len(&self, len: usize, what: &str) -> Result<()> {
        if len != self.n() {
            return Err(domain!("{what} has length {len}, torus dimension is {}", self.n()));
        }
        Ok(())
    }
}

/// Rotation `(p, q) -> (p, q + v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationSpec {
    pub v: Vec<f64>,
}

impl RotationSpec {
    pub fn new(v: Vec<f64>) -> Self {
        RotationSpec { v }
    }

    /// Rotation by `v1` along the first angle only, in dimension `n`.
    pub fn first_angle(n: usize, v1: f64) -> Self {
        let mut v = vec![0.0; n];
        v[0] = v1;
        RotationSpec { v }
    }

    pub fn v1(&self) -> f64 {
        self.v.first().copied().unwrap_or(0.0)
    }
}

/// Time-`t` flow of the constant Hamiltonian field `v ∂_q` (Hamiltonian `v·p`).
pub fn rotation_flow(rot: &RotationSpec, t: f64, p: &[f64], q: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let q = q.iter().zip(&rot.v).map(|(qi, vi)| qi + t * vi).collect();
    (p.to_vec(), q)
}

/// Antisymmetric matrix of a 2-form in the basis `dq_i ∧ dq_j` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct FormMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl FormMatrix {
    pub fn zeros(n: usize) -> Self {
        FormMatrix { n, entries: vec![0.0; n * n] }
    }

    /// Sets `(i, j)` to `v` and `(j, i)` to `-v`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = -v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn sup_norm(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &FormMatrix) -> f64 {
        self.entries.iter().zip(&other.entries).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

pub fn embed(spec: &TorusSpec, q: &[f64]) -> Result<Vec<f64>> {
    spec.check_len(q.len(), "angle vector")?;
    let (f1, f2) = spec.profile(q[0]);
    let mut p = spec.p0.clone();
    p[0] += spec.eps * f1;
    p[1] += spec.eps * f2;
    Ok(p)
}

/// `(dp ∧ dq)|_{L0} = -eps sin q1 dq1 ∧ dq2`.
pub fn pullback_form(spec: &TorusSpec, q: &[f64]) -> Result<FormMatrix> {
    spec.check_len(q.len(), "angle vector")?;
    let mut m = FormMatrix::zeros(spec.n());
    m.set(0, 1, -spec.eps * libm::sin(q[0]));
    Ok(m)
}

/// Pullback of `Σ dp_i ∧ dq_i` through a graph embedding `q -> (p(q), q)`,
/// with `∂p/∂q` from central differences of step `h`. Entry `(a, b)` is
/// `∂_a p_b - ∂_b p_a`.
pub fn finite_difference_pullback<F>(embedding: F, q: &[f64], h: f64) -> Result<FormMatrix>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = q.len();
    // jac[a][i] = ∂p_i / ∂q_a
    let mut jac = vec![vec![0.0; n]; n];
    let mut probe = q.to_vec();
    for a in 0..n {
        probe[a] = q[a] + h;
        let plus = embedding(&probe)?;
        probe[a] = q[a] - h;
        let minus = embedding(&probe)?;
        probe[a] = q[a];
        for i in 0..n {
            jac[a][i] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    let mut m = FormMatrix::zeros(n);
    #[allow(clippy::needless_range_loop)]
    for a in 0..n {
        for b in (a + 1)..n {
            m.set(a, b, jac[a][b] - jac[b][a]);
        }
    }
    Ok(m)
}

fn first_angle_vector(n: usize, q1: f64) -> Vec<f64> {
    let mut q = vec![0.0; n];
    q[0] = q1;
    q
}

/// Largest sup-norm of the restricted form over `q1`; positive means `L0` is
/// not Lagrangian.
pub fn lagrangian_defect(spec: &TorusSpec, grid_n: usize) -> Result<f64> {
    if grid_n < 8 {
        return Err(domain!("grid of {grid_n} points is below the minimum of 8"));
    }
    let n = spec.n();
    let (_, v) = periodic_max(
        |q1| pullback_form(spec, &first_angle_vector(n, q1)).map(|m| m.sup_norm()).unwrap_or(0.0),
        grid_n,
    );
    Ok(v)
}

/// `|eps| min_q1 |f(q1) - f(q1 - v1)|`; positive iff `R L0` misses `L0`.
pub fn displacement_margin(spec: &TorusSpec, rot: &RotationSpec, grid_n: usize) -> Result<f64> {
    if grid_n < 64 {
        return Err(domain!("grid of {grid_n} points is below the minimum of 64"));
    }
    spec.check_len(rot.v.len(), "rotation vector")?;
    let v1 = rot.v1();
    let (_, sq) = periodic_min(
        |q1| {
            let (a1, a2) = spec.profile(q1);
            let (b1, b2) = spec.profile(q1 - v1);
            (a1 - b1) * (a1 - b1) + (a2 - b2) * (a2 - b2)
        },
        grid_n,
    );
    Ok(spec.eps.abs() * libm::sqrt(sq.max(0.0)))
}

/// `|eps| min_q1 |f(q1)|`; positive iff `L0` misses `{p = p0}`.
pub fn zero_section_margin(spec: &TorusSpec, grid_n: usize) -> Result<f64> {
    if grid_n < 64 {
        return Err(domain!("grid of {grid_n} points is below the minimum of 64"));
    }
    let (_, sq) = periodic_min(
        |q1| {
            let (f1, f2) = spec.profile(q1);
            f1 * f1 + f2 * f2
        },
        grid_n,
    );
    Ok(spec.eps.abs() * libm::sqrt(sq.max(0.0)))
}

/// `|v1| |eps| |f'(q1)|`: the part of `v ∂_q` that no tangent vector of `L0`
/// can match. Zero exactly where the field is tangent.
pub fn rotation_tangency_residual(spec: &TorusSpec, rot: &RotationSpec, q1: f64) -> Result<f64> {
    spec.check_len(rot.v.len(), "rotation vector")?;
    let (d1, d2) = spec.profile_derivative(q1);
    Ok(rot.v1().abs() * spec.eps.abs() * libm::hypot(d1, d2))
}

/// Norm of `(eps a f1'(q1) - b cos q1, eps a f2'(q1))` for the Hamiltonian
/// field `a ∂_q1 + b cos q1 ∂_p1` (Hamiltonian `a p1 - b sin q1`). Only
/// defined for `k = 3`.
pub fn hamiltonian_tangency_residual(spec: &TorusSpec, a: f64, b: f64, q1: f64) -> Result<f64> {
    if spec.k != Exponent::Three {
        return Err(config!("the Hamiltonian field check is defined for k = 3 only"));
    }
    let (d1, d2) = spec.profile_derivative(q1);
    let e = spec.eps;
    Ok(libm::hypot(e * a * d1 - b * libm::cos(q1), e * a * d2))
}

/// Local minima of a non-negative 2π-periodic `g` that fall below
/// `threshold`, refined by golden-section search and sorted.
pub fn periodic_zeros<F>(g: F, grid_n: usize, threshold: f64) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    let h = TAU / grid_n as f64;
    let vals: Vec<f64> = (0..grid_n).map(|i| g(h * i as f64)).collect();
    let mut out: Vec<f64> = Vec::new();
    for i in 0..grid_n {
        let prev = vals[(i + grid_n - 1) % grid_n];
        let next = vals[(i + 1) % grid_n];
        if vals[i] <= prev && vals[i] < next {
            let x0 = h * i as f64;
            let (x, v) = golden_section_min(&g, x0 - h, x0 + h, 1e-14);
            if v < threshold {
                let x = crate::geometry::canonical_angle(x);
                let x = if TAU - x < 1e-9 { 0.0 } else { x };
                if !out.iter().any(|y| (y - x).abs() < 1e-6) {
                    out.push(x);
                }
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Angles `q1` where `v ∂_q` is tangent to `L0`.
pub fn tangency_locus(spec: &TorusSpec, rot: &RotationSpec, grid_n: usize) -> Result<Vec<f64>> {
    spec.check_len(rot.v.len(), "rotation vector")?;
    let scale = libm::pow(rot.v1() * spec.eps, 2.0);
    if scale == 0.0 {
        return Err(domain!("v1 = 0 or eps = 0: the field is tangent everywhere"));
    }
    Ok(periodic_zeros(
        |q| {
            let r = rotation_tangency_residual(spec, rot, q).unwrap_or(f64::INFINITY);
            r * r / scale
        },
        grid_n,
        1e-12,
    ))
}

/// Angles `q1` where the restricted symplectic form vanishes.
pub fn lagrangian_locus(spec: &TorusSpec, grid_n: usize) -> Vec<f64> {
    let n = spec.n();
    let scale = spec.eps * spec.eps;
    periodic_zeros(
        |q| {
            let m = pullback_form(spec, &first_angle_vector(n, q)).map(|m| m.sup_norm()).unwrap_or(f64::INFINITY);
            m * m / scale
        },
        grid_n,
        1e-12,
    )
}

/// Checks for one torus and one rotation.
pub fn verify_torus(spec: &TorusSpec, rot: &RotationSpec, grid_n: usize) -> Result<Vec<CheckReport>> {
    let k = spec.k.value() as f64;
    let tag = |r: CheckReport| {
        r.param("n", spec.n())
            .param("eps", spec.eps)
            .param("k", k)
            .param("v1", rot.v1())
            .param("gridn", grid_n)
    };
    let mut out = Vec::new();

    let defect = lagrangian_defect(spec, grid_n)?;
    out.push(tag(CheckReport::exceeds("torus.not_lagrangian", defect, 0.0))
        .note("max over q1 of the sup-norm of the restricted symplectic form"));
    out.push(tag(CheckReport::below("torus.defect_equals_eps", (defect - spec.eps.abs()).abs(), 1e-10)));

    let zs = zero_section_margin(spec, grid_n)?;
    out.push(tag(CheckReport::exceeds("torus.misses_base_torus", zs, 0.0))
        .note("|eps| min |f(q1)|: L0 does not meet {p = p0}"));

    let disp = displacement_margin(spec, rot, grid_n)?;
    let turns = rot.v1() / TAU;
    let multiple_of_tau = (turns - libm::round(turns)).abs() < 1e-12;
    if multiple_of_tau {
        out.push(tag(CheckReport::below("torus.rotation_displacement", disp, 1e-12))
            .note("v1 is a multiple of 2π: R L0 = L0"));
    } else {
        out.push(tag(CheckReport::exceeds("torus.rotation_displacement", disp, 0.0))
            .note("v1 is not a multiple of 2π: R L0 misses L0"));
    }

    let mut fd_worst: f64 = 0.0;
    let n = spec.n();
    for i in 0..16 {
        let mut q = vec![0.0; n];
        for (j, qj) in q.iter_mut().enumerate() {
            *qj = TAU * ((i * 7 + j * 3) % 16) as f64 / 16.0 + 0.1;
        }
        let analytic = pullback_form(spec, &q)?;
        let fd = finite_difference_pullback(|q| embed(spec, q), &q, 1e-5)?;
        fd_worst = fd_worst.max(analytic.max_abs_diff(&fd));
    }
    out.push(tag(CheckReport::below("torus.pullback_matches_finite_differences", fd_worst, 1e-6)));

    if rot.v1() != 0.0 {
        match spec.k {
            Exponent::One => {
                let expected = (rot.v1() * spec.eps).abs();
                let mut worst: f64 = 0.0;
                for i in 0..grid_n {
                    let q1 = TAU * i as f64 / grid_n as f64;
                    worst = worst.max((rotation_tangency_residual(spec, rot, q1)? - expected).abs());
                }
                out.push(tag(CheckReport::below("torus.rotation_nowhere_tangent", worst, 1e-12))
                    .note("k = 1: residual is the constant |v1 eps|"));
            }
            Exponent::Three => {
                let tangent = tangency_locus(spec, rot, grid_n)?;
                let flat = lagrangian_locus(spec, grid_n);
                let expected = [0.0, core::f64::consts::PI];
                let ok = tangent.len() == 2
                    && flat.len() == 2
                    && tangent.iter().zip(expected).all(|(t, e)| (t - e).abs() < 1e-6)
                    && tangent.iter().zip(&flat).all(|(t, f)| (t - f).abs() < 1e-6);
                out.push(tag(CheckReport::holds("torus.tangency_locus", ok))
                    .note(format!("tangent at q1 = {tangent:?}; form vanishes at q1 = {flat:?}")));

                let (a, b) = (1.0, 1.0);
                let (_, min) = periodic_min(
                    |q| hamiltonian_tangency_residual(spec, a, b, q).unwrap_or(0.0),
                    grid_n.max(10_000),
                );
                out.push(tag(CheckReport::exceeds("torus.hamiltonian_nowhere_tangent", min, 0.0))
                    .param("a", a)
                    .param("b", b)
                    .note("min over q1 of the tangency residual of a ∂_q1 + b cos q1 ∂_p1"));
            }
        }
    }
    Ok(out)
}
