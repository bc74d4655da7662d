use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumType {
    UnstableNode,
    UnstableDegenerateNode,
    UnstableFocus,
    Center,
    StableFocus,
    StableDegenerateNode,
    StableNode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eigenvalues {
    /// Real pair, larger first.
    Real(f64, f64),
    /// `re ± i im` with `im > 0`.
    Complex { re: f64, im: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearClassification {
    pub kind: EquilibriumType,
    pub eigenvalues: Eigenvalues,
    /// Discriminant `D(mu) = 3(3mu - 1)(mu - 3)`, forced to zero at the
    /// detected boundary values.
    pub discriminant: f64,
}

const BOUNDARY_REL_TOL: f64 = 1e-12;

fn near(mu: f64, target: f64) -> bool {
    (mu - target).abs() <= BOUNDARY_REL_TOL * target
}

/// Type of the origin for `x' = 3(x + y)`, `y' = -mu (4x + 3y)`.
///
/// The characteristic polynomial is `l^2 + 3(mu - 1) l + 3 mu`; the type is
/// read off the eigenvalues, whose product `3 mu` is always positive.
pub fn classify_linear(mu: f64) -> Result<LinearClassification> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(domain!("mu = {mu} must be positive"));
    }
    let trace = if near(mu, 1.0) { 0.0 } else { 3.0 * (1.0 - mu) };
    let discriminant = if near(mu, 1.0 / 3.0) || near(mu, 3.0) {
        0.0
    } else {
        3.0 * (3.0 * mu - 1.0) * (mu - 3.0)
    };
    let (kind, eigenvalues) = if discriminant > 0.0 {
        let r = libm::sqrt(discriminant);
        let ev = Eigenvalues::Real((trace + r) / 2.0, (trace - r) / 2.0);
        let kind = if trace > 0.0 { EquilibriumType::UnstableNode } else { EquilibriumType::StableNode };
        (kind, ev)
    } else if discriminant == 0.0 {
        let l = trace / 2.0;
        let kind = if l > 0.0 {
            EquilibriumType::UnstableDegenerateNode
        } else {
            EquilibriumType::StableDegenerateNode
        };
        (kind, Eigenvalues::Real(l, l))
    } else {
        let ev = Eigenvalues::Complex { re: trace / 2.0, im: libm::sqrt(-discriminant) / 2.0 };
        let kind = if trace > 0.0 {
            EquilibriumType::UnstableFocus
        } else if trace < 0.0 {
            EquilibriumType::StableFocus
        } else {
            EquilibriumType::Center
        };
        (kind, ev)
    };
    Ok(LinearClassification { kind, eigenvalues, discriminant })
}
