use crate::error::{domain, Result};

use super::{is_unit_mu, Family};

/// First integral `H` on `{y > 0}`; its level set `H = a` is the invariant
/// curve with parameter `a`.
///
/// - F1, mu != 1: `(x^2 - y^2/(1 - mu)) y^(-2/mu)`
/// - F1, mu = 1:  `x^2/y^2 + 2 ln y`
/// - F2, mu != 1: `(x^2 - y^2/(mu - 1)) y^(-2/mu)`
/// - F2, mu = 1:  `x^2/y^2 - 2 ln y`
pub fn first_integral(family: Family, mu: f64, x: f64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(domain!("first integral needs y > 0, got y = {y}"));
    }
    if !(mu > 0.0) {
        return Err(domain!("mu = {mu} must be positive"));
    }
    let x2 = x * x;
    let y2 = y * y;
    let h = match (family, is_unit_mu(mu)) {
        (Family::Linear, _) => return Err(domain!("the linear family has no first integral here")),
        (Family::F1, true) => x2 / y2 + 2.0 * libm::log(y),
        (Family::F2, true) => x2 / y2 - 2.0 * libm::log(y),
        (Family::F1, false) => (x2 - y2 / (1.0 - mu)) * libm::pow(y, -2.0 / mu),
        (Family::F2, false) => (x2 - y2 / (mu - 1.0)) * libm::pow(y, -2.0 / mu),
    };
    Ok(h)
}

/// `(H(kx, ky), predicted)` where the prediction comes from the homothety
/// law: `kappa H(x, y)` with `kappa = k^((2mu - 2)/mu)` for `mu != 1`, and
/// `H(x, y) + 2 ln k` (F1) or `H(x, y) - 2 ln k` (F2) for `mu = 1`.
pub fn homothety_check(family: Family, mu: f64, k: f64, x: f64, y: f64) -> Result<(f64, f64)> {
    if !(k > 0.0) {
        return Err(domain!("homothety ratio k = {k} must be positive"));
    }
    let h = first_integral(family, mu, x, y)?;
    let scaled = first_integral(family, mu, k * x, k * y)?;
    let predicted = match (family, is_unit_mu(mu)) {
        (Family::F1, true) => h + 2.0 * libm::log(k),
        (Family::F2, true) => h - 2.0 * libm::log(k),
        _ => libm::pow(k, (2.0 * mu - 2.0) / mu) * h,
    };
    Ok((scaled, predicted))
}
