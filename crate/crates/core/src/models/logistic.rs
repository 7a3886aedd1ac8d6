//! Asymmetric logistic dependence: stable tail dependence function
//! `l(x1, x2) = (1 - psi1) x1 + (1 - psi2) x2 + ((psi1 x1)^r + (psi2 x2)^r)^(1/r)`.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::stable::log_positive_stable;
use crate::error::{Error, Result};
use crate::norm::{sin_cos, NormOrder};

pub(crate) fn check_params(r: f64, psi1: f64, psi2: f64) -> Result<()> {
    if !(r >= 1.0 && r.is_finite()) {
        return Err(Error::Parameter(format!(
            "logistic r must be finite and >= 1, got {r}"
        )));
    }
    for (name, v) in [("psi1", psi1), ("psi2", psi2)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Parameter(format!(
                "{name} must lie in [0, 1], got {v}"
            )));
        }
    }
    Ok(())
}

pub fn logistic_stdf(x1: f64, x2: f64, r: f64, psi1: f64, psi2: f64) -> Result<f64> {
    check_params(r, psi1, psi2)?;
    if !(x1 >= 0.0 && x2 >= 0.0) {
        return Err(Error::Parameter(format!(
            "stdf arguments must be >= 0, got ({x1}, {x2})"
        )));
    }
    let joint = NormOrder::finite(r)?.norm(psi1 * x1, psi2 * x2);
    Ok((1.0 - psi1) * x1 + (1.0 - psi2) * x2 + joint)
}

/// Interior density of the spectral measure for the L_p norm, `r > 1`:
///
/// ```text
/// (r - 1) (psi1 psi2)^r ||(sin, cos)||_p (sin cos)^(r-2) ((psi1 cos)^r + (psi2 sin)^r)^(1/r - 2)
/// ```
///
/// This is `||.||_p / ||.||_1` times the L_1 density `A''(w) dw/dtheta` of the
/// Pickands function `A(v) = l(1 - v, v)`; its L_1 interior mass is `psi1 + psi2`.
pub fn asym_logistic_spectral_density(
    theta: f64,
    r: f64,
    psi1: f64,
    psi2: f64,
    norm: NormOrder,
) -> Result<f64> {
    check_params(r, psi1, psi2)?;
    if r == 1.0 {
        return Err(Error::Parameter("density requires r > 1".into()));
    }
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain {
            what: "spectral density",
            detail: format!("theta = {theta}"),
        });
    }
    Ok(density_unchecked(theta, r, psi1, psi2, norm))
}

pub(crate) fn density_unchecked(theta: f64, r: f64, psi1: f64, psi2: f64, norm: NormOrder) -> f64 {
    let lead = (psi1 * psi2).powf(r);
    if lead == 0.0 {
        return 0.0;
    }
    let (s, c) = sin_cos(theta);
    (r - 1.0)
        * lead
        * norm.norm(s, c)
        * (s * c).powf(r - 2.0)
        * ((psi1 * c).powf(r) + (psi2 * s).powf(r)).powf(1.0 / r - 2.0)
}

/// Interior mass of the L_1 spectral measure on `(0, theta]`, in closed form.
///
/// With `A(v) = l(1 - v, v)` and `H([0, w]) = 1 + A'(w)` on `(0, 1)`, the
/// interior part is `psi1 + T(w)` where `w = sin/(sin + cos)` and
/// `T(w) = S^(1/r - 1) (psi2^r w^(r-1) - psi1^r (1-w)^(r-1))`,
/// `S = (psi1 (1-w))^r + (psi2 w)^r`. Requires `r > 1` and `psi1 psi2 > 0`.
pub(crate) fn l1_interior_cdf(theta: f64, r: f64, psi1: f64, psi2: f64) -> f64 {
    if theta <= 0.0 {
        return 0.0;
    }
    let (s, c) = sin_cos(theta);
    let w = s / (s + c);
    let v = 1.0 - w;
    let big = (psi1 * v).powf(r) + (psi2 * w).powf(r);
    let t =
        big.powf(1.0 / r - 1.0) * (psi2.powf(r) * w.powf(r - 1.0) - psi1.powf(r) * v.powf(r - 1.0));
    (psi1 + t).clamp(0.0, psi1 + psi2)
}

/// `n` draws from `exp(-(x^-r + y^-r)^(1/r))` with unit-Frechet margins.
///
/// `V_j = (S / E_j)^(1/r)` with `S` positive stable of index `1/r` and
/// independent unit exponentials `E_j`.
pub(crate) fn sample_logistic<R: Rng + ?Sized>(n: usize, r: f64, rng: &mut R) -> Vec<[f64; 2]> {
    let alpha = 1.0 / r;
    (0..n)
        .map(|_| {
            let log_s = log_positive_stable(alpha, rng);
            let e1: f64 = Exp1.sample(rng);
            let e2: f64 = Exp1.sample(rng);
            [((log_s - e1.ln()) / r).exp(), ((log_s - e2.ln()) / r).exp()]
        })
        .collect()
}

pub(crate) fn logistic_joint_cdf(x: f64, y: f64, r: f64) -> f64 {
    if x <= 0.0 || y <= 0.0 {
        return 0.0;
    }
    (-NormOrder::Finite(r).norm(1.0 / x, 1.0 / y)).exp()
}
