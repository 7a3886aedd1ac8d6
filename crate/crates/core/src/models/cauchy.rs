//! Bivariate Cauchy laws: the spherically symmetric Cauchy on the plane and
//! its fold into the positive quadrant, density `(2/pi)(1 + x^2 + y^2)^(-3/2)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::norm::{sin_cos, NormOrder};

/// `int_0^theta ||(sin t, cos t)||_p dt` where a closed form exists.
pub(crate) fn quadrant_cdf_closed(theta: f64, norm: NormOrder) -> Option<f64> {
    let (s, c) = sin_cos(theta);
    match norm {
        NormOrder::Finite(1.0) => Some(1.0 - c + s),
        NormOrder::Finite(2.0) => Some(theta),
        NormOrder::Infinity => Some(if theta <= FRAC_PI_4 { s } else { SQRT_2 - c }),
        NormOrder::Finite(_) => None,
    }
}

pub(crate) fn sample_quadrant<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| {
            let [z0, z1, z2] = normals(rng);
            let r = z0.abs();
            [z1.abs() / r, z2.abs() / r]
        })
        .collect()
}

pub(crate) fn sample_fullplane<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| {
            let [z0, z1, z2] = normals(rng);
            let r = z0.abs();
            [z1 / r, z2 / r]
        })
        .collect()
}

fn normals<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let mut z = [0.0; 3];
    for v in &mut z {
        *v = StandardNormal.sample(rng);
    }
    z
}

/// `P(0 < X <= x, 0 < Y <= y)` for the planar law, `x, y >= 0`.
fn planar_quadrant_mass(x: f64, y: f64) -> f64 {
    if x == 0.0 || y == 0.0 {
        return 0.0;
    }
    if x.is_infinite() || y.is_infinite() {
        let m = x.min(y);
        return if m.is_infinite() {
            0.25
        } else {
            m.atan() / (2.0 * PI)
        };
    }
    (x * y / (1.0 + x * x + y * y).sqrt()).atan() / (2.0 * PI)
}

pub(crate) fn quadrant_joint_cdf(x: f64, y: f64) -> f64 {
    if x <= 0.0 || y <= 0.0 {
        return 0.0;
    }
    4.0 * planar_quadrant_mass(x, y)
}

pub(crate) fn fullplane_joint_cdf(x: f64, y: f64) -> f64 {
    let q = x.signum() * y.signum() * planar_quadrant_mass(x.abs(), y.abs());
    0.25 + (x.atan() + y.atan()) / (2.0 * PI) + q
}

pub(crate) fn quadrant_marginal_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.atan() / FRAC_PI_2
    }
}

pub(crate) fn quadrant_marginal_quantile(q: f64) -> f64 {
    (FRAC_PI_2 * q).tan()
}

pub(crate) fn fullplane_marginal_cdf(x: f64) -> f64 {
    0.5 + x.atan() / PI
}

pub(crate) fn fullplane_marginal_quantile(q: f64) -> f64 {
    (PI * (q - 0.5)).tan()
}
