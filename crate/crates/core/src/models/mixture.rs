//! Mixture of independence and a dependent Pareto(1) law:
//! `F(x, y) = (1 - 1/x)(1 - 1/y)(1 + r/(x + y))` on `[1, inf)^2`.

use rand::Rng;
use rand_distr::{Distribution, Open01};

use crate::norm::sin_cos;

/// Interior L_1 mass on `(0, theta]`: `2r int_0^theta dt / (1 + sin 2t) = 2r sin/(sin + cos)`.
pub(crate) fn l1_interior_cdf(theta: f64, r: f64) -> f64 {
    let (s, c) = sin_cos(theta);
    2.0 * r * s / (s + c)
}

/// `P(Y > y | X = x)` for the dependent component, `y >= 1`.
pub(crate) fn conditional_survival(y: f64, x: f64) -> f64 {
    let s = x + y;
    ((x * x + 1.0) * y + 2.0 * x) / (y * s * s)
}

fn conditional_quantile(v: f64, x: f64) -> f64 {
    let mut lo = 1.0;
    let mut hi = 2.0;
    while conditional_survival(hi, x) > v {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if conditional_survival(mid, x) > v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub(crate) fn sample_mixture<R: Rng + ?Sized>(n: usize, r: f64, rng: &mut R) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| {
            let dependent = rng.random::<f64>() < r;
            let u1: f64 = Open01.sample(rng);
            let u2: f64 = Open01.sample(rng);
            let x = 1.0 / u1;
            if dependent {
                [x, conditional_quantile(u2, x)]
            } else {
                [x, 1.0 / u2]
            }
        })
        .collect()
}

pub(crate) fn mixture_joint_cdf(x: f64, y: f64, r: f64) -> f64 {
    if x <= 1.0 || y <= 1.0 {
        return 0.0;
    }
    if x.is_infinite() || y.is_infinite() {
        return mixture_marginal_cdf(x.min(y));
    }
    (1.0 - 1.0 / x) * (1.0 - 1.0 / y) * (1.0 + r / (x + y))
}

pub(crate) fn mixture_marginal_cdf(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        1.0 - 1.0 / x
    }
}

pub(crate) fn mixture_marginal_quantile(q: f64) -> f64 {
    1.0 / (1.0 - q)
}
