//! L_p geometry on the positive quadrant.
//!
//! Angles follow the convention `theta = arctan(z1 / z2)`, so `theta = 0` is the
//! second coordinate axis and `theta = pi/2` the first. Every formula carries an
//! explicit branch for `p = inf`; the max-norm is never approximated by a large
//! finite exponent.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Order of an L_p norm, `p` in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormOrder {
    Finite(f64),
    Infinity,
}

impl NormOrder {
    pub const ONE: NormOrder = NormOrder::Finite(1.0);
    pub const TWO: NormOrder = NormOrder::Finite(2.0);

    /// Finite order `p >= 1`.
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Parameter(format!(
                "norm order must be >= 1, got {p}"
            )));
        }
        if p.is_infinite() {
            return Ok(NormOrder::Infinity);
        }
        Ok(NormOrder::Finite(p))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, NormOrder::Infinity)
    }

    /// The exponent as a float, `f64::INFINITY` for the max-norm.
    pub fn exponent(self) -> f64 {
        match self {
            NormOrder::Finite(p) => p,
            NormOrder::Infinity => f64::INFINITY,
        }
    }

    /// `||(a, b)||_p` for nonnegative finite components.
    pub fn norm(self, a: f64, b: f64) -> f64 {
        match self {
            NormOrder::Infinity => a.max(b),
            NormOrder::Finite(1.0) => a + b,
            NormOrder::Finite(2.0) => a.hypot(b),
            NormOrder::Finite(p) => {
                let m = a.max(b);
                if m == 0.0 {
                    return 0.0;
                }
                m * ((a / m).powf(p) + (b / m).powf(p)).powf(1.0 / p)
            }
        }
    }

    /// `||(sin theta, cos theta)||_p`.
    pub fn angular_norm(self, theta: f64) -> f64 {
        let (s, c) = sin_cos(theta);
        self.norm(s, c)
    }

    /// Angular score `f(theta) = (sin theta - cos theta) / ||(sin theta, cos theta)||_p`.
    ///
    /// Strictly increasing from `-1` at `0` to `+1` at `pi/2`; the moment
    /// constraint on a spectral probability measure is `int f dQ = 0`.
    pub fn score(self, theta: f64) -> f64 {
        if theta == 0.0 {
            return -1.0;
        }
        if theta == FRAC_PI_2 {
            return 1.0;
        }
        // sin - cos = sqrt(2) sin(theta - pi/4), exact zero on the diagonal
        let (s, c) = sin_cos(theta);
        SQRT_2 * (theta - FRAC_PI_4).sin() / self.norm(s, c)
    }

    /// Smallest `y >= 1` with `||(1/x, 1/y)||_p = 1`; infinite for `x <= 1`
    /// (except `p = inf`, where it is `1` from `x = 1` on).
    pub fn y_curve(self, x: f64) -> f64 {
        if x < 1.0 {
            return f64::INFINITY;
        }
        match self {
            NormOrder::Infinity => 1.0,
            NormOrder::Finite(p) => {
                if x == 1.0 {
                    return f64::INFINITY;
                }
                if x.is_infinite() {
                    return 1.0;
                }
                // x^p - 1 via exp_m1 keeps precision for x close to 1
                let d = (p * x.ln()).exp_m1();
                (1.0 + 1.0 / d).powf(1.0 / p)
            }
        }
    }

    /// `x_p(theta) = ||(1, cot theta)||_p`, infinite at `theta = 0`.
    pub fn x_boundary(self, theta: f64) -> f64 {
        if theta == 0.0 {
            return f64::INFINITY;
        }
        let (s, c) = sin_cos(theta);
        let cot = c / s;
        match self {
            NormOrder::Infinity => cot.max(1.0),
            NormOrder::Finite(_) => self.norm(1.0, cot),
        }
    }
}

impl fmt::Display for NormOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormOrder::Finite(p) => write!(f, "{p}"),
            NormOrder::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for NormOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(NormOrder::Infinity);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::Parameter(format!("cannot parse norm order {s:?}")))?;
        NormOrder::finite(p)
    }
}

/// `(sin theta, cos theta)` with the quadrant endpoints pinned to exact values.
pub fn sin_cos(theta: f64) -> (f64, f64) {
    if theta == 0.0 {
        (0.0, 1.0)
    } else if theta == FRAC_PI_2 {
        (1.0, 0.0)
    } else {
        theta.sin_cos()
    }
}
