//! Positive stable variates with Laplace transform `exp(-t^alpha)`.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Open01};
use std::f64::consts::PI;

/// `ln S` for `S` positive stable with index `alpha` in `(0, 1]`, drawn with the
/// Chambers-Mallows-Stuck (Kanter) representation
///
/// ```text
/// S = sin(alpha U) / sin(U)^(1/alpha) * (sin((1 - alpha) U) / W)^((1 - alpha) / alpha)
/// ```
///
/// with `U ~ Uniform(0, pi)` and `W ~ Exp(1)`. Returned on the log scale since
/// `S` is heavy tailed. `alpha = 1` gives `S = 1`.
pub fn log_positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= 1.0);
    if alpha == 1.0 {
        return 0.0;
    }
    let u01: f64 = Open01.sample(rng);
    let u = PI * u01;
    let w: f64 = Exp1.sample(rng);
    (alpha * u).sin().ln() - u.sin().ln() / alpha
        + (1.0 - alpha) / alpha * (((1.0 - alpha) * u).sin().ln() - w.ln())
}
