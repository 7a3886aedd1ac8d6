//! Maximum empirical likelihood reweighting of the angular sample.
//!
//! The weights maximise `prod_i p_i` subject to `sum p_i = 1` and
//! `sum p_i f(theta_i) = 0`. By Lagrange duality `p_i = 1 / (N (1 + mu A_i))`
//! where `mu` is the root of
//!
//! ```text
//! Psi(mu) = (1/N) sum_i A_i / (1 + mu A_i)
//! ```
//!
//! on the interval where every `1 + mu A_i` is positive. `Psi` is strictly
//! decreasing there and diverges to `+inf` / `-inf` at the two ends, so the
//! root exists and is unique whenever the scores take both signs.

use crate::empirical::AngularSample;
use crate::error::{Error, Result};
use crate::measure::DiscreteSpectralMeasure;
use crate::norm::NormOrder;

/// Target for `|Psi(mu)|` at the returned multiplier.
pub const PSI_TOLERANCE: f64 = 1e-12;
/// Relative bracket width at termination, `width <= WIDTH_TOLERANCE * (1 + |mu|)`.
pub const WIDTH_TOLERANCE: f64 = 1e-14;
const MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierSolution {
    pub mu: f64,
    /// `|Psi(mu)|`.
    pub residual: f64,
    pub iterations: usize,
    /// `(-1/max A, -1/min A)`; infinite ends when all scores vanish.
    pub feasibility_interval: (f64, f64),
}

/// `Psi(mu)`; fails if some `1 + mu A_i <= 0`.
pub fn psi(mu: f64, scores: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &a in scores {
        let d = 1.0 + mu * a;
        if d <= 0.0 {
            return Err(Error::Domain {
                what: "Psi",
                detail: format!("1 + mu*A = {d} for mu = {mu}, A = {a}"),
            });
        }
        sum += a / d;
    }
    Ok(sum / scores.len() as f64)
}

/// `Psi` and its derivative, assuming `mu` is feasible.
fn psi_and_slope(mu: f64, scores: &[f64]) -> (f64, f64) {
    let mut v = 0.0;
    let mut d = 0.0;
    for &a in scores {
        let t = a / (1.0 + mu * a);
        v += t;
        d -= t * t;
    }
    let n = scores.len() as f64;
    (v / n, d / n)
}

/// Solves `Psi(mu) = 0` by Newton steps safeguarded with bisection.
pub fn solve_multiplier(scores: &[f64]) -> Result<MultiplierSolution> {
    if scores.is_empty() {
        return Err(Error::Parameter("empty score vector".into()));
    }
    let negative = scores.iter().filter(|&&a| a < 0.0).count();
    let positive = scores.iter().filter(|&&a| a > 0.0).count();
    let zero = scores.len() - negative - positive;
    if negative == 0 && positive == 0 {
        return Ok(MultiplierSolution {
            mu: 0.0,
            residual: 0.0,
            iterations: 0,
            feasibility_interval: (f64::NEG_INFINITY, f64::INFINITY),
        });
    }
    if negative == 0 || positive == 0 {
        return Err(Error::ConstraintInfeasible {
            negative,
            zero,
            positive,
        });
    }
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let (lo, hi) = (-1.0 / max, -1.0 / min);

    let feasible = |mu: f64| mu > lo && mu < hi && scores.iter().all(|&a| 1.0 + mu * a > 0.0);

    // first-order approximation sum A / sum A^2, pulled inside the interval
    let sum: f64 = scores.iter().sum();
    let sum_sq: f64 = scores.iter().map(|a| a * a).sum();
    let mut mu = sum / sum_sq;
    if !feasible(mu) {
        mu = if mu <= lo { 0.5 * lo } else { 0.5 * hi };
    }

    // Finite bracket [a, b] with Psi(a) > 0 > Psi(b). Psi(mu) has the sign of
    // the root's side; step halfway to the far end until the sign flips.
    let (value, _) = psi_and_slope(mu, scores);
    let (mut a, mut b) = (mu, mu);
    let mut iterations = 0;
    if value > 0.0 {
        loop {
            iterations += 1;
            let next = b + 0.5 * (hi - b);
            if next == b || !feasible(next) {
                break;
            }
            b = next;
            if psi_and_slope(b, scores).0 <= 0.0 {
                break;
            }
        }
    } else if value < 0.0 {
        loop {
            iterations += 1;
            let next = a + 0.5 * (lo - a);
            if next == a || !feasible(next) {
                break;
            }
            a = next;
            if psi_and_slope(a, scores).0 >= 0.0 {
                break;
            }
        }
    }
    let fa = psi_and_slope(a, scores).0;
    let fb = psi_and_slope(b, scores).0;
    if fa == 0.0 || fb == 0.0 {
        let mu = if fa == 0.0 { a } else { b };
        return Ok(MultiplierSolution {
            mu,
            residual: 0.0,
            iterations,
            feasibility_interval: (lo, hi),
        });
    }
    if !(fa > 0.0 && fb < 0.0) {
        return Err(Error::Consistency(format!(
            "multiplier bracket [{a}, {b}] has Psi values {fa}, {fb}"
        )));
    }

    let mut mu = 0.5 * (a + b);
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (v, slope) = psi_and_slope(mu, scores);
        if v > 0.0 {
            a = mu;
        } else if v < 0.0 {
            b = mu;
        }
        let width_tol = WIDTH_TOLERANCE * (1.0 + mu.abs());
        if v.abs() <= PSI_TOLERANCE {
            // confirm the sign change inside a window of the required width
            let h = 0.5 * width_tol;
            let (left, right) = (mu - h, mu + h);
            if v == 0.0 || b - a <= width_tol {
                return Ok(done(mu, v, iterations, (lo, hi)));
            }
            if left > a && feasible(left) && psi_and_slope(left, scores).0 > 0.0 {
                a = left;
            }
            if right < b && feasible(right) && psi_and_slope(right, scores).0 < 0.0 {
                b = right;
            }
            if b - a <= width_tol {
                return Ok(done(mu, v, iterations, (lo, hi)));
            }
        }
        let newton = mu - v / slope;
        mu = if newton > a && newton < b && slope < 0.0 {
            newton
        } else {
            0.5 * (a + b)
        };
        if mu <= a || mu >= b {
            // bracket collapsed to adjacent floats
            let (v, _) = psi_and_slope(mu, scores);
            if v.abs() <= PSI_TOLERANCE {
                return Ok(done(mu, v, iterations, (lo, hi)));
            }
            return Err(Error::NotConverged {
                residual: v.abs(),
                iterations,
            });
        }
    }
    let residual = psi_and_slope(mu, scores).0.abs();
    Err(Error::NotConverged {
        residual,
        iterations,
    })
}

fn done(mu: f64, v: f64, iterations: usize, interval: (f64, f64)) -> MultiplierSolution {
    MultiplierSolution {
        mu,
        residual: v.abs(),
        iterations,
        feasibility_interval: interval,
    }
}

/// `p_i = 1 / (N (1 + mu A_i))`, renormalised to sum to one.
///
/// Without renormalisation `sum p_i = 1 - mu Psi(mu)`, which can drift from one
/// by `|mu| * PSI_TOLERANCE`; dividing by the sum leaves `sum p_i A_i` equal to
/// `Psi(mu)` up to that same factor.
pub fn mele_weights(sol: &MultiplierSolution, scores: &[f64]) -> Vec<f64> {
    let n = scores.len() as f64;
    let raw: Vec<f64> = scores
        .iter()
        .map(|&a| 1.0 / (n * (1.0 + sol.mu * a)))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// MELE spectral probability measure together with the multiplier used.
pub fn mele_spectral_prob_with(
    ang: &AngularSample,
) -> Result<(DiscreteSpectralMeasure, MultiplierSolution)> {
    let scores = ang.scores();
    let sol = solve_multiplier(&scores)?;
    let weights = mele_weights(&sol, &scores);
    let q = DiscreteSpectralMeasure::new(
        ang.norm(),
        ang.members().iter().zip(weights).map(|(m, w)| (m.angle, w)),
    )?;
    Ok((q, sol))
}

pub fn mele_spectral_prob(ang: &AngularSample) -> Result<DiscreteSpectralMeasure> {
    mele_spectral_prob_with(ang).map(|(q, _)| q)
}

/// Tolerance on `|sum w f|` accepted by [`spectral_normalizer`].
const CONSTRAINT_TOLERANCE: f64 = 1e-9;

/// `m(Q) = int cos / ||.||_p dQ` for a probability measure satisfying the
/// moment constraint; the sine form must agree.
pub fn spectral_normalizer(q: &DiscreteSpectralMeasure) -> Result<f64> {
    let (s, c) = q.moment_sums();
    if (s - c).abs() > CONSTRAINT_TOLERANCE {
        return Err(Error::Consistency(format!(
            "moment constraint violated: sine form {s}, cosine form {c}"
        )));
    }
    Ok(c)
}

/// `Phi = Q / m(Q)`.
pub fn mele_spectral_measure(ang: &AngularSample) -> Result<DiscreteSpectralMeasure> {
    mele_spectral_measure_with(ang).map(|(phi, _)| phi)
}

pub fn mele_spectral_measure_with(
    ang: &AngularSample,
) -> Result<(DiscreteSpectralMeasure, MultiplierSolution)> {
    let (q, sol) = mele_spectral_prob_with(ang)?;
    let m = spectral_normalizer(&q)?;
    Ok((q.scaled(1.0 / m), sol))
}

/// `(int f dQ, int sin/||.|| dPhi - 1, int cos/||.|| dPhi - 1)` for reporting.
pub fn constraint_residuals(
    q: &DiscreteSpectralMeasure,
    phi: &DiscreteSpectralMeasure,
) -> (f64, f64, f64) {
    let norm: NormOrder = q.norm();
    let centred = q.integrate(|t| norm.score(t));
    let (s, c) = phi.moment_sums();
    (centred, s - 1.0, c - 1.0)
}
