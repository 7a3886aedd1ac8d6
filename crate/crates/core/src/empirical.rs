//! Selection of the angular extremes and the empirical spectral measure.

use crate::error::{Error, Result};
use crate::measure::DiscreteSpectralMeasure;
use crate::norm::NormOrder;
use crate::sample::PseudoObservations;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMember {
    /// Zero-based row index into the original sample.
    pub index: usize,
    /// `arctan(U_i2 / U_i1)`, strictly inside `(0, pi/2)`.
    pub angle: f64,
    /// `f(angle)`, strictly inside `(-1, 1)`.
    pub score: f64,
}

/// The observations whose pseudo-observations satisfy
/// `||(1/U_i1, 1/U_i2)||_p >= n/k`, with their angles and scores.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularSample {
    n: usize,
    k: usize,
    norm: NormOrder,
    members: Vec<AngularMember>,
}

impl AngularSample {
    /// Builds an angular sample directly from member angles in `(0, pi/2)`,
    /// numbering the members `0..`. Used to study the reweighting on
    /// prescribed angle sets.
    pub fn from_angles(n: usize, k: usize, norm: NormOrder, angles: &[f64]) -> Result<Self> {
        if k < 1 || k > n || angles.len() > n {
            return Err(Error::Parameter(format!(
                "need 1 <= k <= n and at most n angles (n = {n}, k = {k}, {} angles)",
                angles.len()
            )));
        }
        let mut members = Vec::with_capacity(angles.len());
        for (index, &angle) in angles.iter().enumerate() {
            if !(angle > 0.0 && angle < std::f64::consts::FRAC_PI_2) {
                return Err(Error::Domain {
                    what: "member angle",
                    detail: format!("{angle}"),
                });
            }
            members.push(AngularMember {
                index,
                angle,
                score: norm.score(angle),
            });
        }
        Ok(Self {
            n,
            k,
            norm,
            members,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn norm(&self) -> NormOrder {
        self.norm
    }

    pub fn members(&self) -> &[AngularMember] {
        &self.members
    }

    /// `N_n`, the number of selected observations.
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn scores(&self) -> Vec<f64> {
        self.members.iter().map(|m| m.score).collect()
    }
}

/// Rank form of the selection rule for reverse ranks `a = n+1-R_i1`, `b = n+1-R_i2`:
/// `a^-p + b^-p >= k^-p`, or `min(a, b) <= k` for the max-norm.
///
/// The orders 1 and 2 are decided in exact integer arithmetic since ties with
/// the threshold occur there (for example `a = b = 2k` at `p = 1`).
pub(crate) fn rank_rule(a: usize, b: usize, k: usize, norm: NormOrder) -> bool {
    match norm {
        NormOrder::Infinity => a.min(b) <= k,
        NormOrder::Finite(1.0) => {
            let (a, b, k) = (a as u128, b as u128, k as u128);
            k * (a + b) >= a * b
        }
        NormOrder::Finite(2.0) => {
            let (a, b, k) = (a as u128, b as u128, k as u128);
            k * k * (a * a + b * b) >= a * a * b * b
        }
        NormOrder::Finite(p) => {
            let k = k as f64;
            (k / a as f64).powf(p) + (k / b as f64).powf(p) >= 1.0
        }
    }
}

pub fn select_extremes(
    pobs: &PseudoObservations,
    k: usize,
    norm: NormOrder,
) -> Result<AngularSample> {
    let n = pobs.len();
    if k < 1 || k > n {
        return Err(Error::Parameter(format!("k must lie in [1, {n}], got {k}")));
    }
    let members = pobs
        .reverse_ranks()
        .iter()
        .enumerate()
        .filter(|(_, &[a, b])| rank_rule(a, b, k, norm))
        .map(|(index, &[a, b])| {
            // U_i2 / U_i1 = b / a; the common factor 1/n cancels exactly
            let angle = (b as f64 / a as f64).atan();
            AngularMember {
                index,
                angle,
                score: norm.score(angle),
            }
        })
        .collect();
    Ok(AngularSample {
        n,
        k,
        norm,
        members,
    })
}

/// Empirical spectral measure: weight `1/k` at every selected angle.
pub fn empirical_spectral_measure(ang: &AngularSample) -> DiscreteSpectralMeasure {
    let w = 1.0 / ang.k as f64;
    DiscreteSpectralMeasure::new(ang.norm, ang.members.iter().map(|m| (m.angle, w)))
        .expect("member angles lie in (0, pi/2)")
}

/// Empirical spectral probability measure: weight `1/N_n` at every selected angle.
pub fn empirical_spectral_prob(ang: &AngularSample) -> DiscreteSpectralMeasure {
    let w = 1.0 / ang.count() as f64;
    DiscreteSpectralMeasure::new(ang.norm, ang.members.iter().map(|m| (m.angle, w)))
        .expect("member angles lie in (0, pi/2)")
}
