//! Pickands dependence function of an L_1 spectral measure.
//!
//! The map `w = sin/(sin + cos)` carries an L_1 spectral measure on
//! `[0, pi/2]` to a measure `H` on `[0, 1]`, and
//! `A(v) = 1 - v + int_0^v H([0, w]) dw`. For a discrete `H` the integrand is
//! a step function, so `A` is piecewise affine and is stored exactly.

use crate::error::{Error, Result};
use crate::measure::DiscreteSpectralMeasure;
use crate::norm::{sin_cos, NormOrder};

/// Discrete measure on `[0, 1]`: sorted, merged `(w, mass)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct HMeasure {
    atoms: Vec<(f64, f64)>,
}

impl HMeasure {
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// `H([0, w])`.
    pub fn cdf(&self, w: f64) -> f64 {
        self.atoms
            .iter()
            .take_while(|a| a.0 <= w)
            .map(|a| a.1)
            .sum()
    }
}

/// Pushes an L_1 spectral measure forward to `[0, 1]`.
pub fn spectral_to_h(phi1: &DiscreteSpectralMeasure) -> Result<HMeasure> {
    if phi1.norm() != NormOrder::ONE {
        return Err(Error::Parameter(format!(
            "Pickands transform needs an L_1 spectral measure, got p = {}",
            phi1.norm()
        )));
    }
    let mut atoms: Vec<(f64, f64)> = Vec::with_capacity(phi1.atoms().len());
    for a in phi1.atoms() {
        let (s, c) = sin_cos(a.angle);
        let w = s / (s + c);
        // the map is increasing, so order is preserved; rounding may still collide
        match atoms.last_mut() {
            Some(last) if last.0 == w => last.1 += a.weight,
            _ => atoms.push((w, a.weight)),
        }
    }
    Ok(HMeasure { atoms })
}

/// Piecewise affine `A` on `[0, 1]`, given by its values at the knots.
#[derive(Debug, Clone, PartialEq)]
pub struct PickandsFunction {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl PickandsFunction {
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `A(v)` by linear interpolation; `v` is clamped to `[0, 1]`.
    pub fn eval(&self, v: f64) -> f64 {
        let v = v.clamp(0.0, 1.0);
        let j = self.knots.partition_point(|&k| k <= v);
        if j >= self.knots.len() {
            return *self.values.last().expect("at least two knots");
        }
        let (k0, k1) = (self.knots[j - 1], self.knots[j]);
        let (a0, a1) = (self.values[j - 1], self.values[j]);
        a0 + (a1 - a0) * (v - k0) / (k1 - k0)
    }

    /// Slope of each affine piece, `H([0, knot_j]) - 1`.
    pub fn slopes(&self) -> Vec<f64> {
        self.knots
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(k, a)| (a[1] - a[0]) / (k[1] - k[0]))
            .collect()
    }
}

pub fn pickands_function(h: &HMeasure) -> PickandsFunction {
    let mut knots = vec![0.0];
    for &(w, _) in &h.atoms {
        if w > 0.0 && w < 1.0 {
            knots.push(w);
        }
    }
    knots.push(1.0);

    let mut values = Vec::with_capacity(knots.len());
    values.push(1.0);
    let mut mass_idx = 0;
    let mut below = 0.0;
    for win in knots.windows(2) {
        while mass_idx < h.atoms.len() && h.atoms[mass_idx].0 <= win[0] {
            below += h.atoms[mass_idx].1;
            mass_idx += 1;
        }
        let last = *values.last().expect("nonempty");
        values.push(last + (below - 1.0) * (win[1] - win[0]));
    }
    PickandsFunction { knots, values }
}
