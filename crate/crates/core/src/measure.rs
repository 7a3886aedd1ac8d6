use crate::error::{Error, Result};
use crate::norm::{sin_cos, NormOrder};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub angle: f64,
    pub weight: f64,
}

/// Finite discrete measure on `[0, pi/2]` with strictly positive weights,
/// atoms sorted by angle and merged on equal angles.
///
/// `norm` records the L_p norm the measure is expressed in, since spectral
/// measures for different norms are different objects.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSpectralMeasure {
    norm: NormOrder,
    atoms: Vec<Atom>,
    cumulative: Vec<f64>,
}

impl DiscreteSpectralMeasure {
    pub fn new(norm: NormOrder, points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = points.into_iter().collect();
        for &(angle, weight) in &pts {
            if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&angle) {
                return Err(Error::Domain {
                    what: "atom angle",
                    detail: format!("{angle}"),
                });
            }
            if !(weight > 0.0 && weight.is_finite()) {
                return Err(Error::Domain {
                    what: "atom weight",
                    detail: format!("{weight}"),
                });
            }
        }
        // stable sort keeps input order within equal angles, so merging is deterministic
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<Atom> = Vec::with_capacity(pts.len());
        for (angle, weight) in pts {
            match atoms.last_mut() {
                Some(last) if last.angle == angle => last.weight += weight,
                _ => atoms.push(Atom { angle, weight }),
            }
        }
        let mut acc = 0.0;
        let cumulative = atoms
            .iter()
            .map(|a| {
                acc += a.weight;
                acc
            })
            .collect();
        Ok(Self {
            norm,
            atoms,
            cumulative,
        })
    }

    pub fn norm(&self) -> NormOrder {
        self.norm
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    /// Right-continuous distribution function `theta -> mass([0, theta])`.
    pub fn cdf(&self, theta: f64) -> f64 {
        let idx = self.atoms.partition_point(|a| a.angle <= theta);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// Every weight multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        let atoms: Vec<Atom> = self
            .atoms
            .iter()
            .map(|a| Atom {
                angle: a.angle,
                weight: a.weight * factor,
            })
            .collect();
        let mut acc = 0.0;
        let cumulative = atoms
            .iter()
            .map(|a| {
                acc += a.weight;
                acc
            })
            .collect();
        Self {
            norm: self.norm,
            atoms,
            cumulative,
        }
    }

    /// `sum_j w_j g(theta_j)`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|a| a.weight * g(a.angle)).sum()
    }

    /// The two moment sums `(int sin/||.||_p dPhi, int cos/||.||_p dPhi)`;
    /// both equal one for a genuine spectral measure.
    pub fn moment_sums(&self) -> (f64, f64) {
        let mut s_sum = 0.0;
        let mut c_sum = 0.0;
        for a in &self.atoms {
            let (s, c) = sin_cos(a.angle);
            let r = self.norm.norm(s, c);
            s_sum += a.weight * s / r;
            c_sum += a.weight * c / r;
        }
        (s_sum, c_sum)
    }
}
