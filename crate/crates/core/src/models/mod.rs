//! Ground-truth dependence models: spectral distribution functions for a
//! given L_p norm, endpoint atoms, joint distribution functions and samplers.
//!
//! Every interior density factors as `||(sin, cos)||_p * nu(theta)` with `nu`
//! free of `p`. Where no closed form is available the interior cdf comes from
//! a table of panel integrals on a uniform grid over `[0, pi/2]` (which has
//! `pi/4` as a node, the kink of the max-norm).

mod cauchy;
mod logistic;
mod mixture;
mod stable;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::norm::{sin_cos, NormOrder};
use crate::quadrature::{adaptive_simpson, GaussLegendre};
use crate::sample::BivariateSample;

pub use logistic::{asym_logistic_spectral_density, logistic_stdf};
pub use stable::log_positive_stable;

const PANELS: usize = 1024;
const PANEL_TOL: f64 = 1e-14;
const MOMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    /// Asymmetric logistic; `psi1 = psi2 = 1` is the symmetric logistic.
    Logistic { r: f64, psi1: f64, psi2: f64 },
    /// Spherical bivariate Cauchy folded into the positive quadrant.
    CauchyQuadrant,
    /// Spherical bivariate Cauchy on the whole plane.
    CauchyFullPlane,
    /// Mixture of independent Pareto(1) pairs (weight `1 - r`) and a dependent law.
    Mixture { r: f64 },
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModelKind::Logistic { r, psi1, psi2 } if psi1 == 1.0 && psi2 == 1.0 => {
                write!(f, "logistic(r={r})")
            }
            ModelKind::Logistic { r, psi1, psi2 } => {
                write!(f, "asymmetric-logistic(r={r};psi1={psi1};psi2={psi2})")
            }
            ModelKind::CauchyQuadrant => f.write_str("cauchy-quadrant"),
            ModelKind::CauchyFullPlane => f.write_str("cauchy-fullplane"),
            ModelKind::Mixture { r } => write!(f, "mixture(r={r})"),
        }
    }
}

/// A dependence model together with the norm its spectral measure is expressed in.
#[derive(Debug, Clone)]
pub struct SpectralModel {
    kind: ModelKind,
    norm: NormOrder,
    atom0: f64,
    atom_half_pi: f64,
    /// Cumulative panel integrals of `table_integrand`, present only when the
    /// interior cdf has no closed form.
    table: Option<Arc<Vec<f64>>>,
}

impl SpectralModel {
    pub fn asymmetric_logistic(r: f64, psi1: f64, psi2: f64, norm: NormOrder) -> Result<Self> {
        logistic::check_params(r, psi1, psi2)?;
        // r = 1 or psi1 psi2 = 0 makes l additive: tail independence
        let (atom0, atom_half_pi) = if r == 1.0 || psi1 * psi2 == 0.0 {
            (1.0, 1.0)
        } else {
            (1.0 - psi2, 1.0 - psi1)
        };
        Ok(Self::build(
            ModelKind::Logistic { r, psi1, psi2 },
            norm,
            atom0,
            atom_half_pi,
        ))
    }

    pub fn logistic(r: f64, norm: NormOrder) -> Result<Self> {
        Self::asymmetric_logistic(r, 1.0, 1.0, norm)
    }

    pub fn cauchy_quadrant(norm: NormOrder) -> Self {
        Self::build(ModelKind::CauchyQuadrant, norm, 0.0, 0.0)
    }

    pub fn cauchy_fullplane(norm: NormOrder) -> Self {
        Self::build(ModelKind::CauchyFullPlane, norm, 0.5, 0.5)
    }

    pub fn mixture(r: f64, norm: NormOrder) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::Parameter(format!(
                "mixture r must lie in [0, 1], got {r}"
            )));
        }
        Ok(Self::build(
            ModelKind::Mixture { r },
            norm,
            1.0 - r,
            1.0 - r,
        ))
    }

    fn build(kind: ModelKind, norm: NormOrder, atom0: f64, atom_half_pi: f64) -> Self {
        let mut model = Self {
            kind,
            norm,
            atom0,
            atom_half_pi,
            table: None,
        };
        if model.needs_table() {
            let step = FRAC_PI_2 / PANELS as f64;
            let mut acc = 0.0;
            let mut cum = Vec::with_capacity(PANELS + 1);
            cum.push(0.0);
            for i in 0..PANELS {
                let a = i as f64 * step;
                let b = if i + 1 == PANELS {
                    FRAC_PI_2
                } else {
                    (i + 1) as f64 * step
                };
                acc += adaptive_simpson(|t| model.table_integrand(t), a, b, PANEL_TOL);
                cum.push(acc);
            }
            model.table = Some(Arc::new(cum));
        }
        model
    }

    fn is_degenerate(&self) -> bool {
        match self.kind {
            ModelKind::Logistic { r, psi1, psi2 } => r == 1.0 || psi1 * psi2 == 0.0,
            ModelKind::Mixture { r } => r == 0.0,
            _ => false,
        }
    }

    fn needs_table(&self) -> bool {
        if self.is_degenerate() {
            return false;
        }
        let l1 = self.norm == NormOrder::ONE;
        match self.kind {
            ModelKind::Logistic { .. } | ModelKind::Mixture { .. } => !l1,
            ModelKind::CauchyQuadrant | ModelKind::CauchyFullPlane => {
                cauchy::quadrant_cdf_closed(1.0, self.norm).is_none()
            }
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn norm(&self) -> NormOrder {
        self.norm
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }

    /// Mass at `theta = 0`.
    pub fn atom0(&self) -> f64 {
        self.atom0
    }

    /// Mass at `theta = pi/2`.
    pub fn atom_half_pi(&self) -> f64 {
        self.atom_half_pi
    }

    /// Interior density at `theta` in `(0, pi/2)`.
    pub fn density(&self, theta: f64) -> f64 {
        if self.is_degenerate() {
            return 0.0;
        }
        let np = self.norm.angular_norm(theta);
        match self.kind {
            ModelKind::Logistic { r, psi1, psi2 } => {
                logistic::density_unchecked(theta, r, psi1, psi2, self.norm)
            }
            ModelKind::CauchyQuadrant => np,
            ModelKind::CauchyFullPlane => 0.5 * np,
            ModelKind::Mixture { r } => {
                let (s, c) = sin_cos(theta);
                2.0 * r * np / (s + c).powi(3)
            }
        }
    }

    /// Interior mass on `(0, theta]` for `theta` in `[0, pi/2]`, i.e. excluding both atoms.
    pub fn interior_cdf(&self, theta: f64) -> f64 {
        if theta <= 0.0 || self.is_degenerate() {
            return 0.0;
        }
        let theta = theta.min(FRAC_PI_2);
        let tabulated = |model: &Self| model.table_cdf(theta);
        match self.kind {
            ModelKind::Logistic { r, psi1, psi2 } => {
                let d1 = logistic::l1_interior_cdf(theta, r, psi1, psi2);
                if self.norm == NormOrder::ONE {
                    d1
                } else {
                    l1_ratio(theta, self.norm) * d1 + tabulated(self)
                }
            }
            ModelKind::CauchyQuadrant => {
                cauchy::quadrant_cdf_closed(theta, self.norm).unwrap_or_else(|| tabulated(self))
            }
            ModelKind::CauchyFullPlane => {
                0.5 * cauchy::quadrant_cdf_closed(theta, self.norm)
                    .unwrap_or_else(|| tabulated(self))
            }
            ModelKind::Mixture { r } => {
                if self.norm == NormOrder::ONE {
                    mixture::l1_interior_cdf(theta, r)
                } else {
                    tabulated(self)
                }
            }
        }
    }

    /// Right-continuous spectral distribution function `Phi_p([0, theta])`.
    pub fn cdf(&self, theta: f64) -> f64 {
        if theta < 0.0 {
            return 0.0;
        }
        let top = if theta >= FRAC_PI_2 {
            self.atom_half_pi
        } else {
            0.0
        };
        self.atom0 + self.interior_cdf(theta) + top
    }

    pub fn total_mass(&self) -> f64 {
        self.cdf(FRAC_PI_2)
    }

    /// `(int sin/||.||_p dPhi, int cos/||.||_p dPhi)`, both equal to one for a
    /// genuine spectral measure.
    ///
    /// Evaluated by parts against the interior cdf `I`, which avoids the
    /// integrable density singularities of some models:
    /// `int h dI = h(pi/2) I(pi/2) - int I h'`.
    pub fn moment_sums(&self) -> (f64, f64) {
        let norm = self.norm;
        let by_parts = |hp: &dyn Fn(f64) -> f64| {
            let g = |t: f64| self.interior_cdf(t) * hp(t);
            adaptive_simpson(g, 0.0, FRAC_PI_4, MOMENT_TOL)
                + adaptive_simpson(g, FRAC_PI_4, FRAC_PI_2, MOMENT_TOL)
        };
        let h1p = |t: f64| {
            let (s, c) = sin_cos(t);
            let (n, dn) = norm_and_derivative(t, norm);
            (c * n - s * dn) / (n * n)
        };
        let h2p = |t: f64| {
            let (s, c) = sin_cos(t);
            let (n, dn) = norm_and_derivative(t, norm);
            (-s * n - c * dn) / (n * n)
        };
        let s1 = self.atom_half_pi + self.interior_cdf(FRAC_PI_2) - by_parts(&h1p);
        let s2 = self.atom0 - by_parts(&h2p);
        (s1, s2)
    }

    /// Integrand whose running integral the table stores.
    fn table_integrand(&self, theta: f64) -> f64 {
        match self.kind {
            // I = g D1 - int D1 g' with g = N_p / N_1
            ModelKind::Logistic { r, psi1, psi2 } => {
                -logistic::l1_interior_cdf(theta, r, psi1, psi2)
                    * l1_ratio_derivative(theta, self.norm)
            }
            ModelKind::CauchyQuadrant | ModelKind::CauchyFullPlane => self.norm.angular_norm(theta),
            ModelKind::Mixture { .. } => self.density(theta),
        }
    }

    fn table_cdf(&self, theta: f64) -> f64 {
        let cum = self.table.as_ref().expect("table built for this model");
        let step = FRAC_PI_2 / PANELS as f64;
        let i = ((theta / step) as usize).min(PANELS - 1);
        let a = i as f64 * step;
        let partial = if theta <= a {
            0.0
        } else if i == 0 || i == PANELS - 1 {
            adaptive_simpson(|t| self.table_integrand(t), a, theta, PANEL_TOL)
        } else {
            gauss8().integrate(|t| self.table_integrand(t), a, theta)
        };
        cum[i] + partial
    }

    pub fn has_sampler(&self) -> bool {
        match self.kind {
            ModelKind::Logistic { psi1, psi2, .. } => psi1 == 1.0 && psi2 == 1.0,
            _ => true,
        }
    }

    /// `n` i.i.d. draws from the model's bivariate law.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<BivariateSample> {
        if !self.has_sampler() {
            return Err(Error::Unsupported(format!("no sampler for {}", self.kind)));
        }
        if n == 0 {
            return Err(Error::Parameter("sample size must be positive".into()));
        }
        let rows = match self.kind {
            ModelKind::Logistic { r, .. } => logistic::sample_logistic(n, r, rng),
            ModelKind::CauchyQuadrant => cauchy::sample_quadrant(n, rng),
            ModelKind::CauchyFullPlane => cauchy::sample_fullplane(n, rng),
            ModelKind::Mixture { r } => mixture::sample_mixture(n, r, rng),
        };
        BivariateSample::new(rows)
    }

    /// Joint distribution function `P(X <= x, Y <= y)` of the sampled law.
    pub fn joint_cdf(&self, x: f64, y: f64) -> Result<f64> {
        if !self.has_sampler() {
            return Err(Error::Unsupported(format!(
                "no joint law for {}",
                self.kind
            )));
        }
        Ok(match self.kind {
            ModelKind::Logistic { r, .. } => logistic::logistic_joint_cdf(x, y, r),
            ModelKind::CauchyQuadrant => cauchy::quadrant_joint_cdf(x, y),
            ModelKind::CauchyFullPlane => cauchy::fullplane_joint_cdf(x, y),
            ModelKind::Mixture { r } => mixture::mixture_joint_cdf(x, y, r),
        })
    }

    /// Common marginal distribution function of the sampled law.
    pub fn marginal_cdf(&self, x: f64) -> f64 {
        match self.kind {
            ModelKind::Logistic { .. } => {
                if x <= 0.0 {
                    0.0
                } else {
                    (-1.0 / x).exp()
                }
            }
            ModelKind::CauchyQuadrant => cauchy::quadrant_marginal_cdf(x),
            ModelKind::CauchyFullPlane => cauchy::fullplane_marginal_cdf(x),
            ModelKind::Mixture { .. } => mixture::mixture_marginal_cdf(x),
        }
    }

    /// Inverse of [`marginal_cdf`](Self::marginal_cdf) for `q` in `(0, 1)`.
    pub fn marginal_quantile(&self, q: f64) -> f64 {
        match self.kind {
            ModelKind::Logistic { .. } => -1.0 / q.ln(),
            ModelKind::CauchyQuadrant => cauchy::quadrant_marginal_quantile(q),
            ModelKind::CauchyFullPlane => cauchy::fullplane_marginal_quantile(q),
            ModelKind::Mixture { .. } => mixture::mixture_marginal_quantile(q),
        }
    }

    /// Default integration interval for the integrated squared error; the
    /// mixture trims the neighbourhoods of its endpoint atoms.
    pub fn default_interval(&self) -> (f64, f64) {
        match self.kind {
            ModelKind::Mixture { .. } => (0.05 * FRAC_PI_2, 0.95 * FRAC_PI_2),
            _ => (0.0, FRAC_PI_2),
        }
    }
}

fn gauss8() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(8))
}

/// `(||(sin, cos)||_p, d/dtheta ||(sin, cos)||_p)`, one-sided at `pi/4` for the max-norm.
fn norm_and_derivative(theta: f64, norm: NormOrder) -> (f64, f64) {
    let (s, c) = sin_cos(theta);
    match norm {
        NormOrder::Infinity => {
            if theta < FRAC_PI_4 {
                (c, -s)
            } else {
                (s, c)
            }
        }
        NormOrder::Finite(p) => {
            let n = norm.norm(s, c);
            // written with s/n, c/n <= 1 so large p cannot overflow
            let dn = if p == 1.0 {
                c - s
            } else {
                (s / n).powf(p - 1.0) * c - (c / n).powf(p - 1.0) * s
            };
            (n, dn)
        }
    }
}

/// `g = ||(sin, cos)||_p / (sin + cos)`.
fn l1_ratio(theta: f64, norm: NormOrder) -> f64 {
    let (s, c) = sin_cos(theta);
    norm.norm(s, c) / (s + c)
}

fn l1_ratio_derivative(theta: f64, norm: NormOrder) -> f64 {
    let (s, c) = sin_cos(theta);
    let (n, dn) = norm_and_derivative(theta, norm);
    let n1 = s + c;
    (dn * n1 - n * (c - s)) / (n1 * n1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn orders() -> [NormOrder; 5] {
        [
            NormOrder::ONE,
            NormOrder::Finite(1.5),
            NormOrder::TWO,
            NormOrder::Finite(7.0),
            NormOrder::Infinity,
        ]
    }

    fn all_models(norm: NormOrder) -> Vec<SpectralModel> {
        vec![
            SpectralModel::logistic(2.0, norm).unwrap(),
            SpectralModel::logistic(1.0, norm).unwrap(),
            SpectralModel::logistic(1.4, norm).unwrap(),
            SpectralModel::asymmetric_logistic(2.0, 1.0, 0.89, norm).unwrap(),
            SpectralModel::asymmetric_logistic(3.0, 0.4, 0.7, norm).unwrap(),
            SpectralModel::asymmetric_logistic(1.5, 0.0, 0.7, norm).unwrap(),
            SpectralModel::cauchy_quadrant(norm),
            SpectralModel::cauchy_fullplane(norm),
            SpectralModel::mixture(0.0, norm).unwrap(),
            SpectralModel::mixture(0.5, norm).unwrap(),
            SpectralModel::mixture(1.0, norm).unwrap(),
        ]
    }

    #[test]
    fn moment_constraints_hold() {
        for p in orders() {
            for m in all_models(p) {
                let (s1, s2) = m.moment_sums();
                assert!(
                    (s1 - 1.0).abs() < 1e-8 && (s2 - 1.0).abs() < 1e-8,
                    "{} p={p}: {s1} {s2}",
                    m.name()
                );
            }
        }
    }

    #[test]
    fn l1_total_mass_is_two() {
        for m in all_models(NormOrder::ONE) {
            assert!(
                (m.total_mass() - 2.0).abs() < 1e-8,
                "{}: {}",
                m.name(),
                m.total_mass()
            );
        }
    }

    /// Direct quadrature of the density, substituting theta = u^4 and
    /// pi/2 - theta = u^4 at the ends to tame the integrable singularities.
    ///
    /// Within one ulp of pi/2 a singular density still carries mass of order
    /// `ulp^(r-1)`, out of reach of any quadrature in theta, so symmetric
    /// models reflect about pi/4 instead.
    fn density_oracle(m: &SpectralModel, theta: f64) -> f64 {
        let symmetric = !matches!(m.kind(), ModelKind::Logistic { psi1, psi2, .. } if psi1 != psi2);
        if symmetric && theta > FRAC_PI_4 {
            return 2.0 * density_oracle(m, FRAC_PI_4) - density_oracle(m, FRAC_PI_2 - theta);
        }
        let cut = 0.05;
        let head = |u: f64| {
            if u == 0.0 {
                0.0
            } else {
                4.0 * u.powi(3) * m.density(u.powi(4))
            }
        };
        // once pi/2 - u^4 rounds to pi/2 the remaining mass is below 1e-12
        let tail = |u: f64| {
            let t = FRAC_PI_2 - u.powi(4);
            if t == FRAC_PI_2 {
                0.0
            } else {
                4.0 * u.powi(3) * m.density(t)
            }
        };
        let lo = theta.min(cut);
        let mut q = adaptive_simpson(head, 0.0, lo.powf(0.25), 1e-13);
        let mid_end = theta.min(FRAC_PI_2 - cut);
        if mid_end > lo {
            q += adaptive_simpson(|t| m.density(t), lo, mid_end.min(FRAC_PI_4).max(lo), 1e-13);
            if mid_end > FRAC_PI_4 {
                q += adaptive_simpson(|t| m.density(t), FRAC_PI_4.max(lo), mid_end, 1e-13);
            }
        }
        if theta > FRAC_PI_2 - cut {
            let u_hi = cut.powf(0.25);
            let u_lo = (FRAC_PI_2 - theta).max(0.0).powf(0.25);
            q += adaptive_simpson(tail, u_lo, u_hi, 1e-13);
        }
        q
    }

    #[test]
    fn interior_cdf_matches_density_quadrature() {
        for p in orders() {
            for m in all_models(p) {
                for theta in [0.01, 0.3, FRAC_PI_4, 0.9, 1.2, 1.56, FRAC_PI_2] {
                    let oracle = density_oracle(&m, theta);
                    let got = m.interior_cdf(theta);
                    assert!(
                        (got - oracle).abs() < 1e-8,
                        "{} p={p} theta={theta}: {got} vs {oracle}",
                        m.name()
                    );
                }
            }
        }
    }

    #[test]
    fn documented_values() {
        let q1 = SpectralModel::cauchy_quadrant(NormOrder::ONE);
        assert!((q1.cdf(FRAC_PI_4) - 1.0).abs() < 1e-15);
        assert!((q1.cdf(FRAC_PI_2) - 2.0).abs() < 1e-15);
        assert!(
            (SpectralModel::cauchy_quadrant(NormOrder::Infinity).total_mass() - SQRT_2).abs()
                < 1e-15
        );
        let fp = SpectralModel::cauchy_fullplane(NormOrder::TWO);
        assert_eq!(fp.cdf(0.0), 0.5);
        let fp1 = SpectralModel::cauchy_fullplane(NormOrder::ONE);
        assert!((fp1.total_mass() - 2.0).abs() < 1e-15);
        let (a, b) = (FRAC_PI_4 - 0.2, FRAC_PI_4 + 0.2);
        assert!(((fp.cdf(b) - fp.cdf(a)) - 0.5 * (b - a)).abs() < 1e-15);

        let m0 = SpectralModel::mixture(0.0, NormOrder::TWO).unwrap();
        assert_eq!(
            (m0.atom0(), m0.atom_half_pi(), m0.interior_cdf(1.0)),
            (1.0, 1.0, 0.0)
        );
        let m1 = SpectralModel::mixture(1.0, NormOrder::Infinity).unwrap();
        assert_eq!((m1.atom0(), m1.atom_half_pi()), (0.0, 0.0));
        assert!(SpectralModel::mixture(1.5, NormOrder::ONE).is_err());

        let l = SpectralModel::asymmetric_logistic(2.0, 0.6, 0.8, NormOrder::TWO).unwrap();
        assert!((l.atom0() - 0.2).abs() < 1e-15 && (l.atom_half_pi() - 0.4).abs() < 1e-15);
        let ind = SpectralModel::logistic(1.0, NormOrder::Infinity).unwrap();
        assert_eq!(ind.total_mass(), 2.0);
        assert_eq!(ind.cdf(1.0), 1.0);
    }

    #[test]
    fn cdf_is_monotone_and_symmetric() {
        for p in orders() {
            for m in all_models(p) {
                let symmetric =
                    !matches!(m.kind(), ModelKind::Logistic { psi1, psi2, .. } if psi1 != psi2);
                let total = m.total_mass();
                let mut prev = m.cdf(0.0);
                assert_eq!(prev, m.atom0());
                for i in 1..=200 {
                    let t = FRAC_PI_2 * i as f64 / 200.0;
                    let v = m.cdf(t);
                    assert!(v >= prev - 1e-12, "{} p={p}", m.name());
                    prev = v;
                    if symmetric && i < 200 {
                        // interior points carry no mass, so left limits equal values
                        let left = m.cdf(t) + m.cdf(FRAC_PI_2 - t);
                        assert!((left - total).abs() < 1e-9, "{} p={p} t={t}", m.name());
                    }
                }
                let below = m.atom0() + m.interior_cdf(FRAC_PI_2);
                assert!((m.cdf(FRAC_PI_2) - below - m.atom_half_pi()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn asymmetric_logistic_cannot_sample() {
        use rand::SeedableRng;
        let m = SpectralModel::asymmetric_logistic(2.0, 1.0, 0.89, NormOrder::ONE).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(m.sample(10, &mut rng), Err(Error::Unsupported(_))));
        assert!(m.joint_cdf(1.0, 1.0).is_err());
    }

    #[test]
    fn sampler_is_deterministic() {
        use rand::SeedableRng;
        for m in all_models(NormOrder::ONE)
            .into_iter()
            .filter(|m| m.has_sampler())
        {
            let a = m
                .sample(50, &mut rand_chacha::ChaCha8Rng::seed_from_u64(9))
                .unwrap();
            let b = m
                .sample(50, &mut rand_chacha::ChaCha8Rng::seed_from_u64(9))
                .unwrap();
            assert_eq!(a, b);
        }
    }
}
