//! Nonparametric estimation of the spectral measure of bivariate
//! extreme-value dependence.
//!
//! The pipeline runs from raw data to ranks ([`pseudo_observations`]), to the
//! angular extremes ([`select_extremes`]), to either the empirical spectral
//! measure or the maximum empirical likelihood estimator that enforces the
//! moment constraints ([`mele_spectral_measure`]). Ground-truth models and a
//! Monte Carlo harness for integrated squared errors support benchmarking.

pub mod empirical;
pub mod error;
pub mod evaluation;
pub mod measure;
pub mod mele;
pub mod models;
pub mod norm;
pub mod pickands;
pub mod quadrature;
pub mod sample;
pub mod table;

pub use empirical::{
    empirical_spectral_measure, empirical_spectral_prob, select_extremes, AngularMember,
    AngularSample,
};
pub use error::{Error, Result};
pub use evaluation::{
    integrated_squared_error, mise_sweep, Estimator, MiseConfig, MiseRow, MiseTable,
};
pub use measure::{Atom, DiscreteSpectralMeasure};
pub use mele::{
    mele_spectral_measure, mele_spectral_prob, mele_weights, psi, solve_multiplier,
    spectral_normalizer, MultiplierSolution,
};
pub use models::{ModelKind, SpectralModel};
pub use norm::NormOrder;
pub use pickands::{pickands_function, spectral_to_h, HMeasure, PickandsFunction};
pub use sample::{
    pseudo_observations, read_sample, read_sample_file, write_sample, BivariateSample,
    PseudoObservations,
};
