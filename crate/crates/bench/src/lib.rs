//! Shared fixtures for the criterion benches.

use specmeasure_core::evaluation::replication_rng;
use specmeasure_core::{
    pseudo_observations, select_extremes, AngularSample, BivariateSample, NormOrder, SpectralModel,
};

/// Seeded Cauchy-quadrant sample of size `n`.
pub fn cauchy_sample(n: usize, seed: u64) -> BivariateSample {
    SpectralModel::cauchy_quadrant(NormOrder::ONE)
        .sample(n, &mut replication_rng(seed, 0))
        .expect("quadrant model has a sampler")
}

/// Angular sample of the `k` largest observations of a seeded Cauchy sample.
pub fn cauchy_angles(n: usize, k: usize, p: NormOrder, seed: u64) -> AngularSample {
    select_extremes(&pseudo_observations(&cauchy_sample(n, seed)), k, p).expect("valid k")
}
