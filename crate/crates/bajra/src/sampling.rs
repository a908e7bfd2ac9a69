//! Seeded random generation of domain points, profiles and simplex weights.
//! All randomness flows through a caller-supplied generator so that every
//! property suite is reproducible from a single seed.

use std::ops::RangeInclusive;

use rand::Rng;

use crate::error::Result;
use crate::maps::Domain;
use crate::profiles::{DecisionProfile, Point};

/// Uniform point in the domain's finite sampling window.
pub fn sample_point<R: Rng>(domain: &Domain, rng: &mut R) -> Point {
    domain
        .sampling_window()
        .iter()
        .map(|&(lo, hi)| rng.gen_range(lo..hi))
        .collect()
}

/// Strictly positive weight in `(0, 1]`.
pub fn sample_weight<R: Rng>(rng: &mut R) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Random profile with a uniformly drawn size and strictly positive weights.
pub fn sample_profile<R: Rng>(
    domain: &Domain,
    sizes: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<DecisionProfile> {
    let n = rng.gen_range(sizes);
    let decisions = (0..n).map(|_| sample_point(domain, rng)).collect();
    let weights = (0..n).map(|_| sample_weight(rng)).collect();
    DecisionProfile::new(decisions, weights)
}

/// Uniform sample from the open probability simplex (all coordinates
/// positive, summing to one).
pub fn sample_simplex<R: Rng>(m: usize, rng: &mut R) -> Vec<f64> {
    let mut draws: Vec<f64> = (0..m)
        .map(|_| (-sample_weight(rng).ln()).max(1e-300))
        .collect();
    let sum: f64 = draws.iter().sum();
    for d in &mut draws {
        *d /= sum;
    }
    draws
}

/// Random permutation of `0..n` via Fisher-Yates.
pub fn sample_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}
