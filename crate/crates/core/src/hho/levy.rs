//! Heavy-tailed step generation for the rapid-dive updates.
//!
//! Steps follow `0.01 * (v1 * sigma) / |v2|^(1/beta)` with
//! `sigma = (Gamma(1+beta) sin(pi beta / 2) / (Gamma((1+beta)/2) beta
//! 2^((beta-1)/2)))^(1/beta)`.
//!
//! By default `v1` and `v2` are standard Gaussians (the Mantegna
//! construction, under which `sigma` gives the step a stable tail of index
//! `beta`). The literal mode draws both uniformly on `[0, 1]` instead; it is
//! kept selectable because a uniform `v2` near zero produces much wilder
//! steps, which materially changes the search.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Scale factor of the step numerator.
pub fn levy_sigma(beta: f64) -> f64 {
    let num = libm::tgamma(1.0 + beta) * (std::f64::consts::PI * beta / 2.0).sin();
    let den = libm::tgamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    (num / den).powf(1.0 / beta)
}

/// One step component from explicit draws.
pub fn levy_component(v1: f64, v2: f64, sigma: f64, beta: f64) -> f64 {
    0.01 * (v1 * sigma) / v2.abs().powf(1.0 / beta)
}

/// Draws an `n`-dimensional step. Each component consumes `v1` then `v2`;
/// a zero `v2` is resampled.
pub fn levy_step<R: Rng>(n: usize, beta: f64, literal: bool, rng: &mut R) -> Vec<f64> {
    let sigma = levy_sigma(beta);
    (0..n)
        .map(|_| {
            let v1: f64 = if literal {
                rng.random()
            } else {
                StandardNormal.sample(rng)
            };
            let v2 = loop {
                let v: f64 = if literal {
                    rng.random()
                } else {
                    StandardNormal.sample(rng)
                };
                if v != 0.0 {
                    break v;
                }
            };
            levy_component(v1, v2, sigma, beta)
        })
        .collect()
}

/// Hill estimator of the tail index from the top `k` order statistics of
/// `samples` (magnitudes). Used to verify the step distribution's tail.
pub fn hill_tail_index(samples: &mut [f64], k: usize) -> f64 {
    assert!(k > 0 && k < samples.len());
    samples.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    let threshold = samples[k];
    let sum: f64 = samples[..k].iter().map(|&x| (x / threshold).ln()).sum();
    k as f64 / sum
}
