//! Fitness functions over `(Histogram, ThresholdVector)`.
//!
//! All objectives are minimized. Sums run over gray levels `i` in `[1, 256]`
//! with raw bin counts `h(i)`; zero-count bins contribute nothing (the
//! `ln h(i)` term is skipped on empty bins). The threshold-independent
//! constant `sum(i * h(i) * ln i)` is precomputed per histogram so reported
//! values are absolute, not merely rank-preserving.
//!
//! [`FitnessEvaluator`] carries prefix sums over the 256 bins, making one
//! evaluation O(N) in the number of thresholds. The free functions build a
//! throwaway evaluator; optimizer loops should construct one and reuse it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imagery::{Histogram, ThresholdVector, GRAY_LEVELS};

/// Weights of the hybrid objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveWeights {
    pub alpha: f64,
    pub beta: f64,
}

impl ObjectiveWeights {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha < 0.0 || beta < 0.0 || alpha + beta <= 0.0 {
            return Err(Error::InfeasibleParams(format!(
                "weights alpha={alpha}, beta={beta} must be non-negative with alpha + beta > 0"
            )));
        }
        Ok(Self { alpha, beta })
    }
}

impl Default for ObjectiveWeights {
    /// Defaults alpha = 0.35, beta = 0.65.
    fn default() -> Self {
        Self {
            alpha: 0.35,
            beta: 0.65,
        }
    }
}

/// Which objective assigns fitness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    CrossEntropy,
    Pef,
    Hybrid,
    Mse,
}

impl std::fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ObjectiveKind::CrossEntropy => "cross-entropy",
            ObjectiveKind::Pef => "pef",
            ObjectiveKind::Hybrid => "hybrid",
            ObjectiveKind::Mse => "mse",
        };
        f.write_str(s)
    }
}

/// Per-histogram state for fast repeated fitness evaluation.
///
/// Prefix arrays are indexed by level with a leading zero: entry `i` holds
/// the sum over levels `1..=i`, so a class `[lo, hi)` reduces to two lookups.
#[derive(Debug, Clone)]
pub struct FitnessEvaluator {
    kind: ObjectiveKind,
    weights: ObjectiveWeights,
    /// Cumulative count mass.
    mass: Vec<f64>,
    /// Cumulative `i * h(i)`.
    weighted: Vec<f64>,
    /// Cumulative `i^2 * h(i)`.
    weighted_sq: Vec<f64>,
    /// Cumulative `i * ln(h(i))` over occupied bins.
    weighted_log_count: Vec<f64>,
    /// `sum(i * h(i) * ln i)`, threshold-independent.
    const_term: f64,
    total: f64,
}

impl FitnessEvaluator {
    pub fn new(hist: &Histogram, kind: ObjectiveKind, weights: ObjectiveWeights) -> Self {
        let n = GRAY_LEVELS + 1;
        let mut mass = vec![0.0; n];
        let mut weighted = vec![0.0; n];
        let mut weighted_sq = vec![0.0; n];
        let mut weighted_log_count = vec![0.0; n];
        let mut const_term = 0.0;
        for level in 1..=GRAY_LEVELS {
            let i = level as f64;
            let h = hist.count_at_level(level as u32) as f64;
            mass[level] = mass[level - 1] + h;
            weighted[level] = weighted[level - 1] + i * h;
            weighted_sq[level] = weighted_sq[level - 1] + i * i * h;
            weighted_log_count[level] =
                weighted_log_count[level - 1] + if h > 0.0 { i * h.ln() } else { 0.0 };
            const_term += i * h * i.ln();
        }
        Self {
            kind,
            weights,
            mass,
            weighted,
            weighted_sq,
            weighted_log_count,
            const_term,
            total: hist.total() as f64,
        }
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    /// Fitness of `th` under the evaluator's objective.
    pub fn eval(&self, th: &ThresholdVector) -> f64 {
        match self.kind {
            ObjectiveKind::CrossEntropy => self.cross_entropy(th),
            ObjectiveKind::Pef => self.pef(th),
            ObjectiveKind::Hybrid => {
                self.weights.alpha * self.cross_entropy(th) + self.weights.beta * self.pef(th)
            }
            ObjectiveKind::Mse => self.mse(th),
        }
    }

    fn range_sums(&self, lo: u32, hi: u32) -> (f64, f64, f64, f64) {
        let (lo, hi) = (lo as usize, hi as usize);
        (
            self.mass[hi - 1] - self.mass[lo - 1],
            self.weighted[hi - 1] - self.weighted[lo - 1],
            self.weighted_sq[hi - 1] - self.weighted_sq[lo - 1],
            self.weighted_log_count[hi - 1] - self.weighted_log_count[lo - 1],
        )
    }

    fn class_mu(n: f64, s: f64, lo: u32, hi: u32) -> f64 {
        let mu = if n > 0.0 {
            s / n
        } else {
            f64::from(lo + hi - 1) / 2.0
        };
        debug_assert!(mu >= 1.0);
        mu
    }

    pub fn cross_entropy(&self, th: &ThresholdVector) -> f64 {
        let mut class_terms = 0.0;
        for (lo, hi) in th.class_ranges() {
            if lo == hi {
                continue; // zero-width class: no member levels
            }
            let (n, s, _, _) = self.range_sums(lo, hi);
            let mu = Self::class_mu(n, s, lo, hi);
            class_terms += s * mu.ln();
        }
        self.const_term - class_terms
    }

    pub fn pef(&self, th: &ThresholdVector) -> f64 {
        let mut entropy_sum = 0.0;
        for (lo, hi) in th.class_ranges() {
            if lo == hi {
                continue;
            }
            let (n, s, _, t) = self.range_sums(lo, hi);
            let mu = Self::class_mu(n, s, lo, hi);
            // Class entropy is -(s*(1 - mu) + t*(1 - ln mu)); subtracting it
            // from the constant adds the inner expression back.
            entropy_sum += -(s * (1.0 - mu) + t * (1.0 - mu.ln()));
        }
        self.const_term - entropy_sum
    }

    pub fn mse(&self, th: &ThresholdVector) -> f64 {
        let mut acc = 0.0;
        for (lo, hi) in th.class_ranges() {
            if lo == hi {
                continue;
            }
            let (n, s, sq, _) = self.range_sums(lo, hi);
            let mu = Self::class_mu(n, s, lo, hi);
            // Deviations are taken against the same rounded reconstruction
            // value that threshold application writes, so this equals the
            // pixel-space MSE of the segmented image.
            let recon = mu.round();
            acc += sq - 2.0 * recon * s + recon * recon * n;
        }
        acc / self.total
    }
}

/// Minimum cross-entropy fitness.
pub fn cross_entropy_fitness(hist: &Histogram, th: &ThresholdVector) -> f64 {
    FitnessEvaluator::new(hist, ObjectiveKind::CrossEntropy, ObjectiveWeights::default())
        .cross_entropy(th)
}

/// Entropy-function fitness (count, class-mean, and log-count interactions).
pub fn pef_fitness(hist: &Histogram, th: &ThresholdVector) -> f64 {
    FitnessEvaluator::new(hist, ObjectiveKind::Pef, ObjectiveWeights::default()).pef(th)
}

/// Weighted hybrid `alpha * F_ce + beta * F_pef`.
pub fn hybrid_fitness(hist: &Histogram, th: &ThresholdVector, w: ObjectiveWeights) -> f64 {
    let e = FitnessEvaluator::new(hist, ObjectiveKind::Hybrid, w);
    w.alpha * e.cross_entropy(th) + w.beta * e.pef(th)
}

/// Histogram-space mean squared error against each class's rounded
/// reconstruction value.
pub fn mse_fitness(hist: &Histogram, th: &ThresholdVector) -> f64 {
    FitnessEvaluator::new(hist, ObjectiveKind::Mse, ObjectiveWeights::default()).mse(th)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imagery::{apply_thresholds, compute_histogram, Bounds, GrayImage};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hist_from_counts(pairs: &[(usize, u64)]) -> Histogram {
        let mut counts = [0u64; GRAY_LEVELS];
        for &(bin, c) in pairs {
            counts[bin] = c;
        }
        Histogram::from_counts(counts).unwrap()
    }

    fn th(values: &[u16]) -> ThresholdVector {
        ThresholdVector::new(values.to_vec(), Bounds::default()).unwrap()
    }

    // Independent reference route: direct summation over levels and classes,
    // no prefix sums. Kept deliberately naive.
    fn naive_class_mu(h: &Histogram, lo: u32, hi: u32) -> f64 {
        let mut s = 0.0;
        let mut n = 0.0;
        for level in lo..hi {
            let c = h.count_at_level(level) as f64;
            s += f64::from(level) * c;
            n += c;
        }
        if n > 0.0 {
            s / n
        } else {
            f64::from(lo + hi - 1) / 2.0
        }
    }

    fn naive_const(h: &Histogram) -> f64 {
        (1..=GRAY_LEVELS as u32)
            .map(|i| f64::from(i) * h.count_at_level(i) as f64 * f64::from(i).ln())
            .sum()
    }

    fn naive_ce(h: &Histogram, t: &ThresholdVector) -> f64 {
        let mut class_terms = 0.0;
        for (lo, hi) in t.class_ranges() {
            let mu = naive_class_mu(h, lo, hi);
            for level in lo..hi {
                class_terms += f64::from(level) * h.count_at_level(level) as f64 * mu.ln();
            }
        }
        naive_const(h) - class_terms
    }

    fn naive_pef(h: &Histogram, t: &ThresholdVector) -> f64 {
        let mut entropy_sum = 0.0;
        for (lo, hi) in t.class_ranges() {
            let mu = naive_class_mu(h, lo, hi);
            let mut term = 0.0;
            for level in lo..hi {
                let c = h.count_at_level(level) as f64;
                let i = f64::from(level);
                if c > 0.0 {
                    term += i * (c * (1.0 - mu) + c.ln() * (1.0 - mu.ln()));
                }
            }
            entropy_sum += -term;
        }
        naive_const(h) - entropy_sum
    }

    fn naive_mse(h: &Histogram, t: &ThresholdVector) -> f64 {
        let mut acc = 0.0;
        for (lo, hi) in t.class_ranges() {
            let recon = naive_class_mu(h, lo, hi).round();
            for level in lo..hi {
                let d = f64::from(level) - recon;
                acc += d * d * h.count_at_level(level) as f64;
            }
        }
        acc / h.total() as f64
    }

    fn random_hist(rng: &mut ChaCha8Rng, occupied: usize) -> Histogram {
        let mut counts = [0u64; GRAY_LEVELS];
        let mut placed = 0;
        while placed < occupied {
            let bin = rng.random_range(0..GRAY_LEVELS);
            if counts[bin] == 0 {
                counts[bin] = rng.random_range(1..200);
                placed += 1;
            }
        }
        Histogram::from_counts(counts).unwrap()
    }

    fn random_th(rng: &mut ChaCha8Rng, n: usize) -> ThresholdVector {
        loop {
            let mut vals: Vec<u16> = (0..n).map(|_| rng.random_range(1..=256)).collect();
            vals.sort_unstable();
            vals.dedup();
            if vals.len() == n {
                return th(&vals);
            }
        }
    }

    #[test]
    fn single_bin_cross_entropy_is_zero() {
        for bin in [0usize, 6, 128, 255] {
            let h = hist_from_counts(&[(bin, 17)]);
            for t in [th(&[2]), th(&[100, 200]), th(&[1, 50, 250])] {
                assert_eq!(cross_entropy_fitness(&h, &t), 0.0);
            }
        }
    }

    #[test]
    fn toy_histogram_ce_argmin_matches_sweep() {
        // Levels 1, 4, 8 occupied with 4 pixels each.
        let h = hist_from_counts(&[(0, 4), (3, 4), (7, 4)]);
        let mut best = (f64::INFINITY, 0u16);
        for t_val in 2..=8u16 {
            let f = naive_ce(&h, &th(&[t_val]));
            if f < best.0 {
                best = (f, t_val);
            }
        }
        let mut impl_best = (f64::INFINITY, 0u16);
        for t_val in 2..=8u16 {
            let f = cross_entropy_fitness(&h, &th(&[t_val]));
            if f < impl_best.0 {
                impl_best = (f, t_val);
            }
        }
        assert_eq!(best.1, impl_best.1);
        assert!((best.0 - impl_best.0).abs() < 1e-9);
    }

    #[test]
    fn toy_histogram_pef_argmin_matches_sweep() {
        let h = hist_from_counts(&[(0, 4), (3, 4), (7, 4)]);
        let naive_arg = (2..=8u16)
            .min_by(|&a, &b| {
                naive_pef(&h, &th(&[a]))
                    .partial_cmp(&naive_pef(&h, &th(&[b])))
                    .unwrap()
            })
            .unwrap();
        let impl_arg = (2..=8u16)
            .min_by(|&a, &b| {
                pef_fitness(&h, &th(&[a]))
                    .partial_cmp(&pef_fitness(&h, &th(&[b])))
                    .unwrap()
            })
            .unwrap();
        assert_eq!(naive_arg, impl_arg);
    }

    #[test]
    fn pef_empty_class_contributes_nothing() {
        let h = hist_from_counts(&[(10, 5), (200, 5)]);
        // Thresholds carving an empty middle class [50, 150).
        let with_empty = th(&[50, 150]);
        let f = pef_fitness(&h, &with_empty);
        assert!(f.is_finite());
        // Same occupied-bin split without the empty class: [50) and [50..).
        let without = th(&[50]);
        assert!((f - pef_fitness(&h, &without)).abs() < 1e-9);
    }

    #[test]
    fn pef_uniform_histogram_matches_reference_sum() {
        let counts = [13u64; GRAY_LEVELS];
        let h = Histogram::from_counts(counts).unwrap();
        let t = th(&[129]);
        let reference = naive_pef(&h, &t);
        let got = pef_fitness(&h, &t);
        assert!(
            (got - reference).abs() <= 1e-9 * reference.abs().max(1.0),
            "got {got}, reference {reference}"
        );
    }

    #[test]
    fn evaluator_matches_naive_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let occupied = rng.random_range(3..40);
            let h = random_hist(&mut rng, occupied);
            let n = rng.random_range(1..6);
            let t = random_th(&mut rng, n);
            let scale = |x: f64| x.abs().max(1.0);
            let ce = cross_entropy_fitness(&h, &t);
            assert!((ce - naive_ce(&h, &t)).abs() <= 1e-9 * scale(ce));
            let pef = pef_fitness(&h, &t);
            assert!((pef - naive_pef(&h, &t)).abs() <= 1e-9 * scale(pef));
            let mse = mse_fitness(&h, &t);
            assert!((mse - naive_mse(&h, &t)).abs() <= 1e-9 * scale(mse));
        }
    }

    #[test]
    fn hybrid_degenerate_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let h = random_hist(&mut rng, 12);
            let t = random_th(&mut rng, 3);
            let ce_only = hybrid_fitness(&h, &t, ObjectiveWeights::new(1.0, 0.0).unwrap());
            assert_eq!(ce_only, cross_entropy_fitness(&h, &t));
            let pef_only = hybrid_fitness(&h, &t, ObjectiveWeights::new(0.0, 1.0).unwrap());
            assert_eq!(pef_only, pef_fitness(&h, &t));
        }
    }

    #[test]
    fn hybrid_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w = ObjectiveWeights::default();
        for _ in 0..50 {
            let h = random_hist(&mut rng, 20);
            let t = random_th(&mut rng, 4);
            let combined = hybrid_fitness(&h, &t, w);
            let parts = w.alpha * cross_entropy_fitness(&h, &t) + w.beta * pef_fitness(&h, &t);
            assert!((combined - parts).abs() <= 1e-12 * parts.abs().max(1.0));
        }
    }

    #[test]
    fn mse_trivial_cases() {
        let single = hist_from_counts(&[(42, 9)]);
        assert_eq!(mse_fitness(&single, &th(&[100])), 0.0);

        // One pixel at level 10, one at level 20, both in one class of mean
        // level 15: deviations of +/-5 give a mean square of 25.
        let two = hist_from_counts(&[(9, 1), (19, 1)]);
        let f = mse_fitness(&two, &th(&[250]));
        assert_eq!(f, 25.0);
    }

    #[test]
    fn mse_matches_pixel_space_mse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let h = random_hist(&mut rng, 16);
            let n = rng.random_range(1..5);
            let t = random_th(&mut rng, n);
            // Realize the histogram as an image.
            let mut pixels = Vec::new();
            for (bin, &c) in h.counts().iter().enumerate() {
                pixels.extend(std::iter::repeat_n(bin as u8, c as usize));
            }
            let side = (pixels.len() as f64).sqrt().ceil() as u32;
            pixels.resize((side * side) as usize, pixels[0]);
            let img = GrayImage::new(side, side, pixels).unwrap();
            let h_img = compute_histogram(&img);
            let seg = apply_thresholds(&img, &t, &h_img).unwrap();
            let pixel_mse: f64 = img
                .pixels()
                .iter()
                .zip(seg.pixels())
                .map(|(&a, &b)| {
                    let d = f64::from(a) - f64::from(b);
                    d * d
                })
                .sum::<f64>()
                / img.pixels().len() as f64;
            let hist_mse = mse_fitness(&h_img, &t);
            assert!(
                (hist_mse - pixel_mse).abs() <= 1e-9 * pixel_mse.max(1.0),
                "hist {hist_mse} vs pixel {pixel_mse}"
            );
        }
    }

    #[test]
    fn mse_nonnegative_zero_iff_single_intensity_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let occupied = rng.random_range(2..30);
            let h = random_hist(&mut rng, occupied);
            let n = rng.random_range(1..5);
            let t = random_th(&mut rng, n);
            let f = mse_fitness(&h, &t);
            assert!(f >= 0.0);
            let every_class_single = t.class_ranges().iter().all(|&(lo, hi)| {
                (lo..hi).filter(|&l| h.count_at_level(l) > 0).count() <= 1
            });
            if every_class_single {
                assert_eq!(f, 0.0);
            } else {
                assert!(f > 0.0);
            }
        }
    }

    #[test]
    fn fitness_depends_only_on_histogram() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut pixels: Vec<u8> = (0..1024u32).map(|i| ((i * 31 + 5) % 253) as u8).collect();
        let img = GrayImage::new(32, 32, pixels.clone()).unwrap();
        // Fisher-Yates shuffle.
        for i in (1..pixels.len()).rev() {
            let j = rng.random_range(0..=i);
            pixels.swap(i, j);
        }
        let shuffled = GrayImage::new(32, 32, pixels).unwrap();
        let (h1, h2) = (compute_histogram(&img), compute_histogram(&shuffled));
        let t = th(&[60, 120, 190]);
        let w = ObjectiveWeights::default();
        assert_eq!(cross_entropy_fitness(&h1, &t), cross_entropy_fitness(&h2, &t));
        assert_eq!(pef_fitness(&h1, &t), pef_fitness(&h2, &t));
        assert_eq!(hybrid_fitness(&h1, &t, w), hybrid_fitness(&h2, &t, w));
        assert_eq!(mse_fitness(&h1, &t), mse_fitness(&h2, &t));
    }

    #[test]
    fn ce_scales_linearly_and_argmin_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let h = random_hist(&mut rng, 24);
        let mut doubled = *h.counts();
        for c in doubled.iter_mut() {
            *c *= 2;
        }
        let h2 = Histogram::from_counts(doubled).unwrap();
        let argmin = |hist: &Histogram| -> u16 {
            (2..=256u16)
                .min_by(|&a, &b| {
                    cross_entropy_fitness(hist, &th(&[a]))
                        .partial_cmp(&cross_entropy_fitness(hist, &th(&[b])))
                        .unwrap()
                })
                .unwrap()
        };
        let t = th(&[77, 155]);
        let f1 = cross_entropy_fitness(&h, &t);
        let f2 = cross_entropy_fitness(&h2, &t);
        assert!((f2 - 2.0 * f1).abs() <= 1e-9 * f2.abs().max(1.0));
        assert_eq!(argmin(&h), argmin(&h2));
    }

    #[test]
    fn weights_validation() {
        assert!(ObjectiveWeights::new(-0.1, 0.5).is_err());
        assert!(ObjectiveWeights::new(0.0, 0.0).is_err());
        assert!(ObjectiveWeights::new(0.35, 0.65).is_ok());
    }
}
