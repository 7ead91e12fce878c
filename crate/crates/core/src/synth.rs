//! Bundled synthetic test corpus: deterministic multi-modal images and
//! histograms used by the verification suites and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::imagery::{GrayImage, Histogram, GRAY_LEVELS};

/// Deterministic multi-modal image: `n_modes` Voronoi cells, each with its
/// own mean intensity, plus mild Gaussian pixel noise.
pub fn multimodal_image(seed: u64, width: u32, height: u32, n_modes: usize) -> GrayImage {
    assert!(n_modes >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sites: Vec<(f64, f64)> = (0..n_modes)
        .map(|_| {
            (
                rng.random::<f64>() * f64::from(width),
                rng.random::<f64>() * f64::from(height),
            )
        })
        .collect();
    let span = 220.0 / (n_modes - 1) as f64;
    let means: Vec<f64> = (0..n_modes)
        .map(|k| 15.0 + k as f64 * span + rng.random_range(-8.0..8.0))
        .collect();
    let noise = Normal::new(0.0, 7.0).expect("valid sigma");
    let mut pixels = Vec::with_capacity((width * height) as usize);
    for y in 0..height {
        for x in 0..width {
            let (fx, fy) = (f64::from(x), f64::from(y));
            let nearest = sites
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    let da = (a.0 - fx).powi(2) + (a.1 - fy).powi(2);
                    let db = (b.0 - fx).powi(2) + (b.1 - fy).powi(2);
                    da.partial_cmp(&db).unwrap()
                })
                .map(|(k, _)| k)
                .unwrap();
            let value = means[nearest] + noise.sample(&mut rng);
            pixels.push(value.round().clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage::new(width, height, pixels).expect("positive dimensions")
}

/// Eight fixed multi-modal images (96x96, four to six modes each).
pub fn bundled_corpus() -> Vec<(String, GrayImage)> {
    (0..8u64)
        .map(|i| {
            let modes = 4 + (i % 3) as usize;
            (
                format!("synthetic_{i:02}"),
                multimodal_image(1000 + i, 96, 96, modes),
            )
        })
        .collect()
}

/// Histogram with exactly `occupied` nonzero bins at random positions.
pub fn random_histogram<R: Rng>(rng: &mut R, occupied: usize, max_count: u64) -> Histogram {
    assert!((1..=GRAY_LEVELS).contains(&occupied));
    let mut counts = [0u64; GRAY_LEVELS];
    let mut placed = 0;
    while placed < occupied {
        let bin = rng.random_range(0..GRAY_LEVELS);
        if counts[bin] == 0 {
            counts[bin] = rng.random_range(1..=max_count);
            placed += 1;
        }
    }
    Histogram::from_counts(counts).expect("occupied >= 1")
}

/// Two-spike histogram at the given pixel values.
pub fn two_spike_histogram(pixel_a: u8, pixel_b: u8, count: u64) -> Histogram {
    assert_ne!(pixel_a, pixel_b);
    let mut counts = [0u64; GRAY_LEVELS];
    counts[pixel_a as usize] = count;
    counts[pixel_b as usize] = count;
    Histogram::from_counts(counts).expect("non-empty")
}
