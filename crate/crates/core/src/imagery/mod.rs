//! Image and histogram data model, threshold application, and I/O.
//!
//! All thresholding math runs on 1-based gray *levels* in `[1, 256]`: a pixel
//! value `v` in `[0, 255]` corresponds to level `v + 1`. This keeps the
//! level-weighted logarithm `i * h(i) * ln(i)` defined on every bin, since
//! `ln(0)` never appears. Thresholds are stored as levels; anything that
//! leaves the library (reports, CSV sidecars, segmented images) is converted
//! back to pixel values.

mod io;

pub use io::{load_image, save_image};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of representable gray levels.
pub const GRAY_LEVELS: usize = 256;

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Builds an image, checking that `pixels.len() == width * height` and
    /// that both dimensions are positive.
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.is_empty() {
            return Err(Error::EmptyInput);
        }
        if pixels.len() != (width as usize) * (height as usize) {
            return Err(Error::InvalidThresholds(format!(
                "pixel buffer length {} does not match {}x{}",
                pixels.len(),
                width,
                height
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Pixel at (x, y); panics on out-of-range coordinates.
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[(y as usize) * (self.width as usize) + (x as usize)]
    }

    /// Pixel values as `f64`, row-major, for metric computations.
    pub fn to_f64(&self) -> Vec<f64> {
        self.pixels.iter().map(|&p| f64::from(p)).collect()
    }
}

/// 256-bin occurrence counts with derived probabilities.
///
/// Bin `i` (0-based) counts pixels of value `i`, i.e. gray level `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    counts: [u64; GRAY_LEVELS],
    total: u64,
    probs: [f64; GRAY_LEVELS],
}

impl Histogram {
    /// Builds a histogram from raw bin counts. At least one count must be
    /// nonzero.
    pub fn from_counts(counts: [u64; GRAY_LEVELS]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyInput);
        }
        let mut probs = [0.0; GRAY_LEVELS];
        for (p, &c) in probs.iter_mut().zip(counts.iter()) {
            *p = c as f64 / total as f64;
        }
        Ok(Self {
            counts,
            total,
            probs,
        })
    }

    pub fn counts(&self) -> &[u64; GRAY_LEVELS] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn probs(&self) -> &[f64; GRAY_LEVELS] {
        &self.probs
    }

    /// Count at gray level `level` in `[1, 256]`.
    pub fn count_at_level(&self, level: u32) -> u64 {
        self.counts[(level - 1) as usize]
    }

    /// Probability mass at gray level `level` in `[1, 256]`.
    pub fn prob_at_level(&self, level: u32) -> f64 {
        self.probs[(level - 1) as usize]
    }

    /// Number of bins with a nonzero count.
    pub fn occupied_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// Tallies the exact per-value pixel counts of an image.
pub fn compute_histogram(image: &GrayImage) -> Histogram {
    let mut counts = [0u64; GRAY_LEVELS];
    for &p in image.pixels() {
        counts[p as usize] += 1;
    }
    // GrayImage construction guarantees at least one pixel.
    Histogram::from_counts(counts).expect("non-empty image")
}

/// Inclusive threshold bounds, expressed as gray levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: u16,
    pub upper: u16,
}

impl Bounds {
    pub fn new(lower: u16, upper: u16) -> Result<Self> {
        if lower < 1 || upper > GRAY_LEVELS as u16 || lower >= upper {
            return Err(Error::InfeasibleParams(format!(
                "bounds [{lower}, {upper}] must satisfy 1 <= lower < upper <= {GRAY_LEVELS}"
            )));
        }
        Ok(Self { lower, upper })
    }

    /// Number of integer levels in the range.
    pub fn span(&self) -> usize {
        (self.upper - self.lower + 1) as usize
    }

    pub fn contains(&self, level: u16) -> bool {
        level >= self.lower && level <= self.upper
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            lower: 1,
            upper: GRAY_LEVELS as u16,
        }
    }
}

/// Sorted, pairwise-distinct integer thresholds (gray levels).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ThresholdVector {
    values: Vec<u16>,
}

impl ThresholdVector {
    /// Validates ordering, distinctness, and bounds.
    pub fn new(values: Vec<u16>, bounds: Bounds) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidThresholds("no thresholds".into()));
        }
        for w in values.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidThresholds(format!(
                    "values must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for &v in &values {
            if !bounds.contains(v) {
                return Err(Error::InvalidThresholds(format!(
                    "threshold {v} outside [{}, {}]",
                    bounds.lower, bounds.upper
                )));
            }
        }
        Ok(Self { values })
    }

    /// Number of thresholds.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Thresholds as gray levels, ascending.
    pub fn levels(&self) -> &[u16] {
        &self.values
    }

    /// Thresholds converted to pixel values (`level - 1`).
    pub fn pixel_values(&self) -> Vec<u8> {
        self.values.iter().map(|&v| (v - 1) as u8).collect()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.values.iter().map(|&v| f64::from(v)).collect()
    }

    /// Half-open class ranges `[lo, hi)` over levels, in class order.
    /// A vector of N thresholds yields N + 1 ranges covering `[1, 257)`.
    pub fn class_ranges(&self) -> Vec<(u32, u32)> {
        let mut ranges = Vec::with_capacity(self.values.len() + 1);
        let mut lo = 1u32;
        for &t in &self.values {
            ranges.push((lo, u32::from(t)));
            lo = u32::from(t);
        }
        ranges.push((lo, GRAY_LEVELS as u32 + 1));
        ranges
    }

    /// Index of the class containing gray level `level`.
    pub fn class_of_level(&self, level: u16) -> usize {
        self.values.iter().take_while(|&&t| t <= level).count()
    }

    /// Builds a valid vector from real-valued candidates: each component is
    /// rounded, clamped to `bounds`, and duplicates are nudged to the nearest
    /// unused level (trying +1, -1, +2, -2, ...). Returns `None` when the
    /// range has no room left, in which case callers keep their previous
    /// position.
    pub fn repair(raw: &[f64], bounds: Bounds) -> Option<Self> {
        let mut used = [false; GRAY_LEVELS + 2];
        let mut values = Vec::with_capacity(raw.len());
        for &x in raw {
            let rounded = x.round().clamp(f64::from(bounds.lower), f64::from(bounds.upper)) as i32;
            let mut placed = None;
            if !used[rounded as usize] {
                placed = Some(rounded);
            } else {
                for step in 1..=(bounds.upper - bounds.lower) as i32 {
                    for cand in [rounded + step, rounded - step] {
                        if cand >= i32::from(bounds.lower)
                            && cand <= i32::from(bounds.upper)
                            && !used[cand as usize]
                        {
                            placed = Some(cand);
                            break;
                        }
                    }
                    if placed.is_some() {
                        break;
                    }
                }
            }
            let v = placed? as u16;
            used[v as usize] = true;
            values.push(v);
        }
        values.sort_unstable();
        Some(Self { values })
    }
}

/// Intensity-weighted mean of levels `[lo, hi)`, i.e.
/// `sum(i * h(i)) / sum(h(i))` over `i in lo..hi`.
///
/// An empty range (no pixels in any of its bins) yields the range midpoint
/// `(lo + hi - 1) / 2`, which keeps threshold application total.
pub fn class_mean(hist: &Histogram, lo: u32, hi: u32) -> Result<f64> {
    if lo >= hi {
        return Err(Error::DegenerateRange { lo, hi });
    }
    if lo < 1 || hi > GRAY_LEVELS as u32 + 1 {
        return Err(Error::DegenerateRange { lo, hi });
    }
    let mut weighted = 0.0;
    let mut mass = 0.0;
    for level in lo..hi {
        let c = hist.count_at_level(level) as f64;
        weighted += f64::from(level) * c;
        mass += c;
    }
    if mass == 0.0 {
        Ok(f64::from(lo + hi - 1) / 2.0)
    } else {
        Ok(weighted / mass)
    }
}

/// Replaces every pixel by the rounded mean of its class.
///
/// Classes are the half-open level ranges from [`ThresholdVector::class_ranges`];
/// the reconstruction value of a class is `round(class_mean) - 1` as a pixel
/// value. `hist` must be the histogram of `image`.
pub fn apply_thresholds(
    image: &GrayImage,
    th: &ThresholdVector,
    hist: &Histogram,
) -> Result<GrayImage> {
    let mut lut = [0u8; GRAY_LEVELS];
    for (lo, hi) in th.class_ranges() {
        if lo == hi {
            continue; // a threshold at the lower bound makes class 0 memberless
        }
        let mean = class_mean(hist, lo, hi)?;
        let recon_level = mean.round().clamp(1.0, GRAY_LEVELS as f64);
        let recon_pixel = (recon_level - 1.0) as u8;
        for level in lo..hi {
            lut[(level - 1) as usize] = recon_pixel;
        }
    }
    let pixels = image.pixels().iter().map(|&p| lut[p as usize]).collect();
    GrayImage::new(image.width(), image.height(), pixels)
}
