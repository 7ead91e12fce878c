//! Haar-wavelet perceptual similarity.
//!
//! Follows the metric's published grayscale pipeline: mean-filter and
//! subsample by two, decompose with three dyadic Haar scales in both
//! orientations, build local similarities from the first two scales
//! (stabilizer `C = 30`), map them through a logistic with `alpha = 4.2`,
//! weight by the pointwise maximum third-scale magnitude, and square the
//! inverse-logistic of the weighted average.

use crate::error::{Error, Result};
use crate::imagery::GrayImage;
use crate::metrics::filters::conv2_same;

const C: f64 = 30.0;
const ALPHA: f64 = 4.2;
const N_SCALES: usize = 3;

pub fn hpsi(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    let (fa, w, h) = subsample(a);
    let (fb, _, _) = subsample(b);
    // The third-scale Haar kernel spans 8 samples.
    if w < 8 || h < 8 {
        return Err(Error::ImageTooSmall {
            need: 16,
            width: a.width(),
            height: a.height(),
        });
    }

    let coeffs_a = haar_decompose(&fa, w, h);
    let coeffs_b = haar_decompose(&fb, w, h);

    let mut num = 0.0;
    let mut den = 0.0;
    for ori in 0..2 {
        for i in 0..w * h {
            let mut local = 0.0;
            for scale in 0..2 {
                let ca = coeffs_a[ori][scale][i].abs();
                let cb = coeffs_b[ori][scale][i].abs();
                local += (2.0 * ca * cb + C) / (ca * ca + cb * cb + C);
            }
            let hs = logistic(local / 2.0);
            let weight = coeffs_a[ori][2][i].abs().max(coeffs_b[ori][2][i].abs());
            num += hs * weight;
            den += weight;
        }
    }
    let similarity = logistic_inv(num / den.max(f64::MIN_POSITIVE));
    Ok(similarity * similarity)
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-ALPHA * x).exp())
}

fn logistic_inv(y: f64) -> f64 {
    (y / (1.0 - y)).ln() / ALPHA
}

/// 2x2 mean filter followed by factor-2 decimation.
fn subsample(img: &GrayImage) -> (Vec<f64>, usize, usize) {
    let w = img.width() as usize;
    let h = img.height() as usize;
    let data = img.to_f64();
    let averaged = conv2_same(&data, w, h, &[0.25; 4], 2, 2);
    let ow = w.div_ceil(2);
    let oh = h.div_ceil(2);
    let mut out = Vec::with_capacity(ow * oh);
    for y in (0..h).step_by(2) {
        for x in (0..w).step_by(2) {
            out.push(averaged[y * w + x]);
        }
    }
    (out, ow, oh)
}

/// Haar coefficient stacks `result[orientation][scale]`, same-size maps.
///
/// The scale-`j` kernel is the `2^j x 2^j` constant `2^-j` with its top half
/// negated; the second orientation uses its transpose.
fn haar_decompose(data: &[f64], w: usize, h: usize) -> [Vec<Vec<f64>>; 2] {
    let mut horizontal = Vec::with_capacity(N_SCALES);
    let mut vertical = Vec::with_capacity(N_SCALES);
    for j in 1..=N_SCALES {
        let size = 1usize << j;
        let gain = 2f64.powi(-(j as i32));
        let mut kernel = vec![gain; size * size];
        for cell in kernel.iter_mut().take(size * size / 2) {
            *cell = -gain;
        }
        horizontal.push(conv2_same(data, w, h, &kernel, size, size));
        let mut transposed = vec![0.0; size * size];
        for y in 0..size {
            for x in 0..size {
                transposed[x * size + y] = kernel[y * size + x];
            }
        }
        vertical.push(conv2_same(data, w, h, &transposed, size, size));
    }
    [horizontal, vertical]
}
