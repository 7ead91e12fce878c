//! Shared filtering kernels for the metric implementations.
//!
//! Convolutions follow the conventions of the metrics' reference
//! implementations: `conv2_same` is a true (kernel-flipping) zero-padded
//! convolution whose `same` crop starts at `ceil((k - 1) / 2)` — for even
//! kernels that is one past the scipy convention, matching the originals.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Normalized 1-D Gaussian taps of length `size` (odd), std `sigma`.
pub fn gaussian_kernel(size: usize, sigma: f64) -> Vec<f64> {
    assert!(size % 2 == 1);
    let half = (size / 2) as isize;
    let mut taps: Vec<f64> = (-half..=half)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in taps.iter_mut() {
        *t /= sum;
    }
    taps
}

/// Separable valid-region filtering with an outer-product kernel
/// `col_taps * row_taps`. Output is `(h - k + 1) x (w - k + 1)`.
pub fn separable_filter_valid(
    data: &[f64],
    width: usize,
    height: usize,
    taps: &[f64],
) -> (Vec<f64>, usize, usize) {
    let k = taps.len();
    let out_w = width - k + 1;
    let out_h = height - k + 1;
    // Horizontal pass.
    let mut tmp = vec![0.0; out_w * height];
    let run_rows = |rows: &mut [f64], y0: usize| {
        for (dy, row) in rows.chunks_mut(out_w).enumerate() {
            let y = y0 + dy;
            for (x, out) in row.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, &t) in taps.iter().enumerate() {
                    acc += t * data[y * width + x + j];
                }
                *out = acc;
            }
        }
    };
    #[cfg(feature = "parallel")]
    tmp.par_chunks_mut(out_w)
        .enumerate()
        .for_each(|(y, row)| run_rows(row, y));
    #[cfg(not(feature = "parallel"))]
    run_rows(&mut tmp, 0);

    // Vertical pass.
    let mut out = vec![0.0; out_w * out_h];
    let run_cols = |rows: &mut [f64], y0: usize| {
        for (dy, row) in rows.chunks_mut(out_w).enumerate() {
            let y = y0 + dy;
            for (x, cell) in row.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, &t) in taps.iter().enumerate() {
                    acc += t * tmp[(y + j) * out_w + x];
                }
                *cell = acc;
            }
        }
    };
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(out_w)
        .enumerate()
        .for_each(|(y, row)| run_cols(row, y));
    #[cfg(not(feature = "parallel"))]
    run_cols(&mut out, 0);

    (out, out_w, out_h)
}

/// True 2-D convolution, zero padded, cropped to the input size with the
/// reference-style offset `ceil((k - 1) / 2)` per axis.
pub fn conv2_same(
    data: &[f64],
    width: usize,
    height: usize,
    kernel: &[f64],
    kw: usize,
    kh: usize,
) -> Vec<f64> {
    let off_y = kh / 2; // ceil((kh - 1) / 2) for both parities
    let off_x = kw / 2;
    let mut out = vec![0.0; width * height];
    let run = |rows: &mut [f64], y0: usize| {
        for (dy, row) in rows.chunks_mut(width).enumerate() {
            let y = y0 + dy;
            for (x, cell) in row.iter_mut().enumerate() {
                // Full-convolution coordinates of this output cell.
                let fy = y + off_y;
                let fx = x + off_x;
                let mut acc = 0.0;
                for ky in 0..kh {
                    let Some(sy) = fy.checked_sub(ky) else { continue };
                    if sy >= height {
                        continue;
                    }
                    for kx in 0..kw {
                        let Some(sx) = fx.checked_sub(kx) else { continue };
                        if sx >= width {
                            continue;
                        }
                        acc += kernel[ky * kw + kx] * data[sy * width + sx];
                    }
                }
                *cell = acc;
            }
        }
    };
    #[cfg(feature = "parallel")]
    out.par_chunks_mut(width)
        .enumerate()
        .for_each(|(y, row)| run(row, y));
    #[cfg(not(feature = "parallel"))]
    run(&mut out, 0);
    out
}

/// Scharr gradient magnitude, zero-padded same-size.
pub fn scharr_magnitude(data: &[f64], width: usize, height: usize) -> Vec<f64> {
    const DX: [f64; 9] = [
        3.0 / 16.0,
        0.0,
        -3.0 / 16.0,
        10.0 / 16.0,
        0.0,
        -10.0 / 16.0,
        3.0 / 16.0,
        0.0,
        -3.0 / 16.0,
    ];
    const DY: [f64; 9] = [
        3.0 / 16.0,
        10.0 / 16.0,
        3.0 / 16.0,
        0.0,
        0.0,
        0.0,
        -3.0 / 16.0,
        -10.0 / 16.0,
        -3.0 / 16.0,
    ];
    let gx = conv2_same(data, width, height, &DX, 3, 3);
    let gy = conv2_same(data, width, height, &DY, 3, 3);
    gx.iter()
        .zip(&gy)
        .map(|(&a, &b)| (a * a + b * b).sqrt())
        .collect()
}

/// Mean of a slice.
pub fn mean(data: &[f64]) -> f64 {
    data.iter().sum::<f64>() / data.len() as f64
}

/// Population variance (divides by N).
pub fn variance(data: &[f64], mu: f64) -> f64 {
    data.iter().map(|&x| (x - mu) * (x - mu)).sum::<f64>() / data.len() as f64
}

/// Population covariance of equal-length slices.
pub fn covariance(a: &[f64], mu_a: f64, b: &[f64], mu_b: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - mu_a) * (y - mu_b))
        .sum::<f64>()
        / a.len() as f64
}
