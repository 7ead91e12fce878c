//! Feature-similarity index: phase congruency plus gradient similarity.
//!
//! Phase congruency uses a log-Gabor bank of 4 scales (wavelengths 6, 12,
//! 24, 48, `sigma_onf = 0.55`) by 4 orientations (angular sigma
//! `pi/4/1.2`), with median-based noise compensation (`k = 2` deviations,
//! empirical 1/1.7 rescale) and a 15th-order Butterworth-style low-pass at
//! 0.45 of Nyquist. Gradients come from the Scharr operator. The two maps
//! combine with stabilizers `T1 = 0.85` (phase) and `T2 = 160` (gradient),
//! weighted by the pointwise maximum phase congruency. Inputs larger than
//! roughly 384 px are mean-filtered and decimated first, mirroring the
//! metric's published implementation.

#![allow(clippy::needless_range_loop)] // indexed loops mirror the per-pixel math

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::imagery::GrayImage;
use crate::metrics::filters::scharr_magnitude;

const NSCALE: usize = 4;
const NORIENT: usize = 4;
const MIN_WAVELENGTH: f64 = 6.0;
const MULT: f64 = 2.0;
const SIGMA_ONF: f64 = 0.55;
const D_THETA_ON_SIGMA: f64 = 1.2;
const NOISE_K: f64 = 2.0;
const EPSILON: f64 = 1e-4;
const T1: f64 = 0.85;
const T2: f64 = 160.0;

pub fn fsim(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    let (fa, w, h) = downsample(a);
    let (fb, _, _) = downsample(b);
    if w < 3 || h < 3 {
        return Err(Error::ImageTooSmall {
            need: 3,
            width: a.width(),
            height: a.height(),
        });
    }

    let bank = FilterBank::new(w, h);
    let (pc1, pc2) = {
        #[cfg(feature = "parallel")]
        {
            let mut results: Vec<Vec<f64>> = [&fa, &fb]
                .par_iter()
                .map(|img| phase_congruency(img, w, h, &bank))
                .collect();
            let second = results.pop().expect("two inputs");
            let first = results.pop().expect("two inputs");
            (first, second)
        }
        #[cfg(not(feature = "parallel"))]
        {
            (
                phase_congruency(&fa, w, h, &bank),
                phase_congruency(&fb, w, h, &bank),
            )
        }
    };
    let g1 = scharr_magnitude(&fa, w, h);
    let g2 = scharr_magnitude(&fb, w, h);

    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..w * h {
        let s_pc = (2.0 * pc1[i] * pc2[i] + T1) / (pc1[i] * pc1[i] + pc2[i] * pc2[i] + T1);
        let s_g = (2.0 * g1[i] * g2[i] + T2) / (g1[i] * g1[i] + g2[i] * g2[i] + T2);
        let pcm = pc1[i].max(pc2[i]);
        num += s_pc * s_g * pcm;
        den += pcm;
    }
    Ok(num / den.max(f64::MIN_POSITIVE))
}

/// Mean-filter and decimate by `F = max(1, round(min_dim / 256))`.
fn downsample(img: &GrayImage) -> (Vec<f64>, usize, usize) {
    let w = img.width() as usize;
    let h = img.height() as usize;
    let data = img.to_f64();
    let f = ((w.min(h) as f64) / 256.0).round().max(1.0) as usize;
    if f == 1 {
        return (data, w, h);
    }
    let averaged = crate::metrics::filters::conv2_same(
        &data,
        w,
        h,
        &vec![1.0 / (f * f) as f64; f * f],
        f,
        f,
    );
    let ow = w.div_ceil(f);
    let oh = h.div_ceil(f);
    let mut out = Vec::with_capacity(ow * oh);
    for y in (0..h).step_by(f) {
        for x in (0..w).step_by(f) {
            out.push(averaged[y * w + x]);
        }
    }
    (out, ow, oh)
}

/// Image-independent part of the bank: the 16 frequency-domain filters plus
/// the spatial-domain energy sums the noise model needs.
struct FilterBank {
    /// `filters[o][s]`, each `w*h` real gains in FFT layout.
    filters: Vec<Vec<Vec<f64>>>,
    /// `sum(filter^2)` of the smallest-scale filter, per orientation.
    em_n: Vec<f64>,
    /// `sum_x sum_s ifft(filter_s)^2`, per orientation.
    sum_an2: Vec<f64>,
    /// `sum_x sum_{si<sj} ifft(filter_si) * ifft(filter_sj)`, per orientation.
    sum_aiaj: Vec<f64>,
}

impl FilterBank {
    fn new(w: usize, h: usize) -> Self {
        let n = w * h;
        let (radius, theta) = frequency_grids(w, h);
        // Low-pass gain from the raw radius (DC stays 0 there).
        let lp: Vec<f64> = radius
            .iter()
            .map(|&r| 1.0 / (1.0 + (r / 0.45).powi(30)))
            .collect();
        let mut radius = radius;
        radius[0] = 1.0; // avoid log(0) at DC; the DC gain is zeroed below

        let log_sigma = SIGMA_ONF.ln();
        let mut log_gabor = Vec::with_capacity(NSCALE);
        for s in 0..NSCALE {
            let wavelength = MIN_WAVELENGTH * MULT.powi(s as i32);
            let f0 = 1.0 / wavelength;
            let mut g: Vec<f64> = radius
                .iter()
                .zip(&lp)
                .map(|(&r, &l)| {
                    let v = (r / f0).ln();
                    (-(v * v) / (2.0 * log_sigma * log_sigma)).exp() * l
                })
                .collect();
            g[0] = 0.0;
            log_gabor.push(g);
        }

        let theta_sigma = std::f64::consts::PI / NORIENT as f64 / D_THETA_ON_SIGMA;
        let mut spreads = Vec::with_capacity(NORIENT);
        for o in 0..NORIENT {
            let angl = o as f64 * std::f64::consts::PI / NORIENT as f64;
            let (sin_a, cos_a) = angl.sin_cos();
            let spread: Vec<f64> = theta
                .iter()
                .map(|&t| {
                    let (sin_t, cos_t) = t.sin_cos();
                    let ds = sin_t * cos_a - cos_t * sin_a;
                    let dc = cos_t * cos_a + sin_t * sin_a;
                    let dtheta = ds.atan2(dc).abs();
                    (-(dtheta * dtheta) / (2.0 * theta_sigma * theta_sigma)).exp()
                })
                .collect();
            spreads.push(spread);
        }

        let mut planner = FftPlanner::new();
        let mut filters = Vec::with_capacity(NORIENT);
        let mut em_n = Vec::with_capacity(NORIENT);
        let mut sum_an2 = Vec::with_capacity(NORIENT);
        let mut sum_aiaj = Vec::with_capacity(NORIENT);
        for o in 0..NORIENT {
            let mut per_scale = Vec::with_capacity(NSCALE);
            let mut ifft_filters: Vec<Vec<f64>> = Vec::with_capacity(NSCALE);
            for s in 0..NSCALE {
                let filter: Vec<f64> = log_gabor[s]
                    .iter()
                    .zip(&spreads[o])
                    .map(|(&g, &sp)| g * sp)
                    .collect();
                let mut buf: Vec<Complex<f64>> =
                    filter.iter().map(|&x| Complex::new(x, 0.0)).collect();
                ifft2(&mut buf, w, h, &mut planner);
                let scale = (n as f64).sqrt();
                ifft_filters.push(buf.iter().map(|c| c.re * scale).collect());
                per_scale.push(filter);
            }
            em_n.push(per_scale[0].iter().map(|&x| x * x).sum());
            let mut an2 = 0.0;
            let mut aiaj = 0.0;
            for i in 0..n {
                for si in 0..NSCALE {
                    let v = ifft_filters[si][i];
                    an2 += v * v;
                    for sj in si + 1..NSCALE {
                        aiaj += v * ifft_filters[sj][i];
                    }
                }
            }
            sum_an2.push(an2);
            sum_aiaj.push(aiaj);
            filters.push(per_scale);
        }
        Self {
            filters,
            em_n,
            sum_an2,
            sum_aiaj,
        }
    }
}

/// Phase congruency map of one image over the shared bank.
fn phase_congruency(data: &[f64], w: usize, h: usize, bank: &FilterBank) -> Vec<f64> {
    let n = w * h;
    let mut image_fft: Vec<Complex<f64>> = data.iter().map(|&x| Complex::new(x, 0.0)).collect();
    {
        let mut planner = FftPlanner::new();
        fft2(&mut image_fft, w, h, &mut planner);
    }

    let orientation_result = |o: usize| -> (Vec<f64>, Vec<f64>) {
        let mut planner = FftPlanner::new();
        let mut responses: Vec<Vec<Complex<f64>>> = Vec::with_capacity(NSCALE);
        for s in 0..NSCALE {
            let mut buf: Vec<Complex<f64>> = image_fft
                .iter()
                .zip(&bank.filters[o][s])
                .map(|(&c, &f)| c * f)
                .collect();
            ifft2(&mut buf, w, h, &mut planner);
            responses.push(buf);
        }
        let mut sum_e = vec![0.0; n];
        let mut sum_o = vec![0.0; n];
        let mut sum_an = vec![0.0; n];
        for resp in &responses {
            for i in 0..n {
                sum_e[i] += resp[i].re;
                sum_o[i] += resp[i].im;
                sum_an[i] += resp[i].norm();
            }
        }
        let mut energy = vec![0.0; n];
        for i in 0..n {
            let x_energy = (sum_e[i] * sum_e[i] + sum_o[i] * sum_o[i]).sqrt() + EPSILON;
            let mean_e = sum_e[i] / x_energy;
            let mean_o = sum_o[i] / x_energy;
            for resp in &responses {
                let (e, oo) = (resp[i].re, resp[i].im);
                energy[i] += e * mean_e + oo * mean_o - (e * mean_o - oo * mean_e).abs();
            }
        }
        // Noise threshold from the median response energy at the smallest
        // scale, propagated through the bank's spatial energy sums.
        let mut e2: Vec<f64> = responses[0].iter().map(|c| c.norm_sqr()).collect();
        let median_e2n = median_in_place(&mut e2);
        let mean_e2n = median_e2n / std::f64::consts::LN_2;
        let noise_power = mean_e2n / bank.em_n[o];
        let est_noise_energy2 =
            2.0 * noise_power * bank.sum_an2[o] + 4.0 * noise_power * bank.sum_aiaj[o];
        let tau = (est_noise_energy2 / 2.0).sqrt();
        let est_noise_energy = tau * (std::f64::consts::PI / 2.0).sqrt();
        let est_noise_sigma = ((2.0 - std::f64::consts::PI / 2.0) * tau * tau).sqrt();
        let t = (est_noise_energy + NOISE_K * est_noise_sigma) / 1.7;
        for e in energy.iter_mut() {
            *e = (*e - t).max(0.0);
        }
        (energy, sum_an)
    };

    #[cfg(feature = "parallel")]
    let per_orientation: Vec<(Vec<f64>, Vec<f64>)> =
        (0..NORIENT).into_par_iter().map(orientation_result).collect();
    #[cfg(not(feature = "parallel"))]
    let per_orientation: Vec<(Vec<f64>, Vec<f64>)> =
        (0..NORIENT).map(orientation_result).collect();

    let mut energy_all = vec![0.0; n];
    let mut an_all = vec![0.0; n];
    for (energy, an) in &per_orientation {
        for i in 0..n {
            energy_all[i] += energy[i];
            an_all[i] += an[i];
        }
    }
    (0..n).map(|i| energy_all[i] / an_all[i]).collect()
}

/// Centered frequency grids in FFT (DC-first) layout: radial frequency and
/// angle `atan2(-y, x)`.
fn frequency_grids(w: usize, h: usize) -> (Vec<f64>, Vec<f64>) {
    let axis = |len: usize| -> Vec<f64> {
        if len % 2 == 1 {
            let half = (len - 1) as isize / 2;
            (-half..=half)
                .map(|i| i as f64 / (len - 1) as f64)
                .collect()
        } else {
            let half = len as isize / 2;
            (-half..half).map(|i| i as f64 / len as f64).collect()
        }
    };
    let xs = ifftshift_axis(&axis(w));
    let ys = ifftshift_axis(&axis(h));
    let mut radius = Vec::with_capacity(w * h);
    let mut theta = Vec::with_capacity(w * h);
    for &y in &ys {
        for &x in &xs {
            radius.push((x * x + y * y).sqrt());
            theta.push((-y).atan2(x));
        }
    }
    (radius, theta)
}

fn ifftshift_axis(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let half = n / 2;
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&v[half..]);
    out.extend_from_slice(&v[..half]);
    out
}

fn fft2(buf: &mut [Complex<f64>], w: usize, h: usize, planner: &mut FftPlanner<f64>) {
    fft2_dir(buf, w, h, planner, false);
}

/// Inverse 2-D FFT with 1/(w*h) normalization.
fn ifft2(buf: &mut [Complex<f64>], w: usize, h: usize, planner: &mut FftPlanner<f64>) {
    fft2_dir(buf, w, h, planner, true);
    let norm = 1.0 / (w * h) as f64;
    for c in buf.iter_mut() {
        *c *= norm;
    }
}

fn fft2_dir(
    buf: &mut [Complex<f64>],
    w: usize,
    h: usize,
    planner: &mut FftPlanner<f64>,
    inverse: bool,
) {
    let row_fft = if inverse {
        planner.plan_fft_inverse(w)
    } else {
        planner.plan_fft_forward(w)
    };
    for row in buf.chunks_mut(w) {
        row_fft.process(row);
    }
    let col_fft = if inverse {
        planner.plan_fft_inverse(h)
    } else {
        planner.plan_fft_forward(h)
    };
    let mut col = vec![Complex::new(0.0, 0.0); h];
    for x in 0..w {
        for y in 0..h {
            col[y] = buf[y * w + x];
        }
        col_fft.process(&mut col);
        for y in 0..h {
            buf[y * w + x] = col[y];
        }
    }
}

fn median_in_place(v: &mut [f64]) -> f64 {
    v.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}
