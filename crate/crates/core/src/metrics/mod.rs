//! Six full-reference image-quality metrics comparing an original image
//! against its segmented reconstruction.
//!
//! All metrics are symmetric in their two arguments and attain their
//! maximum on identical inputs (PSNR returns the infinity sentinel there;
//! it serializes to JSON `null` and CSV `inf`). Variance and covariance
//! denominators carry a `1e-12` stabilizer so constant images stay finite;
//! the stabilizer is applied to the matching numerators as well, which
//! pins the degenerate all-constant cases at 1.

mod filters;
mod fsim;
mod hpsi;

pub use fsim::fsim;
pub use hpsi::hpsi;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::imagery::GrayImage;
use filters::{covariance, gaussian_kernel, mean, separable_filter_valid, variance};

const STABILIZER: f64 = 1e-12;
const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_C1: f64 = (0.01 * 255.0) * (0.01 * 255.0);
const SSIM_C2: f64 = (0.03 * 255.0) * (0.03 * 255.0);
const UIQI_WINDOW: usize = 8;

fn check_dims(a: &GrayImage, b: &GrayImage) -> Result<()> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    Ok(())
}

/// Peak signal-to-noise ratio in dB; identical images yield `+inf`.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_dims(a, b)?;
    let mse: f64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = f64::from(x) - f64::from(y);
            d * d
        })
        .sum::<f64>()
        / a.pixels().len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

/// Mean local structural similarity over 11x11 Gaussian windows
/// (sigma 1.5), stabilizers `(0.01*255)^2` and `(0.03*255)^2`.
pub fn ssim(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_dims(a, b)?;
    let w = a.width() as usize;
    let h = a.height() as usize;
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::ImageTooSmall {
            need: SSIM_WINDOW as u32,
            width: a.width(),
            height: a.height(),
        });
    }
    let fa = a.to_f64();
    let fb = b.to_f64();
    let taps = gaussian_kernel(SSIM_WINDOW, SSIM_SIGMA);
    let (mu_a, ow, oh) = separable_filter_valid(&fa, w, h, &taps);
    let (mu_b, _, _) = separable_filter_valid(&fb, w, h, &taps);
    let sq = |v: &[f64]| -> Vec<f64> { v.iter().map(|&x| x * x).collect() };
    let prod: Vec<f64> = fa.iter().zip(&fb).map(|(&x, &y)| x * y).collect();
    let (m_aa, _, _) = separable_filter_valid(&sq(&fa), w, h, &taps);
    let (m_bb, _, _) = separable_filter_valid(&sq(&fb), w, h, &taps);
    let (m_ab, _, _) = separable_filter_valid(&prod, w, h, &taps);

    let mut acc = 0.0;
    for i in 0..ow * oh {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = m_aa[i] - ma * ma;
        let var_b = m_bb[i] - mb * mb;
        let cov = m_ab[i] - ma * mb;
        let num = (2.0 * ma * mb + SSIM_C1) * (2.0 * cov + SSIM_C2);
        let den = (ma * ma + mb * mb + SSIM_C1) * (var_a + var_b + SSIM_C2);
        acc += num / den;
    }
    Ok(acc / (ow * oh) as f64)
}

/// Universal quality index over a single global window: the product of the
/// luminance factor `2 mu_a mu_b / (mu_a^2 + mu_b^2)` and the combined
/// correlation/contrast factor `2 cov / (var_a + var_b)`, each stabilized.
pub fn uiqi(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_dims(a, b)?;
    let fa = a.to_f64();
    let fb = b.to_f64();
    Ok(uiqi_from_slices(&fa, &fb))
}

fn uiqi_from_slices(fa: &[f64], fb: &[f64]) -> f64 {
    let mu_a = mean(fa);
    let mu_b = mean(fb);
    let var_a = variance(fa, mu_a);
    let var_b = variance(fb, mu_b);
    let cov = covariance(fa, mu_a, fb, mu_b);
    let luminance = (2.0 * mu_a * mu_b + STABILIZER) / (mu_a * mu_a + mu_b * mu_b + STABILIZER);
    let structure = (2.0 * cov + STABILIZER) / (var_a + var_b + STABILIZER);
    luminance * structure
}

/// Sliding-window variant: mean of the index over all 8x8 windows.
pub fn uiqi_windowed(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_dims(a, b)?;
    let w = a.width() as usize;
    let h = a.height() as usize;
    if w < UIQI_WINDOW || h < UIQI_WINDOW {
        return Err(Error::ImageTooSmall {
            need: UIQI_WINDOW as u32,
            width: a.width(),
            height: a.height(),
        });
    }
    let fa = a.to_f64();
    let fb = b.to_f64();
    let mut acc = 0.0;
    let mut count = 0usize;
    let mut wa = vec![0.0; UIQI_WINDOW * UIQI_WINDOW];
    let mut wb = vec![0.0; UIQI_WINDOW * UIQI_WINDOW];
    for y in 0..=h - UIQI_WINDOW {
        for x in 0..=w - UIQI_WINDOW {
            for dy in 0..UIQI_WINDOW {
                for dx in 0..UIQI_WINDOW {
                    wa[dy * UIQI_WINDOW + dx] = fa[(y + dy) * w + x + dx];
                    wb[dy * UIQI_WINDOW + dx] = fb[(y + dy) * w + x + dx];
                }
            }
            acc += uiqi_from_slices(&wa, &wb);
            count += 1;
        }
    }
    Ok(acc / count as f64)
}

/// Quality index on local variance: three stabilized factors over the
/// global statistics of 11x11 Gaussian-weighted local-variance maps.
pub fn qilv(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_dims(a, b)?;
    let w = a.width() as usize;
    let h = a.height() as usize;
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::ImageTooSmall {
            need: SSIM_WINDOW as u32,
            width: a.width(),
            height: a.height(),
        });
    }
    let taps = gaussian_kernel(SSIM_WINDOW, SSIM_SIGMA);
    let local_variance = |img: &GrayImage| -> Vec<f64> {
        let data = img.to_f64();
        let sq: Vec<f64> = data.iter().map(|&x| x * x).collect();
        let (mu, _, _) = separable_filter_valid(&data, w, h, &taps);
        let (m2, _, _) = separable_filter_valid(&sq, w, h, &taps);
        mu.iter().zip(&m2).map(|(&m, &s)| s - m * m).collect()
    };
    let va = local_variance(a);
    let vb = local_variance(b);
    let mu_a = mean(&va);
    let mu_b = mean(&vb);
    let sd_a = variance(&va, mu_a).sqrt();
    let sd_b = variance(&vb, mu_b).sqrt();
    let cov = covariance(&va, mu_a, &vb, mu_b);
    let f1 = (2.0 * mu_a * mu_b + STABILIZER) / (mu_a * mu_a + mu_b * mu_b + STABILIZER);
    let f2 = (2.0 * sd_a * sd_b + STABILIZER) / (sd_a * sd_a + sd_b * sd_b + STABILIZER);
    let f3 = (cov + STABILIZER) / (sd_a * sd_b + STABILIZER);
    Ok(f1 * f2 * f3)
}

/// All six metrics for one image pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    /// `None` encodes the infinite (identical images) sentinel.
    pub psnr: Option<f64>,
    pub psnr_infinite: bool,
    pub ssim: f64,
    pub fsim: f64,
    pub uiqi: f64,
    pub qilv: f64,
    pub hpsi: f64,
}

impl MetricReport {
    pub fn compute(a: &GrayImage, b: &GrayImage, windowed_uiqi: bool) -> Result<Self> {
        let p = psnr(a, b)?;
        Ok(Self {
            psnr: p.is_finite().then_some(p),
            psnr_infinite: p.is_infinite(),
            ssim: ssim(a, b)?,
            fsim: fsim(a, b)?,
            uiqi: if windowed_uiqi {
                uiqi_windowed(a, b)?
            } else {
                uiqi(a, b)?
            },
            qilv: qilv(a, b)?,
            hpsi: hpsi(a, b)?,
        })
    }

    pub fn psnr_value(&self) -> f64 {
        self.psnr.unwrap_or(f64::INFINITY)
    }

    /// Fixed CSV header shared with the batch runner.
    pub fn csv_header() -> &'static str {
        "image,n_thresholds,psnr,ssim,fsim,uiqi,qilv,hpsi,time_s"
    }

    /// One CSV row in header order.
    pub fn csv_row(&self, image: &str, n_thresholds: usize, time_s: f64) -> String {
        let psnr = if self.psnr_infinite {
            "inf".to_string()
        } else {
            format!("{:.6}", self.psnr_value())
        };
        format!(
            "{image},{n_thresholds},{psnr},{:.6},{:.6},{:.6},{:.6},{:.6},{:.4}",
            self.ssim, self.fsim, self.uiqi, self.qilv, self.hpsi, time_s
        )
    }
}
