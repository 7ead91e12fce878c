//! Golden-value checks for the heavyweight metrics.
//!
//! Expected values were computed once with an independent NumPy
//! implementation of the same published pipelines (log-Gabor phase
//! congruency, Haar-wavelet similarity, local-variance index, windowed
//! structural similarity) on the deterministic images below, and frozen.

use hawkthresh_core::imagery::GrayImage;
use hawkthresh_core::metrics::{fsim, hpsi, psnr, qilv, ssim, uiqi};

const TOL: f64 = 1e-6;

/// 64x64 step edge with deterministic texture.
fn edge64() -> GrayImage {
    let mut pixels = vec![0u8; 64 * 64];
    for y in 0..64usize {
        for x in 0..64usize {
            let base: i32 = if x < 32 { 60 } else { 190 };
            let tex = ((x * 7 + y * 13) % 21) as i32 - 10;
            pixels[y * 64 + x] = (base + tex).clamp(0, 255) as u8;
        }
    }
    GrayImage::new(64, 64, pixels).unwrap()
}

/// Two-level quantization of an image at pixel value 128 (class means
/// rounded half-up).
fn quantize2(img: &GrayImage) -> GrayImage {
    let (mut lo_sum, mut lo_n, mut hi_sum, mut hi_n) = (0u64, 0u64, 0u64, 0u64);
    for &p in img.pixels() {
        if p < 128 {
            lo_sum += u64::from(p);
            lo_n += 1;
        } else {
            hi_sum += u64::from(p);
            hi_n += 1;
        }
    }
    let lo_mean = (lo_sum as f64 / lo_n as f64 + 0.5).floor() as u8;
    let hi_mean = (hi_sum as f64 / hi_n as f64 + 0.5).floor() as u8;
    let pixels = img
        .pixels()
        .iter()
        .map(|&p| if p < 128 { lo_mean } else { hi_mean })
        .collect();
    GrayImage::new(img.width(), img.height(), pixels).unwrap()
}

fn texture64() -> GrayImage {
    let mut pixels = vec![0u8; 64 * 64];
    for y in 0..64usize {
        for x in 0..64usize {
            pixels[y * 64 + x] = ((x * x * 3 + y * y * 5 + x * y) % 256) as u8;
        }
    }
    GrayImage::new(64, 64, pixels).unwrap()
}

/// 3x3 integer box blur with clamped borders, rounding (sum + 4) / 9.
fn box_blur(img: &GrayImage) -> GrayImage {
    let w = img.width() as i32;
    let h = img.height() as i32;
    let mut out = vec![0u8; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0i32;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let sy = (y + dy).clamp(0, h - 1);
                    let sx = (x + dx).clamp(0, w - 1);
                    acc += i32::from(img.get(sx as u32, sy as u32));
                }
            }
            out[(y * w + x) as usize] = ((acc + 4) / 9) as u8;
        }
    }
    GrayImage::new(img.width(), img.height(), out).unwrap()
}

fn invert(img: &GrayImage) -> GrayImage {
    let pixels = img.pixels().iter().map(|&p| 255 - p).collect();
    GrayImage::new(img.width(), img.height(), pixels).unwrap()
}

#[test]
fn synthetic_images_match_reference_checksums() {
    let e = edge64();
    let sum: u64 = e.pixels().iter().map(|&p| u64::from(p)).sum();
    assert_eq!(sum, 511_801);
    let t = texture64();
    let sum: u64 = t.pixels().iter().map(|&p| u64::from(p)).sum();
    assert_eq!(sum, 520_192);
    let s = box_blur(&t);
    let sum: u64 = s.pixels().iter().map(|&p| u64::from(p)).sum();
    assert_eq!(sum, 520_160);
    let q = quantize2(&e);
    let mut levels: Vec<u8> = q.pixels().to_vec();
    levels.sort_unstable();
    levels.dedup();
    assert_eq!(levels, vec![60, 190]);
}

#[test]
fn fsim_golden_edge_vs_quantized() {
    let e = edge64();
    let q = quantize2(&e);
    let got = fsim(&e, &q).unwrap();
    assert!(
        (got - 0.834471252496378).abs() < TOL,
        "fsim {got} departs from golden"
    );
}

#[test]
fn hpsi_golden_edge_vs_quantized() {
    let e = edge64();
    let q = quantize2(&e);
    let got = hpsi(&e, &q).unwrap();
    assert!(
        (got - 0.870790297488091).abs() < TOL,
        "hpsi {got} departs from golden"
    );
}

#[test]
fn hpsi_golden_texture_vs_smoothed() {
    let t = texture64();
    let s = box_blur(&t);
    let got = hpsi(&t, &s).unwrap();
    assert!(
        (got - 0.565361488928384).abs() < TOL,
        "hpsi {got} departs from golden"
    );
}

#[test]
fn qilv_golden_texture_vs_smoothed() {
    let t = texture64();
    let s = box_blur(&t);
    let got = qilv(&t, &s).unwrap();
    assert!(
        (got - 0.062669974066566).abs() < TOL,
        "qilv {got} departs from golden"
    );
}

#[test]
fn qilv_golden_edge_vs_quantized() {
    let e = edge64();
    let q = quantize2(&e);
    let got = qilv(&e, &q).unwrap();
    assert!(
        (got - 0.991352729705434).abs() < TOL,
        "qilv {got} departs from golden"
    );
}

#[test]
fn ssim_golden_and_inversion_below_half() {
    let e = edge64();
    let q = quantize2(&e);
    let got = ssim(&e, &q).unwrap();
    assert!(
        (got - 0.673034025880455).abs() < TOL,
        "ssim {got} departs from golden"
    );
    let inv = invert(&e);
    let got = ssim(&e, &inv).unwrap();
    assert!(
        (got - (-0.158848668176861)).abs() < TOL,
        "inverted ssim {got} departs from golden"
    );
    assert!(got < 0.5);
}

#[test]
fn uiqi_golden_edge_vs_quantized() {
    let e = edge64();
    let q = quantize2(&e);
    let got = uiqi(&e, &q).unwrap();
    assert!(
        (got - 0.995668975732443).abs() < TOL,
        "uiqi {got} departs from golden"
    );
}

#[test]
fn psnr_finite_on_distinct_inputs() {
    let e = edge64();
    let q = quantize2(&e);
    let v = psnr(&e, &q).unwrap();
    assert!(v.is_finite() && v > 10.0 && v < 40.0);
}
