//! PNG and binary PGM (P5) image I/O, 8-bit.
//!
//! PGM round-trips are bit-exact. Color inputs are reduced to grayscale with
//! Rec. 601 luma (`0.299 R + 0.587 G + 0.114 B`), rounded to the nearest
//! integer.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::imagery::GrayImage;

/// Rec. 601 luma of an RGB triple, rounded.
pub fn rec601_luma(r: u8, g: u8, b: u8) -> u8 {
    let y = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
    y.round().clamp(0.0, 255.0) as u8
}

/// Loads an 8-bit grayscale image from a PNG or PGM file, converting color
/// inputs by luminance.
pub fn load_image(path: &Path) -> Result<GrayImage> {
    match extension_of(path)?.as_str() {
        "pgm" => load_pgm(path),
        "png" => load_png(path),
        other => Err(Error::UnsupportedFormat(other.to_string())),
    }
}

/// Saves an image as PNG or binary PGM depending on the file extension.
pub fn save_image(image: &GrayImage, path: &Path) -> Result<()> {
    match extension_of(path)?.as_str() {
        "pgm" => save_pgm(image, path),
        "png" => save_png(image, path),
        other => Err(Error::UnsupportedFormat(other.to_string())),
    }
}

fn extension_of(path: &Path) -> Result<String> {
    path.extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .ok_or_else(|| Error::UnsupportedFormat(path.display().to_string()))
}

fn load_png(path: &Path) -> Result<GrayImage> {
    let dynamic = image::open(path)?;
    let (w, h) = (dynamic.width(), dynamic.height());
    let pixels = match dynamic {
        image::DynamicImage::ImageLuma8(buf) => buf.into_raw(),
        other => {
            let rgb = other.to_rgb8();
            rgb.pixels()
                .map(|p| rec601_luma(p.0[0], p.0[1], p.0[2]))
                .collect()
        }
    };
    GrayImage::new(w, h, pixels)
}

fn save_png(image: &GrayImage, path: &Path) -> Result<()> {
    let buf = image::GrayImage::from_raw(image.width(), image.height(), image.pixels().to_vec())
        .expect("dimensions validated at construction");
    buf.save_with_format(path, image::ImageFormat::Png)?;
    Ok(())
}

fn save_pgm(image: &GrayImage, path: &Path) -> Result<()> {
    let mut out = Vec::with_capacity(image.pixels().len() + 32);
    write!(out, "P5\n{} {}\n255\n", image.width(), image.height())?;
    out.extend_from_slice(image.pixels());
    fs::write(path, out)?;
    Ok(())
}

fn load_pgm(path: &Path) -> Result<GrayImage> {
    let data = fs::read(path)?;
    parse_pgm(&data)
}

/// Parses binary PGM: magic `P5`, whitespace/comment-separated header tokens
/// (width, height, maxval <= 255), one whitespace byte, then raw samples.
fn parse_pgm(data: &[u8]) -> Result<GrayImage> {
    if data.len() < 2 || &data[0..2] != b"P5" {
        return Err(Error::MalformedPgm("missing P5 magic".into()));
    }
    let mut pos = 2;
    let mut header = [0u64; 3];
    for slot in header.iter_mut() {
        *slot = next_header_token(data, &mut pos)?;
    }
    let (width, height, maxval) = (header[0], header[1], header[2]);
    if maxval == 0 || maxval > 255 {
        return Err(Error::MalformedPgm(format!("unsupported maxval {maxval}")));
    }
    let expected = (width as usize)
        .checked_mul(height as usize)
        .ok_or_else(|| Error::MalformedPgm("dimension overflow".into()))?;
    let raster = &data[pos..];
    if raster.len() < expected {
        return Err(Error::MalformedPgm(format!(
            "raster truncated: expected {expected} bytes, got {}",
            raster.len()
        )));
    }
    GrayImage::new(width as u32, height as u32, raster[..expected].to_vec())
}

fn next_header_token(data: &[u8], pos: &mut usize) -> Result<u64> {
    // Skip whitespace and `#` comments.
    loop {
        while *pos < data.len() && data[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < data.len() && data[*pos] == b'#' {
            while *pos < data.len() && data[*pos] != b'\n' {
                *pos += 1;
            }
        } else {
            break;
        }
    }
    let start = *pos;
    while *pos < data.len() && data[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::MalformedPgm("expected header integer".into()));
    }
    let value: u64 = std::str::from_utf8(&data[start..*pos])
        .map_err(|_| Error::MalformedPgm("non-ascii header".into()))?
        .parse()
        .map_err(|_| Error::MalformedPgm("bad header integer".into()))?;
    // Exactly one whitespace byte terminates the header before the raster.
    if *pos < data.len() && data[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    Ok(value)
}
