//! Run reports and plot-data emission.
//!
//! A report carries the complete parameter set (seed included) plus the
//! coordinate-convention note, so a report alone suffices to reproduce the
//! run. Wall-clock time is the only field expected to differ between
//! identical-seed runs.

use serde::Serialize;

use crate::hho::{AblationFlags, HhoParams, RunResult};
use crate::imagery::{Histogram, ThresholdVector, GRAY_LEVELS};
use crate::metrics::MetricReport;

/// How optimization coordinates relate to pixel values.
pub const INDEX_CONVENTION: &str = "thresholds are optimized over 1-based gray levels in [1, 256] \
     (level = pixel value + 1); thresholds_pixel = thresholds_level - 1; segmented pixels are \
     round(class mean level) - 1";

/// Full record of one `(image, n_thresholds)` optimization cell.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub image: String,
    pub n_thresholds: usize,
    pub params: HhoParams,
    pub flags: AblationFlags,
    pub thresholds_pixel: Vec<u8>,
    pub thresholds_level: Vec<u16>,
    pub best_fitness: f64,
    pub generations: usize,
    pub history: Vec<f64>,
    pub dive_events: Vec<u32>,
    pub altruism_attempts: Vec<u32>,
    pub altruism_accepted: Vec<u32>,
    pub uiqi_windowed: bool,
    pub metrics: Option<MetricReport>,
    pub wall_time_s: f64,
    pub index_convention: &'static str,
}

impl RunReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        image: impl Into<String>,
        n_thresholds: usize,
        params: &HhoParams,
        flags: &AblationFlags,
        result: &RunResult,
        metrics: Option<MetricReport>,
        uiqi_windowed: bool,
        wall_time_s: f64,
    ) -> Self {
        Self {
            image: image.into(),
            n_thresholds,
            params: *params,
            flags: *flags,
            thresholds_pixel: result.best.pixel_values(),
            thresholds_level: result.best.levels().to_vec(),
            best_fitness: result.best_fitness,
            generations: result.generations,
            history: result.history.clone(),
            dive_events: result.dive_events.clone(),
            altruism_attempts: result.altruism_attempts.clone(),
            altruism_accepted: result.altruism_accepted.clone(),
            uiqi_windowed,
            metrics,
            wall_time_s,
            index_convention: INDEX_CONVENTION,
        }
    }
}

/// 256-row `level,count` table of a histogram, levels as pixel values.
pub fn histogram_csv(hist: &Histogram) -> String {
    let mut out = String::with_capacity(GRAY_LEVELS * 8);
    out.push_str("level,count\n");
    for (level, &count) in hist.counts().iter().enumerate() {
        out.push_str(&format!("{level},{count}\n"));
    }
    out
}

/// Threshold sidecar (pixel values, one per line) for histogram plots.
pub fn thresholds_csv(th: &ThresholdVector) -> String {
    let mut out = String::from("threshold\n");
    for p in th.pixel_values() {
        out.push_str(&format!("{p}\n"));
    }
    out
}
