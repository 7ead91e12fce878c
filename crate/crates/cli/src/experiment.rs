//! Batch execution over `(image, threshold-count)` cells.
//!
//! Cells are independent: each computes a histogram, optimizes, applies the
//! thresholds, evaluates metrics, and writes its artifacts. With the
//! `parallel` feature cells fan out over the worker pool (capped by
//! HAWKTHRESH_THREADS); results are collected and the aggregated CSV is
//! written in deterministic `(image, n)` order either way.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use hawkthresh_core::hho::{AblationFlags, HhoParams};
use hawkthresh_core::imagery::{
    apply_thresholds, compute_histogram, load_image, save_image, Bounds, GrayImage,
};
use hawkthresh_core::metrics::MetricReport;
use hawkthresh_core::objectives::{FitnessEvaluator, ObjectiveKind, ObjectiveWeights};
use hawkthresh_core::oracle::exhaustive_search;
use hawkthresh_core::report::{histogram_csv, thresholds_csv, RunReport, INDEX_CONVENTION};

pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub n_thresholds: Vec<usize>,
    pub params: HhoParams,
    pub flags: AblationFlags,
    pub out_dir: PathBuf,
    pub uiqi_windowed: bool,
    pub emit_segmented: bool,
    pub emit_report: bool,
    pub emit_metrics_csv: bool,
    pub emit_histogram: bool,
}

/// Stem used to derive artifact names from an input path.
pub fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string())
}

/// Collects image files from explicit paths and directory scans (PNG/PGM,
/// sorted by name).
pub fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(input)
                .with_context(|| format!("reading directory {}", input.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.extension()
                        .and_then(|e| e.to_str())
                        .map(|e| {
                            let e = e.to_ascii_lowercase();
                            e == "png" || e == "pgm"
                        })
                        .unwrap_or(false)
                })
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(input.clone());
        }
    }
    if files.is_empty() {
        anyhow::bail!("no input images found");
    }
    Ok(files)
}

struct CellOutcome {
    image: String,
    n: usize,
    csv_row: Option<String>,
    error: Option<String>,
}

/// Runs the full experiment grid; returns the number of failed cells.
pub fn run_experiment(config: &RunConfig) -> Result<usize> {
    let files = collect_inputs(&config.inputs)?;
    fs::create_dir_all(&config.out_dir)
        .with_context(|| format!("creating {}", config.out_dir.display()))?;

    // Load and hash the histogram once per image; per-image failures are
    // reported and skipped.
    let mut loaded: Vec<(String, GrayImage)> = Vec::new();
    let mut failures = 0usize;
    for path in &files {
        match load_image(path) {
            Ok(img) => loaded.push((file_stem(path), img)),
            Err(err) => {
                eprintln!("skipping {}: {err}", path.display());
                failures += 1;
            }
        }
    }

    if config.emit_histogram {
        for (stem, img) in &loaded {
            let hist = compute_histogram(img);
            fs::write(
                config.out_dir.join(format!("{stem}_hist.csv")),
                histogram_csv(&hist),
            )?;
        }
    }

    let cells: Vec<(usize, usize)> = (0..loaded.len())
        .flat_map(|i| config.n_thresholds.iter().map(move |&n| (i, n)))
        .collect();

    let run_cell = |&(img_idx, n): &(usize, usize)| -> CellOutcome {
        let (stem, image) = &loaded[img_idx];
        match run_one_cell(stem, image, n, config) {
            Ok(row) => CellOutcome {
                image: stem.clone(),
                n,
                csv_row: Some(row),
                error: None,
            },
            Err(err) => CellOutcome {
                image: stem.clone(),
                n,
                csv_row: None,
                error: Some(format!("{err:#}")),
            },
        }
    };

    #[cfg(feature = "parallel")]
    let mut outcomes: Vec<CellOutcome> = cells.par_iter().map(run_cell).collect();
    #[cfg(not(feature = "parallel"))]
    let mut outcomes: Vec<CellOutcome> = cells.iter().map(run_cell).collect();

    outcomes.sort_by(|a, b| a.image.cmp(&b.image).then(a.n.cmp(&b.n)));
    for outcome in &outcomes {
        if let Some(err) = &outcome.error {
            eprintln!("cell ({}, n={}) failed: {err}", outcome.image, outcome.n);
            failures += 1;
        }
    }
    if config.emit_metrics_csv {
        let mut csv = String::from(MetricReport::csv_header());
        csv.push('\n');
        for outcome in &outcomes {
            if let Some(row) = &outcome.csv_row {
                csv.push_str(row);
                csv.push('\n');
            }
        }
        fs::write(config.out_dir.join("metrics.csv"), csv)?;
    }
    Ok(failures)
}

fn run_one_cell(stem: &str, image: &GrayImage, n: usize, config: &RunConfig) -> Result<String> {
    let started = Instant::now();
    let hist = compute_histogram(image);
    let result = hawkthresh_core::hho::run_with_flags(&hist, n, &config.params, &config.flags)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let segmented = apply_thresholds(image, &result.best, &hist).map_err(|e| anyhow::anyhow!("{e}"))?;
    let metrics = MetricReport::compute(image, &segmented, config.uiqi_windowed)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let wall = started.elapsed().as_secs_f64();

    if config.emit_segmented {
        let path = config.out_dir.join(format!("{stem}_n{n}_seg.png"));
        save_image(&segmented, &path).map_err(|e| anyhow::anyhow!("{e}"))?;
    }
    if config.emit_report {
        let report = RunReport::new(
            stem,
            n,
            &config.params,
            &config.flags,
            &result,
            Some(metrics.clone()),
            config.uiqi_windowed,
            wall,
        );
        let path = config.out_dir.join(format!("{stem}_n{n}_report.json"));
        fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    if config.emit_histogram {
        let path = config.out_dir.join(format!("{stem}_n{n}_thresholds.csv"));
        fs::write(path, thresholds_csv(&result.best))?;
    }
    Ok(metrics.csv_row(stem, n, wall))
}

#[derive(serde::Serialize)]
struct OracleReport {
    image: String,
    n_thresholds: usize,
    objective: ObjectiveKind,
    weights: ObjectiveWeights,
    thresholds_pixel: Vec<u8>,
    thresholds_level: Vec<u16>,
    fitness: f64,
    candidates: u128,
    metrics: MetricReport,
    wall_time_s: f64,
    index_convention: &'static str,
}

/// Exhaustive-search counterpart of the experiment grid; returns failed
/// cell count.
#[allow(clippy::too_many_arguments)]
pub fn run_oracle(
    inputs: &[PathBuf],
    n_thresholds: &[usize],
    objective: ObjectiveKind,
    weights: ObjectiveWeights,
    max_combos: u128,
    out_dir: &Path,
    uiqi_windowed: bool,
) -> Result<usize> {
    let files = collect_inputs(inputs)?;
    fs::create_dir_all(out_dir)?;
    let bounds = Bounds::default();
    let mut failures = 0usize;
    let mut csv = String::from(MetricReport::csv_header());
    csv.push('\n');
    for path in &files {
        let stem = file_stem(path);
        let image = match load_image(path) {
            Ok(img) => img,
            Err(err) => {
                eprintln!("skipping {}: {err}", path.display());
                failures += 1;
                continue;
            }
        };
        let hist = compute_histogram(&image);
        let evaluator = FitnessEvaluator::new(&hist, objective, weights);
        for &n in n_thresholds {
            let started = Instant::now();
            match exhaustive_search(&hist, n, &evaluator, bounds, Some(max_combos)) {
                Ok((th, fitness)) => {
                    let segmented = apply_thresholds(&image, &th, &hist)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                    let metrics = MetricReport::compute(&image, &segmented, uiqi_windowed)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                    let wall = started.elapsed().as_secs_f64();
                    let report = OracleReport {
                        image: stem.clone(),
                        n_thresholds: n,
                        objective,
                        weights,
                        thresholds_pixel: th.pixel_values(),
                        thresholds_level: th.levels().to_vec(),
                        fitness,
                        candidates: hawkthresh_core::oracle::combination_count(bounds, n),
                        metrics: metrics.clone(),
                        wall_time_s: wall,
                        index_convention: INDEX_CONVENTION,
                    };
                    let out = out_dir.join(format!("{stem}_n{n}_oracle.json"));
                    fs::write(out, serde_json::to_string_pretty(&report)?)?;
                    csv.push_str(&metrics.csv_row(&stem, n, wall));
                    csv.push('\n');
                    println!(
                        "{stem} n={n}: fitness {fitness:.6}, thresholds {:?}",
                        th.pixel_values()
                    );
                }
                Err(err) => {
                    eprintln!("oracle cell ({stem}, n={n}) failed: {err}");
                    failures += 1;
                }
            }
        }
    }
    fs::write(out_dir.join("oracle_metrics.csv"), csv)?;
    Ok(failures)
}
