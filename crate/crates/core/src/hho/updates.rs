//! Position-update rules: exploration, the four besiege modes, and the
//! escape-energy machinery that dispatches between them.
//!
//! Update formulas produce real-valued candidates; every candidate is
//! rounded, clamped, and made distinct via [`ThresholdVector::repair`] before
//! it becomes a position or is evaluated. When repair cannot place all
//! components (no free levels), the candidate is discarded and the hawk
//! keeps its previous position.

use rand::Rng;

use crate::hho::levy::levy_step;
use crate::hho::population::Hawk;
use crate::imagery::{Bounds, ThresholdVector};
use crate::objectives::FitnessEvaluator;

/// Escape energy `2 * x0 * (1 - g / g_max)`.
pub fn escaping_energy(x0: f64, g: usize, g_max: usize) -> f64 {
    2.0 * x0 * (1.0 - g as f64 / g_max as f64)
}

/// Jump strength `2 * (1 - e5)`.
pub fn jump_strength_from(e5: f64) -> f64 {
    2.0 * (1.0 - e5)
}

/// Per-hawk random state driving phase dispatch.
///
/// Sampling order is fixed: `x0`, then `e5` (jump strength), then `t`.
#[derive(Debug, Clone, Copy)]
pub struct EscapeState {
    /// Initial energy in (-1, 1).
    pub x0: f64,
    /// Current escaping energy.
    pub x: f64,
    /// Escape likelihood in (0, 1).
    pub t: f64,
    /// Jump strength in (0, 2].
    pub js: f64,
}

impl EscapeState {
    pub fn sample<R: Rng>(rng: &mut R, g: usize, g_max: usize) -> Self {
        let x0 = 2.0 * rng.random::<f64>() - 1.0;
        let js = jump_strength_from(rng.random::<f64>());
        let t = rng.random::<f64>();
        Self {
            x0,
            x: escaping_energy(x0, g, g_max),
            t,
            js,
        }
    }
}

/// Exploration branch taken when `r >= 0.5`: move relative to a randomly
/// selected hawk.
pub fn exploration_rand_raw(
    hawk: &ThresholdVector,
    rand_hawk: &ThresholdVector,
    e1: f64,
    e2: f64,
) -> Vec<f64> {
    hawk.levels()
        .iter()
        .zip(rand_hawk.levels())
        .map(|(&p, &pr)| {
            let (p, pr) = (f64::from(p), f64::from(pr));
            pr - e1 * (pr - 2.0 * e2 * p).abs()
        })
        .collect()
}

/// Exploration branch taken when `r < 0.5`: move relative to the prey, the
/// population mean, and a randomly scaled offset from the lower bound.
pub fn exploration_mean_raw(
    prey: &ThresholdVector,
    mean: &[f64],
    bounds: Bounds,
    e3: f64,
    e4: f64,
) -> Vec<f64> {
    let offset = e3 * (f64::from(bounds.lower) + e4 * f64::from(bounds.upper - bounds.lower));
    prey.levels()
        .iter()
        .zip(mean)
        .map(|(&p, &m)| f64::from(p) - m - offset)
        .collect()
}

/// Full exploration update. Draws, in order: the branch coin `r`, then
/// either (random peer index, `e1`, `e2`) or (`e3`, `e4`).
pub fn exploration_update<R: Rng>(
    hawk: &ThresholdVector,
    peers: &[Hawk],
    prey: &ThresholdVector,
    mean: &[f64],
    bounds: Bounds,
    rng: &mut R,
) -> Option<ThresholdVector> {
    let r: f64 = rng.random();
    let raw = if r >= 0.5 {
        let idx = rng.random_range(0..peers.len());
        let e1: f64 = rng.random();
        let e2: f64 = rng.random();
        exploration_rand_raw(hawk, &peers[idx].position, e1, e2)
    } else {
        let e3: f64 = rng.random();
        let e4: f64 = rng.random();
        exploration_mean_raw(prey, mean, bounds, e3, e4)
    };
    ThresholdVector::repair(&raw, bounds)
}

/// Soft besiege: `delta - x * |js * prey - p|` per dimension, where
/// `delta = prey - p`.
pub fn soft_besiege_raw(hawk: &ThresholdVector, prey: &ThresholdVector, x: f64, js: f64) -> Vec<f64> {
    hawk.levels()
        .iter()
        .zip(prey.levels())
        .map(|(&p, &pr)| {
            let (p, pr) = (f64::from(p), f64::from(pr));
            (pr - p) - x * (js * pr - p).abs()
        })
        .collect()
}

pub fn soft_besiege(
    hawk: &ThresholdVector,
    prey: &ThresholdVector,
    x: f64,
    js: f64,
    bounds: Bounds,
) -> Option<ThresholdVector> {
    ThresholdVector::repair(&soft_besiege_raw(hawk, prey, x, js), bounds)
}

/// Hard besiege: `prey - x * |prey - p|` per dimension.
pub fn hard_besiege_raw(hawk: &ThresholdVector, prey: &ThresholdVector, x: f64) -> Vec<f64> {
    hawk.levels()
        .iter()
        .zip(prey.levels())
        .map(|(&p, &pr)| {
            let (p, pr) = (f64::from(p), f64::from(pr));
            pr - x * (pr - p).abs()
        })
        .collect()
}

pub fn hard_besiege(
    hawk: &ThresholdVector,
    prey: &ThresholdVector,
    x: f64,
    bounds: Bounds,
) -> Option<ThresholdVector> {
    ThresholdVector::repair(&hard_besiege_raw(hawk, prey, x), bounds)
}

/// First dive candidate: `prey - x * |js * prey - base|` per dimension, with
/// `base` the hawk's own position (soft) or the population mean (hard).
pub fn dive_candidate_raw(base: &[f64], prey: &ThresholdVector, x: f64, js: f64) -> Vec<f64> {
    prey.levels()
        .iter()
        .zip(base)
        .map(|(&pr, &b)| {
            let pr = f64::from(pr);
            pr - x * (js * pr - b).abs()
        })
        .collect()
}

/// Settings shared by both rapid-dive branches.
#[derive(Debug, Clone, Copy)]
pub struct DiveConfig {
    pub bounds: Bounds,
    pub levy_beta: f64,
    pub levy_literal: bool,
}

/// Rapid-dive update: try candidate `K`; if it does not improve, follow with
/// a heavy-tailed candidate `L = K + R (*) levy(n)`.
///
/// Returns the adopted candidate (with its fitness) on strict improvement of
/// the hawk's cached fitness, or `None` when both candidates fall through,
/// in which case the hawk keeps its position. Draws, in order: the `R`
/// vector, then the step components.
#[allow(clippy::too_many_arguments)]
pub fn rapid_dive<R: Rng>(
    hawk: &Hawk,
    base: &[f64],
    prey: &ThresholdVector,
    x: f64,
    js: f64,
    config: DiveConfig,
    evaluator: &FitnessEvaluator,
    rng: &mut R,
) -> Option<Hawk> {
    let n = hawk.position.n();
    let k_raw = dive_candidate_raw(base, prey, x, js);
    let k = ThresholdVector::repair(&k_raw, config.bounds)?;
    let k_fit = evaluator.eval(&k);
    if k_fit < hawk.fitness {
        return Some(Hawk {
            position: k,
            fitness: k_fit,
        });
    }
    let r_vec: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let step = levy_step(n, config.levy_beta, config.levy_literal, rng);
    let l_raw: Vec<f64> = k
        .levels()
        .iter()
        .zip(r_vec.iter().zip(&step))
        .map(|(&kv, (&r, &s))| f64::from(kv) + r * s)
        .collect();
    let l = ThresholdVector::repair(&l_raw, config.bounds)?;
    let l_fit = evaluator.eval(&l);
    if l_fit < hawk.fitness {
        return Some(Hawk {
            position: l,
            fitness: l_fit,
        });
    }
    None
}
