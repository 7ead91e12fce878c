//! Paired perturbation of a dive's source and its derived candidate, gated
//! by a relatedness-weighted benefit/cost inequality.
//!
//! The hawk that executed a rapid dive is the altruist (its pre-dive
//! position), the adopted dive candidate is the beneficiary. A perturbation
//! `delta` is subtracted from the altruist and added to the beneficiary;
//! the exchange stands only if the beneficiary's fitness strictly improved
//! (`benefit > 0`) and `relatedness * benefit > cost`. Otherwise both
//! vectors revert and another attempt may follow.

use rand::Rng;

use crate::hho::population::Hawk;
use crate::imagery::{Bounds, ThresholdVector};
use crate::objectives::FitnessEvaluator;

/// Result of an accepted exchange.
#[derive(Debug, Clone, PartialEq)]
pub struct AltruismOutcome {
    /// The altruist after donating `delta` (informational; the engine keeps
    /// only the beneficiary, since the altruist's slot was already spent on
    /// the dive).
    pub altruist: Hawk,
    /// The improved beneficiary.
    pub beneficiary: Hawk,
    /// 1-based index of the accepting attempt.
    pub attempts: usize,
}

/// One candidate exchange from explicit draws. `delta` carries its sign:
/// the beneficiary moves by `+delta`, the altruist by `-delta`.
///
/// Returns the perturbed pair when Hamilton's inequality accepts it, `None`
/// otherwise (both inputs are untouched either way).
pub fn altruism_attempt(
    altruist: &Hawk,
    beneficiary: &Hawk,
    delta: &[i32],
    relatedness: f64,
    bounds: Bounds,
    evaluator: &FitnessEvaluator,
) -> Option<(Hawk, Hawk)> {
    let shift = |pos: &ThresholdVector, sign: i32| -> Vec<f64> {
        pos.levels()
            .iter()
            .zip(delta)
            .map(|(&v, &d)| f64::from(i32::from(v) + sign * d))
            .collect()
    };
    let ben_pos = ThresholdVector::repair(&shift(&beneficiary.position, 1), bounds)?;
    let alt_pos = ThresholdVector::repair(&shift(&altruist.position, -1), bounds)?;
    let ben_fit = evaluator.eval(&ben_pos);
    let alt_fit = evaluator.eval(&alt_pos);
    let benefit = beneficiary.fitness - ben_fit;
    let cost = alt_fit - altruist.fitness;
    if benefit > 0.0 && relatedness * benefit > cost {
        Some((
            Hawk {
                position: alt_pos,
                fitness: alt_fit,
            },
            Hawk {
                position: ben_pos,
                fitness: ben_fit,
            },
        ))
    } else {
        None
    }
}

/// Runs up to `max_attempts` exchanges, stopping at the first accepted one.
///
/// Per attempt the draws are, in order: a magnitude in `[1, span/10]` and a
/// sign per dimension, then the relatedness in (0, 1).
pub fn altruism_exchange<R: Rng>(
    altruist: &Hawk,
    beneficiary: &Hawk,
    max_attempts: usize,
    bounds: Bounds,
    evaluator: &FitnessEvaluator,
    rng: &mut R,
) -> Option<AltruismOutcome> {
    let n = altruist.position.n();
    let delta_max = (usize::from(bounds.upper - bounds.lower) / 10).max(1) as i32;
    for attempt in 0..max_attempts {
        let delta: Vec<i32> = (0..n)
            .map(|_| {
                let mag = rng.random_range(1..=delta_max);
                if rng.random::<f64>() < 0.5 {
                    mag
                } else {
                    -mag
                }
            })
            .collect();
        let relatedness: f64 = rng.random();
        if let Some((alt, ben)) =
            altruism_attempt(altruist, beneficiary, &delta, relatedness, bounds, evaluator)
        {
            return Some(AltruismOutcome {
                altruist: alt,
                beneficiary: ben,
                attempts: attempt + 1,
            });
        }
    }
    None
}
