//! Ground-truth verification: exhaustive threshold search on small
//! instances, plus baseline runs with features toggled off.
//!
//! The enumeration walks every strictly increasing N-tuple over the levels
//! `[lower + 1, upper]` — the same `C(L - 1, N)` candidates the optimizer
//! can meaningfully distinguish, `L` being the number of levels in bounds.
//! With the `parallel` feature the walk is partitioned by first threshold
//! and min-reduced; the tie-break (lowest fitness, then lexicographically
//! smallest vector) makes the result identical to the sequential walk.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hho::{run_with_flags, HhoParams, RunResult};
use crate::imagery::{Bounds, Histogram, ThresholdVector};
use crate::objectives::{FitnessEvaluator, ObjectiveWeights};

pub use crate::hho::AblationFlags;

/// Default cap on the number of candidates an exhaustive search may visit.
pub const DEFAULT_MAX_COMBINATIONS: u128 = 10_000_000;

/// Number of candidate vectors `C(L - 1, n)` the search would enumerate.
pub fn combination_count(bounds: Bounds, n: usize) -> u128 {
    let levels = (bounds.upper - bounds.lower) as u128; // candidates live in [lower+1, upper]
    if (n as u128) > levels {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..n as u128 {
        acc = acc.saturating_mul(levels - i) / (i + 1);
    }
    acc
}

/// Exhaustive global minimum over all valid threshold vectors.
///
/// Errors when the candidate count exceeds `max_combinations`
/// ([`DEFAULT_MAX_COMBINATIONS`] when `None`). Ties resolve to the
/// lexicographically smallest vector.
pub fn exhaustive_search(
    hist: &Histogram,
    n: usize,
    evaluator: &FitnessEvaluator,
    bounds: Bounds,
    max_combinations: Option<u128>,
) -> Result<(ThresholdVector, f64)> {
    check_budget(hist, n, bounds, max_combinations)?;
    #[cfg(feature = "parallel")]
    {
        let lo = bounds.lower + 1;
        let first_values: Vec<u16> = (lo..=bounds.upper).collect();
        let best = first_values
            .par_iter()
            .filter_map(|&first| best_with_first(first, n, evaluator, bounds))
            .reduce_with(min_candidate)
            .ok_or_else(|| Error::InfeasibleParams("no feasible threshold vector".into()))?;
        Ok(best)
    }
    #[cfg(not(feature = "parallel"))]
    {
        exhaustive_search_seq(hist, n, evaluator, bounds, max_combinations)
    }
}

/// Sequential reference walk; always available, used to cross-check the
/// parallel reduction and by the benchmark suite.
pub fn exhaustive_search_seq(
    hist: &Histogram,
    n: usize,
    evaluator: &FitnessEvaluator,
    bounds: Bounds,
    max_combinations: Option<u128>,
) -> Result<(ThresholdVector, f64)> {
    check_budget(hist, n, bounds, max_combinations)?;
    let lo = bounds.lower + 1;
    let mut best: Option<(ThresholdVector, f64)> = None;
    for first in lo..=bounds.upper {
        if let Some(candidate) = best_with_first(first, n, evaluator, bounds) {
            best = Some(match best {
                None => candidate,
                Some(current) => min_candidate(current, candidate),
            });
        }
    }
    best.ok_or_else(|| Error::InfeasibleParams("no feasible threshold vector".into()))
}

fn check_budget(
    _hist: &Histogram,
    n: usize,
    bounds: Bounds,
    max_combinations: Option<u128>,
) -> Result<()> {
    if n == 0 {
        return Err(Error::InfeasibleParams("need at least one threshold".into()));
    }
    let budget = max_combinations.unwrap_or(DEFAULT_MAX_COMBINATIONS);
    let required = combination_count(bounds, n);
    if required == 0 {
        return Err(Error::InfeasibleParams(format!(
            "range [{}, {}] cannot host {n} distinct thresholds",
            bounds.lower, bounds.upper
        )));
    }
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// Minimum over all vectors starting with `first`; enumerates the remaining
/// `n - 1` components in lexicographic order.
fn best_with_first(
    first: u16,
    n: usize,
    evaluator: &FitnessEvaluator,
    bounds: Bounds,
) -> Option<(ThresholdVector, f64)> {
    let remaining_room = usize::from(bounds.upper.saturating_sub(first));
    if remaining_room < n - 1 {
        return None;
    }
    let mut values: Vec<u16> = (0..n as u16).map(|k| first + k).collect();
    let mut best: Option<(ThresholdVector, f64)> = None;
    loop {
        let th = ThresholdVector::new(values.clone(), bounds).expect("ascending in-bounds");
        let fitness = evaluator.eval(&th);
        let candidate = (th, fitness);
        best = Some(match best {
            None => candidate,
            Some(current) => min_candidate(current, candidate),
        });
        // Advance the suffix (component 0 is fixed to `first`).
        let mut i = n;
        loop {
            if i == 1 {
                return best;
            }
            i -= 1;
            let max_here = bounds.upper - (n - 1 - i) as u16;
            if values[i] < max_here {
                values[i] += 1;
                for j in i + 1..n {
                    values[j] = values[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn min_candidate(
    a: (ThresholdVector, f64),
    b: (ThresholdVector, f64),
) -> (ThresholdVector, f64) {
    if b.1 < a.1 || (b.1 == a.1 && b.0.levels() < a.0.levels()) {
        b
    } else {
        a
    }
}

/// Runs the optimizer with ablation switches; all-on flags reproduce
/// [`crate::hho::run`] bit-for-bit.
pub fn baseline_run(
    hist: &Histogram,
    n_thresholds: usize,
    params: &HhoParams,
    flags: &AblationFlags,
) -> Result<RunResult> {
    run_with_flags(hist, n_thresholds, params, flags)
}

/// Convenience: evaluator for a histogram/flags pair.
pub fn evaluator_for(hist: &Histogram, flags: &AblationFlags, weights: ObjectiveWeights) -> FitnessEvaluator {
    FitnessEvaluator::new(hist, flags.objective, weights)
}
