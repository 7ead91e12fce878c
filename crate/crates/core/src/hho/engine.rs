//! The main optimization loop.
//!
//! Per generation: the prey is the minimum-fitness hawk (lowest index on
//! ties) and the mean position is snapshotted; each hawk then samples its
//! escape state and dispatches to exactly one of exploration, soft besiege,
//! hard besiege, or the two rapid-dive modes. Altruistic exchanges run on
//! the first `altruism_count` hawks whose dive adopted a candidate.
//!
//! One seeded generator drives everything; draws happen in a fixed order —
//! per hawk: `x0`, `e5`, `t`, then the branch's own draws, then any altruism
//! draws — so identical seeds reproduce runs bit-for-bit. The loop is
//! sequential by design: the prey, the mean, and randomly selected peers
//! couple the hawks within a generation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chaos::{init_population, uniform_population};
use crate::error::Result;
use crate::hho::altruism::altruism_exchange;
use crate::hho::params::{AblationFlags, HhoParams};
use crate::hho::population::{mean_position, min_fitness_index, Hawk, Population};
use crate::hho::updates::{exploration_update, hard_besiege, rapid_dive, soft_besiege, DiveConfig, EscapeState};
use crate::imagery::{Histogram, ThresholdVector};
use crate::objectives::{FitnessEvaluator, ObjectiveKind};

/// Record-best improvement below this counts as stagnation.
pub const EARLY_STOP_EPSILON: f64 = 1e-10;
/// Consecutive stagnant generations tolerated before stopping early.
pub const EARLY_STOP_PATIENCE: usize = 100;

/// Outcome of one optimization run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    /// Best thresholds ever observed, as gray levels.
    pub best: ThresholdVector,
    pub best_fitness: f64,
    /// Record-best fitness after initialization (entry 0) and after each
    /// executed generation; non-increasing.
    pub history: Vec<f64>,
    /// Generations actually executed (early stopping may cut the run short).
    pub generations: usize,
    /// Rapid-dive branch executions per generation.
    pub dive_events: Vec<u32>,
    /// Altruistic exchanges invoked per generation.
    pub altruism_attempts: Vec<u32>,
    /// Altruistic exchanges accepted per generation.
    pub altruism_accepted: Vec<u32>,
}

/// Runs the full optimizer (chaotic initialization and altruism on).
pub fn run(
    hist: &Histogram,
    n_thresholds: usize,
    params: &HhoParams,
    objective: ObjectiveKind,
) -> Result<RunResult> {
    run_with_flags(hist, n_thresholds, params, &AblationFlags::full(objective))
}

/// Runs with explicit feature toggles.
pub fn run_with_flags(
    hist: &Histogram,
    n_thresholds: usize,
    params: &HhoParams,
    flags: &AblationFlags,
) -> Result<RunResult> {
    run_observed(hist, n_thresholds, params, flags, |_| {})
}

/// Runs with a generation-boundary observer, called once after
/// initialization and once after every executed generation.
pub fn run_observed<F>(
    hist: &Histogram,
    n_thresholds: usize,
    params: &HhoParams,
    flags: &AblationFlags,
    mut observer: F,
) -> Result<RunResult>
where
    F: FnMut(&Population),
{
    params.validate(n_thresholds)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let evaluator = FitnessEvaluator::new(hist, flags.objective, params.weights);
    let bounds = params.bounds;
    let dive_config = DiveConfig {
        bounds,
        levy_beta: params.levy_beta,
        levy_literal: params.levy_literal,
    };

    let positions = if flags.chaos_enabled {
        init_population(params.map, params.pop_size, n_thresholds, bounds, &mut rng)?
    } else {
        uniform_population(params.pop_size, n_thresholds, bounds, &mut rng)?
    };
    let mut hawks: Vec<Hawk> = positions
        .into_iter()
        .map(|position| Hawk {
            fitness: evaluator.eval(&position),
            position,
        })
        .collect();

    let mut record = hawks[min_fitness_index(&hawks)].clone();
    let mut history = vec![record.fitness];
    let mut dive_events = Vec::new();
    let mut altruism_attempts = Vec::new();
    let mut altruism_accepted = Vec::new();
    observer(&Population::new(hawks.clone(), 0));

    let mut stagnation = 0usize;
    let mut generations = 0usize;
    for g in 1..=params.max_iters {
        let prey_idx = min_fitness_index(&hawks);
        let prey = hawks[prey_idx].position.clone();
        let mean = mean_position(&hawks);

        let mut dives = 0u32;
        let mut attempts = 0u32;
        let mut accepted = 0u32;
        for i in 0..hawks.len() {
            let state = EscapeState::sample(&mut rng, g, params.max_iters);
            if state.x.abs() >= 1.0 {
                if let Some(pos) = exploration_update(
                    &hawks[i].position,
                    &hawks,
                    &prey,
                    &mean,
                    bounds,
                    &mut rng,
                ) {
                    hawks[i] = Hawk {
                        fitness: evaluator.eval(&pos),
                        position: pos,
                    };
                }
            } else if state.t >= 0.5 {
                let candidate = if state.x.abs() >= 0.5 {
                    soft_besiege(&hawks[i].position, &prey, state.x, state.js, bounds)
                } else {
                    hard_besiege(&hawks[i].position, &prey, state.x, bounds)
                };
                if let Some(pos) = candidate {
                    hawks[i] = Hawk {
                        fitness: evaluator.eval(&pos),
                        position: pos,
                    };
                }
            } else {
                dives += 1;
                let base = if state.x.abs() >= 0.5 {
                    hawks[i].position.as_f64()
                } else {
                    mean.clone()
                };
                let mut adopted = rapid_dive(
                    &hawks[i],
                    &base,
                    &prey,
                    state.x,
                    state.js,
                    dive_config,
                    &evaluator,
                    &mut rng,
                );
                if flags.altruism_enabled
                    && adopted.is_some()
                    && (attempts as usize) < params.altruism_count
                {
                    attempts += 1;
                    let beneficiary = adopted.as_ref().expect("checked above");
                    if let Some(outcome) = altruism_exchange(
                        &hawks[i],
                        beneficiary,
                        params.altruism_iters,
                        bounds,
                        &evaluator,
                        &mut rng,
                    ) {
                        accepted += 1;
                        adopted = Some(outcome.beneficiary);
                    }
                }
                if let Some(new_hawk) = adopted {
                    hawks[i] = new_hawk;
                }
            }
        }

        let gen_best = &hawks[min_fitness_index(&hawks)];
        let improvement = record.fitness - gen_best.fitness;
        if gen_best.fitness < record.fitness {
            record = gen_best.clone();
        }
        history.push(record.fitness);
        dive_events.push(dives);
        altruism_attempts.push(attempts);
        altruism_accepted.push(accepted);
        generations = g;
        observer(&Population::new(hawks.clone(), g));

        if params.early_stop {
            if improvement > EARLY_STOP_EPSILON {
                stagnation = 0;
            } else {
                stagnation += 1;
                if stagnation >= EARLY_STOP_PATIENCE {
                    break;
                }
            }
        }
    }

    Ok(RunResult {
        best: record.position,
        best_fitness: record.fitness,
        history,
        generations,
        dive_events,
        altruism_attempts,
        altruism_accepted,
    })
}
