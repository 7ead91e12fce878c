//! Optimizer tunables and ablation switches.

use serde::{Deserialize, Serialize};

use crate::chaos::ChaoticMapKind;
use crate::error::{Error, Result};
use crate::imagery::Bounds;
use crate::objectives::{ObjectiveKind, ObjectiveWeights};

/// Every tunable of the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HhoParams {
    /// Population size M.
    pub pop_size: usize,
    /// Maximum number of generations.
    pub max_iters: usize,
    /// Threshold bounds, as gray levels.
    pub bounds: Bounds,
    /// Stability index of the heavy-tailed dive step.
    pub levy_beta: f64,
    /// Sample the heavy-tail numerator/denominator uniformly on [0, 1]
    /// instead of the Mantegna Gaussian construction.
    pub levy_literal: bool,
    /// Number of altruistic exchanges allowed per generation.
    pub altruism_count: usize,
    /// Attempts per altruistic exchange.
    pub altruism_iters: usize,
    /// Hybrid objective weights.
    pub weights: ObjectiveWeights,
    /// Chaotic map used for initialization.
    pub map: ChaoticMapKind,
    /// RNG seed; identical seeds reproduce runs bit-for-bit.
    pub seed: u64,
    /// Stop when the record best has not improved by more than
    /// [`EARLY_STOP_EPSILON`](crate::hho::EARLY_STOP_EPSILON) for
    /// [`EARLY_STOP_PATIENCE`](crate::hho::EARLY_STOP_PATIENCE) generations.
    pub early_stop: bool,
}

impl Default for HhoParams {
    fn default() -> Self {
        Self {
            pop_size: 50,
            max_iters: 1000,
            bounds: Bounds::default(),
            levy_beta: 1.5,
            levy_literal: false,
            altruism_count: 4,
            altruism_iters: 10,
            weights: ObjectiveWeights::default(),
            map: ChaoticMapKind::Logistic,
            seed: 0,
            early_stop: true,
        }
    }
}

impl HhoParams {
    /// Checks feasibility for a run of `n_thresholds` dimensions.
    pub fn validate(&self, n_thresholds: usize) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::InfeasibleParams(format!(
                "population size {} must be at least 2",
                self.pop_size
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InfeasibleParams("max_iters must be positive".into()));
        }
        if n_thresholds == 0 {
            return Err(Error::InfeasibleParams("need at least one threshold".into()));
        }
        if usize::from(self.bounds.upper - self.bounds.lower) < n_thresholds {
            return Err(Error::InfeasibleParams(format!(
                "range [{}, {}] cannot host {} distinct thresholds",
                self.bounds.lower, self.bounds.upper, n_thresholds
            )));
        }
        if self.altruism_count > self.pop_size {
            return Err(Error::InfeasibleParams(format!(
                "altruism count {} exceeds population size {}",
                self.altruism_count, self.pop_size
            )));
        }
        if !(self.levy_beta > 0.0 && self.levy_beta < 2.0) {
            return Err(Error::InfeasibleParams(format!(
                "levy beta {} must lie in (0, 2)",
                self.levy_beta
            )));
        }
        ObjectiveWeights::new(self.weights.alpha, self.weights.beta)?;
        Ok(())
    }
}

/// Feature toggles for baseline comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AblationFlags {
    /// Chaotic initialization; disabled means uniform random for all hawks.
    pub chaos_enabled: bool,
    /// Altruistic exchanges after rapid-dive updates.
    pub altruism_enabled: bool,
    /// Objective assigning fitness.
    pub objective: ObjectiveKind,
}

impl AblationFlags {
    /// Everything on, with the given objective.
    pub fn full(objective: ObjectiveKind) -> Self {
        Self {
            chaos_enabled: true,
            altruism_enabled: true,
            objective,
        }
    }
}
