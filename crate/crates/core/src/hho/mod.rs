//! The improved Harris-hawks-style optimizer: exploration, energy-based
//! phase changeover, four besiege modes with heavy-tailed dives, and
//! altruistic exchanges.

mod altruism;
mod engine;
mod levy;
mod params;
mod population;
mod updates;

pub use altruism::{altruism_attempt, altruism_exchange, AltruismOutcome};
pub use engine::{
    run, run_observed, run_with_flags, RunResult, EARLY_STOP_EPSILON, EARLY_STOP_PATIENCE,
};
pub use levy::{hill_tail_index, levy_component, levy_sigma, levy_step};
pub use params::{AblationFlags, HhoParams};
pub use population::{mean_position, min_fitness_index, Hawk, Population};
pub use updates::{
    dive_candidate_raw, escaping_energy, exploration_mean_raw, exploration_rand_raw,
    exploration_update, hard_besiege, hard_besiege_raw, jump_strength_from, rapid_dive,
    soft_besiege, soft_besiege_raw, DiveConfig, EscapeState,
};
