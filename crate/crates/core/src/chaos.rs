//! Chaotic maps and chaotic population initialization.
//!
//! Eight one-dimensional maps drive the initialization of all but the first
//! candidate vector. Sine, Singer, Sinusoidal, Tent, and Logistic operate on
//! `[0, 1]`; Chebyshev, Iterative, and Gauss/mouse on `[-1, 1]` (the
//! Gauss/mouse image `(-0.58, 0.42]` never fits inside `[0, 1]`, so it is
//! grouped with the two-sided maps for rescaling).
//!
//! [`next_value`] is the raw printed formula with a domain precondition.
//! [`ChaoticSequence`] is the iteration machinery the initializer uses: it
//! nudges seeds off degenerate points and clamps each iterate back into the
//! map's domain (the Singer polynomial dips to about -0.003 on a sliver near
//! `f = 1`, and Tent's upper branch overshoots 1 by a couple of ulps).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imagery::{Bounds, ThresholdVector};

/// The eight supported chaotic maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChaoticMapKind {
    Sine,
    Singer,
    Sinusoidal,
    /// As printed this is `cos(arccos f)`, the identity on `[-1, 1]`; the
    /// usual family is `cos(k * arccos f)`. [`chebyshev_order`] exposes the
    /// general form, the default order is 1.
    Chebyshev,
    Tent,
    Logistic,
    Iterative,
    Gauss,
}

pub const ALL_MAPS: [ChaoticMapKind; 8] = [
    ChaoticMapKind::Sine,
    ChaoticMapKind::Singer,
    ChaoticMapKind::Sinusoidal,
    ChaoticMapKind::Chebyshev,
    ChaoticMapKind::Tent,
    ChaoticMapKind::Logistic,
    ChaoticMapKind::Iterative,
    ChaoticMapKind::Gauss,
];

impl ChaoticMapKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Sine => "sine",
            Self::Singer => "singer",
            Self::Sinusoidal => "sinusoidal",
            Self::Chebyshev => "chebyshev",
            Self::Tent => "tent",
            Self::Logistic => "logistic",
            Self::Iterative => "iterative",
            Self::Gauss => "gauss",
        }
    }

    /// Closed interval the map's iterates live in.
    pub fn domain(self) -> (f64, f64) {
        match self {
            Self::Chebyshev | Self::Iterative | Self::Gauss => (-1.0, 1.0),
            _ => (0.0, 1.0),
        }
    }

    /// Seed values that collapse the sequence (fixed points and pre-images
    /// of fixed points that matter in practice).
    fn degenerate_points(self) -> &'static [f64] {
        match self {
            Self::Logistic => &[0.0, 0.25, 0.5, 0.75, 1.0],
            Self::Sine | Self::Singer | Self::Sinusoidal | Self::Tent => &[0.0, 1.0],
            Self::Iterative => &[0.0],
            Self::Chebyshev | Self::Gauss => &[],
        }
    }
}

impl std::fmt::Display for ChaoticMapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ChaoticMapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_MAPS
            .iter()
            .copied()
            .find(|m| m.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InfeasibleParams(format!("unknown chaotic map `{s}`")))
    }
}

/// One step of the map, exactly as printed, with the published constants
/// (Sine k=4, Singer mu=1.07, Sinusoidal c=2.3, Tent pivot 0.7, Logistic c=4,
/// Iterative c=0.7, Gauss alpha=4.90 beta=-0.58).
///
/// Errors when `f` is outside the map's domain, or `f = 0` for the Iterative
/// map (which divides by `f`).
pub fn next_value(kind: ChaoticMapKind, f: f64) -> Result<f64> {
    let (min, max) = kind.domain();
    if !(min..=max).contains(&f) || f.is_nan() {
        return Err(Error::ChaoticDomain {
            map: kind.name(),
            value: f,
            min,
            max,
        });
    }
    if kind == ChaoticMapKind::Iterative && f == 0.0 {
        return Err(Error::ChaoticDomain {
            map: kind.name(),
            value: f,
            min,
            max,
        });
    }
    Ok(match kind {
        // (k/4) * sin(pi f) with k = 4: the prefactor is exactly 1.
        ChaoticMapKind::Sine => (std::f64::consts::PI * f).sin(),
        ChaoticMapKind::Singer => {
            1.07 * (7.86 * f - 23.31 * f * f + 28.75 * f.powi(3) - 13.302875 * f.powi(4))
        }
        ChaoticMapKind::Sinusoidal => 2.3 * f * f * (std::f64::consts::PI * f).sin(),
        ChaoticMapKind::Chebyshev => chebyshev_order(f, 1),
        ChaoticMapKind::Tent => {
            if f < 0.7 {
                f / 0.7
            } else {
                (10.0 / 3.0) * (1.0 - f)
            }
        }
        ChaoticMapKind::Logistic => 4.0 * f * (1.0 - f),
        ChaoticMapKind::Iterative => (0.7 * std::f64::consts::PI / f).sin(),
        ChaoticMapKind::Gauss => (-4.90 * f * f).exp() - 0.58,
    })
}

/// Chebyshev map of arbitrary order, `cos(k * arccos f)`. Order 1 is the
/// printed (identity) form.
pub fn chebyshev_order(f: f64, k: u32) -> f64 {
    (f64::from(k) * f.acos()).cos()
}

const DEGENERATE_TOLERANCE: f64 = 1e-6;
const DEGENERATE_NUDGE: f64 = 1e-3;

/// Moves a seed off any degenerate point by +1e-3, wrapping at the domain's
/// upper end.
fn nudge_seed(kind: ChaoticMapKind, seed: f64) -> f64 {
    let (min, max) = kind.domain();
    for &p in kind.degenerate_points() {
        if (seed - p).abs() < DEGENERATE_TOLERANCE {
            let nudged = seed + DEGENERATE_NUDGE;
            return if nudged > max {
                nudged - (max - min)
            } else {
                nudged
            };
        }
    }
    seed
}

/// Stateful iteration of one chaotic map.
///
/// The seed is nudged off degenerate points; every iterate is clamped back
/// into the map's domain. This is the sequence the population initializer
/// consumes, and the one the range-closure checks exercise.
#[derive(Debug, Clone)]
pub struct ChaoticSequence {
    kind: ChaoticMapKind,
    state: f64,
}

impl ChaoticSequence {
    pub fn new(kind: ChaoticMapKind, seed: f64) -> Result<Self> {
        let (min, max) = kind.domain();
        if !(min..=max).contains(&seed) || seed.is_nan() {
            return Err(Error::ChaoticDomain {
                map: kind.name(),
                value: seed,
                min,
                max,
            });
        }
        Ok(Self {
            kind,
            state: nudge_seed(kind, seed),
        })
    }

    pub fn state(&self) -> f64 {
        self.state
    }

    /// Advances one step and returns the new state.
    pub fn step(&mut self) -> f64 {
        let (min, max) = self.kind.domain();
        let raw = next_value(self.kind, self.state).expect("state kept inside domain");
        let mut clamped = raw.clamp(min, max);
        if self.kind == ChaoticMapKind::Iterative && clamped.abs() < 1e-9 {
            clamped = DEGENERATE_NUDGE;
        }
        self.state = clamped;
        self.state
    }
}

impl Iterator for ChaoticSequence {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        Some(self.step())
    }
}

/// Normalized chain state of a stored threshold level in `[LL, UL]`.
fn level_to_unit(level: u16, bounds: Bounds) -> f64 {
    f64::from(level - bounds.lower) / f64::from(bounds.upper - bounds.lower)
}

/// Initializes `m` candidate vectors of `n` thresholds each.
///
/// The first vector is drawn uniformly at random over `[LL, UL]^n`; each
/// following vector derives dimension `d` by one chaotic step from the
/// previous vector's dimension `d` (normalized to the map's domain, stepped,
/// rescaled back, rounded, and made distinct). Deterministic given the RNG
/// state.
pub fn init_population<R: Rng>(
    kind: ChaoticMapKind,
    m: usize,
    n: usize,
    bounds: Bounds,
    rng: &mut R,
) -> Result<Vec<ThresholdVector>> {
    if m < 2 {
        return Err(Error::InfeasibleParams(format!(
            "population size {m} must be at least 2"
        )));
    }
    check_dimension(n, bounds)?;
    let mut population = Vec::with_capacity(m);
    population.push(uniform_vector(n, bounds, rng));
    let two_sided = kind.domain().0 < 0.0;
    let span = f64::from(bounds.upper - bounds.lower);
    for v in 1..m {
        let prev = &population[v - 1];
        let mut raw = Vec::with_capacity(n);
        for d in 0..n {
            let unit = level_to_unit(prev.levels()[d], bounds);
            let seeded = if two_sided { 2.0 * unit - 1.0 } else { unit };
            let mut seq = ChaoticSequence::new(kind, seeded)?;
            let stepped = seq.step();
            let rescaled = if two_sided {
                (stepped + 1.0) / 2.0
            } else {
                stepped
            };
            raw.push(f64::from(bounds.lower) + rescaled * span);
        }
        population.push(
            ThresholdVector::repair(&raw, bounds).expect("span check guarantees room"),
        );
    }
    Ok(population)
}

/// Uniform random initialization of `m` vectors (the no-map baseline).
pub fn uniform_population<R: Rng>(
    m: usize,
    n: usize,
    bounds: Bounds,
    rng: &mut R,
) -> Result<Vec<ThresholdVector>> {
    if m < 2 {
        return Err(Error::InfeasibleParams(format!(
            "population size {m} must be at least 2"
        )));
    }
    check_dimension(n, bounds)?;
    Ok((0..m).map(|_| uniform_vector(n, bounds, rng)).collect())
}

fn check_dimension(n: usize, bounds: Bounds) -> Result<()> {
    if n == 0 {
        return Err(Error::InfeasibleParams("need at least one threshold".into()));
    }
    if usize::from(bounds.upper - bounds.lower) < n {
        return Err(Error::InfeasibleParams(format!(
            "range [{}, {}] cannot host {n} distinct thresholds",
            bounds.lower, bounds.upper
        )));
    }
    Ok(())
}

fn uniform_vector<R: Rng>(n: usize, bounds: Bounds, rng: &mut R) -> ThresholdVector {
    let raw: Vec<f64> = (0..n)
        .map(|_| f64::from(rng.random_range(bounds.lower..=bounds.upper)))
        .collect();
    ThresholdVector::repair(&raw, bounds).expect("span check guarantees room")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn logistic_direct_substitution() {
        assert_relative_eq!(
            next_value(ChaoticMapKind::Logistic, 0.3).unwrap(),
            0.84,
            epsilon = 1e-12
        );
    }

    #[test]
    fn tent_branch_boundary() {
        assert_relative_eq!(
            next_value(ChaoticMapKind::Tent, 0.7).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            next_value(ChaoticMapKind::Tent, 0.35).unwrap(),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn chebyshev_printed_form_is_identity() {
        assert_relative_eq!(
            next_value(ChaoticMapKind::Chebyshev, 0.5).unwrap(),
            0.5,
            epsilon = 1e-12
        );
        // The general family at order 2 is a genuine map.
        assert_relative_eq!(chebyshev_order(0.5, 2), -0.5, epsilon = 1e-12);
    }

    #[test]
    fn domain_violations_rejected() {
        assert!(next_value(ChaoticMapKind::Logistic, 1.5).is_err());
        assert!(next_value(ChaoticMapKind::Logistic, -0.1).is_err());
        assert!(next_value(ChaoticMapKind::Chebyshev, 1.5).is_err());
        assert!(next_value(ChaoticMapKind::Iterative, 0.0).is_err());
        assert!(next_value(ChaoticMapKind::Iterative, 0.3).is_ok());
    }

    #[test]
    fn range_closure_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for kind in ALL_MAPS {
            let (min, max) = kind.domain();
            for _ in 0..50 {
                let seed = min + (max - min) * rng.random::<f64>();
                let mut seq = ChaoticSequence::new(kind, seed).unwrap();
                for i in 0..2000 {
                    let x = seq.step();
                    assert!(
                        (min..=max).contains(&x),
                        "{kind} escaped to {x} at iterate {i} from seed {seed}"
                    );
                }
            }
        }
    }

    #[test]
    fn tent_reaching_one_stays_in_range() {
        let mut seq = ChaoticSequence::new(ChaoticMapKind::Tent, 0.7).unwrap();
        let first = seq.step();
        assert!((0.0..=1.0).contains(&first));
        let second = seq.step();
        assert!((0.0..=1.0).contains(&second));
    }

    #[test]
    fn logistic_diversity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let seed: f64 = rng.random();
            if [0.0, 0.25, 0.5, 0.75, 1.0]
                .iter()
                .any(|p| (seed - p).abs() < 1e-6)
            {
                continue;
            }
            let seq = ChaoticSequence::new(ChaoticMapKind::Logistic, seed).unwrap();
            let mut keys: Vec<i64> = seq.take(100).map(|x| (x * 1e9).round() as i64).collect();
            keys.sort_unstable();
            keys.dedup();
            assert!(keys.len() >= 90, "only {} distinct iterates", keys.len());
        }
    }

    #[test]
    fn degenerate_seed_nudged() {
        let seq = ChaoticSequence::new(ChaoticMapKind::Logistic, 0.75).unwrap();
        assert_relative_eq!(seq.state(), 0.751, epsilon = 1e-12);
        let seq = ChaoticSequence::new(ChaoticMapKind::Logistic, 1.0).unwrap();
        assert_relative_eq!(seq.state(), 1e-3, epsilon = 1e-12);
    }

    #[test]
    fn init_population_one_step_formula() {
        let bounds = Bounds::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let pop = init_population(ChaoticMapKind::Logistic, 2, 1, bounds, &mut rng).unwrap();
        let x0 = f64::from(pop[0].levels()[0]);
        let u = (x0 - 1.0) / 255.0;
        // Non-degenerate hawk-0 draw for this seed; the chained value follows
        // the one-step logistic formula directly.
        assert!([0.0, 0.25, 0.5, 0.75, 1.0]
            .iter()
            .all(|p| (u - p).abs() >= 1e-6));
        let expected = (1.0 + 4.0 * u * (1.0 - u) * 255.0).round() as u16;
        assert_eq!(pop[1].levels()[0], expected);
    }

    #[test]
    fn init_population_in_range_and_deterministic() {
        let bounds = Bounds::default();
        for kind in ALL_MAPS {
            let mut rng1 = ChaCha8Rng::seed_from_u64(5);
            let mut rng2 = ChaCha8Rng::seed_from_u64(5);
            let a = init_population(kind, 20, 5, bounds, &mut rng1).unwrap();
            let b = init_population(kind, 20, 5, bounds, &mut rng2).unwrap();
            assert_eq!(a, b);
            for v in &a {
                assert_eq!(v.n(), 5);
                for &x in v.levels() {
                    assert!(bounds.contains(x));
                }
            }
        }
    }

    #[test]
    fn infeasible_dimensions_rejected() {
        let narrow = Bounds::new(1, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(init_population(ChaoticMapKind::Logistic, 5, 4, narrow, &mut rng).is_err());
        assert!(init_population(ChaoticMapKind::Logistic, 5, 3, narrow, &mut rng).is_ok());
        assert!(init_population(ChaoticMapKind::Logistic, 1, 1, narrow, &mut rng).is_err());
    }
}
