//! Candidate solutions and the population they form.

use crate::imagery::ThresholdVector;

/// One candidate solution with its cached objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct Hawk {
    pub position: ThresholdVector,
    pub fitness: f64,
}

/// The optimizer's population state at a generation boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub hawks: Vec<Hawk>,
    /// Index of the current minimum-fitness hawk; ties go to the lowest index.
    pub best_index: usize,
    pub generation: usize,
}

impl Population {
    pub fn new(hawks: Vec<Hawk>, generation: usize) -> Self {
        let best_index = min_fitness_index(&hawks);
        Self {
            hawks,
            best_index,
            generation,
        }
    }

    pub fn best(&self) -> &Hawk {
        &self.hawks[self.best_index]
    }

    /// Per-dimension mean of all positions.
    pub fn mean_position(&self) -> Vec<f64> {
        mean_position(&self.hawks)
    }
}

/// Per-dimension mean position of a hawk slice.
pub fn mean_position(hawks: &[Hawk]) -> Vec<f64> {
    let n = hawks[0].position.n();
    let mut mean = vec![0.0; n];
    for hawk in hawks {
        for (m, &v) in mean.iter_mut().zip(hawk.position.levels()) {
            *m += f64::from(v);
        }
    }
    let m_inv = 1.0 / hawks.len() as f64;
    for m in mean.iter_mut() {
        *m *= m_inv;
    }
    mean
}

/// Lowest index among minimum-fitness hawks.
pub fn min_fitness_index(hawks: &[Hawk]) -> usize {
    let mut best = 0;
    for (i, h) in hawks.iter().enumerate().skip(1) {
        if h.fitness < hawks[best].fitness {
            best = i;
        }
    }
    best
}
