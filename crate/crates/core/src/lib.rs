//! Multilevel grayscale-image thresholding driven by a Harris-hawks-style
//! optimizer with chaotic initialization, altruistic exchanges, and a hybrid
//! cross-entropy objective, plus six full-reference image-quality metrics
//! and an exhaustive-search oracle for verification.
//!
//! With the default `parallel` feature, the exhaustive oracle and the heavy
//! metric kernels fan out over rayon; results are identical to the
//! sequential fallback (`--no-default-features`), which exists for
//! single-threaded environments and for benchmarking the speedup.

pub mod chaos;
pub mod error;
pub mod hho;
pub mod imagery;
pub mod metrics;
pub mod objectives;
pub mod oracle;
pub mod report;
pub mod synth;

pub use error::{Error, Result};
