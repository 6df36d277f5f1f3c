//! Seeded random walks and the estimators built on them.

pub mod backends;
pub mod boundary;
pub mod contracting;
pub mod engine;
pub mod measure;
pub mod output;
pub mod rng;
pub mod stats;

pub use backends::{BuildingBackend, BuildingState, GridBackend, LineBackend, TreeFlatsBackend};
pub use engine::{geometric_schedule, replay, run_walks, run_walks_with_workers, Backend, Observation, WalkConfig, WalkTrace};
pub use measure::StepMeasure;
pub use stats::{clt_harness, estimate_drift, CltReport, DriftReport};
