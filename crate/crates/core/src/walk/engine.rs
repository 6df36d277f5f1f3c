//! The trial driver: `Zₙ = Zₙ₋₁·ωₙ` with increments keyed by
//! `(seed, trial, step)`, observed on a checkpoint schedule.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::measure::StepMeasure;
use super::rng::TrialStream;
use crate::{Error, Result};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "HYPWALK_WORKERS";

/// What a backend reports about `Zₙ` at a checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub n: u64,
    /// `d(Zₙo, o)`.
    pub displacement: f64,
    pub a: Option<u64>,
    pub b: Option<u64>,
    pub flag_id: Option<usize>,
    pub certified: Option<bool>,
}

impl Observation {
    pub fn scalar(n: u64, displacement: f64) -> Self {
        Self { n, displacement, a: None, b: None, flag_id: None, certified: None }
    }
}

#[derive(Clone, Debug)]
pub struct WalkTrace<S> {
    pub seed: u64,
    pub trial_id: u64,
    pub checkpoints: Vec<Observation>,
    /// `Zₙ` at each checkpoint, when requested.
    pub positions: Vec<S>,
}

impl<S> WalkTrace<S> {
    pub fn last(&self) -> &Observation {
        self.checkpoints.last().expect("at least one checkpoint")
    }

    pub fn at(&self, n: u64) -> Option<&Observation> {
        self.checkpoints.iter().find(|c| c.n == n)
    }
}

/// A space with a group acting on it, seen through the walk.
pub trait Backend: Sync {
    type Element: Clone + Send + Sync;
    type State: Clone + Send + Sync;

    fn initial(&self) -> Self::State;
    /// Right multiplication by one increment.
    fn step(&self, state: &mut Self::State, g: &Self::Element);
    fn observe(&self, state: &Self::State, n: u64) -> Observation;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub n_steps: u64,
    pub n_trials: u64,
    pub seed: u64,
    pub schedule: Vec<u64>,
    pub keep_positions: bool,
}

impl WalkConfig {
    /// Default schedule `1, 2, 4, …, n_steps`.
    pub fn new(n_steps: u64, n_trials: u64, seed: u64) -> Self {
        Self { n_steps, n_trials, seed, schedule: geometric_schedule(1, n_steps), keep_positions: false }
    }

    pub fn with_schedule(mut self, schedule: Vec<u64>) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn keep_positions(mut self, keep: bool) -> Self {
        self.keep_positions = keep;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_steps == 0 {
            return Err(Error::InvalidInput("n_steps must be at least 1".into()));
        }
        if self.n_trials == 0 {
            return Err(Error::InvalidInput("n_trials must be at least 1".into()));
        }
        if self.schedule.is_empty() || self.schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("schedule must be strictly increasing and nonempty".into()));
        }
        if self.schedule[0] == 0 || *self.schedule.last().unwrap() != self.n_steps {
            return Err(Error::InvalidInput("schedule must lie in 1..=n_steps and end at n_steps".into()));
        }
        Ok(())
    }
}

/// `first, 2·first, 4·first, …` below `n_steps`, then `n_steps`.
pub fn geometric_schedule(first: u64, n_steps: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = first.max(1);
    while n < n_steps {
        out.push(n);
        n *= 2;
    }
    out.push(n_steps);
    out
}

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn configured_workers() -> Option<usize> {
    std::env::var(WORKERS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Runs `f` on a pool sized by [`WORKERS_ENV`], or on the global pool.
pub fn with_workers<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match configured_workers() {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool").install(f),
        None => f(),
    }
}

pub fn run_trial<B: Backend>(backend: &B, measure: &StepMeasure<B::Element>, cfg: &WalkConfig, trial: u64) -> WalkTrace<B::State> {
    let mut stream = TrialStream::new(cfg.seed, trial);
    let mut state = backend.initial();
    let mut checkpoints = Vec::with_capacity(cfg.schedule.len());
    let mut positions = Vec::new();
    let mut next = 0;
    for n in 1..=cfg.n_steps {
        backend.step(&mut state, measure.sample(stream.next_draw()));
        if cfg.schedule[next] == n {
            checkpoints.push(backend.observe(&state, n));
            if cfg.keep_positions {
                positions.push(state.clone());
            }
            next += 1;
        }
    }
    WalkTrace { seed: cfg.seed, trial_id: trial, checkpoints, positions }
}

/// Independent trials `0..n_trials`, in trial order regardless of how
/// they were scheduled across workers.
pub fn run_walks<B: Backend>(backend: &B, measure: &StepMeasure<B::Element>, cfg: &WalkConfig) -> Result<Vec<WalkTrace<B::State>>> {
    cfg.validate()?;
    if measure.is_empty() {
        return Err(Error::InvalidInput("empty support".into()));
    }
    Ok(with_workers(|| (0..cfg.n_trials).into_par_iter().map(|t| run_trial(backend, measure, cfg, t)).collect()))
}

/// [`run_walks`] on a dedicated pool of `workers` threads.
pub fn run_walks_with_workers<B: Backend>(
    backend: &B,
    measure: &StepMeasure<B::Element>,
    cfg: &WalkConfig,
    workers: usize,
) -> Result<Vec<WalkTrace<B::State>>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    pool.install(|| {
        cfg.validate()?;
        if measure.is_empty() {
            return Err(Error::InvalidInput("empty support".into()));
        }
        Ok((0..cfg.n_trials).into_par_iter().map(|t| run_trial(backend, measure, cfg, t)).collect())
    })
}

/// Calls `visit(k, Z_k)` for `k = 1..=n` along one trial.
pub fn replay<B: Backend>(
    backend: &B,
    measure: &StepMeasure<B::Element>,
    seed: u64,
    trial: u64,
    n: u64,
    mut visit: impl FnMut(u64, &B::State),
) -> B::State {
    let mut stream = TrialStream::new(seed, trial);
    let mut state = backend.initial();
    for k in 1..=n {
        backend.step(&mut state, measure.sample(stream.next_draw()));
        visit(k, &state);
    }
    state
}
