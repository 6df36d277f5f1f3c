//! Estimators for the building backend that look at germs in a residue:
//! hitting measure, Birkhoff averages, opposite pairs, tracking and first
//! certified times.

use serde::{Deserialize, Serialize};

use super::backends::{BuildingBackend, BuildingState};
use super::engine::{replay, WalkTrace};
use super::measure::StepMeasure;
use super::stats::total_variation;
use crate::building::lattice::divisors_from_inverse_pair;
use crate::building::{
    all_flags, ball, canonicalize, certify_at, displacement_profile_transition, flags_opposite, linearity_deviation, Flag, Germ,
    LatticeClass, LaurentMatrix, Sector, VectorDistance, VertexFrame,
};
use crate::{Error, Result};

/// Checkpoints over which a germ must be constant to count as settled.
pub const STABILIZATION_WINDOW: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingReport {
    pub observer: String,
    pub start: String,
    /// Frequency of each flag, indexed by flag id.
    pub frequencies: Vec<f64>,
    pub counts: Vec<u64>,
    pub recorded_trials: usize,
    /// Per trial: first checkpoint from which the germ stays constant.
    pub stabilization_n: Vec<Option<u64>>,
    /// `TV(μ∗ν̂, ν̂)`.
    pub tv_residual: f64,
    pub method: String,
}

fn stabilization<S>(trace: &WalkTrace<S>) -> Option<u64> {
    let last = trace.last().flag_id?;
    let mut first = trace.checkpoints.len() - 1;
    while first > 0 && trace.checkpoints[first - 1].flag_id == Some(last) {
        first -= 1;
    }
    let settled = trace.checkpoints.len() - first >= STABILIZATION_WINDOW.min(trace.checkpoints.len());
    settled.then(|| trace.checkpoints[first].n)
}

/// Flag id of the germ at the observer towards `z·o′`, if a chamber.
pub fn flag_of(backend: &BuildingBackend, z: &LaurentMatrix, z_inv: &LaurentMatrix) -> Option<usize> {
    match backend.germ(z, z_inv) {
        Some(Germ::Chamber(f)) => Some(f.id()),
        _ => None,
    }
}

/// Empirical law of the settled germ at the observer, and its one-step
/// stationarity residual.
///
/// `μ∗ν̂` is estimated by pushing each recorded endpoint `Zₙo′` through
/// every atom `s` of `μ` and re-reading the germ of `s·Zₙo′`; germs that
/// are not chambers carry their mass to an extra "none" cell.
pub fn hitting_measure(
    backend: &BuildingBackend,
    measure: &StepMeasure<LaurentMatrix>,
    traces: &[WalkTrace<BuildingState>],
) -> Result<HittingReport> {
    let nflags = all_flags(backend.q).len();
    let stabilization_n: Vec<Option<u64>> = traces.iter().map(stabilization).collect();
    let offending: Vec<u64> = traces.iter().zip(&stabilization_n).filter(|(_, s)| s.is_none()).map(|(t, _)| t.trial_id).collect();
    if offending.len() * 20 > traces.len() {
        return Err(Error::Insufficient(format!("germ not settled in {} of {} trials: {:?}", offending.len(), traces.len(), offending)));
    }
    let mut counts = vec![0u64; nflags];
    let mut pushed = vec![0f64; nflags + 1];
    let inverses: Vec<LaurentMatrix> = measure.support.iter().map(|s| s.inverse().expect("SL₃ atoms")).collect();
    let mut recorded = 0usize;
    for (t, s) in traces.iter().zip(&stabilization_n) {
        if s.is_none() {
            continue;
        }
        recorded += 1;
        counts[t.last().flag_id.unwrap()] += 1;
        let pos = t.positions.last().ok_or_else(|| Error::InvalidInput("traces need stored positions".into()))?;
        for (i, (g, g_inv)) in measure.support.iter().zip(&inverses).enumerate() {
            let z = g.mul(&pos.z);
            let z_inv = pos.z_inv.mul(g_inv);
            let cell = flag_of(backend, &z, &z_inv).unwrap_or(nflags);
            pushed[cell] += measure.probability(i);
        }
    }
    let r = recorded as f64;
    let frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / r).collect();
    let pushed: Vec<f64> = pushed.iter().map(|&p| p / r).collect();
    let mut padded = frequencies.clone();
    padded.push(0.0);
    Ok(HittingReport {
        observer: backend.observer.class.to_string(),
        start: backend.start.class.to_string(),
        frequencies,
        counts,
        recorded_trials: recorded,
        stabilization_n,
        tv_residual: total_variation(&pushed, &padded),
        method: "one-step push-forward of recorded endpoints, germs re-read at the observer".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffReport {
    pub n: u64,
    /// Per flag id: `(1/n)·#{k ≤ n : germ(o, Z_k⁻¹o) = c}`.
    pub averages: Vec<f64>,
    /// Raised when the step measure is not symmetric.
    pub asymmetric: bool,
}

/// Birkhoff averages along one trial for every flag at once.
pub fn birkhoff_averages(backend: &BuildingBackend, measure: &StepMeasure<LaurentMatrix>, seed: u64, trial: u64, n: u64) -> BirkhoffReport {
    let nflags = all_flags(backend.q).len();
    let mut hits = vec![0u64; nflags];
    let o = &backend.observer;
    replay(backend, measure, seed, trial, n, |_, s| {
        let (m, m_inv, dv) = o.relative(o, &s.z_inv, &s.z);
        let d = VectorDistance::from_divisors(divisors_from_inverse_pair(&m, &m_inv, dv));
        if let Some(Germ::Chamber(f)) = crate::building::germ_from_transition(&m, &m_inv, d) {
            hits[f.id()] += 1;
        }
    });
    let asymmetric = !measure.symmetric || !measure.check_symmetry(|g| g.inverse().expect("SL₃ atoms"));
    BirkhoffReport { n, averages: hits.iter().map(|&h| h as f64 / n as f64).collect(), asymmetric }
}

/// The average for a single flag.
pub fn birkhoff_cylinder_average(
    backend: &BuildingBackend,
    measure: &StepMeasure<LaurentMatrix>,
    seed: u64,
    trial: u64,
    flag: &Flag,
    n: u64,
) -> (f64, bool) {
    let r = birkhoff_averages(backend, measure, seed, trial, n);
    (r.averages[flag.id()], r.asymmetric)
}

/// Fraction of pairs `(traces[2i], traces[2i+1])` whose germs at the
/// observer at checkpoint `n` are opposite flags.
pub fn opposite_pair_frequency<S>(traces: &[WalkTrace<S>], n: u64, q: u32) -> Result<f64> {
    let pairs = traces.len() / 2;
    if pairs == 0 {
        return Err(Error::Insufficient("need at least one pair".into()));
    }
    let mut hits = 0usize;
    for i in 0..pairs {
        let a = traces[2 * i].at(n).and_then(|c| c.flag_id);
        let b = traces[2 * i + 1].at(n).and_then(|c| c.flag_id);
        if let (Some(a), Some(b)) = (a, b) {
            if flags_opposite(&Flag::from_id(q, a).unwrap(), &Flag::from_id(q, b).unwrap())? {
                hits += 1;
            }
        }
    }
    Ok(hits as f64 / pairs as f64)
}

/// Like [`opposite_pair_frequency`], but a pair counts when some vertex
/// within `radius` of the start sees the two endpoints in opposite
/// chambers. Needs stored positions.
pub fn opposite_pair_frequency_near(backend: &BuildingBackend, traces: &[WalkTrace<BuildingState>], checkpoint: usize, radius: usize) -> f64 {
    let frames: Vec<VertexFrame> = ball(&backend.start.class, radius).into_iter().map(VertexFrame::new).collect();
    let pairs = traces.len() / 2;
    let mut hits = 0usize;
    for i in 0..pairs {
        let (x, y) = (&traces[2 * i].positions[checkpoint], &traces[2 * i + 1].positions[checkpoint]);
        let found = frames.iter().any(|v| {
            let gx = germ_at(v, &backend.start, x);
            let gy = germ_at(v, &backend.start, y);
            matches!((gx, gy), (Some(Germ::Chamber(a)), Some(Germ::Chamber(b))) if flags_opposite(&a, &b).unwrap())
        });
        hits += found as usize;
    }
    hits as f64 / pairs as f64
}

fn germ_at(v: &VertexFrame, start: &VertexFrame, s: &BuildingState) -> Option<Germ> {
    let (m, m_inv, dv) = v.relative(start, &s.z, &s.z_inv);
    let d = VectorDistance::from_divisors(divisors_from_inverse_pair(&m, &m_inv, dv));
    crate::building::germ_from_transition(&m, &m_inv, d)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackingReport {
    /// `(n, eₙ)`.
    pub errors: Vec<(u64, f64)>,
    /// Set when a drift component is too small for a regular sector.
    pub singular_drift: bool,
}

/// The sector at the observer through `z·o′`, framed by the full Smith
/// transform. With `z` a late position of the walk this stands in for the
/// sector towards the limit chamber.
pub fn tracking_sector(backend: &BuildingBackend, z: &LaurentMatrix) -> Result<Sector> {
    let y = canonicalize(&z.mul(backend.start.class.basis()))?;
    Sector::through(&backend.observer.class, &y)
}

/// `eₙ = d(Zₙo′, γ(n))/n` with `γ(n)` the sector point at
/// `(⌊λ_a n⌋, ⌊λ_b n⌋)`. `positions` pairs checkpoint indices with states.
pub fn sublinear_tracking_error(
    backend: &BuildingBackend,
    positions: &[(u64, &BuildingState)],
    drift: (f64, f64),
    sector: &Sector,
) -> TrackingReport {
    let singular_drift = drift.0 < 1e-3 || drift.1 < 1e-3;
    let errors = positions
        .iter()
        .map(|&(n, s)| {
            let v = VectorDistance::new((drift.0 * n as f64).floor() as u64, (drift.1 * n as f64).floor() as u64);
            let gamma = VertexFrame::new(sector.point(v));
            let d = gamma.distance_to(&backend.start, &s.z, &s.z_inv);
            (n, d.length() / n as f64)
        })
        .collect();
    TrackingReport { errors, singular_drift }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicHit {
    pub n: u64,
    /// Index of the certifying vertex in the searched ball.
    pub vertex: usize,
    pub linearity_deviation: f64,
    pub translation_estimate: f64,
}

/// Least checkpoint at which `Zₙ` is certified at some vertex of the
/// radius-`radius` ball around the start; the certified element's
/// profile over `2·profile_n` powers is attached.
pub fn first_hyperbolic_time(
    trace: &WalkTrace<BuildingState>,
    frames: &[VertexFrame],
    profile_n: usize,
) -> Option<HyperbolicHit> {
    for (c, s) in trace.checkpoints.iter().zip(&trace.positions) {
        for (i, v) in frames.iter().enumerate() {
            if certify_at(&s.z, &s.z_inv, v) {
                let (m, m_inv, _) = v.relative(v, &s.z, &s.z_inv);
                let prof = displacement_profile_transition(&m, &m_inv, 2 * profile_n);
                return Some(HyperbolicHit {
                    n: c.n,
                    vertex: i,
                    linearity_deviation: linearity_deviation(&prof).unwrap_or(f64::INFINITY),
                    translation_estimate: prof[prof.len() - 1] / prof.len() as f64,
                });
            }
        }
    }
    None
}

/// Frames for the ball of radius `radius` around `center`.
pub fn ball_frames(center: &LatticeClass, radius: usize) -> Vec<VertexFrame> {
    ball(center, radius).into_iter().map(VertexFrame::new).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::engine::{run_walks, WalkConfig};
    use crate::walk::measure::{building_diagonal, building_elementary};

    #[test]
    fn diagonal_walk_hits_the_standard_flag() {
        let b = BuildingBackend::standard(2);
        let m = building_diagonal(2);
        let tr = run_walks(&b, &m, &WalkConfig::new(16, 3, 0).keep_positions(true)).unwrap();
        let h = hitting_measure(&b, &m, &tr).unwrap();
        assert_eq!(h.frequencies[Flag::standard(2).id()], 1.0);
        assert_eq!(h.tv_residual, 0.0);
        let frames = ball_frames(&LatticeClass::standard(2), 0);
        let hit = first_hyperbolic_time(&tr[0], &frames, 5).unwrap();
        assert_eq!(hit.n, 1);
        assert_eq!(hit.linearity_deviation, 0.0);
        let s = tracking_sector(&b, &tr[0].positions.last().unwrap().z).unwrap();
        let pos: Vec<_> = tr[0].checkpoints.iter().map(|c| c.n).zip(&tr[0].positions).collect();
        let e = sublinear_tracking_error(&b, &pos, (1.0, 1.0), &s);
        assert!(e.errors.iter().all(|&(_, x)| x == 0.0));
    }

    #[test]
    fn identical_traces_are_never_opposite() {
        let b = BuildingBackend::standard(2);
        let m = building_elementary(2).unwrap();
        let cfg = WalkConfig::new(64, 1, 3);
        let one = run_walks(&b, &m, &cfg).unwrap();
        let twice = vec![one[0].clone(), one[0].clone()];
        assert_eq!(opposite_pair_frequency(&twice, 64, 2).unwrap(), 0.0);
    }

    #[test]
    fn birkhoff_of_diagonal_inverse() {
        // Z_k⁻¹o runs along diag(t⁻¹, 1, t), whose germ is the opposite
        // coordinate flag.
        let b = BuildingBackend::standard(2);
        let r = birkhoff_averages(&b, &building_diagonal(2), 0, 0, 10);
        let opp = Flag::new([0, 0, 1], [1, 0, 0], 2).unwrap();
        assert_eq!(r.averages[opp.id()], 1.0);
        assert!(r.asymmetric);
    }
}
