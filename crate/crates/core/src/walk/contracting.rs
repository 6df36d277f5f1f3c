use serde::{Deserialize, Serialize};

use super::engine::WalkTrace;
use super::stats::ols_slope;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractingReport {
    /// `(n, certified fraction)` per checkpoint.
    pub fractions: Vec<(u64, f64)>,
    /// Slope of `log(uncertified fraction)` against `n`.
    pub log_slope: f64,
}

/// Fraction of trials whose `Zₙ` carries a certificate, per checkpoint.
/// Checkpoints without a certificate verdict count as uncertified.
pub fn contracting_proportion<S>(traces: &[WalkTrace<S>]) -> Vec<(u64, f64)> {
    let t = traces.len() as f64;
    traces[0]
        .checkpoints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = traces.iter().filter(|tr| tr.checkpoints[i].certified == Some(true)).count();
            (c.n, k as f64 / t)
        })
        .collect()
}

/// Log-linear fit of the uncertified fraction. Counts get the usual
/// `+½` continuity correction, `(u + ½)/(T + 1)`, so a checkpoint with no
/// failures still has a finite logarithm.
pub fn contracting_report<S>(traces: &[WalkTrace<S>]) -> ContractingReport {
    let fractions = contracting_proportion(traces);
    let t = traces.len() as f64;
    let xs: Vec<f64> = fractions.iter().map(|(n, _)| *n as f64).collect();
    let ys: Vec<f64> = fractions
        .iter()
        .map(|(_, f)| {
            let u = ((1.0 - f) * t).round();
            ((u + 0.5) / (t + 1.0)).ln()
        })
        .collect();
    let log_slope = if xs.len() >= 2 { ols_slope(&xs, &ys) } else { f64::NAN };
    ContractingReport { fractions, log_slope }
}

pub fn is_nondecreasing(fractions: &[(u64, f64)]) -> bool {
    fractions.windows(2).all(|w| w[1].1 >= w[0].1)
}
