//! Drift and central-limit estimators on finished traces.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::engine::WalkTrace;
use crate::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub ci95: Option<(f64, f64)>,
}

impl MeanEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        if xs.len() < 2 {
            return Self { mean, std_error: f64::NAN, ci95: None };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        Self { mean, std_error: se, ci95: Some((mean - Z95 * se, mean + Z95 * se)) }
    }

    /// True when the 95% interval lies strictly above zero.
    pub fn excludes_zero_above(&self) -> bool {
        self.ci95.is_some_and(|(lo, _)| lo > 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub horizon: u64,
    pub trials: usize,
    pub lambda_hat: f64,
    pub ci95: Option<(f64, f64)>,
    pub std_error: f64,
    /// Mean displacement at each checkpoint.
    pub per_n_means: Vec<(u64, f64)>,
    /// `(λ_a, λ_b)` from vector distances, when the backend reports them.
    pub drift_vector: Option<(MeanEstimate, MeanEstimate)>,
    /// Raised when there are too few trials for an interval.
    pub no_ci: bool,
}

/// `λ̂ = mean_trials d(Zₙo, o)/n` at the final checkpoint.
pub fn estimate_drift<S>(traces: &[WalkTrace<S>]) -> Result<DriftReport> {
    if traces.is_empty() {
        return Err(Error::Insufficient("no traces".into()));
    }
    let horizon = traces[0].last().n;
    let rates: Vec<f64> = traces.iter().map(|t| t.last().displacement / horizon as f64).collect();
    let est = MeanEstimate::from_samples(&rates);
    let per_n_means = traces[0]
        .checkpoints
        .iter()
        .enumerate()
        .map(|(i, c)| (c.n, traces.iter().map(|t| t.checkpoints[i].displacement).sum::<f64>() / traces.len() as f64))
        .collect();
    let drift_vector = if traces.iter().all(|t| t.last().a.is_some()) {
        let la: Vec<f64> = traces.iter().map(|t| t.last().a.unwrap() as f64 / horizon as f64).collect();
        let lb: Vec<f64> = traces.iter().map(|t| t.last().b.unwrap() as f64 / horizon as f64).collect();
        Some((MeanEstimate::from_samples(&la), MeanEstimate::from_samples(&lb)))
    } else {
        None
    };
    Ok(DriftReport {
        horizon,
        trials: traces.len(),
        lambda_hat: est.mean,
        ci95: est.ci95,
        std_error: est.std_error,
        per_n_means,
        drift_vector,
        no_ci: est.ci95.is_none(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CltReport {
    pub n: u64,
    pub samples: Vec<f64>,
    pub sigma_hat: f64,
    pub ks_statistic: Option<f64>,
    pub ks_p_value: Option<f64>,
    /// Set iff all samples are equal; no test is run then.
    pub degenerate: bool,
}

/// Monte-Carlo replicates for the Lilliefors null distribution.
pub const LILLIEFORS_REPS: usize = 2000;
const LILLIEFORS_SEED: u64 = 0x4c69_6c6c_6965_666f;

/// `(d(Zₙo,o) − n·λ̂)/√n` across trials, tested for normality.
///
/// The reference Gaussian takes mean and variance from the samples
/// themselves, so the plain Kolmogorov distribution would be far too
/// lenient. The p-value instead comes from the Lilliefors null, simulated
/// with a fixed seed so the report is deterministic.
pub fn clt_harness<S>(traces: &[WalkTrace<S>], lambda_hat: f64) -> Result<CltReport> {
    if traces.len() < 100 {
        return Err(Error::Insufficient(format!("{} trials; the harness needs at least 100", traces.len())));
    }
    let n = traces[0].last().n;
    let root = (n as f64).sqrt();
    let samples: Vec<f64> = traces.iter().map(|t| (t.last().displacement - n as f64 * lambda_hat) / root).collect();
    let degenerate = samples.iter().all(|&s| s == samples[0]);
    let sigma_hat = sample_sd(&samples);
    if degenerate {
        return Ok(CltReport { n, samples, sigma_hat: 0.0, ks_statistic: None, ks_p_value: None, degenerate });
    }
    let d = lilliefors_statistic(&samples);
    let p = lilliefors_p_value(d, samples.len(), LILLIEFORS_REPS);
    Ok(CltReport { n, samples, sigma_hat, ks_statistic: Some(d), ks_p_value: Some(p), degenerate })
}

fn sample_sd(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// `sup |F̂ − Φ((x − x̄)/s)|` with `x̄, s` fitted from `xs`.
pub fn lilliefors_statistic(xs: &[f64]) -> f64 {
    let n = xs.len();
    let m = xs.iter().sum::<f64>() / n as f64;
    let s = sample_sd(xs);
    let std = Normal::new(0.0, 1.0).unwrap();
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut d = 0f64;
    for (i, x) in sorted.iter().enumerate() {
        let f = std.cdf((x - m) / s);
        d = d.max((i + 1) as f64 / n as f64 - f).max(f - i as f64 / n as f64);
    }
    d
}

/// Monte-Carlo p-value `(1 + #{D* ≥ d})/(reps + 1)` under the composite
/// normal null.
pub fn lilliefors_p_value(d: f64, n: usize, reps: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(LILLIEFORS_SEED ^ n as u64);
    let mut buf = vec![0f64; n];
    let mut exceed = 0usize;
    for _ in 0..reps {
        for x in buf.iter_mut() {
            *x = StandardNormal.sample(&mut rng);
        }
        if lilliefors_statistic(&buf) >= d {
            exceed += 1;
        }
    }
    (1 + exceed) as f64 / (reps + 1) as f64
}

/// Dallal–Wilkinson closed-form approximation, accurate for `p < 0.1`.
pub fn lilliefors_p_dallal_wilkinson(d: f64, n: usize) -> f64 {
    let (d, n) = if n > 100 { (d * (n as f64 / 100.0).powf(0.49), 100.0) } else { (d, n as f64) };
    (-7.01256 * d * d * (n + 2.78019) + 2.99587 * d * (n + 2.78019).sqrt() - 0.122119 + 0.974598 / n.sqrt() + 1.67997 / n).exp()
}

/// Ordinary least-squares slope of `ys` on `xs`.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Total variation distance between two distributions on `0..k`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::engine::Observation;

    fn traces(ds: &[f64], n: u64) -> Vec<WalkTrace<()>> {
        ds.iter()
            .enumerate()
            .map(|(i, &d)| WalkTrace { seed: 0, trial_id: i as u64, checkpoints: vec![Observation::scalar(n, d)], positions: vec![] })
            .collect()
    }

    #[test]
    fn drift_of_constant_walk() {
        let r = estimate_drift(&traces(&[10.0; 5], 10)).unwrap();
        assert_eq!(r.lambda_hat, 1.0);
        assert_eq!(r.ci95, Some((1.0, 1.0)));
        let single = estimate_drift(&traces(&[3.0], 10)).unwrap();
        assert!(single.no_ci);
    }

    #[test]
    fn degenerate_clt_is_flagged() {
        let r = clt_harness(&traces(&[100.0; 120], 100), 1.0).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.sigma_hat, 0.0);
        assert!(clt_harness(&traces(&[1.0; 10], 1), 1.0).is_err());
    }

    #[test]
    fn lilliefors_agrees_with_closed_form_in_the_tail() {
        for (d, n) in [(0.09, 100), (0.12, 60), (0.03, 1000)] {
            let mc = lilliefors_p_value(d, n, 4000);
            let dw = lilliefors_p_dallal_wilkinson(d, n);
            assert!(dw < 0.1);
            assert!((mc - dw).abs() < 0.01 + 0.25 * dw, "d={d} n={n} mc={mc} dw={dw}");
        }
    }

    #[test]
    fn slope_and_tv() {
        assert!((ols_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]) - 2.0).abs() < 1e-12);
        assert_eq!(total_variation(&[0.5, 0.5], &[1.0, 0.0]), 0.5);
    }
}
