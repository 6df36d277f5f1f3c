//! Experiment configuration: a TOML file, overridden key by key by flags.
//!
//! ```toml
//! backend = "building_sl3"   # line | grid2 | tree_flats | building_sl3
//! q = 2                      # building only
//! measure = "elementary"     # preset name, or a table, see below
//! steps = 400
//! trials = 200
//! seed = 1
//! level = 0                  # tree_flats: L for the contraction certificate
//! schedule = [25, 50, 100]   # optional; final horizon is always added
//! report = ["drift", "clt"]  # drift | clt | hitting | contracting
//! out = "walk.csv"
//! manifest = "walk.json"
//!
//! # an explicit measure instead of a preset:
//! # [measure]
//! # support = ["B(1)", "B(-1)"]
//! # weights = [1, 1]
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// Raised for anything the user must fix; maps to exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    Line,
    Grid2,
    TreeFlats,
    BuildingSl3,
}

impl std::str::FromStr for BackendKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "line" => Ok(Self::Line),
            "grid2" => Ok(Self::Grid2),
            "tree_flats" => Ok(Self::TreeFlats),
            "building_sl3" => Ok(Self::BuildingSl3),
            _ => Err(format!("unknown backend '{s}' (line, grid2, tree_flats, building_sl3)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureSpec {
    Preset(String),
    Explicit { support: Vec<String>, weights: Option<Vec<u64>>, symmetric: Option<bool> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    Drift,
    Clt,
    Hitting,
    Contracting,
}

impl std::str::FromStr for ReportKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "drift" => Ok(Self::Drift),
            "clt" => Ok(Self::Clt),
            "hitting" => Ok(Self::Hitting),
            "contracting" => Ok(Self::Contracting),
            other => Err(format!("unknown report '{other}' (drift, clt, hitting, contracting)")),
        }
    }
}

/// Every key optional, as read from a file or from flags.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub backend: Option<BackendKind>,
    pub q: Option<u32>,
    pub measure: Option<MeasureSpec>,
    pub steps: Option<u64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub level: Option<u32>,
    pub schedule: Option<Vec<u64>>,
    pub report: Option<Vec<ReportKind>>,
    pub out: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
}

impl PartialConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        toml::from_str(text).map_err(|e| usage(format!("config: {}", e.message())))
    }

    /// `self` wins wherever it has a value.
    pub fn over(self, base: PartialConfig) -> PartialConfig {
        PartialConfig {
            backend: self.backend.or(base.backend),
            q: self.q.or(base.q),
            measure: self.measure.or(base.measure),
            steps: self.steps.or(base.steps),
            trials: self.trials.or(base.trials),
            seed: self.seed.or(base.seed),
            level: self.level.or(base.level),
            schedule: self.schedule.or(base.schedule),
            report: self.report.or(base.report),
            out: self.out.or(base.out),
            manifest: self.manifest.or(base.manifest),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub backend: BackendKind,
    pub q: u32,
    pub measure: MeasureSpec,
    pub steps: u64,
    pub trials: u64,
    pub seed: u64,
    pub level: u32,
    pub schedule: Option<Vec<u64>>,
    pub report: Vec<ReportKind>,
    pub out: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
}

fn default_preset(b: &BackendKind) -> &'static str {
    match b {
        BackendKind::Line | BackendKind::Grid2 | BackendKind::TreeFlats => "symmetric",
        BackendKind::BuildingSl3 => "elementary",
    }
}

impl ExperimentConfig {
    pub fn resolve(p: PartialConfig) -> anyhow::Result<Self> {
        let backend = p.backend.ok_or_else(|| usage("missing required key 'backend'"))?;
        let steps = p.steps.ok_or_else(|| usage("missing required key 'steps'"))?;
        let trials = p.trials.unwrap_or(1);
        let q = p.q.unwrap_or(2);
        if steps == 0 {
            return Err(usage("steps: must be at least 1"));
        }
        if trials == 0 {
            return Err(usage("trials: must be at least 1"));
        }
        if backend == BackendKind::BuildingSl3 && !hypwalk::building::poly::is_prime(q) {
            return Err(usage(format!("q: {q} is not prime")));
        }
        if let Some(s) = &p.schedule {
            if s.iter().any(|&n| n == 0 || n > steps) || s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(usage("schedule: checkpoints must be strictly increasing and within 1..=steps"));
            }
        }
        let report = p.report.unwrap_or_default();
        if report.contains(&ReportKind::Hitting) && backend != BackendKind::BuildingSl3 {
            return Err(usage("report: 'hitting' needs backend building_sl3"));
        }
        if report.contains(&ReportKind::Clt) && trials < 100 {
            return Err(usage("report: 'clt' needs trials ≥ 100"));
        }
        let measure = p.measure.unwrap_or_else(|| MeasureSpec::Preset(default_preset(&backend).into()));
        Ok(Self {
            backend,
            q,
            measure,
            steps,
            trials,
            seed: p.seed.unwrap_or(0),
            level: p.level.unwrap_or(0),
            schedule: p.schedule,
            report,
            out: p.out,
            manifest: p.manifest,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = PartialConfig::from_toml("backend = \"line\"\nsteps = 10\nseed = 3").unwrap();
        let flags = PartialConfig { seed: Some(9), ..Default::default() };
        let c = ExperimentConfig::resolve(flags.over(file)).unwrap();
        assert_eq!((c.steps, c.seed), (10, 9));
    }

    #[test]
    fn unknown_key_is_named() {
        let e = PartialConfig::from_toml("stepz = 3").unwrap_err();
        assert!(e.to_string().contains("stepz"), "{e}");
    }

    #[test]
    fn explicit_measure_table() {
        let p = PartialConfig::from_toml("backend = \"tree_flats\"\nsteps = 5\n[measure]\nsupport = [\"B(1)\", \"B(-1)\"]").unwrap();
        assert!(matches!(p.measure, Some(MeasureSpec::Explicit { .. })));
    }

    #[test]
    fn composite_q_rejected() {
        let p = PartialConfig { backend: Some(BackendKind::BuildingSl3), steps: Some(3), q: Some(4), ..Default::default() };
        assert!(ExperimentConfig::resolve(p).unwrap_err().to_string().starts_with("q:"));
    }
}
