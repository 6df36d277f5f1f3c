use std::time::Instant;

use anyhow::Context;
use serde::Serialize;
use serde_json::{Map, Value};

use hypwalk::building::LaurentMatrix;
use hypwalk::tree_flats::GroupWord;
use hypwalk::walk::boundary::hitting_measure;
use hypwalk::walk::contracting::contracting_report;
use hypwalk::walk::measure::{self, StepMeasure};
use hypwalk::walk::output::{csv_string, sha256_hex};
use hypwalk::walk::{
    clt_harness, estimate_drift, run_walks, Backend, BuildingBackend, GridBackend, LineBackend, TreeFlatsBackend, WalkConfig, WalkTrace,
};

use crate::config::{usage, BackendKind, ExperimentConfig, MeasureSpec, ReportKind};

#[derive(Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub csv_sha256: String,
    pub csv_rows: usize,
    pub reports: Map<String, Value>,
    /// Metadata only; nothing else in the manifest depends on the clock.
    pub wall_clock_seconds: f64,
}

fn explicit<E>(
    support: &[String],
    weights: &Option<Vec<u64>>,
    symmetric: Option<bool>,
    parse: impl Fn(&str) -> anyhow::Result<E>,
) -> anyhow::Result<StepMeasure<E>> {
    let atoms = support.iter().map(|s| parse(s)).collect::<anyhow::Result<Vec<E>>>()?;
    let weights = weights.clone().unwrap_or_else(|| vec![1; atoms.len()]);
    if weights.len() != atoms.len() {
        return Err(usage("measure: weights and support differ in length"));
    }
    StepMeasure::new(atoms, weights, symmetric.unwrap_or(false)).map_err(|e| usage(format!("measure: {e}")))
}

fn preset_error(name: &str, backend: &str, known: &str) -> anyhow::Error {
    usage(format!("measure: unknown preset '{name}' for {backend} ({known})"))
}

fn line_measure(spec: &MeasureSpec) -> anyhow::Result<StepMeasure<i64>> {
    match spec {
        MeasureSpec::Preset(p) if p == "symmetric" => Ok(measure::line_symmetric()),
        MeasureSpec::Preset(p) if p == "translation" => Ok(measure::line_translation()),
        MeasureSpec::Preset(p) => Err(preset_error(p, "line", "symmetric, translation")),
        MeasureSpec::Explicit { support, weights, symmetric } => explicit(support, weights, *symmetric, |s| {
            s.trim().parse::<i64>().map_err(|_| usage(format!("measure: '{s}' is not an integer")))
        }),
    }
}

fn grid_measure(spec: &MeasureSpec) -> anyhow::Result<StepMeasure<(i64, i64)>> {
    match spec {
        MeasureSpec::Preset(p) if p == "symmetric" => Ok(measure::grid_symmetric()),
        MeasureSpec::Preset(p) => Err(preset_error(p, "grid2", "symmetric")),
        MeasureSpec::Explicit { support, weights, symmetric } => explicit(support, weights, *symmetric, |s| {
            let bad = || usage(format!("measure: '{s}' is not a pair (a,b)"));
            let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        }),
    }
}

fn tree_measure(spec: &MeasureSpec) -> anyhow::Result<StepMeasure<GroupWord>> {
    match spec {
        MeasureSpec::Preset(p) if p == "symmetric" => Ok(measure::tree_flats_symmetric()),
        MeasureSpec::Preset(p) if p == "flat_only" => Ok(measure::tree_flats_flat_only()),
        MeasureSpec::Preset(p) if p == "b_only" => Ok(measure::tree_flats_b_only()),
        MeasureSpec::Preset(p) => Err(preset_error(p, "tree_flats", "symmetric, flat_only, b_only")),
        MeasureSpec::Explicit { support, weights, symmetric } => {
            explicit(support, weights, *symmetric, |s| s.parse::<GroupWord>().map_err(|e| usage(format!("measure: {e}"))))
        }
    }
}

fn building_measure(spec: &MeasureSpec, q: u32) -> anyhow::Result<StepMeasure<LaurentMatrix>> {
    match spec {
        MeasureSpec::Preset(p) if p == "elementary" => Ok(measure::building_elementary(q)?),
        MeasureSpec::Preset(p) if p == "diagonal" => Ok(measure::building_diagonal(q)),
        MeasureSpec::Preset(p) => Err(preset_error(p, "building_sl3", "elementary, diagonal")),
        MeasureSpec::Explicit { support, weights, symmetric } => explicit(support, weights, *symmetric, |s| {
            let m = LaurentMatrix::parse(s, q).map_err(|e| usage(format!("measure: {e}")))?;
            if !m.is_sl3() {
                return Err(usage(format!("measure: '{s}' is not in SL3")));
            }
            Ok(m)
        }),
    }
}

fn generic_reports<B: Backend>(traces: &[WalkTrace<B::State>], reports: &[ReportKind], out: &mut Map<String, Value>) -> anyhow::Result<()> {
    let needs_drift = reports.iter().any(|r| matches!(r, ReportKind::Drift | ReportKind::Clt));
    if needs_drift {
        let drift = estimate_drift(traces)?;
        if reports.contains(&ReportKind::Clt) {
            let mut clt = serde_json::to_value(clt_harness(traces, drift.lambda_hat)?)?;
            // samples are recoverable from the CSV
            clt.as_object_mut().unwrap().remove("samples");
            out.insert("clt".into(), clt);
        }
        if reports.contains(&ReportKind::Drift) {
            out.insert("drift".into(), serde_json::to_value(drift)?);
        }
    }
    if reports.contains(&ReportKind::Contracting) {
        out.insert("contracting".into(), serde_json::to_value(contracting_report(traces))?);
    }
    Ok(())
}

fn run<B: Backend>(
    backend: &B,
    measure: &StepMeasure<B::Element>,
    wc: &WalkConfig,
    reports: &[ReportKind],
) -> anyhow::Result<(Vec<WalkTrace<B::State>>, Map<String, Value>)> {
    let traces = run_walks(backend, measure, wc)?;
    let mut out = Map::new();
    generic_reports::<B>(&traces, reports, &mut out)?;
    Ok((traces, out))
}

fn walk_config(cfg: &ExperimentConfig) -> WalkConfig {
    let mut wc = WalkConfig::new(cfg.steps, cfg.trials, cfg.seed);
    if let Some(s) = &cfg.schedule {
        let mut s = s.clone();
        if s.last() != Some(&cfg.steps) {
            s.push(cfg.steps);
        }
        wc = wc.with_schedule(s);
    }
    wc.keep_positions(cfg.report.contains(&ReportKind::Hitting))
}

/// Runs the experiment; returns the CSV text and the manifest.
pub fn simulate(cfg: ExperimentConfig) -> anyhow::Result<(String, RunManifest)> {
    let start = Instant::now();
    let wc = walk_config(&cfg);
    let certify = cfg.report.contains(&ReportKind::Contracting);
    let (csv, reports) = match cfg.backend {
        BackendKind::Line => {
            let (t, r) = run(&LineBackend, &line_measure(&cfg.measure)?, &wc, &cfg.report)?;
            (csv_string(&t), r)
        }
        BackendKind::Grid2 => {
            let (t, r) = run(&GridBackend, &grid_measure(&cfg.measure)?, &wc, &cfg.report)?;
            (csv_string(&t), r)
        }
        BackendKind::TreeFlats => {
            let b = if certify { TreeFlatsBackend::certifying(cfg.level, 4) } else { TreeFlatsBackend::word() };
            let (t, r) = run(&b, &tree_measure(&cfg.measure)?, &wc, &cfg.report)?;
            (csv_string(&t), r)
        }
        BackendKind::BuildingSl3 => {
            let b = BuildingBackend::standard(cfg.q).certifying(certify);
            let m = building_measure(&cfg.measure, cfg.q)?;
            let (t, mut r) = run(&b, &m, &wc, &cfg.report)?;
            if cfg.report.contains(&ReportKind::Hitting) {
                let h = hitting_measure(&b, &m, &t)?;
                r.insert("hitting".into(), serde_json::to_value(h)?);
            }
            (csv_string(&t), r)
        }
    };
    let manifest = RunManifest {
        tool: "hypwalk",
        version: env!("CARGO_PKG_VERSION"),
        csv_sha256: sha256_hex(csv.as_bytes()),
        csv_rows: csv.lines().count() - 1,
        reports,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        config: cfg,
    };
    Ok((csv, manifest))
}

/// CSV goes to `out`, or to stdout. The manifest goes to `manifest`, or
/// to whichever stream the CSV left free.
pub fn write_outputs(csv: &str, manifest: &RunManifest) -> anyhow::Result<()> {
    let json = serde_json::to_string_pretty(manifest)? + "\n";
    match &manifest.config.out {
        Some(p) => std::fs::write(p, csv).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{csv}"),
    }
    match (&manifest.config.manifest, &manifest.config.out) {
        (Some(p), _) => std::fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
        (None, Some(_)) => print!("{json}"),
        (None, None) => eprint!("{json}"),
    }
    Ok(())
}
