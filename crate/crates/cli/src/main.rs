//! Command-line front end for `hypwalk`.

mod commands;
mod config;
mod simulate;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};

use config::{BackendKind, ExperimentConfig, PartialConfig, ReportKind, UsageError};

#[derive(Parser)]
#[command(name = "hypwalk", version, about = "Random walks on trees of flats and on the SL3 building")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded walks; write per-checkpoint CSV and a JSON manifest.
    Simulate(SimulateArgs),
    /// Check a single element for a contraction or hyperbolicity certificate.
    Certify {
        #[arg(long)]
        backend: BackendKind,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// L for the tree-of-flats certificate.
        #[arg(long, default_value_t = 0)]
        level: u32,
        /// Largest power searched for a skewered wall.
        #[arg(long, default_value_t = 4)]
        max_power: u32,
        #[arg(long)]
        json: bool,
    },
    /// Word distance and chain distance between two tree-of-flats vertices.
    Dl {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long = "level", short = 'L', default_value_t = 0)]
        level: u32,
        #[arg(long)]
        json: bool,
    },
    /// Queries on the building of SL3 over F_q((t)).
    Building {
        #[command(subcommand)]
        query: BuildingQuery,
    },
    /// Run an acceptance suite: `oracles` or `limits`.
    Accept {
        #[arg(long)]
        suite: String,
        /// Overrides the pinned seeds of the statistical criteria.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum BuildingQuery {
    /// Residue sizes and the flag id table.
    Info {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        json: bool,
    },
    /// Vector distance between the classes of two bases.
    Distance {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        json: bool,
    },
    /// Germ at `x` of the segment towards `y`.
    Germ {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// TOML file with any of the keys below; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    backend: Option<BackendKind>,
    #[arg(long)]
    q: Option<u32>,
    /// Preset name (symmetric, translation, flat_only, b_only, elementary, diagonal).
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "level", short = 'L')]
    level: Option<u32>,
    /// Comma-separated checkpoints; the horizon is appended.
    #[arg(long, value_delimiter = ',')]
    schedule: Option<Vec<u64>>,
    /// Comma-separated: drift, clt, hitting, contracting.
    #[arg(long, value_delimiter = ',')]
    report: Option<Vec<ReportKind>>,
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Manifest path; defaults to stdout, or stderr when the CSV is on stdout.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

impl SimulateArgs {
    fn partial(&self) -> PartialConfig {
        PartialConfig {
            backend: self.backend.clone(),
            q: self.q,
            measure: self.measure.clone().map(config::MeasureSpec::Preset),
            steps: self.steps,
            trials: self.trials,
            seed: self.seed,
            level: self.level,
            schedule: self.schedule.clone(),
            report: self.report.clone(),
            out: self.out.clone(),
            manifest: self.manifest.clone(),
        }
    }
}

fn emit(out: commands::Output, json: bool) -> anyhow::Result<bool> {
    let text = if json { serde_json::to_string_pretty(&out.json)? + "\n" } else { out.lines.join("\n") + "\n" };
    let mut stdout = std::io::stdout().lock();
    match stdout.write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(true),
        r => Ok(r.map(|_| true)?),
    }
}

fn run_simulate(args: &SimulateArgs) -> anyhow::Result<bool> {
    let file = match &args.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| config::usage(format!("config: cannot read {}: {e}", p.display())))?;
            PartialConfig::from_toml(&text)?
        }
        None => PartialConfig::default(),
    };
    let cfg = ExperimentConfig::resolve(args.partial().over(file)).map_err(|e| {
        let mut cmd = Cli::command();
        cmd.build();
        let usage_text = cmd.find_subcommand_mut("simulate").map(|c| c.render_usage().to_string()).unwrap_or_default();
        config::usage(format!("{e}\n\n{usage_text}"))
    })?;
    let (csv, manifest) = simulate::simulate(cfg)?;
    simulate::write_outputs(&csv, &manifest)?;
    Ok(true)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Simulate(args) => run_simulate(&args),
        Command::Certify { backend, element, q, level, max_power, json } => match backend {
            BackendKind::TreeFlats => emit(commands::certify_tree(&element, level, max_power)?, json),
            BackendKind::BuildingSl3 => emit(commands::certify_building(&element, q)?, json),
            _ => Err(config::usage("certify: backend must be tree_flats or building_sl3")),
        },
        Command::Dl { x, y, level, json } => emit(commands::dl(&x, &y, level)?, json),
        Command::Building { query } => match query {
            BuildingQuery::Info { q, json } => emit(commands::building_info(q)?, json),
            BuildingQuery::Distance { x, y, q, json } => emit(commands::building_distance(&x, &y, q)?, json),
            BuildingQuery::Germ { x, y, q, json } => emit(commands::building_germ(&x, &y, q)?, json),
        },
        Command::Accept { suite, seed, json } => {
            hypwalk::acceptance::suite_ids(&suite).map_err(|e| config::usage(e.to_string()))?;
            let verdicts = hypwalk::acceptance::run_suite(&suite, seed, |v| {
                if !json {
                    println!("{v}");
                }
            })?;
            if json {
                println!("{}", serde_json::to_string_pretty(&verdicts)?);
            }
            let failed = verdicts.iter().filter(|v| !v.passed).count();
            if !json {
                println!("{} of {} criteria passed", verdicts.len() - failed, verdicts.len());
            }
            Ok(failed == 0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
