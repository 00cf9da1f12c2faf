//! `chain-disks`: batch front end for the exact chain disk amplitude engine.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use chain_disks_core::amplitudes::Pipeline;
use chain_disks_core::cli_reports::pipeline::amplitude_json;
use chain_disks_core::cli_reports::{
    compare_against_published, compare_tables, read_csv, run_moments, run_verify, solve, write_csv,
    ConfigFile, Overrides, ReportError, RunConfig, VerifyOptions,
};

const THREADS_VAR: &str = "CHAIN_DISKS_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "chain-disks",
    version,
    about = "Exact disk amplitudes of the open matrix chain"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// JSON configuration file; the three-matrix cubic chain when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    h_order: Option<usize>,
    #[arg(long, global = true)]
    nmax: Option<usize>,
    #[arg(long, global = true)]
    vmax: Option<usize>,
    /// poly, frac or num.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Coupling values for num mode, e.g. "g1=1/3,g2=1/5,g3=1/7".
    #[arg(long, global = true)]
    couplings: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Diagram budget of the planar oracle.
    #[arg(long, global = true)]
    budget: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the spectral curve and write curve.json.
    Solve,
    /// Moment table from the recursion pipeline.
    Moments {
        #[arg(long, default_value = "recursion")]
        pipeline: String,
    },
    /// Moment table from the planar Wick-contraction oracle.
    Oracle,
    /// Compare two moments.csv files, or one table with the published one.
    Compare {
        files: Vec<PathBuf>,
        #[arg(long = "against-paper")]
        published: bool,
    },
    /// Run the invariant suite.
    Verify {
        /// Check this curve file instead of a freshly solved curve.
        #[arg(long)]
        curve: Option<PathBuf>,
        /// Leave out the recursion versus oracle table comparison.
        #[arg(long)]
        skip_tables: bool,
    },
}

fn config_err(msg: impl Into<String>) -> ReportError {
    ReportError::Config(msg.into())
}

fn load_config(c: &Common) -> Result<RunConfig, ReportError> {
    let file = match &c.config {
        Some(p) => {
            let text =
                fs::read_to_string(p).map_err(|e| config_err(format!("{}: {e}", p.display())))?;
            ConfigFile::parse(&text)?
        }
        None => ConfigFile::cubic_default(),
    };
    let ov = Overrides {
        h_order: c.h_order,
        nmax: c.nmax,
        vmax: c.vmax,
        mode: c.mode.clone(),
        couplings: c.couplings.clone(),
        out: c.out.clone(),
        budget: c.budget,
    };
    RunConfig::from_file(&file, &ov)
}

fn setup_threads() -> Result<(), ReportError> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        config_err(format!(
            "{THREADS_VAR} must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| config_err(e.to_string()))
}

fn write_json(dir: &Path, name: &str, v: &Value) -> Result<PathBuf, ReportError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut text =
        serde_json::to_string_pretty(v).map_err(|e| ReportError::Format(e.to_string()))?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

fn moments(cfg: &RunConfig, pipeline: Pipeline) -> Result<bool, ReportError> {
    let t = run_moments(cfg, pipeline)?;
    fs::create_dir_all(&cfg.out_dir)?;
    let csv_path = cfg.out_dir.join("moments.csv");
    write_csv(&t, fs::File::create(&csv_path)?)?;
    let json_path = write_json(&cfg.out_dir, "amplitude.json", &amplitude_json(cfg, &t))?;
    println!(
        "{} cells from {} -> {}, {}",
        t.cells.len(),
        pipeline,
        csv_path.display(),
        json_path.display()
    );
    Ok(true)
}

fn compare(cfg: &RunConfig, files: &[PathBuf], published: bool) -> Result<bool, ReportError> {
    let read = |p: &PathBuf| -> Result<_, ReportError> {
        let f = fs::File::open(p).map_err(|e| config_err(format!("{}: {e}", p.display())))?;
        read_csv(f)
    };
    let report = if published {
        let table = match files {
            [] => run_moments(cfg, Pipeline::Recursion)?,
            [one] => read(one)?.table,
            _ => return Err(config_err("--against-paper takes at most one table")),
        };
        compare_against_published(&table)
    } else {
        let [l, r] = files else {
            return Err(config_err(
                "compare needs two moments.csv files or --against-paper",
            ));
        };
        let (a, b) = (read(l)?, read(r)?);
        compare_tables(&a.table, &b.table, [a.calibration, b.calibration])
    };
    print!("{}", report.render());
    write_json(&cfg.out_dir, "comparison.json", &report.to_json())?;
    Ok(!report.has_mismatch())
}

fn run(cli: &Cli) -> Result<bool, ReportError> {
    setup_threads()?;
    let cfg = load_config(&cli.common)?;
    match &cli.cmd {
        Command::Solve => {
            let out = solve(&cfg)?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            let path = write_json(&cfg.out_dir, "curve.json", &out.curve)?;
            println!("curve -> {}", path.display());
            Ok(true)
        }
        Command::Moments { pipeline } => {
            let p = match Pipeline::parse(pipeline) {
                Some(p) => p,
                _ => {
                    return Err(config_err(format!(
                        "--pipeline must be recursion or oracle, got {pipeline:?}"
                    )))
                }
            };
            moments(&cfg, p)
        }
        Command::Oracle => moments(&cfg, Pipeline::Oracle),
        Command::Compare { files, published } => compare(&cfg, files, *published),
        Command::Verify { curve, skip_tables } => {
            let curve = match curve {
                Some(p) => {
                    let text = fs::read_to_string(p)
                        .map_err(|e| config_err(format!("{}: {e}", p.display())))?;
                    Some(
                        serde_json::from_str(&text)
                            .map_err(|e| ReportError::Format(e.to_string()))?,
                    )
                }
                None => None,
            };
            let rep = run_verify(
                &cfg,
                &VerifyOptions {
                    curve,
                    skip_tables: *skip_tables,
                },
            )?;
            print!("{}", rep.render());
            write_json(&cfg.out_dir, "verify.json", &rep.to_json())?;
            Ok(rep.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
