//! Command-line front end: run experiments, sanity-check configs, compare
//! result directories, and enumerate exact fronts of tiny instances.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use hoverplan::config::{load_config, ExperimentConfig};
use hoverplan::engine::Mode;
use hoverplan::error::{Error, Result};
use hoverplan::experiment::{compare_fronts, export_results, read_dump_dir, run_experiment, RunFront};
use hoverplan::format::fmt_sig6;
use hoverplan::metrics::brute_force_front;
use hoverplan::solution::GridSpec;

#[derive(Parser)]
#[command(
    name = "hoverplan",
    version,
    about = "Multi-objective planning of UAV data-collection tours over field sensor networks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiment and export results.
    Run {
        /// Config file; omitted = built-in defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the master seed of the run plan.
        #[arg(long)]
        master_seed: Option<u64>,
        /// Override the output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse a config file and print the resolved experiment.
    ValidateConfig {
        config: PathBuf,
    },
    /// Compare two result directories run by run.
    Compare {
        dir_a: PathBuf,
        dir_b: PathBuf,
        /// Algorithm label in DIR_A (required if the directory holds several).
        #[arg(long)]
        algo_a: Option<String>,
        /// Algorithm label in DIR_B (required if the directory holds several).
        #[arg(long)]
        algo_b: Option<String>,
    },
    /// Exhaustively enumerate a grid-restricted instance and print its true
    /// front as CSV. Refuses instances beyond the evaluation cap.
    Oracle {
        /// Config file; omitted = built-in defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Grid points per continuous variable.
        #[arg(long, default_value_t = 3)]
        grid_points: usize,
    },
}

fn load_or_default(config: &Option<PathBuf>) -> Result<ExperimentConfig> {
    match config {
        Some(p) => load_config(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn cmd_run(config: Option<PathBuf>, master_seed: Option<u64>, out: Option<PathBuf>) -> Result<()> {
    let mut cfg = load_or_default(&config)?;
    if let Some(s) = master_seed {
        cfg.experiment.master_seed = s;
    }
    if let Some(o) = out {
        cfg.experiment.output_dir = o.to_string_lossy().into_owned();
    }
    cfg.validate()?;
    let scn = cfg.build_scenario()?;
    let algos = cfg.algo_configs()?;
    let hash = cfg.config_hash()?;
    println!(
        "scenario: {} devices, {} hover points; {} algorithm(s) x {} run(s), master seed {}",
        scn.num_devices(),
        scn.num_hovers,
        algos.len(),
        cfg.experiment.runs,
        cfg.experiment.master_seed
    );
    let started = Instant::now();
    let records = run_experiment(&scn, &algos, cfg.experiment.runs, cfg.experiment.master_seed)?;
    let out_dir = PathBuf::from(&cfg.experiment.output_dir);
    export_results(&records, &scn, &hash, cfg.scenario.placement_seed, &out_dir)?;
    println!(
        "finished {} runs in {:.1} s; results in {}",
        records.len(),
        started.elapsed().as_secs_f64(),
        out_dir.display()
    );
    Ok(())
}

fn cmd_validate(config: &Path) -> Result<()> {
    let cfg = load_config(config)?;
    let scn = cfg.build_scenario()?;
    let algos = cfg.algo_configs()?;
    println!("config ok: {}", config.display());
    println!(
        "  scenario: {} devices over {:.0} x {:.0} m, altitude {} m, {} hover points ({}x{} grid)",
        scn.num_devices(),
        scn.area.width(),
        scn.area.height(),
        scn.altitude_m,
        scn.num_hovers,
        cfg.scenario.grid[0],
        cfg.scenario.grid[1]
    );
    for (name, a) in &algos {
        let mode = match a.mode {
            Mode::Baseline => "baseline",
            Mode::Improved => "improved",
        };
        println!(
            "  algorithm {name}: {mode} mode, population {}, {} iterations, archive capacity {}",
            a.pop_size, a.max_iters, a.archive_cap
        );
    }
    println!(
        "  plan: {} runs, master seed {}, output dir {}",
        cfg.experiment.runs, cfg.experiment.master_seed, cfg.experiment.output_dir
    );
    println!("  config hash: {}", cfg.config_hash()?);
    Ok(())
}

fn algo_names(map: &BTreeMap<String, Vec<RunFront>>) -> String {
    map.keys().cloned().collect::<Vec<_>>().join(", ")
}

fn pick_algo<'m>(
    map: &'m BTreeMap<String, Vec<RunFront>>,
    want: Option<&str>,
    dir: &Path,
) -> Result<(&'m str, &'m [RunFront])> {
    match want {
        Some(name) => map
            .get_key_value(name)
            .map(|(k, v)| (k.as_str(), v.as_slice()))
            .ok_or_else(|| {
                Error::Config(format!(
                    "algorithm {name:?} not found in {}; available: {}",
                    dir.display(),
                    algo_names(map)
                ))
            }),
        None if map.len() == 1 => {
            let (k, v) = map.iter().next().expect("nonempty map");
            Ok((k.as_str(), v.as_slice()))
        }
        None => Err(Error::Config(format!(
            "{} holds several algorithms ({}); pick one with --algo-a/--algo-b",
            dir.display(),
            algo_names(map)
        ))),
    }
}

fn cmd_compare(dir_a: &Path, dir_b: &Path, algo_a: Option<String>, algo_b: Option<String>) -> Result<()> {
    let map_a = read_dump_dir(dir_a)?;
    let map_b = read_dump_dir(dir_b)?;
    let (name_a, fronts_a) = pick_algo(&map_a, algo_a.as_deref(), dir_a)?;
    let (name_b, fronts_b) = pick_algo(&map_b, algo_b.as_deref(), dir_b)?;
    let report = compare_fronts(name_a, fronts_a, name_b, fronts_b)?;
    println!("{report}");
    Ok(())
}

fn cmd_oracle(config: Option<PathBuf>, grid_points: usize) -> Result<()> {
    if grid_points == 0 {
        return Err(Error::Config("grid points must be at least 1".to_string()));
    }
    let cfg = load_or_default(&config)?;
    let scn = cfg.build_scenario()?;
    let front = brute_force_front(&scn, &GridSpec::new(grid_points))?;
    println!("f1_bps,f2_J,f3_J");
    for o in &front {
        println!("{},{},{}", fmt_sig6(o.min_rate_bps()), fmt_sig6(o.device_energy_j), fmt_sig6(o.uav_energy_j));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Command::Run { config, master_seed, out } => cmd_run(config, master_seed, out),
        Command::ValidateConfig { config } => cmd_validate(&config),
        Command::Compare { dir_a, dir_b, algo_a, algo_b } => cmd_compare(&dir_a, &dir_b, algo_a, algo_b),
        Command::Oracle { config, grid_points } => cmd_oracle(config, grid_points),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
