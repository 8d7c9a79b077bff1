use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use densecell::harness::{export_sinr_map, run_density_sweep, run_scenario};
use densecell::{Exec, ScenarioConfig};

#[derive(Debug, Parser)]
#[command(name = "densecell", version, about = "Dense small-cell downlink system-level simulator")]
struct Cli {
    #[command(flatten)]
    common: Common,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario file (TOML). Defaults to the built-in reference scenario.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    /// Override a scenario value, e.g. `--set geometry.picos_per_sector=4`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,

    /// Shorthand for `--set run.seed=<u64>`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Shorthand for `--set run.output_dir=<dir>`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for the parallel engine (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the scenario and write per-UE, per-cell and summary CSVs.
    Run,
    /// Time one run per pico density and write runtime.csv.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5")]
        densities: Vec<usize>,
        /// Time each density this many times and keep the fastest.
        #[arg(long, default_value_t = 1)]
        repeats: usize,
    },
    /// Export a best-server SINR map of the first drop as sinr_map.csv.
    Map {
        /// Pixel size in metres (default: inter-site distance / 50).
        #[arg(long)]
        resolution: Option<f64>,
    },
    /// Print the reference scenario with every default spelled out.
    Reference,
}

fn load(common: &Common) -> densecell::Result<ScenarioConfig> {
    let mut overrides = common.set.clone();
    if let Some(seed) = common.seed {
        overrides.push(format!("run.seed={seed}"));
    }
    if let Some(out) = &common.out {
        overrides.push(format!("run.output_dir={}", toml_string(&out.display().to_string())));
    }
    ScenarioConfig::load(common.scenario.as_deref(), &overrides)
}

fn toml_string(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn configure_threads(threads: Option<usize>) -> Result<(), String> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err("--threads must be at least 1".into());
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("thread pool: {e}"))?;
    #[cfg(not(feature = "parallel"))]
    if n > 1 {
        eprintln!("warning: built without the `parallel` feature, ignoring --threads {n}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), String> {
    configure_threads(cli.common.threads)?;
    if let Command::Reference = cli.command {
        print!("{}", ScenarioConfig::reference_toml());
        return Ok(());
    }
    let cfg = load(&cli.common).map_err(|e| e.to_string())?;
    let out = PathBuf::from(&cfg.run.output_dir);
    let exec = Exec::default();
    match cli.command {
        Command::Run => {
            let bundle = run_scenario(&cfg, &out, exec).map_err(|e| e.to_string())?;
            println!(
                "{} drop(s), {} cells, {} UEs, {} TTIs, seed {}",
                bundle.drops.len(),
                cfg.geometry.n_cells(),
                cfg.geometry.n_ues,
                cfg.run.ttis,
                cfg.run.seed
            );
            println!("{:<22} {:>7} {:>14} {:>14} {:>14} {:>14}", "metric", "count", "mean", "p5", "p50", "p95");
            for r in &bundle.summary {
                println!(
                    "{:<22} {:>7} {:>14.4} {:>14.4} {:>14.4} {:>14.4}",
                    r.metric, r.count, r.mean, r.p5, r.p50, r.p95
                );
            }
            for (d, t) in bundle.runtime.iter().enumerate() {
                println!("drop {d}: {t:.3} s");
            }
            println!("results in {}", out.display());
        }
        Command::Sweep { densities, repeats } => {
            let records = run_density_sweep(&cfg, &densities, repeats, &out, exec).map_err(|e| e.to_string())?;
            println!("{:>16} {:>8} {:>8} {:>12}", "picos_per_sector", "n_cells", "n_ues", "wallclock_s");
            for r in &records {
                println!("{:>16} {:>8} {:>8} {:>12.4}", r.picos_per_sector, r.n_cells, r.n_ues, r.wallclock_s);
            }
            println!("results in {}", out.display());
        }
        Command::Map { resolution } => {
            let res = resolution.unwrap_or(cfg.geometry.inter_site_distance / 50.0);
            let (_, map) = export_sinr_map(&cfg, res, &out, exec).map_err(|e| e.to_string())?;
            println!(
                "{} x {} pixels at {} m, SINR max {:.2} dB; results in {}",
                map.nx,
                map.ny,
                res,
                map.max(),
                out.display()
            );
        }
        Command::Reference => unreachable!(),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
