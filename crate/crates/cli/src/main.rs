use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use zerocell::experiments::{run_experiment, EXPERIMENT_KINDS};
use zerocell_cli::{load_config, write_results, CliError, RunManifest, WallClock, SEED_ENV};

#[derive(Parser)]
#[command(name = "zerocell", version, about = "Run zero-cell convergence experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write `<name>.csv` and `<name>.json` to `--out`.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Root seed; overrides the config's `rootSeed`.
        #[arg(long, env = SEED_ENV)]
        seed: Option<u64>,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Parse and validate a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the accepted experiment kinds.
    ListExperiments,
}

fn run(
    config: PathBuf,
    seed: Option<u64>,
    workers: Option<usize>,
    out: PathBuf,
) -> Result<bool, CliError> {
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0);
    let clock = Instant::now();
    let (mut cfg, raw) = load_config(&config)?;
    if let Some(s) = seed {
        cfg.set_root_seed(s);
    }
    let workers = match workers {
        Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let output = pool.install(|| run_experiment(&cfg))?;
    let manifest = RunManifest {
        config_path: config,
        root_seed: cfg.root_seed(),
        worker_count: workers,
        output_dir: out,
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_clock: WallClock {
            started_unix_seconds: started,
            elapsed_seconds: clock.elapsed().as_secs_f64(),
        },
    };
    let (csv, _) = write_results(&output, &cfg, raw, manifest)?;
    let failed = output.rows.iter().filter(|r| !r.passed).count();
    println!(
        "{}: {} rows, {} failed -> {}",
        cfg.name(),
        output.rows.len(),
        failed,
        csv.display()
    );
    for r in output.rows.iter().filter(|r| !r.passed) {
        eprintln!(
            "FAILED {} at {}: estimate {} reference {} stderr {}",
            r.experiment, r.sweep_value, r.estimate, r.reference, r.standard_error
        );
    }
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            seed,
            workers,
            out,
        } => run(config, seed, workers, out),
        Command::Validate { config } => load_config(&config).map(|(cfg, _)| {
            println!("{}: valid {} config", cfg.name(), cfg.kind());
            true
        }),
        Command::ListExperiments => {
            for k in EXPERIMENT_KINDS {
                println!("{k}");
            }
            Ok(true)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
