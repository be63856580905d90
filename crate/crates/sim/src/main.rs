use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use cavity_lattice_sim::table::TIMESTAMP_PREFIX;
use cavity_lattice_sim::{parse_config_with_overrides, run_scenario};

/// Run a cavity lattice scenario and write its table as CSV.
#[derive(Debug, Parser)]
#[command(name = "simulate", version)]
struct Cli {
    /// Scenario file with `key = value` lines.
    config: PathBuf,
    /// Output file; defaults to the `output` key, then standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override a key, e.g. `--set a_s=2.5`. May be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Model for the ground states.
    #[arg(long, value_parser = ["coupled", "effective", "exact-elim", "dissipative"])]
    mode: Option<String>,
    /// Worker threads for sweeps.
    #[arg(long, env = "SIM_JOBS")]
    jobs: Option<usize>,
}

const CONFIG_ERROR: u8 = 1;
const RUN_ERROR: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    let text = match fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    let mut overrides = cli.set.clone();
    if let Some(m) = &cli.mode {
        overrides.push(format!("mode = {m}"));
    }
    let cfg = match parse_config_with_overrides(&text, &overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.config.display());
            return ExitCode::from(CONFIG_ERROR);
        }
    };

    let jobs = cli
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    log::info!("running {} with {jobs} worker(s)", cfg.scenario);
    let mut table = match run_scenario(&cfg, jobs) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(RUN_ERROR);
        }
    };
    let stamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    table.metadata.insert(
        1,
        format!("{}{stamp}", TIMESTAMP_PREFIX.trim_start_matches("# ")),
    );

    let out = cli.out.or(cfg.output);
    let written = match &out {
        Some(path) => fs::File::create(path).and_then(|f| table.write_csv(f)),
        None => table.write_csv(io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(CONFIG_ERROR);
    }
    let failed = table.failures();
    eprintln!(
        "{}: {} rows ({failed} failed){}",
        cfg.scenario,
        table.rows.len(),
        out.map(|p| format!(" -> {}", p.display()))
            .unwrap_or_default()
    );
    ExitCode::SUCCESS
}
