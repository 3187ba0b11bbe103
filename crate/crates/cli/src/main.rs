use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use mammo_edge::bench::{run_batch, ConfigFile, RunConfig};
use mammo_edge::detector::DetectorKind;
use mammo_edge::raster::write_pgm_file;
use mammo_edge::{synth, Error};

#[derive(Parser)]
#[command(
    name = "mammo-edge",
    version,
    about = "Edge detection benchmark for PGM mammograms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run detectors over a directory of PGM images and write reports.
    Detect {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Comma-separated detector names, or `all`.
        #[arg(long)]
        detectors: Option<String>,
        /// key = value parameter file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Glob over file names, e.g. `mdb0*`.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write tables.md.
        #[arg(long)]
        tables: bool,
    },
    /// Write the synthetic phantom corpus.
    Synth {
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 256)]
        size: usize,
    },
}

enum Failure {
    Config(String),
    Batch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Parameter(_) => Failure::Config(e.to_string()),
            other => Failure::Batch(other.to_string()),
        }
    }
}

fn detect(
    input: PathBuf,
    output: PathBuf,
    detectors: Option<String>,
    config: Option<PathBuf>,
    filter: Option<String>,
    jobs: Option<usize>,
    tables: bool,
) -> Result<(), Failure> {
    let file = match &config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
            ConfigFile::parse(&text)?
        }
        None => ConfigFile::default(),
    };

    let mut run = RunConfig::new(input, output);
    run.detectors = match detectors {
        Some(list) => DetectorKind::parse_list(&list)?,
        None => file.detectors.unwrap_or_else(|| DetectorKind::ALL.to_vec()),
    };
    run.settings = file.settings;
    run.image_filter = filter.or(file.filter);
    run.parallelism = jobs.or(file.jobs).unwrap_or(1);
    run.denominator = file.denominator;
    run.tables = tables;

    let started = Instant::now();
    let summary = run_batch(&run)?;
    eprintln!(
        "{} images x {} detectors: {} rows, {} errors in {:.2?}",
        summary.image_ids.len(),
        summary.detectors.len(),
        summary.rows.len(),
        summary.errors.len(),
        started.elapsed()
    );
    for e in &summary.errors {
        eprintln!("  {} / {}: {}", e.image_id, e.detector, e.message);
    }
    Ok(())
}

fn write_corpus(output: PathBuf, count: usize, size: usize) -> Result<(), Failure> {
    if size < 8 {
        return Err(Failure::Config("--size must be at least 8".into()));
    }
    fs::create_dir_all(&output)
        .map_err(|e| Failure::Batch(format!("{}: {e}", output.display())))?;
    for k in 1..=count {
        let path = output.join(format!("synth{k:03}.pgm"));
        write_pgm_file(&path, &synth::phantom(size, k as u64))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Detect {
            input,
            output,
            detectors,
            config,
            filter,
            jobs,
            tables,
        } => detect(input, output, detectors, config, filter, jobs, tables),
        Command::Synth {
            output,
            count,
            size,
        } => write_corpus(output, count, size),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Batch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
