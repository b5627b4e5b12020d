//! Argument parsing and subcommand dispatch.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wedgebound_core::density::Estimator;
use wedgebound_core::verify::Overrides;

use crate::bounds::{self, Format};
use crate::plot::{self, Kind, Params};
use crate::{records, report, CliError, Parallel, DEFAULT_SAMPLES, DEFAULT_SEED, PRECISION_SAMPLES};

#[derive(Debug, Parser)]
#[command(
    name = "wedgebound",
    version,
    about = "Simplex and wedge sphere-packing density bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Sampling {
    /// Monte-Carlo samples per estimate.
    #[arg(long, default_value_t = DEFAULT_SAMPLES, conflicts_with = "precision")]
    pub samples: u64,
    /// Use 10^8 samples per estimate.
    #[arg(long)]
    pub precision: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

impl Sampling {
    pub fn n(&self) -> u64 {
        if self.precision {
            PRECISION_SAMPLES
        } else {
            self.samples
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of sigma, sigma_hat and lambda with reference curves.
    Bounds {
        #[arg(long, default_value_t = 8)]
        dmin: usize,
        #[arg(long, default_value_t = 16)]
        dmax: usize,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run numerical checks by name, or `all`.
    Verify {
        #[arg(default_value = "all")]
        checks: Vec<String>,
        /// Run each selected check at this dimension only.
        #[arg(long)]
        d: Option<usize>,
        /// Grid size or point count override.
        #[arg(long)]
        grid: Option<usize>,
        /// Random trial count override.
        #[arg(long)]
        trials: Option<usize>,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare record packing densities with the computed bounds.
    Records {
        /// Records csv with header d,density,name,source; the bundled
        /// example when omitted.
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        dmin: usize,
        #[arg(long, default_value_t = 24)]
        dmax: usize,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tab-separated data for external plotting.
    PlotData {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 8)]
        d: usize,
        #[arg(long, default_value_t = 8)]
        dmin: usize,
        #[arg(long, default_value_t = 16)]
        dmax: usize,
        /// Points for profiles and curves.
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[command(flatten)]
        sampling: Sampling,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn estimator(s: &Sampling) -> Estimator<'static> {
    Estimator::new(s.n(), s.seed).with_executor(&Parallel)
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    let start = Instant::now();
    let code = match cli.command {
        Command::Bounds {
            dmin,
            dmax,
            sampling,
            format,
            out,
        } => {
            let table = bounds::compute(&estimator(&sampling), dmin, dmax)?;
            emit(&table.render(format)?, out.as_ref())?;
            0
        }
        Command::Verify {
            checks,
            d,
            grid,
            trials,
            sampling,
            format,
            out,
        } => {
            let selected = report::select(&checks)?;
            bounds::check_samples(sampling.n())?;
            let overrides = Overrides { d, grid, trials };
            let rep = report::run(&estimator(&sampling), &selected, &overrides)?;
            let text = match format {
                ReportFormat::Json => rep.json()?,
                ReportFormat::Text => rep.text(),
            };
            emit(&text, out.as_ref())?;
            rep.exit_code()
        }
        Command::Records {
            file,
            dmin,
            dmax,
            sampling,
            format,
            out,
        } => {
            bounds::check_samples(sampling.n())?;
            let rows = match &file {
                Some(path) => {
                    let label = path.display().to_string();
                    let f = fs::File::open(path).map_err(|e| CliError::Input {
                        path: label.clone(),
                        line: 0,
                        message: e.to_string(),
                    })?;
                    records::parse(f, &label)?
                }
                None => records::parse(records::BUNDLED.as_bytes(), "bundled records")?,
            };
            let table = records::compare(&estimator(&sampling), rows, dmin.max(2), dmax)?;
            emit(&table.render(format)?, out.as_ref())?;
            if table.inconsistent() > 0 {
                1
            } else {
                0
            }
        }
        Command::PlotData {
            kind,
            d,
            dmin,
            dmax,
            points,
            sampling,
            out,
        } => {
            let p = Params {
                d,
                d_min: dmin,
                d_max: dmax,
                points,
            };
            emit(&plot::render(kind, &estimator(&sampling), &p)?, out.as_ref())?;
            0
        }
    };
    eprintln!("wall time {:.3} s", start.elapsed().as_secs_f64());
    Ok(code)
}

/// Parses `std::env::args`, runs, and maps errors to exit code 2.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Usage(_)) {
                eprintln!("usage: wedgebound <bounds|verify|records|plot-data> [options]; see --help");
            }
            e.exit_code()
        }
    }
}
