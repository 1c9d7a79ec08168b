use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mcmc_lossy::config::ExperimentConfig;
use mcmc_lossy::harness::{self, write_output_file};
use mcmc_lossy::Result;

#[derive(Parser)]
#[command(name = "mcmc-lossy", version, about = "Lossy compression and denoising by annealed Gibbs sampling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quantize an input and write a versioned LZ78 archive.
    Compress {
        /// PBM image or digit-sequence file (default: the configured source).
        input: Option<PathBuf>,
        /// Size in bytes of a PNG of the same image, for an informational comparison.
        #[arg(long)]
        png_bytes: Option<u64>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Restore the reconstruction stored in an archive.
    Decompress {
        archive: PathBuf,
        /// Output path (PBM for images, digits otherwise); stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Denoise a BSC-corrupted input; prints a CSV report per seed.
    Denoise {
        /// Noisy PBM image or digit-sequence file (default: synthetic source through the channel).
        input: Option<PathBuf>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Per-sweep CSV of (iteration, Hk_bits, distortion, energy).
    Trace {
        #[command(flatten)]
        opts: Opts,
    },
    /// Code every seed at every slope; CSV rows per run.
    Sweep {
        /// Also write per-slope averages here.
        #[arg(long)]
        averages: Option<PathBuf>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Compare the annealer with exhaustive search on small instances.
    Oracle {
        #[command(flatten)]
        opts: Opts,
    },
}

/// Config file plus one flag per config key; flags win.
#[derive(Args)]
#[command(rename_all = "snake_case")]
struct Opts {
    /// key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    mode: Option<String>,
    /// bernoulli:P, bsms:P or file:PATH.
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Context order, or `auto`.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    kf: Option<String>,
    /// start:step:end or a comma list.
    #[arg(long)]
    alphas: Option<String>,
    /// geometric or logarithmic.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    beta0: Option<String>,
    #[arg(long)]
    t0: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    sweep: Option<String>,
    /// Iterations per symbol.
    #[arg(long)]
    r_mult: Option<String>,
    /// Comma list or a half-open range a..b.
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    warm_start: Option<String>,
    #[arg(long)]
    trace_stride: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    markov_p: Option<String>,
    #[arg(long)]
    window_m: Option<String>,
    #[arg(long)]
    prefix: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    slope_search: Option<String>,
    /// auto, previous, causal6 or offsets:dy,dx;dy,dx;...
    #[arg(long)]
    context: Option<String>,
    #[arg(long)]
    reference: Option<String>,
    #[arg(short, long)]
    output: Option<String>,
}

impl Opts {
    fn resolve(&self, input: Option<&Path>) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                let mut c = ExperimentConfig::default();
                c.apply_text(&std::fs::read_to_string(p)?)?;
                c
            }
            None => ExperimentConfig::default(),
        };
        let flags = [
            ("mode", &self.mode),
            ("source", &self.source),
            ("n", &self.n),
            ("k", &self.k),
            ("kf", &self.kf),
            ("alphas", &self.alphas),
            ("schedule", &self.schedule),
            ("gamma", &self.gamma),
            ("beta0", &self.beta0),
            ("t0", &self.t0),
            ("c", &self.c),
            ("sweep", &self.sweep),
            ("r_mult", &self.r_mult),
            ("seeds", &self.seeds),
            ("warm_start", &self.warm_start),
            ("trace_stride", &self.trace_stride),
            ("delta", &self.delta),
            ("markov_p", &self.markov_p),
            ("window_m", &self.window_m),
            ("prefix", &self.prefix),
            ("tol", &self.tol),
            ("slope_search", &self.slope_search),
            ("context", &self.context),
            ("reference", &self.reference),
            ("output", &self.output),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        if let Some(p) = input {
            cfg.set("source", &format!("file:{}", p.display()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compress { input, png_bytes, opts } => {
            let cfg = opts.resolve(input.as_deref())?;
            let (bytes, report) = harness::compress(&cfg)?;
            match &cfg.output {
                Some(p) => std::fs::write(p, &bytes)?,
                None => io::stdout().lock().write_all(&bytes)?,
            }
            eprintln!("{report}");
            if let Some(png) = png_bytes {
                eprintln!(
                    "archive is {:.1}% of the {png}-byte PNG",
                    100.0 * report.archive_bytes as f64 / png as f64
                );
            }
        }
        Command::Decompress { archive, output } => {
            let a = harness::decompress(&std::fs::read(&archive)?)?;
            match output {
                Some(p) => write_output_file(&p, &a.symbols, a.dims)?,
                None => match a.dims {
                    Some((w, h)) => mcmc_lossy::pbm::Image2D::new(w, h, a.symbols)?
                        .write(io::stdout().lock(), mcmc_lossy::pbm::PbmFormat::Raw)?,
                    None => io::stdout().lock().write_all(harness::format_sequence(&a.symbols).as_bytes())?,
                },
            }
        }
        Command::Denoise { input, opts } => {
            let cfg = opts.resolve(input.as_deref())?;
            let reports = harness::run_denoise_all(&cfg)?;
            if let Some(p) = &cfg.output {
                let r = &reports[0];
                write_output_file(p, &r.estimate, r.dims)?;
            }
            harness::write_denoise_csv(&reports, sink(None)?)?;
        }
        Command::Trace { opts } => {
            let cfg = opts.resolve(None)?;
            let trace = harness::run_trace(&cfg)?;
            trace.write_csv(sink(cfg.output.as_deref())?)?;
        }
        Command::Sweep { averages, opts } => {
            let cfg = opts.resolve(None)?;
            let rows = harness::run_sweep(&cfg)?;
            harness::write_sweep_csv(&rows, sink(cfg.output.as_deref())?)?;
            if let Some(p) = averages {
                harness::write_sweep_csv(&harness::average_by_alpha(&rows), sink(Some(&p))?)?;
            }
        }
        Command::Oracle { opts } => {
            let cfg = opts.resolve(None)?;
            let rows = harness::run_oracle(&cfg)?;
            let matched = rows.iter().filter(|r| r.matched()).count();
            harness::write_oracle_csv(&rows, sink(cfg.output.as_deref())?)?;
            eprintln!("{matched}/{} runs reached the exhaustive minimum", rows.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
