//! Experiment driver behind the command-line verbs: input loading, slope
//! sweeps, oracle comparisons, traces, archives and denoising runs.

use std::io::Write;
use std::path::Path;

use log::info;
use rayon::prelude::*;

use crate::anneal::{anneal, delta_bound, exhaustive_search, AnnealOutcome, AnnealerConfig, Init, RunTrace};
use crate::archive::Archive;
use crate::config::{ExperimentConfig, Mode, SourceConfig};
use crate::denoise::{bayes_fb, denoise, error_rate, DenoiseConfig, DerandWindow, NoiseModel, SlopeSearch};
use crate::energy::EnergySpec;
use crate::lossless::{enumerative_length, lz78_length};
use crate::pbm::Image2D;
use crate::sliding::{code_len, label_sequence, sb_anneal, sb_delta_bound, sb_exhaustive_search, SbAnnealConfig, SbCode};
use crate::sources::{bsc, generate, SourceKind, SourceSpec};
use crate::{Error, Result, Symbol};

/// A sequence to code, with its image geometry when it came from a PBM file.
#[derive(Clone, Debug, PartialEq)]
pub struct Input {
    pub symbols: Vec<Symbol>,
    pub alphabet: usize,
    pub dims: Option<(usize, usize)>,
}

/// Parses a text sequence: one decimal digit per symbol, whitespace ignored.
pub fn parse_sequence(text: &str) -> Result<Vec<Symbol>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as Symbol)
                .ok_or_else(|| Error::Malformed(format!("unexpected character {c:?} in sequence")))
        })
        .collect()
}

/// Digits, 80 per line.
pub fn format_sequence(y: &[Symbol]) -> String {
    let mut out = String::with_capacity(y.len() + y.len() / 80 + 1);
    for line in y.chunks(80) {
        out.extend(line.iter().map(|&s| char::from(b'0' + s)));
        out.push('\n');
    }
    out
}

fn alphabet_of(y: &[Symbol]) -> usize {
    y.iter().max().map_or(2, |&m| (m as usize + 1).max(2))
}

/// Reads a PBM image (`P1`/`P4`) or a digit sequence.
pub fn read_input_file(path: &Path) -> Result<Input> {
    let bytes = std::fs::read(path)?;
    if bytes.starts_with(b"P1") || bytes.starts_with(b"P4") {
        let img = Image2D::parse(&bytes)?;
        let dims = Some((img.width(), img.height()));
        return Ok(Input {
            symbols: img.into_pixels(),
            alphabet: 2,
            dims,
        });
    }
    let text = String::from_utf8(bytes).map_err(|_| Error::Malformed("sequence file is not text".into()))?;
    let symbols = parse_sequence(&text)?;
    if symbols.is_empty() {
        return Err(Error::Malformed(format!("{} holds no symbols", path.display())));
    }
    Ok(Input {
        alphabet: alphabet_of(&symbols),
        symbols,
        dims: None,
    })
}

/// Writes `symbols` as a raw PBM when `dims` is set, else as digit text.
pub fn write_output_file(path: &Path, symbols: &[Symbol], dims: Option<(usize, usize)>) -> Result<()> {
    match dims {
        Some((w, h)) => Image2D::new(w, h, symbols.to_vec())?.save(path, crate::pbm::PbmFormat::Raw),
        None => Ok(std::fs::write(path, format_sequence(symbols))?),
    }
}

/// The configured source block for `seed` (file inputs ignore the seed).
pub fn load_input(cfg: &ExperimentConfig, seed: u64) -> Result<Input> {
    match &cfg.source {
        SourceConfig::Synthetic(kind) => Ok(Input {
            symbols: generate(&SourceSpec {
                kind: *kind,
                n: cfg.n,
                seed,
            })?,
            alphabet: 2,
            dims: None,
        }),
        SourceConfig::File(path) => read_input_file(path),
    }
}

/// One coding run at a single slope.
#[derive(Clone, Debug, PartialEq)]
pub struct Coded {
    pub reconstruction: Vec<Symbol>,
    pub k: usize,
    pub hk_bits: f64,
    pub distortion: f64,
    pub energy: f64,
    pub code: Option<SbCode>,
    pub trace: Option<RunTrace>,
}

#[derive(Clone, Debug)]
pub enum WarmStart {
    Cold,
    Block(Vec<Symbol>),
    Sb(SbCode),
}

fn block_config(cfg: &ExperimentConfig, input: &Input, alpha: f64, seed: u64, init: Init) -> Result<AnnealerConfig> {
    let n = input.symbols.len();
    let shape = cfg.shape(n, input.alphabet, input.dims, false)?;
    let k = shape.order();
    let energy = EnergySpec::hamming(alpha, shape, input.alphabet)?;
    let schedule = cfg.schedule(n, delta_bound(n, k, alpha, input.alphabet, &energy.distortion))?;
    Ok(AnnealerConfig {
        energy,
        iterations: cfg.r_mult * n as u64,
        seed,
        init,
        schedule,
        trace_stride: cfg.trace_stride,
    })
}

fn sb_config(cfg: &ExperimentConfig, input: &Input, alpha: f64, seed: u64, init: Option<SbCode>) -> Result<SbAnnealConfig> {
    let n = input.symbols.len();
    let a = input.alphabet;
    let shape = cfg.shape(n, a, input.dims, true)?;
    let k = shape.order();
    let energy = EnergySpec::hamming(alpha, shape, a)?;
    let labels = label_sequence(&input.symbols, cfg.kf, a)?;
    let entries = code_len(cfg.kf, a)?;
    let delta_hat = sb_delta_bound(&labels, k, alpha, a, &energy.distortion);
    Ok(SbAnnealConfig {
        k_f: cfg.kf,
        schedule: cfg.schedule(entries, delta_hat)?,
        energy,
        iterations: cfg.r_mult * entries as u64,
        seed,
        init,
    })
}

fn from_block(out: AnnealOutcome, k: usize, keep_trace: bool) -> Coded {
    Coded {
        reconstruction: out.reconstruction,
        k,
        hk_bits: out.hk_bits,
        distortion: out.distortion,
        energy: out.energy,
        code: None,
        trace: keep_trace.then_some(out.trace),
    }
}

/// Codes `input` at slope `alpha` with the block or sliding-block annealer.
pub fn code(cfg: &ExperimentConfig, input: &Input, alpha: f64, seed: u64, warm: WarmStart) -> Result<Coded> {
    match cfg.mode {
        Mode::Block | Mode::Oracle | Mode::Denoise => {
            let init = match warm {
                WarmStart::Block(y) => Init::Given(y),
                _ => Init::SourceCopy,
            };
            let ac = block_config(cfg, input, alpha, seed, init)?;
            let k = ac.energy.shape.order();
            Ok(from_block(anneal(&input.symbols, &ac)?, k, cfg.trace_stride.is_some()))
        }
        Mode::Sb => {
            let init = match warm {
                WarmStart::Sb(c) => Some(c),
                _ => None,
            };
            let sc = sb_config(cfg, input, alpha, seed, init)?;
            let k = sc.energy.shape.order();
            let out = sb_anneal(&input.symbols, &sc)?;
            Ok(Coded {
                reconstruction: out.reconstruction,
                k,
                hk_bits: out.hk_bits,
                distortion: out.distortion,
                energy: out.energy,
                code: Some(out.code),
                trace: None,
            })
        }
    }
}

/// One sweep point: a seed at a slope.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub seed: u64,
    pub alpha: f64,
    pub n: usize,
    pub distortion: f64,
    pub hk_bits: f64,
    /// LZ78 payload bits per symbol.
    pub lz_rate: f64,
    /// Enumerative code length per symbol.
    pub le_rate: f64,
    pub energy: f64,
}

pub const SWEEP_HEADER: &str = "seed,alpha,n,distortion,hk_bits,lz_rate,le_rate,energy";

fn row(seed: u64, alpha: f64, input: &Input, c: &Coded) -> Result<SweepRow> {
    let n = input.symbols.len();
    Ok(SweepRow {
        seed,
        alpha,
        n,
        distortion: c.distortion,
        hk_bits: c.hk_bits,
        lz_rate: lz78_length(&c.reconstruction, input.alphabet)? as f64 / n as f64,
        le_rate: enumerative_length(&c.reconstruction, c.k, input.alphabet)? / n as f64,
        energy: c.energy,
    })
}

/// Every seed runs in parallel; within a seed the slopes run in the listed
/// order, each restarting the schedule, from the previous output when
/// `warm_start` is set.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    if !matches!(cfg.mode, Mode::Block | Mode::Sb) {
        return Err(Error::Config("sweep needs mode = block or sb".into()));
    }
    let per_seed: Vec<Vec<SweepRow>> = cfg
        .seeds
        .par_iter()
        .map(|&seed| {
            let input = load_input(cfg, seed)?;
            let mut warm = WarmStart::Cold;
            let mut rows = Vec::with_capacity(cfg.alphas.len());
            for &alpha in &cfg.alphas {
                let c = code(cfg, &input, alpha, seed, warm)?;
                info!("seed {seed} alpha {alpha}: D={:.4} Hk={:.4}", c.distortion, c.hk_bits);
                rows.push(row(seed, alpha, &input, &c)?);
                warm = match (cfg.warm_start, c.code) {
                    (false, _) => WarmStart::Cold,
                    (true, Some(code)) => WarmStart::Sb(code),
                    (true, None) => WarmStart::Block(c.reconstruction),
                };
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(per_seed.into_iter().flatten().collect())
}

/// Per-slope means over seeds, in first-appearance order of the slopes.
pub fn average_by_alpha(rows: &[SweepRow]) -> Vec<SweepRow> {
    let mut alphas: Vec<f64> = Vec::new();
    for r in rows {
        if !alphas.contains(&r.alpha) {
            alphas.push(r.alpha);
        }
    }
    alphas
        .into_iter()
        .map(|alpha| {
            let group: Vec<&SweepRow> = rows.iter().filter(|r| r.alpha == alpha).collect();
            let m = group.len() as f64;
            let mean = |f: fn(&SweepRow) -> f64| group.iter().map(|r| f(r)).sum::<f64>() / m;
            SweepRow {
                seed: group.len() as u64,
                alpha,
                n: group[0].n,
                distortion: mean(|r| r.distortion),
                hk_bits: mean(|r| r.hk_bits),
                lz_rate: mean(|r| r.lz_rate),
                le_rate: mean(|r| r.le_rate),
                energy: mean(|r| r.energy),
            }
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.seed, r.alpha, r.n, r.distortion, r.hk_bits, r.lz_rate, r.le_rate, r.energy
        )?;
    }
    Ok(())
}

/// Annealer result next to the exhaustive minimum for one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleRow {
    pub seed: u64,
    pub alpha: f64,
    pub oracle_energy: f64,
    pub anneal_energy: f64,
}

impl OracleRow {
    pub fn matched(&self) -> bool {
        (self.anneal_energy - self.oracle_energy).abs() <= 1e-9
    }
}

pub const ORACLE_HEADER: &str = "seed,alpha,oracle_energy,anneal_energy,matched";

/// Exhaustive search against the annealer for every seed and slope; block
/// codes unless `mode = sb`.
pub fn run_oracle(cfg: &ExperimentConfig) -> Result<Vec<OracleRow>> {
    let jobs: Vec<(u64, f64)> = cfg
        .seeds
        .iter()
        .flat_map(|&s| cfg.alphas.iter().map(move |&a| (s, a)))
        .collect();
    jobs.par_iter()
        .map(|&(seed, alpha)| {
            let input = load_input(cfg, seed)?;
            let n = input.symbols.len();
            let oracle_energy = if cfg.mode == Mode::Sb {
                let shape = cfg.shape(n, input.alphabet, input.dims, true)?;
                let spec = EnergySpec::hamming(alpha, shape, input.alphabet)?;
                sb_exhaustive_search(&input.symbols, cfg.kf, &spec)?.energy
            } else {
                let shape = cfg.shape(n, input.alphabet, input.dims, false)?;
                let spec = EnergySpec::hamming(alpha, shape, input.alphabet)?;
                exhaustive_search(&input.symbols, &spec)?.energy
            };
            let mut run_cfg = cfg.clone();
            if run_cfg.mode != Mode::Sb {
                run_cfg.mode = Mode::Block;
            }
            run_cfg.trace_stride = None;
            let anneal_energy = code(&run_cfg, &input, alpha, seed, WarmStart::Cold)?.energy;
            Ok(OracleRow {
                seed,
                alpha,
                oracle_energy,
                anneal_energy,
            })
        })
        .collect()
}

pub fn write_oracle_csv<W: Write>(rows: &[OracleRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{ORACLE_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.seed,
            r.alpha,
            r.oracle_energy,
            r.anneal_energy,
            r.matched()
        )?;
    }
    Ok(())
}

/// Block-annealer trace for the first seed and slope, one row per sweep
/// unless `trace_stride` is set.
pub fn run_trace(cfg: &ExperimentConfig) -> Result<RunTrace> {
    let seed = cfg.seeds[0];
    let input = load_input(cfg, seed)?;
    let mut run_cfg = cfg.clone();
    run_cfg.mode = Mode::Block;
    run_cfg.trace_stride = Some(cfg.trace_stride.unwrap_or(input.symbols.len() as u64).max(1));
    let c = code(&run_cfg, &input, cfg.alphas[0], seed, WarmStart::Cold)?;
    Ok(c.trace.expect("trace requested"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompressReport {
    pub n: usize,
    pub alpha: f64,
    pub hk_bits: f64,
    pub distortion: f64,
    pub lz_rate: f64,
    pub le_rate: f64,
    pub archive_bytes: usize,
}

impl std::fmt::Display for CompressReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "n={} alpha={} Hk={:.6} d_n={:.6} lz_rate={:.6} le_rate={:.6} archive_bytes={} archive_rate={:.6}",
            self.n,
            self.alpha,
            self.hk_bits,
            self.distortion,
            self.lz_rate,
            self.le_rate,
            self.archive_bytes,
            8.0 * self.archive_bytes as f64 / self.n as f64
        )
    }
}

/// Quantizes the input at the first slope and packs the reconstruction.
pub fn compress(cfg: &ExperimentConfig) -> Result<(Vec<u8>, CompressReport)> {
    let seed = cfg.seeds[0];
    let alpha = cfg.alphas[0];
    let input = load_input(cfg, seed)?;
    let mut run_cfg = cfg.clone();
    if run_cfg.mode != Mode::Sb {
        run_cfg.mode = Mode::Block;
    }
    run_cfg.trace_stride = None;
    let c = code(&run_cfg, &input, alpha, seed, WarmStart::Cold)?;
    let r = row(seed, alpha, &input, &c)?;
    let bytes = Archive {
        alphabet: input.alphabet,
        k: c.k,
        dims: input.dims,
        symbols: c.reconstruction,
    }
    .encode()?;
    Ok((
        bytes.clone(),
        CompressReport {
            n: r.n,
            alpha,
            hk_bits: r.hk_bits,
            distortion: r.distortion,
            lz_rate: r.lz_rate,
            le_rate: r.le_rate,
            archive_bytes: bytes.len(),
        },
    ))
}

pub fn decompress(bytes: &[u8]) -> Result<Archive> {
    Archive::decode(bytes)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenoiseReport {
    pub seed: u64,
    pub n: usize,
    /// `None` when the channel is noiseless and nothing was run.
    pub alpha: Option<f64>,
    pub converged: Option<bool>,
    pub probes: usize,
    pub quantized_distortion: Option<f64>,
    pub noisy_ber: Option<f64>,
    pub ber: Option<f64>,
    pub fb_ber: Option<f64>,
    pub estimate: Vec<Symbol>,
    pub noisy: Vec<Symbol>,
    pub dims: Option<(usize, usize)>,
}

pub const DENOISE_HEADER: &str = "seed,n,alpha,converged,probes,noisy_ber,ber,fb_ber";

pub fn write_denoise_csv<W: Write>(rows: &[DenoiseReport], mut w: W) -> std::io::Result<()> {
    let opt = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:.6}"));
    writeln!(w, "{DENOISE_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.seed,
            r.n,
            opt(r.alpha),
            r.converged.map_or(String::new(), |c| c.to_string()),
            r.probes,
            opt(r.noisy_ber),
            opt(r.ber),
            opt(r.fb_ber)
        )?;
    }
    Ok(())
}

fn denoise_config(cfg: &ExperimentConfig, input: &Input, seed: u64) -> Result<DenoiseConfig> {
    let n = input.symbols.len();
    let window = match input.dims {
        Some((width, height)) => DerandWindow::Square {
            width,
            height,
            m: cfg.window_m,
        },
        None => DerandWindow::Symmetric { m: cfg.window_m },
    };
    Ok(DenoiseConfig {
        noise: NoiseModel::bsc(cfg.delta)?,
        shape: cfg.shape(n, 2, input.dims, false)?,
        schedule: cfg.denoise_plan(),
        iterations_per_symbol: cfg.r_mult,
        seed,
        slope: SlopeSearch {
            tol: cfg.tol,
            prefix_len: cfg.prefix,
            ..SlopeSearch::default()
        },
        alpha: (!cfg.slope_search).then(|| cfg.alphas[0]),
        window,
    })
}

/// Denoises one noisy block. Synthetic sources are passed through a
/// BSC(`delta`) first and scored against the clean draw; file inputs are
/// taken as already noisy and scored against `reference` when given.
pub fn run_denoise(cfg: &ExperimentConfig, seed: u64) -> Result<DenoiseReport> {
    let (noisy, clean) = match &cfg.source {
        SourceConfig::Synthetic(_) => {
            let clean = load_input(cfg, seed)?;
            let z = Input {
                symbols: bsc(&clean.symbols, cfg.delta, seed)?,
                ..clean.clone()
            };
            (z, Some(clean.symbols))
        }
        SourceConfig::File(path) => {
            let z = read_input_file(path)?;
            let clean = match &cfg.reference {
                Some(r) => Some(read_input_file(r)?.symbols),
                None => None,
            };
            (z, clean)
        }
    };
    if noisy.alphabet != 2 {
        return Err(Error::Config("denoising supports binary data only".into()));
    }
    let markov_p = cfg.markov_p.or(match cfg.source {
        SourceConfig::Synthetic(SourceKind::Bsms(p)) => Some(p),
        _ => None,
    });
    let n = noisy.symbols.len();
    let mut report = DenoiseReport {
        seed,
        n,
        alpha: None,
        converged: None,
        probes: 0,
        quantized_distortion: None,
        noisy_ber: None,
        ber: None,
        fb_ber: None,
        estimate: noisy.symbols.clone(),
        noisy: noisy.symbols.clone(),
        dims: noisy.dims,
    };
    if cfg.delta > 0.0 {
        let dc = denoise_config(cfg, &noisy, seed)?;
        let out = denoise(&noisy.symbols, &dc)?;
        report.alpha = Some(out.alpha);
        report.converged = out.search.as_ref().map(|s| s.converged);
        report.probes = out.search.as_ref().map_or(0, |s| s.probes.len());
        report.quantized_distortion = Some(out.quantized.distortion);
        report.estimate = out.estimate;
    }
    if let Some(x) = &clean {
        report.noisy_ber = Some(error_rate(&noisy.symbols, x)?);
        report.ber = Some(error_rate(&report.estimate, x)?);
        if let (Some(p), None) = (markov_p, noisy.dims) {
            report.fb_ber = Some(error_rate(&bayes_fb(&noisy.symbols, p, cfg.delta)?, x)?);
        }
    }
    Ok(report)
}

/// [`run_denoise`] for every configured seed, in parallel.
pub fn run_denoise_all(cfg: &ExperimentConfig) -> Result<Vec<DenoiseReport>> {
    cfg.seeds.par_iter().map(|&s| run_denoise(cfg, s)).collect()
}
