//! Simulated-annealing Gibbs sampler over reconstruction sequences, its
//! cooling schedules, and the exhaustive-search reference coder.

use std::io::Write;

use rand::Rng;

use crate::context::{ContextDelta, CountMatrix};
use crate::energy::{energy, DistortionMeasure, EnergySpec};
use crate::rng::{self, POSITION_STREAM, SYMBOL_STREAM};
use crate::{Error, Result, Symbol};

/// Inverse-temperature law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CoolingLaw {
    /// `beta_t = ln(floor(t / L) + 1) / t0`.
    Logarithmic { t0: f64 },
    /// `beta_t = beta0 * (1 / gamma)^ceil(t / L)`.
    Geometric { beta0: f64, gamma: f64 },
}

/// A cooling schedule; `sweep_length` is the `L` in [`CoolingLaw`], normally
/// the number of coordinates being resampled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule {
    pub law: CoolingLaw,
    pub sweep_length: u64,
}

impl Schedule {
    pub fn logarithmic(t0: f64, sweep_length: u64) -> Result<Self> {
        if !(t0 > 0.0) || !t0.is_finite() {
            return Err(Error::domain(format!("T0 must be positive, got {t0}")));
        }
        Self::checked(CoolingLaw::Logarithmic { t0 }, sweep_length)
    }

    pub fn geometric(beta0: f64, gamma: f64, sweep_length: u64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(Error::domain(format!("gamma must lie in (0, 1), got {gamma}")));
        }
        if !(beta0 > 0.0) || !beta0.is_finite() {
            return Err(Error::domain(format!("beta0 must be positive, got {beta0}")));
        }
        Self::checked(CoolingLaw::Geometric { beta0, gamma }, sweep_length)
    }

    /// Logarithmic schedule with `T0 = c * sweep_length * delta_hat`, `c > 1`.
    pub fn convergent(delta_hat: f64, c: f64, sweep_length: u64) -> Result<Self> {
        if !(c > 1.0) {
            return Err(Error::domain(format!("the T0 factor must exceed 1, got {c}")));
        }
        Self::logarithmic(c * sweep_length as f64 * delta_hat, sweep_length)
    }

    fn checked(law: CoolingLaw, sweep_length: u64) -> Result<Self> {
        if sweep_length == 0 {
            return Err(Error::domain("sweep length must be positive"));
        }
        Ok(Schedule { law, sweep_length })
    }

    /// Inverse temperature at iteration `t` (1-based).
    pub fn beta(&self, t: u64) -> f64 {
        match self.law {
            CoolingLaw::Logarithmic { t0 } => ((t / self.sweep_length) as f64 + 1.0).ln() / t0,
            CoolingLaw::Geometric { beta0, gamma } => {
                let stage = t.div_ceil(self.sweep_length);
                beta0 * (1.0 / gamma).powf(stage as f64)
            }
        }
    }
}

/// Sweep length of a [`SchedulePlan`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepLength {
    /// One sweep per resampled coordinate set (`n` for block chains).
    Coordinates,
    Fixed(u64),
}

/// A cooling law whose sweep length is resolved against the chain it drives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchedulePlan {
    pub law: CoolingLaw,
    pub sweep: SweepLength,
}

impl SchedulePlan {
    pub fn geometric(beta0: f64, gamma: f64) -> Self {
        SchedulePlan {
            law: CoolingLaw::Geometric { beta0, gamma },
            sweep: SweepLength::Coordinates,
        }
    }

    pub fn resolve(&self, coordinates: usize) -> Result<Schedule> {
        let sweep_length = match self.sweep {
            SweepLength::Coordinates => coordinates as u64,
            SweepLength::Fixed(l) => l,
        };
        match self.law {
            CoolingLaw::Logarithmic { t0 } => Schedule::logarithmic(t0, sweep_length),
            CoolingLaw::Geometric { beta0, gamma } => Schedule::geometric(beta0, gamma, sweep_length),
        }
    }
}

/// Conservative bound on `|Delta E|` for a single-symbol change:
/// `alpha * max d + 2 (k + 1) (log2 n + log2 |Y|)`.
pub fn delta_bound(n: usize, k: usize, alpha: f64, alphabet: usize, d: &DistortionMeasure) -> f64 {
    alpha * d.max() + 2.0 * (k as f64 + 1.0) * ((n as f64).log2() + (alphabet as f64).log2())
}

/// Starting point of a chain.
#[derive(Clone, Debug, PartialEq)]
pub enum Init {
    /// Start from the source block itself.
    SourceCopy,
    /// Start from a given reconstruction (e.g. the output at a previous slope).
    Given(Vec<Symbol>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnealerConfig {
    pub energy: EnergySpec,
    /// Number of Gibbs updates `r`.
    pub iterations: u64,
    pub seed: u64,
    pub init: Init,
    pub schedule: Schedule,
    /// Record a trace sample every this many iterations (plus the first and last).
    pub trace_stride: Option<u64>,
}

/// One trace sample taken after `iteration` updates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceSample {
    pub iteration: u64,
    pub hk_bits: f64,
    pub distortion: f64,
    /// `n * (hk_bits + alpha * distortion)`.
    pub energy: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunTrace {
    pub stride: u64,
    pub samples: Vec<TraceSample>,
}

impl RunTrace {
    pub const CSV_HEADER: &'static str = "iteration,Hk_bits,distortion,energy";

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for s in &self.samples {
            writeln!(w, "{},{},{},{}", s.iteration, s.hk_bits, s.distortion, s.energy)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnealOutcome {
    pub reconstruction: Vec<Symbol>,
    pub hk_bits: f64,
    pub distortion: f64,
    pub energy: f64,
    pub trace: RunTrace,
}

/// Fills `pmf` with `p(b) ~ exp(-beta * delta_e[b])`, max-subtracted in the log domain.
pub(crate) fn boltzmann_into(delta_e: &[f64], beta: f64, pmf: &mut Vec<f64>) {
    pmf.clear();
    if beta == 0.0 {
        pmf.extend(std::iter::repeat_n(1.0 / delta_e.len() as f64, delta_e.len()));
        return;
    }
    let min = delta_e.iter().copied().fold(f64::INFINITY, f64::min);
    pmf.extend(delta_e.iter().map(|&de| (-beta * (de - min)).exp()));
    let z: f64 = pmf.iter().sum();
    for p in pmf.iter_mut() {
        *p /= z;
    }
}

/// Inverse-CDF draw from a normalized pmf.
pub(crate) fn sample_index<R: Rng>(pmf: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (idx, &p) in pmf.iter().enumerate() {
        acc += p;
        if u < acc {
            return idx;
        }
    }
    pmf.iter().rposition(|&p| p > 0.0).unwrap_or(pmf.len() - 1)
}

/// Energy change of every candidate value at position `i`, with the
/// corresponding count moves left in `deltas`.
fn candidate_deltas(
    cm: &CountMatrix,
    y: &[Symbol],
    i: usize,
    x: &[Symbol],
    spec: &EnergySpec,
    delta_e: &mut Vec<f64>,
    deltas: &mut Vec<ContextDelta>,
) -> Result<()> {
    let a = spec.alphabet();
    let scale = y.len() as f64 / cm.total() as f64;
    let d = &spec.distortion;
    delta_e.clear();
    deltas.clear();
    for b in 0..a as Symbol {
        let delta = cm.affected_contexts(y, i, b);
        let de = if delta.is_empty() {
            0.0
        } else {
            scale * cm.entropy_sum_change(&delta.moves)? + spec.alpha * (d.get(x[i], b) - d.get(x[i], y[i]))
        };
        delta_e.push(de);
        deltas.push(delta);
    }
    Ok(())
}

/// Conditional pmf of `y_i` given the rest of `y` under the Boltzmann
/// distribution at inverse temperature `beta`.
pub fn gibbs_conditional(
    cm: &CountMatrix,
    y: &[Symbol],
    i: usize,
    beta: f64,
    x: &[Symbol],
    spec: &EnergySpec,
) -> Result<Vec<f64>> {
    if !(beta >= 0.0) {
        return Err(Error::domain(format!("beta must be >= 0, got {beta}")));
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut delta_e = Vec::new();
    let mut deltas = Vec::new();
    candidate_deltas(cm, y, i, x, spec, &mut delta_e, &mut deltas)?;
    let mut pmf = Vec::new();
    boltzmann_into(&delta_e, beta, &mut pmf);
    Ok(pmf)
}

fn sample_state(
    iteration: u64,
    y: &[Symbol],
    cm: &CountMatrix,
    x: &[Symbol],
    spec: &EnergySpec,
) -> Result<TraceSample> {
    let n = y.len() as f64;
    let hk_bits = cm.conditional_entropy()?;
    let dist = spec.distortion.total(x, y)? / n;
    Ok(TraceSample {
        iteration,
        hk_bits,
        distortion: dist,
        energy: n * (hk_bits + spec.alpha * dist),
    })
}

/// Runs `config.iterations` Gibbs updates at the scheduled temperatures and
/// returns the final reconstruction.
pub fn anneal(x: &[Symbol], config: &AnnealerConfig) -> Result<AnnealOutcome> {
    let spec = &config.energy;
    let n = x.len();
    if n == 0 {
        return Err(Error::domain("cannot anneal an empty sequence"));
    }
    if spec.distortion.source_size() <= x.iter().copied().max().unwrap_or(0) as usize {
        return Err(Error::SymbolOutOfRange {
            symbol: x.iter().copied().max().unwrap_or(0) as u32,
            alphabet: spec.distortion.source_size(),
        });
    }
    let mut y = match &config.init {
        Init::SourceCopy => x.to_vec(),
        Init::Given(y0) => {
            if y0.len() != n {
                return Err(Error::LengthMismatch {
                    left: y0.len(),
                    right: n,
                });
            }
            y0.clone()
        }
    };
    let mut cm = spec.counts(&y)?;

    let mut positions = rng::stream(config.seed, POSITION_STREAM);
    let mut symbols = rng::stream(config.seed, SYMBOL_STREAM);

    let stride = config.trace_stride.filter(|&s| s > 0);
    let mut trace = RunTrace {
        stride: stride.unwrap_or(0),
        samples: Vec::new(),
    };
    if stride.is_some() {
        trace.samples.push(sample_state(0, &y, &cm, x, spec)?);
    }

    let mut delta_e = Vec::with_capacity(spec.alphabet());
    let mut deltas = Vec::with_capacity(spec.alphabet());
    let mut pmf = Vec::with_capacity(spec.alphabet());
    for t in 1..=config.iterations {
        let beta = config.schedule.beta(t);
        let i = rng::index(&mut positions, n);
        candidate_deltas(&cm, &y, i, x, spec, &mut delta_e, &mut deltas)?;
        boltzmann_into(&delta_e, beta, &mut pmf);
        let b = sample_index(&pmf, &mut symbols);
        if b as Symbol != y[i] {
            cm.apply_moves(&deltas[b].moves)?;
            y[i] = b as Symbol;
        }
        if let Some(s) = stride {
            if t % s == 0 || t == config.iterations {
                trace.samples.push(sample_state(t, &y, &cm, x, spec)?);
            }
        }
    }

    let last = sample_state(config.iterations, &y, &cm, x, spec)?;
    Ok(AnnealOutcome {
        reconstruction: y,
        hk_bits: last.hk_bits,
        distortion: last.distortion,
        energy: last.energy,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExhaustiveResult {
    pub minimizer: Vec<Symbol>,
    /// `n * (H_k + alpha * d_n)` at the minimizer.
    pub energy: f64,
}

/// Largest search space `exhaustive_search` accepts, in bits (`n log2 |Y|`).
pub const EXHAUSTIVE_LIMIT_BITS: f64 = 24.0;

/// Global minimizer of `H_k(y) + alpha * d_n(x, y)` by enumerating every
/// reconstruction; ties go to the lexicographically smallest sequence.
pub fn exhaustive_search(x: &[Symbol], spec: &EnergySpec) -> Result<ExhaustiveResult> {
    let n = x.len();
    let a = spec.alphabet();
    let bits = n as f64 * (a as f64).log2();
    if bits > EXHAUSTIVE_LIMIT_BITS {
        return Err(Error::TooLarge(format!(
            "{a}^{n} candidates ({bits:.1} bits > {EXHAUSTIVE_LIMIT_BITS})"
        )));
    }
    let mut y = vec![0 as Symbol; n];
    let mut best = ExhaustiveResult {
        minimizer: y.clone(),
        energy: energy(&y, x, spec)?,
    };
    loop {
        // odometer with y[0] most significant
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(best);
            }
            pos -= 1;
            if (y[pos] as usize) + 1 < a {
                y[pos] += 1;
                break;
            }
            y[pos] = 0;
        }
        let e = energy(&y, x, spec)?;
        if e < best.energy - 1e-9 {
            best = ExhaustiveResult {
                minimizer: y.clone(),
                energy: e,
            };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::ContextShape;

    fn seq(s: &str) -> Vec<Symbol> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn schedule_laws() {
        let s = Schedule::geometric(1.0, 0.75, 10).unwrap();
        assert_eq!(s.beta(1), 1.0 / 0.75);
        assert_eq!(s.beta(10), 1.0 / 0.75);
        assert!((s.beta(11) - (1.0f64 / 0.75).powi(2)).abs() < 1e-12);

        let s = Schedule::logarithmic(2.0, 4).unwrap();
        assert_eq!(s.beta(3), 0.0);
        assert!((s.beta(4) - 2f64.ln() / 2.0).abs() < 1e-15);
        let mut last = 0.0;
        for t in 1..200 {
            assert!(s.beta(t) >= last);
            last = s.beta(t);
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(Schedule::geometric(1.0, 1.0, 5).is_err());
        assert!(Schedule::geometric(1.0, 0.0, 5).is_err());
        assert!(Schedule::logarithmic(0.0, 5).is_err());
        assert!(Schedule::logarithmic(1.0, 0).is_err());
        assert!(Schedule::convergent(3.0, 1.0, 5).is_err());
        let s = Schedule::convergent(4.0, 2.0, 10).unwrap();
        assert_eq!(s.law, CoolingLaw::Logarithmic { t0: 80.0 });
    }

    #[test]
    fn delta_bound_formula() {
        let d = DistortionMeasure::hamming(2);
        assert_eq!(delta_bound(2, 0, 0.0, 2, &d), 4.0);
        assert!(delta_bound(3, 0, 0.0, 2, &d) >= delta_bound(2, 0, 0.0, 2, &d));
        assert!(delta_bound(2, 1, 0.0, 2, &d) >= delta_bound(2, 0, 0.0, 2, &d));
        assert!(delta_bound(2, 0, 1.0, 2, &d) >= delta_bound(2, 0, 0.0, 2, &d));
        assert!(delta_bound(2, 0, 0.0, 3, &DistortionMeasure::hamming(3)) >= 4.0);
    }

    #[test]
    fn conditional_limits() {
        let spec = EnergySpec::hamming(1.0, ContextShape::linear(1), 2).unwrap();
        let x = seq("0011");
        let cm = spec.counts(&x).unwrap();
        let p = gibbs_conditional(&cm, &x, 1, 0.0, &x, &spec).unwrap();
        assert_eq!(p, vec![0.5, 0.5]);
        let p = gibbs_conditional(&cm, &x, 1, 1e6, &x, &spec).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.iter().any(|&v| v >= 1.0 - 1e-6));
        assert!(gibbs_conditional(&cm, &x, 1, -1.0, &x, &spec).is_err());
    }

    #[test]
    fn conditional_matches_direct_formula() {
        // x = 0011, k = 1, 1-based position 2, beta = 1
        let spec = EnergySpec::hamming(1.0, ContextShape::linear(1), 2).unwrap();
        let x = seq("0011");
        let y = x.clone();
        let cm = spec.counts(&y).unwrap();
        let p = gibbs_conditional(&cm, &y, 1, 1.0, &x, &spec).unwrap();
        let energies: Vec<f64> = (0..2)
            .map(|b| {
                let mut z = y.clone();
                z[1] = b;
                energy(&z, &x, &spec).unwrap()
            })
            .collect();
        let w: Vec<f64> = energies.iter().map(|e| (-e).exp()).collect();
        let z: f64 = w.iter().sum();
        for b in 0..2 {
            assert!((p[b] - w[b] / z).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_iterations_returns_source() {
        let x = seq("0110100110");
        let cfg = AnnealerConfig {
            energy: EnergySpec::hamming(1.0, ContextShape::linear(2), 2).unwrap(),
            iterations: 0,
            seed: 1,
            init: Init::SourceCopy,
            schedule: Schedule::geometric(1.0, 0.8, 10).unwrap(),
            trace_stride: Some(10),
        };
        let out = anneal(&x, &cfg).unwrap();
        assert_eq!(out.reconstruction, x);
        assert_eq!(out.trace.samples.len(), 1);
        assert_eq!(out.trace.samples[0].iteration, 0);
    }

    #[test]
    fn given_init_length_checked() {
        let cfg = AnnealerConfig {
            energy: EnergySpec::hamming(1.0, ContextShape::linear(1), 2).unwrap(),
            iterations: 5,
            seed: 1,
            init: Init::Given(vec![0; 3]),
            schedule: Schedule::geometric(1.0, 0.8, 4).unwrap(),
            trace_stride: None,
        };
        assert!(anneal(&seq("0101"), &cfg).is_err());
    }

    #[test]
    fn exhaustive_trivial_cases() {
        let spec = EnergySpec::hamming(1.0, ContextShape::linear(1), 2).unwrap();
        let r = exhaustive_search(&seq("1111111"), &spec).unwrap();
        assert_eq!(r.minimizer, seq("1111111"));
        assert_eq!(r.energy, 0.0);

        let spec = EnergySpec::hamming(0.0, ContextShape::linear(1), 2).unwrap();
        let r = exhaustive_search(&seq("0110"), &spec).unwrap();
        assert_eq!(r.minimizer, seq("0000"));
        assert_eq!(r.energy, 0.0);
    }

    #[test]
    fn exhaustive_small_instance() {
        // frozen from an independent enumeration of all 16 candidates
        let spec = EnergySpec::hamming(1.0, ContextShape::linear(1), 2).unwrap();
        let r = exhaustive_search(&seq("0110"), &spec).unwrap();
        assert_eq!(r.minimizer, seq("0111"));
        assert!((r.energy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exhaustive_refuses_large_instances() {
        let spec = EnergySpec::hamming(1.0, ContextShape::linear(1), 2).unwrap();
        assert!(matches!(
            exhaustive_search(&[0; 25], &spec),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn sampling_follows_cdf() {
        let mut rng = rng::stream(7, SYMBOL_STREAM);
        let pmf = [0.0, 1.0, 0.0];
        for _ in 0..100 {
            assert_eq!(sample_index(&pmf, &mut rng), 1);
        }
    }
}
