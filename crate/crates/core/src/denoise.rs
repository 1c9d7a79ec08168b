//! Compression-based denoising.
//!
//! The noisy sequence `z` is quantized by the block annealer under the
//! difference distortion `rho(z, y) = -log2 P_V(z - y mod M)` at a slope chosen
//! so the quantization distortion lands on `H(V)`. The quantized sequence is
//! then de-randomized by a Bayes decision against the joint counts of noisy
//! windows and quantized symbols. A forward-backward MAP smoother for a binary
//! symmetric Markov source over a BSC provides the non-universal reference.

use log::{debug, warn};
use rustc_hash::FxHashMap;

use crate::anneal::{anneal, AnnealOutcome, AnnealerConfig, Init, SchedulePlan};
use crate::context::ContextShape;
use crate::energy::{DistortionMeasure, EnergySpec};
use crate::{Error, Result, Symbol};

/// Additive noise on `Z_M` with a strictly positive pmf.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    pmf: Vec<f64>,
}

impl NoiseModel {
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        if pmf.len() < 2 || pmf.len() > 256 {
            return Err(Error::domain("noise alphabet must have between 2 and 256 symbols"));
        }
        if let Some(v) = pmf.iter().find(|&&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::domain(format!("noise probabilities must be positive, got {v}")));
        }
        let sum: f64 = pmf.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!("noise pmf sums to {sum}")));
        }
        Ok(NoiseModel { pmf })
    }

    /// Binary symmetric channel with crossover `delta` in `(0, 1)`.
    pub fn bsc(delta: f64) -> Result<Self> {
        Self::new(vec![1.0 - delta, delta])
    }

    pub fn alphabet(&self) -> usize {
        self.pmf.len()
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// `H(V)` in bits, the target quantization distortion.
    pub fn entropy(&self) -> f64 {
        self.pmf.iter().map(|&p| -p * p.log2()).sum()
    }

    pub fn difference_distortion(&self) -> DistortionMeasure {
        let m = self.alphabet();
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|x| (0..m).map(|y| -self.pmf[(x + m - y) % m].log2()).collect())
            .collect();
        DistortionMeasure::from_rows(&rows).expect("finite positive entries")
    }
}

/// `rho(x, y) = log2(1 / P_V(x - y mod M))`.
pub fn difference_distortion(pmf: &[f64]) -> Result<DistortionMeasure> {
    Ok(NoiseModel::new(pmf.to_vec())?.difference_distortion())
}

/// Neighbourhood of the noisy signal used as the de-randomization context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerandWindow {
    /// `z_{i-m} .. z_{i+m}` with cyclic extension.
    Symmetric { m: usize },
    /// `(2m+1) x (2m+1)` square around each pixel of a row-major image, toroidal.
    Square { width: usize, height: usize, m: usize },
}

impl DerandWindow {
    pub fn len(&self) -> usize {
        match *self {
            DerandWindow::Symmetric { m } => 2 * m + 1,
            DerandWindow::Square { m, .. } => (2 * m + 1) * (2 * m + 1),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn key(&self, z: &[Symbol], i: usize, alphabet: u64) -> u64 {
        let n = z.len();
        let mut key = 0u64;
        let mut push = |s: Symbol| key = key * alphabet + s as u64;
        match *self {
            DerandWindow::Symmetric { m } => {
                let start = (i + n * (m / n + 1) - m) % n;
                for t in 0..2 * m + 1 {
                    push(z[(start + t) % n]);
                }
            }
            DerandWindow::Square { width, height, m } => {
                let (r, c) = (i / width, i % width);
                let (m_r, m_c) = (height * (m / height + 1), width * (m / width + 1));
                for dr in 0..2 * m + 1 {
                    let rr = (r + m_r + dr - m) % height;
                    for dc in 0..2 * m + 1 {
                        push(z[rr * width + (c + m_c + dc - m) % width]);
                    }
                }
            }
        }
        key
    }
}

/// Joint counts `Q(context, y)` of noisy windows and quantized symbols.
#[derive(Clone, Debug)]
pub struct WindowCounts {
    recon_alphabet: usize,
    keys: Vec<u64>,
    counts: FxHashMap<u64, Vec<u32>>,
}

impl WindowCounts {
    pub fn build(
        z: &[Symbol],
        y: &[Symbol],
        window: DerandWindow,
        noisy_alphabet: usize,
        recon_alphabet: usize,
    ) -> Result<Self> {
        if z.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: z.len(),
                right: y.len(),
            });
        }
        if let DerandWindow::Square { width, height, .. } = window {
            if width * height != z.len() {
                return Err(Error::LengthMismatch {
                    left: z.len(),
                    right: width * height,
                });
            }
        }
        if let Some(&s) = z.iter().find(|&&s| s as usize >= noisy_alphabet) {
            return Err(Error::SymbolOutOfRange {
                symbol: s as u32,
                alphabet: noisy_alphabet,
            });
        }
        if let Some(&s) = y.iter().find(|&&s| s as usize >= recon_alphabet) {
            return Err(Error::SymbolOutOfRange {
                symbol: s as u32,
                alphabet: recon_alphabet,
            });
        }
        if (noisy_alphabet as u64).checked_pow(window.len() as u32).is_none() {
            return Err(Error::TooLarge("de-randomization window keys exceed 64 bits".into()));
        }
        let keys: Vec<u64> = (0..z.len())
            .map(|i| window.key(z, i, noisy_alphabet as u64))
            .collect();
        let mut counts: FxHashMap<u64, Vec<u32>> = FxHashMap::default();
        for (&key, &s) in keys.iter().zip(y) {
            counts.entry(key).or_insert_with(|| vec![0; recon_alphabet])[s as usize] += 1;
        }
        Ok(WindowCounts {
            recon_alphabet,
            keys,
            counts,
        })
    }

    /// Counts of each quantized symbol among positions sharing the window at `i`.
    pub fn at(&self, i: usize) -> &[u32] {
        &self.counts[&self.keys[i]]
    }

    pub fn num_contexts(&self) -> usize {
        self.counts.len()
    }

    pub fn recon_alphabet(&self) -> usize {
        self.recon_alphabet
    }
}

/// Bayes decision `argmin_a sum_y Q(window_i, y) d(a, y)`, ties to the smallest `a`.
/// `loss` is indexed `[estimate][quantized]`.
pub fn derandomize(
    z: &[Symbol],
    y: &[Symbol],
    window: DerandWindow,
    loss: &DistortionMeasure,
) -> Result<Vec<Symbol>> {
    let noisy_alphabet = z.iter().max().map_or(1, |&s| s as usize + 1).max(loss.recon_size());
    let q = WindowCounts::build(z, y, window, noisy_alphabet, loss.recon_size())?;
    let mut decisions: FxHashMap<u64, Symbol> = FxHashMap::default();
    let out = (0..z.len())
        .map(|i| {
            *decisions.entry(q.keys[i]).or_insert_with(|| {
                let col = q.at(i);
                let mut best = (f64::INFINITY, 0);
                for a in 0..loss.source_size() {
                    let cost: f64 = col
                        .iter()
                        .enumerate()
                        .map(|(s, &c)| c as f64 * loss.get(a as Symbol, s as Symbol))
                        .sum();
                    if cost < best.0 {
                        best = (cost, a as Symbol);
                    }
                }
                best.1
            })
        })
        .collect();
    Ok(out)
}

/// Posterior `P(x_i = 1 | z)` for a binary symmetric Markov source with
/// transition probability `p`, uniform start, observed through a BSC(`delta`).
pub fn bayes_posteriors(z: &[Symbol], p: f64, delta: f64) -> Result<Vec<f64>> {
    for (v, what) in [(p, "transition probability"), (delta, "crossover probability")] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::domain(format!("{what} must lie in [0, 1], got {v}")));
        }
    }
    if let Some(&s) = z.iter().find(|&&s| s > 1) {
        return Err(Error::SymbolOutOfRange {
            symbol: s as u32,
            alphabet: 2,
        });
    }
    let n = z.len();
    let emit = |zi: Symbol, x: usize| if zi as usize == x { 1.0 - delta } else { delta };
    let trans = [[1.0 - p, p], [p, 1.0 - p]];
    let normalize = |v: &mut [f64; 2]| -> Result<()> {
        let s = v[0] + v[1];
        if !(s > 0.0) {
            return Err(Error::domain("observation has zero likelihood under the model"));
        }
        v[0] /= s;
        v[1] /= s;
        Ok(())
    };

    let mut fwd = vec![[0.0; 2]; n];
    for i in 0..n {
        let mut a = [0.0; 2];
        for (x, ax) in a.iter_mut().enumerate() {
            let prior = if i == 0 {
                0.5
            } else {
                fwd[i - 1][0] * trans[0][x] + fwd[i - 1][1] * trans[1][x]
            };
            *ax = prior * emit(z[i], x);
        }
        normalize(&mut a)?;
        fwd[i] = a;
    }
    let mut out = vec![0.0; n];
    let mut b = [1.0, 1.0];
    for i in (0..n).rev() {
        let mut post = [fwd[i][0] * b[0], fwd[i][1] * b[1]];
        normalize(&mut post)?;
        out[i] = post[1];
        if i > 0 {
            let mut nb = [0.0; 2];
            for (x, nbx) in nb.iter_mut().enumerate() {
                *nbx = (0..2).map(|s| trans[x][s] * emit(z[i], s) * b[s]).sum();
            }
            normalize(&mut nb)?;
            b = nb;
        }
    }
    Ok(out)
}

/// Symbol-wise MAP estimate from [`bayes_posteriors`]; ties go to 0.
pub fn bayes_fb(z: &[Symbol], p: f64, delta: f64) -> Result<Vec<Symbol>> {
    Ok(bayes_posteriors(z, p, delta)?
        .into_iter()
        .map(|q| (q > 0.5) as Symbol)
        .collect())
}

/// Fraction of positions where `a` and `b` differ.
pub fn error_rate(a: &[Symbol], b: &[Symbol]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count() as f64 / a.len() as f64)
}

/// Knobs of the secant search for the slope hitting distortion `H(V)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeSearch {
    pub alpha_init: (f64, f64),
    /// Relative tolerance on the distortion, as a fraction of `H(V)`.
    pub tol: f64,
    pub max_probes: usize,
    pub prefix_len: usize,
}

impl Default for SlopeSearch {
    fn default() -> Self {
        SlopeSearch {
            alpha_init: (0.5, 1.5),
            tol: 0.05,
            max_probes: 8,
            prefix_len: 10_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Probe {
    pub alpha: f64,
    pub distortion: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlopeSearchResult {
    pub alpha: f64,
    pub target: f64,
    pub probes: Vec<Probe>,
    /// False when no probe came within tolerance; `alpha` is then the closest one.
    pub converged: bool,
    /// Adjacent probe pairs (sorted by slope) whose distortion increased with the slope.
    pub monotonicity_violations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenoiseConfig {
    pub noise: NoiseModel,
    pub shape: ContextShape,
    pub schedule: SchedulePlan,
    /// Iterations per symbol (`r = m * n`).
    pub iterations_per_symbol: u64,
    pub seed: u64,
    pub slope: SlopeSearch,
    /// Skips the search when set.
    pub alpha: Option<f64>,
    pub window: DerandWindow,
}

#[derive(Clone, Debug)]
pub struct DenoiseOutcome {
    pub estimate: Vec<Symbol>,
    pub quantized: AnnealOutcome,
    pub alpha: f64,
    pub search: Option<SlopeSearchResult>,
}

fn prefix_shape(shape: &ContextShape, n: usize, wanted: usize) -> Result<(usize, ContextShape)> {
    match shape {
        ContextShape::Previous { k, .. } => Ok((wanted.max(k + 1).min(n), shape.clone())),
        ContextShape::Raster {
            width,
            height,
            offsets,
        } => {
            let rows = (wanted / width).clamp(1, *height);
            Ok((rows * width, ContextShape::raster(*width, rows, offsets.clone())?))
        }
    }
}

fn quantize(z: &[Symbol], shape: ContextShape, alpha: f64, config: &DenoiseConfig) -> Result<AnnealOutcome> {
    let energy = EnergySpec::new(alpha, shape, config.noise.difference_distortion())?;
    let n = z.len();
    anneal(
        z,
        &AnnealerConfig {
            energy,
            iterations: config.iterations_per_symbol * n as u64,
            seed: config.seed,
            init: Init::SourceCopy,
            schedule: config.schedule.resolve(n)?,
            trace_stride: None,
        },
    )
}

fn next_alpha(probes: &[Probe], target: f64) -> f64 {
    // distortion falls as the slope grows
    let above = probes
        .iter()
        .filter(|p| p.distortion > target)
        .max_by(|a, b| a.alpha.total_cmp(&b.alpha));
    let below = probes
        .iter()
        .filter(|p| p.distortion < target)
        .min_by(|a, b| a.alpha.total_cmp(&b.alpha));
    let secant = |a: &Probe, b: &Probe| {
        a.alpha + (target - a.distortion) * (b.alpha - a.alpha) / (b.distortion - a.distortion)
    };
    let lo = probes.iter().map(|p| p.alpha).fold(f64::INFINITY, f64::min);
    let hi = probes.iter().map(|p| p.alpha).fold(0.0, f64::max);
    match (above, below) {
        (Some(a), Some(b)) if a.alpha < b.alpha => {
            let s = secant(a, b);
            if s.is_finite() && s > a.alpha && s < b.alpha {
                s
            } else {
                0.5 * (a.alpha + b.alpha)
            }
        }
        (Some(_), None) => {
            let s = secant(&probes[probes.len() - 2], &probes[probes.len() - 1]);
            if s.is_finite() && s > hi { s.min(4.0 * hi) } else { 2.0 * hi }
        }
        (None, Some(_)) => {
            let s = secant(&probes[probes.len() - 2], &probes[probes.len() - 1]);
            if s.is_finite() && s < lo && s > 0.0 { s.max(lo / 4.0) } else { lo / 2.0 }
        }
        // non-monotone probes: split the two closest to the target
        _ => {
            let mut sorted = probes.to_vec();
            sorted.sort_by(|a, b| (a.distortion - target).abs().total_cmp(&(b.distortion - target).abs()));
            0.5 * (sorted[0].alpha + sorted[1].alpha)
        }
    }
}

/// Secant search for the slope whose quantization distortion on a prefix of
/// `z` lies within `tol * H(V)` of `H(V)`. The first two probes run in parallel.
pub fn slope_search(z: &[Symbol], config: &DenoiseConfig) -> Result<SlopeSearchResult> {
    let s = &config.slope;
    if !(s.tol > 0.0) {
        return Err(Error::domain("slope-search tolerance must be positive"));
    }
    if s.max_probes < 2 {
        return Err(Error::domain("slope search needs at least two probes"));
    }
    let (a1, a2) = s.alpha_init;
    if !(a1 >= 0.0 && a2 >= 0.0 && a1 != a2) {
        return Err(Error::domain("initial slopes must be distinct and non-negative"));
    }
    let (len, shape) = prefix_shape(&config.shape, z.len(), s.prefix_len)?;
    let prefix = &z[..len];
    let target = config.noise.entropy();
    let within = |d: f64| (d - target).abs() <= s.tol * target;
    let run = |alpha: f64| -> Result<Probe> {
        let out = quantize(prefix, shape.clone(), alpha, config)?;
        debug!("slope probe alpha={alpha:.4} distortion={:.4} target={target:.4}", out.distortion);
        Ok(Probe {
            alpha,
            distortion: out.distortion,
        })
    };

    let mut probes = Vec::with_capacity(s.max_probes);
    let (first, second) = rayon::join(|| run(a1), || run(a2));
    let first = first?;
    probes.push(first);
    if !within(first.distortion) {
        probes.push(second?);
        while !within(probes[probes.len() - 1].distortion) && probes.len() < s.max_probes {
            let alpha = next_alpha(&probes, target);
            probes.push(run(alpha)?);
        }
    }

    let best = *probes
        .iter()
        .min_by(|a, b| (a.distortion - target).abs().total_cmp(&(b.distortion - target).abs()))
        .expect("at least one probe");
    let mut sorted = probes.clone();
    sorted.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    let violations = sorted
        .windows(2)
        .filter(|w| w[1].distortion > w[0].distortion + 1e-12)
        .count();
    if violations > 0 {
        warn!("slope search: distortion increased with slope in {violations} probe pair(s)");
    }
    let converged = within(best.distortion);
    if !converged {
        warn!(
            "slope search did not reach tolerance after {} probes; using alpha={:.4} (distortion {:.4}, target {:.4})",
            probes.len(),
            best.alpha,
            best.distortion,
            target
        );
    }
    Ok(SlopeSearchResult {
        alpha: best.alpha,
        target,
        probes,
        converged,
        monotonicity_violations: violations,
    })
}

/// Slope search (unless `config.alpha` is set), quantization of the whole of
/// `z`, then de-randomization under Hamming loss.
pub fn denoise(z: &[Symbol], config: &DenoiseConfig) -> Result<DenoiseOutcome> {
    let m = config.noise.alphabet();
    let (alpha, search) = match config.alpha {
        Some(a) => (a, None),
        None => {
            let r = slope_search(z, config)?;
            (r.alpha, Some(r))
        }
    };
    let quantized = quantize(z, config.shape.clone(), alpha, config)?;
    let estimate = derandomize(z, &quantized.reconstruction, config.window, &DistortionMeasure::hamming(m))?;
    Ok(DenoiseOutcome {
        estimate,
        quantized,
        alpha,
        search,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anneal::CoolingLaw;
    use crate::sources::{bsc, generate, SourceKind, SourceSpec};

    #[test]
    fn difference_distortion_values() {
        let d = difference_distortion(&[0.5, 0.5]).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(d.get(a, b), 1.0);
            }
        }
        let d = difference_distortion(&[0.9, 0.1]).unwrap();
        assert!((d.get(0, 0) - 0.152003).abs() < 1e-6);
        assert!((d.get(1, 0) - 10f64.log2()).abs() < 1e-12);
        assert!((d.get(0, 1) - 10f64.log2()).abs() < 1e-12);
        assert!((NoiseModel::bsc(0.1).unwrap().entropy() - 0.468996).abs() < 1e-6);
        assert!(difference_distortion(&[1.0, 0.0]).is_err());
        assert!(difference_distortion(&[0.6, 0.6]).is_err());
    }

    #[test]
    fn ternary_difference_is_modular() {
        let d = difference_distortion(&[0.7, 0.2, 0.1]).unwrap();
        // x - y = 2 (mod 3) for x = 0, y = 1
        assert!((d.get(0, 1) + 0.1f64.log2()).abs() < 1e-12);
        assert!((d.get(2, 0) + 0.1f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn derandomize_identity_and_majority() {
        let z: Vec<Symbol> = vec![0, 1, 1, 0, 1, 0, 0, 1, 1, 1];
        let ham = DistortionMeasure::hamming(2);
        let w = DerandWindow::Symmetric { m: 2 };
        assert_eq!(derandomize(&z, &z, w, &ham).unwrap(), z);

        // m = 0: majority of y among positions sharing z_i, ties to 0
        let y: Vec<Symbol> = vec![0, 1, 0, 1, 1, 1, 0, 1, 1, 0];
        let x = derandomize(&z, &y, DerandWindow::Symmetric { m: 0 }, &ham).unwrap();
        // z=0 at {0,3,5,6}: y = 0,1,1,0 tie -> 0; z=1 at {1,2,4,7,8,9}: y = 1,0,1,1,1,0 -> 1
        assert_eq!(x, z);
        let y: Vec<Symbol> = vec![1, 1, 1, 1, 1, 1, 0, 1, 1, 1];
        let x = derandomize(&z, &y, DerandWindow::Symmetric { m: 0 }, &ham).unwrap();
        assert_eq!(x, vec![1; 10]);
    }

    #[test]
    fn square_window_wraps() {
        let z: Vec<Symbol> = vec![0, 1, 0, 1, 0, 1, 1, 0, 0, 0, 1, 1];
        let w = DerandWindow::Square { width: 4, height: 3, m: 1 };
        let ham = DistortionMeasure::hamming(2);
        assert_eq!(derandomize(&z, &z, w, &ham).unwrap(), z);
        let w = DerandWindow::Square { width: 5, height: 3, m: 1 };
        assert!(derandomize(&z, &z, w, &ham).is_err());
    }

    fn brute_force_posteriors(z: &[Symbol], p: f64, delta: f64) -> Vec<f64> {
        let n = z.len();
        let mut marg = vec![0.0; n];
        let mut total = 0.0;
        for bits in 0u32..(1 << n) {
            let x: Vec<usize> = (0..n).map(|i| (bits >> i & 1) as usize).collect();
            let mut w = 0.5;
            for i in 0..n {
                if i > 0 {
                    w *= if x[i] == x[i - 1] { 1.0 - p } else { p };
                }
                w *= if x[i] == z[i] as usize { 1.0 - delta } else { delta };
            }
            total += w;
            for i in 0..n {
                if x[i] == 1 {
                    marg[i] += w;
                }
            }
        }
        marg.iter().map(|m| m / total).collect()
    }

    #[test]
    fn forward_backward_matches_enumeration() {
        for seed in 0..6u64 {
            let x = generate(&SourceSpec {
                kind: SourceKind::Bsms(0.2),
                n: 12,
                seed,
            })
            .unwrap();
            let z = bsc(&x, 0.25, seed).unwrap();
            let fb = bayes_posteriors(&z, 0.2, 0.25).unwrap();
            let bf = brute_force_posteriors(&z, 0.2, 0.25);
            for (a, b) in fb.iter().zip(&bf) {
                assert!((a - b).abs() < 1e-12, "{a} vs {b}");
            }
            let map: Vec<Symbol> = bf.iter().map(|&q| (q > 0.5) as Symbol).collect();
            assert_eq!(bayes_fb(&z, 0.2, 0.25).unwrap(), map);
        }
    }

    #[test]
    fn forward_backward_trivial_cases() {
        let z: Vec<Symbol> = vec![0, 1, 1, 0, 1, 0, 0, 0, 1];
        assert_eq!(bayes_fb(&z, 0.1, 0.0).unwrap(), z);
        assert_eq!(bayes_fb(&z, 0.5, 0.2).unwrap(), z);
        assert!(bayes_fb(&z, 0.0, 0.0).is_err());
        assert!(bayes_fb(&[], 0.2, 0.1).unwrap().is_empty());
    }

    fn small_config(alpha: Option<f64>, tol: f64) -> DenoiseConfig {
        DenoiseConfig {
            noise: NoiseModel::bsc(0.1).unwrap(),
            shape: ContextShape::linear(3),
            schedule: SchedulePlan {
                law: CoolingLaw::Logarithmic { t0: 2.0 },
                sweep: crate::anneal::SweepLength::Fixed(1),
            },
            iterations_per_symbol: 5,
            seed: 3,
            slope: SlopeSearch {
                alpha_init: (0.9, 1.5),
                tol,
                max_probes: 8,
                prefix_len: 500,
            },
            alpha,
            window: DerandWindow::Symmetric { m: 2 },
        }
    }

    #[test]
    fn huge_tolerance_stops_after_one_probe() {
        let x = generate(&SourceSpec {
            kind: SourceKind::Bsms(0.2),
            n: 800,
            seed: 1,
        })
        .unwrap();
        let z = bsc(&x, 0.1, 1).unwrap();
        let r = slope_search(&z, &small_config(None, 1e6)).unwrap();
        assert_eq!(r.probes.len(), 1);
        assert_eq!(r.alpha, 0.9);
        assert!(r.converged);
    }

    #[test]
    fn denoising_is_deterministic_and_bounded() {
        let x = generate(&SourceSpec {
            kind: SourceKind::Bsms(0.1),
            n: 800,
            seed: 2,
        })
        .unwrap();
        let z = bsc(&x, 0.1, 2).unwrap();
        let cfg = small_config(None, 0.05);
        let a = denoise(&z, &cfg).unwrap();
        let b = denoise(&z, &cfg).unwrap();
        assert_eq!(a.estimate, b.estimate);
        let r = a.search.unwrap();
        assert!(r.probes.len() <= 8);
        assert_eq!(a.estimate.len(), z.len());
    }

    #[test]
    fn next_alpha_bisects_bracket() {
        let probes = [
            Probe { alpha: 1.0, distortion: 0.6 },
            Probe { alpha: 2.0, distortion: 0.4 },
        ];
        let a = next_alpha(&probes, 0.5);
        assert!((a - 1.5).abs() < 1e-12);
        let probes = [
            Probe { alpha: 1.0, distortion: 0.6 },
            Probe { alpha: 2.0, distortion: 0.55 },
        ];
        assert!(next_alpha(&probes, 0.5) > 2.0);
    }
}
