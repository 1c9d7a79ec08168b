//! Sliding-block codes.
//!
//! A code of half-window `k_f` maps every window `x_{i-k_f} .. x_{i+k_f}` of the
//! (cyclically extended) source to one reconstruction symbol. It is stored as a
//! vector of `K_f = |X|^(2 k_f + 1)` entries indexed by the packed window, the
//! position's *label*. Changing one entry flips every position carrying that
//! label at once, so the annealer works over code entries instead of positions.

use crate::anneal::{boltzmann_into, delta_bound, sample_index, Schedule};
use crate::context::{CountMatrix, CountMove, Cell};
use crate::energy::{energy, DistortionMeasure, EnergySpec};
use crate::rng::{self, POSITION_STREAM, SYMBOL_STREAM};
use crate::{Error, Result, Symbol};

/// Largest code table accepted, in entries.
pub const MAX_CODE_LEN: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SbCode {
    k_f: usize,
    source_alphabet: usize,
    recon_alphabet: usize,
    f: Vec<Symbol>,
}

/// `K_f = alphabet^(2 k_f + 1)`.
pub fn code_len(k_f: usize, alphabet: usize) -> Result<usize> {
    (alphabet as u64)
        .checked_pow(2 * k_f as u32 + 1)
        .filter(|&len| len as usize <= MAX_CODE_LEN)
        .map(|len| len as usize)
        .ok_or_else(|| Error::TooLarge(format!("{alphabet}^{} code entries", 2 * k_f + 1)))
}

impl SbCode {
    pub fn new(k_f: usize, source_alphabet: usize, recon_alphabet: usize, f: Vec<Symbol>) -> Result<Self> {
        let len = code_len(k_f, source_alphabet)?;
        if f.len() != len {
            return Err(Error::LengthMismatch {
                left: f.len(),
                right: len,
            });
        }
        if let Some(&s) = f.iter().find(|&&s| s as usize >= recon_alphabet) {
            return Err(Error::SymbolOutOfRange {
                symbol: s as u32,
                alphabet: recon_alphabet,
            });
        }
        Ok(SbCode {
            k_f,
            source_alphabet,
            recon_alphabet,
            f,
        })
    }

    /// Builds a code from a function of the window `x_{i-k_f} .. x_{i+k_f}`.
    pub fn from_fn<F: Fn(&[Symbol]) -> Symbol>(
        k_f: usize,
        source_alphabet: usize,
        recon_alphabet: usize,
        map: F,
    ) -> Result<Self> {
        let len = code_len(k_f, source_alphabet)?;
        let mut window = vec![0 as Symbol; 2 * k_f + 1];
        let f = (0..len)
            .map(|idx| {
                let mut rest = idx;
                for w in window.iter_mut() {
                    *w = (rest % source_alphabet) as Symbol;
                    rest /= source_alphabet;
                }
                map(&window)
            })
            .collect();
        Self::new(k_f, source_alphabet, recon_alphabet, f)
    }

    /// `f(b) = b_{k_f}`: every position reproduces its own source symbol.
    pub fn identity(k_f: usize, alphabet: usize) -> Result<Self> {
        Self::from_fn(k_f, alphabet, alphabet, |w| w[k_f])
    }

    pub fn constant(k_f: usize, source_alphabet: usize, recon_alphabet: usize, c: Symbol) -> Result<Self> {
        Self::from_fn(k_f, source_alphabet, recon_alphabet, |_| c)
    }

    pub fn k_f(&self) -> usize {
        self.k_f
    }

    pub fn source_alphabet(&self) -> usize {
        self.source_alphabet
    }

    pub fn recon_alphabet(&self) -> usize {
        self.recon_alphabet
    }

    pub fn entries(&self) -> &[Symbol] {
        &self.f
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn get(&self, label: usize) -> Symbol {
        self.f[label]
    }
}

/// Per-position window labels of a source sequence, with the positions of
/// every label precomputed (labels depend on `x` only).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSequence {
    k_f: usize,
    alphabet: usize,
    labels: Vec<u32>,
    classes: Vec<Vec<usize>>,
}

impl LabelSequence {
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn k_f(&self) -> usize {
        self.k_f
    }

    /// Positions carrying `label`, ascending.
    pub fn positions(&self, label: usize) -> &[usize] {
        &self.classes[label]
    }

    pub fn histogram(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn largest_class(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `y_i = f[label_i]`.
    pub fn apply(&self, code: &SbCode) -> Result<Vec<Symbol>> {
        self.check_code(code)?;
        Ok(self.labels.iter().map(|&l| code.f[l as usize]).collect())
    }

    fn check_code(&self, code: &SbCode) -> Result<()> {
        if code.k_f != self.k_f || code.source_alphabet != self.alphabet {
            return Err(Error::domain(format!(
                "code (k_f = {}, |X| = {}) does not match labels (k_f = {}, |X| = {})",
                code.k_f, code.source_alphabet, self.k_f, self.alphabet
            )));
        }
        Ok(())
    }
}

/// Labels `sum_j x_{i+j} |X|^(k_f + j)` for `j = -k_f ..= k_f`, indices taken cyclically.
pub fn label_sequence(x: &[Symbol], k_f: usize, alphabet: usize) -> Result<LabelSequence> {
    let n = x.len();
    if n == 0 {
        return Err(Error::domain("label sequence of an empty source"));
    }
    if let Some(&s) = x.iter().find(|&&s| s as usize >= alphabet) {
        return Err(Error::SymbolOutOfRange {
            symbol: s as u32,
            alphabet,
        });
    }
    let len = code_len(k_f, alphabet)?;
    let w = 2 * k_f + 1;
    let labels: Vec<u32> = (0..n)
        .map(|i| {
            (0..w).rev().fold(0u64, |acc, t| {
                // digit t holds x_{i - k_f + t}
                let p = (i + t + n * (k_f / n + 1) - k_f) % n;
                acc * alphabet as u64 + x[p] as u64
            }) as u32
        })
        .collect();
    let mut classes = vec![Vec::new(); len];
    for (i, &l) in labels.iter().enumerate() {
        classes[l as usize].push(i);
    }
    Ok(LabelSequence {
        k_f,
        alphabet,
        labels,
        classes,
    })
}

/// Applies `code` to `x` (cyclic windows).
pub fn apply_sb(x: &[Symbol], code: &SbCode) -> Result<Vec<Symbol>> {
    label_sequence(x, code.k_f, code.source_alphabet)?.apply(code)
}

/// Count moves for setting `f[label] = theta`, given `y` = code applied to the source.
fn sb_moves(cm: &CountMatrix, y: &[Symbol], labels: &LabelSequence, label: usize, theta: Symbol) -> Vec<CountMove> {
    let flipped = labels.positions(label);
    if flipped.is_empty() || flipped.iter().all(|&p| y[p] == theta) {
        return Vec::new();
    }
    let n = y.len();
    let shape = cm.shape();
    let a = cm.alphabet_size();
    let mut affected = Vec::with_capacity(flipped.len() * (shape.order() + 1));
    for &p in flipped {
        shape.dependents(p, n, &mut affected);
    }
    affected.sort_unstable();
    affected.dedup();
    let patched = |p: usize| if labels.labels[p] as usize == label { theta } else { y[p] };
    affected
        .into_iter()
        .map(|j| CountMove {
            from: Cell {
                context: shape.key(y, j, a),
                symbol: y[j],
            },
            to: Cell {
                context: shape.key_with(j, n, a, patched),
                symbol: patched(j),
            },
        })
        .filter(|m| m.from != m.to)
        .collect()
}

/// Sets `f[label] = theta`, flipping every position with that label in `y`
/// and moving the affected counts of `cm`. Returns the flipped positions
/// (empty when nothing changes).
pub fn sb_flip_update(
    cm: &mut CountMatrix,
    y: &mut [Symbol],
    labels: &LabelSequence,
    code: &mut SbCode,
    label: usize,
    theta: Symbol,
) -> Result<Vec<usize>> {
    labels.check_code(code)?;
    if theta as usize >= code.recon_alphabet {
        return Err(Error::SymbolOutOfRange {
            symbol: theta as u32,
            alphabet: code.recon_alphabet,
        });
    }
    if y.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: labels.len(),
        });
    }
    if code.f[label] == theta {
        return Ok(Vec::new());
    }
    let moves = sb_moves(cm, y, labels, label, theta);
    cm.apply_moves(&moves)?;
    let flipped = labels.positions(label).to_vec();
    for &p in &flipped {
        y[p] = theta;
    }
    code.f[label] = theta;
    Ok(flipped)
}

/// `delta_bound` scaled by the largest label class: one code entry moves up to
/// that many positions.
pub fn sb_delta_bound(labels: &LabelSequence, k: usize, alpha: f64, recon_alphabet: usize, d: &DistortionMeasure) -> f64 {
    labels.largest_class() as f64 * delta_bound(labels.len(), k, alpha, recon_alphabet, d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SbAnnealConfig {
    pub k_f: usize,
    /// Energy of the reconstruction; use a cyclic context shape.
    pub energy: EnergySpec,
    pub schedule: Schedule,
    pub iterations: u64,
    pub seed: u64,
    /// Starting code; the identity map when `None`.
    pub init: Option<SbCode>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SbOutcome {
    pub code: SbCode,
    pub reconstruction: Vec<Symbol>,
    pub hk_bits: f64,
    pub distortion: f64,
    pub energy: f64,
}

fn outcome(code: SbCode, y: Vec<Symbol>, cm: &CountMatrix, x: &[Symbol], spec: &EnergySpec) -> Result<SbOutcome> {
    let n = y.len() as f64;
    let hk_bits = cm.conditional_entropy()?;
    let distortion = spec.distortion.total(x, &y)? / n;
    Ok(SbOutcome {
        code,
        reconstruction: y,
        hk_bits,
        distortion,
        energy: n * (hk_bits + spec.alpha * distortion),
    })
}

/// Gibbs sampling over code entries: each iteration picks a label uniformly
/// and redraws its entry from the conditional Boltzmann pmf.
pub fn sb_anneal(x: &[Symbol], config: &SbAnnealConfig) -> Result<SbOutcome> {
    let spec = &config.energy;
    let src = spec.distortion.source_size();
    let recon = spec.alphabet();
    let labels = label_sequence(x, config.k_f, src)?;
    let mut code = match &config.init {
        Some(c) => c.clone(),
        None => {
            if recon < src {
                return Err(Error::domain(
                    "identity initialization needs a reconstruction alphabet at least as large as the source",
                ));
            }
            SbCode::from_fn(config.k_f, src, recon, |w| w[config.k_f])?
        }
    };
    labels.check_code(&code)?;
    if code.recon_alphabet != recon {
        return Err(Error::domain("code and distortion disagree on the reconstruction alphabet"));
    }
    let mut y = labels.apply(&code)?;
    let mut cm = spec.counts(&y)?;

    // sum over each label class of d(x_p, theta)
    let mut class_cost = vec![0.0; code.len() * recon];
    for (p, &l) in labels.labels.iter().enumerate() {
        for theta in 0..recon {
            class_cost[l as usize * recon + theta] += spec.distortion.get(x[p], theta as Symbol);
        }
    }

    let scale = x.len() as f64 / cm.total() as f64;
    let mut positions = rng::stream(config.seed, POSITION_STREAM);
    let mut symbols = rng::stream(config.seed, SYMBOL_STREAM);
    let mut delta_e = Vec::with_capacity(recon);
    let mut candidates: Vec<Vec<CountMove>> = Vec::with_capacity(recon);
    let mut pmf = Vec::with_capacity(recon);
    for t in 1..=config.iterations {
        let beta = config.schedule.beta(t);
        let label = rng::index(&mut positions, code.len());
        let current = code.f[label] as usize;
        delta_e.clear();
        candidates.clear();
        for theta in 0..recon {
            let moves = if theta == current {
                Vec::new()
            } else {
                sb_moves(&cm, &y, &labels, label, theta as Symbol)
            };
            let dh = if moves.is_empty() { 0.0 } else { scale * cm.entropy_sum_change(&moves)? };
            let dd = class_cost[label * recon + theta] - class_cost[label * recon + current];
            delta_e.push(dh + spec.alpha * dd);
            candidates.push(moves);
        }
        boltzmann_into(&delta_e, beta, &mut pmf);
        let theta = sample_index(&pmf, &mut symbols);
        if theta != current {
            cm.apply_moves(&candidates[theta])?;
            for &p in labels.positions(label) {
                y[p] = theta as Symbol;
            }
            code.f[label] = theta as Symbol;
        }
    }
    outcome(code, y, &cm, x, spec)
}

/// Minimum-energy code found by enumerating every code table
/// (`K_f log2 |Y| <= 30`); ties go to the lexicographically smallest table.
pub fn sb_exhaustive_search(x: &[Symbol], k_f: usize, spec: &EnergySpec) -> Result<SbOutcome> {
    let src = spec.distortion.source_size();
    let recon = spec.alphabet();
    let len = code_len(k_f, src)?;
    let bits = len as f64 * (recon as f64).log2();
    if bits > 30.0 {
        return Err(Error::TooLarge(format!("{recon}^{len} codes ({bits:.1} bits > 30)")));
    }
    let labels = label_sequence(x, k_f, src)?;
    let mut f = vec![0 as Symbol; len];
    let mut best: Option<(Vec<Symbol>, f64)> = None;
    loop {
        let code = SbCode::new(k_f, src, recon, f.clone())?;
        let y = labels.apply(&code)?;
        let e = energy(&y, x, spec)?;
        if best.as_ref().is_none_or(|(_, b)| e < b - 1e-9) {
            best = Some((f.clone(), e));
        }
        let mut pos = len;
        loop {
            if pos == 0 {
                let (f, _) = best.expect("at least one code evaluated");
                let code = SbCode::new(k_f, src, recon, f)?;
                let y = labels.apply(&code)?;
                let cm = spec.counts(&y)?;
                return outcome(code, y, &cm, x, spec);
            }
            pos -= 1;
            if (f[pos] as usize) + 1 < recon {
                f[pos] += 1;
                break;
            }
            f[pos] = 0;
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
    fn labels_of_constant_source() {
        let l = label_sequence(&[0; 9], 2, 2).unwrap();
        assert!(l.labels().iter().all(|&v| v == 0));
        assert_eq!(l.histogram()[0], 9);
    }

    #[test]
    fn labels_of_alternating_source() {
        let l = label_sequence(&seq("010101"), 1, 2).unwrap();
        assert_eq!(l.labels(), &[5, 2, 5, 2, 5, 2]);
    }

    #[test]
    fn identity_and_constant_codes() {
        let x = seq("0110100111");
        let id = SbCode::identity(1, 2).unwrap();
        assert_eq!(apply_sb(&x, &id).unwrap(), x);
        let c = SbCode::constant(2, 2, 2, 1).unwrap();
        assert_eq!(apply_sb(&x, &c).unwrap(), vec![1; 10]);
    }

    #[test]
    fn majority_code_by_hand() {
        // cyclic windows of 00110: (0,0,0) (0,0,1) (0,1,1) (1,1,0) (1,0,0)
        let maj = SbCode::from_fn(1, 2, 2, |w| (w.iter().filter(|&&s| s == 1).count() >= 2) as Symbol).unwrap();
        assert_eq!(apply_sb(&seq("00110"), &maj).unwrap(), seq("00110"));
        assert_eq!(apply_sb(&seq("01000"), &maj).unwrap(), seq("00000"));
        assert_eq!(apply_sb(&seq("10110"), &maj).unwrap(), seq("01111"));
    }

    #[test]
    fn code_validation() {
        assert!(SbCode::new(1, 2, 2, vec![0; 7]).is_err());
        assert!(SbCode::new(1, 2, 2, vec![2; 8]).is_err());
        assert!(code_len(20, 2).is_err());
    }

    #[test]
    fn flip_update_no_ops() {
        let x = seq("000000");
        let labels = label_sequence(&x, 1, 2).unwrap();
        let mut code = SbCode::identity(1, 2).unwrap();
        let mut y = labels.apply(&code).unwrap();
        let mut cm = CountMatrix::build(&y, 2, ContextShape::cyclic(2)).unwrap();
        let before = cm.clone();
        // same value
        assert!(sb_flip_update(&mut cm, &mut y, &labels, &mut code, 0, 0).unwrap().is_empty());
        // label 7 = window 111 never occurs
        assert!(sb_flip_update(&mut cm, &mut y, &labels, &mut code, 7, 0).unwrap().is_empty());
        assert_eq!(cm, before);
        assert_eq!(code.get(7), 0);
    }

    #[test]
    fn flip_update_matches_rebuild() {
        let x = seq("0110100111010001");
        let labels = label_sequence(&x, 1, 2).unwrap();
        let mut code = SbCode::identity(1, 2).unwrap();
        let mut y = labels.apply(&code).unwrap();
        let shape = ContextShape::cyclic(3);
        let mut cm = CountMatrix::build(&y, 2, shape.clone()).unwrap();
        for (label, theta) in [(2, 0), (5, 1), (3, 0), (2, 1), (6, 0)] {
            let flipped = sb_flip_update(&mut cm, &mut y, &labels, &mut code, label, theta).unwrap();
            assert!(flipped.iter().all(|&p| labels.labels()[p] as usize == label));
            assert_eq!(y, labels.apply(&code).unwrap());
            assert_eq!(cm, CountMatrix::build(&y, 2, shape.clone()).unwrap());
        }
    }

    #[test]
    fn zero_iterations_keeps_identity() {
        let x = seq("01101001110100011010");
        let cfg = SbAnnealConfig {
            k_f: 1,
            energy: EnergySpec::hamming(1.0, ContextShape::cyclic(2), 2).unwrap(),
            schedule: Schedule::geometric(1.0, 0.8, 8).unwrap(),
            iterations: 0,
            seed: 3,
            init: None,
        };
        let out = sb_anneal(&x, &cfg).unwrap();
        assert_eq!(out.code, SbCode::identity(1, 2).unwrap());
        assert_eq!(out.reconstruction, x);
        assert_eq!(out.distortion, 0.0);
    }
}
