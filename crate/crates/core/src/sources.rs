//! Synthetic binary sources, the binary symmetric channel, and analytic
//! rate-distortion reference curves.

use rand::Rng;

use crate::rng::{self, CHANNEL_STREAM, SOURCE_STREAM};
use crate::{Error, Result, Symbol};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SourceKind {
    /// i.i.d. with `P(1) = p`.
    Bernoulli(f64),
    /// Binary symmetric Markov source with transition probability `p`,
    /// started from its (uniform) stationary distribution.
    Bsms(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceSpec {
    pub kind: SourceKind,
    pub n: usize,
    pub seed: u64,
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("{what} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Draws `spec.n` symbols; identical seeds give identical sequences.
pub fn generate(spec: &SourceSpec) -> Result<Vec<Symbol>> {
    let mut rng = rng::stream(spec.seed, SOURCE_STREAM);
    match spec.kind {
        SourceKind::Bernoulli(p) => {
            check_probability(p, "Bernoulli parameter")?;
            Ok((0..spec.n).map(|_| (rng.gen::<f64>() < p) as Symbol).collect())
        }
        SourceKind::Bsms(p) => {
            check_probability(p, "transition probability")?;
            let mut out = Vec::with_capacity(spec.n);
            let mut state = (rng.gen::<f64>() < 0.5) as Symbol;
            for i in 0..spec.n {
                if i > 0 && rng.gen::<f64>() < p {
                    state ^= 1;
                }
                out.push(state);
            }
            Ok(out)
        }
    }
}

/// Flips each bit of `x` independently with probability `delta`.
pub fn bsc(x: &[Symbol], delta: f64, seed: u64) -> Result<Vec<Symbol>> {
    check_probability(delta, "crossover probability")?;
    let mut rng = rng::stream(seed, CHANNEL_STREAM);
    Ok(x.iter().map(|&s| s ^ (rng.gen::<f64>() < delta) as Symbol).collect())
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// `R(D) = h(p) - h(D)` of a Bernoulli(p) source under Hamming loss; zero
/// once `D >= min(p, 1 - p)`.
pub fn rd_bernoulli(p: f64, d: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p must lie in (0, 1), got {p}")));
    }
    if !(0.0..=1.0).contains(&d) {
        return Err(Error::domain(format!("distortion must lie in [0, 1], got {d}")));
    }
    if d >= p.min(1.0 - p) {
        return Ok(0.0);
    }
    Ok(binary_entropy(p) - binary_entropy(d))
}

/// Shannon lower bound `h(p) - h(D)` for a BSMS(p), clamped at zero.
pub fn slb_bsms(p: f64, d: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p must lie in (0, 1), got {p}")));
    }
    if !(0.0..=0.5).contains(&d) {
        return Err(Error::domain(format!("distortion must lie in [0, 1/2], got {d}")));
    }
    Ok((binary_entropy(p) - binary_entropy(d)).max(0.0))
}

/// Distortion below which the Shannon lower bound of a BSMS(p) is tight:
/// `(1 - sqrt(1 - (p/q)^2)) / 2` with `q = 1 - p`.
pub fn critical_distortion(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::domain(format!("p must lie in (0, 1/2], got {p}")));
    }
    let r = p / (1.0 - p);
    Ok(0.5 * (1.0 - (1.0 - r * r).sqrt()))
}

/// `min over D of [R(D) + alpha * D]` for a Bernoulli(p) source, on a grid of
/// `steps + 1` distortions in `[0, min(p, 1 - p)]`.
pub fn bernoulli_lagrangian(p: f64, alpha: f64, steps: usize) -> Result<f64> {
    let dmax = p.min(1.0 - p);
    (0..=steps)
        .map(|i| {
            let d = dmax * i as f64 / steps as f64;
            rd_bernoulli(p, d).map(|r| r + alpha * d)
        })
        .try_fold(f64::INFINITY, |acc, v| v.map(|v| acc.min(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_sources() {
        let x = generate(&SourceSpec {
            kind: SourceKind::Bernoulli(0.0),
            n: 100,
            seed: 1,
        })
        .unwrap();
        assert!(x.iter().all(|&s| s == 0));
        let x = generate(&SourceSpec {
            kind: SourceKind::Bsms(0.0),
            n: 100,
            seed: 1,
        })
        .unwrap();
        assert!(x.iter().all(|&s| s == x[0]));
        assert!(generate(&SourceSpec {
            kind: SourceKind::Bernoulli(1.5),
            n: 1,
            seed: 1
        })
        .is_err());
    }

    #[test]
    fn channel_extremes() {
        let x: Vec<Symbol> = (0..50).map(|i| (i % 3 == 0) as Symbol).collect();
        assert_eq!(bsc(&x, 0.0, 9).unwrap(), x);
        let flipped: Vec<Symbol> = x.iter().map(|&s| 1 - s).collect();
        assert_eq!(bsc(&x, 1.0, 9).unwrap(), flipped);
        assert!(bsc(&x, -0.1, 9).is_err());
    }

    #[test]
    fn analytic_values() {
        assert!((rd_bernoulli(0.4, 0.0).unwrap() - 0.970951).abs() < 1e-6);
        assert_eq!(rd_bernoulli(0.4, 0.4).unwrap(), 0.0);
        assert_eq!(rd_bernoulli(0.3, 0.3).unwrap(), 0.0);
        assert!((critical_distortion(0.25).unwrap() - 0.0286).abs() < 1e-4);
        assert!(critical_distortion(0.6).is_err());
        assert!(rd_bernoulli(0.0, 0.1).is_err());
        assert!(slb_bsms(0.2, 0.6).is_err());
    }

    #[test]
    fn lagrangian_at_known_slope() {
        // optimum where h'(D) = alpha: D* = 1 / (1 + 2^alpha)
        let alpha = 4.0;
        let dstar = 1.0 / (1.0 + 2f64.powf(alpha));
        let exact = binary_entropy(0.4) - binary_entropy(dstar) + alpha * dstar;
        let grid = bernoulli_lagrangian(0.4, alpha, 100_000).unwrap();
        assert!((grid - exact).abs() < 1e-6);
    }
}
