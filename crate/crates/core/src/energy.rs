//! Single-letter distortion measures and the fixed-slope energy
//! `E(y) = n * (H_k(y) + alpha * d_n(x, y))`.

use crate::context::{ContextShape, CountMatrix};
use crate::{Error, Result, Symbol};

/// Per-symbol loss `d(x, y)` between a source and a reconstruction symbol,
/// stored as a dense `source x reconstruction` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionMeasure {
    source_size: usize,
    recon_size: usize,
    matrix: Vec<f64>,
}

impl DistortionMeasure {
    /// Builds a measure from rows indexed by source symbol.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let source_size = rows.len();
        let recon_size = rows.first().map_or(0, Vec::len);
        if source_size == 0 || recon_size == 0 {
            return Err(Error::domain("distortion matrix must be non-empty"));
        }
        if rows.iter().any(|r| r.len() != recon_size) {
            return Err(Error::domain("distortion matrix rows differ in length"));
        }
        let matrix: Vec<f64> = rows.iter().flatten().copied().collect();
        if matrix.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::domain("distortion entries must be finite and non-negative"));
        }
        Ok(DistortionMeasure {
            source_size,
            recon_size,
            matrix,
        })
    }

    /// Hamming loss on an alphabet of size `m`.
    pub fn hamming(m: usize) -> Self {
        let matrix = (0..m * m)
            .map(|idx| if idx / m == idx % m { 0.0 } else { 1.0 })
            .collect();
        DistortionMeasure {
            source_size: m,
            recon_size: m,
            matrix,
        }
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn recon_size(&self) -> usize {
        self.recon_size
    }

    #[inline]
    pub fn get(&self, x: Symbol, y: Symbol) -> f64 {
        self.matrix[x as usize * self.recon_size + y as usize]
    }

    pub fn max(&self) -> f64 {
        self.matrix.iter().copied().fold(0.0, f64::max)
    }

    /// The same measure with every entry multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::domain("scale must be finite and non-negative"));
        }
        Ok(DistortionMeasure {
            matrix: self.matrix.iter().map(|v| v * c).collect(),
            ..self.clone()
        })
    }

    /// `sum_i d(x_i, y_i)`.
    pub fn total(&self, x: &[Symbol], y: &[Symbol]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        self.check_symbols(x, y)?;
        Ok(x.iter().zip(y).map(|(&a, &b)| self.get(a, b)).sum())
    }

    fn check_symbols(&self, x: &[Symbol], y: &[Symbol]) -> Result<()> {
        if let Some(&s) = x.iter().find(|&&s| s as usize >= self.source_size) {
            return Err(Error::SymbolOutOfRange {
                symbol: s as u32,
                alphabet: self.source_size,
            });
        }
        if let Some(&s) = y.iter().find(|&&s| s as usize >= self.recon_size) {
            return Err(Error::SymbolOutOfRange {
                symbol: s as u32,
                alphabet: self.recon_size,
            });
        }
        Ok(())
    }
}

/// Average per-symbol distortion `d_n(x, y)`.
pub fn distortion(x: &[Symbol], y: &[Symbol], d: &DistortionMeasure) -> Result<f64> {
    if x.is_empty() && y.is_empty() {
        return Ok(0.0);
    }
    Ok(d.total(x, y)? / x.len() as f64)
}

/// Parameters of the energy: slope, context shape and distortion measure.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergySpec {
    /// Slope in bits per unit distortion.
    pub alpha: f64,
    pub shape: ContextShape,
    pub distortion: DistortionMeasure,
}

impl EnergySpec {
    pub fn new(alpha: f64, shape: ContextShape, distortion: DistortionMeasure) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::domain(format!("slope must be finite and >= 0, got {alpha}")));
        }
        Ok(EnergySpec {
            alpha,
            shape,
            distortion,
        })
    }

    /// Hamming distortion over an alphabet of size `m`.
    pub fn hamming(alpha: f64, shape: ContextShape, m: usize) -> Result<Self> {
        Self::new(alpha, shape, DistortionMeasure::hamming(m))
    }

    /// Reconstruction alphabet size.
    pub fn alphabet(&self) -> usize {
        self.distortion.recon_size()
    }

    pub fn counts(&self, y: &[Symbol]) -> Result<CountMatrix> {
        CountMatrix::build(y, self.alphabet(), self.shape.clone())
    }

    /// Energy from an already-built count matrix of `y` and the distortion sum.
    pub fn energy_from(&self, n: usize, cm: &CountMatrix, distortion_sum: f64) -> Result<f64> {
        Ok(n as f64 * cm.conditional_entropy()? + self.alpha * distortion_sum)
    }
}

/// `E(y) = n * (H_k(y) + alpha * d_n(x, y))`, recomputed from scratch.
pub fn energy(y: &[Symbol], x: &[Symbol], spec: &EnergySpec) -> Result<f64> {
    let dsum = spec.distortion.total(x, y)?;
    let cm = spec.counts(y)?;
    spec.energy_from(y.len(), &cm, dsum)
}

/// Energy change from replacing `y[i]` with `b`, given `cm` consistent with `y`.
pub fn delta_energy(
    cm: &CountMatrix,
    y: &[Symbol],
    i: usize,
    b: Symbol,
    x: &[Symbol],
    spec: &EnergySpec,
) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if b == y[i] {
        return Ok(0.0);
    }
    let delta = cm.affected_contexts(y, i, b);
    let dsum = cm.entropy_sum_change(&delta.moves)?;
    let n = y.len() as f64;
    let d = &spec.distortion;
    Ok(n * dsum / cm.total() as f64 + spec.alpha * (d.get(x[i], b) - d.get(x[i], y[i])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Vec<Symbol> {
        s.bytes().map(|b| b - b'0').collect()
    }

    #[test]
    fn hamming_distortion() {
        let d = DistortionMeasure::hamming(2);
        assert_eq!(distortion(&seq("0000"), &seq("0000"), &d).unwrap(), 0.0);
        assert_eq!(distortion(&seq("0000"), &seq("0101"), &d).unwrap(), 0.5);
        assert!(distortion(&seq("000"), &seq("0101"), &d).is_err());
    }

    #[test]
    fn energy_examples() {
        let spec = EnergySpec::hamming(1.0, ContextShape::linear(1), 2).unwrap();
        let x = seq("0011");
        let e = energy(&x, &x, &spec).unwrap();
        assert!((e - 4.0 * 2.0 / 3.0).abs() < 1e-12);

        // constant reconstruction: only the distortion term remains
        let spec = EnergySpec::hamming(2.5, ContextShape::linear(2), 2).unwrap();
        let e = energy(&seq("000000"), &seq("010010"), &spec).unwrap();
        assert!((e - 2.5 * 2.0).abs() < 1e-12);
    }

    #[test]
    fn negative_slope_rejected() {
        assert!(EnergySpec::hamming(-1.0, ContextShape::linear(1), 2).is_err());
    }

    #[test]
    fn delta_on_constant_sequence() {
        let spec = EnergySpec::hamming(1.5, ContextShape::linear(2), 2).unwrap();
        let y = vec![0; 12];
        let x = y.clone();
        let cm = spec.counts(&y).unwrap();
        for i in 0..y.len() {
            let de = delta_energy(&cm, &y, i, 1, &x, &spec).unwrap();
            let mut z = y.clone();
            z[i] = 1;
            let oracle = energy(&z, &x, &spec).unwrap() - energy(&y, &x, &spec).unwrap();
            assert!((de - oracle).abs() < 1e-9, "i={i}: {de} vs {oracle}");
            assert_eq!(delta_energy(&cm, &y, i, 0, &x, &spec).unwrap(), 0.0);
        }
    }

    #[test]
    fn scaled_measure() {
        let d = DistortionMeasure::hamming(3).scaled(2.0).unwrap();
        assert_eq!(d.get(0, 1), 2.0);
        assert_eq!(d.get(2, 2), 0.0);
        assert!(DistortionMeasure::hamming(2).scaled(-1.0).is_err());
    }
}
