//! Empirical context counts and the conditional empirical entropy `H_k`.
//!
//! A [`CountMatrix`] holds, for every context seen in a sequence, the number
//! of times each symbol followed it. `H_k` is the count-weighted average of
//! the per-context entropies, normalized by the number of counted positions.
//! Single-symbol changes touch at most `2(k + 1)` cells, so the matrix and
//! `H_k` can be updated in `O(k)` without rescanning the sequence.

use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::{Error, Result, Symbol};

/// How positions near the start of a 1-D sequence are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Only positions with a full context are counted (`n - k` of them).
    Linear,
    /// The sequence is read cyclically (`x_i = x_{i+n}`); all `n` positions count.
    Cyclic,
}

/// Default 2-D causal neighbourhood as `(dy, dx)` offsets: W, WW, NW, N, NE, NN.
pub const DEFAULT_RASTER_OFFSETS: [(isize, isize); 6] =
    [(0, -1), (0, -2), (-1, -1), (-1, 0), (-1, 1), (-2, 0)];

/// Which earlier symbols form the context of a position.
///
/// Context digit `t` is the `t`-th neighbour: `y_{j-1-t}` for [`ContextShape::Previous`],
/// `offsets[t]` for [`ContextShape::Raster`]. Keys pack digits base `|Y|`,
/// digit 0 least significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ContextShape {
    /// The `k` immediately preceding symbols of a 1-D sequence.
    Previous { k: usize, boundary: Boundary },
    /// A causal neighbourhood on a row-major raster. Neighbours falling
    /// outside the image read as symbol 0, so every pixel is counted.
    Raster {
        width: usize,
        height: usize,
        offsets: Vec<(isize, isize)>,
    },
}

impl ContextShape {
    pub fn linear(k: usize) -> Self {
        ContextShape::Previous {
            k,
            boundary: Boundary::Linear,
        }
    }

    pub fn cyclic(k: usize) -> Self {
        ContextShape::Previous {
            k,
            boundary: Boundary::Cyclic,
        }
    }

    /// A raster shape; every offset must precede the current pixel in raster order.
    pub fn raster(width: usize, height: usize, offsets: Vec<(isize, isize)>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::domain("raster dimensions must be positive"));
        }
        for (idx, &(dy, dx)) in offsets.iter().enumerate() {
            if !(dy < 0 || (dy == 0 && dx < 0)) {
                return Err(Error::domain(format!(
                    "offset ({dy}, {dx}) is not causal in raster order"
                )));
            }
            if offsets[..idx].contains(&(dy, dx)) {
                return Err(Error::domain(format!("duplicate offset ({dy}, {dx})")));
            }
        }
        Ok(ContextShape::Raster {
            width,
            height,
            offsets,
        })
    }

    pub fn raster_default(width: usize, height: usize) -> Result<Self> {
        Self::raster(width, height, DEFAULT_RASTER_OFFSETS.to_vec())
    }

    /// Number of context symbols (`k`).
    pub fn order(&self) -> usize {
        match self {
            ContextShape::Previous { k, .. } => *k,
            ContextShape::Raster { offsets, .. } => offsets.len(),
        }
    }

    /// Number of counted positions in a sequence of length `n`.
    pub fn total(&self, n: usize) -> usize {
        match self {
            ContextShape::Previous {
                k,
                boundary: Boundary::Linear,
            } => n.saturating_sub(*k),
            _ => n,
        }
    }

    pub fn validate(&self, n: usize, alphabet: usize) -> Result<()> {
        if !(1..=256).contains(&alphabet) {
            return Err(Error::domain(format!("alphabet size {alphabet} not in 1..=256")));
        }
        if (alphabet as u64).checked_pow(self.order() as u32).is_none() {
            return Err(Error::domain("context keys do not fit in 64 bits"));
        }
        match self {
            ContextShape::Previous { k, .. } => {
                if n <= *k {
                    return Err(Error::SequenceTooShort { len: n, order: *k });
                }
            }
            ContextShape::Raster { width, height, .. } => {
                if width * height != n {
                    return Err(Error::LengthMismatch {
                        left: n,
                        right: width * height,
                    });
                }
            }
        }
        Ok(())
    }

    /// Whether position `j` contributes a count.
    #[inline]
    pub fn is_counted(&self, j: usize) -> bool {
        match self {
            ContextShape::Previous {
                k,
                boundary: Boundary::Linear,
            } => j >= *k,
            _ => true,
        }
    }

    /// Context key of position `j`, reading symbols through `sym`.
    #[inline]
    pub fn key_with<F: Fn(usize) -> Symbol>(&self, j: usize, n: usize, alphabet: usize, sym: F) -> u64 {
        let a = alphabet as u64;
        let mut key = 0u64;
        let mut weight = 1u64;
        match self {
            ContextShape::Previous { k, boundary } => {
                for t in 0..*k {
                    let p = match boundary {
                        Boundary::Linear => j - 1 - t,
                        Boundary::Cyclic => (j + n - 1 - t) % n,
                    };
                    key += sym(p) as u64 * weight;
                    weight = weight.wrapping_mul(a);
                }
            }
            ContextShape::Raster {
                width,
                height,
                offsets,
            } => {
                let (r, c) = ((j / width) as isize, (j % width) as isize);
                for &(dy, dx) in offsets {
                    let (rr, cc) = (r + dy, c + dx);
                    if rr >= 0 && cc >= 0 && (rr as usize) < *height && (cc as usize) < *width {
                        key += sym(rr as usize * width + cc as usize) as u64 * weight;
                    }
                    weight = weight.wrapping_mul(a);
                }
            }
        }
        key
    }

    #[inline]
    pub fn key(&self, y: &[Symbol], j: usize, alphabet: usize) -> u64 {
        self.key_with(j, y.len(), alphabet, |p| y[p])
    }

    /// Counted positions whose cell depends on `y_i` (the position itself and
    /// every position that has `i` in its context). Appends to `out`.
    pub fn dependents(&self, i: usize, n: usize, out: &mut Vec<usize>) {
        match self {
            ContextShape::Previous { k, boundary } => match boundary {
                Boundary::Linear => {
                    let hi = (i + k).min(n - 1);
                    out.extend(i.max(*k)..=hi);
                }
                Boundary::Cyclic => out.extend((0..=*k).map(|t| (i + t) % n)),
            },
            ContextShape::Raster {
                width,
                height,
                offsets,
            } => {
                out.push(i);
                let (r, c) = ((i / width) as isize, (i % width) as isize);
                for &(dy, dx) in offsets {
                    let (rr, cc) = (r - dy, c - dx);
                    if rr >= 0 && cc >= 0 && (rr as usize) < *height && (cc as usize) < *width {
                        out.push(rr as usize * width + cc as usize);
                    }
                }
            }
        }
    }

    /// Count moves induced by replacing `y_i` with `b`.
    pub fn affected_contexts(&self, y: &[Symbol], alphabet: usize, i: usize, b: Symbol) -> ContextDelta {
        let mut moves = Vec::new();
        if y[i] != b {
            let n = y.len();
            let mut deps = Vec::with_capacity(self.order() + 1);
            self.dependents(i, n, &mut deps);
            let patched = |p: usize| if p == i { b } else { y[p] };
            for j in deps {
                moves.push(CountMove {
                    from: Cell {
                        context: self.key(y, j, alphabet),
                        symbol: y[j],
                    },
                    to: Cell {
                        context: self.key_with(j, n, alphabet, patched),
                        symbol: patched(j),
                    },
                });
            }
        }
        ContextDelta { moves }
    }
}

/// One cell of the count matrix: a context and the symbol that followed it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub context: u64,
    pub symbol: Symbol,
}

/// A single count moving from one cell to another.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountMove {
    pub from: Cell,
    pub to: Cell,
}

impl CountMove {
    pub fn inverse(self) -> Self {
        CountMove {
            from: self.to,
            to: self.from,
        }
    }
}

/// The count moves for one candidate change (one per dependent position).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContextDelta {
    pub moves: Vec<CountMove>,
}

impl ContextDelta {
    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Number of cell decrements plus increments.
    pub fn cell_changes(&self) -> usize {
        2 * self.moves.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Column {
    counts: Box<[u32]>,
    sum: u32,
}

/// Context/symbol counts of a sequence.
#[derive(Clone, Debug)]
pub struct CountMatrix {
    shape: ContextShape,
    alphabet: usize,
    total: u64,
    columns: FxHashMap<u64, Column>,
    // x * log2(x) for x in 0..=total
    xlogx: Arc<[f64]>,
}

impl PartialEq for CountMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape
            && self.alphabet == other.alphabet
            && self.total == other.total
            && self.columns == other.columns
    }
}

fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

impl CountMatrix {
    /// Counts every counted position of `y` under `shape`.
    pub fn build(y: &[Symbol], alphabet: usize, shape: ContextShape) -> Result<Self> {
        shape.validate(y.len(), alphabet)?;
        if let Some(&s) = y.iter().find(|&&s| s as usize >= alphabet) {
            return Err(Error::SymbolOutOfRange {
                symbol: s as u32,
                alphabet,
            });
        }
        let total = shape.total(y.len());
        let xlogx: Arc<[f64]> = (0..=total).map(|c| xlog2x(c as f64)).collect();
        let mut cm = CountMatrix {
            shape,
            alphabet,
            total: total as u64,
            columns: FxHashMap::default(),
            xlogx,
        };
        for j in 0..y.len() {
            if cm.shape.is_counted(j) {
                let key = cm.shape.key(y, j, alphabet);
                cm.increment(Cell {
                    context: key,
                    symbol: y[j],
                });
            }
        }
        Ok(cm)
    }

    pub fn shape(&self) -> &ContextShape {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, context: u64, symbol: Symbol) -> u32 {
        self.columns
            .get(&context)
            .map_or(0, |c| c.counts[symbol as usize])
    }

    /// Counts following `context`, indexed by symbol.
    pub fn column(&self, context: u64) -> Option<&[u32]> {
        self.columns.get(&context).map(|c| &*c.counts)
    }

    /// Number of contexts with at least one count.
    pub fn num_contexts(&self) -> usize {
        self.columns.len()
    }

    /// Non-zero cells in ascending order.
    pub fn cells(&self) -> Vec<(Cell, u32)> {
        let mut out: Vec<(Cell, u32)> = self
            .columns
            .iter()
            .flat_map(|(&context, col)| {
                col.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(move |(s, &c)| {
                    (
                        Cell {
                            context,
                            symbol: s as Symbol,
                        },
                        c,
                    )
                })
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Iterates over the per-context count columns.
    pub fn columns(&self) -> impl Iterator<Item = (u64, &[u32])> {
        self.columns.iter().map(|(&k, c)| (k, &*c.counts))
    }

    #[inline]
    fn xlogx(&self, c: i64) -> f64 {
        self.xlogx
            .get(c as usize)
            .copied()
            .unwrap_or_else(|| xlog2x(c as f64))
    }

    /// `(1^T c) * H(c)` in bits for one column of counts.
    #[inline]
    fn weighted_entropy(&self, counts: impl Iterator<Item = i64>) -> f64 {
        let mut sum = 0i64;
        let mut acc = 0.0;
        for c in counts {
            sum += c;
            acc += self.xlogx(c);
        }
        self.xlogx(sum) - acc
    }

    /// `total * H_k`, evaluated from the integer counts.
    pub fn entropy_sum(&self) -> f64 {
        self.columns
            .values()
            .map(|col| self.weighted_entropy(col.counts.iter().map(|&c| c as i64)))
            .sum()
    }

    /// Conditional empirical entropy `H_k` in bits per counted symbol.
    pub fn conditional_entropy(&self) -> Result<f64> {
        if self.total == 0 {
            return Err(Error::domain("conditional entropy of an empty count matrix"));
        }
        Ok(self.entropy_sum() / self.total as f64)
    }

    /// Change of [`entropy_sum`](Self::entropy_sum) if `moves` were applied.
    /// Does not modify the matrix.
    pub fn entropy_sum_change(&self, moves: &[CountMove]) -> Result<f64> {
        if moves.is_empty() {
            return Ok(0.0);
        }
        let a = self.alphabet;
        let mut contexts: Vec<u64> = Vec::with_capacity(2 * moves.len());
        for m in moves {
            contexts.push(m.from.context);
            contexts.push(m.to.context);
        }
        contexts.sort_unstable();
        contexts.dedup();

        let mut scratch = vec![0i64; contexts.len() * a];
        for (slot, ctx) in contexts.iter().enumerate() {
            if let Some(col) = self.columns.get(ctx) {
                for (dst, &c) in scratch[slot * a..(slot + 1) * a].iter_mut().zip(col.counts.iter()) {
                    *dst = c as i64;
                }
            }
        }
        let column_entropy = |scratch: &[i64], slot: usize| {
            self.weighted_entropy(scratch[slot * a..(slot + 1) * a].iter().copied())
        };
        let before: f64 = (0..contexts.len()).map(|s| column_entropy(&scratch, s)).sum();

        let slot_of = |ctx: u64| contexts.binary_search(&ctx).expect("context collected above");
        for m in moves {
            scratch[slot_of(m.from.context) * a + m.from.symbol as usize] -= 1;
            scratch[slot_of(m.to.context) * a + m.to.symbol as usize] += 1;
        }
        if let Some(pos) = scratch.iter().position(|&c| c < 0) {
            return Err(Error::Inconsistent(format!(
                "cell (context {}, symbol {}) would become negative",
                contexts[pos / a],
                pos % a
            )));
        }
        let after: f64 = (0..contexts.len()).map(|s| column_entropy(&scratch, s)).sum();
        Ok(after - before)
    }

    fn increment(&mut self, cell: Cell) {
        let a = self.alphabet;
        let col = self.columns.entry(cell.context).or_insert_with(|| Column {
            counts: vec![0; a].into_boxed_slice(),
            sum: 0,
        });
        col.counts[cell.symbol as usize] += 1;
        col.sum += 1;
    }

    fn decrement(&mut self, cell: Cell) -> Result<()> {
        let col = self
            .columns
            .get_mut(&cell.context)
            .filter(|c| c.counts[cell.symbol as usize] > 0)
            .ok_or_else(|| {
                Error::Inconsistent(format!(
                    "cell (context {}, symbol {}) is already zero",
                    cell.context, cell.symbol
                ))
            })?;
        col.counts[cell.symbol as usize] -= 1;
        col.sum -= 1;
        if col.sum == 0 {
            self.columns.remove(&cell.context);
        }
        Ok(())
    }

    /// Applies `moves`. On error the matrix is left unchanged.
    pub fn apply_moves(&mut self, moves: &[CountMove]) -> Result<()> {
        for (done, m) in moves.iter().enumerate() {
            if let Err(e) = self.decrement(m.from) {
                for undo in &moves[..done] {
                    self.increment(undo.from);
                }
                return Err(e);
            }
        }
        for m in moves {
            self.increment(m.to);
        }
        Ok(())
    }

    /// Replaces `y[i]` with `b`, updating the counts in place, and returns
    /// `H_k(after) - H_k(before)`.
    pub fn apply_flip(&mut self, y: &mut [Symbol], i: usize, b: Symbol) -> Result<f64> {
        if b as usize >= self.alphabet {
            return Err(Error::SymbolOutOfRange {
                symbol: b as u32,
                alphabet: self.alphabet,
            });
        }
        let delta = self.shape.affected_contexts(y, self.alphabet, i, b);
        if delta.is_empty() {
            return Ok(0.0);
        }
        let change = self.entropy_sum_change(&delta.moves)?;
        self.apply_moves(&delta.moves)?;
        y[i] = b;
        Ok(change / self.total as f64)
    }

    /// Count moves for replacing `y[i]` with `b` under this matrix's shape.
    pub fn affected_contexts(&self, y: &[Symbol], i: usize, b: Symbol) -> ContextDelta {
        self.shape.affected_contexts(y, self.alphabet, i, b)
    }
}

/// Builds the count matrix of `y` for `shape`; see [`CountMatrix::build`].
pub fn build_counts(y: &[Symbol], alphabet: usize, shape: ContextShape) -> Result<CountMatrix> {
    CountMatrix::build(y, alphabet, shape)
}

/// Entropy in bits of the pmf proportional to `v`; zero for the all-zero vector.
pub fn entropy_functional(v: &[f64]) -> Result<f64> {
    if let Some(bad) = v.iter().find(|&&c| !(c >= 0.0)) {
        return Err(Error::domain(format!("negative or NaN component {bad}")));
    }
    let total: f64 = v.iter().sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(v
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / total;
            -p * p.log2()
        })
        .sum())
}

/// `H_k` of a count matrix; see [`CountMatrix::conditional_entropy`].
pub fn conditional_entropy(cm: &CountMatrix) -> Result<f64> {
    cm.conditional_entropy()
}

/// Packs symbols into a context key, first symbol least significant.
pub fn pack(symbols: &[Symbol], alphabet: usize) -> u64 {
    symbols
        .iter()
        .rev()
        .fold(0u64, |acc, &s| acc * alphabet as u64 + s as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Vec<Symbol> {
        s.bytes().map(|b| b - b'0').collect()
    }

    fn cells(cm: &CountMatrix) -> Vec<((u64, Symbol), u32)> {
        cm.cells()
            .into_iter()
            .map(|(c, n)| ((c.context, c.symbol), n))
            .collect()
    }

    #[test]
    fn build_constant() {
        let cm = build_counts(&seq("0000"), 2, ContextShape::linear(1)).unwrap();
        assert_eq!(cells(&cm), vec![((0, 0), 3)]);
        assert_eq!(cm.total(), 3);
    }

    #[test]
    fn build_alternating() {
        let cm = build_counts(&seq("0101"), 2, ContextShape::linear(1)).unwrap();
        assert_eq!(cells(&cm), vec![((0, 1), 2), ((1, 0), 1)]);
        assert_eq!(cm.total(), 3);
    }

    #[test]
    fn build_step() {
        let cm = build_counts(&seq("0011"), 2, ContextShape::linear(1)).unwrap();
        assert_eq!(cells(&cm), vec![((0, 0), 1), ((0, 1), 1), ((1, 1), 1)]);
    }

    #[test]
    fn build_rejects_short_sequences() {
        let err = build_counts(&seq("01"), 2, ContextShape::linear(2)).unwrap_err();
        assert!(matches!(err, Error::SequenceTooShort { len: 2, order: 2 }));
        assert!(build_counts(&seq("012"), 2, ContextShape::linear(1)).is_err());
    }

    #[test]
    fn cyclic_counts_every_position() {
        let cm = build_counts(&seq("0011"), 2, ContextShape::cyclic(1)).unwrap();
        // positions 0..4 with predecessors 1,0,0,1
        assert_eq!(cells(&cm), vec![((0, 0), 1), ((0, 1), 1), ((1, 0), 1), ((1, 1), 1)]);
        assert_eq!(cm.total(), 4);
    }

    #[test]
    fn entropy_functional_values() {
        assert_eq!(entropy_functional(&[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(entropy_functional(&[0.0, 0.0]).unwrap(), 0.0);
        assert!((entropy_functional(&[1.0, 3.0]).unwrap() - 0.811278).abs() < 1e-6);
        assert!(entropy_functional(&[1.0, -1.0]).is_err());
    }

    #[test]
    fn conditional_entropy_values() {
        let h = |s: &str| {
            build_counts(&seq(s), 2, ContextShape::linear(1))
                .unwrap()
                .conditional_entropy()
                .unwrap()
        };
        assert_eq!(h("0000"), 0.0);
        assert_eq!(h("0101"), 0.0);
        assert!((h("0011") - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn no_op_flip_is_empty() {
        let y = seq("0110");
        let d = ContextShape::linear(2).affected_contexts(&y, 2, 1, 1);
        assert!(d.is_empty());
    }

    #[test]
    fn flip_touches_only_dependent_positions() {
        // 1-based position 3 of 000000 -> index 2; dependents are indices 2 and 3
        let y = seq("000000");
        let d = ContextShape::linear(1).affected_contexts(&y, 2, 2, 1);
        assert_eq!(d.cell_changes(), 4);
        assert_eq!(
            d.moves,
            vec![
                CountMove {
                    from: Cell { context: 0, symbol: 0 },
                    to: Cell { context: 0, symbol: 1 },
                },
                CountMove {
                    from: Cell { context: 0, symbol: 0 },
                    to: Cell { context: 1, symbol: 0 },
                },
            ]
        );
    }

    #[test]
    fn flip_near_the_end_is_truncated() {
        let y = seq("00000");
        let d = ContextShape::linear(3).affected_contexts(&y, 2, 4, 1);
        assert_eq!(d.moves.len(), 1);
        let d = ContextShape::linear(3).affected_contexts(&y, 2, 0, 1);
        // position 0 only feeds the context of position 3
        assert_eq!(d.moves.len(), 1);
    }

    #[test]
    fn apply_flip_matches_rebuild() {
        let mut y = seq("0011");
        let mut cm = build_counts(&y, 2, ContextShape::linear(1)).unwrap();
        let before = cm.conditional_entropy().unwrap();
        let dh = cm.apply_flip(&mut y, 1, 1).unwrap();
        let rebuilt = build_counts(&y, 2, ContextShape::linear(1)).unwrap();
        assert_eq!(cm, rebuilt);
        let after = rebuilt.conditional_entropy().unwrap();
        assert!((dh - (after - before)).abs() <= 1e-12);
    }

    #[test]
    fn flip_same_symbol_and_involution() {
        let mut y = seq("0110100111");
        let mut cm = build_counts(&y, 3, ContextShape::linear(2)).unwrap();
        let original = cm.clone();
        let same = y[4];
        assert_eq!(cm.apply_flip(&mut y, 4, same).unwrap(), 0.0);
        assert_eq!(cm, original);
        let old = y[4];
        cm.apply_flip(&mut y, 4, 2).unwrap();
        cm.apply_flip(&mut y, 4, old).unwrap();
        assert_eq!(cm, original);
    }

    #[test]
    fn inconsistent_matrix_is_reported() {
        let y = seq("0011");
        let mut cm = build_counts(&seq("0000"), 2, ContextShape::linear(1)).unwrap();
        let snapshot = cm.clone();
        let mut y2 = y.clone();
        let err = cm.apply_flip(&mut y2, 2, 0).unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)));
        assert_eq!(cm, snapshot);
        assert_eq!(y2, y);
    }

    #[test]
    fn raster_dependents_are_inverse_offsets() {
        let shape = ContextShape::raster_default(5, 4).unwrap();
        let mut deps = Vec::new();
        shape.dependents(7, 20, &mut deps); // row 1, col 2
        deps.sort_unstable();
        // self, E (8), EE (9), SE (13), S (12), SW (11), SS (17)
        assert_eq!(deps, vec![7, 8, 9, 11, 12, 13, 17]);
    }

    #[test]
    fn raster_rejects_non_causal_offsets() {
        assert!(ContextShape::raster(4, 4, vec![(0, 1)]).is_err());
        assert!(ContextShape::raster(4, 4, vec![(1, -1)]).is_err());
        assert!(ContextShape::raster(4, 4, vec![(-1, 0), (-1, 0)]).is_err());
    }

    #[test]
    fn pack_is_little_endian() {
        assert_eq!(pack(&[0, 1, 0], 2), 2);
        assert_eq!(pack(&[1, 0, 1], 2), 5);
        assert_eq!(pack(&[2, 1], 3), 5);
    }
}
