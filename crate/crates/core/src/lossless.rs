//! Lossless descriptions of a reconstruction sequence.
//!
//! # LZ78 bitstream (variant id 1)
//!
//! The input is parsed into phrases, each a previously seen phrase extended by
//! one symbol. Phrase `j` (1-based) is written as its parent's dictionary index
//! in `ceil(log2 j)` bits followed by the innovation symbol in
//! `ceil(log2 |Y|)` bits; index 0 is the empty phrase. If the input ends in
//! the middle of a phrase, the remainder (which is already in the dictionary)
//! is written as its index alone. A single leading flag bit records whether
//! that partial phrase is present.
//!
//! Container: a 4-byte big-endian count of valid bits (flag included), then
//! the bits packed MSB-first into `ceil(bits / 8)` bytes, zero padded.

use rustc_hash::FxHashMap;

use crate::context::{ContextShape, CountMatrix};
use crate::{Error, Result, Symbol};

/// Identifier of the LZ78 variant above, stored in archive headers.
pub const LZ78_VARIANT: u8 = 1;

/// `ceil(log2 v)` for `v >= 1`.
pub fn ceil_log2(v: u64) -> u32 {
    if v <= 1 {
        0
    } else {
        64 - (v - 1).leading_zeros()
    }
}

#[derive(Default)]
struct BitWriter {
    bytes: Vec<u8>,
    len: u64,
}

impl BitWriter {
    fn push(&mut self, value: u64, width: u32) {
        for shift in (0..width).rev() {
            let bit = (value >> shift) & 1;
            if self.len.is_multiple_of(8) {
                self.bytes.push(0);
            }
            if bit == 1 {
                *self.bytes.last_mut().expect("byte pushed above") |= 0x80 >> (self.len % 8);
            }
            self.len += 1;
        }
    }

    fn finish(self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + self.bytes.len());
        out.extend_from_slice(&(self.len as u32).to_be_bytes());
        out.extend_from_slice(&self.bytes);
        out
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    len: u64,
    pos: u64,
}

impl<'a> BitReader<'a> {
    fn new(container: &'a [u8]) -> Result<Self> {
        if container.len() < 4 {
            return Err(Error::Malformed("missing length prefix".into()));
        }
        let len = u32::from_be_bytes(container[..4].try_into().expect("4 bytes")) as u64;
        let bytes = &container[4..];
        if bytes.len() as u64 != len.div_ceil(8) {
            return Err(Error::Malformed(format!(
                "{} payload bytes for {} bits",
                bytes.len(),
                len
            )));
        }
        Ok(BitReader { bytes, len, pos: 0 })
    }

    fn remaining(&self) -> u64 {
        self.len - self.pos
    }

    fn read(&mut self, width: u32) -> Result<u64> {
        if self.remaining() < width as u64 {
            return Err(Error::Malformed("truncated phrase".into()));
        }
        let mut v = 0u64;
        for _ in 0..width {
            let byte = self.bytes[(self.pos / 8) as usize];
            v = (v << 1) | ((byte >> (7 - self.pos % 8)) & 1) as u64;
            self.pos += 1;
        }
        Ok(v)
    }
}

/// LZ78 incremental parse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lz78Parse {
    /// `(parent index, innovation)` per complete phrase.
    pub phrases: Vec<(u32, Symbol)>,
    /// Dictionary index of a trailing incomplete phrase, if any.
    pub tail: Option<u32>,
    pub alphabet: usize,
}

impl Lz78Parse {
    pub fn new(y: &[Symbol], alphabet: usize) -> Result<Self> {
        check_alphabet(y, alphabet)?;
        let mut trie: FxHashMap<(u32, Symbol), u32> = FxHashMap::default();
        let mut phrases = Vec::new();
        let mut node = 0u32;
        for &s in y {
            match trie.get(&(node, s)) {
                Some(&child) => node = child,
                None => {
                    phrases.push((node, s));
                    trie.insert((node, s), phrases.len() as u32);
                    node = 0;
                }
            }
        }
        Ok(Lz78Parse {
            phrases,
            tail: (node != 0).then_some(node),
            alphabet,
        })
    }

    /// Number of phrases, counting a trailing partial phrase.
    pub fn phrase_count(&self) -> usize {
        self.phrases.len() + self.tail.is_some() as usize
    }

    /// Payload bits: phrase indices and innovations, excluding the flag bit.
    pub fn payload_bits(&self) -> u64 {
        let sym = ceil_log2(self.alphabet as u64) as u64;
        let full: u64 = (1..=self.phrases.len() as u64)
            .map(|j| ceil_log2(j) as u64 + sym)
            .sum();
        let tail = self
            .tail
            .map_or(0, |_| ceil_log2(self.phrases.len() as u64 + 1) as u64);
        full + tail
    }
}

fn check_alphabet(y: &[Symbol], alphabet: usize) -> Result<()> {
    if !(1..=256).contains(&alphabet) {
        return Err(Error::domain(format!("alphabet size {alphabet} not in 1..=256")));
    }
    if let Some(&s) = y.iter().find(|&&s| s as usize >= alphabet) {
        return Err(Error::SymbolOutOfRange {
            symbol: s as u32,
            alphabet,
        });
    }
    Ok(())
}

/// LZ78 code length `l_LZ(y)` in bits (payload only; see the module docs).
pub fn lz78_length(y: &[Symbol], alphabet: usize) -> Result<u64> {
    Ok(Lz78Parse::new(y, alphabet)?.payload_bits())
}

/// Encodes `y` into the length-prefixed LZ78 container.
pub fn lz78_encode(y: &[Symbol], alphabet: usize) -> Result<Vec<u8>> {
    if y.is_empty() {
        return Err(Error::domain("LZ78 input must be non-empty"));
    }
    let parse = Lz78Parse::new(y, alphabet)?;
    let sym = ceil_log2(alphabet as u64);
    let mut w = BitWriter::default();
    w.push(parse.tail.is_some() as u64, 1);
    for (j, &(parent, s)) in parse.phrases.iter().enumerate() {
        w.push(parent as u64, ceil_log2(j as u64 + 1));
        w.push(s as u64, sym);
    }
    if let Some(node) = parse.tail {
        w.push(node as u64, ceil_log2(parse.phrases.len() as u64 + 1));
    }
    Ok(w.finish())
}

/// Decodes a container produced by [`lz78_encode`].
pub fn lz78_decode(container: &[u8], alphabet: usize) -> Result<Vec<Symbol>> {
    check_alphabet(&[], alphabet)?;
    let mut r = BitReader::new(container)?;
    if r.remaining() == 0 {
        return Err(Error::Malformed("empty stream".into()));
    }
    let has_tail = r.read(1)? == 1;
    let sym = ceil_log2(alphabet as u64);
    // node -> (parent, symbol); node 0 is the empty phrase
    let mut nodes: Vec<(u32, Symbol)> = vec![(0, 0)];
    let mut out = Vec::new();
    let mut scratch = Vec::new();
    let emit = |nodes: &[(u32, Symbol)], mut idx: u32, out: &mut Vec<Symbol>, scratch: &mut Vec<Symbol>| {
        scratch.clear();
        while idx != 0 {
            let (parent, s) = nodes[idx as usize];
            scratch.push(s);
            idx = parent;
        }
        out.extend(scratch.iter().rev());
    };
    // over a unary alphabet the first phrase takes zero bits; input is never empty
    while r.remaining() > 0 || (sym == 0 && nodes.len() == 1) {
        let dict = nodes.len() as u64;
        let idx = r.read(ceil_log2(dict))?;
        if idx >= dict {
            return Err(Error::Malformed(format!("phrase index {idx} >= dictionary size {dict}")));
        }
        if has_tail && r.remaining() == 0 {
            if idx == 0 {
                return Err(Error::Malformed("empty trailing phrase".into()));
            }
            emit(&nodes, idx as u32, &mut out, &mut scratch);
            return Ok(out);
        }
        let s = r.read(sym)?;
        if s as usize >= alphabet {
            return Err(Error::Malformed(format!("innovation {s} outside alphabet {alphabet}")));
        }
        emit(&nodes, idx as u32, &mut out, &mut scratch);
        out.push(s as Symbol);
        nodes.push((idx as u32, s as Symbol));
    }
    if has_tail {
        return Err(Error::Malformed("flag announces a trailing phrase that is missing".into()));
    }
    if out.is_empty() {
        return Err(Error::Malformed("no phrases".into()));
    }
    Ok(out)
}

/// `log2` of the multinomial coefficient `(sum c)! / prod(c_i!)`, by exact
/// summation of logarithms.
pub fn log2_multinomial(counts: &[u32]) -> f64 {
    let total: u64 = counts.iter().map(|&c| c as u64).sum();
    log2_factorial(total) - counts.iter().map(|&c| log2_factorial(c as u64)).sum::<f64>()
}

fn log2_factorial(m: u64) -> f64 {
    (2..=m).map(|i| (i as f64).log2()).sum()
}

/// Two-part enumerative code length `l_e(y)` in bits: the count matrix
/// (`|Y|^(k+1) ceil(log2 n)` bits), the first `k` symbols, then the index of
/// each context's subsequence among all arrangements of its counts.
pub fn enumerative_length(y: &[Symbol], k: usize, alphabet: usize) -> Result<f64> {
    let n = y.len();
    let cm = CountMatrix::build(y, alphabet, ContextShape::linear(k))?;
    let mut table = vec![0.0f64; n + 1];
    for i in 2..=n {
        table[i] = table[i - 1] + (i as f64).log2();
    }
    let body: f64 = cm
        .columns()
        .map(|(_, col)| {
            let total: usize = col.iter().map(|&c| c as usize).sum();
            table[total] - col.iter().map(|&c| table[c as usize]).sum::<f64>()
        })
        .sum();
    Ok(body + enumerative_header(n, k, alphabet))
}

/// Header part of [`enumerative_length`].
pub fn enumerative_header(n: usize, k: usize, alphabet: usize) -> f64 {
    (alphabet as f64).powi(k as i32 + 1) * ceil_log2(n as u64) as f64
        + k as f64 * ceil_log2(alphabet as u64) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
    }

    #[test]
    fn single_symbol() {
        assert_eq!(lz78_length(&[0], 2).unwrap(), 1);
        let enc = lz78_encode(&[0], 2).unwrap();
        assert_eq!(enc, vec![0, 0, 0, 2, 0b0000_0000]);
        assert_eq!(lz78_decode(&enc, 2).unwrap(), vec![0]);
    }

    #[test]
    fn parse_by_hand() {
        // 0|1|00|01|0 -> phrases (0,0) (0,1) (1,0) (1,1), tail node 1
        let y = [0, 1, 0, 0, 0, 1, 0];
        let p = Lz78Parse::new(&y, 2).unwrap();
        assert_eq!(p.phrases, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(p.tail, Some(1));
        // (0+1) + (1+1) + (2+1) + (2+1) + 3
        assert_eq!(p.payload_bits(), 12);
        let enc = lz78_encode(&y, 2).unwrap();
        assert_eq!(u32::from_be_bytes(enc[..4].try_into().unwrap()), 13);
        assert_eq!(lz78_decode(&enc, 2).unwrap(), y);
    }

    #[test]
    fn unary_alphabet() {
        for n in 1..=12 {
            let y = vec![0; n];
            let enc = lz78_encode(&y, 1).unwrap();
            assert_eq!(lz78_decode(&enc, 1).unwrap(), y, "n={n}");
        }
    }

    #[test]
    fn malformed_streams() {
        assert!(lz78_decode(&[0, 0], 2).is_err());
        assert!(lz78_decode(&[0, 0, 0, 0], 2).is_err());
        assert!(lz78_decode(&[0, 0, 0, 9, 0], 2).is_err());
        // flag set but only one full phrase follows
        assert!(lz78_decode(&[0, 0, 0, 2, 0b1000_0000], 2).is_err());
        // second phrase points at index 1 of a 2-entry dictionary: fine; index 3 is not
        let enc = lz78_encode(&[0, 1, 1], 2).unwrap();
        assert!(lz78_decode(&enc, 2).is_ok());
        assert!(lz78_encode(&[], 2).is_err());
        assert!(lz78_encode(&[2], 2).is_err());
    }

    #[test]
    fn multinomial_small() {
        assert!((log2_multinomial(&[2, 2]) - 6f64.log2()).abs() < 1e-12);
        assert_eq!(log2_multinomial(&[5, 0]), 0.0);
        assert_eq!(log2_multinomial(&[]), 0.0);
    }

    #[test]
    fn enumerative_constant_is_header_only() {
        let y = vec![1; 64];
        let le = enumerative_length(&y, 2, 2).unwrap();
        assert_eq!(le, enumerative_header(64, 2, 2));
        assert_eq!(le, 8.0 * 6.0 + 2.0);
    }
}
