//! Versioned container for a quantized sequence.
//!
//! Layout, all integers big-endian:
//!
//! | bytes | field |
//! |-------|-------|
//! | 4 | magic `MCLZ` |
//! | 1 | format version (1) |
//! | 1 | LZ78 variant id |
//! | 2 | alphabet size |
//! | 2 | context order `k` used by the coder |
//! | 8 | sequence length `n` |
//! | 4 | image width (0 for 1-D data) |
//! | 4 | image height (0 for 1-D data) |
//! | .. | LZ78 container |

use crate::lossless::{lz78_decode, lz78_encode, LZ78_VARIANT};
use crate::{Error, Result, Symbol};

pub const MAGIC: [u8; 4] = *b"MCLZ";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Archive {
    pub alphabet: usize,
    pub k: usize,
    /// `(width, height)` for images.
    pub dims: Option<(usize, usize)>,
    pub symbols: Vec<Symbol>,
}

impl Archive {
    pub fn encode(&self) -> Result<Vec<u8>> {
        if !(1..=256).contains(&self.alphabet) {
            return Err(Error::domain(format!("alphabet size {} not in 1..=256", self.alphabet)));
        }
        let k = u16::try_from(self.k).map_err(|_| Error::TooLarge("context order exceeds 65535".into()))?;
        let (w, h) = self.dims.unwrap_or((0, 0));
        if self.dims.is_some() && w * h != self.symbols.len() {
            return Err(Error::LengthMismatch {
                left: self.symbols.len(),
                right: w * h,
            });
        }
        let dim = |v: usize| u32::try_from(v).map_err(|_| Error::TooLarge("image dimension exceeds u32".into()));
        let mut out = Vec::with_capacity(HEADER_LEN + self.symbols.len() / 4);
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(LZ78_VARIANT);
        out.extend_from_slice(&(self.alphabet as u16).to_be_bytes());
        out.extend_from_slice(&k.to_be_bytes());
        out.extend_from_slice(&(self.symbols.len() as u64).to_be_bytes());
        out.extend_from_slice(&dim(w)?.to_be_bytes());
        out.extend_from_slice(&dim(h)?.to_be_bytes());
        out.extend_from_slice(&lz78_encode(&self.symbols, self.alphabet)?);
        Ok(out)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Malformed(format!("archive of {} bytes has no header", bytes.len())));
        }
        if bytes[..4] != MAGIC {
            return Err(Error::Malformed("bad archive magic".into()));
        }
        if bytes[4] != VERSION {
            return Err(Error::UnsupportedVersion(bytes[4]));
        }
        if bytes[5] != LZ78_VARIANT {
            return Err(Error::Malformed(format!("unknown LZ78 variant {}", bytes[5])));
        }
        let be = |r: std::ops::Range<usize>| bytes[r].iter().fold(0u64, |acc, &b| acc << 8 | b as u64);
        let alphabet = be(6..8) as usize;
        let k = be(8..10) as usize;
        let n = be(10..18);
        let (w, h) = (be(18..22) as usize, be(22..26) as usize);
        let symbols = lz78_decode(&bytes[HEADER_LEN..], alphabet)?;
        if symbols.len() as u64 != n {
            return Err(Error::Malformed(format!(
                "header declares {n} symbols, payload holds {}",
                symbols.len()
            )));
        }
        let dims = match (w, h) {
            (0, 0) => None,
            (w, h) if w * h == symbols.len() => Some((w, h)),
            _ => return Err(Error::Malformed(format!("{w}x{h} image does not hold {n} pixels"))),
        };
        Ok(Archive {
            alphabet,
            k,
            dims,
            symbols,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Archive {
        Archive {
            alphabet: 2,
            k: 4,
            dims: None,
            symbols: (0..300).map(|i| ((i * 13) % 7 < 3) as Symbol).collect(),
        }
    }

    #[test]
    fn round_trip() {
        let a = sample();
        assert_eq!(Archive::decode(&a.encode().unwrap()).unwrap(), a);
        let img = Archive {
            dims: Some((20, 15)),
            ..sample()
        };
        assert_eq!(Archive::decode(&img.encode().unwrap()).unwrap(), img);
    }

    #[test]
    fn rejects_unknown_version_and_corruption() {
        let mut bytes = sample().encode().unwrap();
        bytes[4] = 2;
        assert!(matches!(Archive::decode(&bytes), Err(Error::UnsupportedVersion(2))));
        let mut bytes = sample().encode().unwrap();
        bytes[0] = b'X';
        assert!(Archive::decode(&bytes).is_err());
        let mut bytes = sample().encode().unwrap();
        bytes[17] ^= 1;
        assert!(Archive::decode(&bytes).is_err());
        assert!(Archive::decode(&bytes[..10]).is_err());
        let bad = Archive {
            dims: Some((7, 7)),
            ..sample()
        };
        assert!(bad.encode().is_err());
    }

    #[test]
    fn constant_sequence_is_small() {
        let a = Archive {
            alphabet: 2,
            k: 3,
            dims: None,
            symbols: vec![0; 10_000],
        };
        let bytes = a.encode().unwrap();
        assert!(bytes.len() < HEADER_LEN + 200, "{}", bytes.len());
    }
}
