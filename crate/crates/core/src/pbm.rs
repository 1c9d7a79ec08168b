//! Binary raster images and the PBM formats (P1 plain, P4 raw).

use std::io::{Read, Write};
use std::path::Path;

use crate::{Error, Result, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PbmFormat {
    Plain,
    Raw,
}

/// Row-major binary raster; 1 is black, as in PBM.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image2D {
    width: usize,
    height: usize,
    pixels: Vec<Symbol>,
}

impl Image2D {
    pub fn new(width: usize, height: usize, pixels: Vec<Symbol>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Pbm("image dimensions must be positive".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::LengthMismatch {
                left: pixels.len(),
                right: width * height,
            });
        }
        if let Some(&s) = pixels.iter().find(|&&s| s > 1) {
            return Err(Error::SymbolOutOfRange {
                symbol: s as u32,
                alphabet: 2,
            });
        }
        Ok(Image2D {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[Symbol] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<Symbol> {
        self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> Symbol {
        self.pixels[row * self.width + col]
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let mut p = Parser { bytes, pos: 0 };
        let format = match p.magic()? {
            b"P1" => PbmFormat::Plain,
            b"P4" => PbmFormat::Raw,
            m => return Err(Error::Pbm(format!("unsupported magic {:?}", String::from_utf8_lossy(m)))),
        };
        let width = p.number()?;
        let height = p.number()?;
        if width == 0 || height == 0 {
            return Err(Error::Pbm("image dimensions must be positive".into()));
        }
        let n = width
            .checked_mul(height)
            .ok_or_else(|| Error::Pbm("image dimensions overflow".into()))?;
        let pixels = match format {
            PbmFormat::Plain => {
                let mut px = Vec::with_capacity(n);
                while px.len() < n {
                    p.skip_space();
                    match p.next() {
                        Some(b'0') => px.push(0),
                        Some(b'1') => px.push(1),
                        Some(c) => return Err(Error::Pbm(format!("unexpected byte {c:#04x} in raster"))),
                        None => return Err(Error::Pbm(format!("raster truncated after {} pixels", px.len()))),
                    }
                }
                px
            }
            PbmFormat::Raw => {
                // exactly one whitespace byte separates the header from the raster
                match p.next() {
                    Some(c) if c.is_ascii_whitespace() => {}
                    _ => return Err(Error::Pbm("missing whitespace after header".into())),
                }
                let stride = width.div_ceil(8);
                let data = &bytes[p.pos..];
                if data.len() < stride * height {
                    return Err(Error::Pbm(format!(
                        "raster has {} bytes, expected {}",
                        data.len(),
                        stride * height
                    )));
                }
                let mut px = Vec::with_capacity(n);
                for row in data.chunks(stride).take(height) {
                    px.extend((0..width).map(|c| (row[c / 8] >> (7 - c % 8)) & 1));
                }
                px
            }
        };
        Image2D::new(width, height, pixels)
    }

    pub fn to_bytes(&self, format: PbmFormat) -> Vec<u8> {
        let mut out = Vec::new();
        match format {
            PbmFormat::Plain => {
                out.extend_from_slice(format!("P1\n{} {}\n", self.width, self.height).as_bytes());
                for row in self.pixels.chunks(self.width) {
                    // plain PBM lines should stay under 70 characters
                    for (i, chunk) in row.chunks(34).enumerate() {
                        if i > 0 {
                            out.push(b'\n');
                        }
                        let line: Vec<String> = chunk.iter().map(|s| s.to_string()).collect();
                        out.extend_from_slice(line.join(" ").as_bytes());
                    }
                    out.push(b'\n');
                }
            }
            PbmFormat::Raw => {
                out.extend_from_slice(format!("P4\n{} {}\n", self.width, self.height).as_bytes());
                for row in self.pixels.chunks(self.width) {
                    for byte in row.chunks(8) {
                        out.push(byte.iter().enumerate().fold(0u8, |acc, (b, &s)| acc | s << (7 - b)));
                    }
                }
            }
        }
        out
    }

    pub fn read<R: Read>(mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        Self::parse(&bytes)
    }

    pub fn write<W: Write>(&self, mut w: W, format: PbmFormat) -> Result<()> {
        w.write_all(&self.to_bytes(format))?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>, format: PbmFormat) -> Result<()> {
        std::fs::write(path, self.to_bytes(format))?;
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn next(&mut self) -> Option<u8> {
        let c = self.bytes.get(self.pos).copied();
        self.pos += c.is_some() as usize;
        c
    }

    fn magic(&mut self) -> Result<&'a [u8]> {
        let m = self
            .bytes
            .get(..2)
            .ok_or_else(|| Error::Pbm("file too short".into()))?;
        self.pos = 2;
        Ok(m)
    }

    fn skip_space(&mut self) {
        while let Some(&c) = self.bytes.get(self.pos) {
            if c == b'#' {
                while let Some(c) = self.next() {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if c.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_space();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Pbm(format!("expected a dimension at byte {start}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_with_comments() {
        let img = Image2D::parse(b"P1\n# a comment\n3 2\n1 0 1\n0 1 0\n").unwrap();
        assert_eq!((img.width(), img.height()), (3, 2));
        assert_eq!(img.pixels(), &[1, 0, 1, 0, 1, 0]);
        // plain rasters may omit whitespace between digits
        let img2 = Image2D::parse(b"P1 3 2 101010").unwrap();
        assert_eq!(img, img2);
    }

    #[test]
    fn raw_round_trip_is_byte_identical() {
        let pixels: Vec<Symbol> = (0..11 * 3).map(|i| ((i * 7) % 5 < 2) as Symbol).collect();
        let img = Image2D::new(11, 3, pixels).unwrap();
        let bytes = img.to_bytes(PbmFormat::Raw);
        assert_eq!(bytes.len(), "P4\n11 3\n".len() + 2 * 3);
        let back = Image2D::parse(&bytes).unwrap();
        assert_eq!(back, img);
        assert_eq!(back.to_bytes(PbmFormat::Raw), bytes);
        assert_eq!(Image2D::parse(&img.to_bytes(PbmFormat::Plain)).unwrap(), img);
    }

    #[test]
    fn single_pixel() {
        let img = Image2D::new(1, 1, vec![1]).unwrap();
        assert_eq!(img.to_bytes(PbmFormat::Raw), b"P4\n1 1\n\x80");
        assert_eq!(Image2D::parse(b"P4\n1 1\n\x80").unwrap(), img);
    }

    #[test]
    fn malformed_inputs() {
        assert!(Image2D::parse(b"").is_err());
        assert!(Image2D::parse(b"P2\n1 1\n0").is_err());
        assert!(Image2D::parse(b"P1\n2 2\n1 0 1").is_err());
        assert!(Image2D::parse(b"P1\n2 2\n1 0 1 2").is_err());
        assert!(Image2D::parse(b"P4\n9 2\n\x00\x00\x00").is_err());
        assert!(Image2D::parse(b"P1\n0 2\n").is_err());
        assert!(Image2D::parse(b"P1\nx 2\n").is_err());
    }
}
