//! Netpbm graymap (PGM) reading and writing.
//!
//! Reads plain (`P2`) and raw (`P5`) graymaps with `maxval ≤ 255`; writes
//! raw `P5` only. `#` comments are accepted anywhere whitespace is.

use std::fs;
use std::path::Path;

use thiserror::Error;

use super::{EdgeMap, Field, Image};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PgmError {
    #[error("malformed PGM at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },
    #[error("unsupported PGM depth: maxval {0} exceeds 255")]
    UnsupportedDepth(u32),
    #[error("PGM payload length mismatch: expected {expected} samples, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("PGM sample {value} at index {index} exceeds maxval {maxval}")]
    SampleRange {
        index: usize,
        value: u32,
        maxval: u32,
    },
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, reason: impl Into<String>) -> PgmError {
        PgmError::Parse {
            offset: self.pos,
            reason: reason.into(),
        }
    }

    fn skip_ws_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    /// Decimal unsigned integer preceded by optional whitespace/comments.
    /// Returns `None` at end of input.
    fn uint(&mut self, what: &str) -> Result<Option<u32>, PgmError> {
        self.skip_ws_and_comments();
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u32::from(b - b'0')))
                .ok_or_else(|| self.err(format!("{what} overflows")))?;
            self.pos += 1;
        }
        if self.pos == start {
            return match self.bytes.get(self.pos) {
                None => Ok(None),
                Some(_) => Err(self.err(format!("expected {what}"))),
            };
        }
        Ok(Some(value))
    }

    fn header_uint(&mut self, what: &str) -> Result<u32, PgmError> {
        self.uint(what)?
            .ok_or_else(|| self.err(format!("unexpected end of header, expected {what}")))
    }
}

/// Decodes a `P2` or `P5` graymap.
pub fn load_pgm(bytes: &[u8]) -> Result<Image, PgmError> {
    let mut cur = Cursor { bytes, pos: 0 };
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(cur.err("missing P2/P5 magic")),
    };
    cur.pos = 2;
    match bytes.get(2) {
        Some(b) if b.is_ascii_whitespace() || *b == b'#' => {}
        _ => return Err(cur.err("expected whitespace after magic")),
    }
    let width = cur.header_uint("width")? as usize;
    let height = cur.header_uint("height")? as usize;
    let maxval = cur.header_uint("maxval")?;
    if width == 0 || height == 0 {
        return Err(cur.err(format!("zero dimension {width}x{height}")));
    }
    if maxval == 0 {
        return Err(cur.err("maxval must be positive"));
    }
    if maxval > 255 {
        return Err(PgmError::UnsupportedDepth(maxval));
    }
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| cur.err("dimensions overflow"))?;

    let samples: Vec<u8> = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(cur.err("expected single whitespace before raster")),
        }
        let payload = &bytes[cur.pos..];
        if payload.len() < expected {
            return Err(PgmError::LengthMismatch {
                expected,
                found: payload.len(),
            });
        }
        payload[..expected].to_vec()
    } else {
        let mut out = Vec::with_capacity(expected.min(bytes.len()));
        while out.len() < expected {
            match cur.uint("sample")? {
                Some(v) if v > maxval => {
                    return Err(PgmError::SampleRange {
                        index: out.len(),
                        value: v,
                        maxval,
                    })
                }
                Some(v) => out.push(v as u8),
                None => {
                    return Err(PgmError::LengthMismatch {
                        expected,
                        found: out.len(),
                    })
                }
            }
        }
        out
    };

    if binary {
        if let Some((index, &v)) = samples
            .iter()
            .enumerate()
            .find(|(_, &v)| u32::from(v) > maxval)
        {
            return Err(PgmError::SampleRange {
                index,
                value: u32::from(v),
                maxval,
            });
        }
    }

    let data = samples.iter().map(|&b| f64::from(b)).collect();
    let field = Field::new(width, height, data).expect("dimensions checked");
    Ok(Image::from_field(field, maxval as u8).expect("samples checked against maxval"))
}

/// Rasters that can be written as 8-bit PGM.
pub trait PgmRaster {
    fn pgm_header_dims(&self) -> (usize, usize, u8);
    fn pgm_samples(&self) -> Vec<u8>;
}

impl PgmRaster for Image {
    fn pgm_header_dims(&self) -> (usize, usize, u8) {
        (self.width(), self.height(), self.max_value())
    }
    fn pgm_samples(&self) -> Vec<u8> {
        self.to_bytes()
    }
}

impl PgmRaster for EdgeMap {
    fn pgm_header_dims(&self) -> (usize, usize, u8) {
        (self.width(), self.height(), 255)
    }
    fn pgm_samples(&self) -> Vec<u8> {
        self.to_bytes()
    }
}

/// Encodes as raw `P5`. Image values are rounded half-up.
pub fn save_pgm<R: PgmRaster + ?Sized>(raster: &R) -> Vec<u8> {
    let (w, h, maxval) = raster.pgm_header_dims();
    let mut out = format!("P5\n{w} {h}\n{maxval}\n").into_bytes();
    out.extend(raster.pgm_samples());
    out
}

pub fn read_pgm_file(path: &Path) -> crate::Result<Image> {
    let bytes = fs::read(path).map_err(|e| crate::Error::io(path, e))?;
    Ok(load_pgm(&bytes)?)
}

pub fn write_pgm_file<R: PgmRaster + ?Sized>(path: &Path, raster: &R) -> crate::Result<()> {
    fs::write(path, save_pgm(raster)).map_err(|e| crate::Error::io(path, e))
}
