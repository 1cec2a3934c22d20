//! Portable graymap (P2 ASCII / P5 binary) reading and writing.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use super::{GrayImage, RasterError};

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("not a P2/P5 graymap")]
    BadMagic,
    #[error("malformed header: {0}")]
    Header(String),
    #[error("maxval {0} unsupported (expected 1..=255)")]
    MaxVal(u32),
    #[error("pixel data truncated: expected {expected} values, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error(transparent)]
    Raster(#[from] RasterError),
}

/// Splits off the next whitespace-delimited header token, skipping `#` comments.
fn next_token<'a>(data: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    loop {
        while *pos < data.len() && data[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < data.len() && data[*pos] == b'#' {
            while *pos < data.len() && data[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < data.len() && !data[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    (start < *pos).then(|| &data[start..*pos])
}

fn header_number(data: &[u8], pos: &mut usize, what: &str) -> Result<u32, PgmError> {
    let tok = next_token(data, pos).ok_or_else(|| PgmError::Header(format!("missing {what}")))?;
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| PgmError::Header(format!("bad {what}")))
}

/// Decodes a P2 or P5 graymap; values are rescaled to 0..=255 when maxval < 255.
pub fn decode_pgm(data: &[u8]) -> Result<GrayImage, PgmError> {
    let mut pos = 0;
    let binary = match next_token(data, &mut pos) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(PgmError::BadMagic),
    };
    let width = header_number(data, &mut pos, "width")? as usize;
    let height = header_number(data, &mut pos, "height")? as usize;
    let maxval = header_number(data, &mut pos, "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(PgmError::MaxVal(maxval));
    }
    let expected = width * height;
    let raw: Vec<u32> = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        let start = pos + 1;
        let body = data.get(start..).unwrap_or(&[]);
        if body.len() < expected {
            return Err(PgmError::Truncated { expected, found: body.len() });
        }
        body[..expected].iter().map(|&b| u32::from(b)).collect()
    } else {
        let mut values = Vec::with_capacity(expected);
        while values.len() < expected {
            match next_token(data, &mut pos) {
                Some(tok) => {
                    let v = std::str::from_utf8(tok)
                        .ok()
                        .and_then(|s| s.parse::<u32>().ok())
                        .ok_or_else(|| PgmError::Header("bad pixel value".into()))?;
                    values.push(v);
                }
                None => return Err(PgmError::Truncated { expected, found: values.len() }),
            }
        }
        values
    };
    let pixels = raw
        .into_iter()
        .map(|v| ((v.min(maxval) * 255 + maxval / 2) / maxval) as u8)
        .collect();
    Ok(GrayImage::new(width, height, pixels)?)
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage, PgmError> {
    decode_pgm(&fs::read(path)?)
}

/// Writes a binary (P5) graymap.
pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>) -> io::Result<()> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    fs::write(path, out)
}
