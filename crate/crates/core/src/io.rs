//! Binary PGM (P5, 8-bit) reading and writing.
//!
//! Samples map to `[0, 1]` by `v / 255`; writing clips to `[0, 1]` and
//! rounds `v * 255` half up.

use std::fs;
use std::path::Path;

use crate::error::{DenoiseError, Result};
use crate::image::Image;

pub fn read_image(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    decode_pgm(&bytes).map_err(|e| match e {
        DenoiseError::Format(msg) => DenoiseError::Format(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_image(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(img))?;
    Ok(())
}

/// Maps a normalized intensity to an 8-bit sample.
pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0 + 0.5).floor() as u8
}

pub fn encode_pgm(img: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.pixels().iter().map(|&v| quantize(v)));
    out
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderReader<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&str> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(DenoiseError::Format("truncated PGM header".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| DenoiseError::Format("non-ASCII PGM header".into()))
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let tok = self.token()?;
        tok.parse()
            .map_err(|_| DenoiseError::Format(format!("invalid {what} '{tok}' in PGM header")))
    }
}

pub fn decode_pgm(bytes: &[u8]) -> Result<Image> {
    let mut hdr = HeaderReader { bytes, pos: 0 };
    let magic = hdr.token()?;
    if magic != "P5" {
        return Err(DenoiseError::Format(format!(
            "unsupported magic '{magic}', expected binary PGM (P5)"
        )));
    }
    let width = hdr.number("width")?;
    let height = hdr.number("height")?;
    let maxval = hdr.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(DenoiseError::Format("PGM has a zero dimension".into()));
    }
    if maxval != 255 {
        return Err(DenoiseError::Format(format!(
            "unsupported maxval {maxval}; only 8-bit PGM (maxval 255) is supported"
        )));
    }
    // exactly one whitespace byte separates the header from the raster
    if hdr.pos >= bytes.len() || !bytes[hdr.pos].is_ascii_whitespace() {
        return Err(DenoiseError::Format("missing raster data".into()));
    }
    let data = &bytes[hdr.pos + 1..];
    let n = width * height;
    if data.len() < n {
        return Err(DenoiseError::Format(format!(
            "raster has {} bytes, expected {n}",
            data.len()
        )));
    }
    let pixels = data[..n].iter().map(|&b| b as f64 / 255.0).collect();
    Image::new(height, width, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_pgm() -> Vec<u8> {
        let mut bytes = b"P5\n# made by hand\n3 2\n255\n".to_vec();
        bytes.extend([0u8, 17, 128, 200, 254, 255]);
        bytes
    }

    #[test]
    fn decode_then_encode_is_byte_identical() {
        let img = decode_pgm(&sample_pgm()).unwrap();
        assert_eq!(img.dims(), (2, 3));
        assert_eq!(img.get(1, 2), 1.0);
        let reencoded = encode_pgm(&img);
        assert_eq!(
            &reencoded[reencoded.len() - 6..],
            &sample_pgm()[sample_pgm().len() - 6..]
        );
        assert_eq!(decode_pgm(&reencoded).unwrap(), img);
        assert_eq!(encode_pgm(&decode_pgm(&reencoded).unwrap()), reencoded);
    }

    #[test]
    fn half_rounds_up_and_clips() {
        assert_eq!(quantize(0.5), 128);
        assert_eq!(quantize(-0.2), 0);
        assert_eq!(quantize(1.7), 255);
    }

    #[test]
    fn round_trip_error_bound() {
        for i in 0..=1000 {
            let v = i as f64 / 1000.0;
            let back = quantize(v) as f64 / 255.0;
            assert!((back - v).abs() <= 1.0 / 510.0 + 1e-12);
        }
    }

    #[test]
    fn rejects_sixteen_bit_and_ascii() {
        let mut bytes = b"P5\n2 1\n65535\n".to_vec();
        bytes.extend([0u8, 1, 2, 3]);
        let err = decode_pgm(&bytes).unwrap_err();
        assert!(err.to_string().contains("maxval 65535"), "{err}");
        assert!(decode_pgm(b"P2\n1 1\n255\n7\n").is_err());
    }

    #[test]
    fn rejects_truncated_raster() {
        let bytes = b"P5\n4 4\n255\n\x00\x01".to_vec();
        assert!(matches!(decode_pgm(&bytes), Err(DenoiseError::Format(_))));
    }
}
