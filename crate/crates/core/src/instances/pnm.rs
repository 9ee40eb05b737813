//! Netpbm grayscale (P2/P5) and color (P3/P6) images.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major samples.
    pub data: Vec<u16>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub data: Vec<[u16; 3]>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, maxval: u16, data: Vec<u16>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::SizeMismatch { expected: width * height, found: data.len() });
        }
        if maxval == 0 || data.iter().any(|&v| v > maxval) {
            return Err(Error::Parameter("sample exceeds maxval".into()));
        }
        Ok(Self { width, height, maxval, data })
    }

    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.data[row * self.width + col]
    }

    /// The `h x w` sub-image starting at `(top, left)`.
    pub fn crop(&self, top: usize, left: usize, h: usize, w: usize) -> Result<Self> {
        if top + h > self.height || left + w > self.width {
            return Err(Error::Parameter(format!(
                "crop {h}x{w}+{top}+{left} exceeds {}x{} image",
                self.height, self.width
            )));
        }
        let data = (top..top + h)
            .flat_map(|r| (left..left + w).map(move |c| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .collect();
        Ok(Self { width: w, height: h, maxval: self.maxval, data })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::decode(&std::fs::read(path)?)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = HeaderReader::new(bytes);
        let magic = r.magic()?;
        let binary = match magic.as_str() {
            "P2" => false,
            "P5" => true,
            other => return Err(r.err(format!("expected P2 or P5, found {other}"))),
        };
        let (width, height, maxval) = r.dims()?;
        let data = r.samples(width * height, maxval, binary)?;
        Self::new(width, height, maxval, data)
    }

    /// Plain (P2) encoding, 16 samples per line.
    pub fn encode_plain(&self) -> Vec<u8> {
        let mut out = format!("P2\n{} {}\n{}\n", self.width, self.height, self.maxval).into_bytes();
        for row in self.data.chunks(self.width.max(1)) {
            for chunk in row.chunks(16) {
                let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
        out
    }

    /// Raw (P5) encoding; two big-endian bytes per sample when `maxval > 255`.
    pub fn encode_raw(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n{}\n", self.width, self.height, self.maxval).into_bytes();
        push_samples(&mut out, self.data.iter().copied(), self.maxval);
        out
    }

    pub fn write(&self, path: impl AsRef<Path>, raw: bool) -> Result<()> {
        let bytes = if raw { self.encode_raw() } else { self.encode_plain() };
        std::fs::File::create(path)?.write_all(&bytes)?;
        Ok(())
    }
}

impl RgbImage {
    pub fn new(width: usize, height: usize, maxval: u16, data: Vec<[u16; 3]>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::SizeMismatch { expected: width * height, found: data.len() });
        }
        if maxval == 0 || data.iter().flatten().any(|&v| v > maxval) {
            return Err(Error::Parameter("sample exceeds maxval".into()));
        }
        Ok(Self { width, height, maxval, data })
    }

    pub fn get(&self, row: usize, col: usize) -> [u16; 3] {
        self.data[row * self.width + col]
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::decode(&std::fs::read(path)?)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = HeaderReader::new(bytes);
        let magic = r.magic()?;
        let binary = match magic.as_str() {
            "P3" => false,
            "P6" => true,
            other => return Err(r.err(format!("expected P3 or P6, found {other}"))),
        };
        let (width, height, maxval) = r.dims()?;
        let flat = r.samples(width * height * 3, maxval, binary)?;
        let data = flat.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        Self::new(width, height, maxval, data)
    }

    pub fn encode_plain(&self) -> Vec<u8> {
        let mut out = format!("P3\n{} {}\n{}\n", self.width, self.height, self.maxval).into_bytes();
        for px in &self.data {
            out.extend_from_slice(format!("{} {} {}\n", px[0], px[1], px[2]).as_bytes());
        }
        out
    }

    pub fn encode_raw(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n{}\n", self.width, self.height, self.maxval).into_bytes();
        push_samples(&mut out, self.data.iter().flatten().copied(), self.maxval);
        out
    }
}

fn push_samples(out: &mut Vec<u8>, samples: impl Iterator<Item = u16>, maxval: u16) {
    for v in samples {
        if maxval > 255 {
            out.extend_from_slice(&v.to_be_bytes());
        } else {
            out.push(v as u8);
        }
    }
}

/// Tokenizer for the whitespace/comment-separated netpbm header, tracking line numbers.
struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> HeaderReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0, line: 1 }
    }

    fn err(&self, msg: String) -> Error {
        Error::Parse { line: self.line, msg }
    }

    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b'\n' => {
                    self.line += 1;
                    self.pos += 1;
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Result<&'a str> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("unexpected end of file".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).map_err(|_| self.err("non-ASCII token".into()))
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let tok = self.token()?;
        tok.parse().map_err(|_| self.err(format!("invalid {what} '{tok}'")))
    }

    fn magic(&mut self) -> Result<String> {
        Ok(self.token()?.to_string())
    }

    fn dims(&mut self) -> Result<(usize, usize, u16)> {
        let width = self.number("width")?;
        let height = self.number("height")?;
        let maxval = self.number("maxval")?;
        if maxval == 0 || maxval > u16::MAX as usize {
            return Err(self.err(format!("maxval {maxval} out of range")));
        }
        Ok((width, height, maxval as u16))
    }

    fn samples(&mut self, count: usize, maxval: u16, binary: bool) -> Result<Vec<u16>> {
        if !binary {
            return (0..count)
                .map(|_| {
                    let v = self.number("sample")?;
                    if v > maxval as usize {
                        return Err(self.err(format!("sample {v} exceeds maxval {maxval}")));
                    }
                    Ok(v as u16)
                })
                .collect();
        }
        // Exactly one whitespace byte separates the header from the raster.
        self.pos += 1;
        let width = if maxval > 255 { 2 } else { 1 };
        let raster = &self.bytes[self.pos.min(self.bytes.len())..];
        if raster.len() < count * width {
            return Err(self.err(format!(
                "raster has {} bytes, expected {}",
                raster.len(),
                count * width
            )));
        }
        Ok(raster[..count * width]
            .chunks(width)
            .map(|c| if width == 2 { u16::from_be_bytes([c[0], c[1]]) } else { c[0] as u16 })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GrayImage {
        GrayImage::new(3, 2, 255, vec![0, 10, 20, 30, 40, 255]).unwrap()
    }

    #[test]
    fn plain_and_raw_decode_identically() {
        let img = sample();
        let a = GrayImage::decode(&img.encode_plain()).unwrap();
        let b = GrayImage::decode(&img.encode_raw()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, img);
    }

    #[test]
    fn sixteen_bit_raw() {
        let img = GrayImage::new(2, 1, 1000, vec![999, 3]).unwrap();
        assert_eq!(GrayImage::decode(&img.encode_raw()).unwrap(), img);
    }

    #[test]
    fn header_comments_are_skipped() {
        let text = b"P2\n# made by hand\n2 1 # dims\n255\n7 9\n";
        let img = GrayImage::decode(text).unwrap();
        assert_eq!(img.data, vec![7, 9]);
    }

    #[test]
    fn malformed_inputs_report_lines() {
        match GrayImage::decode(b"P2\n2 x\n255\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(GrayImage::decode(b"P7\n1 1\n255\n0").is_err());
        assert!(GrayImage::decode(b"P2\n2 1\n255\n300 1\n").is_err());
        assert!(GrayImage::decode(b"P5\n4 4\n255\nab").is_err());
    }

    #[test]
    fn color_round_trip() {
        let img = RgbImage::new(2, 1, 255, vec![[1, 2, 3], [250, 0, 9]]).unwrap();
        assert_eq!(RgbImage::decode(&img.encode_plain()).unwrap(), img);
        assert_eq!(RgbImage::decode(&img.encode_raw()).unwrap(), img);
    }

    #[test]
    fn crop_extracts_window() {
        let img = sample();
        let c = img.crop(1, 1, 1, 2).unwrap();
        assert_eq!(c.data, vec![40, 255]);
        assert!(img.crop(1, 1, 2, 2).is_err());
    }
}
