//! Netpbm grayscale (PGM) reader and writer, plain (P2) and raw (P5).

use std::path::Path;

use lsa_wavelet::ImageGrid;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    Plain,
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major samples, each at most `maxval`.
    pub samples: Vec<u16>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(format!("pgm: {}", msg.into()))
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self) -> Result<u32, CliError> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(format!("expected a number at byte {start}")))
    }
}

impl Pgm {
    pub fn parse(bytes: &[u8]) -> Result<Self, CliError> {
        let format = match bytes.get(..2) {
            Some(b"P2") => PgmFormat::Plain,
            Some(b"P5") => PgmFormat::Raw,
            _ => return Err(bad("missing P2/P5 magic number")),
        };
        let mut h = Header { bytes, pos: 2 };
        let width = h.number()? as usize;
        let height = h.number()? as usize;
        let maxval = h.number()?;
        if width == 0 || height == 0 {
            return Err(bad("empty image"));
        }
        if maxval == 0 || maxval > u16::MAX as u32 {
            return Err(bad(format!("maxval {maxval} out of range 1..=65535")));
        }
        let maxval = maxval as u16;
        let count = width * height;
        let samples = match format {
            PgmFormat::Plain => {
                let mut out = Vec::with_capacity(count);
                for _ in 0..count {
                    out.push(h.number()?);
                }
                out.into_iter()
                    .map(|v| u16::try_from(v).ok().filter(|&v| v <= maxval))
                    .collect::<Option<Vec<u16>>>()
                    .ok_or_else(|| bad("sample above maxval"))?
            }
            PgmFormat::Raw => {
                // exactly one whitespace byte separates the header from the raster
                let start = h.pos + 1;
                let wide = maxval > 255;
                let need = count * if wide { 2 } else { 1 };
                let raster = bytes
                    .get(start..start + need)
                    .ok_or_else(|| bad(format!("raster truncated, need {need} bytes")))?;
                let out: Vec<u16> = if wide {
                    raster.chunks_exact(2).map(|p| u16::from_be_bytes([p[0], p[1]])).collect()
                } else {
                    raster.iter().map(|&v| v as u16).collect()
                };
                if out.iter().any(|&v| v > maxval) {
                    return Err(bad("sample above maxval"));
                }
                out
            }
        };
        Ok(Self {
            width,
            height,
            maxval,
            samples,
        })
    }

    pub fn encode(&self, format: PgmFormat) -> Vec<u8> {
        let mut out = match format {
            PgmFormat::Plain => format!("P2\n{} {}\n{}\n", self.width, self.height, self.maxval),
            PgmFormat::Raw => format!("P5\n{} {}\n{}\n", self.width, self.height, self.maxval),
        }
        .into_bytes();
        match format {
            PgmFormat::Plain => {
                for row in self.samples.chunks(self.width) {
                    let line: Vec<String> = row.iter().map(u16::to_string).collect();
                    out.extend_from_slice(line.join(" ").as_bytes());
                    out.push(b'\n');
                }
            }
            PgmFormat::Raw if self.maxval > 255 => {
                for v in &self.samples {
                    out.extend_from_slice(&v.to_be_bytes());
                }
            }
            PgmFormat::Raw => out.extend(self.samples.iter().map(|&v| v as u8)),
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&bytes)
    }

    pub fn write(&self, path: &Path, format: PgmFormat) -> Result<(), CliError> {
        std::fs::write(path, self.encode(format)).map_err(|e| CliError::io(path, e))
    }

    /// Samples scaled to `[0, 1]`; the image must be square.
    pub fn to_grid(&self) -> Result<ImageGrid, CliError> {
        if self.width != self.height {
            return Err(bad(format!("image is {}x{}, need a square", self.width, self.height)));
        }
        let scale = self.maxval as f64;
        Ok(ImageGrid::new(
            self.width,
            self.samples.iter().map(|&v| v as f64 / scale).collect(),
        )?)
    }

    /// Quantizes `grid` to `0..=maxval`, clamping values outside `[0, 1]`.
    pub fn from_grid(grid: &ImageGrid, maxval: u16) -> Self {
        let scale = maxval as f64;
        Self {
            width: grid.side(),
            height: grid.side(),
            maxval,
            samples: grid
                .pixels()
                .iter()
                .map(|&p| (p.clamp(0.0, 1.0) * scale).round() as u16)
                .collect(),
        }
    }
}
