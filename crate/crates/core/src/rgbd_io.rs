//! Loading and encoding of aligned color/depth frames.
//!
//! Color: 8-bit RGB or RGBA PNG (alpha dropped). Depth: 16-bit single-channel
//! PNG where `value * depth_scale` is millimeters and 0 means no reading.

use std::fs::File;
use std::io::{BufReader, Cursor};
use std::path::Path;

use png::{BitDepth, ColorType};

use crate::error::{Error, Result};
use crate::geometry::CameraIntrinsics;

pub type Rgb = [u8; 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorImage {
    pub width: usize,
    pub height: usize,
    /// Row-major RGB triples.
    pub pixels: Vec<Rgb>,
}

impl ColorImage {
    pub fn new(width: usize, height: usize, pixels: Vec<Rgb>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::Format(format!(
                "color buffer has {} pixels, expected {}x{}",
                pixels.len(),
                width,
                height
            )));
        }
        Ok(ColorImage { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, rgb: Rgb) -> Self {
        ColorImage {
            width,
            height,
            pixels: vec![rgb; width * height],
        }
    }

    #[inline]
    pub fn get(&self, col: usize, row: usize) -> Rgb {
        self.pixels[row * self.width + col]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    /// Encodes as an 8-bit RGB PNG.
    pub fn encode_png(&self) -> Vec<u8> {
        let raw: Vec<u8> = self.pixels.iter().flatten().copied().collect();
        encode_png(self.width, self.height, ColorType::Rgb, BitDepth::Eight, &raw)
    }
}

/// Raw 16-bit depth samples with their millimeter scale.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthImage {
    pub width: usize,
    pub height: usize,
    /// Row-major stored values; 0 = invalid.
    pub samples: Vec<u16>,
    /// Millimeters per stored unit.
    pub depth_scale: f64,
}

impl DepthImage {
    pub fn new(width: usize, height: usize, samples: Vec<u16>, depth_scale: f64) -> Result<Self> {
        if samples.len() != width * height {
            return Err(Error::Format(format!(
                "depth buffer has {} samples, expected {}x{}",
                samples.len(),
                width,
                height
            )));
        }
        Ok(DepthImage {
            width,
            height,
            samples,
            depth_scale,
        })
    }

    #[inline]
    pub fn raw(&self, col: usize, row: usize) -> u16 {
        self.samples[row * self.width + col]
    }

    /// Depth in millimeters, `None` for the invalid sentinel.
    #[inline]
    pub fn depth_mm(&self, col: usize, row: usize) -> Option<f64> {
        self.mm_at(row * self.width + col)
    }

    #[inline]
    pub(crate) fn mm_at(&self, idx: usize) -> Option<f64> {
        match self.samples[idx] {
            0 => None,
            v => Some(f64::from(v) * self.depth_scale),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn valid_count(&self) -> usize {
        self.samples.iter().filter(|&&v| v != 0).count()
    }

    /// Encodes as a 16-bit grayscale PNG (big-endian samples).
    pub fn encode_png(&self) -> Vec<u8> {
        let raw: Vec<u8> = self.samples.iter().flat_map(|v| v.to_be_bytes()).collect();
        encode_png(self.width, self.height, ColorType::Grayscale, BitDepth::Sixteen, &raw)
    }
}

pub(crate) fn encode_png(width: usize, height: usize, color: ColorType, depth: BitDepth, raw: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, width as u32, height as u32);
        enc.set_color(color);
        enc.set_depth(depth);
        let mut writer = enc.write_header().expect("png header to memory");
        writer.write_image_data(raw).expect("png data to memory");
        writer.finish().expect("png finish to memory");
    }
    out
}

pub(crate) struct DecodedPng {
    pub width: usize,
    pub height: usize,
    pub color: ColorType,
    pub depth: BitDepth,
    pub data: Vec<u8>,
}

pub(crate) fn decode_png_bytes(bytes: &[u8], what: &str) -> Result<DecodedPng> {
    decode_png(Cursor::new(bytes), what)
}

pub(crate) fn decode_png_file(path: &Path) -> Result<DecodedPng> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    decode_png(BufReader::new(f), &path.display().to_string())
}

fn decode_png<R: std::io::BufRead + std::io::Seek>(r: R, what: &str) -> Result<DecodedPng> {
    let mut reader = png::Decoder::new(r)
        .read_info()
        .map_err(|e| Error::Format(format!("{what}: {e}")))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Format(format!("{what}: image too large")))?;
    let mut data = vec![0; size];
    let info = reader
        .next_frame(&mut data)
        .map_err(|e| Error::Format(format!("{what}: {e}")))?;
    data.truncate(info.buffer_size());
    Ok(DecodedPng {
        width: info.width as usize,
        height: info.height as usize,
        color: info.color_type,
        depth: info.bit_depth,
        data,
    })
}

fn color_from_decoded(p: DecodedPng, what: &str) -> Result<ColorImage> {
    if p.depth != BitDepth::Eight {
        return Err(Error::Format(format!("{what}: color must be 8-bit, found {:?}", p.depth)));
    }
    let channels = match p.color {
        ColorType::Rgb => 3,
        ColorType::Rgba => 4,
        other => return Err(Error::Format(format!("{what}: color must be RGB or RGBA, found {other:?}"))),
    };
    let pixels = p.data.chunks_exact(channels).map(|c| [c[0], c[1], c[2]]).collect();
    ColorImage::new(p.width, p.height, pixels)
}

fn depth_from_decoded(p: DecodedPng, what: &str, k: &CameraIntrinsics) -> Result<DepthImage> {
    if p.color != ColorType::Grayscale {
        return Err(Error::Format(format!(
            "{what}: depth must be single-channel grayscale, found {:?}",
            p.color
        )));
    }
    if p.depth != BitDepth::Sixteen {
        return Err(Error::Format(format!("{what}: depth must be 16-bit, found {:?}", p.depth)));
    }
    if (p.width, p.height) != (k.width, k.height) {
        return Err(Error::dims("depth image vs intrinsics", (k.width, k.height), (p.width, p.height)));
    }
    let samples = p.data.chunks_exact(2).map(|b| u16::from_be_bytes([b[0], b[1]])).collect();
    DepthImage::new(p.width, p.height, samples, k.depth_scale)
}

pub fn load_color(path: impl AsRef<Path>) -> Result<ColorImage> {
    let path = path.as_ref();
    color_from_decoded(decode_png_file(path)?, &path.display().to_string())
}

pub fn decode_color(bytes: &[u8]) -> Result<ColorImage> {
    color_from_decoded(decode_png_bytes(bytes, "color")?, "color")
}

pub fn load_depth(path: impl AsRef<Path>, k: &CameraIntrinsics) -> Result<DepthImage> {
    let path = path.as_ref();
    depth_from_decoded(decode_png_file(path)?, &path.display().to_string(), k)
}

pub fn decode_depth(bytes: &[u8], k: &CameraIntrinsics) -> Result<DepthImage> {
    depth_from_decoded(decode_png_bytes(bytes, "depth")?, "depth", k)
}

/// Checks the pair shares one resolution.
pub fn validate_alignment(c: &ColorImage, d: &DepthImage) -> Result<()> {
    if c.dims() != d.dims() {
        return Err(Error::dims("color vs depth", c.dims(), d.dims()));
    }
    Ok(())
}
