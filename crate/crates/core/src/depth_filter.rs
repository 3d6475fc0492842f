//! Per-instance depth acceptance band.
//!
//! Masks from a 2D segmenter bleed onto the environment around an object's
//! silhouette. Those pixels carry the depth of whatever is behind the object,
//! so a band around the object's central depth separates them out.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::masks::{InstanceMask, MaskGrid};
use crate::rgbd_io::DepthImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterMode {
    #[default]
    Median,
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandConfig {
    pub center_mode: CenterMode,
    pub half_width_mm: f64,
}

impl Default for BandConfig {
    fn default() -> Self {
        BandConfig {
            center_mode: CenterMode::Median,
            half_width_mm: 300.0,
        }
    }
}

impl BandConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_width_mm.is_finite() && self.half_width_mm > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "band half-width must be positive, got {}",
                self.half_width_mm
            )));
        }
        Ok(())
    }
}

/// Inclusive depth interval `[lo, hi]` in millimeters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepthBand {
    pub center: f64,
    pub lo: f64,
    pub hi: f64,
}

impl DepthBand {
    pub fn around(center: f64, half_width: f64) -> Self {
        DepthBand {
            center,
            lo: center - half_width,
            hi: center + half_width,
        }
    }

    #[inline]
    pub fn contains(&self, depth_mm: f64) -> bool {
        self.lo <= depth_mm && depth_mm <= self.hi
    }
}

fn check_dims(d: &DepthImage, g: &MaskGrid) -> Result<()> {
    if d.dims() != g.dims() {
        return Err(Error::dims("mask vs depth", d.dims(), g.dims()));
    }
    Ok(())
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

pub(crate) fn band_for_grid(d: &DepthImage, g: &MaskGrid, cfg: &BandConfig) -> Result<DepthBand> {
    check_dims(d, g)?;
    cfg.validate()?;
    let mut depths: Vec<f64> = g
        .bits()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .filter_map(|(i, _)| d.mm_at(i))
        .collect();
    if depths.is_empty() {
        return Err(Error::NoValidDepth);
    }
    let center = match cfg.center_mode {
        CenterMode::Median => median(&mut depths),
        CenterMode::Mean => depths.iter().sum::<f64>() / depths.len() as f64,
    };
    Ok(DepthBand::around(center, cfg.half_width_mm))
}

/// Band centred on the median (or mean) of the mask's valid depths.
pub fn compute_band(d: &DepthImage, m: &InstanceMask, cfg: &BandConfig) -> Result<DepthBand> {
    band_for_grid(d, &m.bitmap, cfg)
}

/// Pixels that are masked, have valid depth, and fall inside the band.
pub fn apply_band(d: &DepthImage, m: &InstanceMask, b: &DepthBand) -> Result<MaskGrid> {
    check_dims(d, &m.bitmap)?;
    let mut out = MaskGrid::new(d.width, d.height);
    for (i, (o, &masked)) in out.bits_mut().iter_mut().zip(m.bitmap.bits()).enumerate() {
        *o = masked && d.mm_at(i).is_some_and(|z| b.contains(z));
    }
    Ok(out)
}
