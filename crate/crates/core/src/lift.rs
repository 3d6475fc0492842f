//! Lifting masked pixels into per-instance clouds plus a background cloud.
//!
//! Per instance, in manifest order: band from the instance's own masked
//! depths, band filter, overlap resolution, back-projection. Everything with
//! valid depth that no instance kept becomes background, so with
//! [`OverlapPolicy::FirstWins`] the clouds partition the valid-depth pixels.

use serde::{Deserialize, Serialize};

use crate::cloud::PointCloud;
use crate::depth_filter::{band_for_grid, BandConfig, DepthBand};
use crate::error::{Error, Result};
use crate::geometry::{back_project_unchecked, CameraIntrinsics, DepthModel};
use crate::masks::{InstanceMask, MaskGrid};
use crate::rgbd_io::{validate_alignment, ColorImage, DepthImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapPolicy {
    /// A pixel kept by an earlier instance is excluded from later ones.
    #[default]
    FirstWins,
    /// Overlapping pixels are emitted into every instance that keeps them.
    Duplicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftConfig {
    pub depth_model: DepthModel,
    /// `None` disables band filtering.
    pub band: Option<BandConfig>,
    pub emit_background: bool,
    pub overlap_policy: OverlapPolicy,
}

impl Default for LiftConfig {
    fn default() -> Self {
        LiftConfig {
            depth_model: DepthModel::PlanarZ,
            band: Some(BandConfig::default()),
            emit_background: true,
            overlap_policy: OverlapPolicy::FirstWins,
        }
    }
}

/// Where each masked pixel of an instance went.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct InstanceStats {
    pub masked: usize,
    pub kept: usize,
    pub dropped_by_band: usize,
    pub dropped_by_overlap: usize,
    pub invalid_depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftedInstance {
    pub id: u32,
    pub class_name: String,
    pub score: f64,
    /// `None` when the instance failed (see `error`).
    pub cloud: Option<PointCloud>,
    pub band: Option<DepthBand>,
    pub stats: InstanceStats,
    pub error: Option<String>,
}

impl LiftedInstance {
    pub fn failed(&self) -> bool {
        self.cloud.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSegmentation {
    pub instances: Vec<LiftedInstance>,
    pub background: Option<PointCloud>,
    pub background_points: usize,
}

fn check_frame(c: &ColorImage, d: &DepthImage, k: &CameraIntrinsics) -> Result<()> {
    validate_alignment(c, d)?;
    if d.dims() != (k.width, k.height) {
        return Err(Error::dims("depth vs intrinsics", (k.width, k.height), d.dims()));
    }
    Ok(())
}

fn check_mask(d: &DepthImage, m: &InstanceMask) -> Result<()> {
    if m.bitmap.dims() != d.dims() {
        return Err(Error::dims(format!("mask {}", m.id), d.dims(), m.bitmap.dims()));
    }
    Ok(())
}

/// Pixels of `g` passing the band (or every valid-depth pixel when disabled).
fn band_kept(d: &DepthImage, g: &MaskGrid, band: Option<&BandConfig>) -> Result<(MaskGrid, Option<DepthBand>)> {
    let b = match band {
        Some(cfg) => Some(band_for_grid(d, g, cfg)?),
        None => {
            if !g.bits().iter().enumerate().any(|(i, &m)| m && d.samples[i] != 0) {
                return Err(Error::NoValidDepth);
            }
            None
        }
    };
    let mut kept = MaskGrid::new(d.width, d.height);
    for (i, (o, &m)) in kept.bits_mut().iter_mut().zip(g.bits()).enumerate() {
        *o = m && d.mm_at(i).is_some_and(|z| b.as_ref().is_none_or(|b| b.contains(z)));
    }
    Ok((kept, b))
}

/// Back-projects every set pixel of `sel` in row-major order.
fn emit(c: &ColorImage, d: &DepthImage, sel: impl Fn(usize) -> bool, k: &CameraIntrinsics, m: DepthModel) -> PointCloud {
    let mut pc = PointCloud::new();
    for row in 0..d.height {
        for col in 0..d.width {
            let idx = row * d.width + col;
            if !sel(idx) {
                continue;
            }
            if let Some(z) = d.mm_at(idx) {
                pc.push(back_project_unchecked(col, row, z, k, m), c.pixels[idx]);
            }
        }
    }
    pc
}

/// Lifts one instance on its own (no overlap handling).
pub fn lift_instance(
    c: &ColorImage,
    d: &DepthImage,
    m: &InstanceMask,
    k: &CameraIntrinsics,
    cfg: &LiftConfig,
) -> Result<PointCloud> {
    check_frame(c, d, k)?;
    check_mask(d, m)?;
    let (kept, _) = band_kept(d, &m.bitmap, cfg.band.as_ref())?;
    Ok(emit(c, d, |i| kept.bits()[i], k, cfg.depth_model))
}

/// Lifts every valid-depth pixel outside `kept_union`. No band is applied.
pub fn lift_background(
    c: &ColorImage,
    d: &DepthImage,
    kept_union: &MaskGrid,
    k: &CameraIntrinsics,
    cfg: &LiftConfig,
) -> Result<PointCloud> {
    check_frame(c, d, k)?;
    if kept_union.dims() != d.dims() {
        return Err(Error::dims("kept union vs depth", d.dims(), kept_union.dims()));
    }
    Ok(emit(c, d, |i| !kept_union.bits()[i], k, cfg.depth_model))
}

/// Full scene: per-instance clouds in manifest order plus background.
///
/// A per-instance `NoValidDepth` is recorded on that instance and the scene
/// continues; dimension mismatches are fatal.
pub fn lift_scene(
    c: &ColorImage,
    d: &DepthImage,
    masks: &[InstanceMask],
    k: &CameraIntrinsics,
    cfg: &LiftConfig,
) -> Result<SceneSegmentation> {
    check_frame(c, d, k)?;
    for m in masks {
        check_mask(d, m)?;
    }
    if let Some(b) = &cfg.band {
        b.validate()?;
    }

    let mut claimed = MaskGrid::new(d.width, d.height);
    let mut instances = Vec::with_capacity(masks.len());
    for m in masks {
        let mut stats = InstanceStats::default();
        let mut result = LiftedInstance {
            id: m.id,
            class_name: m.class_name.clone(),
            score: m.score,
            cloud: None,
            band: None,
            stats,
            error: None,
        };
        let (band_ok, band) = match band_kept(d, &m.bitmap, cfg.band.as_ref()) {
            Ok((g, b)) => (Some(g), b),
            Err(Error::NoValidDepth) => (None, None),
            Err(e) => return Err(e),
        };
        let mut kept = MaskGrid::new(d.width, d.height);
        for (i, &masked) in m.bitmap.bits().iter().enumerate() {
            if !masked {
                continue;
            }
            stats.masked += 1;
            if d.samples[i] == 0 {
                stats.invalid_depth += 1;
            } else if cfg.overlap_policy == OverlapPolicy::FirstWins && claimed.bits()[i] {
                stats.dropped_by_overlap += 1;
            } else if !band_ok.as_ref().is_some_and(|g| g.bits()[i]) {
                stats.dropped_by_band += 1;
            } else {
                stats.kept += 1;
                kept.bits_mut()[i] = true;
            }
        }
        result.stats = stats;
        result.band = band;
        if band_ok.is_none() {
            result.error = Some(Error::NoValidDepth.to_string());
        } else {
            result.cloud = Some(emit(c, d, |i| kept.bits()[i], k, cfg.depth_model));
            claimed.or_assign(&kept)?;
        }
        instances.push(result);
    }

    let bg = lift_background(c, d, &claimed, k, cfg)?;
    let background_points = bg.len();
    Ok(SceneSegmentation {
        instances,
        background: cfg.emit_background.then_some(bg),
        background_points,
    })
}
