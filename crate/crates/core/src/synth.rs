//! Analytic RGB-D scenes with exact ground truth.
//!
//! One object (a fronto-parallel rectangle or a sphere) in front of a
//! fronto-parallel background plane. Membership and depth are closed-form per
//! pixel, so the only error sources are the pixel grid and rounding depth to
//! whole stored units (±0.5·depth_scale), plus optional uniform jitter.

use std::fs;
use std::path::Path;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cloud::write_atomic;
use crate::error::{Error, Result};
use crate::geometry::{CameraIntrinsics, DepthModel, Point3};
use crate::masks::{InstanceMask, ManifestEntry, MaskGrid, MaskManifest};
use crate::rgbd_io::{ColorImage, DepthImage, Rgb};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxFaceSpec {
    pub width_mm: f64,
    pub height_mm: f64,
    pub center_depth_mm: f64,
    pub offset_x_mm: f64,
    pub offset_y_mm: f64,
    pub color: Rgb,
    pub class_name: String,
}

impl BoxFaceSpec {
    /// Centered on the optical axis.
    pub fn centered(width_mm: f64, height_mm: f64, center_depth_mm: f64) -> Self {
        BoxFaceSpec {
            width_mm,
            height_mm,
            center_depth_mm,
            offset_x_mm: 0.0,
            offset_y_mm: 0.0,
            color: [200, 60, 40],
            class_name: "box".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereSpec {
    pub center: Point3,
    pub radius_mm: f64,
    pub color: Rgb,
    pub class_name: String,
}

impl SphereSpec {
    pub fn new(center: Point3, radius_mm: f64) -> Self {
        SphereSpec {
            center,
            radius_mm,
            color: [40, 120, 220],
            class_name: "sphere".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthOptions {
    /// Planar z of the background plane.
    pub background_depth_mm: f64,
    /// Convention the stored depth is encoded in.
    pub depth_model: DepthModel,
    /// Uniform depth noise amplitude (±mm); 0 disables.
    pub jitter_mm: f64,
    pub seed: u64,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            background_depth_mm: 2500.0,
            depth_model: DepthModel::PlanarZ,
            jitter_mm: 0.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthObject {
    pub id: u32,
    pub class_name: String,
    pub width_mm: f64,
    pub height_mm: f64,
    pub center_depth_mm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub objects: Vec<GroundTruthObject>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthScene {
    pub intrinsics: CameraIntrinsics,
    pub color: ColorImage,
    pub depth: DepthImage,
    pub manifest: MaskManifest,
    pub masks: Vec<InstanceMask>,
    pub ground_truth: GroundTruth,
}

fn background_color(col: usize, row: usize, k: &CameraIntrinsics) -> Rgb {
    [
        (col * 255 / k.width.max(2).saturating_sub(1).max(1)) as u8,
        (row * 255 / k.height.max(2).saturating_sub(1).max(1)) as u8,
        96,
    ]
}

struct Jitter {
    amp: f64,
    rng: ChaCha8Rng,
}

impl Jitter {
    fn new(amp: f64, seed: u64) -> Self {
        Jitter {
            amp,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn sample(&mut self) -> f64 {
        if self.amp == 0.0 {
            return 0.0;
        }
        let unit = (self.rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        (2.0 * unit - 1.0) * self.amp
    }
}

fn encode_depth(d_mm: f64, scale: f64) -> Result<u16> {
    let v = (d_mm / scale).round();
    if !(1.0..=f64::from(u16::MAX)).contains(&v) {
        return Err(Error::InvalidSpec(format!(
            "depth {d_mm} mm not representable in 16 bits at depth_scale {scale}"
        )));
    }
    Ok(v as u16)
}

fn check_options(o: &SynthOptions) -> Result<()> {
    if !(o.background_depth_mm.is_finite() && o.background_depth_mm > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "background depth must be positive, got {}",
            o.background_depth_mm
        )));
    }
    if !(o.jitter_mm.is_finite() && o.jitter_mm >= 0.0) {
        return Err(Error::InvalidSpec(format!("jitter must be >= 0, got {}", o.jitter_mm)));
    }
    Ok(())
}

/// Shared rasterizer: `hit(col, row)` gives the object's planar z when the
/// pixel sees the object.
fn rasterize(
    k: &CameraIntrinsics,
    opts: &SynthOptions,
    object_color: Rgb,
    mut hit: impl FnMut(usize, usize) -> Option<f64>,
) -> Result<(ColorImage, DepthImage, MaskGrid)> {
    let n = k.width * k.height;
    let mut pixels = Vec::with_capacity(n);
    let mut samples = Vec::with_capacity(n);
    let mut mask = MaskGrid::new(k.width, k.height);
    let mut jitter = Jitter::new(opts.jitter_mm, opts.seed);
    for row in 0..k.height {
        for col in 0..k.width {
            let (nu, nv) = k.normalized(col, row);
            let ratio = opts.depth_model.depth_per_z(nu, nv);
            let z = match hit(col, row) {
                Some(z) => {
                    mask.set(col, row, true);
                    pixels.push(object_color);
                    z
                }
                None => {
                    pixels.push(background_color(col, row, k));
                    opts.background_depth_mm
                }
            };
            samples.push(encode_depth(z * ratio + jitter.sample(), k.depth_scale)?);
        }
    }
    if mask.count() == 0 {
        return Err(Error::OutOfFrustum("object covers no pixel center".into()));
    }
    Ok((
        ColorImage::new(k.width, k.height, pixels)?,
        DepthImage::new(k.width, k.height, samples, k.depth_scale)?,
        mask,
    ))
}

fn single_object_scene(
    k: &CameraIntrinsics,
    color: ColorImage,
    depth: DepthImage,
    mask: MaskGrid,
    truth: GroundTruthObject,
) -> SynthScene {
    let manifest = MaskManifest {
        color_image: "color.png".into(),
        instances: vec![ManifestEntry {
            id: truth.id,
            class_name: truth.class_name.clone(),
            score: 1.0,
            mask_file: format!("mask_{}.png", truth.id),
        }],
    };
    let masks = vec![InstanceMask {
        id: truth.id,
        class_name: truth.class_name.clone(),
        score: 1.0,
        bitmap: mask,
    }];
    SynthScene {
        intrinsics: *k,
        color,
        depth,
        manifest,
        masks,
        ground_truth: GroundTruth { objects: vec![truth] },
    }
}

fn outside(lo: f64, hi: f64, limit: usize) -> bool {
    lo < 0.0 || hi > (limit - 1) as f64
}

/// Renders a fronto-parallel rectangle. A pixel belongs to the face when its
/// ray, cut at the face's depth, lands inside the rectangle (edges inclusive).
pub fn render_box(spec: &BoxFaceSpec, k: &CameraIntrinsics, opts: &SynthOptions) -> Result<SynthScene> {
    k.validate()?;
    check_options(opts)?;
    let z = spec.center_depth_mm;
    for (name, v) in [("width", spec.width_mm), ("height", spec.height_mm), ("center depth", z)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidSpec(format!("{name} must be positive, got {v}")));
        }
    }
    if !(opts.background_depth_mm > z) {
        return Err(Error::InvalidSpec(format!(
            "background at {} mm is not behind the face at {z} mm",
            opts.background_depth_mm
        )));
    }
    let (hw, hh) = (spec.width_mm / 2.0, spec.height_mm / 2.0);
    let left = k.cx + (spec.offset_x_mm - hw) * k.fx / z;
    let right = k.cx + (spec.offset_x_mm + hw) * k.fx / z;
    let top = k.cy + (spec.offset_y_mm - hh) * k.fy / z;
    let bottom = k.cy + (spec.offset_y_mm + hh) * k.fy / z;
    if outside(left, right, k.width) || outside(top, bottom, k.height) {
        return Err(Error::OutOfFrustum(format!(
            "face spans columns {left:.1}..{right:.1}, rows {top:.1}..{bottom:.1} of a {}x{} image",
            k.width, k.height
        )));
    }

    const EPS: f64 = 1e-9;
    let (color, depth, mask) = rasterize(k, opts, spec.color, |col, row| {
        let (nu, nv) = k.normalized(col, row);
        let inside = (nu * z - spec.offset_x_mm).abs() <= hw + EPS && (nv * z - spec.offset_y_mm).abs() <= hh + EPS;
        inside.then_some(z)
    })?;
    let truth = GroundTruthObject {
        id: 1,
        class_name: spec.class_name.clone(),
        width_mm: spec.width_mm,
        height_mm: spec.height_mm,
        center_depth_mm: z,
    };
    Ok(single_object_scene(k, color, depth, mask, truth))
}

/// Nearest ray parameter where the ray `t * (nu, nv, 1)` meets the sphere;
/// the parameter equals the hit point's planar z.
pub fn ray_sphere_z(nu: f64, nv: f64, center: &Point3, radius: f64) -> Option<f64> {
    let rr = nu * nu + nv * nv + 1.0;
    let rc = nu * center.x + nv * center.y + center.z;
    let cc = center.x * center.x + center.y * center.y + center.z * center.z;
    let disc = rc * rc - rr * (cc - radius * radius);
    if disc < 0.0 {
        return None;
    }
    let t = (rc - disc.sqrt()) / rr;
    (t > 0.0).then_some(t)
}

/// Renders a sphere by analytic ray casting.
pub fn render_sphere(spec: &SphereSpec, k: &CameraIntrinsics, opts: &SynthOptions) -> Result<SynthScene> {
    k.validate()?;
    check_options(opts)?;
    let c = spec.center;
    let r = spec.radius_mm;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidSpec(format!("radius must be positive, got {r}")));
    }
    if !(c.z > r) {
        return Err(Error::OutOfFrustum(format!("sphere reaches behind the camera (z={} r={r})", c.z)));
    }
    if !(c.z + r < opts.background_depth_mm) {
        return Err(Error::InvalidSpec(format!(
            "sphere extends to {} mm, not in front of the background at {} mm",
            c.z + r,
            opts.background_depth_mm
        )));
    }
    // Conservative image-space bound: silhouette lies within (c ± r) / (c.z - r).
    let near = c.z - r;
    let (left, right) = (k.cx + (c.x - r) * k.fx / near, k.cx + (c.x + r) * k.fx / near);
    let (top, bottom) = (k.cy + (c.y - r) * k.fy / near, k.cy + (c.y + r) * k.fy / near);
    if outside(left, right, k.width) || outside(top, bottom, k.height) {
        return Err(Error::OutOfFrustum(format!(
            "sphere silhouette may leave the {}x{} image",
            k.width, k.height
        )));
    }
    let (color, depth, mask) = rasterize(k, opts, spec.color, |col, row| {
        let (nu, nv) = k.normalized(col, row);
        ray_sphere_z(nu, nv, &c, r)
    })?;
    let truth = GroundTruthObject {
        id: 1,
        class_name: spec.class_name.clone(),
        width_mm: 2.0 * r,
        height_mm: 2.0 * r,
        center_depth_mm: c.z,
    };
    Ok(single_object_scene(k, color, depth, mask, truth))
}

fn json_bytes<T: Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

/// Writes the scene in the interchange layout: `color.png`, `depth.png`,
/// `intrinsics.json`, `manifest.json`, `mask_<id>.png`, `ground_truth.json`.
pub fn write_scene(s: &SynthScene, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_atomic(&dir.join("color.png"), &s.color.encode_png())?;
    write_atomic(&dir.join("depth.png"), &s.depth.encode_png())?;
    write_atomic(&dir.join("intrinsics.json"), &json_bytes(&s.intrinsics))?;
    for (entry, m) in s.manifest.instances.iter().zip(&s.masks) {
        write_atomic(&dir.join(&entry.mask_file), &m.bitmap.encode_png())?;
    }
    write_atomic(&dir.join("manifest.json"), &json_bytes(&s.manifest))?;
    write_atomic(&dir.join("ground_truth.json"), &json_bytes(&s.ground_truth))?;
    Ok(())
}
