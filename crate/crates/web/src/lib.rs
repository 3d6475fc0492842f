//! Browser bindings for the interactive demo page in `www/`.
//!
//! Each exported function is a thin wrapper over a plain Rust function that
//! returns `Result<_, String>`, so the logic is testable on the host.

use rgbd_lift::cloud::{measure_extent, Axis};
use rgbd_lift::synth::ray_sphere_z;
use rgbd_lift::{
    back_project, lift_scene, render_box, render_sphere, BandConfig, BoxFaceSpec, CameraIntrinsics, DepthModel,
    LiftConfig, PixelCoord, Point3, SphereSpec, SynthOptions,
};
use wasm_bindgen::prelude::*;

const WIDTH: usize = 320;
const HEIGHT: usize = 240;

fn camera(fx: f64) -> Result<CameraIntrinsics, String> {
    CameraIntrinsics::new(fx, fx, (WIDTH / 2) as f64, (HEIGHT / 2) as f64, WIDTH, HEIGHT).map_err(|e| e.to_string())
}

/// `[planar x, y, z, ray x, y, z]` for one pixel and depth.
pub fn compare_models(col: usize, row: usize, depth_mm: f64, fx: f64, fy: f64) -> Result<Vec<f64>, String> {
    let k = CameraIntrinsics::new(fx, fy, (WIDTH / 2) as f64, (HEIGHT / 2) as f64, WIDTH, HEIGHT)
        .map_err(|e| e.to_string())?;
    let px = PixelCoord::new(col, row);
    let a = back_project(px, depth_mm, &k, DepthModel::PlanarZ).map_err(|e| e.to_string())?;
    let b = back_project(px, depth_mm, &k, DepthModel::RayDistance).map_err(|e| e.to_string())?;
    Ok(vec![a.x, a.y, a.z, b.x, b.y, b.z])
}

/// Result of rendering, lifting and measuring one synthetic box.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct BoxReport {
    width_mm: f64,
    height_mm: f64,
    kept: usize,
    dropped_by_band: usize,
    rgba: Vec<u8>,
}

#[wasm_bindgen]
impl BoxReport {
    #[wasm_bindgen(getter)]
    pub fn width_mm(&self) -> f64 {
        self.width_mm
    }
    #[wasm_bindgen(getter)]
    pub fn height_mm(&self) -> f64 {
        self.height_mm
    }
    #[wasm_bindgen(getter)]
    pub fn kept(&self) -> usize {
        self.kept
    }
    #[wasm_bindgen(getter)]
    pub fn dropped_by_band(&self) -> usize {
        self.dropped_by_band
    }
    /// `WIDTH x HEIGHT` RGBA: kept pixels in the object color, band-rejected
    /// mask pixels red, everything else dimmed.
    pub fn rgba(&self) -> Vec<u8> {
        self.rgba.clone()
    }
}

/// Renders a box, grows its mask by `dilate_px` onto the background, lifts
/// with the given band and measures the instance cloud.
#[allow(clippy::too_many_arguments)]
pub fn box_report(
    width_mm: f64,
    height_mm: f64,
    depth_mm: f64,
    fx: f64,
    jitter_mm: f64,
    dilate_px: usize,
    half_width_mm: f64,
    trim: f64,
) -> Result<BoxReport, String> {
    let k = camera(fx)?;
    let opts = SynthOptions {
        jitter_mm,
        seed: 1,
        ..SynthOptions::default()
    };
    let mut scene = render_box(&BoxFaceSpec::centered(width_mm, height_mm, depth_mm), &k, &opts)
        .map_err(|e| e.to_string())?;
    let face = scene.masks[0].bitmap.clone();
    let r = dilate_px;
    scene.masks[0].bitmap = rgbd_lift::MaskGrid::from_fn(WIDTH, HEIGHT, |c, row| {
        let (c0, c1) = (c.saturating_sub(r), (c + r).min(WIDTH - 1));
        let (r0, r1) = (row.saturating_sub(r), (row + r).min(HEIGHT - 1));
        (r0..=r1).any(|rr| (c0..=c1).any(|cc| face.get(cc, rr)))
    });
    let cfg = LiftConfig {
        band: Some(BandConfig {
            half_width_mm,
            ..BandConfig::default()
        }),
        ..LiftConfig::default()
    };
    let seg = lift_scene(&scene.color, &scene.depth, &scene.masks, &k, &cfg).map_err(|e| e.to_string())?;
    let inst = &seg.instances[0];
    let pc = inst.cloud.as_ref().ok_or("instance has no valid depth")?;
    let w = measure_extent(pc, Axis::X, trim).map_err(|e| e.to_string())?;
    let h = measure_extent(pc, Axis::Y, trim).map_err(|e| e.to_string())?;
    let band = inst.band.ok_or("band missing")?;

    let mut rgba = Vec::with_capacity(WIDTH * HEIGHT * 4);
    for row in 0..HEIGHT {
        for col in 0..WIDTH {
            let c = scene.color.get(col, row);
            let masked = scene.masks[0].bitmap.get(col, row);
            let kept = masked && scene.depth.depth_mm(col, row).is_some_and(|z| band.contains(z));
            let px = match (masked, kept) {
                (true, true) => [c[0], c[1], c[2]],
                (true, false) => [255, 0, 0],
                _ => [c[0] / 3, c[1] / 3, c[2] / 3],
            };
            rgba.extend_from_slice(&[px[0], px[1], px[2], 255]);
        }
    }
    Ok(BoxReport {
        width_mm: w.extent,
        height_mm: h.extent,
        kept: inst.stats.kept,
        dropped_by_band: inst.stats.dropped_by_band,
        rgba,
    })
}

/// Sphere encoded with one depth convention, reconstructed with each model.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct SphereReport {
    max_residual_ray: f64,
    max_residual_planar: f64,
    heatmap: Vec<u8>,
}

#[wasm_bindgen]
impl SphereReport {
    #[wasm_bindgen(getter)]
    pub fn max_residual_ray(&self) -> f64 {
        self.max_residual_ray
    }
    #[wasm_bindgen(getter)]
    pub fn max_residual_planar(&self) -> f64 {
        self.max_residual_planar
    }
    /// RGBA heat map of the PlanarZ-reconstruction radial residual.
    pub fn heatmap(&self) -> Vec<u8> {
        self.heatmap.clone()
    }
}

pub fn sphere_report(center_x_mm: f64, center_z_mm: f64, radius_mm: f64, fx: f64) -> Result<SphereReport, String> {
    let k = camera(fx)?;
    let center = Point3::new(center_x_mm, 0.0, center_z_mm);
    let opts = SynthOptions {
        depth_model: DepthModel::RayDistance,
        background_depth_mm: (center_z_mm + radius_mm) * 1.5,
        ..SynthOptions::default()
    };
    let scene = render_sphere(&SphereSpec::new(center, radius_mm), &k, &opts).map_err(|e| e.to_string())?;
    let mask = &scene.masks[0].bitmap;
    let mut res_ray: f64 = 0.0;
    let mut res_planar = vec![0.0f64; WIDTH * HEIGHT];
    for row in 0..HEIGHT {
        for col in 0..WIDTH {
            if !mask.get(col, row) {
                continue;
            }
            let Some(d) = scene.depth.depth_mm(col, row) else { continue };
            let px = PixelCoord::new(col, row);
            let r = back_project(px, d, &k, DepthModel::RayDistance).map_err(|e| e.to_string())?;
            let p = back_project(px, d, &k, DepthModel::PlanarZ).map_err(|e| e.to_string())?;
            res_ray = res_ray.max((r.distance(&center) - radius_mm).abs());
            res_planar[row * WIDTH + col] = (p.distance(&center) - radius_mm).abs();
        }
    }
    let max_planar = res_planar.iter().copied().fold(0.0, f64::max);
    let mut heatmap = Vec::with_capacity(WIDTH * HEIGHT * 4);
    for (i, &v) in res_planar.iter().enumerate() {
        if mask.bits()[i] {
            let t = if max_planar > 0.0 { v / max_planar } else { 0.0 };
            heatmap.extend_from_slice(&[(255.0 * t) as u8, 40, (255.0 * (1.0 - t)) as u8, 255]);
        } else {
            heatmap.extend_from_slice(&[16, 16, 16, 255]);
        }
    }
    Ok(SphereReport {
        max_residual_ray: res_ray,
        max_residual_planar: max_planar,
        heatmap,
    })
}

#[wasm_bindgen(js_name = compareModels)]
pub fn compare_models_js(col: usize, row: usize, depth_mm: f64, fx: f64, fy: f64) -> Result<Vec<f64>, JsError> {
    compare_models(col, row, depth_mm, fx, fy).map_err(|e| JsError::new(&e))
}

#[allow(clippy::too_many_arguments)]
#[wasm_bindgen(js_name = boxReport)]
pub fn box_report_js(
    width_mm: f64,
    height_mm: f64,
    depth_mm: f64,
    fx: f64,
    jitter_mm: f64,
    dilate_px: usize,
    half_width_mm: f64,
    trim: f64,
) -> Result<BoxReport, JsError> {
    box_report(width_mm, height_mm, depth_mm, fx, jitter_mm, dilate_px, half_width_mm, trim).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sphereReport)]
pub fn sphere_report_js(center_x_mm: f64, center_z_mm: f64, radius_mm: f64, fx: f64) -> Result<SphereReport, JsError> {
    sphere_report(center_x_mm, center_z_mm, radius_mm, fx).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = frameSize)]
pub fn frame_size() -> Vec<u32> {
    vec![WIDTH as u32, HEIGHT as u32]
}

// Keeps the sphere intersection reachable from the page for hover readouts.
#[wasm_bindgen(js_name = sphereDepthAt)]
pub fn sphere_depth_at(col: usize, row: usize, center_x_mm: f64, center_z_mm: f64, radius_mm: f64, fx: f64) -> f64 {
    let Ok(k) = camera(fx) else { return f64::NAN };
    let (nu, nv) = k.normalized(col, row);
    ray_sphere_z(nu, nv, &Point3::new(center_x_mm, 0.0, center_z_mm), radius_mm).unwrap_or(f64::NAN)
}
