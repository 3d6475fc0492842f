//! Pinhole camera math.
//!
//! Pixel `(col, row)` maps to image-plane offsets `u = col - cx`, `v = row - cy`
//! (integer pixel positions, no half-pixel shift). Depth comes in one of two
//! conventions, see [`DepthModel`]. All lengths are millimeters.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_depth_scale() -> f64 {
    1.0
}

/// Pinhole intrinsics plus the depth unit of the sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: usize,
    pub height: usize,
    /// Millimeters per stored depth unit.
    #[serde(default = "default_depth_scale")]
    pub depth_scale: f64,
}

impl CameraIntrinsics {
    /// Builds and validates intrinsics with `depth_scale = 1.0`.
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64, width: usize, height: usize) -> Result<Self> {
        Self::with_depth_scale(fx, fy, cx, cy, width, height, 1.0)
    }

    pub fn with_depth_scale(
        fx: f64,
        fy: f64,
        cx: f64,
        cy: f64,
        width: usize,
        height: usize,
        depth_scale: f64,
    ) -> Result<Self> {
        let k = CameraIntrinsics {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
            depth_scale,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidIntrinsics(msg));
        if !(self.fx.is_finite() && self.fx > 0.0 && self.fy.is_finite() && self.fy > 0.0) {
            return bad(format!("focal lengths must be positive, got fx={} fy={}", self.fx, self.fy));
        }
        if self.width == 0 || self.height == 0 {
            return bad(format!("image size must be non-zero, got {}x{}", self.width, self.height));
        }
        if !(self.depth_scale.is_finite() && self.depth_scale > 0.0) {
            return bad(format!("depth_scale must be positive, got {}", self.depth_scale));
        }
        if !(self.cx >= 0.0 && self.cx < self.width as f64) {
            return bad(format!("cx={} outside [0, {})", self.cx, self.width));
        }
        if !(self.cy >= 0.0 && self.cy < self.height as f64) {
            return bad(format!("cy={} outside [0, {})", self.cy, self.height));
        }
        Ok(())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let k: CameraIntrinsics =
            serde_json::from_str(s).map_err(|e| Error::Schema(format!("intrinsics: {e}")))?;
        k.validate()?;
        Ok(k)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let s = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&s)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("intrinsics serialize")
    }

    pub fn contains(&self, p: PixelCoord) -> bool {
        p.col < self.width && p.row < self.height
    }

    /// Normalized image-plane offsets `(u/fx, v/fy)` of a pixel.
    #[inline]
    pub fn normalized(&self, col: usize, row: usize) -> (f64, f64) {
        ((col as f64 - self.cx) / self.fx, (row as f64 - self.cy) / self.fy)
    }
}

/// Integer pixel position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PixelCoord {
    pub col: usize,
    pub row: usize,
}

impl PixelCoord {
    pub const fn new(col: usize, row: usize) -> Self {
        PixelCoord { col, row }
    }
}

/// Camera-frame point in millimeters (x right, y down, z forward).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn scaled(&self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// What a depth sample measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthModel {
    /// Distance along the optical axis (what RealSense-style sensors report).
    #[default]
    PlanarZ,
    /// Euclidean distance along the viewing ray; z is recovered with the
    /// `sqrt(1 + (u/fx)^2 + (v/fy)^2)` correction.
    RayDistance,
}

impl DepthModel {
    /// Ratio `d / z` for a pixel with normalized offsets `(nu, nv)`.
    #[inline]
    pub fn depth_per_z(self, nu: f64, nv: f64) -> f64 {
        match self {
            DepthModel::PlanarZ => 1.0,
            DepthModel::RayDistance => (1.0 + nu * nu + nv * nv).sqrt(),
        }
    }
}

/// Real-valued projection of a 3D point: sub-pixel position and the depth
/// the sensor would report under the chosen model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImagePoint {
    pub col: f64,
    pub row: f64,
    pub depth: f64,
}

/// Back-projects pixel `p` with depth `d` (millimeters) into the camera frame.
pub fn back_project(p: PixelCoord, d: f64, k: &CameraIntrinsics, m: DepthModel) -> Result<Point3> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidDepth);
    }
    if !k.contains(p) {
        return Err(Error::OutOfBounds {
            col: p.col as i64,
            row: p.row as i64,
            width: k.width,
            height: k.height,
        });
    }
    Ok(back_project_unchecked(p.col, p.row, d, k, m))
}

/// Back-projection without validation; `d > 0` and in-bounds pixel assumed.
#[inline]
pub(crate) fn back_project_unchecked(col: usize, row: usize, d: f64, k: &CameraIntrinsics, m: DepthModel) -> Point3 {
    let u = col as f64 - k.cx;
    let v = row as f64 - k.cy;
    let z = match m {
        DepthModel::PlanarZ => d,
        DepthModel::RayDistance => {
            let (nu, nv) = (u / k.fx, v / k.fy);
            d / (1.0 + nu * nu + nv * nv).sqrt()
        }
    };
    Point3::new(u * z / k.fx, v * z / k.fy, z)
}

/// Exact inverse of [`back_project`] for real-valued pixel positions.
pub fn project(pt: Point3, k: &CameraIntrinsics, m: DepthModel) -> Result<ImagePoint> {
    if !(pt.z > 0.0) {
        return Err(Error::NonPositiveZ(pt.z));
    }
    let nu = pt.x / pt.z;
    let nv = pt.y / pt.z;
    let col = nu * k.fx + k.cx;
    let row = nv * k.fy + k.cy;
    let depth = pt.z * m.depth_per_z(nu, nv);
    Ok(ImagePoint { col, row, depth })
}

/// [`back_project`] for a real-valued pixel position, used to close the
/// round trip with [`project`] without rounding to the pixel grid.
pub fn back_project_subpixel(col: f64, row: f64, d: f64, k: &CameraIntrinsics, m: DepthModel) -> Result<Point3> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidDepth);
    }
    let u = col - k.cx;
    let v = row - k.cy;
    let z = d / m.depth_per_z(u / k.fx, v / k.fy);
    Ok(Point3::new(u * z / k.fx, v * z / k.fy, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vga() -> CameraIntrinsics {
        CameraIntrinsics::new(500.0, 500.0, 320.0, 240.0, 640, 480).unwrap()
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn principal_point_maps_to_axis_for_both_models() {
        let k = vga();
        for m in [DepthModel::PlanarZ, DepthModel::RayDistance] {
            let p = back_project(PixelCoord::new(320, 240), 1000.0, &k, m).unwrap();
            assert_eq!(p, Point3::new(0.0, 0.0, 1000.0));
        }
    }

    #[test]
    fn planar_exact_case() {
        let p = back_project(PixelCoord::new(420, 240), 1020.0, &vga(), DepthModel::PlanarZ).unwrap();
        assert_eq!(p, Point3::new(204.0, 0.0, 1020.0));
    }

    #[test]
    fn ray_distance_case_matches_high_precision_value() {
        // 1020 / sqrt(1.04) evaluated at 40 significant digits.
        let z_ref = 1000.192289204738562813228575231391851799_f64;
        let x_ref = 200.0384578409477125626457150462783703598_f64;
        let p = back_project(PixelCoord::new(420, 240), 1020.0, &vga(), DepthModel::RayDistance).unwrap();
        assert!(rel_close(p.z, z_ref, 1e-6), "z = {}", p.z);
        assert!(rel_close(p.x, x_ref, 1e-6), "x = {}", p.x);
        assert_eq!(p.y, 0.0);
    }

    #[test]
    fn zero_depth_is_invalid() {
        let err = back_project(PixelCoord::new(1, 1), 0.0, &vga(), DepthModel::PlanarZ).unwrap_err();
        assert!(matches!(err, Error::InvalidDepth));
    }

    #[test]
    fn out_of_bounds_pixel_rejected() {
        let err = back_project(PixelCoord::new(640, 0), 10.0, &vga(), DepthModel::PlanarZ).unwrap_err();
        assert!(matches!(err, Error::OutOfBounds { col: 640, .. }));
        let err = back_project(PixelCoord::new(0, 480), 10.0, &vga(), DepthModel::PlanarZ).unwrap_err();
        assert!(matches!(err, Error::OutOfBounds { row: 480, .. }));
    }

    #[test]
    fn project_on_axis_and_exact_inverse() {
        let k = vga();
        for m in [DepthModel::PlanarZ, DepthModel::RayDistance] {
            let ip = project(Point3::new(0.0, 0.0, 1000.0), &k, m).unwrap();
            assert_eq!((ip.col, ip.row, ip.depth), (320.0, 240.0, 1000.0));
        }
        let ip = project(Point3::new(204.0, 0.0, 1020.0), &k, DepthModel::PlanarZ).unwrap();
        assert_eq!((ip.col, ip.row, ip.depth), (420.0, 240.0, 1020.0));
    }

    #[test]
    fn project_rejects_non_positive_z() {
        assert!(matches!(
            project(Point3::new(1.0, 1.0, 0.0), &vga(), DepthModel::PlanarZ),
            Err(Error::NonPositiveZ(_))
        ));
        assert!(matches!(
            project(Point3::new(1.0, 1.0, -5.0), &vga(), DepthModel::RayDistance),
            Err(Error::NonPositiveZ(_))
        ));
    }

    #[test]
    fn intrinsics_json_rejects_unknown_keys_and_bad_values() {
        let ok = r#"{"fx":600,"fy":600,"cx":320,"cy":240,"width":640,"height":480,"depth_scale":0.25}"#;
        let k = CameraIntrinsics::from_json_str(ok).unwrap();
        assert_eq!(k.depth_scale, 0.25);
        let no_scale = r#"{"fx":600,"fy":600,"cx":320,"cy":240,"width":640,"height":480}"#;
        assert_eq!(CameraIntrinsics::from_json_str(no_scale).unwrap().depth_scale, 1.0);
        let unknown = r#"{"fx":600,"fy":600,"cx":320,"cy":240,"width":640,"height":480,"k1":0.1}"#;
        assert!(matches!(CameraIntrinsics::from_json_str(unknown), Err(Error::Schema(_))));
        let bad_cx = r#"{"fx":600,"fy":600,"cx":640,"cy":240,"width":640,"height":480}"#;
        assert!(matches!(CameraIntrinsics::from_json_str(bad_cx), Err(Error::InvalidIntrinsics(_))));
        let bad_fx = r#"{"fx":0,"fy":600,"cx":320,"cy":240,"width":640,"height":480}"#;
        assert!(matches!(CameraIntrinsics::from_json_str(bad_fx), Err(Error::InvalidIntrinsics(_))));
    }

    fn model() -> impl Strategy<Value = DepthModel> {
        prop_oneof![Just(DepthModel::PlanarZ), Just(DepthModel::RayDistance)]
    }

    proptest! {
        #[test]
        fn round_trip_through_projection(
            x in -2000.0f64..2000.0, y in -2000.0f64..2000.0, z in 200.0f64..5000.0, m in model()
        ) {
            let k = vga();
            let pt = Point3::new(x, y, z);
            let ip = project(pt, &k, m).unwrap();
            let back = back_project_subpixel(ip.col, ip.row, ip.depth, &k, m).unwrap();
            let scale = pt.norm();
            prop_assert!(back.distance(&pt) <= 1e-9 * scale, "{:?} vs {:?}", back, pt);
        }

        #[test]
        fn ray_model_shrinks_off_axis(col in 0usize..640, row in 0usize..480, d in 1.0f64..10000.0) {
            prop_assume!(col != 320 || row != 240);
            let p = back_project(PixelCoord::new(col, row), d, &vga(), DepthModel::RayDistance).unwrap();
            prop_assert!(p.z < d);
            prop_assert!(p.z > 0.0);
        }

        #[test]
        fn back_projection_is_linear_in_depth(
            col in 0usize..640, row in 0usize..480, d in 1.0f64..10000.0, alpha in 0.01f64..10.0, m in model()
        ) {
            let k = vga();
            let a = back_project(PixelCoord::new(col, row), alpha * d, &k, m).unwrap();
            let b = back_project(PixelCoord::new(col, row), d, &k, m).unwrap().scaled(alpha);
            prop_assert!(a.distance(&b) <= 1e-12 * a.norm());
        }
    }
}
