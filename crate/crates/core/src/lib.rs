//! Lifts 2D instance-segmentation masks on aligned RGB-D frames into
//! per-object 3D point clouds and a separated background cloud.
//!
//! Pipeline per frame:
//!
//! 1. [`rgbd_io`] loads the color/depth pair and [`geometry::CameraIntrinsics`].
//! 2. [`masks`] ingests the segmenter's manifest and Boolean masks.
//! 3. [`depth_filter`] drops masked pixels whose depth is far from the
//!    object's central depth.
//! 4. [`lift`] back-projects surviving pixels ([`geometry::back_project`]) and
//!    collects everything else with valid depth as background.
//! 5. [`cloud`] writes ASCII PLY and measures object extents.
//!
//! [`synth`] renders analytic scenes with known dimensions so the whole chain
//! can be checked without a sensor.

pub mod cloud;
pub mod depth_filter;
pub mod error;
pub mod geometry;
pub mod lift;
pub mod masks;
pub mod rgbd_io;
pub mod synth;

#[cfg(feature = "cli")]
pub mod cli;

pub use cloud::{export_ply, import_ply, measure_extent, Axis, ExtentReport, PointCloud, Units};
pub use depth_filter::{apply_band, compute_band, BandConfig, CenterMode, DepthBand};
pub use error::{Error, Result};
pub use geometry::{back_project, project, CameraIntrinsics, DepthModel, ImagePoint, PixelCoord, Point3};
pub use lift::{
    lift_background, lift_instance, lift_scene, InstanceStats, LiftConfig, LiftedInstance, OverlapPolicy,
    SceneSegmentation,
};
pub use masks::{find_contours, load_manifest, mask_union, region_pixels, Contour, InstanceMask, MaskGrid, MaskManifest};
pub use rgbd_io::{load_color, load_depth, validate_alignment, ColorImage, DepthImage, Rgb};
pub use synth::{render_box, render_sphere, write_scene, BoxFaceSpec, SphereSpec, SynthOptions, SynthScene};
