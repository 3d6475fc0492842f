//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or validation error (nothing written),
//! 3 scene written but at least one instance failed.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cloud::{export_ply, import_ply, measure_extent, write_atomic, Axis, Units};
use crate::depth_filter::{BandConfig, CenterMode, DepthBand};
use crate::error::{Error, Result};
use crate::geometry::{CameraIntrinsics, DepthModel, Point3};
use crate::lift::{lift_scene, InstanceStats, LiftConfig, OverlapPolicy};
use crate::masks::load_manifest;
use crate::rgbd_io::{load_color, load_depth, validate_alignment, Rgb};
use crate::synth::{render_box, render_sphere, write_scene, BoxFaceSpec, SphereSpec, SynthOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "rgbd-lift", version, about = "Lift instance masks on RGB-D frames into 3D point clouds")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lift every instance of one frame into PLY clouds plus background.
    Lift(LiftArgs),
    /// Print the trimmed extent of a PLY cloud along one axis.
    Measure(MeasureArgs),
    /// Render an analytic test scene.
    #[command(subcommand)]
    Synth(SynthCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Planar,
    Ray,
}

impl From<ModelArg> for DepthModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Planar => DepthModel::PlanarZ,
            ModelArg::Ray => DepthModel::RayDistance,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CenterArg {
    Median,
    Mean,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum UnitsArg {
    Mm,
    M,
}

impl From<UnitsArg> for Units {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::Mm => Units::Millimeters,
            UnitsArg::M => Units::Meters,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OverlapArg {
    FirstWins,
    Duplicate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AxisArg {
    X,
    Y,
    Z,
}

#[derive(Debug, Args)]
struct LiftArgs {
    /// Scene directory holding color.png, depth.png, intrinsics.json, manifest.json.
    #[arg(long, conflicts_with_all = ["color", "depth", "intrinsics", "masks"])]
    scene: Option<PathBuf>,
    #[arg(long, required_unless_present = "scene")]
    color: Option<PathBuf>,
    #[arg(long, required_unless_present = "scene")]
    depth: Option<PathBuf>,
    #[arg(long, required_unless_present = "scene")]
    intrinsics: Option<PathBuf>,
    /// Mask manifest JSON.
    #[arg(long, required_unless_present = "scene")]
    masks: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "planar")]
    depth_model: ModelArg,
    #[arg(long, value_enum, default_value = "median", conflicts_with = "no_band")]
    band_center: CenterArg,
    #[arg(long, default_value_t = 300.0, conflicts_with = "no_band")]
    band_halfwidth_mm: f64,
    #[arg(long)]
    no_band: bool,
    #[arg(long)]
    no_background: bool,
    #[arg(long, value_enum, default_value = "mm")]
    units: UnitsArg,
    #[arg(long, value_enum, default_value = "first-wins")]
    overlap: OverlapArg,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[arg(long)]
    cloud: PathBuf,
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// Fraction of points dropped from each tail.
    #[arg(long, default_value_t = 0.01)]
    trim: f64,
    /// Units the PLY coordinates are written in.
    #[arg(long, value_enum, default_value = "mm")]
    units: UnitsArg,
}

#[derive(Debug, Args)]
struct CameraArgs {
    #[arg(long, default_value_t = 600.0)]
    fx: f64,
    #[arg(long, default_value_t = 600.0)]
    fy: f64,
    /// Defaults to image-width / 2.
    #[arg(long)]
    cx: Option<f64>,
    /// Defaults to image-height / 2.
    #[arg(long)]
    cy: Option<f64>,
    #[arg(long, default_value_t = 640)]
    image_width: usize,
    #[arg(long, default_value_t = 480)]
    image_height: usize,
    #[arg(long, default_value_t = 1.0)]
    depth_scale: f64,
}

impl CameraArgs {
    fn intrinsics(&self) -> Result<CameraIntrinsics> {
        CameraIntrinsics::with_depth_scale(
            self.fx,
            self.fy,
            self.cx.unwrap_or((self.image_width / 2) as f64),
            self.cy.unwrap_or((self.image_height / 2) as f64),
            self.image_width,
            self.image_height,
            self.depth_scale,
        )
    }
}

#[derive(Debug, Args)]
struct SceneArgs {
    #[command(flatten)]
    camera: CameraArgs,
    /// Planar depth of the background wall.
    #[arg(long, default_value_t = 2500.0)]
    background_mm: f64,
    /// Depth convention used to encode depth.png.
    #[arg(long, value_enum, default_value = "planar")]
    depth_model: ModelArg,
    #[arg(long, default_value_t = 0.0)]
    jitter_mm: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    class_name: Option<String>,
    /// Object color as r,g,b.
    #[arg(long, value_parser = parse_rgb)]
    color: Option<Rgb>,
    #[arg(long)]
    out: PathBuf,
}

impl SceneArgs {
    fn options(&self) -> SynthOptions {
        SynthOptions {
            background_depth_mm: self.background_mm,
            depth_model: self.depth_model.into(),
            jitter_mm: self.jitter_mm,
            seed: self.seed,
        }
    }
}

fn parse_rgb(s: &str) -> std::result::Result<Rgb, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err("expected r,g,b".into());
    }
    let mut out = [0u8; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| format!("bad channel '{p}'"))?;
    }
    Ok(out)
}

#[derive(Debug, Subcommand)]
enum SynthCommand {
    /// Fronto-parallel rectangular face.
    Box {
        #[arg(long)]
        width_mm: f64,
        #[arg(long)]
        height_mm: f64,
        /// Planar depth of the face.
        #[arg(long)]
        depth_mm: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        offset_x_mm: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        offset_y_mm: f64,
        #[command(flatten)]
        scene: SceneArgs,
    },
    /// Sphere, useful for telling depth conventions apart.
    Sphere {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        center_x_mm: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        center_y_mm: f64,
        #[arg(long)]
        center_z_mm: f64,
        #[arg(long)]
        radius_mm: f64,
        #[command(flatten)]
        scene: SceneArgs,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let res = match cli.cmd {
        Command::Lift(a) => cmd_lift(&a),
        Command::Measure(a) => cmd_measure(&a),
        Command::Synth(s) => cmd_synth(s),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

#[derive(Serialize)]
struct ConfigEcho {
    depth_model: DepthModel,
    band: Option<BandConfig>,
    emit_background: bool,
    overlap_policy: OverlapPolicy,
    units: Units,
}

#[derive(Serialize)]
struct InstanceReport {
    id: u32,
    class_name: String,
    score: f64,
    status: &'static str,
    error: Option<String>,
    file: Option<String>,
    points: usize,
    band: Option<DepthBand>,
    stats: InstanceStats,
}

#[derive(Serialize)]
struct BackgroundReport {
    file: Option<String>,
    points: usize,
}

#[derive(Serialize)]
struct SceneReport {
    config: ConfigEcho,
    valid_depth_pixels: usize,
    instances: Vec<InstanceReport>,
    background: BackgroundReport,
}

fn file_safe(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect()
}

fn cmd_lift(a: &LiftArgs) -> Result<i32> {
    let (color, depth, intr, masks) = match &a.scene {
        Some(dir) => (
            dir.join("color.png"),
            dir.join("depth.png"),
            dir.join("intrinsics.json"),
            dir.join("manifest.json"),
        ),
        None => (
            a.color.clone().expect("required by clap"),
            a.depth.clone().expect("required by clap"),
            a.intrinsics.clone().expect("required by clap"),
            a.masks.clone().expect("required by clap"),
        ),
    };
    let band = (!a.no_band).then(|| BandConfig {
        center_mode: match a.band_center {
            CenterArg::Median => CenterMode::Median,
            CenterArg::Mean => CenterMode::Mean,
        },
        half_width_mm: a.band_halfwidth_mm,
    });
    if let Some(b) = &band {
        b.validate()?;
    }
    let cfg = LiftConfig {
        depth_model: a.depth_model.into(),
        band,
        emit_background: !a.no_background,
        overlap_policy: match a.overlap {
            OverlapArg::FirstWins => OverlapPolicy::FirstWins,
            OverlapArg::Duplicate => OverlapPolicy::Duplicate,
        },
    };
    let units: Units = a.units.into();

    let k = CameraIntrinsics::load(&intr)?;
    let color = load_color(&color)?;
    let depth = load_depth(&depth, &k)?;
    validate_alignment(&color, &depth)?;
    let (_, masks) = load_manifest(&masks)?;
    let scene = lift_scene(&color, &depth, &masks, &k, &cfg)?;

    fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
    let mut reports = Vec::with_capacity(scene.instances.len());
    let mut failures = 0;
    for inst in &scene.instances {
        let mut r = InstanceReport {
            id: inst.id,
            class_name: inst.class_name.clone(),
            score: inst.score,
            status: "ok",
            error: inst.error.clone(),
            file: None,
            points: 0,
            band: inst.band,
            stats: inst.stats,
        };
        match &inst.cloud {
            Some(pc) => {
                let name = format!("instance_{}_{}.ply", inst.id, file_safe(&inst.class_name));
                export_ply(pc, a.out.join(&name), units)?;
                r.file = Some(name);
                r.points = pc.len();
            }
            None => {
                failures += 1;
                r.status = "failed";
                eprintln!(
                    "instance {} ({}): {}",
                    inst.id,
                    inst.class_name,
                    inst.error.as_deref().unwrap_or("failed")
                );
            }
        }
        reports.push(r);
    }
    let bg_file = match &scene.background {
        Some(bg) => {
            export_ply(bg, a.out.join("background.ply"), units)?;
            Some("background.ply".to_string())
        }
        None => None,
    };
    let report = SceneReport {
        config: ConfigEcho {
            depth_model: cfg.depth_model,
            band: cfg.band,
            emit_background: cfg.emit_background,
            overlap_policy: cfg.overlap_policy,
            units,
        },
        valid_depth_pixels: depth.valid_count(),
        instances: reports,
        background: BackgroundReport {
            file: bg_file,
            points: scene.background_points,
        },
    };
    let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
    json.push('\n');
    write_atomic(&a.out.join("scene.json"), json.as_bytes())?;
    Ok(if failures > 0 { EXIT_PARTIAL } else { EXIT_OK })
}

fn cmd_measure(a: &MeasureArgs) -> Result<i32> {
    let mut pc = import_ply(&a.cloud)?;
    let to_mm = 1.0 / Units::from(a.units).from_mm();
    if to_mm != 1.0 {
        for p in &mut pc.points {
            *p = p.scaled(to_mm);
        }
    }
    let axis = match a.axis {
        AxisArg::X => Axis::X,
        AxisArg::Y => Axis::Y,
        AxisArg::Z => Axis::Z,
    };
    let report = measure_extent(&pc, axis, a.trim)?;
    println!("{report}");
    Ok(EXIT_OK)
}

fn cmd_synth(cmd: SynthCommand) -> Result<i32> {
    let (scene, out) = match cmd {
        SynthCommand::Box {
            width_mm,
            height_mm,
            depth_mm,
            offset_x_mm,
            offset_y_mm,
            scene,
        } => {
            let mut spec = BoxFaceSpec::centered(width_mm, height_mm, depth_mm);
            spec.offset_x_mm = offset_x_mm;
            spec.offset_y_mm = offset_y_mm;
            if let Some(n) = &scene.class_name {
                spec.class_name = n.clone();
            }
            if let Some(c) = scene.color {
                spec.color = c;
            }
            let k = scene.camera.intrinsics()?;
            (render_box(&spec, &k, &scene.options())?, scene.out)
        }
        SynthCommand::Sphere {
            center_x_mm,
            center_y_mm,
            center_z_mm,
            radius_mm,
            scene,
        } => {
            let mut spec = SphereSpec::new(Point3::new(center_x_mm, center_y_mm, center_z_mm), radius_mm);
            if let Some(n) = &scene.class_name {
                spec.class_name = n.clone();
            }
            if let Some(c) = scene.color {
                spec.color = c;
            }
            let k = scene.camera.intrinsics()?;
            (render_sphere(&spec, &k, &scene.options())?, scene.out)
        }
    };
    write_scene(&scene, &out)?;
    Ok(EXIT_OK)
}
