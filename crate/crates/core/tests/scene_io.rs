use std::fs;
use std::path::Path;

use rgbd_lift::masks::ManifestEntry;
use rgbd_lift::synth::GroundTruth;
use rgbd_lift::*;

fn write_manifest(dir: &Path, entries: &[(u32, &str)]) {
    let m = MaskManifest {
        color_image: "color.png".into(),
        instances: entries
            .iter()
            .map(|&(id, file)| ManifestEntry {
                id,
                class_name: "cup".into(),
                score: 0.75,
                mask_file: file.into(),
            })
            .collect(),
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string(&m).unwrap()).unwrap();
}

fn k600() -> CameraIntrinsics {
    CameraIntrinsics::new(600.0, 600.0, 320.0, 240.0, 640, 480).unwrap()
}

#[test]
fn manifest_with_no_instances() {
    let dir = tempfile::tempdir().unwrap();
    write_manifest(dir.path(), &[]);
    let (m, masks) = load_manifest(dir.path().join("manifest.json")).unwrap();
    assert!(m.instances.is_empty());
    assert!(masks.is_empty());
}

#[test]
fn manifest_with_two_instances() {
    let dir = tempfile::tempdir().unwrap();
    let a = MaskGrid::from_fn(640, 480, |c, _| c < 10);
    let b = MaskGrid::from_fn(640, 480, |_, r| r > 400);
    fs::write(dir.path().join("a.png"), a.encode_png()).unwrap();
    fs::write(dir.path().join("b.png"), b.encode_png()).unwrap();
    write_manifest(dir.path(), &[(1, "a.png"), (2, "b.png")]);
    let (_, masks) = load_manifest(dir.path().join("manifest.json")).unwrap();
    assert_eq!(masks.len(), 2);
    assert_eq!(masks[0].bitmap, a);
    assert_eq!(masks[1].bitmap, b);
    assert_eq!(masks[1].class_name, "cup");
}

#[test]
fn gray_mask_value_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mut png = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut png, 4, 4);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header().unwrap();
        let mut raw = [0u8; 16];
        raw[5] = 128;
        raw[6] = 255;
        w.write_image_data(&raw).unwrap();
    }
    fs::write(dir.path().join("m.png"), png).unwrap();
    write_manifest(dir.path(), &[(1, "m.png")]);
    let err = load_manifest(dir.path().join("manifest.json")).unwrap_err();
    assert!(matches!(err, Error::NonBinaryMask { value: 128, .. }), "{err}");
}

#[test]
fn duplicate_ids_and_bad_schema_rejected() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.png"), MaskGrid::new(4, 4).encode_png()).unwrap();
    write_manifest(dir.path(), &[(3, "m.png"), (3, "m.png")]);
    assert!(matches!(
        load_manifest(dir.path().join("manifest.json")),
        Err(Error::DuplicateId(3))
    ));
    fs::write(dir.path().join("manifest.json"), r#"{"instances": []}"#).unwrap();
    assert!(matches!(load_manifest(dir.path().join("manifest.json")), Err(Error::Schema(_))));
    fs::write(
        dir.path().join("manifest.json"),
        r#"{"color_image":"c.png","instances":[{"id":1,"class_name":"x","score":1.5,"mask_file":"m.png"}]}"#,
    )
    .unwrap();
    assert!(matches!(load_manifest(dir.path().join("manifest.json")), Err(Error::Schema(_))));
}

#[test]
fn missing_mask_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    write_manifest(dir.path(), &[(1, "nope.png")]);
    assert!(matches!(load_manifest(dir.path().join("manifest.json")), Err(Error::Io { .. })));
}

#[test]
fn written_scene_reloads_byte_equal() {
    let dir = tempfile::tempdir().unwrap();
    let scene = render_box(&BoxFaceSpec::centered(203.0, 260.0, 1000.0), &k600(), &SynthOptions::default()).unwrap();
    write_scene(&scene, dir.path()).unwrap();
    let d = dir.path();

    assert_eq!(fs::read(d.join("color.png")).unwrap(), scene.color.encode_png());
    assert_eq!(fs::read(d.join("depth.png")).unwrap(), scene.depth.encode_png());

    let k = CameraIntrinsics::load(d.join("intrinsics.json")).unwrap();
    assert_eq!(k, scene.intrinsics);
    let color = load_color(d.join("color.png")).unwrap();
    let depth = load_depth(d.join("depth.png"), &k).unwrap();
    assert_eq!(color, scene.color);
    assert_eq!(depth, scene.depth);

    let info = png::Decoder::new(std::io::BufReader::new(fs::File::open(d.join("depth.png")).unwrap()))
        .read_info()
        .unwrap();
    assert_eq!(info.info().bit_depth, png::BitDepth::Sixteen);

    let (manifest, masks) = load_manifest(d.join("manifest.json")).unwrap();
    assert_eq!(manifest.instances.len(), 1);
    assert_eq!(masks, scene.masks);

    let gt: GroundTruth = serde_json::from_str(&fs::read_to_string(d.join("ground_truth.json")).unwrap()).unwrap();
    assert_eq!(gt, scene.ground_truth);
    let raw: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("ground_truth.json")).unwrap()).unwrap();
    let obj = &raw["objects"][0];
    for key in ["id", "class_name", "width_mm", "height_mm", "center_depth_mm"] {
        assert!(obj.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn box_extent_end_to_end_with_band() {
    for model in [DepthModel::PlanarZ, DepthModel::RayDistance] {
        let opts = SynthOptions {
            depth_model: model,
            ..SynthOptions::default()
        };
        let mut spec = BoxFaceSpec::centered(150.0, 90.0, 1200.0);
        spec.offset_x_mm = -80.0;
        spec.offset_y_mm = 35.0;
        let k = k600();
        let s = render_box(&spec, &k, &opts).unwrap();
        let cfg = LiftConfig {
            depth_model: model,
            ..LiftConfig::default()
        };
        let seg = lift_scene(&s.color, &s.depth, &s.masks, &k, &cfg).unwrap();
        let pc = seg.instances[0].cloud.as_ref().unwrap();
        let tol = 2.0 * spec.center_depth_mm / k.fx;
        let wx = measure_extent(pc, Axis::X, 0.0).unwrap().extent;
        let wy = measure_extent(pc, Axis::Y, 0.0).unwrap().extent;
        assert!((wx - spec.width_mm).abs() <= tol, "{model:?} width {wx}");
        assert!((wy - spec.height_mm).abs() <= tol, "{model:?} height {wy}");
        // depth quantization: ±0.5 mm on d, at most ±0.5 mm on z
        assert!(pc.points.iter().all(|p| (p.z - 1200.0).abs() <= 0.5 + 1e-9));
    }
}

#[test]
fn background_has_no_points_near_face_plane() {
    let k = k600();
    let s = render_box(&BoxFaceSpec::centered(300.0, 200.0, 1000.0), &k, &SynthOptions::default()).unwrap();
    let seg = lift_scene(&s.color, &s.depth, &s.masks, &k, &LiftConfig::default()).unwrap();
    let bg = seg.background.unwrap();
    assert_eq!(bg.len() + seg.instances[0].stats.kept, 640 * 480);
    assert!(bg.points.iter().all(|p| (p.z - 1000.0).abs() > 300.0));
}

#[test]
fn jittered_scene_keeps_face_in_band() {
    let k = k600();
    let opts = SynthOptions {
        jitter_mm: 20.0,
        seed: 42,
        ..SynthOptions::default()
    };
    let s = render_box(&BoxFaceSpec::centered(203.0, 260.0, 1000.0), &k, &opts).unwrap();
    let seg = lift_scene(&s.color, &s.depth, &s.masks, &k, &LiftConfig::default()).unwrap();
    assert_eq!(seg.instances[0].stats.kept, s.masks[0].bitmap.count());
}

#[test]
fn per_point_color_matches_source_pixel() {
    let k = k600();
    let s = render_sphere(
        &SphereSpec::new(Point3::new(60.0, -40.0, 900.0), 120.0),
        &k,
        &SynthOptions::default(),
    )
    .unwrap();
    let seg = lift_scene(&s.color, &s.depth, &s.masks, &k, &LiftConfig::default()).unwrap();
    for pc in [seg.instances[0].cloud.as_ref().unwrap(), seg.background.as_ref().unwrap()] {
        for (p, c) in pc.points.iter().zip(&pc.colors) {
            let ip = project(*p, &k, DepthModel::PlanarZ).unwrap();
            let (col, row) = (ip.col.round() as usize, ip.row.round() as usize);
            assert_eq!(*c, s.color.get(col, row));
        }
    }
}
