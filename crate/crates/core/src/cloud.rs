//! Colored point clouds, ASCII PLY I/O, and axis extent measurement.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::rgbd_io::Rgb;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud {
    pub points: Vec<Point3>,
    pub colors: Vec<Rgb>,
}

impl PointCloud {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        PointCloud {
            points: Vec::with_capacity(n),
            colors: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, p: Point3, c: Rgb) {
        self.points.push(p);
        self.colors.push(c);
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    #[default]
    Millimeters,
    Meters,
}

impl Units {
    /// Factor from millimeters to this unit.
    pub fn from_mm(self) -> f64 {
        match self {
            Units::Millimeters => 1.0,
            Units::Meters => 1e-3,
        }
    }
}

const HEADER_PROPS: [&str; 6] = [
    "property float x",
    "property float y",
    "property float z",
    "property uchar red",
    "property uchar green",
    "property uchar blue",
];

fn fmt_coord(v: f64) -> f32 {
    let f = v as f32;
    // avoid "-0" in the output
    if f == 0.0 {
        0.0
    } else {
        f
    }
}

/// Serializes the cloud as ASCII PLY text.
pub fn ply_string(pc: &PointCloud, units: Units) -> String {
    let s = units.from_mm();
    let mut out = String::with_capacity(64 + pc.len() * 32);
    out.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(out, "element vertex {}", pc.len());
    for p in HEADER_PROPS {
        out.push_str(p);
        out.push('\n');
    }
    out.push_str("end_header\n");
    for (p, c) in pc.points.iter().zip(&pc.colors) {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {}",
            fmt_coord(p.x * s),
            fmt_coord(p.y * s),
            fmt_coord(p.z * s),
            c[0],
            c[1],
            c[2]
        );
    }
    out
}

/// Writes via a temporary sibling file and rename.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

pub fn export_ply(pc: &PointCloud, path: impl AsRef<Path>, units: Units) -> Result<()> {
    write_atomic(path.as_ref(), ply_string(pc, units).as_bytes())
}

/// Parses ASCII PLY text with `x y z red green blue` vertices.
pub fn parse_ply(text: &str) -> Result<PointCloud> {
    let fmt = |m: String| Error::Format(m);
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("ply") {
        return Err(fmt("missing 'ply' magic".into()));
    }
    let mut count: Option<usize> = None;
    let mut props = Vec::new();
    let mut saw_format = false;
    loop {
        let line = lines.next().ok_or_else(|| fmt("missing end_header".into()))?.trim();
        if line == "end_header" {
            break;
        }
        if line.is_empty() || line.starts_with("comment") || line.starts_with("obj_info") {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["format", "ascii", "1.0"] => saw_format = true,
            ["format", other, ..] => return Err(fmt(format!("unsupported PLY encoding '{other}'"))),
            ["element", "vertex", n] => {
                if count.is_some() {
                    return Err(fmt("duplicate vertex element".into()));
                }
                count = Some(n.parse().map_err(|_| fmt(format!("bad vertex count '{n}'")))?);
            }
            ["element", other, ..] => return Err(fmt(format!("unsupported element '{other}'"))),
            ["property", ..] => props.push(words.join(" ")),
            _ => return Err(fmt(format!("unexpected header line '{line}'"))),
        }
    }
    if !saw_format {
        return Err(fmt("missing format line".into()));
    }
    let count = count.ok_or_else(|| fmt("missing 'element vertex'".into()))?;
    if props != HEADER_PROPS {
        return Err(fmt(format!("expected properties x y z red green blue, found {props:?}")));
    }

    let mut pc = PointCloud::with_capacity(count);
    for (i, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
        if i >= count {
            return Err(fmt(format!("more vertex lines than declared count {count}")));
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 6 {
            return Err(fmt(format!("vertex {i}: expected 6 fields, found {}", f.len())));
        }
        let coord = |s: &str| -> Result<f64> {
            let v: f32 = s.parse().map_err(|_| fmt(format!("vertex {i}: bad coordinate '{s}'")))?;
            if !v.is_finite() {
                return Err(fmt(format!("vertex {i}: non-finite coordinate")));
            }
            Ok(f64::from(v))
        };
        let chan = |s: &str| -> Result<u8> { s.parse().map_err(|_| fmt(format!("vertex {i}: bad color '{s}'"))) };
        pc.push(
            Point3::new(coord(f[0])?, coord(f[1])?, coord(f[2])?),
            [chan(f[3])?, chan(f[4])?, chan(f[5])?],
        );
    }
    if pc.len() != count {
        return Err(fmt(format!("header declares {count} vertices, found {}", pc.len())));
    }
    Ok(pc)
}

pub fn import_ply(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| Error::Format(format!("{}: not an ASCII PLY file", path.display())))?;
    parse_ply(text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn of(self, p: &Point3) -> f64 {
        match self {
            Axis::X => p.x,
            Axis::Y => p.y,
            Axis::Z => p.z,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtentReport {
    pub axis: Axis,
    pub extent: f64,
    pub trim_fraction: f64,
    /// Points remaining after trimming.
    pub point_count: usize,
}

impl std::fmt::Display for ExtentReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "axis={} extent_mm={:.3} points={} trim={}",
            self.axis.name(),
            self.extent,
            self.point_count,
            self.trim_fraction
        )
    }
}

/// Trimmed max - min along `axis`: `floor(trim * n)` values are dropped from
/// each tail of the sorted coordinates.
pub fn measure_extent(pc: &PointCloud, axis: Axis, trim_fraction: f64) -> Result<ExtentReport> {
    if !(0.0..0.5).contains(&trim_fraction) {
        return Err(Error::InvalidConfig(format!("trim fraction {trim_fraction} outside [0, 0.5)")));
    }
    let mut vals: Vec<f64> = pc.points.iter().map(|p| axis.of(p)).collect();
    let n = vals.len();
    let k = (trim_fraction * n as f64).floor() as usize;
    let kept = n.saturating_sub(2 * k);
    if kept < 2 {
        return Err(Error::TooFewPoints { available: kept });
    }
    vals.sort_unstable_by(|a, b| a.total_cmp(b));
    let rest = &vals[k..n - k];
    Ok(ExtentReport {
        axis,
        extent: rest[rest.len() - 1] - rest[0],
        trim_fraction,
        point_count: kept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cloud_x(xs: &[f64]) -> PointCloud {
        let mut pc = PointCloud::new();
        for &x in xs {
            pc.push(Point3::new(x, 0.0, 1000.0), [1, 2, 3]);
        }
        pc
    }

    #[test]
    fn empty_cloud_header() {
        let s = ply_string(&PointCloud::new(), Units::Millimeters);
        assert_eq!(
            s,
            "ply\nformat ascii 1.0\nelement vertex 0\nproperty float x\nproperty float y\nproperty float z\n\
             property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n"
        );
        assert_eq!(parse_ply(&s).unwrap(), PointCloud::new());
    }

    #[test]
    fn meters_conversion_vertex_line() {
        let mut pc = PointCloud::new();
        pc.push(Point3::new(0.0, 0.0, 1000.0), [10, 20, 30]);
        let s = ply_string(&pc, Units::Meters);
        assert_eq!(s.lines().last().unwrap(), "0 0 1 10 20 30");
    }

    #[test]
    fn negative_zero_not_written() {
        let mut pc = PointCloud::new();
        pc.push(Point3::new(-0.0, -0.0, 5.0), [0, 0, 0]);
        assert_eq!(ply_string(&pc, Units::Millimeters).lines().last().unwrap(), "0 0 5 0 0 0");
    }

    #[test]
    fn count_mismatch_rejected() {
        let mut s = ply_string(&cloud_x(&[1.0, 2.0]), Units::Millimeters);
        s = s.replace("element vertex 2", "element vertex 3");
        assert!(matches!(parse_ply(&s), Err(Error::Format(_))));
        let s = ply_string(&cloud_x(&[1.0, 2.0]), Units::Millimeters).replace("element vertex 2", "element vertex 1");
        assert!(matches!(parse_ply(&s), Err(Error::Format(_))));
    }

    #[test]
    fn binary_rejected() {
        let s = ply_string(&cloud_x(&[1.0]), Units::Millimeters)
            .replace("format ascii 1.0", "format binary_little_endian 1.0");
        let err = parse_ply(&s).unwrap_err();
        assert!(err.to_string().contains("binary_little_endian"), "{err}");
    }

    #[test]
    fn missing_color_properties_rejected() {
        let s = "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\nproperty float z\nend_header\n1 2 3\n";
        assert!(matches!(parse_ply(s), Err(Error::Format(_))));
    }

    #[test]
    fn raw_extent() {
        let r = measure_extent(&cloud_x(&[-101.5, 0.0, 101.5]), Axis::X, 0.0).unwrap();
        assert_eq!(r.extent, 203.0);
        assert_eq!(r.point_count, 3);
    }

    #[test]
    fn single_point_too_few() {
        assert!(matches!(
            measure_extent(&cloud_x(&[1.0]), Axis::X, 0.0),
            Err(Error::TooFewPoints { available: 1 })
        ));
        assert!(matches!(
            measure_extent(&PointCloud::new(), Axis::Y, 0.01),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn trim_drops_outlier() {
        let mut xs: Vec<f64> = (0..100).map(|i| i as f64 * 100.0 / 99.0).collect();
        xs.push(500.0);
        let r = measure_extent(&cloud_x(&xs), Axis::X, 0.01).unwrap();
        // Oracle: 101 values, floor(1.01) = 1 dropped per tail -> range of xs[1..=99].
        let expected = 100.0 - 100.0 / 99.0;
        assert!((r.extent - expected).abs() < 1e-9, "{}", r.extent);
        assert_eq!(r.point_count, 99);
    }

    #[test]
    fn report_line_format() {
        let r = ExtentReport {
            axis: Axis::X,
            extent: 200.0,
            trim_fraction: 0.01,
            point_count: 42,
        };
        assert_eq!(r.to_string(), "axis=x extent_mm=200.000 points=42 trim=0.01");
    }

    fn cloud_strategy() -> impl Strategy<Value = PointCloud> {
        proptest::collection::vec(
            ((-5000.0f64..5000.0, -5000.0f64..5000.0, 1.0f64..8000.0), any::<[u8; 3]>()),
            0..200,
        )
        .prop_map(|v| {
            let mut pc = PointCloud::new();
            for ((x, y, z), c) in v {
                pc.push(Point3::new(x, y, z), c);
            }
            pc
        })
    }

    proptest! {
        #[test]
        fn ply_round_trip(pc in cloud_strategy()) {
            let back = parse_ply(&ply_string(&pc, Units::Millimeters)).unwrap();
            prop_assert_eq!(back.len(), pc.len());
            prop_assert_eq!(&back.colors, &pc.colors);
            for (a, b) in back.points.iter().zip(&pc.points) {
                prop_assert_eq!(a.x, b.x as f32 as f64);
                prop_assert_eq!(a.y, b.y as f32 as f64);
                prop_assert_eq!(a.z, b.z as f32 as f64);
            }
        }

        #[test]
        fn extent_invariances(
            xs in proptest::collection::vec(-1000.0f64..1000.0, 2..100),
            shift in -500.0f64..500.0,
            alpha in 0.1f64..10.0,
            t1 in 0.0f64..0.2,
            dt in 0.0f64..0.2,
        ) {
            let base = measure_extent(&cloud_x(&xs), Axis::X, 0.0).unwrap().extent;
            let shifted: Vec<f64> = xs.iter().map(|x| x + shift).collect();
            let flipped: Vec<f64> = xs.iter().map(|x| -x).collect();
            let scaled: Vec<f64> = xs.iter().map(|x| x * alpha).collect();
            let tol = 1e-9 * (1.0 + base.abs() + shift.abs());
            prop_assert!((measure_extent(&cloud_x(&shifted), Axis::X, 0.0).unwrap().extent - base).abs() < tol);
            prop_assert_eq!(measure_extent(&cloud_x(&flipped), Axis::X, 0.0).unwrap().extent, base);
            prop_assert!((measure_extent(&cloud_x(&scaled), Axis::X, 0.0).unwrap().extent - alpha * base).abs() < 1e-9 * (1.0 + alpha * base));
            if let (Ok(a), Ok(b)) = (
                measure_extent(&cloud_x(&xs), Axis::X, t1),
                measure_extent(&cloud_x(&xs), Axis::X, t1 + dt),
            ) {
                prop_assert!(b.extent <= a.extent);
            }
        }
    }
}
