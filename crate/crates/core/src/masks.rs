//! Instance masks: manifest ingestion, contour tracing, region extraction.

use std::collections::{HashSet, VecDeque};
use std::fs;
use std::path::Path;

use png::{BitDepth, ColorType};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PixelCoord;
use crate::rgbd_io::{decode_png_file, encode_png};

/// Row-major Boolean grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskGrid {
    pub width: usize,
    pub height: usize,
    bits: Vec<bool>,
}

impl MaskGrid {
    pub fn new(width: usize, height: usize) -> Self {
        MaskGrid {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::Format(format!(
                "mask has {} cells, expected {}x{}",
                bits.len(),
                width,
                height
            )));
        }
        Ok(MaskGrid { width, height, bits })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                bits.push(f(col, row));
            }
        }
        MaskGrid { width, height, bits }
    }

    #[inline]
    pub fn get(&self, col: usize, row: usize) -> bool {
        self.bits[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, col: usize, row: usize, v: bool) {
        self.bits[row * self.width + col] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub(crate) fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.bits
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn or_assign(&mut self, other: &MaskGrid) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::dims("mask union", self.dims(), other.dims()));
        }
        for (a, &b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        Ok(())
    }

    /// 8-bit grayscale PNG, 255 = set.
    pub fn encode_png(&self) -> Vec<u8> {
        let raw: Vec<u8> = self.bits.iter().map(|&b| if b { 255 } else { 0 }).collect();
        encode_png(self.width, self.height, ColorType::Grayscale, BitDepth::Eight, &raw)
    }
}

/// One detected object.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceMask {
    pub id: u32,
    pub class_name: String,
    pub score: f64,
    pub bitmap: MaskGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: u32,
    pub class_name: String,
    pub score: f64,
    pub mask_file: String,
}

/// Interchange file between a segmenter and the lifter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskManifest {
    pub color_image: String,
    pub instances: Vec<ManifestEntry>,
}

impl MaskManifest {
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for e in &self.instances {
            if e.id == 0 {
                return Err(Error::Schema("instance id must be a positive integer".into()));
            }
            if !(0.0..=1.0).contains(&e.score) {
                return Err(Error::Schema(format!("instance {}: score {} outside [0, 1]", e.id, e.score)));
            }
            if e.mask_file.is_empty() {
                return Err(Error::Schema(format!("instance {}: empty mask_file", e.id)));
            }
            if !seen.insert(e.id) {
                return Err(Error::DuplicateId(e.id));
            }
        }
        Ok(())
    }
}

fn decode_mask(path: &Path) -> Result<MaskGrid> {
    let p = decode_png_file(path)?;
    if p.color != ColorType::Grayscale || p.depth != BitDepth::Eight {
        return Err(Error::Format(format!(
            "{}: mask must be 8-bit single-channel, found {:?} {:?}",
            path.display(),
            p.color,
            p.depth
        )));
    }
    let mut bits = Vec::with_capacity(p.data.len());
    for &v in &p.data {
        match v {
            0 => bits.push(false),
            255 => bits.push(true),
            value => {
                return Err(Error::NonBinaryMask {
                    path: path.to_path_buf(),
                    value,
                })
            }
        }
    }
    MaskGrid::from_bits(p.width, p.height, bits)
}

/// Reads the manifest and every mask it references (paths relative to the
/// manifest's directory).
pub fn load_manifest(path: impl AsRef<Path>) -> Result<(MaskManifest, Vec<InstanceMask>)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let manifest: MaskManifest =
        serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    manifest.validate()?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let masks = manifest
        .instances
        .iter()
        .map(|e| {
            Ok(InstanceMask {
                id: e.id,
                class_name: e.class_name.clone(),
                score: e.score,
                bitmap: decode_mask(&base.join(&e.mask_file))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((manifest, masks))
}

/// Closed outer boundary of one 8-connected component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contour {
    /// Boundary pixels in tracing order; the start is not repeated at the end.
    pub points: Vec<PixelCoord>,
    /// Pixel count of the component (holes excluded).
    pub enclosed_area: usize,
}

// Counter-clockwise on screen (rows grow downward): E, NE, N, NW, W, SW, S, SE.
const DIRS: [(isize, isize); 8] = [(1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1)];

fn dir_index(from: (usize, usize), to: (usize, usize)) -> usize {
    let d = (to.0 as isize - from.0 as isize, to.1 as isize - from.1 as isize);
    DIRS.iter().position(|&x| x == d).expect("8-neighbour")
}

fn neighbour(g: &MaskGrid, p: (usize, usize), dir: usize) -> Option<(usize, usize)> {
    let (dc, dr) = DIRS[dir];
    let c = p.0 as isize + dc;
    let r = p.1 as isize + dr;
    if c < 0 || r < 0 || c >= g.width as isize || r >= g.height as isize {
        return None;
    }
    let q = (c as usize, r as usize);
    g.get(q.0, q.1).then_some(q)
}

/// Outer border following from `start`, the first pixel of its component in
/// raster order (so its west neighbour is background).
fn trace_outer(g: &MaskGrid, start: (usize, usize)) -> Vec<PixelCoord> {
    const WEST: usize = 4;
    // Clockwise search from the west neighbour for the first foreground pixel.
    let first = (0..8)
        .map(|i| (WEST + 8 - i) % 8)
        .find_map(|d| neighbour(g, start, d));
    let Some(first) = first else {
        return vec![PixelCoord::new(start.0, start.1)];
    };

    let mut points = vec![PixelCoord::new(start.0, start.1)];
    let mut prev = first;
    let mut cur = start;
    loop {
        // Counter-clockwise search around `cur`, beginning after `prev`.
        let from = dir_index(cur, prev);
        let next = (1..=8)
            .map(|i| (from + i) % 8)
            .find_map(|d| neighbour(g, cur, d))
            .expect("component has at least two pixels");
        if next == start && cur == first {
            break;
        }
        prev = cur;
        cur = next;
        points.push(PixelCoord::new(cur.0, cur.1));
    }
    points
}

/// One contour per 8-connected foreground component, in raster order of the
/// components' first pixels.
pub fn find_contours(m: &InstanceMask) -> Vec<Contour> {
    contours_of(&m.bitmap)
}

pub fn contours_of(g: &MaskGrid) -> Vec<Contour> {
    let mut labelled = vec![false; g.width * g.height];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for row in 0..g.height {
        for col in 0..g.width {
            let idx = row * g.width + col;
            if !g.get(col, row) || labelled[idx] {
                continue;
            }
            labelled[idx] = true;
            queue.push_back((col, row));
            let mut area = 0;
            while let Some(p) = queue.pop_front() {
                area += 1;
                for d in 0..8 {
                    if let Some(q) = neighbour(g, p, d) {
                        let qi = q.1 * g.width + q.0;
                        if !labelled[qi] {
                            labelled[qi] = true;
                            queue.push_back(q);
                        }
                    }
                }
            }
            out.push(Contour {
                points: trace_outer(g, (col, row)),
                enclosed_area: area,
            });
        }
    }
    out
}

/// Every set pixel in row-major order.
pub fn region_pixels(m: &InstanceMask) -> Vec<PixelCoord> {
    let g = &m.bitmap;
    g.bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| PixelCoord::new(i % g.width, i / g.width))
        .collect()
}

/// Pixelwise OR over `frame` dimensions; an empty list yields an all-false grid.
pub fn mask_union(ms: &[InstanceMask], frame: (usize, usize)) -> Result<MaskGrid> {
    let mut out = MaskGrid::new(frame.0, frame.1);
    for m in ms {
        if m.bitmap.dims() != frame {
            return Err(Error::dims(format!("mask {}", m.id), frame, m.bitmap.dims()));
        }
        out.or_assign(&m.bitmap)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inst(id: u32, bitmap: MaskGrid) -> InstanceMask {
        InstanceMask {
            id,
            class_name: "thing".into(),
            score: 0.9,
            bitmap,
        }
    }

    fn is_8_neighbour(a: PixelCoord, b: PixelCoord) -> bool {
        let dc = a.col.abs_diff(b.col);
        let dr = a.row.abs_diff(b.row);
        dc <= 1 && dr <= 1 && (dc, dr) != (0, 0)
    }

    /// Brute-force component sizes: repeated relabelling until fixpoint.
    fn oracle_component_sizes(g: &MaskGrid) -> Vec<usize> {
        let (w, h) = g.dims();
        let mut label: Vec<usize> = (0..w * h).collect();
        loop {
            let mut changed = false;
            for r in 0..h {
                for c in 0..w {
                    if !g.get(c, r) {
                        continue;
                    }
                    for dr in -1i64..=1 {
                        for dc in -1i64..=1 {
                            let (nc, nr) = (c as i64 + dc, r as i64 + dr);
                            if nc < 0 || nr < 0 || nc >= w as i64 || nr >= h as i64 {
                                continue;
                            }
                            let (nc, nr) = (nc as usize, nr as usize);
                            if g.get(nc, nr) && label[nr * w + nc] < label[r * w + c] {
                                label[r * w + c] = label[nr * w + nc];
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut counts = std::collections::BTreeMap::new();
        for (i, &b) in g.bits().iter().enumerate() {
            if b {
                *counts.entry(label[i]).or_insert(0) += 1;
            }
        }
        counts.into_values().collect()
    }

    #[test]
    fn empty_mask_has_no_contours() {
        assert!(find_contours(&inst(1, MaskGrid::new(16, 16))).is_empty());
        assert!(region_pixels(&inst(1, MaskGrid::new(16, 16))).is_empty());
    }

    #[test]
    fn single_pixel_contour() {
        let mut g = MaskGrid::new(16, 16);
        g.set(5, 5, true);
        let cs = find_contours(&inst(1, g));
        assert_eq!(
            cs,
            vec![Contour {
                points: vec![PixelCoord::new(5, 5)],
                enclosed_area: 1
            }]
        );
    }

    #[test]
    fn filled_square_traces_its_eight_border_pixels() {
        let g = MaskGrid::from_fn(20, 20, |c, r| (10..13).contains(&c) && (10..13).contains(&r));
        let cs = find_contours(&inst(1, g.clone()));
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].enclosed_area, 9);
        assert_eq!(cs[0].enclosed_area, oracle_component_sizes(&g)[0]);
        assert_eq!(cs[0].points.len(), 8);
        assert_eq!(cs[0].points[0], PixelCoord::new(10, 10));
        let set: HashSet<_> = cs[0].points.iter().copied().collect();
        assert_eq!(set.len(), 8);
        assert!(!set.contains(&PixelCoord::new(11, 11)));
    }

    #[test]
    fn hole_pixels_excluded_from_area() {
        // 5x5 ring with a 1-pixel hole
        let g = MaskGrid::from_fn(9, 9, |c, r| (2..7).contains(&c) && (2..7).contains(&r) && (c, r) != (4, 4));
        let cs = contours_of(&g);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].enclosed_area, 24);
    }

    #[test]
    fn diagonal_pixels_form_one_component() {
        let g = MaskGrid::from_fn(6, 6, |c, r| c == r);
        let cs = contours_of(&g);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].enclosed_area, 6);
    }

    #[test]
    fn region_pixels_row_major() {
        let g = MaskGrid::from_fn(2, 2, |_, _| true);
        let px = region_pixels(&inst(1, g));
        assert_eq!(
            px,
            vec![PixelCoord::new(0, 0), PixelCoord::new(1, 0), PixelCoord::new(0, 1), PixelCoord::new(1, 1)]
        );
    }

    #[test]
    fn union_cases() {
        let u = mask_union(&[], (640, 480)).unwrap();
        assert_eq!(u.count(), 0);
        let a = MaskGrid::from_fn(8, 8, |c, _| c < 3);
        let b = MaskGrid::from_fn(8, 8, |c, _| c > 5);
        let ua = mask_union(&[inst(1, a.clone()), inst(2, a.clone())], (8, 8)).unwrap();
        assert_eq!(ua, a);
        let uab = mask_union(&[inst(1, a.clone()), inst(2, b.clone())], (8, 8)).unwrap();
        assert_eq!(uab.count(), a.count() + b.count());
        let small = MaskGrid::new(4, 8);
        assert!(matches!(
            mask_union(&[inst(1, a), inst(2, small)], (8, 8)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn grid_strategy() -> impl Strategy<Value = MaskGrid> {
        (1usize..=32, 1usize..=32, 0.05f64..0.8).prop_flat_map(|(w, h, p)| {
            proptest::collection::vec(proptest::bool::weighted(p), w * h)
                .prop_map(move |bits| MaskGrid::from_bits(w, h, bits).unwrap())
        })
    }

    proptest! {
        #[test]
        fn contour_areas_match_components_and_region(g in grid_strategy()) {
            let cs = contours_of(&g);
            let mut areas: Vec<usize> = cs.iter().map(|c| c.enclosed_area).collect();
            let mut oracle = oracle_component_sizes(&g);
            areas.sort_unstable();
            oracle.sort_unstable();
            prop_assert_eq!(&areas, &oracle);
            let total: usize = areas.iter().sum();
            prop_assert_eq!(total, region_pixels(&inst(1, g.clone())).len());
            for c in &cs {
                for w in c.points.windows(2) {
                    prop_assert!(is_8_neighbour(w[0], w[1]), "{:?}", w);
                }
                if c.points.len() > 1 {
                    prop_assert!(is_8_neighbour(*c.points.last().unwrap(), c.points[0]));
                }
                for p in &c.points {
                    prop_assert!(g.get(p.col, p.row));
                }
            }
        }

        #[test]
        fn contours_are_translation_equivariant(g in grid_strategy(), dx in 0usize..5, dy in 0usize..5) {
            let (w, h) = g.dims();
            let shifted = MaskGrid::from_fn(w + dx, h + dy, |c, r| c >= dx && r >= dy && g.get(c - dx, r - dy));
            let a = contours_of(&g);
            let b = contours_of(&shifted);
            prop_assert_eq!(a.len(), b.len());
            for (ca, cb) in a.iter().zip(&b) {
                prop_assert_eq!(ca.enclosed_area, cb.enclosed_area);
                let moved: Vec<_> = ca.points.iter().map(|p| PixelCoord::new(p.col + dx, p.row + dy)).collect();
                prop_assert_eq!(&moved, &cb.points);
            }
        }

        #[test]
        fn union_is_boolean_algebra(a in grid_strategy()) {
            let (w, h) = a.dims();
            let b = MaskGrid::from_fn(w, h, |c, r| (c * 7 + r * 3) % 5 == 0);
            let c = MaskGrid::from_fn(w, h, |c, r| (c + r) % 3 == 1);
            let u = |xs: &[&MaskGrid]| {
                let v: Vec<_> = xs.iter().enumerate().map(|(i, g)| inst(i as u32 + 1, (*g).clone())).collect();
                mask_union(&v, (w, h)).unwrap()
            };
            prop_assert_eq!(u(&[&a, &b]), u(&[&b, &a]));
            prop_assert_eq!(u(&[&u(&[&a, &b]), &c]), u(&[&a, &u(&[&b, &c])]));
            prop_assert_eq!(u(&[&a, &a]), a.clone());
        }
    }
}
