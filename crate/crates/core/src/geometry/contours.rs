use super::{marching_squares, MultiPolygon, Point, Polygon, Ring};
use crate::classify::LabelField;
use crate::density::{contour_levels, KdeResult};
use crate::derivative::QuiverField;
use crate::error::{KsError, Result};
use crate::types::DensityField;

/// Groups rings into polygons: counterclockwise rings become shells and each
/// clockwise ring becomes a hole of the smallest shell containing it.
///
/// `field` and `level` are accepted for symmetry with [`marching_squares`]
/// and used only to validate the pairing.
pub fn assemble_polygons(
    rings: Vec<Ring>,
    field: &DensityField,
    level: f64,
) -> Result<MultiPolygon> {
    if level.is_nan() || level <= 0.0 {
        return Err(KsError::InvalidLevel(level));
    }
    if rings.is_empty() || level >= field.max() {
        return Ok(MultiPolygon::default());
    }
    let (shells, holes): (Vec<Ring>, Vec<Ring>) = rings.into_iter().partition(Ring::is_ccw);
    let areas: Vec<f64> = shells.iter().map(Ring::area).collect();
    let mut assigned: Vec<Vec<Ring>> = vec![Vec::new(); shells.len()];
    for hole in holes {
        let pts = &hole.coords()[..hole.coords().len() - 1];
        let owner = shells
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                let inside = pts.iter().filter(|&&p| s.contains(p)).count();
                2 * inside > pts.len()
            })
            .min_by(|a, b| areas[a.0].total_cmp(&areas[b.0]))
            .map(|(k, _)| k);
        if let Some(k) = owner {
            assigned[k].push(hole);
        }
    }
    Ok(MultiPolygon(
        shells
            .into_iter()
            .zip(assigned)
            .map(|(s, h)| Polygon::new(s, h))
            .collect(),
    ))
}

/// One probability contour region.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourRegion {
    /// Probability mass in percent.
    pub contlabel: u32,
    /// Density height bounding the region.
    pub estimate: f64,
    pub geometry: MultiPolygon,
}

/// Contour regions, sorted by descending `contlabel`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContourSet {
    pub regions: Vec<ContourRegion>,
}

impl ContourSet {
    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn get(&self, contlabel: u32) -> Option<&ContourRegion> {
        self.regions.iter().find(|r| r.contlabel == contlabel)
    }
}

/// Regions `{x : f̂(x) ≥ height(p)}` for each percent `p` in `1..=99`.
pub fn probability_contours(kde: &KdeResult, percents: &[u32]) -> Result<ContourSet> {
    if let Some(p) = percents.iter().find(|p| !(1..=99).contains(*p)) {
        return Err(KsError::InvalidArgument(format!(
            "contour percent {p} outside 1..=99"
        )));
    }
    let mut sorted = percents.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return Ok(ContourSet::default());
    }
    let probs: Vec<f64> = sorted.iter().map(|&p| p as f64 / 100.0).collect();
    let levels = contour_levels(kde, &probs)?;
    let mut regions = Vec::with_capacity(sorted.len());
    for (&p, &height) in sorted.iter().zip(&levels.heights) {
        let geometry = if height > 0.0 {
            let rings = marching_squares(&kde.field, height)?;
            assemble_polygons(rings, &kde.field, height)?
        } else {
            MultiPolygon::default()
        };
        regions.push(ContourRegion {
            contlabel: p,
            estimate: height,
            geometry,
        });
    }
    regions.reverse();
    Ok(ContourSet { regions })
}

/// A labelled grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub label: u32,
    pub polygon: Polygon,
}

/// One rectangle per grid cell carrying the majority label of its four
/// corners (ties to the smaller label). Cells whose label is 0 are omitted.
pub fn grid_polygons(field: &LabelField) -> Vec<GridCell> {
    let g = &field.grid;
    let mut cells = Vec::new();
    for j in 0..g.ny.saturating_sub(1) {
        for i in 0..g.nx.saturating_sub(1) {
            let mut corners = [
                field.label(i, j),
                field.label(i + 1, j),
                field.label(i + 1, j + 1),
                field.label(i, j + 1),
            ];
            corners.sort_unstable();
            let mut best = (0usize, 0u32);
            let mut k = 0;
            while k < 4 {
                let run = corners[k..]
                    .iter()
                    .take_while(|&&c| c == corners[k])
                    .count();
                if run > best.0 {
                    best = (run, corners[k]);
                }
                k += run;
            }
            if best.1 == 0 {
                continue;
            }
            cells.push(GridCell {
                label: best.1,
                polygon: Polygon::rectangle(g.x(i), g.y(j), g.x(i + 1), g.y(j + 1)),
            });
        }
    }
    cells
}

/// A gradient arrow as a two-point segment.
#[derive(Debug, Clone, PartialEq)]
pub struct QuiverSegment {
    pub start: Point,
    pub end: Point,
    /// Drawn length, `scale · ‖(u, v)‖`.
    pub len: f64,
}

/// Segment from each anchor to `anchor + scale·(u, v)`; zero arrows are
/// skipped.
pub fn quiver_linestrings(q: &QuiverField) -> Vec<QuiverSegment> {
    q.anchors
        .iter()
        .zip(q.u.iter().zip(&q.v))
        .filter(|(_, (u, v))| **u != 0.0 || **v != 0.0)
        .map(|(&a, (&u, &v))| {
            let end = [a[0] + q.scale * u, a[1] + q.scale * v];
            QuiverSegment {
                start: a,
                end,
                len: q.scale * u.hypot(v),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::kde;
    use crate::derivative::{kdde_grad_grid, quiver};
    use crate::types::{BandwidthMatrix, FieldKind, Grid2D, PointSet};

    fn field(nx: usize, ny: usize, values: Vec<f64>) -> DensityField {
        let grid = Grid2D::new(0.0, 0.0, 1.0, 1.0, nx, ny).unwrap();
        DensityField::new(grid, values, FieldKind::Density).unwrap()
    }

    #[test]
    fn annulus_is_one_polygon_with_hole() {
        let mut v = vec![0.0; 49];
        for j in 1..6 {
            for i in 1..6 {
                v[j * 7 + i] = 1.0;
            }
        }
        v[24] = 0.0;
        let f = field(7, 7, v);
        let mp = assemble_polygons(marching_squares(&f, 0.5).unwrap(), &f, 0.5).unwrap();
        assert_eq!(mp.polygons().len(), 1);
        assert_eq!(mp.polygons()[0].holes.len(), 1);
        assert!(!mp.contains([3.0, 3.0]));
        assert!(mp.contains([1.5, 3.0]));
    }

    #[test]
    fn disjoint_bumps_are_two_shells() {
        let mut v = vec![0.0; 7 * 5];
        v[2 * 7 + 1] = 1.0;
        v[2 * 7 + 5] = 1.0;
        let f = field(7, 5, v);
        let mp = assemble_polygons(marching_squares(&f, 0.5).unwrap(), &f, 0.5).unwrap();
        assert_eq!(mp.polygons().len(), 2);
        assert!(mp.polygons().iter().all(|p| p.holes.is_empty()));
    }

    #[test]
    fn nested_gaussian_contours() {
        let xs: Vec<f64> = (0..300)
            .map(|i| (i as f64 * 0.618).fract() * 4.0 - 2.0)
            .collect();
        let ys: Vec<f64> = (0..300)
            .map(|i| (i as f64 * 0.414).fract() * 2.0 - 1.0)
            .collect();
        let pts = PointSet::new(xs, ys).unwrap();
        let k = kde(&pts, &BandwidthMatrix::new(0.3, 0.05, 0.2).unwrap(), 61).unwrap();
        let set = probability_contours(&k, &[75, 25, 50]).unwrap();
        let labels: Vec<u32> = set.regions.iter().map(|r| r.contlabel).collect();
        assert_eq!(labels, vec![75, 50, 25]);
        assert!(set
            .regions
            .windows(2)
            .all(|w| w[0].estimate <= w[1].estimate));
        assert!(set
            .regions
            .windows(2)
            .all(|w| w[0].geometry.area() >= w[1].geometry.area()));
        assert!(probability_contours(&k, &[]).unwrap().is_empty());
        assert!(probability_contours(&k, &[0]).is_err());
        assert!(probability_contours(&k, &[100]).is_err());
    }

    #[test]
    fn quiver_segments() {
        let pts = PointSet::new(vec![0.0], vec![0.0]).unwrap();
        let grid = Grid2D::from_bounds(-2.0, 2.0, -2.0, 2.0, 9, 9).unwrap();
        let g = kdde_grad_grid(&pts, &BandwidthMatrix::identity(), &grid).unwrap();
        let q = quiver(&g, 3).unwrap();
        let segs = quiver_linestrings(&q);
        // the anchor on the point itself has zero gradient
        assert_eq!(segs.len(), 8);
        let longest = segs.iter().map(|s| s.len).fold(0.0, f64::max);
        assert!((longest - 0.9 * q.spacing).abs() < 1e-12);
    }
}
