use std::collections::{HashMap, HashSet};

use super::Ring;
use crate::error::{KsError, Result};
use crate::types::{DensityField, FieldKind, Point};

/// The field surrounded by one layer of zeros. The padding vertices share
/// the coordinates of the border vertices they surround, so level sets cut
/// by the grid edge get closed along it.
struct Padded<'a> {
    field: &'a DensityField,
    w: usize,
    h: usize,
}

impl Padded<'_> {
    fn value(&self, i: usize, j: usize) -> f64 {
        let g = self.field.grid();
        if i == 0 || j == 0 || i > g.nx || j > g.ny {
            0.0
        } else {
            self.field.at(i - 1, j - 1)
        }
    }

    fn coord(&self, i: usize, j: usize) -> Point {
        let g = self.field.grid();
        let ci = i.saturating_sub(1).min(g.nx - 1);
        let cj = j.saturating_sub(1).min(g.ny - 1);
        g.vertex(ci, cj)
    }

    fn flat(&self, i: usize, j: usize) -> usize {
        j * self.w + i
    }
}

type EdgeKey = (usize, usize);

/// Iso-line rings of `{f ≥ level}` by marching squares with linear
/// interpolation along cell edges.
///
/// Rings enclosing the region run counterclockwise and rings enclosing a
/// gap in it run clockwise. Saddle cells join through the centre when the
/// mean of the four corners is at least `level`. An empty list is returned
/// for `level ≥ max f`.
pub fn marching_squares(field: &DensityField, level: f64) -> Result<Vec<Ring>> {
    if field.kind() != FieldKind::Density {
        return Err(KsError::InvalidArgument(format!(
            "marching squares needs a density field, got {:?}",
            field.kind()
        )));
    }
    if !level.is_finite() || level <= 0.0 {
        return Err(KsError::InvalidLevel(level));
    }
    if level >= field.max() {
        return Ok(Vec::new());
    }
    let g = field.grid();
    let pad = Padded {
        field,
        w: g.nx + 2,
        h: g.ny + 2,
    };

    let mut points: HashMap<EdgeKey, Point> = HashMap::new();
    let mut crossing = |a: (usize, usize), b: (usize, usize)| -> EdgeKey {
        let (ka, kb) = (pad.flat(a.0, a.1), pad.flat(b.0, b.1));
        let (lo, hi, key) = if ka < kb {
            (a, b, (ka, kb))
        } else {
            (b, a, (kb, ka))
        };
        points.entry(key).or_insert_with(|| {
            let (va, vb) = (pad.value(lo.0, lo.1), pad.value(hi.0, hi.1));
            let (pa, pb) = (pad.coord(lo.0, lo.1), pad.coord(hi.0, hi.1));
            let t = (level - va) / (vb - va);
            [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
        });
        key
    };

    // segments keyed by their start edge; each runs exit → enter so the
    // region lies on its left
    let mut next: HashMap<EdgeKey, EdgeKey> = HashMap::new();
    let mut order: Vec<EdgeKey> = Vec::new();
    for j in 0..pad.h - 1 {
        for i in 0..pad.w - 1 {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let vals = corners.map(|(a, b)| pad.value(a, b));
            let inside = vals.map(|v| v >= level);
            if inside.iter().all(|&b| b) || inside.iter().all(|&b| !b) {
                continue;
            }
            let mut exits: Vec<(usize, EdgeKey)> = Vec::with_capacity(2);
            let mut enters: Vec<(usize, EdgeKey)> = Vec::with_capacity(2);
            for k in 0..4 {
                let k1 = (k + 1) % 4;
                if inside[k] != inside[k1] {
                    let key = crossing(corners[k], corners[k1]);
                    if inside[k] {
                        exits.push((k, key));
                    } else {
                        enters.push((k, key));
                    }
                }
            }
            let joined = exits.len() == 2 && vals.iter().sum::<f64>() / 4.0 >= level;
            for &(ek, ekey) in &exits {
                let pick = |forward: bool| {
                    enters
                        .iter()
                        .min_by_key(|(nk, _)| {
                            if forward {
                                (nk + 4 - ek) % 4
                            } else {
                                (ek + 4 - nk) % 4
                            }
                        })
                        .map(|&(_, key)| key)
                        .expect("every exit has an enter in the same cell")
                };
                // a lone pair is both the next and the previous enter
                let to = if exits.len() == 1 || joined {
                    pick(true)
                } else {
                    pick(false)
                };
                next.insert(ekey, to);
                order.push(ekey);
            }
        }
    }

    let mut rings = Vec::new();
    let mut used: HashSet<EdgeKey> = HashSet::with_capacity(order.len());
    for &start in &order {
        if used.contains(&start) {
            continue;
        }
        let mut coords = Vec::new();
        let mut key = start;
        loop {
            used.insert(key);
            coords.push(points[&key]);
            key = match next.get(&key) {
                Some(&k) => k,
                None => break,
            };
            if key == start {
                break;
            }
        }
        if let Ok(ring) = Ring::new(coords) {
            rings.push(ring);
        }
    }
    Ok(rings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Grid2D;

    fn field(nx: usize, ny: usize, values: Vec<f64>) -> DensityField {
        let grid = Grid2D::new(0.0, 0.0, 1.0, 1.0, nx, ny).unwrap();
        DensityField::new(grid, values, FieldKind::Density).unwrap()
    }

    #[test]
    fn single_corner_above() {
        // 2×2 grid, one cell; only (1,1) is above the level
        let f = field(2, 2, vec![0.0, 0.0, 0.0, 1.0]);
        let rings = marching_squares(&f, 0.5).unwrap();
        assert_eq!(rings.len(), 1);
        let r = &rings[0];
        assert!(r.is_ccw());
        // the two interpolated crossings plus the corner from border closure
        let mut pts: Vec<Point> = r.coords()[..r.coords().len() - 1].to_vec();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(pts, vec![[0.5, 1.0], [1.0, 0.5], [1.0, 1.0]]);
        assert!((r.area() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn level_bounds() {
        let f = field(2, 2, vec![0.0, 0.0, 0.0, 1.0]);
        assert!(marching_squares(&f, 1.0).unwrap().is_empty());
        assert!(marching_squares(&f, 2.0).unwrap().is_empty());
        assert_eq!(marching_squares(&f, 0.0), Err(KsError::InvalidLevel(0.0)));
    }

    #[test]
    fn interior_bump_is_one_ccw_ring() {
        let mut v = vec![0.0; 25];
        v[12] = 1.0;
        let rings = marching_squares(&field(5, 5, v), 0.5).unwrap();
        assert_eq!(rings.len(), 1);
        assert!(rings[0].is_ccw());
        assert_eq!(rings[0].coords().len(), 5);
        assert!((rings[0].area() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn annulus_gives_shell_and_hole() {
        let mut v = vec![0.0; 49];
        for j in 1..6 {
            for i in 1..6 {
                v[j * 7 + i] = 1.0;
            }
        }
        v[3 * 7 + 3] = 0.0;
        let rings = marching_squares(&field(7, 7, v), 0.5).unwrap();
        assert_eq!(rings.len(), 2);
        let ccw: Vec<bool> = rings.iter().map(Ring::is_ccw).collect();
        assert!(ccw.contains(&true) && ccw.contains(&false));
    }

    #[test]
    fn saddle_resolution() {
        // diagonal corners above; centre mean decides connectivity
        let join = field(2, 2, vec![1.0, 0.0, 0.0, 1.0]);
        let split = marching_squares(&join, 0.4).unwrap();
        assert_eq!(split.len(), 1, "mean 0.5 ≥ 0.4 joins the corners");
        let apart = marching_squares(&join, 0.6).unwrap();
        assert_eq!(apart.len(), 2, "mean 0.5 < 0.6 separates the corners");
        assert!(apart.iter().all(Ring::is_ccw));
    }

    #[test]
    fn border_region_closed_along_edge() {
        let f = field(3, 3, vec![1.0; 9]);
        let rings = marching_squares(&f, 0.5).unwrap();
        assert_eq!(rings.len(), 1);
        assert!((rings[0].area() - 4.0).abs() < 1e-15);
        assert!(rings[0].is_ccw());
    }

    #[test]
    fn rejects_gradient_fields() {
        let grid = Grid2D::new(0.0, 0.0, 1.0, 1.0, 2, 2).unwrap();
        let f = DensityField::new(grid, vec![0.0, -1.0, 1.0, 0.0], FieldKind::GradientDx).unwrap();
        assert!(marching_squares(&f, 0.5).is_err());
    }
}
