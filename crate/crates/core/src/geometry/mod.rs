//! Planar vector geometry: rings, polygons with holes, convex hulls, and the
//! conversions from estimates to GIS-ready features.

mod contours;
pub mod geojson;
mod marching;

pub use contours::{
    assemble_polygons, grid_polygons, probability_contours, quiver_linestrings, ContourRegion,
    ContourSet, GridCell, QuiverSegment,
};
pub use marching::marching_squares;

use crate::error::{KsError, Result};
use crate::types::Point;

/// Closed vertex loop; the first vertex is repeated at the end.
#[derive(Debug, Clone, PartialEq)]
pub struct Ring {
    coords: Vec<Point>,
}

impl Ring {
    /// Closes the loop if needed and removes consecutive duplicates.
    ///
    /// Fails if fewer than three distinct vertices remain.
    pub fn new(mut coords: Vec<Point>) -> Result<Self> {
        coords.dedup();
        while coords.len() > 1 && coords.first() == coords.last() {
            coords.pop();
        }
        if coords.len() < 3 {
            return Err(KsError::InvalidGeometry(format!(
                "ring needs 3 distinct vertices, got {}",
                coords.len()
            )));
        }
        coords.push(coords[0]);
        Ok(Self { coords })
    }

    /// Vertices including the closing repeat.
    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    /// Shoelace signed area; positive for counterclockwise rings.
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.coords)
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn is_ccw(&self) -> bool {
        self.signed_area() > 0.0
    }

    pub fn reversed(&self) -> Self {
        let mut coords = self.coords.clone();
        coords.reverse();
        Self { coords }
    }

    /// Same ring, counterclockwise if `ccw` and clockwise otherwise.
    pub fn oriented(self, ccw: bool) -> Self {
        if self.is_ccw() == ccw {
            self
        } else {
            self.reversed()
        }
    }

    /// Even-odd crossing test; boundary points may go either way.
    pub fn contains(&self, p: Point) -> bool {
        point_in_ring(&self.coords, p)
    }
}

pub(crate) fn signed_area(coords: &[Point]) -> f64 {
    let mut s = 0.0;
    for w in coords.windows(2) {
        s += w[0][0] * w[1][1] - w[1][0] * w[0][1];
    }
    if let (Some(first), Some(last)) = (coords.first(), coords.last()) {
        if first != last {
            s += last[0] * first[1] - first[0] * last[1];
        }
    }
    0.5 * s
}

pub(crate) fn point_in_ring(coords: &[Point], p: Point) -> bool {
    let mut inside = false;
    let n = coords.len();
    if n < 3 {
        return false;
    }
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (coords[i], coords[j]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Shell plus holes. Shells run counterclockwise, holes clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub exterior: Ring,
    pub holes: Vec<Ring>,
}

impl Polygon {
    pub fn new(exterior: Ring, holes: Vec<Ring>) -> Self {
        Self {
            exterior: exterior.oriented(true),
            holes: holes.into_iter().map(|h| h.oriented(false)).collect(),
        }
    }

    pub fn area(&self) -> f64 {
        self.exterior.area() - self.holes.iter().map(Ring::area).sum::<f64>()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.exterior.contains(p) && !self.holes.iter().any(|h| h.contains(p))
    }

    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        let ring = Ring::new(vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
            .expect("rectangle with positive extent");
        Self::new(ring, Vec::new())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MultiPolygon(pub Vec<Polygon>);

impl MultiPolygon {
    pub fn polygons(&self) -> &[Polygon] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.0.iter().map(Polygon::area).sum()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.iter().any(|poly| poly.contains(p))
    }
}

/// Any geometry that can be exported as a GeoJSON feature.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Point(Point),
    LineString(Vec<Point>),
    Polygon(Polygon),
    MultiPolygon(MultiPolygon),
}

/// Convex hull, counterclockwise, by the monotone chain. Degenerate inputs
/// yield a point or a segment.
pub fn convex_hull(points: &[Point]) -> Geometry {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() == 1 {
        return Geometry::Point(pts[0]);
    }
    let cross = |o: Point, a: Point, b: Point| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() < 3 {
        // collinear: the extreme points
        return Geometry::LineString(vec![pts[0], pts[pts.len() - 1]]);
    }
    match Ring::new(hull) {
        Ok(ring) => Geometry::Polygon(Polygon::new(ring, Vec::new())),
        Err(_) => Geometry::LineString(vec![pts[0], pts[pts.len() - 1]]),
    }
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (vx, vy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = vx * vx + vy * vy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * vx + (p[1] - a[1]) * vy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * vx).hypot(p[1] - a[1] - t * vy)
}

/// Distance from `p` to the geometry (zero inside polygons).
pub fn distance_to(geom: &Geometry, p: Point) -> f64 {
    match geom {
        Geometry::Point(q) => (p[0] - q[0]).hypot(p[1] - q[1]),
        Geometry::LineString(line) => line
            .windows(2)
            .map(|w| segment_distance(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min),
        Geometry::Polygon(poly) => {
            if poly.contains(p) {
                0.0
            } else {
                poly.exterior
                    .coords()
                    .windows(2)
                    .map(|w| segment_distance(p, w[0], w[1]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
        Geometry::MultiPolygon(mp) => mp
            .polygons()
            .iter()
            .map(|poly| distance_to(&Geometry::Polygon(poly.clone()), p))
            .fold(f64::INFINITY, f64::min),
    }
}
