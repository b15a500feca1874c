//! RFC 7946 FeatureCollection output.
//!
//! Documents are written in a canonical form: object keys sorted, no
//! whitespace, coordinates rounded to six decimals. Parsing a document and
//! serialising it again reproduces it byte for byte.

use serde_json::{json, Map, Value};

use super::{
    signed_area, ContourSet, Geometry, GridCell, MultiPolygon, Polygon, QuiverSegment, Ring,
};
use crate::error::{KsError, Result};
use crate::types::Point;

/// Coordinate precision in decimal places.
pub const COORD_DECIMALS: i32 = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct Feature {
    pub geometry: Geometry,
    pub properties: Map<String, Value>,
}

impl Feature {
    pub fn new(geometry: Geometry) -> Self {
        Self {
            geometry,
            properties: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.properties.insert(key.to_string(), value.into());
        self
    }
}

/// A named list of features, written as one FeatureCollection.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Layer {
    pub name: String,
    pub features: Vec<Feature>,
}

impl Layer {
    pub fn new(name: impl Into<String>, features: Vec<Feature>) -> Self {
        Self {
            name: name.into(),
            features,
        }
    }

    /// `contlabel` (string) and `estimate` (number) per region.
    pub fn from_contours(name: impl Into<String>, set: &ContourSet) -> Self {
        let features = set
            .regions
            .iter()
            .map(|r| {
                Feature::new(Geometry::MultiPolygon(r.geometry.clone()))
                    .with("contlabel", r.contlabel.to_string())
                    .with("estimate", r.estimate)
            })
            .collect();
        Self::new(name, features)
    }

    pub fn from_grid_cells(
        name: impl Into<String>,
        cells: &[GridCell],
        classes: &[String],
    ) -> Self {
        let features = cells
            .iter()
            .map(|c| {
                let class = classes
                    .get(c.label as usize - 1)
                    .cloned()
                    .unwrap_or_default();
                Feature::new(Geometry::Polygon(c.polygon.clone()))
                    .with("label", c.label)
                    .with("class", class)
            })
            .collect();
        Self::new(name, features)
    }

    pub fn from_quiver(name: impl Into<String>, segments: &[QuiverSegment]) -> Self {
        let features = segments
            .iter()
            .map(|s| Feature::new(Geometry::LineString(vec![s.start, s.end])).with("len", s.len))
            .collect();
        Self::new(name, features)
    }
}

fn round(x: f64) -> f64 {
    let m = 10f64.powi(COORD_DECIMALS);
    let r = (x * m).round() / m;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn finite(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(KsError::InvalidGeometry(format!(
            "non-finite coordinate {x}"
        )))
    }
}

fn position(p: Point) -> Result<Value> {
    Ok(json!([round(finite(p[0])?), round(finite(p[1])?)]))
}

/// Rounded ring positions with the requested winding, or `None` when
/// rounding collapses the ring.
fn ring_positions(ring: &Ring, ccw: bool) -> Result<Option<Value>> {
    let coords = ring.coords();
    if coords.len() < 4 || coords.first() != coords.last() {
        return Err(KsError::InvalidGeometry(format!(
            "ring must be closed with ≥ 4 positions, got {}",
            coords.len()
        )));
    }
    let mut pts: Vec<Point> = Vec::with_capacity(coords.len());
    for &[x, y] in coords {
        pts.push([round(finite(x)?), round(finite(y)?)]);
    }
    pts.dedup();
    if pts.len() < 4 || pts.first() != pts.last() {
        return Ok(None);
    }
    let area = signed_area(&pts);
    if area == 0.0 {
        return Ok(None);
    }
    if (area > 0.0) != ccw {
        pts.reverse();
    }
    Ok(Some(Value::Array(
        pts.into_iter().map(|p| json!([p[0], p[1]])).collect(),
    )))
}

fn polygon_coords(poly: &Polygon) -> Result<Option<Value>> {
    let Some(shell) = ring_positions(&poly.exterior, true)? else {
        return Ok(None);
    };
    let mut rings = vec![shell];
    for h in &poly.holes {
        if let Some(r) = ring_positions(h, false)? {
            rings.push(r);
        }
    }
    Ok(Some(Value::Array(rings)))
}

fn multipolygon_coords(mp: &MultiPolygon) -> Result<Value> {
    let mut out = Vec::with_capacity(mp.polygons().len());
    for p in mp.polygons() {
        if let Some(c) = polygon_coords(p)? {
            out.push(c);
        }
    }
    Ok(Value::Array(out))
}

pub fn geometry_value(geom: &Geometry) -> Result<Value> {
    let (kind, coords) = match geom {
        Geometry::Point(p) => ("Point", position(*p)?),
        Geometry::LineString(line) => {
            if line.len() < 2 {
                return Err(KsError::InvalidGeometry(
                    "line string needs ≥ 2 positions".into(),
                ));
            }
            (
                "LineString",
                Value::Array(line.iter().map(|&p| position(p)).collect::<Result<_>>()?),
            )
        }
        Geometry::Polygon(p) => {
            let coords = polygon_coords(p)?.ok_or_else(|| {
                KsError::InvalidGeometry("polygon collapses at output precision".into())
            })?;
            ("Polygon", coords)
        }
        Geometry::MultiPolygon(mp) => ("MultiPolygon", multipolygon_coords(mp)?),
    };
    Ok(json!({ "type": kind, "coordinates": coords }))
}

pub fn layer_value(layer: &Layer) -> Result<Value> {
    let features = layer
        .features
        .iter()
        .map(|f| {
            Ok(json!({
                "type": "Feature",
                "geometry": geometry_value(&f.geometry)?,
                "properties": Value::Object(f.properties.clone()),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "type": "FeatureCollection",
        "name": layer.name,
        "features": features,
    }))
}

/// Canonical FeatureCollection text for one layer.
pub fn write_geojson(layer: &Layer) -> Result<String> {
    Ok(layer_value(layer)?.to_string())
}

/// Parses a document and re-serialises it in canonical form.
pub fn canonicalize(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| KsError::InvalidGeometry(format!("invalid JSON: {e}")))?;
    Ok(v.to_string())
}
