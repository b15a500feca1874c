//! Static SVG figures: filled contours with a legend, scatter overlays,
//! label grids, quiver arrows and cluster hulls.

use std::fmt::Write;

use crate::geometry::{ContourSet, Geometry, GridCell, MultiPolygon, Polygon, QuiverSegment, Ring};
use crate::types::{fmt_sig, Point};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

/// Sequential ramp, light to dark.
const RAMP: [&str; 9] = [
    "#fde725", "#b5de2b", "#6ece58", "#35b779", "#1f9e89", "#26828e", "#31688e", "#3e4989",
    "#482878",
];

/// Qualitative cycle for classes and clusters.
const CYCLE: [&str; 8] = [
    "#e7298a", "#1b9e77", "#d95f02", "#7570b3", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

pub fn class_color(k: usize) -> &'static str {
    CYCLE[k % CYCLE.len()]
}

/// Ramp colours for `n` nested regions, outermost first.
fn ramp(n: usize) -> Vec<&'static str> {
    match n {
        0 => Vec::new(),
        1 => vec![RAMP[4]],
        _ => (0..n)
            .map(|i| RAMP[(i * (RAMP.len() - 1)) / (n - 1)])
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlotLayer {
    /// Filled regions, outermost drawn first, with one legend entry per region.
    FilledContours(ContourSet),
    /// Region outlines in one colour.
    ContourLines {
        set: ContourSet,
        color: String,
        name: String,
    },
    Points {
        points: Vec<Point>,
        color: String,
        name: String,
    },
    /// Grid rectangles coloured by 1-based class index.
    Cells {
        cells: Vec<GridCell>,
        names: Vec<String>,
    },
    Quiver(Vec<QuiverSegment>),
    /// Outlines coloured by 1-based cluster index.
    Hulls(Vec<(u32, Geometry)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub xlabel: String,
    pub ylabel: String,
    /// `(xmin, xmax, ymin, ymax)` of the plotting window.
    pub bounds: (f64, f64, f64, f64),
    pub layers: Vec<PlotLayer>,
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, p: Point) -> (f64, f64) {
        let w = WIDTH - LEFT - RIGHT;
        let h = HEIGHT - TOP - BOTTOM;
        (
            LEFT + (p[0] - self.x0) / (self.x1 - self.x0) * w,
            TOP + (self.y1 - p[1]) / (self.y1 - self.y0) * h,
        )
    }

    fn ring_path(&self, ring: &Ring, d: &mut String) {
        for (k, &p) in ring.coords().iter().enumerate() {
            let (x, y) = self.px(p);
            let _ = write!(d, "{}{:.2} {:.2} ", if k == 0 { "M" } else { "L" }, x, y);
        }
        d.push('Z');
    }

    fn polygon_path(&self, poly: &Polygon, d: &mut String) {
        self.ring_path(&poly.exterior, d);
        for h in &poly.holes {
            d.push(' ');
            self.ring_path(h, d);
        }
    }

    fn multi_path(&self, mp: &MultiPolygon) -> String {
        let mut d = String::new();
        for (k, p) in mp.polygons().iter().enumerate() {
            if k > 0 {
                d.push(' ');
            }
            self.polygon_path(p, &mut d);
        }
        d
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if span.is_nan() || span <= 0.0 {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let start = (lo / step).ceil() as i64;
    let end = (hi / step).floor() as i64;
    (start..=end).map(|k| k as f64 * step).collect()
}

struct Legend {
    entries: Vec<(String, String, &'static str)>,
}

pub fn render_svg(plot: &Plot) -> String {
    let (x0, mut x1, y0, mut y1) = plot.bounds;
    if x1.is_nan() || x0.is_nan() || x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1.is_nan() || y0.is_nan() || y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let f = Frame { x0, x1, y0, y1 };
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        s,
        r#"<clipPath id="panel"><rect x="{LEFT}" y="{TOP}" width="{}" height="{}"/></clipPath>"#,
        WIDTH - LEFT - RIGHT,
        HEIGHT - TOP - BOTTOM
    );
    let mut legend = Legend {
        entries: Vec::new(),
    };
    let _ = writeln!(s, r#"<g clip-path="url(#panel)">"#);
    for layer in &plot.layers {
        draw_layer(&f, layer, &mut s, &mut legend);
    }
    let _ = writeln!(s, "</g>");
    draw_axes(&f, plot, &mut s);
    draw_legend(&legend, &mut s);
    s.push_str("</svg>\n");
    s
}

fn draw_layer(f: &Frame, layer: &PlotLayer, s: &mut String, legend: &mut Legend) {
    match layer {
        PlotLayer::FilledContours(set) => {
            let colors = ramp(set.len());
            for (r, c) in set.regions.iter().zip(&colors) {
                let _ = writeln!(
                    s,
                    r#"<path class="region" data-contlabel="{}" d="{}" fill="{}" fill-rule="evenodd" stroke="none"/>"#,
                    r.contlabel,
                    f.multi_path(&r.geometry),
                    c
                );
            }
            for (r, c) in set.regions.iter().zip(&colors).rev() {
                legend
                    .entries
                    .push((format!("{}%", r.contlabel), (*c).to_string(), "fill"));
            }
        }
        PlotLayer::ContourLines { set, color, name } => {
            for r in &set.regions {
                let _ = writeln!(
                    s,
                    r#"<path class="contour" data-contlabel="{}" d="{}" fill="none" stroke="{}" stroke-width="1"/>"#,
                    r.contlabel,
                    f.multi_path(&r.geometry),
                    color
                );
            }
            if !set.is_empty() {
                legend.entries.push((name.clone(), color.clone(), "line"));
            }
        }
        PlotLayer::Points {
            points,
            color,
            name,
        } => {
            let _ = writeln!(s, r#"<g class="points" fill="{color}" fill-opacity="0.6">"#);
            for &p in points {
                let (x, y) = f.px(p);
                let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.8"/>"#);
            }
            s.push_str("</g>\n");
            legend.entries.push((name.clone(), color.clone(), "point"));
        }
        PlotLayer::Cells { cells, names } => {
            let _ = writeln!(s, r#"<g class="cells" fill-opacity="0.35" stroke="none">"#);
            for c in cells {
                let mut d = String::new();
                f.polygon_path(&c.polygon, &mut d);
                let _ = writeln!(
                    s,
                    r#"<path d="{}" fill="{}"/>"#,
                    d,
                    class_color(c.label as usize - 1)
                );
            }
            s.push_str("</g>\n");
            for (k, n) in names.iter().enumerate() {
                legend
                    .entries
                    .push((n.clone(), class_color(k).to_string(), "fill"));
            }
        }
        PlotLayer::Quiver(segs) => {
            let _ = writeln!(
                s,
                r##"<g class="quiver" stroke="#333333" stroke-width="0.8" fill="#333333">"##
            );
            for q in segs {
                let (ax, ay) = f.px(q.start);
                let (bx, by) = f.px(q.end);
                let _ = writeln!(
                    s,
                    r#"<line x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}"/>"#
                );
                let (dx, dy) = (bx - ax, by - ay);
                let len = dx.hypot(dy);
                if len > 0.0 {
                    let head = (0.3 * len).min(5.0);
                    let (ux, uy) = (dx / len, dy / len);
                    let (lx, ly) = (bx - head * (ux + 0.5 * uy), by - head * (uy - 0.5 * ux));
                    let (rx, ry) = (bx - head * (ux - 0.5 * uy), by - head * (uy + 0.5 * ux));
                    let _ = writeln!(
                        s,
                        r#"<path d="M{bx:.2} {by:.2} L{lx:.2} {ly:.2} L{rx:.2} {ry:.2} Z" stroke="none"/>"#
                    );
                }
            }
            s.push_str("</g>\n");
        }
        PlotLayer::Hulls(hulls) => {
            for (k, g) in hulls {
                let color = class_color(*k as usize - 1);
                let d = match g {
                    Geometry::Polygon(p) => {
                        let mut d = String::new();
                        f.polygon_path(p, &mut d);
                        d
                    }
                    Geometry::MultiPolygon(mp) => f.multi_path(mp),
                    Geometry::LineString(line) => line
                        .iter()
                        .enumerate()
                        .map(|(i, &p)| {
                            let (x, y) = f.px(p);
                            format!("{}{:.2} {:.2}", if i == 0 { "M" } else { " L" }, x, y)
                        })
                        .collect(),
                    Geometry::Point(p) => {
                        let (x, y) = f.px(*p);
                        format!("M{:.2} {:.2} L{:.2} {:.2}", x - 2.0, y, x + 2.0, y)
                    }
                };
                let _ = writeln!(
                    s,
                    r#"<path class="hull" data-cluster="{k}" d="{d}" fill="{color}" fill-opacity="0.15" stroke="{color}" stroke-width="1.5"/>"#
                );
                legend
                    .entries
                    .push((format!("cluster {k}"), color.to_string(), "line"));
            }
        }
    }
}

fn draw_axes(f: &Frame, plot: &Plot, s: &mut String) {
    let (l, t) = (LEFT, TOP);
    let (w, h) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let _ = writeln!(s, r##"<g class="axes" stroke="#000000" fill="none">"##);
    let _ = writeln!(s, r#"<rect x="{l}" y="{t}" width="{w}" height="{h}"/>"#);
    for x in ticks(f.x0, f.x1) {
        let (px, _) = f.px([x, f.y0]);
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}"/>"#,
            t + h,
            t + h + 5.0
        );
    }
    for y in ticks(f.y0, f.y1) {
        let (_, py) = f.px([f.x0, y]);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{l:.2}" y2="{py:.2}"/>"#,
            l - 5.0
        );
    }
    s.push_str("</g>\n");
    let _ = writeln!(s, r##"<g class="labels" fill="#000000">"##);
    for x in ticks(f.x0, f.x1) {
        let (px, _) = f.px([x, f.y0]);
        let _ = writeln!(
            s,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            t + h + 17.0,
            fmt_sig(x)
        );
    }
    for y in ticks(f.y0, f.y1) {
        let (_, py) = f.px([f.x0, y]);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            l - 8.0,
            py + 4.0,
            fmt_sig(y)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
        l + w / 2.0,
        HEIGHT - 12.0,
        escape(&plot.xlabel)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" font-size="13" transform="rotate(-90 16 {:.2})">{}</text>"#,
        t + h / 2.0,
        t + h / 2.0,
        escape(&plot.ylabel)
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        l + w / 2.0,
        escape(&plot.title)
    );
    s.push_str("</g>\n");
}

fn draw_legend(legend: &Legend, s: &mut String) {
    if legend.entries.is_empty() {
        return;
    }
    let x = WIDTH - RIGHT + 15.0;
    let _ = writeln!(s, r#"<g class="legend">"#);
    for (k, (label, color, kind)) in legend.entries.iter().enumerate() {
        let y = TOP + 10.0 + 18.0 * k as f64;
        let mark = match *kind {
            "fill" => format!(
                r#"<rect x="{x}" y="{:.2}" width="12" height="12" fill="{color}"/>"#,
                y - 10.0
            ),
            "line" => format!(
                r#"<line x1="{x}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"/>"#,
                y - 4.0,
                x + 12.0,
                y - 4.0
            ),
            _ => format!(
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                x + 6.0,
                y - 4.0
            ),
        };
        let _ = writeln!(
            s,
            r##"<g class="legend-entry">{mark}<text x="{:.2}" y="{y:.2}" fill="#000000">{}</text></g>"##,
            x + 18.0,
            escape(label)
        );
    }
    s.push_str("</g>\n");
}
