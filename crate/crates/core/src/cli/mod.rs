//! Command-line front end.
//!
//! Subcommands `kde`, `kda`, `kdde`, `kms` and `breaks` read points from
//! CSV, select a bandwidth and write CSV, GeoJSON and SVG outputs. The
//! selected bandwidth is echoed on standard error as
//! `H = [h11, h12; h12, h22]`. Exit status is 0 on success, 2 on usage
//! errors and 1 on data or numerical failures.

pub mod io;
pub mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bandwidth::{Method, SelectorSpec};
use crate::classify::{kda_fit, kda_grid_labels, HullMask};
use crate::density::{
    contour_breaks, kde_at, kde_grid, make_grid, KdeResult, DEFAULT_MIN_GAP, GRID_EXTENSION,
};
use crate::derivative::{kdde_grad_grid, quiver};
use crate::error::KsError;
use crate::geometry::geojson::{write_geojson, Feature, Layer};
use crate::geometry::{
    grid_polygons, probability_contours, quiver_linestrings, ContourSet, Geometry,
};
use crate::meanshift::{cluster_hulls, ms_cluster, MeanShiftConfig};
use crate::types::{BandwidthMatrix, Grid2D, PointSet};
use io::{read_points_csv_filtered, write_grid_csv, write_table, RowFilter};
use svg::{class_color, render_svg, Plot, PlotLayer};

#[derive(Debug, Parser)]
#[command(name = "ksmooth", version, about = "Bivariate kernel smoothing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density estimate, probability contours.
    Kde(KdeArgs),
    /// Kernel discriminant analysis over a group column.
    Kda(KdaArgs),
    /// Density gradient and quiver field.
    Kdde(KddeArgs),
    /// Mean shift clustering.
    Kms(KmsArgs),
    /// Common contour heights across groups.
    Breaks(BreaksArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "x")]
    pub x: String,
    #[arg(long, default_value = "y")]
    pub y: String,
    /// Keep only rows where COLUMN equals VALUE (repeatable).
    #[arg(long = "where", value_name = "COLUMN=VALUE")]
    pub filters: Vec<RowFilter>,
}

#[derive(Debug, Args)]
pub struct SmoothArgs {
    /// auto | ns | pi | pi1 | ucv | dpik | "h11,h12,h22".
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    pub bandwidth: String,
    /// Derivative order the bandwidth targets (0 or 1).
    #[arg(long)]
    pub deriv_order: Option<usize>,
    /// Grid vertices per axis.
    #[arg(long, default_value_t = 151)]
    pub gridsize: usize,
}

#[derive(Debug, Args)]
pub struct ContArgs {
    /// Contour probabilities in percent.
    #[arg(long, value_delimiter = ',', default_value = "25,50,75")]
    pub cont: Vec<u32>,
}

#[derive(Debug, Args)]
pub struct KdeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub smooth: SmoothArgs,
    #[command(flatten)]
    pub cont: ContArgs,
    /// Density grid as CSV (x, y, estimate).
    #[arg(long)]
    pub grid_csv: Option<PathBuf>,
    /// Probability contours as GeoJSON.
    #[arg(long)]
    pub geojson: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KdaArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub smooth: SmoothArgs,
    #[command(flatten)]
    pub cont: ContArgs,
    /// Class label column.
    #[arg(long)]
    pub group: String,
    /// Label all grid vertices instead of only those near the data hull.
    #[arg(long)]
    pub no_hull: bool,
    /// Label grid as CSV (x, y, label).
    #[arg(long)]
    pub grid_csv: Option<PathBuf>,
    /// Labelled grid cells as GeoJSON.
    #[arg(long)]
    pub geojson: Option<PathBuf>,
    /// Per-class probability contours as GeoJSON.
    #[arg(long)]
    pub contours_geojson: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KddeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub smooth: SmoothArgs,
    #[command(flatten)]
    pub cont: ContArgs,
    /// Quiver subgrid size per axis.
    #[arg(long, default_value_t = 9)]
    pub thin: usize,
    /// Gradient grid as CSV (x, y, estimate, grad_x, grad_y).
    #[arg(long)]
    pub grid_csv: Option<PathBuf>,
    /// Quiver arrows as GeoJSON line strings.
    #[arg(long)]
    pub geojson: Option<PathBuf>,
    /// Density contours as GeoJSON.
    #[arg(long)]
    pub contours_geojson: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KmsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub smooth: SmoothArgs,
    #[arg(long, default_value_t = 1)]
    pub min_clust_size: usize,
    #[arg(long, default_value_t = 400)]
    pub max_iter: usize,
    /// Points with cluster labels as CSV (x, y, label).
    #[arg(long)]
    pub points_csv: Option<PathBuf>,
    /// Cluster modes as CSV (label, x, y, size).
    #[arg(long)]
    pub modes_csv: Option<PathBuf>,
    /// Cluster hulls as GeoJSON.
    #[arg(long)]
    pub geojson: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BreaksArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub smooth: SmoothArgs,
    #[command(flatten)]
    pub cont: ContArgs,
    /// One estimate per distinct value of this column.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MIN_GAP)]
    pub min_gap: f64,
    /// Write heights here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Failures split by exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(KsError),
}

impl From<KsError> for Failure {
    fn from(e: KsError) -> Self {
        Failure::Data(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses a bandwidth flag into a selector; `default_order` applies to
/// `auto`, `ns` and `pi` unless `--deriv-order` overrides it.
pub fn parse_bandwidth(
    text: &str,
    default_order: usize,
    deriv_order: Option<usize>,
) -> Result<SelectorSpec, String> {
    let order = deriv_order.unwrap_or(default_order);
    let s = text.trim();
    let selector = match s {
        "auto" | "pi" => SelectorSpec::new(Method::Plugin, order),
        "pi1" => SelectorSpec::new(Method::Plugin, deriv_order.unwrap_or(1)),
        "ns" => SelectorSpec::new(Method::NormalScale, order),
        "ucv" => SelectorSpec::new(Method::Ucv, deriv_order.unwrap_or(0)),
        "dpik" => SelectorSpec::new(Method::DiagPlugin, deriv_order.unwrap_or(0)),
        _ => {
            let parts: Vec<f64> = s
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| format!("unrecognised bandwidth {text:?}"))?;
            if parts.len() != 3 {
                return Err(format!("fixed bandwidth needs h11,h12,h22; got {text:?}"));
            }
            return BandwidthMatrix::new(parts[0], parts[1], parts[2])
                .map(SelectorSpec::fixed)
                .map_err(|e| e.to_string());
        }
    };
    selector.map_err(|e| e.to_string())
}

fn check_cont(cont: &[u32]) -> Outcome {
    match cont.iter().find(|p| !(1..=99).contains(*p)) {
        Some(p) => Err(Failure::Usage(format!(
            "--cont values must lie in 1..=99, got {p}"
        ))),
        None => Ok(()),
    }
}

fn check_grid(n: usize) -> Outcome {
    if n < 2 {
        Err(Failure::Usage(format!("--gridsize must be ≥ 2, got {n}")))
    } else {
        Ok(())
    }
}

struct Context<'a> {
    err: &'a mut dyn Write,
    out: &'a mut dyn Write,
}

impl Context<'_> {
    fn echo_h(&mut self, h: &BandwidthMatrix, what: Option<&str>) {
        let _ = match what {
            Some(w) => writeln!(self.err, "H = {h} ({w})"),
            None => writeln!(self.err, "H = {h}"),
        };
    }
}

fn load(input: &InputArgs, group: Option<&str>, ctx: &mut Context) -> Result<PointSet, Failure> {
    let r = read_points_csv_filtered(&input.input, &input.x, &input.y, group, &input.filters)?;
    if r.dropped > 0 {
        let _ = writeln!(
            ctx.err,
            "warning: dropped {} rows with missing or non-numeric values",
            r.dropped
        );
    }
    Ok(r.points)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Data(KsError::Io(format!("{}: {e}", path.display()))))
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, Failure> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| Failure::Data(KsError::Io(format!("{}: {e}", path.display()))))
}

fn grid_bounds(g: &Grid2D) -> (f64, f64, f64, f64) {
    (g.x0, g.x_max(), g.y0, g.y_max())
}

fn contour_feature_layer(name: &str, sets: &[(Option<&str>, &ContourSet)]) -> Layer {
    let mut features = Vec::new();
    for (class, set) in sets {
        for r in &set.regions {
            let mut f = Feature::new(Geometry::MultiPolygon(r.geometry.clone()))
                .with("contlabel", r.contlabel.to_string())
                .with("estimate", r.estimate);
            if let Some(c) = class {
                f = f.with("class", *c);
            }
            features.push(f);
        }
    }
    Layer::new(name, features)
}

fn run_kde(a: &KdeArgs, ctx: &mut Context) -> Outcome {
    check_cont(&a.cont.cont)?;
    check_grid(a.smooth.gridsize)?;
    let sel =
        parse_bandwidth(&a.smooth.bandwidth, 0, a.smooth.deriv_order).map_err(Failure::Usage)?;
    let pts = load(&a.input, None, ctx)?;
    let h = sel.select(&pts)?;
    ctx.echo_h(&h, None);
    let grid = make_grid(&pts, &h, a.smooth.gridsize, a.smooth.gridsize)?;
    let est = kde_grid(&pts, &h, &grid)?;
    let set = probability_contours(&est, &a.cont.cont)?;

    let _ = writeln!(ctx.out, "contlabel,estimate");
    for r in &set.regions {
        let _ = writeln!(ctx.out, "{},{}", r.contlabel, r.estimate);
    }
    if let Some(p) = &a.grid_csv {
        write_grid_csv(create(p)?, &["estimate"], &[&est.field])?;
    }
    if let Some(p) = &a.geojson {
        write_file(p, &write_geojson(&Layer::from_contours("contours", &set))?)?;
    }
    if let Some(p) = &a.svg {
        let plot = Plot {
            title: "Density estimate".into(),
            xlabel: a.input.x.clone(),
            ylabel: a.input.y.clone(),
            bounds: grid_bounds(&grid),
            layers: vec![PlotLayer::FilledContours(set)],
        };
        write_file(p, &render_svg(&plot))?;
    }
    Ok(())
}

fn run_kda(a: &KdaArgs, ctx: &mut Context) -> Outcome {
    check_cont(&a.cont.cont)?;
    check_grid(a.smooth.gridsize)?;
    if a.smooth.bandwidth.trim() != "auto" && a.smooth.bandwidth.trim() != "pi" {
        return Err(Failure::Usage(
            "kda uses per-class plug-in bandwidths; --bandwidth must be auto or pi".into(),
        ));
    }
    let pts = load(&a.input, Some(&a.group), ctx)?;
    let c = kda_fit(&pts)?;
    for m in &c.classes {
        ctx.echo_h(&m.h, Some(&format!("class {}", m.label)));
    }
    let _ = writeln!(ctx.out, "class,n,prior");
    for m in &c.classes {
        let _ = writeln!(ctx.out, "{},{},{}", m.label, m.points.len(), m.prior);
    }

    let (x0, x1, y0, y1) = pts.bounds();
    let ex = c
        .classes
        .iter()
        .map(|m| m.h.h11().sqrt())
        .fold(0.0, f64::max)
        * GRID_EXTENSION;
    let ey = c
        .classes
        .iter()
        .map(|m| m.h.h22().sqrt())
        .fold(0.0, f64::max)
        * GRID_EXTENSION;
    let n = a.smooth.gridsize;
    let grid = Grid2D::from_bounds(x0 - ex, x1 + ex, y0 - ey, y1 + ey, n, n)?;
    let mask = HullMask::for_grid(&c, &grid);
    let labels = kda_grid_labels(&c, &grid, if a.no_hull { None } else { Some(&mask) })?;

    let mut sets = Vec::with_capacity(c.len());
    for m in &c.classes {
        let est = kde_grid(&m.points, &m.h, &grid)?;
        sets.push(probability_contours(&est, &a.cont.cont)?);
    }

    if let Some(p) = &a.grid_csv {
        let rows = (0..grid.ny).flat_map(|j| {
            let labels = &labels;
            (0..grid.nx).map(move |i| {
                vec![
                    grid.x(i).to_string(),
                    grid.y(j).to_string(),
                    labels.label(i, j).to_string(),
                ]
            })
        });
        write_table(create(p)?, &["x", "y", "label"], rows)?;
    }
    let cells = grid_polygons(&labels);
    if let Some(p) = &a.geojson {
        write_file(
            p,
            &write_geojson(&Layer::from_grid_cells("labels", &cells, &labels.classes))?,
        )?;
    }
    if let Some(p) = &a.contours_geojson {
        let named: Vec<(Option<&str>, &ContourSet)> = c
            .classes
            .iter()
            .zip(&sets)
            .map(|(m, s)| (Some(m.label.as_str()), s))
            .collect();
        write_file(
            p,
            &write_geojson(&contour_feature_layer("contours", &named))?,
        )?;
    }
    if let Some(p) = &a.svg {
        let mut layers = vec![PlotLayer::Cells {
            cells,
            names: labels.classes.clone(),
        }];
        for (k, (m, s)) in c.classes.iter().zip(sets).enumerate() {
            layers.push(PlotLayer::ContourLines {
                set: s,
                color: class_color(k).to_string(),
                name: format!("{} contours", m.label),
            });
        }
        let plot = Plot {
            title: "Kernel discriminant analysis".into(),
            xlabel: a.input.x.clone(),
            ylabel: a.input.y.clone(),
            bounds: grid_bounds(&grid),
            layers,
        };
        write_file(p, &render_svg(&plot))?;
    }
    Ok(())
}

fn run_kdde(a: &KddeArgs, ctx: &mut Context) -> Outcome {
    check_cont(&a.cont.cont)?;
    check_grid(a.smooth.gridsize)?;
    let sel =
        parse_bandwidth(&a.smooth.bandwidth, 1, a.smooth.deriv_order).map_err(Failure::Usage)?;
    let pts = load(&a.input, None, ctx)?;
    let h = sel.select(&pts)?;
    ctx.echo_h(&h, None);
    let grid = make_grid(&pts, &h, a.smooth.gridsize, a.smooth.gridsize)?;
    let grad = kdde_grad_grid(&pts, &h, &grid)?;
    let q = match quiver(&grad, a.thin) {
        Err(e @ KsError::ThinTooLarge { .. }) => return Err(Failure::Usage(e.to_string())),
        r => r?,
    };
    let segs = quiver_linestrings(&q);
    let est = KdeResult {
        points: pts.clone(),
        h,
        field: grad.density_field.clone(),
        density_at_data: kde_at(&pts, &h, &pts.to_points()),
    };
    let set = probability_contours(&est, &a.cont.cont)?;

    if let Some(p) = &a.grid_csv {
        write_grid_csv(
            create(p)?,
            &["estimate", "grad_x", "grad_y"],
            &[&grad.density_field, &grad.dx_field, &grad.dy_field],
        )?;
    }
    if let Some(p) = &a.geojson {
        write_file(p, &write_geojson(&Layer::from_quiver("quiver", &segs))?)?;
    }
    if let Some(p) = &a.contours_geojson {
        write_file(p, &write_geojson(&Layer::from_contours("contours", &set))?)?;
    }
    let _ = writeln!(ctx.out, "arrows,{}", segs.len());
    if let Some(p) = &a.svg {
        let plot = Plot {
            title: "Density gradient".into(),
            xlabel: a.input.x.clone(),
            ylabel: a.input.y.clone(),
            bounds: grid_bounds(&grid),
            layers: vec![PlotLayer::FilledContours(set), PlotLayer::Quiver(segs)],
        };
        write_file(p, &render_svg(&plot))?;
    }
    Ok(())
}

fn run_kms(a: &KmsArgs, ctx: &mut Context) -> Outcome {
    check_grid(a.smooth.gridsize)?;
    let sel =
        parse_bandwidth(&a.smooth.bandwidth, 1, a.smooth.deriv_order).map_err(Failure::Usage)?;
    let cfg = MeanShiftConfig {
        max_iter: a.max_iter,
        min_clust_size: a.min_clust_size,
        ..Default::default()
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let pts = load(&a.input, None, ctx)?;
    let h = sel.select(&pts)?;
    ctx.echo_h(&h, None);
    let r = ms_cluster(&pts, &h, &cfg)?;
    let sizes = r.sizes();
    let _ = writeln!(ctx.out, "clusters,{}", r.n_clusters());
    let _ = writeln!(ctx.out, "label,x,y,size");
    for (k, (m, s)) in r.modes.iter().zip(&sizes).enumerate() {
        let _ = writeln!(ctx.out, "{},{},{},{}", k + 1, m[0], m[1], s);
    }
    if let Some(p) = &a.points_csv {
        let rows = pts
            .iter()
            .zip(&r.labels)
            .map(|(q, l)| vec![q[0].to_string(), q[1].to_string(), l.to_string()]);
        write_table(create(p)?, &["x", "y", "label"], rows)?;
    }
    if let Some(p) = &a.modes_csv {
        let rows = r.modes.iter().zip(&sizes).enumerate().map(|(k, (m, s))| {
            vec![
                (k + 1).to_string(),
                m[0].to_string(),
                m[1].to_string(),
                s.to_string(),
            ]
        });
        write_table(create(p)?, &["label", "x", "y", "size"], rows)?;
    }
    let hulls = cluster_hulls(&r, &pts);
    if let Some(p) = &a.geojson {
        let features = hulls
            .iter()
            .map(|(k, g)| {
                Feature::new(g.clone())
                    .with("cluster", *k)
                    .with("size", sizes[*k as usize - 1])
            })
            .collect();
        write_file(p, &write_geojson(&Layer::new("clusters", features))?)?;
    }
    if let Some(p) = &a.svg {
        let grid = make_grid(&pts, &h, 2, 2)?;
        let mut layers = vec![PlotLayer::Hulls(hulls)];
        let unassigned: Vec<_> = pts
            .iter()
            .zip(&r.labels)
            .filter(|(_, &l)| l == 0)
            .map(|(q, _)| q)
            .collect();
        for k in 1..=r.n_clusters() as u32 {
            let members = pts
                .iter()
                .zip(&r.labels)
                .filter(|(_, &l)| l == k)
                .map(|(q, _)| q)
                .collect();
            layers.push(PlotLayer::Points {
                points: members,
                color: class_color(k as usize - 1).to_string(),
                name: format!("cluster {k}"),
            });
        }
        if !unassigned.is_empty() {
            layers.push(PlotLayer::Points {
                points: unassigned,
                color: "#999999".into(),
                name: "unassigned".into(),
            });
        }
        let modes: Vec<_> = r.modes.clone();
        layers.push(PlotLayer::Points {
            points: modes,
            color: "#000000".into(),
            name: "modes".into(),
        });
        let plot = Plot {
            title: "Mean shift clusters".into(),
            xlabel: a.input.x.clone(),
            ylabel: a.input.y.clone(),
            bounds: grid_bounds(&grid),
            layers,
        };
        write_file(p, &render_svg(&plot))?;
    }
    Ok(())
}

fn run_breaks(a: &BreaksArgs, ctx: &mut Context) -> Outcome {
    check_cont(&a.cont.cont)?;
    check_grid(a.smooth.gridsize)?;
    if a.min_gap.is_nan() || a.min_gap < 0.0 {
        return Err(Failure::Usage(format!(
            "--min-gap must be ≥ 0, got {}",
            a.min_gap
        )));
    }
    let sel =
        parse_bandwidth(&a.smooth.bandwidth, 0, a.smooth.deriv_order).map_err(Failure::Usage)?;
    let pts = load(&a.input, a.group.as_deref(), ctx)?;
    let groups: Vec<(Option<String>, PointSet)> = match pts.labels() {
        None => vec![(None, pts.clone())],
        Some(labels) => crate::classify::sorted_labels(labels)
            .into_iter()
            .map(|g| {
                let idx: Vec<usize> = (0..pts.len()).filter(|&i| labels[i] == g).collect();
                pts.subset(&idx).map(|s| (Some(g), s))
            })
            .collect::<Result<_, _>>()?,
    };
    let mut kdes = Vec::with_capacity(groups.len());
    for (g, sub) in &groups {
        let h = sel.select(sub)?;
        ctx.echo_h(&h, g.as_ref().map(|g| format!("group {g}")).as_deref());
        kdes.push(kde_grid(
            sub,
            &h,
            &make_grid(sub, &h, a.smooth.gridsize, a.smooth.gridsize)?,
        )?);
    }
    let mut percents = a.cont.cont.clone();
    percents.sort_unstable();
    percents.dedup();
    let probs: Vec<f64> = percents.iter().map(|&p| p as f64 / 100.0).collect();
    let heights = contour_breaks(&kdes, &probs, a.min_gap)?;
    let text: String = heights.iter().map(|h| format!("{h}\n")).collect();
    match &a.output {
        Some(p) => write_file(p, &text)?,
        None => {
            let _ = ctx.out.write_all(text.as_bytes());
        }
    }
    Ok(())
}

/// Runs one invocation, writing to the given streams; returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let mut ctx = Context { err, out };
    let result = match &cli.command {
        Command::Kde(a) => run_kde(a, &mut ctx),
        Command::Kda(a) => run_kda(a, &mut ctx),
        Command::Kdde(a) => run_kdde(a, &mut ctx),
        Command::Kms(a) => run_kms(a, &mut ctx),
        Command::Breaks(a) => run_breaks(a, &mut ctx),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            2
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(ctx.err, "error: {e}");
            1
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    run_with(argv, &mut out, &mut err)
}
