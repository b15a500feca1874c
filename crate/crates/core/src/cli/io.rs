//! CSV ingestion and tabular output.

use std::io::Write;
use std::path::Path;

use crate::error::{KsError, Result};
use crate::types::{DensityField, PointSet};

/// Points read from a CSV file, plus the number of rows skipped because
/// a coordinate (or the group) was missing or not a number.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvPoints {
    pub points: PointSet,
    pub dropped: usize,
}

/// Row filter `column == value`, compared as trimmed strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowFilter {
    pub column: String,
    pub value: String,
}

impl std::str::FromStr for RowFilter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.split_once('=') {
            Some((c, v)) if !c.trim().is_empty() => Ok(Self {
                column: c.trim().to_string(),
                value: v.trim().to_string(),
            }),
            _ => Err(format!("expected COLUMN=VALUE, got {s:?}")),
        }
    }
}

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| KsError::MissingColumn(name.to_string()))
}

fn csv_err(e: csv::Error) -> KsError {
    KsError::Io(e.to_string())
}

pub fn read_points_csv(
    path: &Path,
    xcol: &str,
    ycol: &str,
    group: Option<&str>,
) -> Result<CsvPoints> {
    read_points_csv_filtered(path, xcol, ycol, group, &[])
}

/// As [`read_points_csv`], keeping only rows that match every filter.
/// Rows removed by a filter are not counted as dropped.
pub fn read_points_csv_filtered(
    path: &Path,
    xcol: &str,
    ycol: &str,
    group: Option<&str>,
    filters: &[RowFilter],
) -> Result<CsvPoints> {
    let file =
        std::fs::File::open(path).map_err(|e| KsError::Io(format!("{}: {e}", path.display())))?;
    read_points(file, xcol, ycol, group, filters)
}

pub fn read_points<R: std::io::Read>(
    reader: R,
    xcol: &str,
    ycol: &str,
    group: Option<&str>,
    filters: &[RowFilter],
) -> Result<CsvPoints> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let ix = column(&headers, xcol)?;
    let iy = column(&headers, ycol)?;
    let ig = group.map(|g| column(&headers, g)).transpose()?;
    let ifs: Vec<(usize, &str)> = filters
        .iter()
        .map(|f| Ok((column(&headers, &f.column)?, f.value.as_str())))
        .collect::<Result<_>>()?;

    let (mut xs, mut ys, mut labels) = (Vec::new(), Vec::new(), Vec::new());
    let mut dropped = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        if !ifs
            .iter()
            .all(|&(i, v)| rec.get(i).map(str::trim) == Some(v))
        {
            continue;
        }
        let num = |i: usize| {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .filter(|v| v.is_finite())
        };
        let label = ig.map(|i| rec.get(i).map(|s| s.trim().to_string()).unwrap_or_default());
        match (num(ix), num(iy)) {
            (Some(x), Some(y)) if label.as_deref() != Some("") => {
                xs.push(x);
                ys.push(y);
                if let Some(l) = label {
                    labels.push(l);
                }
            }
            _ => dropped += 1,
        }
    }
    if xs.is_empty() {
        return Err(KsError::EmptyAfterFiltering);
    }
    let mut points = PointSet::new(xs, ys)?;
    if ig.is_some() {
        points = points.with_labels(labels)?;
    }
    Ok(CsvPoints { points, dropped })
}

/// Writes a header and rows of plain numbers.
pub fn write_table<W: Write>(
    out: W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Grid vertices with one column per field, `x, y, <names…>`.
pub fn write_grid_csv<W: Write>(out: W, names: &[&str], fields: &[&DensityField]) -> Result<()> {
    let Some(first) = fields.first() else {
        return Err(KsError::InvalidArgument("no fields to write".into()));
    };
    let g = *first.grid();
    if fields.iter().any(|f| *f.grid() != g) {
        return Err(KsError::InvalidArgument(
            "fields live on different grids".into(),
        ));
    }
    let mut header = vec!["x", "y"];
    header.extend_from_slice(names);
    let rows = (0..g.ny).flat_map(move |j| {
        (0..g.nx).map(move |i| {
            let mut r = vec![g.x(i).to_string(), g.y(j).to_string()];
            r.extend(fields.iter().map(|f| f.at(i, j).to_string()));
            r
        })
    });
    write_table(out, &header, rows)
}
