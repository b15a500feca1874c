//! Kernel density estimation on grids and at arbitrary points, plus
//! probability-contour (highest density region) levels.

use rayon::prelude::*;

use crate::error::{KsError, Result};
use crate::kernel::kernel_norm;
use crate::types::{
    quantile_sorted, BandwidthMatrix, DensityField, FieldKind, Grid2D, Point, PointSet, QuadForm,
};

/// How far the default grid extends past the data, in kernel standard
/// deviations per axis.
pub const GRID_EXTENSION: f64 = 3.7;

/// Default number of grid vertices per axis.
pub const DEFAULT_GRID_SIZE: usize = 151;

/// Grid spanning the data range extended by `3.7·√h11` horizontally and
/// `3.7·√h22` vertically on each side.
pub fn make_grid(points: &PointSet, h: &BandwidthMatrix, nx: usize, ny: usize) -> Result<Grid2D> {
    let (x0, x1, y0, y1) = points.bounds();
    let ex = GRID_EXTENSION * h.h11().sqrt();
    let ey = GRID_EXTENSION * h.h22().sqrt();
    Grid2D::from_bounds(x0 - ex, x1 + ex, y0 - ey, y1 + ey, nx, ny)
}

/// Direct evaluation of `f̂_H(x) = n⁻¹ Σ K_H(x − X_i)` at each point of `eval`.
pub fn kde_at(points: &PointSet, h: &BandwidthMatrix, eval: &[Point]) -> Vec<f64> {
    let form = QuadForm::inverse_of(h);
    let scale = kernel_norm(h) / points.len() as f64;
    let xs = points.xs();
    let ys = points.ys();
    eval.par_iter()
        .with_min_len(32)
        .map(|&[ex, ey]| {
            let mut s = 0.0;
            for (x, y) in xs.iter().zip(ys) {
                s += (-0.5 * form.eval(ex - x, ey - y)).exp();
            }
            s * scale
        })
        .collect()
}

/// A density estimate: grid values plus the estimate at every observation.
#[derive(Debug, Clone, PartialEq)]
pub struct KdeResult {
    pub points: PointSet,
    pub h: BandwidthMatrix,
    pub field: DensityField,
    pub density_at_data: Vec<f64>,
}

impl KdeResult {
    /// Fraction of observations whose estimated density is at least `height`.
    pub fn implied_probability(&self, height: f64) -> f64 {
        let inside = self
            .density_at_data
            .iter()
            .filter(|&&d| d >= height)
            .count();
        inside as f64 / self.density_at_data.len() as f64
    }
}

pub fn kde_grid(points: &PointSet, h: &BandwidthMatrix, grid: &Grid2D) -> Result<KdeResult> {
    let values = kde_at(points, h, &grid.vertices());
    let density_at_data = kde_at(points, h, &points.to_points());
    Ok(KdeResult {
        points: points.clone(),
        h: *h,
        field: DensityField::new(*grid, values, FieldKind::Density)?,
        density_at_data,
    })
}

/// Estimate on the default grid ([`make_grid`] with `size × size` vertices).
pub fn kde(points: &PointSet, h: &BandwidthMatrix, size: usize) -> Result<KdeResult> {
    let grid = make_grid(points, h, size, size)?;
    kde_grid(points, h, &grid)
}

/// Heights of the probability contours: `heights[k]` bounds the smallest
/// region holding `probs[k]` of the mass.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourLevels {
    pub probs: Vec<f64>,
    pub heights: Vec<f64>,
}

fn check_probs(probs: &[f64]) -> Result<()> {
    if let Some(p) = probs.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(KsError::InvalidArgument(format!(
            "contour probability {p} outside (0, 1)"
        )));
    }
    if probs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(KsError::InvalidArgument(
            "contour probabilities must be strictly ascending".into(),
        ));
    }
    Ok(())
}

/// `height(p) = quantile(f̂(X_1..X_n), 1 − p)`.
///
/// The region `{x : f̂(x) ≥ height(p)}` then holds about a fraction `p` of the
/// sample, so larger `p` means a lower, more inclusive level.
pub fn contour_levels(kde: &KdeResult, probs: &[f64]) -> Result<ContourLevels> {
    check_probs(probs)?;
    let mut sorted = kde.density_at_data.clone();
    sorted.sort_by(f64::total_cmp);
    let heights = probs
        .iter()
        .map(|&p| quantile_sorted(&sorted, 1.0 - p))
        .collect();
    Ok(ContourLevels {
        probs: probs.to_vec(),
        heights,
    })
}

/// Default minimum separation, in implied probability, between retained
/// breaks of [`contour_breaks`].
pub const DEFAULT_MIN_GAP: f64 = 0.05;

/// Common contour heights for comparing several estimates.
///
/// Per-estimate heights at `probs` are averaged across estimates. Walking the
/// averaged heights from highest to lowest, a height is dropped when its
/// implied probability is within `min_gap` of the previously retained height
/// in every estimate. Returns descending heights.
pub fn contour_breaks(kdes: &[KdeResult], probs: &[f64], min_gap: f64) -> Result<Vec<f64>> {
    if kdes.is_empty() {
        return Err(KsError::EmptyInput);
    }
    if min_gap.is_nan() || min_gap < 0.0 {
        return Err(KsError::InvalidArgument(format!(
            "min_gap {min_gap} must be ≥ 0"
        )));
    }
    let per_estimate: Vec<ContourLevels> = kdes
        .iter()
        .map(|k| contour_levels(k, probs))
        .collect::<Result<_>>()?;
    let m = kdes.len() as f64;
    let mut averaged: Vec<f64> = (0..probs.len())
        .map(|i| per_estimate.iter().map(|l| l.heights[i]).sum::<f64>() / m)
        .collect();
    averaged.sort_by(|a, b| b.total_cmp(a));

    let implied = |h: f64| -> Vec<f64> { kdes.iter().map(|k| k.implied_probability(h)).collect() };
    let mut kept: Vec<f64> = Vec::with_capacity(averaged.len());
    let mut last: Option<Vec<f64>> = None;
    for h in averaged {
        let cur = implied(h);
        let keep = match &last {
            None => true,
            Some(prev) => prev.iter().zip(&cur).any(|(a, b)| (a - b).abs() >= min_gap),
        };
        if keep {
            kept.push(h);
            last = Some(cur);
        }
    }
    Ok(kept)
}
