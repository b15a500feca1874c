//! Density gradient estimation and quiver fields.

use rayon::prelude::*;

use crate::density::kde_at;
use crate::error::{KsError, Result};
use crate::kernel::kernel_norm;
use crate::types::{BandwidthMatrix, DensityField, FieldKind, Grid2D, Point, PointSet, QuadForm};

/// `D f̂_H(x) = n⁻¹ Σ D K_H(x − X_i)` with
/// `D K_H(x) = −(2π)⁻¹|H|^{-1/2} H⁻¹x exp(−½ xᵀH⁻¹x)`.
pub fn kdde_grad_at(points: &PointSet, h: &BandwidthMatrix, eval: &[Point]) -> Vec<Point> {
    let form = QuadForm::inverse_of(h);
    let scale = kernel_norm(h) / points.len() as f64;
    let xs = points.xs();
    let ys = points.ys();
    eval.par_iter()
        .with_min_len(32)
        .map(|&[ex, ey]| {
            let (mut gx, mut gy) = (0.0, 0.0);
            for (x, y) in xs.iter().zip(ys) {
                let dx = ex - x;
                let dy = ey - y;
                let w = (-0.5 * form.eval(dx, dy)).exp();
                gx += w * (form.a * dx + form.b * dy);
                gy += w * (form.b * dx + form.c * dy);
            }
            [-gx * scale, -gy * scale]
        })
        .collect()
}

/// Gradient components and density on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientResult {
    pub points: PointSet,
    pub h: BandwidthMatrix,
    pub dx_field: DensityField,
    pub dy_field: DensityField,
    pub density_field: DensityField,
}

impl GradientResult {
    pub fn grid(&self) -> &Grid2D {
        self.density_field.grid()
    }
}

pub fn kdde_grad_grid(
    points: &PointSet,
    h: &BandwidthMatrix,
    grid: &Grid2D,
) -> Result<GradientResult> {
    let vertices = grid.vertices();
    let grad = kdde_grad_at(points, h, &vertices);
    let density = kde_at(points, h, &vertices);
    Ok(GradientResult {
        points: points.clone(),
        h: *h,
        dx_field: DensityField::new(
            *grid,
            grad.iter().map(|g| g[0]).collect(),
            FieldKind::GradientDx,
        )?,
        dy_field: DensityField::new(
            *grid,
            grad.iter().map(|g| g[1]).collect(),
            FieldKind::GradientDy,
        )?,
        density_field: DensityField::new(*grid, density, FieldKind::Density)?,
    })
}

/// Arrows sampled on a `thin × thin` subgrid of the estimation grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QuiverField {
    pub anchors: Vec<Point>,
    /// Raw gradient components at the anchors.
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub thin: usize,
    /// Multiplier taking `(u, v)` to display length; the longest arrow
    /// becomes `0.9 × spacing`.
    pub scale: f64,
    /// Nominal distance between neighbouring anchors (smaller axis).
    pub spacing: f64,
}

/// Subgrid indices `round(k·(n−1)/(thin−1))`, `k = 0..thin`.
pub fn thin_indices(n: usize, thin: usize) -> Vec<usize> {
    (0..thin)
        .map(|k| (k as f64 * (n - 1) as f64 / (thin - 1) as f64).round() as usize)
        .collect()
}

pub fn quiver(grad: &GradientResult, thin: usize) -> Result<QuiverField> {
    let grid = grad.grid();
    if thin < 2 {
        return Err(KsError::InvalidArgument(format!(
            "thin must be ≥ 2, got {thin}"
        )));
    }
    let dim = grid.nx.min(grid.ny);
    if thin > dim {
        return Err(KsError::ThinTooLarge { thin, dim });
    }
    let ix = thin_indices(grid.nx, thin);
    let iy = thin_indices(grid.ny, thin);
    let mut anchors = Vec::with_capacity(thin * thin);
    let mut u = Vec::with_capacity(thin * thin);
    let mut v = Vec::with_capacity(thin * thin);
    for &j in &iy {
        for &i in &ix {
            anchors.push(grid.vertex(i, j));
            u.push(grad.dx_field.at(i, j));
            v.push(grad.dy_field.at(i, j));
        }
    }
    let spacing = ((grid.x_max() - grid.x0) / (thin - 1) as f64)
        .min((grid.y_max() - grid.y0) / (thin - 1) as f64);
    let longest = u
        .iter()
        .zip(&v)
        .map(|(a, b)| a.hypot(*b))
        .fold(0.0, f64::max);
    let scale = if longest > 0.0 {
        0.9 * spacing / longest
    } else {
        1.0
    };
    Ok(QuiverField {
        anchors,
        u,
        v,
        thin,
        scale,
        spacing,
    })
}
