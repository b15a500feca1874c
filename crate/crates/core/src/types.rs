//! Shared numeric types: 2×2 SPD matrices, point samples, estimation grids
//! and the order statistics used to scale tolerances and contour levels.

use crate::error::{KsError, Result};

/// A point in the plane, `[x, y]`.
pub type Point = [f64; 2];

/// Symmetric positive-definite 2×2 matrix `[h11 h12; h12 h22]`.
///
/// Used as the kernel bandwidth (a covariance, in squared data units) and for
/// pilot matrices. Construction validates positive definiteness, so every
/// value of this type has a determinant above zero and a Cholesky factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthMatrix {
    h11: f64,
    h12: f64,
    h22: f64,
}

/// Lower-triangular Cholesky factor `L = [l11 0; l21 l22]` with `L·Lᵀ = H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cholesky {
    pub l11: f64,
    pub l21: f64,
    pub l22: f64,
}

impl Cholesky {
    pub fn to_matrix(&self) -> Result<BandwidthMatrix> {
        BandwidthMatrix::new(
            self.l11 * self.l11,
            self.l11 * self.l21,
            self.l21 * self.l21 + self.l22 * self.l22,
        )
    }
}

impl BandwidthMatrix {
    /// Builds the matrix from its upper triangle.
    pub fn new(h11: f64, h12: f64, h22: f64) -> Result<Self> {
        if !(h11.is_finite() && h12.is_finite() && h22.is_finite()) {
            return Err(KsError::NonFinite(format!(
                "bandwidth entries ({h11}, {h12}, {h22})"
            )));
        }
        let det = h11 * h22 - h12 * h12;
        if h11 <= 0.0 || h22 <= 0.0 || det <= 0.0 {
            return Err(KsError::NotPositiveDefinite { h11, h12, h22 });
        }
        Ok(Self { h11, h12, h22 })
    }

    pub fn identity() -> Self {
        Self {
            h11: 1.0,
            h12: 0.0,
            h22: 1.0,
        }
    }

    pub fn diagonal(h11: f64, h22: f64) -> Result<Self> {
        Self::new(h11, 0.0, h22)
    }

    pub fn h11(&self) -> f64 {
        self.h11
    }

    pub fn h12(&self) -> f64 {
        self.h12
    }

    pub fn h22(&self) -> f64 {
        self.h22
    }

    /// Entry `(i, j)` with zero-based indices.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (0, 0) => self.h11,
            (1, 1) => self.h22,
            _ => self.h12,
        }
    }

    pub fn upper(&self) -> [f64; 3] {
        [self.h11, self.h12, self.h22]
    }

    pub fn det(&self) -> f64 {
        self.h11 * self.h22 - self.h12 * self.h12
    }

    pub fn trace(&self) -> f64 {
        self.h11 + self.h22
    }

    pub fn frobenius(&self) -> f64 {
        (self.h11 * self.h11 + 2.0 * self.h12 * self.h12 + self.h22 * self.h22).sqrt()
    }

    /// Frobenius norm of `self - other`.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        let a = self.h11 - other.h11;
        let b = self.h12 - other.h12;
        let c = self.h22 - other.h22;
        (a * a + 2.0 * b * b + c * c).sqrt()
    }

    /// Adjugate inverse.
    pub fn inverse(&self) -> Self {
        let det = self.det();
        Self {
            h11: self.h22 / det,
            h12: -self.h12 / det,
            h22: self.h11 / det,
        }
    }

    pub fn cholesky(&self) -> Cholesky {
        let l11 = self.h11.sqrt();
        let l21 = self.h12 / l11;
        let l22 = (self.h22 - l21 * l21).sqrt();
        Cholesky { l11, l21, l22 }
    }

    /// `c·H` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(c * self.h11, c * self.h12, c * self.h22)
    }

    /// `S·H·Sᵀ` for `S = diag(sx, sy)`.
    pub fn congruent_diag(&self, sx: f64, sy: f64) -> Result<Self> {
        Self::new(sx * sx * self.h11, sx * sy * self.h12, sy * sy * self.h22)
    }

    /// `uᵀ H⁻¹ u`.
    pub fn mahalanobis_sq(&self, u: Point) -> f64 {
        QuadForm::inverse_of(self).eval(u[0], u[1])
    }

    /// `H·v`.
    pub fn mul_vec(&self, v: Point) -> Point {
        [
            self.h11 * v[0] + self.h12 * v[1],
            self.h12 * v[0] + self.h22 * v[1],
        ]
    }
}

impl std::fmt::Display for BandwidthMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}; {}, {}]",
            fmt_sig(self.h11),
            fmt_sig(self.h12),
            fmt_sig(self.h12),
            fmt_sig(self.h22)
        )
    }
}

/// Formats with four significant digits, switching to exponent notation for
/// very large or very small magnitudes.
pub fn fmt_sig(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 {
        return "0".to_string();
    }
    if !(1e-3..1e6).contains(&a) {
        return format!("{x:.3e}");
    }
    let digits = (3 - a.log10().floor() as i32).max(0) as usize;
    let s = format!("{x:.digits$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Precomputed quadratic form `a·x² + 2b·xy + c·y²`, used in the inner loops
/// of every kernel sum.
#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadForm {
    pub fn inverse_of(h: &BandwidthMatrix) -> Self {
        let inv = h.inverse();
        Self {
            a: inv.h11,
            b: inv.h12,
            c: inv.h22,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.a * x * x + 2.0 * self.b * x * y + self.c * y * y
    }
}

/// A bivariate sample with optional per-point group labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    xs: Vec<f64>,
    ys: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl PointSet {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(KsError::InvalidArgument(format!(
                "coordinate arrays differ in length ({} vs {})",
                xs.len(),
                ys.len()
            )));
        }
        if xs.is_empty() {
            return Err(KsError::EmptyInput);
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err(KsError::NonFinite("point coordinates".into()));
        }
        Ok(Self {
            xs,
            ys,
            labels: None,
        })
    }

    pub fn from_points(points: &[Point]) -> Result<Self> {
        Self::new(
            points.iter().map(|p| p[0]).collect(),
            points.iter().map(|p| p[1]).collect(),
        )
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.xs.len() {
            return Err(KsError::InvalidArgument(format!(
                "{} labels for {} points",
                labels.len(),
                self.xs.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    /// Always false: a point set holds at least one point.
    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn point(&self, i: usize) -> Point {
        [self.xs[i], self.ys[i]]
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.xs.iter().zip(&self.ys).map(|(&x, &y)| [x, y])
    }

    pub fn to_points(&self) -> Vec<Point> {
        self.iter().collect()
    }

    pub fn mean(&self) -> Point {
        let n = self.len() as f64;
        [
            self.xs.iter().sum::<f64>() / n,
            self.ys.iter().sum::<f64>() / n,
        ]
    }

    /// Unbiased sample covariance `[s11, s12, s22]`; requires `n ≥ 2`.
    pub fn covariance(&self) -> Result<[f64; 3]> {
        let n = self.len();
        if n < 2 {
            return Err(KsError::TooFewPoints { needed: 2, got: n });
        }
        let [mx, my] = self.mean();
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for (x, y) in self.xs.iter().zip(&self.ys) {
            let dx = x - mx;
            let dy = y - my;
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
        let d = (n - 1) as f64;
        Ok([sxx / d, sxy / d, syy / d])
    }

    /// Axis-aligned bounding box `(xmin, xmax, ymin, ymax)`.
    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let fold = |v: &[f64]| {
            v.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                    (lo.min(x), hi.max(x))
                })
        };
        let (x0, x1) = fold(&self.xs);
        let (y0, y1) = fold(&self.ys);
        (x0, x1, y0, y1)
    }

    /// Points at the given indices, carrying their labels.
    pub fn subset(&self, idx: &[usize]) -> Result<Self> {
        let mut out = Self::new(
            idx.iter().map(|&i| self.xs[i]).collect(),
            idx.iter().map(|&i| self.ys[i]).collect(),
        )?;
        if let Some(l) = &self.labels {
            out.labels = Some(idx.iter().map(|&i| l[i].clone()).collect());
        }
        Ok(out)
    }

    pub fn translated(&self, t: Point) -> Self {
        Self {
            xs: self.xs.iter().map(|x| x + t[0]).collect(),
            ys: self.ys.iter().map(|y| y + t[1]).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn scaled(&self, sx: f64, sy: f64) -> Self {
        Self {
            xs: self.xs.iter().map(|x| x * sx).collect(),
            ys: self.ys.iter().map(|y| y * sy).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Smallest of the two marginal interquartile ranges.
    pub fn min_marginal_iqr(&self) -> f64 {
        let ix = iqr(&self.xs).unwrap_or(0.0);
        let iy = iqr(&self.ys).unwrap_or(0.0);
        ix.min(iy)
    }
}

/// Regular rectangular grid of `nx × ny` vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid2D {
    pub fn new(x0: f64, y0: f64, dx: f64, dy: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(KsError::InvalidArgument(format!(
                "grid needs at least 2 vertices per axis, got {nx}×{ny}"
            )));
        }
        if !(dx > 0.0 && dy > 0.0 && dx.is_finite() && dy.is_finite()) {
            return Err(KsError::InvalidArgument(format!(
                "grid steps must be positive, got ({dx}, {dy})"
            )));
        }
        if !(x0.is_finite() && y0.is_finite()) {
            return Err(KsError::NonFinite("grid origin".into()));
        }
        Ok(Self {
            x0,
            y0,
            dx,
            dy,
            nx,
            ny,
        })
    }

    /// Grid spanning `[xmin, xmax] × [ymin, ymax]` exactly.
    pub fn from_bounds(
        xmin: f64,
        xmax: f64,
        ymin: f64,
        ymax: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(KsError::InvalidArgument(format!(
                "grid needs at least 2 vertices per axis, got {nx}×{ny}"
            )));
        }
        Self::new(
            xmin,
            ymin,
            (xmax - xmin) / (nx - 1) as f64,
            (ymax - ymin) / (ny - 1) as f64,
            nx,
            ny,
        )
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat index of vertex `(i, j)`; x varies fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.dy
    }

    pub fn vertex(&self, i: usize, j: usize) -> Point {
        [self.x(i), self.y(j)]
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.nx - 1)
    }

    pub fn y_max(&self) -> f64 {
        self.y(self.ny - 1)
    }

    /// All vertices in flat-index order.
    pub fn vertices(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.len());
        for j in 0..self.ny {
            for i in 0..self.nx {
                out.push(self.vertex(i, j));
            }
        }
        out
    }
}

/// What the values of a [`DensityField`] represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Density,
    GradientDx,
    GradientDy,
    Label,
}

/// Per-vertex values on a [`Grid2D`], stored in [`Grid2D::index`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    grid: Grid2D,
    values: Vec<f64>,
    kind: FieldKind,
}

impl DensityField {
    pub fn new(grid: Grid2D, values: Vec<f64>, kind: FieldKind) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(KsError::InvalidArgument(format!(
                "{} values for a {}×{} grid",
                values.len(),
                grid.nx,
                grid.ny
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(KsError::NonFinite("field values".into()));
        }
        if kind == FieldKind::Density && values.iter().any(|&v| v < 0.0) {
            return Err(KsError::InvalidArgument(
                "density field has negative values".into(),
            ));
        }
        Ok(Self { grid, values, kind })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Composite trapezoid rule over the whole grid.
    pub fn integral(&self) -> f64 {
        let g = &self.grid;
        let mut total = 0.0;
        for j in 0..g.ny {
            let wy = if j == 0 || j == g.ny - 1 { 0.5 } else { 1.0 };
            for i in 0..g.nx {
                let wx = if i == 0 || i == g.nx - 1 { 0.5 } else { 1.0 };
                total += wx * wy * self.at(i, j);
            }
        }
        total * g.dx * g.dy
    }
}

/// Linear-interpolation sample quantile (plotting position `(k−1)/(n−1)`).
pub fn quantile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(KsError::EmptyInput);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(KsError::InvalidArgument(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    let mut sorted = values.to_vec();
    if sorted.iter().any(|v| !v.is_finite()) {
        return Err(KsError::NonFinite("quantile input".into()));
    }
    sorted.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sorted, p))
}

/// Same as [`quantile`] on an already ascending, non-empty slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * p;
    let lo = h.floor() as usize;
    if lo + 1 >= n {
        return sorted[n - 1];
    }
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
}

pub fn iqr(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(KsError::EmptyInput);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25))
}
