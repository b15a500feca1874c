//! Mean shift clustering: every observation climbs the density estimate to
//! a mode, and observations sharing a mode form a cluster.

use rayon::prelude::*;

use crate::error::{KsError, Result};
use crate::geometry::{convex_hull, Geometry};
use crate::types::{BandwidthMatrix, Point, PointSet, QuadForm};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanShiftConfig {
    pub max_iter: usize,
    /// Stop once a step is shorter than `tol_frac × min marginal IQR`.
    pub tol_frac: f64,
    /// Clusters with fewer members are labelled 0.
    pub min_clust_size: usize,
    /// Final iterates closer than `merge_frac × min marginal IQR` share a mode.
    pub merge_frac: f64,
}

impl Default for MeanShiftConfig {
    fn default() -> Self {
        Self {
            max_iter: 400,
            tol_frac: 0.001,
            min_clust_size: 1,
            merge_frac: 0.01,
        }
    }
}

impl MeanShiftConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter < 1 {
            return Err(KsError::InvalidArgument("max_iter must be ≥ 1".into()));
        }
        if self.tol_frac.is_nan()
            || self.tol_frac <= 0.0
            || self.merge_frac.is_nan()
            || self.merge_frac <= 0.0
        {
            return Err(KsError::InvalidArgument(
                "tol_frac and merge_frac must be positive".into(),
            ));
        }
        if self.min_clust_size < 1 {
            return Err(KsError::InvalidArgument(
                "min_clust_size must be ≥ 1".into(),
            ));
        }
        Ok(())
    }
}

/// Kernel-weighted mean `Σ w_l X_l / Σ w_l`, `w_l = exp(−½ (x − X_l)ᵀH⁻¹(x − X_l))`.
///
/// Weights are shifted by the largest exponent before exponentiating, so
/// points far from every observation still get a finite answer.
pub fn ms_step(points: &PointSet, h: &BandwidthMatrix, x: Point) -> Result<Point> {
    step_with(points, &QuadForm::inverse_of(h), x)
}

fn step_with(points: &PointSet, form: &QuadForm, x: Point) -> Result<Point> {
    if !x[0].is_finite() || !x[1].is_finite() {
        return Err(KsError::NonFinite("mean shift iterate".into()));
    }
    let xs = points.xs();
    let ys = points.ys();
    let q_min = xs
        .iter()
        .zip(ys)
        .map(|(a, b)| form.eval(x[0] - a, x[1] - b))
        .fold(f64::INFINITY, f64::min);
    if !q_min.is_finite() {
        return Err(KsError::NumericalUnderflow);
    }
    let (mut sw, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for (a, b) in xs.iter().zip(ys) {
        let w = (-0.5 * (form.eval(x[0] - a, x[1] - b) - q_min)).exp();
        sw += w;
        sx += w * a;
        sy += w * b;
    }
    if !sw.is_finite() || sw <= 0.0 {
        return Err(KsError::NumericalUnderflow);
    }
    Ok([sx / sw, sy / sw])
}

#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    pub mode: Point,
    pub iterations: usize,
    /// Starting point followed by every iterate.
    pub path: Vec<Point>,
}

fn converge_with(
    points: &PointSet,
    form: &QuadForm,
    x0: Point,
    cfg: &MeanShiftConfig,
    tol: f64,
) -> Result<Convergence> {
    let mut path = Vec::with_capacity(16);
    path.push(x0);
    let mut x = x0;
    let mut iterations = 0;
    while iterations < cfg.max_iter {
        let next = step_with(points, form, x)?;
        iterations += 1;
        let step = (next[0] - x[0]).hypot(next[1] - x[1]);
        x = next;
        path.push(x);
        if step < tol || step == 0.0 {
            break;
        }
    }
    Ok(Convergence {
        mode: x,
        iterations,
        path,
    })
}

pub fn ms_converge(
    points: &PointSet,
    h: &BandwidthMatrix,
    x0: Point,
    cfg: &MeanShiftConfig,
) -> Result<Convergence> {
    cfg.validate()?;
    let tol = cfg.tol_frac * points.min_marginal_iqr();
    converge_with(points, &QuadForm::inverse_of(h), x0, cfg, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult {
    /// Cluster of each point, 1-based; 0 for points in undersized clusters.
    pub labels: Vec<u32>,
    /// Mode of cluster `k` at index `k − 1`.
    pub modes: Vec<Point>,
    pub paths: Vec<Vec<Point>>,
    pub iterations: Vec<usize>,
}

impl ClusterResult {
    pub fn n_clusters(&self) -> usize {
        self.modes.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.modes.len()];
        for &l in &self.labels {
            if l > 0 {
                s[l as usize - 1] += 1;
            }
        }
        s
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Groups of indices whose points are linked by chains of gaps below `thr`.
fn single_linkage(points: &[Point], thr: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (points[i][0] - points[j][0]).hypot(points[i][1] - points[j][1]);
            if d < thr || d == 0.0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

pub fn ms_cluster(
    points: &PointSet,
    h: &BandwidthMatrix,
    cfg: &MeanShiftConfig,
) -> Result<ClusterResult> {
    cfg.validate()?;
    let form = QuadForm::inverse_of(h);
    let iqr = points.min_marginal_iqr();
    let tol = cfg.tol_frac * iqr;
    let runs: Vec<Convergence> = (0..points.len())
        .into_par_iter()
        .map(|i| converge_with(points, &form, points.point(i), cfg, tol))
        .collect::<Result<_>>()?;
    let finals: Vec<Point> = runs.iter().map(|r| r.mode).collect();

    let mut groups = single_linkage(&finals, cfg.merge_frac * iqr);
    // groups are already in first-member order, so a stable sort keeps ties
    groups.sort_by_key(|g| std::cmp::Reverse(g.len()));

    let mut labels = vec![0u32; points.len()];
    let mut modes = Vec::new();
    for g in groups.iter().filter(|g| g.len() >= cfg.min_clust_size) {
        let k = modes.len() as u32 + 1;
        let (mut cx, mut cy) = (0.0, 0.0);
        for &i in g {
            labels[i] = k;
            cx += finals[i][0];
            cy += finals[i][1];
        }
        modes.push([cx / g.len() as f64, cy / g.len() as f64]);
    }
    let (paths, iterations) = runs.into_iter().map(|r| (r.path, r.iterations)).unzip();
    Ok(ClusterResult {
        labels,
        modes,
        paths,
        iterations,
    })
}

/// Convex hull of the members of each cluster, as `(label, hull)`.
pub fn cluster_hulls(result: &ClusterResult, points: &PointSet) -> Vec<(u32, Geometry)> {
    (1..=result.modes.len() as u32)
        .map(|k| {
            let members: Vec<Point> = result
                .labels
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == k)
                .map(|(i, _)| points.point(i))
                .collect();
            (k, convex_hull(&members))
        })
        .collect()
}
