use rayon::prelude::*;

use super::optim::{minimize_spd_with, MinimizeOptions};
use super::plugin::h_normal_scale;
use crate::error::{KsError, Result};
use crate::types::{BandwidthMatrix, PointSet, QuadForm};

const ROW_BLOCK: usize = 64;

/// `(Σ_{i<j} e^{−q/4}, Σ_{i<j} e^{−q/2})` with `q = dᵀH⁻¹d`.
fn pair_sums(points: &PointSet, h: &BandwidthMatrix) -> (f64, f64) {
    let form = QuadForm::inverse_of(h);
    let xs = points.xs();
    let ys = points.ys();
    let n = xs.len();
    let blocks: Vec<usize> = (0..n).step_by(ROW_BLOCK).collect();
    let parts: Vec<(f64, f64)> = blocks
        .par_iter()
        .map(|&start| {
            let (mut conv, mut loo) = (0.0, 0.0);
            for i in start..(start + ROW_BLOCK).min(n) {
                let (xi, yi) = (xs[i], ys[i]);
                for j in (i + 1)..n {
                    let e = (-0.25 * form.eval(xi - xs[j], yi - ys[j])).exp();
                    conv += e;
                    loo += e * e;
                }
            }
            (conv, loo)
        })
        .collect();
    parts
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d))
}

/// Unbiased cross-validation criterion
/// `n⁻² Σ_i Σ_j K_{2H}(X_i − X_j) − 2[n(n−1)]⁻¹ Σ_i Σ_{j≠i} K_H(X_i − X_j)`.
pub fn ucv_objective(points: &PointSet, h: &BandwidthMatrix) -> f64 {
    let n = points.len() as f64;
    let (conv, loo) = pair_sums(points, h);
    let pi = std::f64::consts::PI;
    let root = h.det().sqrt();
    let integral_sq = (n + 2.0 * conv) / (4.0 * pi * root * n * n);
    let cross = 2.0 * (2.0 * loo) / (2.0 * pi * root * n * (n - 1.0));
    integral_sq - cross
}

/// UCV bandwidth, minimised from the normal-scale start.
///
/// Fails with [`KsError::NonFiniteObjective`] when the search collapses the
/// determinant below `1e-12` times that of the normal-scale matrix, which is
/// how duplicated observations show up (the criterion is unbounded below).
pub fn h_ucv(points: &PointSet) -> Result<BandwidthMatrix> {
    if points.len() < 10 {
        return Err(KsError::TooFewPoints {
            needed: 10,
            got: points.len(),
        });
    }
    let start = h_normal_scale(points, 0)?;
    let floor = 1e-12 * start.det();
    let opts = MinimizeOptions {
        tol: 1e-4,
        restarts: 0,
        ..Default::default()
    };
    minimize_spd_with(
        |h| {
            if h.det() < floor {
                f64::NEG_INFINITY
            } else {
                ucv_objective(points, h)
            }
        },
        &start,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::gaussian;

    fn sample() -> PointSet {
        let xs: Vec<f64> = (0..30).map(|i| (i as f64 * 0.71).sin() * 3.0).collect();
        let ys: Vec<f64> = (0..30)
            .map(|i| (i as f64 * 1.37).cos() + 0.1 * i as f64)
            .collect();
        PointSet::new(xs, ys).unwrap()
    }

    #[test]
    fn matches_leave_one_out_oracle() {
        let pts = sample();
        let h = BandwidthMatrix::new(0.6, 0.15, 0.4).unwrap();
        let n = pts.len();

        // ∫ f̂² by trapezoid quadrature of the estimate on a wide fine grid
        let (x0, x1, y0, y1) = pts.bounds();
        let pad = 8.0;
        let m = 900;
        let (ax, bx) = (x0 - pad, x1 + pad);
        let (ay, by) = (y0 - pad, y1 + pad);
        let (hx, hy) = ((bx - ax) / m as f64, (by - ay) / m as f64);
        let mut integral = 0.0;
        for a in 0..=m {
            for b in 0..=m {
                let p = [ax + a as f64 * hx, ay + b as f64 * hy];
                let f: f64 = pts
                    .iter()
                    .map(|x| gaussian(&h, [p[0] - x[0], p[1] - x[1]]))
                    .sum::<f64>()
                    / n as f64;
                integral += f * f;
            }
        }
        integral *= hx * hy;

        // leave-one-out estimates at each sample point
        let mut loo = 0.0;
        for i in 0..n {
            let mut s = 0.0;
            for j in 0..n {
                if i != j {
                    let d = [pts.xs()[i] - pts.xs()[j], pts.ys()[i] - pts.ys()[j]];
                    s += gaussian(&h, d);
                }
            }
            loo += s / (n - 1) as f64;
        }
        let oracle = integral - 2.0 * loo / n as f64;
        let got = ucv_objective(&pts, &h);
        assert!(
            (got - oracle).abs() <= 1e-10 * oracle.abs().max(1e-3),
            "{got} vs {oracle}"
        );
    }

    #[test]
    fn duplicated_points_fail_loudly() {
        let base = sample();
        let mut xs = base.xs().to_vec();
        let mut ys = base.ys().to_vec();
        xs.extend_from_slice(base.xs());
        ys.extend_from_slice(base.ys());
        let pts = PointSet::new(xs, ys).unwrap();
        assert_eq!(h_ucv(&pts), Err(KsError::NonFiniteObjective));
    }

    #[test]
    fn too_few_points() {
        let pts = PointSet::new(vec![0.0, 0.0], vec![0.0, 0.0]).unwrap();
        assert!(matches!(h_ucv(&pts), Err(KsError::TooFewPoints { .. })));
    }
}
