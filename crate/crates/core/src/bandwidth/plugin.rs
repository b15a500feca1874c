use super::optim::minimize_spd;
use super::psi::{amise_objective, psi_functionals};
use crate::error::{KsError, Result};
use crate::types::{BandwidthMatrix, PointSet};

/// Normal-reference constant `c(n, r) = (4 / (n(d+2r+2)))^{2/(d+2r+4)}` for
/// `d = 2`, so that `c·Σ` minimises the AMISE of the `r`-th derivative
/// estimator when the data are `N(μ, Σ)`.
pub fn normal_scale_constant(n: usize, deriv_order: usize) -> f64 {
    let d = 2.0;
    let r = deriv_order as f64;
    (4.0 / (n as f64 * (d + 2.0 * r + 2.0))).powf(2.0 / (d + 2.0 * r + 4.0))
}

fn covariance_matrix(points: &PointSet) -> Result<BandwidthMatrix> {
    let [s11, s12, s22] = points.covariance()?;
    if !(s11 > 0.0 && s22 > 0.0) || s11 * s22 - s12 * s12 <= 1e-12 * s11 * s22 {
        return Err(KsError::DegenerateSample(
            "sample covariance is singular (collinear or repeated points)".into(),
        ));
    }
    BandwidthMatrix::new(s11, s12, s22)
}

fn normal_scale_any(points: &PointSet, deriv_order: usize) -> Result<BandwidthMatrix> {
    if points.len() < 3 {
        return Err(KsError::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    covariance_matrix(points)?.scaled(normal_scale_constant(points.len(), deriv_order))
}

/// Normal-scale bandwidth `c(n, r)·Σ̂` for `r ∈ {0, 1}`.
pub fn h_normal_scale(points: &PointSet, deriv_order: usize) -> Result<BandwidthMatrix> {
    if deriv_order > 1 {
        return Err(KsError::InvalidArgument(format!(
            "derivative order {deriv_order} not supported (0 or 1)"
        )));
    }
    normal_scale_any(points, deriv_order)
}

/// Pilot for the order-`4+2r` functionals: a single normal-scale stage
/// targeting derivative order `r + 2`.
pub fn plugin_pilot(points: &PointSet, deriv_order: usize) -> Result<BandwidthMatrix> {
    normal_scale_any(points, deriv_order + 2)
}

/// Plug-in bandwidth for the density (`r = 0`) or its gradient (`r = 1`).
pub fn h_plugin(points: &PointSet, deriv_order: usize) -> Result<BandwidthMatrix> {
    if deriv_order > 1 {
        return Err(KsError::InvalidArgument(format!(
            "derivative order {deriv_order} not supported (0 or 1)"
        )));
    }
    if points.len() < 10 {
        return Err(KsError::TooFewPoints {
            needed: 10,
            got: points.len(),
        });
    }
    let pilot = plugin_pilot(points, deriv_order)?;
    let psi = psi_functionals(points, 4 + 2 * deriv_order, &pilot)?;
    let start = h_normal_scale(points, deriv_order)?;
    let n = points.len();
    minimize_spd(
        |h| amise_objective(h, &psi, n, deriv_order).unwrap_or(f64::NAN),
        &start,
    )
}
