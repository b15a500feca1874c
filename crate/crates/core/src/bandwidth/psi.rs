use crate::error::{KsError, Result};
use crate::kernel::{derivative_poly, kernel_norm, pair_moments, parity_monomials};
use crate::types::{BandwidthMatrix, PointSet, QuadForm};

/// Estimates of the integrated density-derivative functionals
/// `ψ_m = ∫ (∂^m f) f` for every multi-index `m` of one even order.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiFunctionals {
    order: usize,
    components: Vec<f64>,
    pilot: BandwidthMatrix,
}

impl PsiFunctionals {
    /// Builds from raw components; `components[b]` is `ψ_(order−b, b)`.
    pub fn from_components(
        order: usize,
        components: Vec<f64>,
        pilot: BandwidthMatrix,
    ) -> Result<Self> {
        check_order(order)?;
        if components.len() != order + 1 {
            return Err(KsError::InvalidArgument(format!(
                "order {order} needs {} components, got {}",
                order + 1,
                components.len()
            )));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(KsError::NonFinite("psi components".into()));
        }
        Ok(Self {
            order,
            components,
            pilot,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Components ordered by the number of y-derivatives, `ψ_(k,0)` first.
    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn pilot(&self) -> &BandwidthMatrix {
        &self.pilot
    }

    /// `ψ_(a,b)` with `a + b = order`.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        assert_eq!(a + b, self.order, "multi-index of wrong order");
        self.components[b]
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 4 || order == 6 {
        Ok(())
    } else {
        Err(KsError::InvalidArgument(format!(
            "psi order must be 4 or 6, got {order}"
        )))
    }
}

/// `ψ̂_m = n⁻² Σ_i Σ_j (∂^m K_G)(X_i − X_j)` for every `m` of the given order,
/// diagonal terms included.
pub fn psi_functionals(
    points: &PointSet,
    order: usize,
    pilot: &BandwidthMatrix,
) -> Result<PsiFunctionals> {
    check_order(order)?;
    let n = points.len() as f64;
    let monomials = parity_monomials(order);
    let moments = pair_moments(points, QuadForm::inverse_of(pilot), &monomials, |q| {
        (-0.5 * q).exp()
    });
    let norm = kernel_norm(pilot);
    let components = (0..=order)
        .map(|b| {
            let poly = derivative_poly(pilot, order - b, b);
            let off_diag: f64 = monomials
                .iter()
                .zip(&moments)
                .map(|(&(p, q), m)| poly.coef(p, q) * m)
                .sum();
            norm * (n * poly.coef(0, 0) + 2.0 * off_diag) / (n * n)
        })
        .collect();
    PsiFunctionals::from_components(order, components, *pilot)
}

/// Coefficients `w_b` such that the AMISE bias term equals
/// `(−1)^r/4 · Σ_b w_b ψ_(4+2r−b, b)`.
///
/// The entries of `vec H ⊗ vec H` are collected by multi-index: every index
/// tuple `(i, j, k, l)` contributes `H_ij H_kl`, extended by a repeated pair
/// `(c, c)` per derivative order, to the bucket given by how many of its
/// indices point at the second coordinate.
pub fn bias_weights(h: &BandwidthMatrix, deriv_order: usize) -> Vec<f64> {
    let order = 4 + 2 * deriv_order;
    let mut w = vec![0.0; order + 1];
    for tuple in 0..16usize {
        let (i, j, k, l) = (
            tuple & 1,
            (tuple >> 1) & 1,
            (tuple >> 2) & 1,
            (tuple >> 3) & 1,
        );
        let hh = h.get(i, j) * h.get(k, l);
        for extra in 0..(1usize << deriv_order) {
            let ys = extra.count_ones() as usize * 2;
            w[i + j + k + l + ys] += hh;
        }
    }
    w
}

/// Estimated AMISE of the density (`r = 0`) or density-gradient (`r = 1`)
/// estimator with bandwidth `h`.
///
/// `r = 0`: `(4π)⁻¹ n⁻¹ |H|^{-1/2} + ¼ ψ₄ᵀ(vec H ⊗ vec H)`.
/// `r = 1`: the variance term gains `½ tr(H⁻¹)` and the bias contracts the
/// order-6 functionals, with sign `(−1)^r`.
pub fn amise_objective(
    h: &BandwidthMatrix,
    psi: &PsiFunctionals,
    n: usize,
    deriv_order: usize,
) -> Result<f64> {
    if psi.order() != 4 + 2 * deriv_order {
        return Err(KsError::InvalidArgument(format!(
            "psi order {} does not match derivative order {deriv_order}",
            psi.order()
        )));
    }
    let mut variance = 1.0 / (4.0 * std::f64::consts::PI * n as f64 * h.det().sqrt());
    if deriv_order == 1 {
        variance *= 0.5 * h.inverse().trace();
    }
    let sign = if deriv_order.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let bias: f64 = bias_weights(h, deriv_order)
        .iter()
        .zip(psi.components())
        .map(|(w, p)| w * p)
        .sum();
    Ok(variance + sign * 0.25 * bias)
}
