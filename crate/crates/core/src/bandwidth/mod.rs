//! Data-driven bandwidth matrices.
//!
//! * [`h_normal_scale`]: normal-reference rule, `c(n, r)·Σ̂`.
//! * [`h_diag_univariate_plugin`]: per-axis univariate direct plug-in, no
//!   off-diagonal smoothing.
//! * [`h_plugin`]: full plug-in; minimises an estimated AMISE over the SPD
//!   cone, for the density (`r = 0`) or its gradient (`r = 1`).
//! * [`h_ucv`]: unbiased (least-squares) cross validation.

mod optim;
mod plugin;
mod psi;
mod ucv;
mod univariate;

pub use optim::{minimize_spd, MinimizeOptions};
pub use plugin::{h_normal_scale, h_plugin, normal_scale_constant, plugin_pilot};
pub use psi::{amise_objective, bias_weights, psi_functionals, PsiFunctionals};
pub use ucv::{h_ucv, ucv_objective};
pub use univariate::{dpik, h_diag_univariate_plugin};

use crate::error::{KsError, Result};
use crate::types::{BandwidthMatrix, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    NormalScale,
    DiagPlugin,
    Plugin,
    Ucv,
    Fixed,
}

/// Which selector to run, for which derivative order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectorSpec {
    method: Method,
    deriv_order: usize,
    fixed: Option<BandwidthMatrix>,
}

impl SelectorSpec {
    pub fn new(method: Method, deriv_order: usize) -> Result<Self> {
        if deriv_order > 1 {
            return Err(KsError::InvalidArgument(format!(
                "derivative order {deriv_order} not supported (0 or 1)"
            )));
        }
        if deriv_order == 1 && !matches!(method, Method::NormalScale | Method::Plugin) {
            return Err(KsError::InvalidArgument(format!(
                "{method:?} has no gradient variant"
            )));
        }
        if method == Method::Fixed {
            return Err(KsError::InvalidArgument(
                "use SelectorSpec::fixed for a fixed matrix".into(),
            ));
        }
        Ok(Self {
            method,
            deriv_order,
            fixed: None,
        })
    }

    pub fn fixed(h: BandwidthMatrix) -> Self {
        Self {
            method: Method::Fixed,
            deriv_order: 0,
            fixed: Some(h),
        }
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn deriv_order(&self) -> usize {
        self.deriv_order
    }

    pub fn select(&self, points: &PointSet) -> Result<BandwidthMatrix> {
        match self.method {
            Method::NormalScale => h_normal_scale(points, self.deriv_order),
            Method::DiagPlugin => h_diag_univariate_plugin(points),
            Method::Plugin => h_plugin(points, self.deriv_order),
            Method::Ucv => h_ucv(points),
            Method::Fixed => Ok(self.fixed.expect("fixed selector carries a matrix")),
        }
    }
}
