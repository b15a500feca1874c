//! Bivariate kernel smoothing.
//!
//! Gaussian kernel density and density-gradient estimates with full
//! bandwidth matrices, data-driven bandwidth selectors, probability
//! contours, kernel discriminant analysis and mean shift clustering, with
//! vector output as GeoJSON and figures as SVG.
//!
//! ```
//! use ksmooth::{h_normal_scale, kde, probability_contours, PointSet};
//!
//! let xs: Vec<f64> = (0..200).map(|i| (i as f64 * 0.37).sin()).collect();
//! let ys: Vec<f64> = (0..200).map(|i| (i as f64 * 0.91).cos()).collect();
//! let pts = PointSet::new(xs, ys).unwrap();
//! let h = h_normal_scale(&pts, 0).unwrap();
//! let est = kde(&pts, &h, 51).unwrap();
//! let regions = probability_contours(&est, &[25, 50, 75]).unwrap();
//! assert_eq!(regions.len(), 3);
//! ```

pub mod bandwidth;
pub mod classify;
pub mod cli;
pub mod density;
pub mod derivative;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod meanshift;
pub mod types;

pub use bandwidth::{
    dpik, h_diag_univariate_plugin, h_normal_scale, h_plugin, h_ucv, normal_scale_constant, Method,
    SelectorSpec,
};
pub use classify::{kda_fit, kda_grid_labels, kda_predict, Classifier, HullMask, LabelField};
pub use density::{
    contour_breaks, contour_levels, kde, kde_at, kde_grid, make_grid, ContourLevels, KdeResult,
};
pub use derivative::{kdde_grad_at, kdde_grad_grid, quiver, GradientResult, QuiverField};
pub use error::{KsError, Result};
pub use geometry::{
    marching_squares, probability_contours, ContourSet, Geometry, MultiPolygon, Polygon, Ring,
};
pub use meanshift::{
    cluster_hulls, ms_cluster, ms_converge, ms_step, ClusterResult, MeanShiftConfig,
};
pub use types::{BandwidthMatrix, DensityField, FieldKind, Grid2D, Point, PointSet};
