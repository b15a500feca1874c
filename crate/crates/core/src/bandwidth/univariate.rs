use rayon::prelude::*;

use crate::error::{KsError, Result};
use crate::types::{iqr, BandwidthMatrix, PointSet};

/// `Φ⁻¹(3/4) − Φ⁻¹(1/4)`.
const NORMAL_IQR: f64 = 1.348_979_500_392_163_5;

fn hermite(r: usize, x: f64) -> f64 {
    // probabilists' Hermite He_r via the three-term recurrence
    let (mut prev, mut cur) = (1.0, x);
    if r == 0 {
        return prev;
    }
    for k in 1..r {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `n⁻² Σ_i Σ_j L_g^{(r)}(x_i − x_j)` for the standard normal `L`, even `r`.
fn kernel_functional(xs: &[f64], r: usize, g: f64) -> f64 {
    let n = xs.len();
    let inv_sqrt_2pi = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let diag = n as f64 * hermite(r, 0.0);
    let off: f64 = (0..n)
        .into_par_iter()
        .with_min_len(64)
        .map(|i| {
            let mut s = 0.0;
            for j in (i + 1)..n {
                let u = (xs[i] - xs[j]) / g;
                s += hermite(r, u) * (-0.5 * u * u).exp();
            }
            s
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    // φ^{(r)}(u) = (−1)^r He_r(u) φ(u); r is even here
    inv_sqrt_2pi * (diag + 2.0 * off) / (g.powi(r as i32 + 1) * (n * n) as f64)
}

/// Two-stage direct plug-in bandwidth for univariate data with a Gaussian
/// kernel, started from a normal reference on the scale
/// `min(sd, IQR/1.349)`.
pub fn dpik(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(KsError::TooFewPoints { needed: 2, got: n });
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    let spread = iqr(values)? / NORMAL_IQR;
    let scale = match (sd > 0.0, spread > 0.0) {
        (true, true) => sd.min(spread),
        (true, false) => sd,
        (false, true) => spread,
        (false, false) => {
            return Err(KsError::DegenerateSample(
                "coordinate has zero variance and zero IQR".into(),
            ))
        }
    };
    let std: Vec<f64> = values.iter().map(|v| (v - mean) / scale).collect();
    let nf = n as f64;
    let pi = std::f64::consts::PI;

    // stage 1: ψ₈ from the normal reference gives the pilot for ψ₆
    let g6 = (2.0 * 2f64.sqrt().powi(9) / (7.0 * nf)).powf(1.0 / 9.0);
    let psi6 = kernel_functional(&std, 6, g6);
    // stage 2: pilot for ψ₄ from the estimated ψ₆ (negative for smooth data)
    let g4 = (-3.0 * (2.0 / pi).sqrt() / (psi6 * nf)).powf(1.0 / 7.0);
    let psi4 = kernel_functional(&std, 4, g4);
    let h = scale * (1.0 / (2.0 * pi.sqrt() * psi4 * nf)).powf(0.2);
    if h.is_finite() && h > 0.0 {
        Ok(h)
    } else {
        Err(KsError::DegenerateSample(format!(
            "univariate plug-in failed (psi6={psi6}, psi4={psi4})"
        )))
    }
}

/// `diag(h₁², h₂²)` with `hⱼ` the univariate plug-in bandwidth of axis `j`.
pub fn h_diag_univariate_plugin(points: &PointSet) -> Result<BandwidthMatrix> {
    if points.len() < 10 {
        return Err(KsError::TooFewPoints {
            needed: 10,
            got: points.len(),
        });
    }
    let hx = dpik(points.xs())?;
    let hy = dpik(points.ys())?;
    BandwidthMatrix::diagonal(hx * hx, hy * hy)
}
