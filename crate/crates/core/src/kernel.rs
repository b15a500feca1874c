//! Gaussian kernel `K_H(x) = (2π)⁻¹|H|^{-1/2} exp(−½ xᵀH⁻¹x)`, its partial
//! derivatives, and the pairwise sums shared by the bandwidth selectors.
//!
//! Any partial derivative of the kernel factors as a polynomial times the
//! kernel itself: `∂^m K_G(x) = P_m(x) K_G(x)`. The polynomials follow from
//! `P_{m+e_i} = ∂_i P_m − (G⁻¹x)_i P_m`, starting at `P_0 = 1`.

use rayon::prelude::*;

use crate::types::{BandwidthMatrix, Point, PointSet, QuadForm};

/// `(2π)⁻¹`.
pub const INV_2PI: f64 = 1.0 / (2.0 * std::f64::consts::PI);

/// Highest total derivative order supported by [`Poly2`].
pub const MAX_ORDER: usize = 8;

const N: usize = MAX_ORDER + 1;

/// Normalising constant `(2π)⁻¹|H|^{-1/2}`.
pub fn kernel_norm(h: &BandwidthMatrix) -> f64 {
    INV_2PI / h.det().sqrt()
}

pub fn gaussian(h: &BandwidthMatrix, x: Point) -> f64 {
    kernel_norm(h) * (-0.5 * h.mahalanobis_sq(x)).exp()
}

/// Dense bivariate polynomial, `coef[p][q]` multiplying `x^p y^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    coef: [[f64; N]; N],
}

impl Poly2 {
    pub fn one() -> Self {
        let mut coef = [[0.0; N]; N];
        coef[0][0] = 1.0;
        Self { coef }
    }

    pub fn coef(&self, p: usize, q: usize) -> f64 {
        self.coef[p][q]
    }

    /// Maximum total degree with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        let mut d = 0;
        for p in 0..N {
            for q in 0..N - p {
                if self.coef[p][q] != 0.0 {
                    d = d.max(p + q);
                }
            }
        }
        d
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut total = 0.0;
        let mut xp = 1.0;
        for p in 0..N {
            let mut yq = 1.0;
            for q in 0..N - p {
                total += self.coef[p][q] * xp * yq;
                yq *= y;
            }
            xp *= x;
        }
        total
    }

    /// `∂_axis P − (a·x + b·y)·P`, one step of the derivative recursion.
    fn step(&self, axis: usize, a: f64, b: f64) -> Self {
        let mut out = [[0.0; N]; N];
        for p in 0..N {
            for q in 0..N - p {
                let c = self.coef[p][q];
                if c == 0.0 {
                    continue;
                }
                match axis {
                    0 if p > 0 => out[p - 1][q] += p as f64 * c,
                    1 if q > 0 => out[p][q - 1] += q as f64 * c,
                    _ => {}
                }
                if p + q + 1 < N {
                    out[p + 1][q] -= a * c;
                    out[p][q + 1] -= b * c;
                }
            }
        }
        Self { coef: out }
    }
}

/// Polynomial factor of `∂^{(a,b)} K_G`, i.e. `a` derivatives in x and `b`
/// in y.
pub fn derivative_poly(g: &BandwidthMatrix, a: usize, b: usize) -> Poly2 {
    assert!(a + b <= MAX_ORDER, "derivative order {} too high", a + b);
    let s = g.inverse();
    let mut poly = Poly2::one();
    for _ in 0..a {
        poly = poly.step(0, s.h11(), s.h12());
    }
    for _ in 0..b {
        poly = poly.step(1, s.h12(), s.h22());
    }
    poly
}

/// Monomial exponents `(p, q)` with `p + q ≤ max_deg` and `p + q` of the same
/// parity as `max_deg`, in a fixed order.
pub(crate) fn parity_monomials(max_deg: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut deg = max_deg % 2;
    while deg <= max_deg {
        for p in 0..=deg {
            out.push((p, deg - p));
        }
        deg += 2;
    }
    out
}

/// Rows per work unit for the pairwise sums. Fixed so the reduction order,
/// and therefore the floating-point result, does not depend on thread count.
const ROW_BLOCK: usize = 64;

/// For every unordered pair `i < j` with `d = X_i − X_j`, accumulates
/// `weight(q) · d_x^p d_y^q` over the given monomials, where
/// `q = dᵀ S d` and `S` is the quadratic form.
///
/// Monomials must all have the same degree parity so the sum over ordered
/// pairs is exactly twice this one.
pub(crate) fn pair_moments<W>(
    points: &PointSet,
    form: QuadForm,
    monomials: &[(usize, usize)],
    weight: W,
) -> Vec<f64>
where
    W: Fn(f64) -> f64 + Sync,
{
    let xs = points.xs();
    let ys = points.ys();
    let n = xs.len();
    let max_p = monomials.iter().map(|m| m.0).max().unwrap_or(0);
    let max_q = monomials.iter().map(|m| m.1).max().unwrap_or(0);
    let k = monomials.len();

    let blocks: Vec<usize> = (0..n).step_by(ROW_BLOCK).collect();
    let partials: Vec<Vec<f64>> = blocks
        .par_iter()
        .map(|&start| {
            let mut acc = vec![0.0; k];
            let mut px = [1.0; N];
            let mut py = [1.0; N];
            for i in start..(start + ROW_BLOCK).min(n) {
                let (xi, yi) = (xs[i], ys[i]);
                for j in (i + 1)..n {
                    let dx = xi - xs[j];
                    let dy = yi - ys[j];
                    let w = weight(form.eval(dx, dy));
                    if w == 0.0 {
                        continue;
                    }
                    for p in 1..=max_p {
                        px[p] = px[p - 1] * dx;
                    }
                    for q in 1..=max_q {
                        py[q] = py[q - 1] * dy;
                    }
                    for (slot, &(p, q)) in acc.iter_mut().zip(monomials) {
                        *slot += w * px[p] * py[q];
                    }
                }
            }
            acc
        })
        .collect();

    let mut total = vec![0.0; k];
    for part in partials {
        for (t, v) in total.iter_mut().zip(part) {
            *t += v;
        }
    }
    total
}
