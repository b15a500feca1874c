//! Derivative-free minimisation over 2×2 SPD matrices.
//!
//! Matrices are parametrised through their Cholesky factor as
//! `θ = (ln ℓ11, ℓ21 / s, ln ℓ22)`, where `s = √(ℓ11·ℓ22)` of the starting
//! matrix makes the middle coordinate unit-free. Every θ ∈ ℝ³ maps to an SPD
//! matrix, so the simplex search is unconstrained.

use crate::error::{KsError, Result};
use crate::types::{BandwidthMatrix, Cholesky};

type Params = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    /// Objective evaluations allowed per simplex run.
    pub max_evals: usize,
    /// Simplex diameter (parameter space) at which a run stops.
    pub tol: f64,
    /// Additional runs started from the previous optimum.
    pub restarts: usize,
    /// Initial simplex edge length in parameter space.
    pub step: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            max_evals: 500,
            tol: 1e-8,
            restarts: 1,
            step: 0.25,
        }
    }
}

/// Smallest determinant a minimiser may return.
const MIN_DET: f64 = 1e-300;

/// Minimises `objective` over SPD matrices starting from `init`, with
/// [`MinimizeOptions::default`].
pub fn minimize_spd<F>(objective: F, init: &BandwidthMatrix) -> Result<BandwidthMatrix>
where
    F: FnMut(&BandwidthMatrix) -> f64,
{
    minimize_spd_with(objective, init, MinimizeOptions::default())
}

pub fn minimize_spd_with<F>(
    mut objective: F,
    init: &BandwidthMatrix,
    opts: MinimizeOptions,
) -> Result<BandwidthMatrix>
where
    F: FnMut(&BandwidthMatrix) -> f64,
{
    let chol = init.cholesky();
    let scale = (chol.l11 * chol.l22).sqrt();
    let to_matrix = |t: &Params| -> Result<BandwidthMatrix> {
        let l = Cholesky {
            l11: t[0].exp(),
            l21: t[1] * scale,
            l22: t[2].exp(),
        };
        l.to_matrix().map_err(|_| KsError::NonFiniteObjective)
    };
    let mut eval = |t: &Params| -> Result<f64> {
        let h = to_matrix(t)?;
        let v = objective(&h);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(KsError::NonFiniteObjective)
        }
    };

    let start: Params = [chol.l11.ln(), chol.l21 / scale, chol.l22.ln()];
    let f_init = eval(&start)?;
    let mut best = (start, f_init);
    for _ in 0..=opts.restarts {
        best = nelder_mead(&mut eval, best.0, best.1, opts)?;
    }
    if best.1 >= f_init {
        return Ok(*init);
    }
    let h = to_matrix(&best.0)?;
    if h.det() < MIN_DET {
        return Err(KsError::NonFiniteObjective);
    }
    Ok(h)
}

fn nelder_mead<E>(eval: &mut E, x0: Params, f0: f64, opts: MinimizeOptions) -> Result<(Params, f64)>
where
    E: FnMut(&Params) -> Result<f64>,
{
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let mut simplex: Vec<(Params, f64)> = vec![(x0, f0)];
    let mut evals = 0usize;
    for k in 0..3 {
        let mut v = x0;
        v[k] += opts.step;
        let f = eval(&v)?;
        evals += 1;
        simplex.push((v, f));
    }

    let lerp = |a: &Params, b: &Params, t: f64| -> Params {
        [
            a[0] + t * (b[0] - a[0]),
            a[1] + t * (b[1] - a[1]),
            a[2] + t * (b[2] - a[2]),
        ]
    };

    loop {
        // stable: on ties the earlier (older) vertex stays ahead
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(v, _)| {
                ((v[0] - best[0]).powi(2) + (v[1] - best[1]).powi(2) + (v[2] - best[2]).powi(2))
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < opts.tol || evals >= opts.max_evals {
            return Ok(simplex[0]);
        }

        let mut centroid = [0.0; 3];
        for (v, _) in &simplex[..3] {
            for k in 0..3 {
                centroid[k] += v[k] / 3.0;
            }
        }
        let (worst, f_worst) = simplex[3];
        let f_best = simplex[0].1;
        let f_second = simplex[2].1;

        let xr = lerp(&centroid, &worst, -ALPHA);
        let fr = eval(&xr)?;
        evals += 1;

        if fr < f_best {
            let xe = lerp(&centroid, &worst, -ALPHA * GAMMA);
            let fe = eval(&xe)?;
            evals += 1;
            simplex[3] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < f_second {
            simplex[3] = (xr, fr);
        } else {
            let (xc, fc, accept) = if fr < f_worst {
                let xc = lerp(&centroid, &xr, RHO);
                let fc = eval(&xc)?;
                (xc, fc, fc <= fr)
            } else {
                let xc = lerp(&centroid, &worst, RHO);
                let fc = eval(&xc)?;
                (xc, fc, fc < f_worst)
            };
            evals += 1;
            if accept {
                simplex[3] = (xc, fc);
            } else {
                let anchor = simplex[0].0;
                for vertex in simplex.iter_mut().skip(1) {
                    let v = lerp(&anchor, &vertex.0, SIGMA);
                    let f = eval(&v)?;
                    evals += 1;
                    *vertex = (v, f);
                }
            }
        }
    }
}
