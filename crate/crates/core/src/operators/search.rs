//! Numerical search for projections summing to a scalar multiple of the
//! identity.
//!
//! Alternates between the affine set `{Σ P_j = λI}` (an orthogonal
//! projection in the product space: subtract `D/count` from each member,
//! `D = Σ P_j − λI`) and the product of rank-`r` projection manifolds (top-`r`
//! eigenprojection). Iterates are always exact projections, so only the sum
//! residual needs to be driven down.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{sum_matrices, ProjectionFamily};
use crate::numerics::{jacobi_eigen, Matrix, SymMatrix};
use crate::{Error, Result};

/// Restarts evaluated together before checking for success.
const BATCH: usize = 8;
/// Dimension doublings tried after the smallest admissible dimension.
const MAX_DOUBLINGS: u32 = 3;

/// `[(5 − √5)/2, (5 + √5)/2]`: the values of `λ` for which five projections
/// can sum to `λI`.
pub fn krs_interval() -> (f64, f64) {
    let r = 5f64.sqrt();
    ((5.0 - r) / 2.0, (5.0 + r) / 2.0)
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
    /// Sum residual at which a restart counts as a success.
    pub tol: f64,
    /// Overrides the starting dimension; must make the rank integral.
    pub dim_hint: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { seed: 0x5eed, restarts: 50, max_iter: 20_000, tol: 1e-10, dim_hint: None }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Whether `residual ≤ 1e-6`-style success was reached (`opts.tol`).
    pub success: bool,
    /// `‖Σ_j P_j − λI‖_F` of the returned family.
    pub residual: f64,
    pub family: ProjectionFamily,
    /// Sub-seed of the returned restart.
    pub seed: u64,
    pub dim: usize,
    pub rank: usize,
    /// Restarts actually run, over all dimensions.
    pub restarts_used: usize,
}

fn sub_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Projection onto the span of the top `r` eigenvectors of the symmetric part of `x`.
fn top_eigenprojection(x: &Matrix, r: usize) -> Result<Matrix> {
    let k = x.rows();
    let s = SymMatrix::from_fn(k, |i, j| 0.5 * (x[(i, j)] + x[(j, i)]));
    let eig = jacobi_eigen(&s, 1e-15)?;
    let v = &eig.vectors;
    Ok(Matrix::from_fn(k, k, |i, j| (k - r..k).map(|c| v[(i, c)] * v[(j, c)]).sum()))
}

fn random_projection(rng: &mut ChaCha8Rng, k: usize, r: usize) -> Result<Matrix> {
    let g = Matrix::from_fn(k, k, |_, _| rng.sample::<f64, _>(StandardNormal));
    top_eigenprojection(&g, r)
}

struct Run {
    residual: f64,
    seed: u64,
    projections: Vec<Matrix>,
}

fn sum_residual(ps: &[Matrix], lambda: f64) -> f64 {
    sum_matrices(ps).add_scaled_identity(-lambda).frobenius_norm()
}

fn single_run(count: usize, k: usize, r: usize, lambda: f64, seed: u64, opts: &SearchOptions) -> Result<Run> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ps = (0..count).map(|_| random_projection(&mut rng, k, r)).collect::<Result<Vec<_>>>()?;
    let mut residual = sum_residual(&ps, lambda);
    let mut best = residual;
    let mut since_best = 0;
    for _ in 0..opts.max_iter {
        if residual <= opts.tol {
            break;
        }
        let d = sum_matrices(&ps).add_scaled_identity(-lambda).scale(1.0 / count as f64);
        ps = ps.iter().map(|p| top_eigenprojection(&(p - &d), r)).collect::<Result<Vec<_>>>()?;
        residual = sum_residual(&ps, lambda);
        // give up on restarts stuck at a non-solution fixed point
        if residual < 0.999 * best {
            best = residual;
            since_best = 0;
        } else {
            since_best += 1;
            if since_best > 500 {
                break;
            }
        }
    }
    Ok(Run { residual, seed, projections: ps })
}

fn run_batch(count: usize, k: usize, r: usize, lambda: f64, seeds: &[u64], opts: &SearchOptions) -> Result<Vec<Run>> {
    #[cfg(feature = "parallel")]
    let iter = seeds.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = seeds.iter();
    iter.map(|&s| single_run(count, k, r, lambda, s, opts)).collect()
}

/// Searches for `count` projections of equal rank summing to `λI`.
///
/// The dimension starts at the smallest `k` making `r = λk/count` integral
/// (or `opts.dim_hint`) and doubles up to three times when every restart
/// fails. Restarts run in batches with sub-seeds derived from `opts.seed`;
/// the best run is chosen by `(residual, seed)`, so the outcome does not
/// depend on scheduling. Failure is reported in the outcome, not as an error.
pub fn projection_sum_search(count: usize, lambda: Ratio<i64>, opts: &SearchOptions) -> Result<SearchOutcome> {
    if count != 5 {
        return Err(Error::InvalidArgument(format!("search is defined for five projections, got {count}")));
    }
    let lf = lambda.to_f64().ok_or_else(|| Error::InvalidArgument("λ not representable".into()))?;
    let (lo, hi) = krs_interval();
    if lf < lo || lf > hi {
        return Err(Error::OutOfRange { value: lf, lo, hi });
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let trace = lambda / count as i64;
    let base = *trace.denom() as usize;
    let k0 = match opts.dim_hint {
        Some(k) if k > 0 && k % base == 0 => k,
        Some(k) => {
            return Err(Error::InvalidArgument(format!("dimension {k} does not make rank {trace}·k integral")));
        }
        None => base,
    };

    let mut best: Option<(Run, usize, usize)> = None;
    let mut used = 0;
    for doubling in 0..=MAX_DOUBLINGS {
        let k = k0 << doubling;
        let r = (trace * k as i64).to_integer() as usize;
        let mut done = 0;
        while done < opts.restarts {
            let n = BATCH.min(opts.restarts - done);
            let seeds: Vec<u64> = (0..n).map(|i| sub_seed(opts.seed, used + i)).collect();
            let runs = run_batch(count, k, r, lf, &seeds, opts)?;
            done += n;
            used += n;
            for run in runs {
                let better = match &best {
                    None => true,
                    Some((b, _, _)) => (run.residual, run.seed) < (b.residual, b.seed),
                };
                if better {
                    best = Some((run, k, r));
                }
            }
            if best.as_ref().is_some_and(|(b, _, _)| b.residual <= opts.tol) {
                break;
            }
        }
        if best.as_ref().is_some_and(|(b, _, _)| b.residual <= opts.tol) {
            break;
        }
    }
    let (run, dim, rank) = best.expect("at least one restart ran");
    Ok(SearchOutcome {
        success: run.residual <= opts.tol,
        residual: run.residual,
        family: ProjectionFamily::single(run.projections)?,
        seed: run.seed,
        dim,
        rank,
        restarts_used: used,
    })
}
