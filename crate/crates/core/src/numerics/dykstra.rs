//! PSD completion feasibility by Dykstra's alternating projections between
//! the PSD cone and an entrywise constraint set (pinned entries plus lower
//! bounds).
//!
//! Infeasibility is never proven: a run that fails to bring the two iterates
//! within `tol` of each other before `max_iter`, or whose residual stalls, is
//! reported as infeasible at that tolerance.

use std::collections::BTreeMap;

use super::{project_psd, SymMatrix};
use crate::{Error, Result};

/// Pinned entries and entrywise lower bounds on a symmetric matrix.
/// Entries are addressed by unordered index pairs.
#[derive(Debug, Clone, Default)]
pub struct EntryConstraints {
    dim: usize,
    fixed: BTreeMap<(usize, usize), f64>,
    lower: BTreeMap<(usize, usize), f64>,
}

fn key(i: usize, j: usize) -> (usize, usize) {
    if i >= j {
        (i, j)
    } else {
        (j, i)
    }
}

impl EntryConstraints {
    pub fn new(dim: usize) -> Self {
        Self { dim, ..Self::default() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Pins entry `(i, j)` (and `(j, i)`). Pinning the same entry to two
    /// different values is an inconsistent affine set.
    pub fn fix(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        self.check_index(i, j)?;
        match self.fixed.insert(key(i, j), value) {
            Some(old) if old != value => Err(Error::InvalidArgument(format!(
                "entry ({i}, {j}) pinned to both {old} and {value}"
            ))),
            _ => Ok(()),
        }
    }

    /// Requires `entry(i, j) >= bound`; repeated bounds keep the largest.
    pub fn bound_below(&mut self, i: usize, j: usize, bound: f64) -> Result<()> {
        self.check_index(i, j)?;
        let slot = self.lower.entry(key(i, j)).or_insert(bound);
        *slot = slot.max(bound);
        Ok(())
    }

    fn check_index(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.dim || j >= self.dim {
            return Err(Error::InvalidArgument(format!("entry ({i}, {j}) outside dimension {}", self.dim)));
        }
        Ok(())
    }

    pub fn fixed_value(&self, i: usize, j: usize) -> Option<f64> {
        self.fixed.get(&key(i, j)).copied()
    }

    /// Euclidean projection onto the constraint set. Pinned entries win over
    /// lower bounds on the same entry.
    pub fn project(&self, s: &SymMatrix) -> SymMatrix {
        let mut out = s.clone();
        for (&(i, j), &b) in &self.lower {
            if out.get(i, j) < b {
                out.set(i, j, b);
            }
        }
        for (&(i, j), &v) in &self.fixed {
            out.set(i, j, v);
        }
        out
    }

    /// Largest violation of the constraints by `s`.
    pub fn violation(&self, s: &SymMatrix) -> f64 {
        let fixed = self.fixed.iter().map(|(&(i, j), &v)| (s.get(i, j) - v).abs());
        let lower = self.lower.iter().map(|(&(i, j), &b)| (b - s.get(i, j)).max(0.0));
        fixed.chain(lower).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DykstraOptions {
    /// Frobenius distance between the two iterates that counts as feasible.
    pub tol: f64,
    pub max_iter: usize,
    /// Iterations between stall checks.
    pub stall_window: usize,
    /// A window whose residual shrinks by less than this factor is a stall.
    pub stall_ratio: f64,
}

impl Default for DykstraOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 50_000, stall_window: 200, stall_ratio: 0.999 }
    }
}

#[derive(Debug, Clone)]
pub struct Feasibility {
    pub feasible: bool,
    /// The last iterate of the constraint-set side: it satisfies pinned
    /// entries and bounds exactly. When `feasible`, its smallest eigenvalue is
    /// at least `-tol` (it lies within `tol` of the PSD iterate).
    pub witness: SymMatrix,
    pub residual: f64,
    pub iterations: usize,
}

/// Runs Dykstra's method from `start`.
pub fn dykstra_feasible(
    constraints: &EntryConstraints,
    start: &SymMatrix,
    opts: DykstraOptions,
) -> Result<Feasibility> {
    if start.dim() != constraints.dim() {
        return Err(Error::DimensionMismatch { expected: constraints.dim(), got: start.dim() });
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let n = start.dim();
    let mut x = constraints.project(start);
    let mut p = SymMatrix::zeros(n);
    let mut q = SymMatrix::zeros(n);
    let mut residual = f64::INFINITY;
    let mut window_start = f64::INFINITY;

    for iter in 1..=opts.max_iter {
        let y = project_psd(&x.zip_with(&p, |a, b| a + b))?;
        p = x.zip_with(&p, |a, b| a + b).zip_with(&y, |a, b| a - b);
        let x_next = constraints.project(&y.zip_with(&q, |a, b| a + b));
        q = y.zip_with(&q, |a, b| a + b).zip_with(&x_next, |a, b| a - b);
        x = x_next;
        residual = x.distance(&y);
        if residual <= opts.tol {
            return Ok(Feasibility { feasible: true, witness: x, residual, iterations: iter });
        }
        if iter % opts.stall_window == 0 {
            if residual > opts.stall_ratio * window_start {
                return Ok(Feasibility { feasible: false, witness: x, residual, iterations: iter });
            }
            window_start = residual;
        }
    }
    Ok(Feasibility { feasible: false, witness: x, residual, iterations: opts.max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::min_eigenvalue;

    #[test]
    fn empty_constraints_from_psd_start() {
        let c = EntryConstraints::new(3);
        let f = dykstra_feasible(&c, &SymMatrix::identity(3), DykstraOptions::default()).unwrap();
        assert!(f.feasible);
        assert_eq!(f.iterations, 1);
    }

    #[test]
    fn edge_value_above_marginal_is_infeasible() {
        // [[t, e], [e, t]] with e > t cannot be PSD
        let mut c = EntryConstraints::new(2);
        c.fix(0, 0, 0.5).unwrap();
        c.fix(1, 1, 0.5).unwrap();
        c.fix(0, 1, 0.6).unwrap();
        let f = dykstra_feasible(&c, &SymMatrix::zeros(2), DykstraOptions::default()).unwrap();
        assert!(!f.feasible);
        assert!(f.iterations < 1000, "stall detection should stop early: {}", f.iterations);
    }

    #[test]
    fn free_entry_completion() {
        // [[1, a, ?], [a, 1, a], [?, a, 1]] with a = 0.9 needs ? near 0.62..1
        let mut c = EntryConstraints::new(3);
        for i in 0..3 {
            c.fix(i, i, 1.0).unwrap();
        }
        c.fix(0, 1, 0.9).unwrap();
        c.fix(1, 2, 0.9).unwrap();
        c.bound_below(0, 2, 0.0).unwrap();
        let f = dykstra_feasible(&c, &SymMatrix::identity(3), DykstraOptions::default()).unwrap();
        assert!(f.feasible);
        assert!(c.violation(&f.witness) == 0.0);
        assert!(min_eigenvalue(&f.witness).unwrap() >= -1e-9);
        assert!(f.witness.get(0, 2) >= 2.0 * 0.81 - 1.0 - 1e-6);
    }

    #[test]
    fn inconsistent_pins() {
        let mut c = EntryConstraints::new(2);
        c.fix(0, 1, 0.1).unwrap();
        assert!(c.fix(1, 0, 0.2).is_err());
        assert!(c.fix(2, 0, 0.2).is_err());
    }
}
