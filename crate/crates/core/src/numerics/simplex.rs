//! Dense two-phase tableau simplex with Bland's anti-cycling rule.
//!
//! Problems are in standard equality form: minimize `cᵀx` subject to
//! `Ax = b`, `x ≥ 0`.

use super::Matrix;
use crate::{Error, Result};

const PIVOT_EPS: f64 = 1e-10;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Matrix,
    pub rhs: Vec<f64>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, constraints: Matrix, rhs: Vec<f64>) -> Result<Self> {
        if constraints.cols() != objective.len() {
            return Err(Error::DimensionMismatch { expected: objective.len(), got: constraints.cols() });
        }
        if constraints.rows() != rhs.len() {
            return Err(Error::DimensionMismatch { expected: rhs.len(), got: constraints.rows() });
        }
        Ok(Self { objective, constraints, rhs })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rhs.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    pub x: Vec<f64>,
    /// Equality multipliers `y` with `c - Aᵀy ≥ 0` at an optimum.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

struct Tableau {
    /// `m` constraint rows followed by the reduced-cost row; last column is the rhs.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
    pivots: usize,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.cols
    }

    fn obj(&self) -> &[f64] {
        self.t.last().expect("objective row")
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.t[row][col];
        for x in self.t[row].iter_mut() {
            *x /= piv;
        }
        let pivot_row = self.t[row].clone();
        for (r, line) in self.t.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = line[col];
            if f != 0.0 {
                for (x, p) in line.iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
                line[col] = 0.0;
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Bland's rule on columns `0..allowed`. Returns `Ok(true)` at optimality,
    /// `Ok(false)` if unbounded.
    fn run(&mut self, allowed: usize) -> Result<bool> {
        let rhs = self.rhs_col();
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(Error::SearchFailed(format!("simplex exceeded {MAX_PIVOTS} pivots")));
            }
            let Some(enter) = (0..allowed).find(|&j| self.obj()[j] < -PIVOT_EPS) else {
                return Ok(true);
            };
            let m = self.basis.len();
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = self.t[i][enter];
                if a > PIVOT_EPS {
                    let ratio = self.t[i][rhs] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            if ratio < lr - 1e-12 || (ratio <= lr + 1e-12 && self.basis[i] < self.basis[li]) {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, enter),
                None => return Ok(false),
            }
        }
    }

    fn set_costs(&mut self, costs: &[f64]) {
        let m = self.basis.len();
        let mut row = costs.to_vec();
        row.resize(self.cols + 1, 0.0);
        for i in 0..m {
            let cb = costs.get(self.basis[i]).copied().unwrap_or(0.0);
            if cb != 0.0 {
                for (r, x) in row.iter_mut().zip(&self.t[i]) {
                    *r -= cb * x;
                }
            }
        }
        *self.t.last_mut().expect("objective row") = row;
    }
}

pub fn simplex_solve(lp: &LinearProgram) -> Result<LpSolution> {
    let m = lp.num_constraints();
    let n = lp.num_vars();
    let cols = n + m;
    let a = &lp.constraints;
    if !a.is_finite() || lp.rhs.iter().chain(&lp.objective).any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("linear program has non-finite data".into()));
    }

    let sign: Vec<f64> = lp.rhs.iter().map(|&b| if b < 0.0 { -1.0 } else { 1.0 }).collect();
    let mut t = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![0.0; cols + 1];
        for j in 0..n {
            row[j] = sign[i] * a[(i, j)];
        }
        row[n + i] = 1.0;
        row[cols] = sign[i] * lp.rhs[i];
        t.push(row);
    }
    t.push(vec![0.0; cols + 1]);
    let mut tab = Tableau { t, basis: (n..n + m).collect(), cols, pivots: 0 };

    // phase one: minimize the sum of artificials
    let mut phase1 = vec![0.0; cols];
    phase1[n..].iter_mut().for_each(|c| *c = 1.0);
    tab.set_costs(&phase1);
    tab.run(cols)?;
    let infeas = -tab.obj()[cols];
    let scale = 1.0 + lp.rhs.iter().fold(0.0f64, |s, b| s.max(b.abs()));
    if infeas > 1e-9 * scale {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            value: f64::NAN,
            x: vec![],
            duals: vec![],
            pivots: tab.pivots,
        });
    }

    // drive artificials out of the basis; rows with no usable pivot are redundant
    let mut redundant = vec![false; m];
    for i in 0..m {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| tab.t[i][j].abs() > 1e-9) {
                Some(j) => tab.pivot(i, j),
                None => redundant[i] = true,
            }
        }
    }

    let mut phase2 = lp.objective.clone();
    phase2.resize(cols, 0.0);
    tab.set_costs(&phase2);
    if !tab.run(n)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            value: f64::NEG_INFINITY,
            x: vec![],
            duals: vec![],
            pivots: tab.pivots,
        });
    }

    let mut x = vec![0.0; n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.t[i][cols].max(0.0);
        }
    }
    let value = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
    // artificial column i carries -y_i (in the sign-flipped row space)
    let duals = (0..m)
        .map(|i| if redundant[i] { 0.0 } else { -tab.obj()[n + i] * sign[i] })
        .collect();
    Ok(LpSolution { status: LpStatus::Optimal, value, x, duals, pivots: tab.pivots })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_equality() {
        let lp = LinearProgram::new(vec![1.0], Matrix::from_rows(&[vec![1.0]]).unwrap(), vec![1.0]).unwrap();
        let s = simplex_solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_objective() {
        let lp = LinearProgram::new(vec![0.0, 0.0], Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap(), vec![1.0]).unwrap();
        let s = simplex_solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, 0.0);
        assert!((s.x[0] + s.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x + y = -1 with x, y >= 0
        let lp = LinearProgram::new(vec![1.0, 1.0], Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap(), vec![-1.0]).unwrap();
        assert_eq!(simplex_solve(&lp).unwrap().status, LpStatus::Infeasible);
        // min -x s.t. x - y = 0
        let lp = LinearProgram::new(vec![-1.0, 0.0], Matrix::from_rows(&[vec![1.0, -1.0]]).unwrap(), vec![0.0]).unwrap();
        assert_eq!(simplex_solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0], vec![0.0, 1.0, 1.0]]).unwrap();
        let lp = LinearProgram::new(vec![1.0, 2.0, 0.5], a, vec![1.0, 2.0, 1.0]).unwrap();
        let s = simplex_solve(&lp).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        // x = (1, 0, 1) costs 1.5, x = (0, 1, 0) costs 2
        assert!((s.value - 1.5).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the textbook largest-coefficient rule.
        let a = Matrix::from_rows(&[
            vec![0.25, -60.0, -0.04, 9.0, 1.0, 0.0, 0.0],
            vec![0.5, -90.0, -0.02, 3.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        let c = vec![-0.75, 150.0, -0.02, 6.0, 0.0, 0.0, 0.0];
        let s = simplex_solve(&LinearProgram::new(c, a, vec![0.0, 0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!((s.value + 0.05).abs() < 1e-12, "{}", s.value);
    }
}
