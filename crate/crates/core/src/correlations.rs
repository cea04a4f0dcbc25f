//! Two-output correlation tensors `p(i, j | v, w)` and their constructors.
//!
//! Class membership (local, quantum, vectorial, ...) is carried by how a
//! tensor was built; [`SyncCorrelation::validate`] only checks the
//! nonsignalling and synchronous identities.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::graphs::{inverse, Graph};
use crate::numerics::dot;
use crate::operators::ProjectionFamily;
use crate::{Error, Result};

/// Endpoints of the marginal interval on which the explicit `K_5` tensor is
/// defined: `[(√5 - 1) / (2√5), (√5 + 1) / (2√5)]`.
pub fn qa_interval() -> (f64, f64) {
    let r5 = 5f64.sqrt();
    ((r5 - 1.0) / (2.0 * r5), (r5 + 1.0) / (2.0 * r5))
}

/// Tolerance for interval membership of user-supplied parameters.
const PARAM_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SyncCorrelation {
    n: usize,
    p: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub nonneg: bool,
    pub normalized: bool,
    pub nonsignalling: bool,
    pub synchronous: bool,
    pub max_residual: f64,
    pub nonneg_residual: f64,
    pub normalization_residual: f64,
    pub nonsignalling_residual: f64,
    pub synchronous_residual: f64,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.nonneg && self.normalized && self.nonsignalling && self.synchronous
    }
}

#[inline]
fn idx(n: usize, i: usize, j: usize, v: usize, w: usize) -> usize {
    ((v * n + w) * 2 + i) * 2 + j
}

impl SyncCorrelation {
    /// Builds from a block function `(v, w) -> [[p00, p01], [p10, p11]]`.
    pub fn from_blocks(n: usize, mut block: impl FnMut(usize, usize) -> [[f64; 2]; 2]) -> Self {
        let mut p = vec![0.0; 4 * n * n];
        for v in 0..n {
            for w in 0..n {
                let b = block(v, w);
                for i in 0..2 {
                    for j in 0..2 {
                        p[idx(n, i, j, v, w)] = b[i][j];
                    }
                }
            }
        }
        Self { n, p }
    }

    /// The uniform tensor `p ≡ 1/4`.
    pub fn uniform(n: usize) -> Self {
        Self::from_blocks(n, |_, _| [[0.25; 2]; 2])
    }

    /// Both parties always answer `output`.
    pub fn deterministic(n: usize, output: usize) -> Self {
        Self::from_blocks(n, |_, _| {
            let mut b = [[0.0; 2]; 2];
            b[output][output] = 1.0;
            b
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, v: usize, w: usize) -> f64 {
        self.p[idx(self.n, i, j, v, w)]
    }

    pub fn block(&self, v: usize, w: usize) -> [[f64; 2]; 2] {
        [[self.get(0, 0, v, w), self.get(0, 1, v, w)], [self.get(1, 0, v, w), self.get(1, 1, v, w)]]
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        let n = self.n;
        let mut neg: f64 = 0.0;
        let mut norm: f64 = 0.0;
        let mut ns: f64 = 0.0;
        let mut sync: f64 = 0.0;
        for v in 0..n {
            for w in 0..n {
                let b = self.block(v, w);
                let total: f64 = b.iter().flatten().sum();
                norm = norm.max((total - 1.0).abs());
                for x in b.iter().flatten() {
                    neg = neg.max(-x);
                }
                for i in 0..2 {
                    // Alice's marginal at (i, v) must not depend on w; compare against w = 0.
                    let a = self.get(i, 0, v, w) + self.get(i, 1, v, w);
                    let a0 = self.get(i, 0, v, 0) + self.get(i, 1, v, 0);
                    ns = ns.max((a - a0).abs());
                    let bm = self.get(0, i, v, w) + self.get(1, i, v, w);
                    let b0 = self.get(0, i, 0, w) + self.get(1, i, 0, w);
                    ns = ns.max((bm - b0).abs());
                }
            }
            sync = sync.max(self.get(0, 1, v, v).abs()).max(self.get(1, 0, v, v).abs());
        }
        ValidationReport {
            nonneg: neg <= tol,
            normalized: norm <= tol,
            nonsignalling: ns <= tol,
            synchronous: sync <= tol,
            max_residual: neg.max(norm).max(ns).max(sync),
            nonneg_residual: neg,
            normalization_residual: norm,
            nonsignalling_residual: ns,
            synchronous_residual: sync,
        }
    }

    /// Marginal densities `(p_A(i|v), p_B(j|w))`, read off at the other
    /// party's input 0.
    pub fn marginals(&self, tol: f64) -> Result<(Vec<[f64; 2]>, Vec<[f64; 2]>)> {
        let report = self.validate(tol);
        if !report.nonsignalling {
            return Err(Error::Invalid { what: "nonsignalling", residual: report.nonsignalling_residual });
        }
        let alice = (0..self.n)
            .map(|v| [0, 1].map(|i| self.get(i, 0, v, 0) + self.get(i, 1, v, 0)))
            .collect();
        let bob = (0..self.n)
            .map(|w| [0, 1].map(|j| self.get(0, j, 0, w) + self.get(1, j, 0, w)))
            .collect();
        Ok((alice, bob))
    }

    /// Relabels inputs: the result at `(i, j | v, w)` is the input at
    /// `(i, j | π⁻¹(v), π⁻¹(w))`.
    pub fn act_permutation(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: perm.len() });
        }
        let mut seen = vec![false; self.n];
        for &x in perm {
            if x >= self.n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
            }
        }
        let inv = inverse(perm);
        Ok(Self::from_blocks(self.n, |v, w| self.block(inv[v], inv[w])))
    }

    /// Swaps the two outputs for both parties.
    pub fn reflect(&self) -> Self {
        Self::from_blocks(self.n, |v, w| {
            let b = self.block(v, w);
            [[b[1][1], b[1][0]], [b[0][1], b[0][0]]]
        })
    }

    /// `Σ_{(v,w)∈E} p(0,0|v,w)` over ordered edges.
    pub fn edge_objective(&self, g: &Graph) -> Result<f64> {
        if g.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: g.n() });
        }
        Ok(g.edges().map(|(v, w)| self.get(0, 0, v, w)).sum())
    }

    /// The synchronous nonsignalling tensor with every marginal `t` and edge
    /// mass `s / |E|` on each ordered edge. Non-adjacent pairs get the product
    /// completion `p(0,0|v,w) = t²`.
    pub fn from_edge_value(g: &Graph, t: f64, s: f64) -> Result<Self> {
        check_unit(t)?;
        let e = g.edge_count();
        let (lo, hi) = crate::curves::ns_s_bounds(t, e)?;
        if s < lo - PARAM_SLACK || s > hi + PARAM_SLACK {
            return Err(Error::OutOfRange { value: s, lo, hi });
        }
        let edge = if e == 0 { 0.0 } else { s / e as f64 };
        Ok(Self::from_blocks(g.n(), |v, w| {
            let a = if v == w {
                t
            } else if g.has_edge(v, w) {
                edge
            } else {
                t * t
            };
            agreement_block(t, a)
        }))
    }

    /// `p(i,j|v,w) = τ(E_{v,i} E_{w,j})` with `E_{v,1} = I - E_{v,0}`.
    pub fn from_projection_family(fam: &ProjectionFamily, tol: f64) -> Result<Self> {
        let worst = fam.max_projection_residual();
        if worst > tol {
            return Err(Error::NotProjection(worst));
        }
        let n = fam.len();
        let traces: Vec<f64> = (0..n).map(|v| fam.trace(v)).collect();
        let pair = fam.pair_traces();
        Ok(Self::from_blocks(n, |v, w| {
            let both = pair[v * n + w];
            [
                [both, traces[v] - both],
                [traces[w] - both, 1.0 - traces[v] - traces[w] + both],
            ]
        }))
    }

    /// `p(i,j|v,w) = ⟨x_{v,i}, x_{w,j}⟩` for vectors with
    /// `x_{v,0} + x_{v,1} = h`, `x_{v,0} ⟂ x_{v,1}` and `‖h‖ = 1`.
    pub fn from_vectors(x: &[[Vec<f64>; 2]], h: &[f64], tol: f64) -> Result<Self> {
        let bad = |what: &'static str, residual: f64| Err(Error::Invalid { what, residual });
        let hn = dot(h, h).sqrt();
        if (hn - 1.0).abs() > tol {
            return bad("unit h", (hn - 1.0).abs());
        }
        for [x0, x1] in x {
            if x0.len() != h.len() || x1.len() != h.len() {
                return Err(Error::DimensionMismatch { expected: h.len(), got: x0.len().min(x1.len()) });
            }
            let orth = dot(x0, x1).abs();
            if orth > tol {
                return bad("orthogonal outputs", orth);
            }
            let split = x0.iter().zip(x1).zip(h).map(|((a, b), c)| (a + b - c).abs()).fold(0.0, f64::max);
            if split > tol {
                return bad("outputs summing to h", split);
            }
        }
        let out = Self::from_blocks(x.len(), |v, w| {
            [0, 1].map(|i| [0, 1].map(|j| dot(&x[v][i], &x[w][j])))
        });
        let neg = out.p.iter().fold(0.0f64, |m, &y| m.max(-y));
        if neg > tol {
            return bad("nonnegative inner products", neg);
        }
        Ok(out)
    }

    /// The `K_5` tensor with marginals `t` and every off-diagonal block
    /// `(t(5t-1)/4, 5t(1-t)/4, 5t(1-t)/4, (1-t)(4-5t)/4)`. For irrational `t`
    /// in [`qa_interval`] it is a limit of finite-dimensional quantum
    /// correlations but not one itself.
    pub fn explicit_qa_not_q(t: f64) -> Result<Self> {
        let (lo, hi) = qa_interval();
        if !(t >= lo - PARAM_SLACK && t <= hi + PARAM_SLACK) {
            return Err(Error::OutOfRange { value: t, lo, hi });
        }
        Ok(Self::from_blocks(5, |v, w| {
            if v == w {
                agreement_block(t, t)
            } else {
                [
                    [0.25 * t * (5.0 * t - 1.0), 1.25 * t * (1.0 - t)],
                    [1.25 * t * (1.0 - t), 0.25 * (1.0 - t) * (4.0 - 5.0 * t)],
                ]
            }
        }))
    }

    pub fn to_json(&self) -> CorrelationJson {
        let p = (0..self.n)
            .map(|v| (0..self.n).map(|w| self.block(v, w)).collect())
            .collect();
        CorrelationJson { n: self.n, p }
    }

    pub fn from_json(doc: &CorrelationJson) -> Result<Self> {
        if doc.p.len() != doc.n || doc.p.iter().any(|row| row.len() != doc.n) {
            return Err(Error::Parse(format!("tensor shape does not match n = {}", doc.n)));
        }
        if doc.p.iter().flatten().flatten().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parse("non-finite tensor entry".into()));
        }
        Ok(Self::from_blocks(doc.n, |v, w| doc.p[v][w]))
    }

    /// Reads a correlation file and validates it at `tol`.
    pub fn load(path: impl AsRef<Path>, tol: f64) -> Result<(Self, ValidationReport)> {
        let doc: CorrelationJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let p = Self::from_json(&doc)?;
        let report = p.validate(tol);
        Ok((p, report))
    }
}

/// JSON layout `{ "n": int, "p": [v][w][i][j] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelationJson {
    pub n: usize,
    pub p: Vec<Vec<[[f64; 2]; 2]>>,
}

/// The nonsignalling block with both marginals `t` and agreement mass `a` on output 0.
fn agreement_block(t: f64, a: f64) -> [[f64; 2]; 2] {
    [[a, t - a], [t - a, 1.0 - 2.0 * t + a]]
}

fn check_unit(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange { value: t, lo: 0.0, hi: 1.0 });
    }
    Ok(())
}
