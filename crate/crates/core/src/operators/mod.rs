//! Finite-dimensional projection families and the constructions that bound
//! `f_q` from above.
//!
//! A [`ProjectionFamily`] assigns a projection `E_v = E_{v,0}` to each vertex
//! inside a direct sum of matrix blocks; the trace is `τ = Σ_l λ_l tr_{n_l}`
//! with normalized block traces. The complementary projection `E_{v,1}` is
//! always `I - E_{v,0}`.

mod certificate;
mod clifford;
mod search;
mod witness;

pub use certificate::{
    nonclosure_certificate, CertificateEntry, CertificateTolerances, NonclosureCertificate, SecondDifference,
};
pub use clifford::{
    clifford_family, clifford_from_completion, clifford_generators, clifford_image, clifford_projections, CMatrix,
    CliffordOutcome, MAX_GENERATORS,
};
pub use search::{krs_interval, projection_sum_search, SearchOptions, SearchOutcome};
pub use witness::{round_sig, verify_witness, WitnessCheck, WitnessFile, WitnessResiduals, WitnessTolerances};

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::correlations::qa_interval;
use crate::graphs::Graph;
use crate::numerics::Matrix;
use crate::{Error, Result};

/// One matrix block with its trace weight and one projection per vertex.
#[derive(Debug, Clone)]
pub struct Block {
    pub weight: f64,
    pub projections: Vec<Matrix>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.projections.first().map_or(0, Matrix::rows)
    }
}

#[derive(Debug, Clone)]
pub struct ProjectionFamily {
    blocks: Vec<Block>,
    vertices: usize,
}

impl ProjectionFamily {
    /// A single block with the normalized trace.
    pub fn single(projections: Vec<Matrix>) -> Result<Self> {
        Self::with_blocks(vec![Block { weight: 1.0, projections }])
    }

    /// Weights must be positive and sum to one; every block must carry one
    /// square matrix per vertex.
    pub fn with_blocks(blocks: Vec<Block>) -> Result<Self> {
        let vertices = blocks.first().map_or(0, |b| b.projections.len());
        if blocks.is_empty() || vertices == 0 {
            return Err(Error::InvalidArgument("family needs at least one block and one vertex".into()));
        }
        let total: f64 = blocks.iter().map(|b| b.weight).sum();
        if blocks.iter().any(|b| !(b.weight > 0.0)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("block weights must be positive and sum to 1, got {total}")));
        }
        for b in &blocks {
            if b.projections.len() != vertices {
                return Err(Error::DimensionMismatch { expected: vertices, got: b.projections.len() });
            }
            let d = b.dim();
            if b.projections.iter().any(|p| p.rows() != d || p.cols() != d) {
                return Err(Error::InvalidArgument("projections in a block must share a square shape".into()));
            }
        }
        Ok(Self { blocks, vertices })
    }

    /// Number of vertices (projections per block).
    pub fn len(&self) -> usize {
        self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices == 0
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Total matrix dimension across blocks.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Block::dim).sum()
    }

    /// Projections of a single-block family.
    pub fn projections(&self) -> Option<&[Matrix]> {
        match self.blocks.as_slice() {
            [only] => Some(&only.projections),
            _ => None,
        }
    }

    /// `τ(E_v)`.
    pub fn trace(&self, v: usize) -> f64 {
        self.blocks.iter().map(|b| b.weight * b.projections[v].normalized_trace()).sum()
    }

    /// `τ(E_v E_w)`.
    pub fn pair_trace(&self, v: usize, w: usize) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.weight * b.projections[v].trace_of_product(&b.projections[w]) / b.dim() as f64)
            .sum()
    }

    /// Row-major `n × n` table of `τ(E_v E_w)`.
    pub fn pair_traces(&self) -> Vec<f64> {
        let n = self.vertices;
        let mut out = vec![0.0; n * n];
        for v in 0..n {
            for w in v..n {
                let x = self.pair_trace(v, w);
                out[v * n + w] = x;
                out[w * n + v] = x;
            }
        }
        out
    }

    /// Per-vertex `max(‖E² - E‖_F, ‖E - Eᵀ‖_F)` over blocks.
    pub fn projection_residuals(&self) -> Vec<f64> {
        (0..self.vertices)
            .map(|v| {
                self.blocks
                    .iter()
                    .map(|b| {
                        let (idem, sym) = b.projections[v].projection_residuals();
                        idem.max(sym)
                    })
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    pub fn max_projection_residual(&self) -> f64 {
        self.projection_residuals().into_iter().fold(0.0, f64::max)
    }

    /// `‖Σ_v E_v - λI‖_F`, accumulated over blocks.
    pub fn sum_residual(&self, lambda: f64) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                let s = sum_matrices(&b.projections).add_scaled_identity(-lambda);
                s.frobenius_norm().powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    /// `Σ_{(v,w)∈E} τ(E_v E_w)` over ordered edges.
    pub fn objective(&self, g: &Graph) -> Result<f64> {
        self.check_graph(g)?;
        Ok(g.edges().map(|(v, w)| self.pair_trace(v, w)).sum())
    }

    /// Per-vertex `‖E_v S_v - S_v E_v‖_F` with `S_v = Σ_{w:(v,w)∈E} E_w`.
    /// Vanishing residuals are necessary for a family to attain `f_q(t)`.
    pub fn commutation_residual(&self, g: &Graph) -> Result<Vec<f64>> {
        self.check_graph(g)?;
        Ok((0..self.vertices)
            .map(|v| {
                self.blocks
                    .iter()
                    .map(|b| {
                        let nbrs: Vec<&Matrix> = g.neighbors(v).map(|w| &b.projections[w]).collect();
                        if nbrs.is_empty() {
                            return 0.0;
                        }
                        let s = nbrs.iter().skip(1).fold(nbrs[0].clone(), |acc, m| &acc + m);
                        b.projections[v].commutator(&s).frobenius_norm().powi(2)
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .collect())
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if g.n() != self.vertices {
            return Err(Error::DimensionMismatch { expected: self.vertices, got: g.n() });
        }
        Ok(())
    }

    /// Replaces each block by the direct sum of its vertex-relabelings under
    /// `Aut(G)`: block `(l, π)` carries weight `λ_l / |Aut(G)|` and assigns
    /// `P_{π(v), l}` to vertex `v`. On a vertex-transitive graph every vertex
    /// then has the same trace `r_l` inside each original block.
    pub fn aut_symmetrize(&self, g: &Graph) -> Result<AutSymmetrized> {
        self.check_graph(g)?;
        if !g.is_vertex_edge_transitive()? {
            return Err(Error::NotTransitive);
        }
        let group = g.automorphisms()?;
        let order = group.len() as f64;
        let mut blocks = Vec::with_capacity(self.blocks.len() * group.len());
        let mut block_traces = Vec::with_capacity(self.blocks.len());
        let mut block_objectives = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let sub: Vec<Block> = group
                .iter()
                .map(|perm| Block {
                    weight: 1.0 / order,
                    projections: perm.iter().map(|&img| b.projections[img].clone()).collect(),
                })
                .collect();
            let part = ProjectionFamily { blocks: sub.clone(), vertices: self.vertices };
            block_traces.push(part.trace(0));
            block_objectives.push(part.objective(g)?);
            blocks.extend(sub.into_iter().map(|mut s| {
                s.weight *= b.weight;
                s
            }));
        }
        let family = ProjectionFamily { blocks, vertices: self.vertices };
        let trace_spread = (0..self.vertices)
            .map(|v| {
                self.blocks
                    .iter()
                    .enumerate()
                    .map(|(l, _)| {
                        let part = &family.blocks[l * group.len()..(l + 1) * group.len()];
                        let r: f64 = part.iter().map(|s| s.projections[v].normalized_trace()).sum::<f64>() / order;
                        (r - block_traces[l]).abs()
                    })
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        Ok(AutSymmetrized { family, block_traces, block_objectives, trace_spread })
    }
}

#[derive(Debug, Clone)]
pub struct AutSymmetrized {
    pub family: ProjectionFamily,
    /// Common vertex trace `r_l` inside each original block.
    pub block_traces: Vec<f64>,
    /// `Σ_{(v,w)∈E} τ_l(P̃_{v,l} P̃_{w,l})` for each original block.
    pub block_objectives: Vec<f64>,
    /// Largest deviation of any vertex's block trace from `r_l`.
    pub trace_spread: f64,
}

pub fn sum_matrices(ms: &[Matrix]) -> Matrix {
    let first = ms.first().expect("at least one matrix").clone();
    ms[1..].iter().fold(first, |acc, m| &acc + m)
}

/// Cyclic direct sums `P̃_i = P_i ⊕ P_{i+1} ⊕ … ⊕ P_{i+m-1}` (indices mod `m`)
/// of a single-block family whose members sum to `λI`. Every output has
/// normalized trace `λ/m` and the outputs still sum to `λI`.
pub fn cyclic_symmetrize(fam: &ProjectionFamily, tol: f64) -> Result<ProjectionFamily> {
    let ps = fam
        .projections()
        .ok_or_else(|| Error::InvalidArgument("cyclic symmetrization needs a single-block family".into()))?;
    let m = ps.len();
    let k = ps[0].rows() as f64;
    let lambda = ps.iter().map(Matrix::trace).sum::<f64>() / k;
    let residual = fam.sum_residual(lambda);
    if residual > tol {
        return Err(Error::InvalidArgument(format!("projections do not sum to a scalar: residual {residual:e}")));
    }
    let out = (0..m)
        .map(|i| {
            let parts: Vec<&Matrix> = (0..m).map(|j| &ps[(i + j) % m]).collect();
            Matrix::direct_sum(&parts)
        })
        .collect();
    ProjectionFamily::single(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FqMethod {
    Clifford,
    Search,
}

#[derive(Debug, Clone)]
pub struct FqUpper {
    pub t: Ratio<i64>,
    pub lambda: f64,
    /// `family_objective` of the witness on `K_5`.
    pub value: f64,
    pub witness: ProjectionFamily,
    pub method: FqMethod,
    pub sum_residual: f64,
    /// Sub-seed of the winning search restart (the base seed for Clifford).
    pub seed: u64,
}

/// Largest denominator accepted by [`fq_upper`].
pub const MAX_FQ_DENOMINATOR: i64 = 20;

/// Upper bound on `f_q(t)` for `K_5` at rational `t`: a five-projection
/// family summing to `5t·I`, cyclically symmetrized so each vertex has trace
/// `t`. At `t = 1/2` the Clifford family of the optimal vector completion is
/// used instead.
pub fn fq_upper(t: Ratio<i64>, opts: &SearchOptions) -> Result<FqUpper> {
    if *t.denom() > MAX_FQ_DENOMINATOR || *t.denom() <= 0 {
        return Err(Error::InvalidArgument(format!("denominator of {t} exceeds {MAX_FQ_DENOMINATOR}")));
    }
    let tf = t.to_f64().expect("small rational");
    let (lo, hi) = qa_interval();
    if tf < lo || tf > hi {
        return Err(Error::OutOfRange { value: tf, lo, hi });
    }
    let k5 = Graph::complete(5)?;
    let lambda = 5.0 * tf;
    if t == Ratio::new(1, 2) {
        let completion = crate::curves::complete_graph_completion(5, 0.5)?;
        let out = clifford_from_completion(&completion, crate::DEFAULT_TOL)?;
        let value = out.family.objective(&k5)?;
        let sum_residual = out.family.sum_residual(lambda);
        return Ok(FqUpper {
            t,
            lambda,
            value,
            witness: out.family,
            method: FqMethod::Clifford,
            sum_residual,
            seed: opts.seed,
        });
    }
    let found = projection_sum_search(5, t * 5, opts)?;
    if !found.success {
        return Err(Error::SearchFailed(format!(
            "no five projections summing to {}·I found (best residual {:e})",
            t * 5,
            found.residual
        )));
    }
    let witness = cyclic_symmetrize(&found.family, 1e-6)?;
    let value = witness.objective(&k5)?;
    let sum_residual = witness.sum_residual(lambda);
    Ok(FqUpper { t, lambda, value, witness, method: FqMethod::Search, sum_residual, seed: found.seed })
}
