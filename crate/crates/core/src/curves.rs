//! Graph correlation functions `f_r(t)`: the least total edge mass
//! `Σ_{(v,w)∈E} p(0,0|v,w)` over synchronous correlations of class `r` whose
//! marginals all equal `t`. Edges are ordered, so `|E|` counts each
//! undirected edge twice.

use std::fmt::Write as _;

use num_rational::Ratio;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::graphs::Graph;
use crate::numerics::{dykstra_feasible, simplex_solve, DykstraOptions, EntryConstraints, LinearProgram, LpStatus, Matrix, SymMatrix};
use crate::operators::{fq_upper, SearchOptions};
use crate::{Error, Result};

/// Largest vertex count for the atom LPs.
pub const MAX_LOC_VERTICES: usize = 12;

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange { value: t, lo: 0.0, hi: 1.0 });
    }
    Ok(())
}

/// `(max{0, 2t−1}·|E|, t·|E|)`: the range of edge mass allowed by
/// nonnegativity of the four outcome probabilities on an edge.
pub fn ns_s_bounds(t: f64, edge_count: usize) -> Result<(f64, f64)> {
    check_t(t)?;
    let e = edge_count as f64;
    Ok(((2.0 * t - 1.0).max(0.0) * e, t * e))
}

/// `max{0, |E|(2t − 1)}`.
pub fn f_ns(g: &Graph, t: f64) -> Result<f64> {
    check_t(t)?;
    Ok((g.edge_count() as f64 * (2.0 * t - 1.0)).max(0.0))
}

fn check_loc_size(g: &Graph) -> Result<()> {
    if g.n() > MAX_LOC_VERTICES {
        return Err(Error::TooLarge { n: g.n(), limit: MAX_LOC_VERTICES });
    }
    Ok(())
}

fn solve_min(lp: &LinearProgram) -> Result<f64> {
    let sol = simplex_solve(lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.value),
        LpStatus::Infeasible => Err(Error::SearchFailed("linear program infeasible".into())),
        LpStatus::Unbounded => Err(Error::SearchFailed("linear program unbounded".into())),
    }
}

/// `f_loc` by the LP over all `2^n` atoms `μ_S`: minimize `Σ_S μ_S e(S)`
/// subject to `Σ_S μ_S = 1` and `Σ_{S∋v} μ_S = t`, where `e(S)` counts
/// ordered edges inside `S`.
pub fn f_loc_full(g: &Graph, t: f64) -> Result<f64> {
    check_t(t)?;
    check_loc_size(g)?;
    let n = g.n();
    let atoms = 1usize << n;
    let objective: Vec<f64> = (0..atoms).map(|s| g.induced_edges(s as u32) as f64).collect();
    let a = Matrix::from_fn(n + 1, atoms, |row, s| match row {
        0 => 1.0,
        v => (s >> (v - 1) & 1) as f64,
    });
    let mut rhs = vec![t; n + 1];
    rhs[0] = 1.0;
    solve_min(&LinearProgram::new(objective, a, rhs)?)
}

/// `f_loc` for vertex-transitive graphs. Averaging a feasible measure over
/// `Aut(G)` keeps it feasible and keeps its cost, and an invariant measure
/// has every vertex marginal equal to `Σ_S μ_S |S|/n`. So atoms can be
/// pooled by `(|S|, e(S))` with the two constraints `Σ m = 1`,
/// `Σ m·|S|/n = t`.
pub fn f_loc_reduced(g: &Graph, t: f64) -> Result<f64> {
    check_t(t)?;
    check_loc_size(g)?;
    if !g.is_vertex_transitive()? {
        return Err(Error::NotTransitive);
    }
    let n = g.n();
    // smallest edge count for each subset size suffices: other classes of
    // the same size are dominated
    let mut min_edges = vec![usize::MAX; n + 1];
    for s in 0..1u32 << n {
        let k = s.count_ones() as usize;
        min_edges[k] = min_edges[k].min(g.induced_edges(s));
    }
    let objective: Vec<f64> = min_edges.iter().map(|&e| e as f64).collect();
    let a = Matrix::from_fn(2, n + 1, |row, k| if row == 0 { 1.0 } else { k as f64 / n as f64 });
    solve_min(&LinearProgram::new(objective, a, vec![1.0, t])?)
}

/// `f_loc`, through the reduced LP when the graph is vertex-transitive.
pub fn f_loc(g: &Graph, t: f64) -> Result<f64> {
    check_loc_size(g)?;
    if g.is_vertex_transitive()? {
        f_loc_reduced(g, t)
    } else {
        f_loc_full(g, t)
    }
}

/// Fractional chromatic number from the covering LP: minimize `Σ_I y_I` over
/// independent sets subject to `Σ_{I∋v} y_I ≥ 1`.
pub fn fractional_chromatic(g: &Graph) -> Result<f64> {
    check_loc_size(g)?;
    let n = g.n();
    let sets: Vec<u32> = g.independent_sets()?.into_iter().filter(|&s| s != 0).collect();
    let cols = sets.len() + n;
    let mut objective = vec![0.0; cols];
    objective[..sets.len()].iter_mut().for_each(|c| *c = 1.0);
    let a = Matrix::from_fn(n, cols, |v, j| {
        if j < sets.len() {
            (sets[j] >> v & 1) as f64
        } else if j - sets.len() == v {
            -1.0
        } else {
            0.0
        }
    });
    solve_min(&LinearProgram::new(objective, a, vec![1.0; n])?)
}

/// `sup{t : f_loc(t) = 0}` by bisection to `tol`, with `f_loc ≤ 1e-9` read
/// as zero. Independent cross-check of `1 / fractional_chromatic`.
pub fn loc_zero_threshold(g: &Graph, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f_loc(g, mid)? <= 1e-9 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Closed form of `f_vect` on `K_n`: `0` up to `1/n`, then `nt(nt − 1)` up
/// to `(n−1)/n`, then `(n² − n)(2t − 1)`.
pub fn f_vect_complete(n: usize, t: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("complete graph needs n ≥ 3, got {n}")));
    }
    check_t(t)?;
    let nf = n as f64;
    Ok(if t <= 1.0 / nf {
        0.0
    } else if t <= (nf - 1.0) / nf {
        nf * t * (nf * t - 1.0)
    } else {
        (nf * nf - nf) * (2.0 * t - 1.0)
    })
}

/// The optimal completion on `K_n`: `p₀₀ = 1`, border and diagonal `t`,
/// every off-diagonal vertex entry `f_vect_complete(n, t) / (n² − n)`.
pub fn complete_graph_completion(n: usize, t: f64) -> Result<SymMatrix> {
    let nf = n as f64;
    let c = f_vect_complete(n, t)? / (nf * nf - nf);
    Ok(SymMatrix::from_fn(n + 1, |i, j| match (i, j) {
        (0, 0) => 1.0,
        (0, _) | (_, 0) => t,
        _ if i == j => t,
        _ => c,
    }))
}

#[derive(Debug, Clone, Copy)]
pub struct VectOptions {
    /// Absolute bisection tolerance on `s`.
    pub bisection_tol: f64,
    pub dykstra: DykstraOptions,
}

impl Default for VectOptions {
    fn default() -> Self {
        Self { bisection_tol: 1e-8, dykstra: DykstraOptions::default() }
    }
}

/// Constraints on the Gram matrix of `h, x_1, …, x_n` at edge mass `s`.
///
/// Every vertex pair is bounded below by `max{0, 2t − 1}`: the four
/// probabilities `⟨x_{v,i}, x_{w,j}⟩` must be nonnegative, and the `(1,1)`
/// one equals `1 − 2t + p_{vw}`.
pub fn vect_constraints(g: &Graph, t: f64, s: f64) -> Result<EntryConstraints> {
    check_t(t)?;
    let n = g.n();
    let e = g.edge_count() as f64;
    let floor = (2.0 * t - 1.0).max(0.0);
    let mut c = EntryConstraints::new(n + 1);
    c.fix(0, 0, 1.0)?;
    for v in 1..=n {
        c.fix(0, v, t)?;
        c.fix(v, v, t)?;
        for w in v + 1..=n {
            if g.has_edge(v - 1, w - 1) {
                c.fix(v, w, s / e)?;
            } else {
                c.bound_below(v, w, floor)?;
            }
        }
    }
    Ok(c)
}

#[derive(Debug, Clone)]
pub struct VectResult {
    pub value: f64,
    /// Gram matrix at the returned `s`, satisfying all entry constraints.
    pub completion: SymMatrix,
    /// Oracle answers `(s, feasible)` in query order.
    pub queries: Vec<(f64, bool)>,
}

/// `f_vect` by bisection on `s` with Dykstra's method as the feasibility
/// oracle. Requires a vertex- and edge-transitive graph, where the optimum
/// has a constant edge entry.
pub fn f_vect_sdp(g: &Graph, t: f64, opts: &VectOptions) -> Result<VectResult> {
    check_t(t)?;
    if g.edge_count() == 0 {
        return Err(Error::InvalidArgument("graph has no edges".into()));
    }
    if !g.is_vertex_edge_transitive()? {
        return Err(Error::NotTransitive);
    }
    let (mut lo, mut hi) = ns_s_bounds(t, g.edge_count())?;
    let n = g.n();
    // the all-t completion is feasible at the top of the bracket
    let start = SymMatrix::from_fn(n + 1, |i, j| if i == 0 && j == 0 { 1.0 } else { t });
    let mut queries = Vec::new();
    let oracle = |s: f64, queries: &mut Vec<(f64, bool)>| -> Result<Option<SymMatrix>> {
        let c = vect_constraints(g, t, s)?;
        let f = dykstra_feasible(&c, &start, opts.dykstra)?;
        queries.push((s, f.feasible));
        Ok(f.feasible.then_some(f.witness))
    };
    if let Some(w) = oracle(lo, &mut queries)? {
        return Ok(VectResult { value: lo, completion: w, queries });
    }
    let mut best = oracle(hi, &mut queries)?.ok_or(Error::NoConvergence(opts.dykstra.max_iter))?;
    while hi - lo > opts.bisection_tol {
        let mid = 0.5 * (lo + hi);
        match oracle(mid, &mut queries)? {
            Some(w) => {
                hi = mid;
                best = w;
            }
            None => lo = mid,
        }
    }
    Ok(VectResult { value: hi, completion: best, queries })
}

/// `f_vect`, by the closed form on complete graphs and by
/// [`f_vect_sdp`] otherwise.
pub fn f_vect(g: &Graph, t: f64, opts: &VectOptions) -> Result<f64> {
    if g.is_complete() && g.n() >= 3 {
        return f_vect_complete(g.n(), t);
    }
    Ok(f_vect_sdp(g, t, opts)?.value)
}

/// `p/q` with `q ≤ max_denom` equal to `t` up to rounding, if any.
pub fn rational_approx(t: f64, max_denom: i64) -> Option<Ratio<i64>> {
    (1..=max_denom).find_map(|q| {
        let p = (t * q as f64).round();
        ((p / q as f64 - t).abs() < 1e-12).then(|| Ratio::new(p as i64, q))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Ns,
    Loc,
    Vect,
    QUpper,
}

impl CurveKind {
    pub const ALL: [CurveKind; 4] = [CurveKind::Ns, CurveKind::Loc, CurveKind::Vect, CurveKind::QUpper];

    pub fn id(self) -> &'static str {
        match self {
            CurveKind::Ns => "ns",
            CurveKind::Loc => "loc",
            CurveKind::Vect => "vect",
            CurveKind::QUpper => "q_upper",
        }
    }
}

impl std::str::FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CurveKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown curve '{s}' (expected ns, loc, vect or q_upper)")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "detail")]
pub enum CellStatus {
    Ok,
    /// Not requested, or not defined at this point (e.g. `q_upper` off the
    /// rational grid).
    Skipped,
    Failed(String),
}

impl CellStatus {
    fn label(&self) -> &'static str {
        match self {
            CellStatus::Ok => "ok",
            CellStatus::Skipped => "skipped",
            CellStatus::Failed(_) => "failed",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub value: Option<f64>,
    pub status: CellStatus,
}

impl Cell {
    fn from_result(r: Result<f64>) -> Self {
        match r {
            Ok(v) => Cell { value: Some(v), status: CellStatus::Ok },
            Err(e) => Cell { value: None, status: CellStatus::Failed(e.to_string()) },
        }
    }

    fn skipped() -> Self {
        Cell { value: None, status: CellStatus::Skipped }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveTable {
    pub graph: String,
    pub edges: usize,
    pub t: Vec<f64>,
    /// One row per gridpoint, cells in [`CurveKind::ALL`] order.
    pub rows: Vec<[Cell; 4]>,
}

impl CurveTable {
    pub fn column(&self, kind: CurveKind) -> Vec<Option<f64>> {
        let k = kind as usize;
        self.rows.iter().map(|r| r[k].value).collect()
    }

    /// Points violating `0 ≤ f_ns ≤ f_vect ≤ f_q_upper ≤ f_loc ≤ t|E|` by
    /// more than `tol`, as `(t, description)`.
    pub fn ordering_violations(&self, tol: f64) -> Vec<(f64, String)> {
        let mut out = Vec::new();
        for (&t, row) in self.t.iter().zip(&self.rows) {
            let cap = t * self.edges as f64;
            let present: Vec<(CurveKind, f64)> =
                [CurveKind::Ns, CurveKind::Vect, CurveKind::QUpper, CurveKind::Loc]
                    .into_iter()
                    .filter_map(|k| row[k as usize].value.map(|v| (k, v)))
                    .collect();
            for &(k, v) in &present {
                if v < -tol || v > cap + tol {
                    out.push((t, format!("f_{} = {v} outside [0, {cap}]", k.id())));
                }
            }
            for pair in present.windows(2) {
                let ((ka, a), (kb, b)) = (pair[0], pair[1]);
                if a > b + tol {
                    out.push((t, format!("f_{} = {a} exceeds f_{} = {b}", ka.id(), kb.id())));
                }
            }
        }
        out
    }

    /// `t,f_ns,f_loc,f_vect,f_q_upper,status_ns,…` with one row per
    /// gridpoint in grid order.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,f_ns,f_loc,f_vect,f_q_upper,status_ns,status_loc,status_vect,status_q_upper\n");
        for (t, row) in self.t.iter().zip(&self.rows) {
            let _ = write!(s, "{t}");
            for cell in row {
                match cell.value {
                    Some(v) => {
                        let _ = write!(s, ",{v}");
                    }
                    None => s.push(','),
                }
            }
            for cell in row {
                let _ = write!(s, ",{}", cell.status.label());
            }
            s.push('\n');
        }
        s
    }
}

/// Index of `1 − t` for each gridpoint, or an error if the grid is not
/// symmetric about `1/2`.
fn mirror_indices(grid: &[f64]) -> Result<Vec<usize>> {
    grid.iter()
        .map(|&t| {
            grid.iter()
                .position(|&u| (u - (1.0 - t)).abs() < 1e-9)
                .ok_or_else(|| Error::InvalidArgument(format!("grid is not symmetric about 1/2: {} missing", 1.0 - t)))
        })
        .collect()
}

/// `max_t |f(1 − t) − |E|(1 − 2t) − f(t)|` over gridpoints where both
/// values are present.
pub fn symmetry_check(table: &CurveTable, kind: CurveKind) -> Result<f64> {
    let mirror = mirror_indices(&table.t)?;
    let col = table.column(kind);
    let e = table.edges as f64;
    Ok(table
        .t
        .iter()
        .enumerate()
        .filter_map(|(i, &t)| {
            let (a, b) = (col[i]?, col[mirror[i]]?);
            Some((b - e * (1.0 - 2.0 * t) - a).abs())
        })
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvexityReport {
    pub convex: bool,
    /// Largest `f(t_i) − interpolation(t_{i−1}, t_{i+1})`; negative when
    /// strictly convex everywhere.
    pub worst_violation: f64,
    pub worst_t: Option<f64>,
}

/// Three-point convexity at every interior gridpoint of a sorted grid,
/// using the chord between the neighbouring points.
pub fn convexity_check(table: &CurveTable, kind: CurveKind, tol: f64) -> ConvexityReport {
    let col = table.column(kind);
    let mut worst = f64::NEG_INFINITY;
    let mut worst_t = None;
    for i in 1..table.t.len().saturating_sub(1) {
        let (Some(a), Some(b), Some(c)) = (col[i - 1], col[i], col[i + 1]) else { continue };
        let (ta, tb, tc) = (table.t[i - 1], table.t[i], table.t[i + 1]);
        let w = (tb - ta) / (tc - ta);
        let chord = (1.0 - w) * a + w * c;
        if b - chord > worst {
            worst = b - chord;
            worst_t = Some(tb);
        }
    }
    ConvexityReport { convex: worst <= tol, worst_violation: worst, worst_t }
}

#[derive(Debug, Clone, Default)]
pub struct SampleOptions {
    pub vect: VectOptions,
    pub search: SearchOptions,
}

fn cell(g: &Graph, t: f64, kind: CurveKind, opts: &SampleOptions) -> Cell {
    match kind {
        CurveKind::Ns => Cell::from_result(f_ns(g, t)),
        CurveKind::Loc => Cell::from_result(f_loc(g, t)),
        CurveKind::Vect => Cell::from_result(f_vect(g, t, &opts.vect)),
        CurveKind::QUpper => {
            // only K_5 has the five-projection construction
            if !(g.is_complete() && g.n() == 5) {
                return Cell::skipped();
            }
            let (lo, hi) = crate::correlations::qa_interval();
            match rational_approx(t, crate::operators::MAX_FQ_DENOMINATOR) {
                Some(r) if (lo..=hi).contains(&t) => Cell::from_result(fq_upper(r, &opts.search).map(|u| u.value)),
                _ => Cell::skipped(),
            }
        }
    }
}

/// Evaluates the requested curves at every gridpoint. Failures are recorded
/// per cell; gridpoints run in parallel with results kept in grid order.
pub fn sample_curves(g: &Graph, grid: &[f64], which: &[CurveKind], opts: &SampleOptions) -> Result<CurveTable> {
    for &t in grid {
        check_t(t)?;
    }
    let row = |&t: &f64| -> [Cell; 4] {
        CurveKind::ALL.map(|k| if which.contains(&k) { cell(g, t, k, opts) } else { Cell::skipped() })
    };
    #[cfg(feature = "parallel")]
    let rows = grid.par_iter().map(row).collect();
    #[cfg(not(feature = "parallel"))]
    let rows = grid.iter().map(row).collect();
    Ok(CurveTable { graph: g.name().to_string(), edges: g.edge_count(), t: grid.to_vec(), rows })
}

/// Parses `start:step:stop` (inclusive) or a comma-separated list. Values
/// are rounded to 12 decimals so that `0:0.05:1` hits `0.15` exactly.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{s}' in grid")));
    let grid: Vec<f64> = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [a, h, b] = parts.as_slice() else {
            return Err(Error::Parse(format!("grid '{spec}' must be start:step:stop")));
        };
        let (a, h, b) = (num(a)?, num(h)?, num(b)?);
        if !(h > 0.0) || b < a {
            return Err(Error::Parse(format!("grid '{spec}' needs a positive step and start ≤ stop")));
        }
        let count = ((b - a) / h + 1e-9).floor() as usize;
        (0..=count).map(|i| ((a + i as f64 * h) * 1e12).round() / 1e12).collect()
    } else {
        spec.split(',').map(num).collect::<Result<_>>()?
    };
    if grid.is_empty() {
        return Err(Error::Parse("empty grid".into()));
    }
    for &t in &grid {
        check_t(t)?;
    }
    Ok(grid)
}

/// Exact fraction for display, if `t` is a small-denominator rational.
pub fn exact_label(t: f64) -> Option<String> {
    rational_approx(t, 1000).map(|r| r.to_string())
}
