//! Graph correlation functions over synchronous two-output correlation sets.
//!
//! For a graph `G = (V, E)` and a marginal `t ∈ [0, 1]`, the correlation
//! function `f_r(t)` is the least total edge mass `Σ_{(v,w)∈E} p(0,0|v,w)`
//! over synchronous correlations of class `r` whose marginals all equal `t`.
//! This crate computes:
//!
//! * `f_ns` in closed form and `f_loc` by linear programming over atoms,
//! * the fractional chromatic number from the independent-set LP,
//! * `f_vect` from a PSD completion problem (bisection + Dykstra), with the
//!   closed form for complete graphs,
//! * finite-dimensional projection families that certify upper bounds on
//!   `f_q`: Clifford families at `t = 1/2` and cyclically symmetrized
//!   five-projection families summing to `λI` for `K_5`,
//! * the signed game whose synchronous quantum value is not attained.
//!
//! Edges are ordered pairs throughout, so `|E|` is twice the number of
//! undirected edges.

pub mod correlations;
pub mod curves;
pub mod error;
pub mod games;
pub mod graphs;
pub mod numerics;
pub mod operators;

pub use error::{Error, Result};

/// Default tolerance for validator identities and eigenvalue signs.
pub const DEFAULT_TOL: f64 = 1e-9;
