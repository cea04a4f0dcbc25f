//! Dense linear algebra and convex feasibility kernels.

mod dykstra;
mod eigen;
mod matrix;
mod simplex;

pub use dykstra::{dykstra_feasible, DykstraOptions, EntryConstraints, Feasibility};
pub use eigen::{
    cholesky_reduce, dot, eigen, gram_factor, is_psd, jacobi_eigen, min_eigenvalue, project_psd, Eigen, EIGEN_TOL,
};
pub use matrix::{Matrix, SymMatrix};
pub use simplex::{simplex_solve, LinearProgram, LpSolution, LpStatus};
