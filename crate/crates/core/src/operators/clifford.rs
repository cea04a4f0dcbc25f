//! Clifford families: `P_v = (I + C(x̃_v)) / 2` where `C` is a linear map into
//! self-adjoint matrices with `C(x)C(y) + C(y)C(x) = 2⟨x, y⟩ I`.
//!
//! Generators are built by the Jordan–Wigner construction on `⌈m/2⌉` qubits,
//! so they are complex. Families are stored over the reals through the
//! realification `A + iB ↦ [[A, -B], [B, A]]`, which preserves products,
//! adjoints and normalized traces.

use num_complex::Complex64;

use super::ProjectionFamily;
use crate::numerics::{dot, gram_factor, Matrix, SymMatrix};
use crate::{Error, Result};

/// Largest number of generators supported (matrix size `2^6 = 64`).
pub const MAX_GENERATORS: usize = 12;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    fn from_2x2(a: [[Complex64; 2]; 2]) -> Self {
        Self { n: 2, data: vec![a[0][0], a[0][1], a[1][0], a[1][1]] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let n = self.n * other.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self.get(i, j);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..other.n {
                    for l in 0..other.n {
                        out.data[(i * other.n + k) * n + j * other.n + l] = a * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        Self { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.get(i, j).conj();
            }
        }
        out
    }

    pub fn frobenius_distance(&self, other: &CMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// `[[Re, -Im], [Im, Re]]`.
    pub fn realify(&self) -> Matrix {
        let n = self.n;
        Matrix::from_fn(2 * n, 2 * n, |i, j| {
            let z = self.get(i % n, j % n);
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        })
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `m` pairwise anticommuting self-adjoint unitaries of size `2^⌈m/2⌉`, each
/// with trace zero.
pub fn clifford_generators(m: usize) -> Result<Vec<CMatrix>> {
    if m == 0 || m > MAX_GENERATORS {
        return Err(Error::InvalidArgument(format!("generator count must be in 1..={MAX_GENERATORS}, got {m}")));
    }
    let qubits = m.div_ceil(2);
    let x = CMatrix::from_2x2([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
    let y = CMatrix::from_2x2([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]);
    let z = CMatrix::from_2x2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]);
    let id = CMatrix::identity(2);
    let string = |k: usize, middle: &CMatrix| {
        let mut out = CMatrix::identity(1);
        for q in 0..qubits {
            let factor = match q.cmp(&k) {
                std::cmp::Ordering::Less => &z,
                std::cmp::Ordering::Equal => middle,
                std::cmp::Ordering::Greater => &id,
            };
            out = out.kron(factor);
        }
        out
    };
    Ok((0..m).map(|g| string(g / 2, if g % 2 == 0 { &x } else { &y })).collect())
}

/// `C(x) = Σ_i x_i γ_i`.
pub fn clifford_image(gens: &[CMatrix], x: &[f64]) -> CMatrix {
    let mut out = CMatrix::zeros(gens[0].dim());
    for (g, &xi) in gens.iter().zip(x) {
        if xi != 0.0 {
            out = out.add(&g.scale(xi));
        }
    }
    out
}

/// Complex projections `(I + C(x̃_v)) / 2` for unit vectors `x̃_v`.
pub fn clifford_projections(unit_vectors: &[Vec<f64>]) -> Result<Vec<CMatrix>> {
    let m = unit_vectors.first().map_or(0, Vec::len);
    if unit_vectors.iter().any(|x| x.len() != m) {
        return Err(Error::InvalidArgument("vectors must share a dimension".into()));
    }
    for x in unit_vectors {
        let norm = dot(x, x).sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("vector has norm {norm}, expected 1")));
        }
    }
    let gens = clifford_generators(m)?;
    let id = CMatrix::identity(gens[0].dim());
    Ok(unit_vectors.iter().map(|x| id.add(&clifford_image(&gens, x)).scale(0.5)).collect())
}

/// Real family of the Clifford projections; `τ(E_v E_w) = (1 + ⟨x̃_v, x̃_w⟩) / 4`.
pub fn clifford_family(unit_vectors: &[Vec<f64>]) -> Result<ProjectionFamily> {
    let ps = clifford_projections(unit_vectors)?;
    ProjectionFamily::single(ps.iter().map(CMatrix::realify).collect())
}

#[derive(Debug, Clone)]
pub struct CliffordOutcome {
    pub family: ProjectionFamily,
    /// The unit vectors `x̃_v = 2x_v - h` in a basis of their span.
    pub unit_vectors: Vec<Vec<f64>>,
}

/// Clifford family for a vector completion at marginal `1/2`: `p` is the
/// `(n+1) × (n+1)` Gram matrix of `h, x_1, …, x_n` with `p(0,0) = 1` and
/// `p(0,v) = p(v,v) = 1/2`. Realizes the vectorial correlation of `p` with
/// finite-dimensional projections.
pub fn clifford_from_completion(p: &SymMatrix, tol: f64) -> Result<CliffordOutcome> {
    let n = p.dim() - 1;
    for v in 1..=n {
        if (p.get(0, v) - 0.5).abs() > tol || (p.get(v, v) - 0.5).abs() > tol {
            return Err(Error::InvalidArgument("completion must have marginals 1/2".into()));
        }
    }
    if (p.get(0, 0) - 1.0).abs() > tol {
        return Err(Error::InvalidArgument("completion must have p(0,0) = 1".into()));
    }
    // Gram of x̃_v = 2x_v - h: 4 p(v,w) - 2 p(0,v) - 2 p(0,w) + 1.
    let tilde = SymMatrix::from_fn(n, |v, w| {
        4.0 * p.get(v + 1, w + 1) - 2.0 * p.get(0, v + 1) - 2.0 * p.get(0, w + 1) + 1.0
    });
    let mut unit_vectors = gram_factor(&tilde, 1e-10)?;
    for x in &mut unit_vectors {
        let norm = dot(x, x).sqrt();
        x.iter_mut().for_each(|c| *c /= norm);
    }
    let family = clifford_family(&unit_vectors)?;
    Ok(CliffordOutcome { family, unit_vectors })
}
