//! JSON witness files for projection families summing to `λI`, and their
//! independent re-verification.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ProjectionFamily;
use crate::graphs::Graph;
use crate::numerics::Matrix;
use crate::{Error, Result};

/// Rounds to 12 significant digits so files are stable across platforms.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessTolerances {
    pub projection: f64,
    pub sum: f64,
    pub trace: f64,
    pub objective: f64,
}

impl Default for WitnessTolerances {
    fn default() -> Self {
        Self { projection: 1e-9, sum: 1e-6, trace: 1e-6, objective: 1e-5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessResiduals {
    pub projection: f64,
    pub sum: f64,
    /// Largest commutation residual on the complete graph.
    pub commutation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub dim: usize,
    pub lambda: f64,
    /// Declared normalized trace of every projection.
    pub t: f64,
    /// `t` as an exact fraction such as `"3/10"`, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_exact: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Row-major `dim × dim` matrices.
    pub projections: Vec<Vec<f64>>,
    pub residuals: WitnessResiduals,
    pub tolerances: WitnessTolerances,
}

impl WitnessFile {
    /// Serializes a single-block family, rounding entries and recording
    /// residuals of the rounded matrices.
    pub fn from_family(fam: &ProjectionFamily, lambda: f64, t: f64, t_exact: Option<String>, seed: Option<u64>) -> Result<Self> {
        let ps = fam
            .projections()
            .ok_or_else(|| Error::InvalidArgument("witness files hold single-block families".into()))?;
        let dim = ps[0].rows();
        let projections: Vec<Vec<f64>> = ps.iter().map(|p| p.data().iter().map(|&x| round_sig(x)).collect()).collect();
        let mut out = Self {
            dim,
            lambda,
            t,
            t_exact,
            seed,
            projections,
            residuals: WitnessResiduals { projection: 0.0, sum: 0.0, commutation: 0.0 },
            tolerances: WitnessTolerances::default(),
        };
        let rounded = out.family()?;
        let k = Graph::complete(rounded.len())?;
        out.residuals = WitnessResiduals {
            projection: rounded.max_projection_residual(),
            sum: rounded.sum_residual(lambda),
            commutation: rounded.commutation_residual(&k)?.into_iter().fold(0.0, f64::max),
        };
        Ok(out)
    }

    pub fn family(&self) -> Result<ProjectionFamily> {
        let ms = self
            .projections
            .iter()
            .map(|data| Matrix::from_row_major(self.dim, self.dim, data.clone()))
            .collect::<Result<Vec<_>>>()?;
        ProjectionFamily::single(ms)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessCheck {
    pub projection_residual: f64,
    pub sum_residual: f64,
    pub max_trace_error: f64,
    /// `Σ_{v≠w} τ(E_v E_w)`.
    pub objective: f64,
    /// `λ(λ − 1)`, the objective forced by `Σ E_v = λI`.
    pub expected_objective: f64,
    pub projection_ok: bool,
    pub sum_ok: bool,
    pub trace_ok: bool,
    pub objective_ok: bool,
    pub tolerances: WitnessTolerances,
}

impl WitnessCheck {
    pub fn all_pass(&self) -> bool {
        self.projection_ok && self.sum_ok && self.trace_ok && self.objective_ok
    }
}

/// Recomputes every residual from the stored matrices; stored residuals and
/// tolerances are not trusted.
pub fn verify_witness(w: &WitnessFile, tol: &WitnessTolerances) -> Result<WitnessCheck> {
    if w.projections.is_empty() || w.projections.iter().any(|p| p.len() != w.dim * w.dim) {
        return Err(Error::Parse(format!("witness must hold non-empty {0}×{0} matrices", w.dim)));
    }
    let fam = w.family()?;
    let k = Graph::complete(fam.len())?;
    let projection_residual = fam.max_projection_residual();
    let sum_residual = fam.sum_residual(w.lambda);
    let max_trace_error = (0..fam.len()).map(|v| (fam.trace(v) - w.t).abs()).fold(0.0, f64::max);
    let objective = fam.objective(&k)?;
    let expected_objective = w.lambda * (w.lambda - 1.0);
    Ok(WitnessCheck {
        projection_residual,
        sum_residual,
        max_trace_error,
        objective,
        expected_objective,
        projection_ok: projection_residual <= tol.projection,
        sum_ok: sum_residual <= tol.sum,
        trace_ok: max_trace_error <= tol.trace,
        objective_ok: (objective - expected_objective).abs() <= tol.objective,
        tolerances: *tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{cyclic_symmetrize, tests::pentagon};

    fn pentagon_witness() -> WitnessFile {
        let fam = cyclic_symmetrize(&pentagon(), 1e-9).unwrap();
        WitnessFile::from_family(&fam, 2.5, 0.5, Some("1/2".into()), Some(7)).unwrap()
    }

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.1234567890123456), 0.123456789012);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(-2.5e-20), -2.5e-20);
    }

    #[test]
    fn pentagon_round_trip_verifies() {
        let w = pentagon_witness();
        let back = WitnessFile::from_json(&w.to_json().unwrap()).unwrap();
        assert_eq!(back, w);
        let check = verify_witness(&back, &WitnessTolerances::default()).unwrap();
        assert!(check.all_pass(), "{check:?}");
        assert!((check.objective - 3.75).abs() < 1e-9);
    }

    #[test]
    fn perturbation_breaks_projection_check() {
        let mut w = pentagon_witness();
        w.projections[0][1] += 1e-3;
        let check = verify_witness(&w, &WitnessTolerances::default()).unwrap();
        assert!(!check.projection_ok);
    }

    #[test]
    fn wrong_trace_is_caught() {
        let mut w = pentagon_witness();
        w.t = 0.4;
        let check = verify_witness(&w, &WitnessTolerances::default()).unwrap();
        assert!(!check.trace_ok);
        assert!(check.projection_ok && check.sum_ok);
    }

    #[test]
    fn malformed_shapes_rejected() {
        let mut w = pentagon_witness();
        w.projections[2].pop();
        assert!(verify_witness(&w, &WitnessTolerances::default()).is_err());
    }
}
