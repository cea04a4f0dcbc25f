//! The `K_5` non-closure certificate: at rational `t` in the achievable
//! range, explicit finite-dimensional families reach the vectorial lower
//! bound `5t(5t − 1)`, and that function is strictly convex there. Attained
//! values of `f_q` would have to be piecewise linear on such an interval, so
//! the two facts together exhibit a value that finite-dimensional
//! correlations approach but cannot reach at irrational `t`.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{fq_upper, FqMethod, SearchOptions, WitnessFile};
use crate::correlations::qa_interval;
use crate::curves::f_vect_complete;
use crate::graphs::Graph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CertificateTolerances {
    /// Largest accepted `|f_q_upper − f_vect|`.
    pub gap: f64,
    /// Sum residual at which a search restart counts as converged.
    pub search: f64,
    /// Second differences must exceed this to count as strictly convex.
    pub convexity: f64,
}

impl Default for CertificateTolerances {
    fn default() -> Self {
        Self { gap: 1e-5, search: SearchOptions::default().tol, convexity: 1e-4 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateEntry {
    pub t: String,
    pub t_value: f64,
    pub f_vect: f64,
    pub f_q_upper: Option<f64>,
    pub gap: Option<f64>,
    pub method: Option<FqMethod>,
    pub seed: Option<u64>,
    pub dim: Option<usize>,
    pub sum_residual: Option<f64>,
    pub max_commutation_residual: Option<f64>,
    /// Filled in by callers that write witness files.
    pub witness_file: Option<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SecondDifference {
    pub t: [String; 3],
    pub value: f64,
    /// `50h²`, the second difference of `25t² − 5t` at spacing `h`.
    pub expected: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NonclosureCertificate {
    pub graph: String,
    pub entries: Vec<CertificateEntry>,
    pub max_gap: Option<f64>,
    pub second_differences: Vec<SecondDifference>,
    pub strictly_convex: bool,
    /// Every search succeeded and every gap is within tolerance.
    pub complete: bool,
    pub seed: u64,
    pub restarts: usize,
    pub tolerances: CertificateTolerances,
}

/// Builds the certificate, returning each successful witness alongside.
/// Search failures are recorded in their entry and make the certificate
/// incomplete; invalid `t` values are errors.
pub fn nonclosure_certificate(
    ts: &[Ratio<i64>],
    opts: &SearchOptions,
) -> Result<(NonclosureCertificate, Vec<(Ratio<i64>, WitnessFile)>)> {
    if ts.is_empty() {
        return Err(Error::InvalidArgument("certificate needs at least one t".into()));
    }
    let (lo, hi) = qa_interval();
    let mut sorted = ts.to_vec();
    sorted.sort();
    sorted.dedup();
    for t in &sorted {
        let tf = t.to_f64().expect("small rational");
        if tf < lo || tf > hi {
            return Err(Error::OutOfRange { value: tf, lo, hi });
        }
    }
    let tol = CertificateTolerances::default();
    let k5 = Graph::complete(5)?;
    let mut entries = Vec::with_capacity(sorted.len());
    let mut witnesses = Vec::new();
    for &t in &sorted {
        let tf = t.to_f64().expect("small rational");
        let f_vect = f_vect_complete(5, tf)?;
        let mut entry = CertificateEntry {
            t: t.to_string(),
            t_value: tf,
            f_vect,
            f_q_upper: None,
            gap: None,
            method: None,
            seed: None,
            dim: None,
            sum_residual: None,
            max_commutation_residual: None,
            witness_file: None,
            error: None,
        };
        match fq_upper(t, opts) {
            Ok(up) => {
                let comm = up.witness.commutation_residual(&k5)?.into_iter().fold(0.0, f64::max);
                entry.f_q_upper = Some(up.value);
                entry.gap = Some((up.value - f_vect).abs());
                entry.method = Some(up.method);
                entry.seed = Some(up.seed);
                entry.dim = Some(up.witness.dim());
                entry.sum_residual = Some(up.sum_residual);
                entry.max_commutation_residual = Some(comm);
                witnesses.push((t, WitnessFile::from_family(&up.witness, up.lambda, tf, Some(t.to_string()), Some(up.seed))?));
            }
            Err(e) => entry.error = Some(e.to_string()),
        }
        entries.push(entry);
    }

    let mut second_differences = Vec::new();
    for (i, a) in entries.iter().enumerate() {
        for (j, b) in entries.iter().enumerate().skip(i + 1) {
            let h = sorted[j] - sorted[i];
            let Some(k) = sorted.iter().position(|&u| u == sorted[j] + h) else { continue };
            let c = &entries[k];
            if let (Some(fa), Some(fb), Some(fc)) = (a.f_q_upper, b.f_q_upper, c.f_q_upper) {
                let hf = h.to_f64().expect("small rational");
                second_differences.push(SecondDifference {
                    t: [a.t.clone(), b.t.clone(), c.t.clone()],
                    value: fa - 2.0 * fb + fc,
                    expected: 50.0 * hf * hf,
                });
            }
        }
    }
    let max_gap = entries.iter().filter_map(|e| e.gap).reduce(f64::max);
    let complete = entries.iter().all(|e| e.gap.is_some_and(|g| g <= tol.gap));
    let strictly_convex =
        !second_differences.is_empty() && second_differences.iter().all(|d| d.value > tol.convexity);
    Ok((
        NonclosureCertificate {
            graph: k5.name().to_string(),
            entries,
            max_gap,
            second_differences,
            strictly_convex,
            complete,
            seed: opts.seed,
            restarts: opts.restarts,
            tolerances: tol,
        },
        witnesses,
    ))
}
