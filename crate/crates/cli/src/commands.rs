use std::fmt;
use std::io::Write;
use std::path::Path;

use corrgraph::correlations::SyncCorrelation;
use corrgraph::curves::{sample_curves, parse_grid, CellStatus, CurveKind, SampleOptions, VectOptions};
use corrgraph::games::{attainment_check, parse_ratio, GameParameter};
use corrgraph::graphs::Graph;
use corrgraph::operators::{self, nonclosure_certificate, SearchOptions, WitnessFile, WitnessTolerances};
use corrgraph::Error;
use num_rational::Ratio;
use serde::Serialize;

use crate::{svg, SearchArgs, SEED_ENV};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Solver(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence(_) | Error::SearchFailed(_) | Error::NotProjection(_) | Error::Invalid { .. } => {
                CliError::Solver(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult = Result<u8, CliError>;

fn parse_graph(spec: &str) -> Result<Graph, CliError> {
    spec.parse::<Graph>().map_err(CliError::from)
}

/// `--seed`, unless `CORRGRAPH_SEED` is set.
pub fn effective_seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV}={v} is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn search_options(args: &SearchArgs) -> Result<SearchOptions, CliError> {
    if args.restarts == 0 {
        return Err(CliError::Usage("--restarts must be positive".into()));
    }
    Ok(SearchOptions { seed: effective_seed(args.seed)?, restarts: args.restarts, ..SearchOptions::default() })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn emit_json(value: &impl Serialize, out: Option<&Path>) -> Result<(), CliError> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"), out)
}

pub fn curve_selection(fns: bool, floc: bool, fvect: bool, fq_upper: bool, all: bool) -> Vec<CurveKind> {
    if all {
        return CurveKind::ALL.to_vec();
    }
    let picked: Vec<CurveKind> = [(fns, CurveKind::Ns), (floc, CurveKind::Loc), (fvect, CurveKind::Vect), (fq_upper, CurveKind::QUpper)]
        .into_iter()
        .filter_map(|(on, k)| on.then_some(k))
        .collect();
    if picked.is_empty() {
        vec![CurveKind::Ns, CurveKind::Loc, CurveKind::Vect]
    } else {
        picked
    }
}

pub fn curves(
    graph: &str,
    grid: &str,
    which: &[CurveKind],
    out: Option<&Path>,
    svg_out: Option<&Path>,
    tol: f64,
    search: &SearchArgs,
) -> CliResult {
    if !(tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let g = parse_graph(graph)?;
    let grid = parse_grid(grid)?;
    let opts = SampleOptions {
        vect: VectOptions { bisection_tol: tol, ..VectOptions::default() },
        search: search_options(search)?,
    };
    let table = sample_curves(&g, &grid, which, &opts)?;
    emit(&table.to_csv(), out)?;
    if let Some(path) = svg_out {
        std::fs::write(path, svg::render(&table))?;
    }
    let failures: Vec<String> = table
        .t
        .iter()
        .zip(&table.rows)
        .flat_map(|(t, row)| {
            row.iter().zip(CurveKind::ALL).filter_map(move |(cell, k)| match &cell.status {
                CellStatus::Failed(msg) => Some(format!("f_{} at t = {t}: {msg}", k.id())),
                _ => None,
            })
        })
        .collect();
    if failures.is_empty() {
        Ok(0)
    } else {
        Err(CliError::Solver(format!("{} cell(s) failed; CSV written with statuses\n  {}", failures.len(), failures.join("\n  "))))
    }
}

pub fn certify_nonclosure(ts: &str, out: Option<&Path>, witness_dir: Option<&Path>, search: &SearchArgs) -> CliResult {
    let ts: Vec<Ratio<i64>> =
        ts.split(',').filter(|s| !s.trim().is_empty()).map(parse_ratio).collect::<Result<_, _>>()?;
    if ts.is_empty() {
        return Err(CliError::Usage("empty t-list".into()));
    }
    let (mut cert, witnesses) = nonclosure_certificate(&ts, &search_options(search)?)?;
    if let Some(dir) = witness_dir {
        std::fs::create_dir_all(dir)?;
        for (t, w) in &witnesses {
            let name = format!("witness_t{}-{}.json", t.numer(), t.denom());
            w.save(dir.join(&name))?;
            if let Some(e) = cert.entries.iter_mut().find(|e| e.t == t.to_string()) {
                e.witness_file = Some(name);
            }
        }
    }
    emit_json(&cert, out)?;
    if cert.complete {
        Ok(0)
    } else {
        Err(CliError::Solver("certificate incomplete: a search failed or a gap exceeded tolerance".into()))
    }
}

pub fn verify_witness(path: &Path) -> CliResult {
    let w = WitnessFile::load(path)?;
    let check = operators::verify_witness(&w, &WitnessTolerances::default())?;
    #[derive(Serialize)]
    struct Report<'a> {
        path: String,
        pass: bool,
        #[serde(flatten)]
        check: &'a corrgraph::operators::WitnessCheck,
    }
    emit_json(&Report { path: path.display().to_string(), pass: check.all_pass(), check: &check }, None)?;
    Ok(if check.all_pass() { 0 } else { 1 })
}

pub fn game(n: usize, t: &str) -> CliResult {
    let report = attainment_check(n, t.parse::<GameParameter>()?)?;
    emit_json(&report, None)?;
    Ok(0)
}

pub fn check(path: &Path, graph: Option<&str>, tol: f64) -> CliResult {
    if !(tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let (p, report) = SyncCorrelation::load(path, tol)?;
    let objective = match graph {
        Some(spec) => Some(p.edge_objective(&parse_graph(spec)?)?),
        None => None,
    };
    #[derive(Serialize)]
    struct Report {
        n: usize,
        pass: bool,
        #[serde(flatten)]
        flags: corrgraph::correlations::ValidationReport,
        #[serde(skip_serializing_if = "Option::is_none")]
        edge_objective: Option<f64>,
        tol: f64,
    }
    emit_json(&Report { n: p.n(), pass: report.all_pass(), flags: report, edge_objective: objective, tol }, None)?;
    Ok(if report.all_pass() { 0 } else { 1 })
}

pub fn graph_info(spec: &str) -> CliResult {
    let g = parse_graph(spec)?;
    #[derive(Serialize)]
    struct Info {
        name: String,
        n: usize,
        ordered_edges: usize,
        degrees: Vec<usize>,
        automorphism_group_order: Option<usize>,
        vertex_transitive: bool,
        edge_transitive: bool,
        arc_transitive: bool,
        fractional_chromatic: Option<f64>,
    }
    let info = Info {
        name: g.name().to_string(),
        n: g.n(),
        ordered_edges: g.edge_count(),
        degrees: (0..g.n()).map(|v| g.degree(v)).collect(),
        automorphism_group_order: g.automorphisms().ok().map(|a| a.len()),
        vertex_transitive: g.is_vertex_transitive()?,
        edge_transitive: g.is_edge_transitive()?,
        arc_transitive: g.is_arc_transitive()?,
        fractional_chromatic: corrgraph::curves::fractional_chromatic(&g).ok(),
    };
    emit_json(&info, None)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_defaults() {
        assert_eq!(curve_selection(false, false, false, false, false).len(), 3);
        assert_eq!(curve_selection(false, false, false, false, true).len(), 4);
        assert_eq!(curve_selection(true, false, true, false, false), vec![CurveKind::Ns, CurveKind::Vect]);
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::SearchFailed("x".into())).exit_code(), 3);
        assert_eq!(CliError::from(Error::Parse("x".into())).exit_code(), 2);
    }
}
