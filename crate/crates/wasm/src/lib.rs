//! Browser bindings: sample curves, run the signed-game analysis and build
//! a non-closure certificate entry for one `t`. Everything returns JSON.

use corrgraph::curves::{parse_grid, sample_curves, CurveKind, SampleOptions};
use corrgraph::games::{attainment_check, parse_ratio, GameParameter};
use corrgraph::graphs::Graph;
use corrgraph::operators::{nonclosure_certificate, SearchOptions};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Series {
    id: &'static str,
    values: Vec<Option<f64>>,
    status: Vec<String>,
}

#[derive(Serialize)]
struct CurvesJson {
    graph: String,
    edges: usize,
    t: Vec<f64>,
    series: Vec<Series>,
    csv: String,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `which` is a comma list of `ns`, `loc`, `vect`, `q_upper`.
pub fn curves_json(graph: &str, grid: &str, which: &str) -> Result<String, String> {
    let g: Graph = graph.parse().map_err(err)?;
    let grid = parse_grid(grid).map_err(err)?;
    let which: Vec<CurveKind> =
        which.split(',').filter(|s| !s.trim().is_empty()).map(|s| s.trim().parse()).collect::<Result<_, _>>().map_err(err)?;
    if which.is_empty() {
        return Err("select at least one curve".into());
    }
    let table = sample_curves(&g, &grid, &which, &SampleOptions::default()).map_err(err)?;
    let series = which
        .iter()
        .map(|&k| Series {
            id: k.id(),
            values: table.column(k),
            status: table.rows.iter().map(|r| format!("{:?}", r[k as usize].status)).collect(),
        })
        .collect();
    let out = CurvesJson { graph: table.graph.clone(), edges: table.edges, t: table.t.clone(), series, csv: table.to_csv() };
    serde_json::to_string(&out).map_err(err)
}

pub fn game_json(t: &str) -> Result<String, String> {
    let report = attainment_check(5, t.parse::<GameParameter>().map_err(err)?).map_err(err)?;
    serde_json::to_string(&report).map_err(err)
}

/// Certificate for a comma list of rational `t`, without witness matrices.
pub fn certify_json(ts: &str, seed: u64) -> Result<String, String> {
    let ts = ts.split(',').filter(|s| !s.trim().is_empty()).map(parse_ratio).collect::<Result<Vec<_>, _>>().map_err(err)?;
    if ts.is_empty() {
        return Err("empty t-list".into());
    }
    let opts = SearchOptions { seed, ..SearchOptions::default() };
    let (cert, _) = nonclosure_certificate(&ts, &opts).map_err(err)?;
    serde_json::to_string(&cert).map_err(err)
}

#[wasm_bindgen]
pub fn curves(graph: &str, grid: &str, which: &str) -> Result<String, JsError> {
    curves_json(graph, grid, which).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn game(t: &str) -> Result<String, JsError> {
    game_json(t).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn certify(ts: &str, seed: u64) -> Result<String, JsError> {
    certify_json(ts, seed).map_err(|e| JsError::new(&e))
}
