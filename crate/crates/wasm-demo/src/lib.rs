//! Browser bindings for the pcsp-lab demo page. Every export takes plain
//! values and returns a JSON string; failures come back as `{"error": ...}`.

use pcsp_lab::analyzer::classify;
use pcsp_lab::coloring::{
    generalized_color, partition_baseline, planted_three_colorable, validate_coloring, wigderson_color, GeneralizedConfig, PlantedOracle,
};
use pcsp_lab::consistency::leq_k;
use pcsp_lab::format::parse_structure;
use pcsp_lab::hom::hom_search_with_budget;
use pcsp_lab::sherali_adams::{SaLimits, SaLp};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Keeps a single click from freezing the tab.
const DEMO_NODE_BUDGET: u64 = 2_000_000;
const DEMO_LP_VARS: usize = 20_000;
const MAX_COLOR_N: usize = 400;

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn parse(text: &str, what: &str) -> Result<pcsp_lab::Structure, String> {
    parse_structure(text).map_err(|e| format!("{}: {}", what, e))
}

pub fn analyze_value(left: &str, right: &str) -> Result<Value, String> {
    let (s, t) = (parse(left, "left")?, parse(right, "right")?);
    let rep = classify(&s, &t).map_err(|e| e.to_string())?;
    serde_json::to_value(&rep).map_err(|e| e.to_string())
}

pub fn decide_value(instance: &str, template: &str, k: usize) -> Result<Value, String> {
    let (i, s) = (parse(instance, "instance")?, parse(template, "template")?);
    if k == 0 || k > 4 {
        return Err("k must be between 1 and 4".into());
    }
    let show = |r: pcsp_lab::Result<bool>| match r {
        Ok(b) => json!(b),
        Err(pcsp_lab::Error::Budget(_)) => json!("budget"),
        Err(e) => json!(e.to_string()),
    };
    let hom = hom_search_with_budget(&i, &s, DEMO_NODE_BUDGET).map(|h| h.is_some());
    let sa = SaLp::build_with(&i, &s, k, SaLimits { max_vars: DEMO_LP_VARS }).and_then(|lp| lp.solve()).map(|x| x.is_some());
    Ok(json!({
        "k": k,
        "hom": show(hom),
        "sa": show(sa),
        "consistency": show(leq_k(&i, &s, k)),
    }))
}

pub fn color_value(n: usize, edge_prob: f64, epsilon: f64, seed: u64) -> Result<Value, String> {
    if n == 0 || n > MAX_COLOR_N {
        return Err(format!("n must be between 1 and {}", MAX_COLOR_N));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err("edge probability must lie in [0, 1]".into());
    }
    let (g, planted) = planted_three_colorable(n, edge_prob, seed);
    let oracle = PlantedOracle { colors: planted };
    let wig = wigderson_color(&g, &oracle).map_err(|e| e.to_string())?;
    let cfg = GeneralizedConfig { epsilon, ..GeneralizedConfig::default() };
    let (gen, trace) = generalized_color(&g, &cfg, &oracle).map_err(|e| e.to_string())?;
    let base = partition_baseline(&g, epsilon, &oracle).map_err(|e| e.to_string())?;
    let run =
        |c: &pcsp_lab::coloring::Coloring| json!({ "colors": c.colors, "palette": c.palette_size(), "proper": validate_coloring(&g, c) });
    let edges: Vec<[usize; 2]> = g.edges().into_iter().map(|(u, v)| [u, v]).collect();
    Ok(json!({
        "n": n,
        "edges": edges,
        "wigderson": run(&wig),
        "general": run(&gen),
        "baseline": run(&base),
        "levels": trace.len(),
    }))
}

/// Classifies the template given as two structure texts.
#[wasm_bindgen]
pub fn analyze(left: &str, right: &str) -> String {
    respond(analyze_value(left, right))
}

/// Homomorphism, k-consistency and level-k Sherali-Adams verdicts.
#[wasm_bindgen]
pub fn decide(instance: &str, template: &str, k: usize) -> String {
    respond(decide_value(instance, template, k))
}

/// Colours a planted 3-colourable graph with all three algorithms.
#[wasm_bindgen]
pub fn color_compare(n: usize, edge_prob: f64, epsilon: f64, seed: u64) -> String {
    respond(color_value(n, edge_prob, epsilon, seed))
}
