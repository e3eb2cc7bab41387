//! Seeded sweeps over random instances, reported as CSV.

use std::time::Instant;

use num_rational::BigRational;

use crate::consistency::{compute_strategy_with, ConsistencyLimits};
use crate::error::{arg, Error, Result};
use crate::format::CSV_HEADER;
use crate::hom::hom_search;
use crate::random_instances::sample_hypergraph;
use crate::sherali_adams::{SaLimits, SaLp};
use crate::structure::Structure;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    /// Instances per size; instance `j` uses seed `seed + j`.
    pub seeds: u64,
    pub seed: u64,
    pub d: BigRational,
    pub ks: Vec<usize>,
    pub sa_levels: Vec<usize>,
    /// Adds a wall-clock column, which makes the output non-reproducible.
    pub timings: bool,
    pub consistency: ConsistencyLimits,
    pub sa: SaLimits,
}

fn cell(r: Result<bool>) -> Result<String> {
    match r {
        Ok(b) => Ok(b.to_string()),
        Err(Error::Budget(_)) => Ok("budget".into()),
        Err(e) => Err(e),
    }
}

/// One row per (n, seed) with hom, k-consistency and SA verdicts for the reduced templates.
pub fn run_bench(s: &Structure, t: &Structure, cfg: &BenchConfig) -> Result<String> {
    let (s, t) = (s.reduce(), t.reduce());
    let r = s.relation(0).arity();
    if t.relation(0).arity() != r {
        return arg("templates have different arities");
    }
    if r < 2 {
        return arg("bench needs a product relation of arity at least 2");
    }
    let mut out = format!("{}\nn,seed,tuples,hom_S,hom_T", CSV_HEADER);
    for k in &cfg.ks {
        out.push_str(&format!(",leq_k{}", k));
    }
    for l in &cfg.sa_levels {
        out.push_str(&format!(",leq_sa{}", l));
    }
    if cfg.timings {
        out.push_str(",time_ms");
    }
    out.push('\n');
    for &n in &cfg.ns {
        for j in 0..cfg.seeds {
            let seed = cfg.seed.wrapping_add(j);
            let start = Instant::now();
            let inst = sample_hypergraph(n, r, &cfg.d, seed)?;
            let mut row = vec![n.to_string(), seed.to_string(), inst.tuple_count().to_string()];
            row.push(cell(hom_search(&inst, &s).map(|h| h.is_some()))?);
            row.push(cell(hom_search(&inst, &t).map(|h| h.is_some()))?);
            for &k in &cfg.ks {
                row.push(cell(compute_strategy_with(&inst, &s, k, cfg.consistency, None).map(|x| x.is_some()))?);
            }
            for &l in &cfg.sa_levels {
                let v = SaLp::build_with(&inst, &s, l, cfg.sa).and_then(|lp| lp.solve()).map(|x| x.is_some());
                row.push(cell(v)?);
            }
            if cfg.timings {
                row.push(start.elapsed().as_millis().to_string());
            }
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    Ok(out)
}
