use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::hireal::Real;
use super::params::{check_conditions, ParameterSet};
use super::sampling::sample_hypergraph;
use super::sparsity::{is_alpha_beta_sparse, SparsityMode};
use crate::error::{arg, Error, Result};
use crate::format::CSV_HEADER;
use crate::hom::{default_node_budget, hom_search_with_budget};
use crate::seed::derive_seed;
use crate::structure::Structure;

#[derive(Clone, Copy, Debug)]
pub struct HardOptions {
    pub sparsity: SparsityMode,
    pub node_budget: u64,
    /// Keep sampling after the first success, for frequency estimates.
    pub run_all: bool,
}

impl Default for HardOptions {
    fn default() -> Self {
        HardOptions { sparsity: SparsityMode::default(), node_budget: default_node_budget(), run_all: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttemptRecord {
    pub attempt: u64,
    /// `None` when the search ran out of budget.
    pub hom_found: Option<bool>,
    pub sparse: bool,
    pub exact: bool,
    pub reason: &'static str,
}

#[derive(Clone, Debug)]
pub struct HardDiagnostics {
    pub records: Vec<AttemptRecord>,
    pub hom_frequency: f64,
    pub nonsparse_frequency: f64,
    pub p1: Real,
    pub p2: Option<Real>,
    /// The rational edge parameter actually sampled with.
    pub d_used: BigRational,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct HardOutcome {
    pub instance: Option<Structure>,
    /// Index of the accepted attempt.
    pub accepted: Option<u64>,
    pub diagnostics: HardDiagnostics,
}

/// Rejection-samples a random instance that is sparse and has no homomorphism to `T`.
/// Attempt `i` samples with seed `derive_seed(seed, i)`.
pub fn generate_hard_instance(
    s: &Structure,
    t: &Structure,
    n: usize,
    params: &ParameterSet,
    seed: u64,
    attempts: u64,
    opts: HardOptions,
) -> Result<HardOutcome> {
    let (s, t) = (s.reduce(), t.reduce());
    let r = s.relation(0).arity();
    if t.relation(0).arity() != r {
        return arg("templates have different arities");
    }
    if r != params.r as usize {
        return arg(format!("parameters are for arity {} but the templates have arity {}", params.r, r));
    }
    let mut warnings = Vec::new();
    if params.n != n as u64 {
        warnings.push(format!("parameters were derived for n = {}, sampling n = {}", params.n, n));
    }
    let report = check_conditions(params);
    let failing = report.failing();
    if !failing.is_empty() {
        warnings.push(format!("conditions failing at this n: {}", failing.join(" ")));
    }
    if params.unsupported_delta {
        warnings.push("forced delta outside the proven range".into());
    }
    let d_used = params.d.rational_below().ok_or_else(|| Error::Argument("d is not finite".into()))?;
    let cap = BigRational::from_integer(BigInt::from(n.max(1)).pow(r as u32 - 1));
    let d_used = if d_used > cap {
        warnings.push("d exceeds n^(r-1); clamped to edge probability 1".into());
        cap
    } else if d_used.is_negative() {
        return arg("d must be non-negative");
    } else {
        d_used
    };

    let mut records = Vec::new();
    let (mut homs, mut dense) = (0u64, 0u64);
    let mut instance = None;
    let mut accepted = None;
    for attempt in 0..attempts {
        let inst = sample_hypergraph(n, r, &d_used, derive_seed(seed, attempt))?;
        let hom_found = match hom_search_with_budget(&inst, &t, opts.node_budget) {
            Ok(h) => Some(h.is_some()),
            Err(Error::Budget(_)) => None,
            Err(e) => return Err(e),
        };
        let sv = is_alpha_beta_sparse(&inst, &params.alpha, &params.beta, opts.sparsity);
        homs += (hom_found == Some(true)) as u64;
        dense += (!sv.sparse) as u64;
        let reason = match (hom_found, sv.sparse) {
            (None, _) => "budget",
            (Some(false), true) => "accepted",
            (Some(true), true) => "homomorphic",
            (Some(false), false) => "not_sparse",
            (Some(true), false) => "homomorphic_not_sparse",
        };
        records.push(AttemptRecord { attempt, hom_found, sparse: sv.sparse, exact: sv.exact, reason });
        if reason == "accepted" && instance.is_none() {
            instance = Some(inst.with_name(format!("hard_{}", attempt)));
            accepted = Some(attempt);
            if !opts.run_all {
                break;
            }
        }
    }
    let ran = records.len().max(1) as f64;
    Ok(HardOutcome {
        instance,
        accepted,
        diagnostics: HardDiagnostics {
            records,
            hom_frequency: homs as f64 / ran,
            nonsparse_frequency: dense as f64 / ran,
            p1: report.p1,
            p2: report.p2,
            d_used,
            warnings,
        },
    })
}

/// Attempt log as CSV with the versioned header.
pub fn records_csv(records: &[AttemptRecord]) -> String {
    let mut out = format!("{}\nattempt,hom_found,sparse,exact,reason\n", CSV_HEADER);
    for r in records {
        let hom = match r.hom_found {
            Some(b) => b.to_string(),
            None => "unknown".into(),
        };
        out.push_str(&format!("{},{},{},{},{}\n", r.attempt, hom, r.sparse, r.exact, r.reason));
    }
    out
}
