//! Structural test on the binary projections of a template's product relation.

use serde::Serialize;

use crate::error::{arg, Result};
use crate::hom::hom_search;
use crate::structure::{Elem, Relation, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// `T` has a reflexive element, so every instance maps to it.
    TrivialRight,
    /// The composition condition holds and `T` is irreflexive: no sublinear width.
    NoSublinearWidth,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionSet {
    pub relations: Vec<Relation>,
    /// The product relation has arity below 2, so there are no projections.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TemplateReport {
    pub condition_holds: bool,
    pub right_reflexive: Option<Elem>,
    pub verdict: Verdict,
    pub product_arity: usize,
    pub degenerate_arity: bool,
    /// Each projection as its list of pairs.
    pub projections: Vec<Vec<(Elem, Elem)>>,
    /// Indices into `projections` of the first pair whose composition is not full.
    pub failing_pair: Option<(usize, usize)>,
}

/// `{ pr_{i,j}(prod R^S) : i != j }`, deduplicated, in order of first occurrence.
pub fn binary_projection_set(s: &Structure) -> ProjectionSet {
    let prod = s.product_relation();
    let r = prod.arity();
    if r < 2 {
        return ProjectionSet { relations: Vec::new(), degenerate: true };
    }
    let mut out: Vec<Relation> = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if i != j {
                let p = prod.projection(&[i, j]).expect("coordinates in range");
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    ProjectionSet { relations: out, degenerate: false }
}

/// Whether `U o V` is the full square for all `U, V` in the projection set,
/// with the first failing ordered pair otherwise. Degenerate sets fail.
pub fn composition_condition(s: &Structure) -> (bool, Option<(usize, usize)>) {
    let set = binary_projection_set(s);
    if set.degenerate {
        return (false, None);
    }
    check_pairs(&set.relations)
}

fn check_pairs(rels: &[Relation]) -> (bool, Option<(usize, usize)>) {
    for (a, u) in rels.iter().enumerate() {
        for (b, v) in rels.iter().enumerate() {
            if !u.compose(v).expect("binary relations").is_full() {
                return (false, Some((a, b)));
            }
        }
    }
    (true, None)
}

pub fn classify(s: &Structure, t: &Structure) -> Result<TemplateReport> {
    if hom_search(s, t)?.is_none() {
        return arg("not a template: no homomorphism from S to T");
    }
    let set = binary_projection_set(&s.reduce());
    let (condition_holds, failing_pair) = if set.degenerate { (false, None) } else { check_pairs(&set.relations) };
    let right_reflexive = t.reduce().reflexive_element();
    let verdict = if right_reflexive.is_some() {
        Verdict::TrivialRight
    } else if condition_holds {
        Verdict::NoSublinearWidth
    } else {
        Verdict::Inconclusive
    };
    Ok(TemplateReport {
        condition_holds,
        right_reflexive,
        verdict,
        product_arity: s.signature().total_arity(),
        degenerate_arity: set.degenerate,
        projections: set.relations.iter().map(|r| r.iter().map(|p| (p[0], p[1])).collect()).collect(),
        failing_pair,
    })
}

impl TemplateReport {
    /// Multi-line plain-text rendering.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "verdict: {:?}\ncondition_holds: {}\nright_reflexive: {}\nproduct_arity: {}\nprojections: {}\n",
            self.verdict,
            self.condition_holds,
            self.right_reflexive.map_or("none".to_string(), |a| a.to_string()),
            self.product_arity,
            self.projections.len(),
        );
        if self.degenerate_arity {
            out.push_str("note: product relation has arity below 2\n");
        }
        if let Some((a, b)) = self.failing_pair {
            out.push_str(&format!("failing_pair: {} {}\n", a, b));
        }
        out
    }
}
