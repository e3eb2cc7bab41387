use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::hom::HomSearch;
use crate::structure::{all_tuples, Elem, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoundaryType {
    /// `r-1` degree-one elements of a single tuple.
    One,
    /// A degree-two element plus `r-2` degree-one elements from each of its two tuples.
    Two,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundarySet {
    pub elements: Vec<Elem>,
    pub kind: BoundaryType,
    /// Indices (into relation 0) of the witnessing tuples.
    pub witnesses: Vec<usize>,
}

/// Number of tuples of each element, over all relations.
pub fn degrees(j: &Structure) -> Vec<usize> {
    let mut deg = vec![0; j.domain_size()];
    for rel in j.relations() {
        for t in rel.iter() {
            let mut s = t.to_vec();
            s.sort_unstable();
            s.dedup();
            for e in s {
                deg[e as usize] += 1;
            }
        }
    }
    deg
}

fn injective(t: &[Elem]) -> bool {
    (0..t.len()).all(|i| !t[..i].contains(&t[i]))
}

/// Greedy maximal family of pairwise disjoint candidate sets of types (1) then (2)
/// in a single-relation structure of arity `r`.
pub fn find_boundary_sets(j: &Structure, r: usize) -> Result<Vec<BoundarySet>> {
    if j.relations().len() != 1 || j.relation(0).arity() != r || r < 2 {
        return arg(format!("expected a single relation of arity {} >= 2", r));
    }
    let rel = j.relation(0);
    let deg = degrees(j);
    let mut used = vec![false; j.domain_size()];
    let mut out = Vec::new();

    for (ti, t) in rel.iter().enumerate() {
        if !injective(t) {
            continue;
        }
        let free: Vec<Elem> = t.iter().copied().filter(|&e| deg[e as usize] == 1 && !used[e as usize]).collect();
        if free.len() >= r - 1 {
            let d: Vec<Elem> = free[..r - 1].to_vec();
            for &e in &d {
                used[e as usize] = true;
            }
            out.push(BoundarySet { elements: sorted(d), kind: BoundaryType::One, witnesses: vec![ti] });
        }
    }

    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); j.domain_size()];
    for (ti, t) in rel.iter().enumerate() {
        for (i, &e) in t.iter().enumerate() {
            if !t[..i].contains(&e) {
                containing[e as usize].push(ti);
            }
        }
    }
    for z in 0..j.domain_size() {
        if deg[z] != 2 || used[z] {
            continue;
        }
        let (c1, c2) = (containing[z][0], containing[z][1]);
        let (t1, t2) = (rel.tuple(c1), rel.tuple(c2));
        if !injective(t1) || !injective(t2) {
            continue;
        }
        let pick = |t: &[Elem]| -> Vec<Elem> {
            t.iter().copied().filter(|&e| e as usize != z && deg[e as usize] == 1 && !used[e as usize]).collect()
        };
        let (x, y) = (pick(t1), pick(t2));
        if x.len() < r - 2 || y.len() < r - 2 {
            continue;
        }
        let mut d: Vec<Elem> = x[..r - 2].iter().chain(&y[..r - 2]).copied().collect();
        d.push(z as Elem);
        for &e in &d {
            used[e as usize] = true;
        }
        out.push(BoundarySet { elements: sorted(d), kind: BoundaryType::Two, witnesses: vec![c1, c2] });
    }
    Ok(out)
}

fn sorted(mut v: Vec<Elem>) -> Vec<Elem> {
    v.sort_unstable();
    v
}

/// Whether every homomorphism `J|_{J \ D} -> S` extends to `J -> S`.
///
/// Only the values on the neighbours of `D` matter, so the check enumerates
/// assignments to the neighbourhood and asks two restricted searches per
/// assignment. `budget` caps both the number of neighbourhood assignments and
/// the nodes of each search.
pub fn is_boundary_set(j: &Structure, d: &[Elem], s: &Structure, budget: u64) -> Result<bool> {
    if d.is_empty() {
        return arg("D must be nonempty");
    }
    let n = j.domain_size();
    let mut in_d = vec![false; n];
    for &e in d {
        if e as usize >= n {
            return arg(format!("element {} outside domain", e));
        }
        in_d[e as usize] = true;
    }
    let mut in_nb = vec![false; n];
    for rel in j.relations() {
        for t in rel.iter() {
            if t.iter().any(|&e| in_d[e as usize]) {
                for &e in t {
                    if !in_d[e as usize] {
                        in_nb[e as usize] = true;
                    }
                }
            }
        }
    }
    let nb: Vec<Elem> = (0..n as Elem).filter(|&e| in_nb[e as usize]).collect();
    let rest: Vec<Elem> = (0..n as Elem).filter(|&e| !in_d[e as usize]).collect();
    let mut local_elems: Vec<Elem> = nb.clone();
    local_elems.extend((0..n as Elem).filter(|&e| in_d[e as usize]));
    let local = j.induced(&local_elems)?;
    let outside = j.induced(&rest)?;
    let rest_index = |e: Elem| rest.binary_search(&e).expect("element outside D");

    let p = s.domain_size();
    let count = (p as f64).powi(nb.len() as i32);
    if count > budget as f64 {
        return Err(Error::Budget(format!("{} neighbourhood assignments exceed the budget", count)));
    }
    for g in all_tuples(nb.len(), p) {
        let mut local_search = HomSearch::new(&local, s)?.with_budget(budget);
        for (i, &v) in g.iter().enumerate() {
            local_search.restrict(i, &[v])?;
        }
        if local_search.next_hom()?.is_some() {
            continue;
        }
        let mut outer = HomSearch::new(&outside, s)?.with_budget(budget);
        for (i, &v) in g.iter().enumerate() {
            outer.restrict(rest_index(nb[i]), &[v])?;
        }
        if outer.next_hom()?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sum of the reciprocal degrees of the distinct elements of tuple `idx` of relation 0.
pub fn sdr(j: &Structure, idx: usize) -> Result<BigRational> {
    let deg = degrees(j);
    let t = j.relation(0).tuple(idx);
    let mut s = t.to_vec();
    s.sort_unstable();
    s.dedup();
    let mut acc = BigRational::zero();
    for e in s {
        acc += BigRational::new(BigInt::from(1), BigInt::from(deg[e as usize]));
    }
    Ok(acc)
}
