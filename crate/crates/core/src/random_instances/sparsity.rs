use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::hireal::Real;
use crate::structure::{Elem, Structure};

pub const DEFAULT_EXACT_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SparsityMode {
    /// Full subset enumeration (at most 63 elements).
    Exact,
    /// Peeling and greedy growth; only a found witness is conclusive.
    Heuristic,
    /// Exact up to the given number of elements, heuristic above.
    Auto(usize),
}

impl Default for SparsityMode {
    fn default() -> Self {
        SparsityMode::Auto(DEFAULT_EXACT_LIMIT)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparsityVerdict {
    pub sparse: bool,
    /// Elements of a substructure with at least `beta |W|` tuples and `|W| <= alpha n`.
    pub witness: Option<Vec<Elem>>,
    /// Whether the verdict is certain: exhaustive search, or a witness was found.
    pub exact: bool,
}

/// Checks that every substructure on `1 <= v <= alpha n` elements has fewer than
/// `beta v` tuples.
pub fn is_alpha_beta_sparse(i: &Structure, alpha: &Real, beta: &BigRational, mode: SparsityMode) -> SparsityVerdict {
    let n = i.domain_size();
    let vmax = alpha.mul(&Real::from_int(n as i64)).floor_u64().unwrap_or(0).min(n as u64) as usize;
    sparse_up_to(i, vmax, beta, mode)
}

/// As [`is_alpha_beta_sparse`] with the size cap given directly.
pub fn sparse_up_to(i: &Structure, vmax: usize, beta: &BigRational, mode: SparsityMode) -> SparsityVerdict {
    let n = i.domain_size();
    let vmax = vmax.min(n);
    let tuples = tuple_sets(i);
    let exact = match mode {
        SparsityMode::Exact => n <= 63,
        SparsityMode::Heuristic => false,
        SparsityMode::Auto(limit) => n <= limit.min(63),
    };
    let dense = |size: usize, count: usize| BigRational::from_integer(BigInt::from(count)) >= beta * BigInt::from(size);
    if exact {
        let masks: Vec<u64> = tuples.iter().map(|t| t.iter().fold(0u64, |m, &e| m | 1 << e)).collect();
        for v in 1..=vmax {
            let mut w: u64 = (1u64 << v) - 1;
            while w < 1u64 << n {
                let count = masks.iter().filter(|&&m| m & !w == 0).count();
                if dense(v, count) {
                    let witness = (0..n as Elem).filter(|&e| w >> e & 1 == 1).collect();
                    return SparsityVerdict { sparse: false, witness: Some(witness), exact: true };
                }
                // Gosper's hack
                let c = w & w.wrapping_neg();
                let r = w + c;
                w = (((r ^ w) >> 2) / c) | r;
            }
        }
        return SparsityVerdict { sparse: true, witness: None, exact: true };
    }
    match heuristic_witness(n, &tuples, vmax, &dense) {
        Some(w) => SparsityVerdict { sparse: false, witness: Some(w), exact: true },
        None => SparsityVerdict { sparse: true, witness: None, exact: false },
    }
}

/// Distinct elements of every tuple, over all relations.
fn tuple_sets(i: &Structure) -> Vec<Vec<Elem>> {
    let mut out = Vec::with_capacity(i.tuple_count());
    for rel in i.relations() {
        for t in rel.iter() {
            let mut s = t.to_vec();
            s.sort_unstable();
            s.dedup();
            out.push(s);
        }
    }
    out
}

fn count_inside(tuples: &[Vec<Elem>], inside: &[bool]) -> usize {
    tuples.iter().filter(|t| t.iter().all(|&e| inside[e as usize])).count()
}

fn heuristic_witness(n: usize, tuples: &[Vec<Elem>], vmax: usize, dense: &dyn Fn(usize, usize) -> bool) -> Option<Vec<Elem>> {
    if vmax == 0 {
        return None;
    }
    let mut incident = vec![Vec::new(); n];
    for (ti, t) in tuples.iter().enumerate() {
        for &e in t {
            incident[e as usize].push(ti);
        }
    }
    // nullary tuples sit inside every set
    let always = tuples.iter().filter(|t| t.is_empty()).count();
    let as_list = |inside: &[bool]| (0..n as Elem).filter(|&e| inside[e as usize]).collect::<Vec<_>>();

    // peeling: drop a minimum-degree element at a time
    let mut inside = vec![true; n];
    let mut size = n;
    let mut deg: Vec<usize> = (0..n).map(|e| incident[e].len()).collect();
    let mut alive_tuples = tuples.len();
    let mut dead = vec![false; tuples.len()];
    while size > 0 {
        if size <= vmax && dense(size, alive_tuples) {
            return Some(as_list(&inside));
        }
        let x = (0..n).filter(|&e| inside[e]).min_by_key(|&e| (deg[e], e)).expect("nonempty");
        inside[x] = false;
        size -= 1;
        for &ti in &incident[x] {
            if !dead[ti] {
                dead[ti] = true;
                alive_tuples -= 1;
                for &e in &tuples[ti] {
                    deg[e as usize] -= 1;
                }
            }
        }
    }

    // greedy growth from each tuple
    for seed in tuples.iter().filter(|t| !t.is_empty() && t.len() <= vmax) {
        let mut inside = vec![false; n];
        for &e in seed {
            inside[e as usize] = true;
        }
        let mut size = seed.len();
        loop {
            let count = count_inside(tuples, &inside);
            if dense(size, count) {
                return Some(as_list(&inside));
            }
            if size == vmax {
                break;
            }
            // element closing the most tuples, ties to the smallest index
            let mut best: Option<(usize, usize)> = None;
            for e in (0..n).filter(|&e| !inside[e]) {
                let gain = incident[e].iter().filter(|&&ti| tuples[ti].iter().all(|&x| x as usize == e || inside[x as usize])).count();
                if best.is_none_or(|(g, _)| gain > g) {
                    best = Some((gain, e));
                }
            }
            match best {
                Some((_, e)) => {
                    inside[e] = true;
                    size += 1;
                }
                None => break,
            }
        }
    }
    if always > 0 && dense(1, always) {
        return Some(vec![0]);
    }
    None
}
