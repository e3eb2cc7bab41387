//! The twelve acceptance criteria. Each criterion runs on its own thread and
//! reports one line; the test fails if any criterion fails.
//!
//! Run with `cargo test -p pcsp-lab --test acceptance -- --nocapture` to see the report.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use pcsp_lab::analyzer::{classify, Verdict};
use pcsp_lab::cli;
use pcsp_lab::coloring::{
    color_recurrence_q, generalized_color, planted_three_colorable, two_color, validate_coloring, wigderson_color, GeneralizedConfig,
    Graph, LevelCase, PlantedOracle,
};
use pcsp_lab::consistency::{compute_strategy, leq_k, PartialMap};
use pcsp_lab::format::{write_coloring, write_structure};
use pcsp_lab::hom::hom_search;
use pcsp_lab::polymorphisms::{alternating_threshold, is_polymorphism, is_wnu, majority_first_tiebreak};
use pcsp_lab::random_instances::{
    chernoff_bound, delta_prime, derive_parameters, find_boundary_sets, is_alpha_beta_sparse, is_boundary_set, p1, p2, sample_hypergraph,
    DeriveRequest, Mode, ParameterSet, Real, SparsityMode,
};
use pcsp_lab::ratlp::{LpOutcome, RationalLp, Rel};
use pcsp_lab::seed::rng_for;
use pcsp_lab::sherali_adams::{condition_on, leq_sa, solve_sa, SaLp};
use pcsp_lab::structure::{complete_graph, exactly, graph_structure, nae, not_all_equal};
use pcsp_lab::{Elem, Signature, Structure};

type Q = BigRational;
type Outcome = Result<String, String>;

fn rat(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// random small structures

fn random_signature(rng: &mut ChaCha8Rng) -> Signature {
    let count = rng.gen_range(1..=2);
    Signature::new((0..count).map(|i| (format!("R{}", i), rng.gen_range(1..=3)))).unwrap()
}

fn random_structure(rng: &mut ChaCha8Rng, sig: &Signature, domain: usize, density: f64, max_tuples: usize) -> Structure {
    let mut lists = Vec::new();
    for sym in sig.symbols() {
        let mut ts: Vec<Vec<Elem>> = Vec::new();
        for t in pcsp_lab::structure::all_tuples(sym.arity, domain) {
            if rng.gen_bool(density) {
                ts.push(t);
            }
        }
        ts.shuffle(rng);
        ts.truncate(max_tuples);
        lists.push(ts);
    }
    Structure::from_tuples("X", sig.clone(), domain, lists).unwrap()
}

// ---------------------------------------------------------------------------
// 1

fn criterion_1() -> Outcome {
    let mut rng = rng_for(1, 0);
    let mut counts = [0usize; 3];
    for _ in 0..100 {
        let sig = random_signature(&mut rng);
        let s_dom = rng.gen_range(1..=3);
        let i_dom = rng.gen_range(1..=6);
        let s = random_structure(&mut rng, &sig, s_dom, 0.6, usize::MAX);
        let i = random_structure(&mut rng, &sig, i_dom, 0.3, 5);
        let k = rng.gen_range(1..=3);
        let hom = hom_search(&i, &s).map_err(e2s)?.is_some();
        let sa = leq_sa(&i, &s, k).map_err(e2s)?;
        let strat = leq_k(&i, &s, k).map_err(e2s)?;
        ensure(!hom || sa, || format!("hom but SA^{} infeasible:\n{}{}", k, write_structure(&i), write_structure(&s)))?;
        ensure(!sa || strat, || format!("SA^{} feasible but no {}-strategy:\n{}{}", k, k, write_structure(&i), write_structure(&s)))?;
        counts[0] += hom as usize;
        counts[1] += sa as usize;
        counts[2] += strat as usize;
    }
    Ok(format!("100 pairs, 0 violations (hom {}, SA {}, strategy {})", counts[0], counts[1], counts[2]))
}

// ---------------------------------------------------------------------------
// 2

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Smallest edge bitmask over degree-sorted relabellings; an isomorphism invariant.
fn canonical_graph(n: usize, adj: &[u8], perms: &[Vec<usize>]) -> u32 {
    let deg: Vec<u32> = adj.iter().map(|r| r.count_ones()).collect();
    let mut best = u32::MAX;
    for p in perms {
        if p.windows(2).any(|w| deg[w[0]] < deg[w[1]]) {
            continue;
        }
        let mut key = 0u32;
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if adj[p[i]] >> p[j] & 1 == 1 {
                    key |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(key);
    }
    best
}

fn graph_from_key(n: usize, key: u32) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if key >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    edges
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<u8> {
    let mut adj = vec![0u8; n];
    for &(u, v) in edges {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

/// Non-isomorphic graphs on `n` vertices for `n = 1..=max`, as edge lists.
fn nonisomorphic_graphs(max: usize) -> Vec<Vec<Vec<(usize, usize)>>> {
    let mut levels: Vec<Vec<Vec<(usize, usize)>>> = vec![vec![vec![]]];
    for n in 2..=max {
        let perms = permutations(n);
        let mut seen = BTreeSet::new();
        for g in &levels[n - 2] {
            for nb in 0u32..(1 << (n - 1)) {
                let mut edges = g.clone();
                edges.extend((0..n - 1).filter(|&v| nb >> v & 1 == 1).map(|v| (v, n - 1)));
                seen.insert(canonical_graph(n, &adjacency(n, &edges), &perms));
            }
        }
        levels.push(seen.into_iter().map(|k| graph_from_key(n, k)).collect());
    }
    levels
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let adj = adjacency(n, edges);
    let mut seen = 1u8;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        let fresh = adj[v] & !seen;
        seen |= fresh;
        stack.extend((0..n).filter(|&w| fresh >> w & 1 == 1));
    }
    seen.count_ones() as usize == n
}

fn criterion_2() -> Outcome {
    let levels = nonisomorphic_graphs(7);
    let sizes: Vec<usize> = levels.iter().map(Vec::len).collect();
    ensure(sizes == [1, 2, 4, 11, 34, 156, 1044], || format!("graph counts {:?}", sizes))?;
    let k2 = complete_graph(2);
    let mut total = 0;
    let mut bipartite = 0;
    let mut connected7 = 0;
    for (idx, level) in levels.iter().enumerate() {
        let n = idx + 1;
        for edges in level {
            let g = graph_structure(n, edges).map_err(e2s)?;
            let bip = two_color(&Graph::new(n, edges).map_err(e2s)?).is_some();
            let acc = leq_k(&g, &k2, 3).map_err(e2s)?;
            ensure(acc == bip, || format!("n={} edges={:?}: leq_3={} bipartite={}", n, edges, acc, bip))?;
            total += 1;
            bipartite += bip as usize;
            if n == 7 && connected(n, edges) {
                connected7 += 1;
            }
        }
    }
    ensure(connected7 == 853, || format!("{} connected graphs on 7 vertices", connected7))?;
    Ok(format!("{} graphs on 1..=7 vertices ({} connected on 7), {} bipartite, 0 disagreements", total, connected7, bipartite))
}

// ---------------------------------------------------------------------------
// 3

fn criterion_3() -> Outcome {
    for p in 1..=6 {
        for q in p..=6 {
            let rep = classify(&complete_graph(p), &complete_graph(q)).map_err(e2s)?;
            let want = if p >= 3 { Verdict::NoSublinearWidth } else { Verdict::Inconclusive };
            ensure(rep.verdict == want, || format!("K{} vs K{}: {:?}", p, q, rep.verdict))?;
        }
    }
    let rep = classify(&exactly(2, 4), &nae(4)).map_err(e2s)?;
    ensure(rep.verdict == Verdict::NoSublinearWidth, || format!("2-in-4 vs NAE-4: {:?}", rep.verdict))?;
    let one_in_two = exactly(1, 2);
    let rep = classify(&one_in_two, &one_in_two).map_err(e2s)?;
    ensure(rep.verdict == Verdict::Inconclusive, || format!("1-in-2: {:?}", rep.verdict))?;
    Ok("21 complete-graph pairs, 2-in-4/NAE-4 and 1-in-2 classified as expected".into())
}

// ---------------------------------------------------------------------------
// 4

fn criterion_4() -> Outcome {
    let (s24, n4) = (exactly(2, 4), nae(4));
    let (s13, n3) = (exactly(1, 3), nae(3));
    for m in 3..=5 {
        let f = majority_first_tiebreak(m, 2).map_err(e2s)?;
        ensure(is_wnu(&f), || format!("majority({}) is not a WNU", m))?;
        ensure(is_polymorphism(&f, &s24, &n4), || format!("majority({}) is not a polymorphism", m))?;
    }
    for m in [3, 5] {
        let f = alternating_threshold(m).map_err(e2s)?;
        ensure(is_polymorphism(&f, &s13, &n3), || format!("alt({}) fails on 1-in-3/NAE-3", m))?;
        ensure(is_polymorphism(&f, &s24, &n4), || format!("alt({}) fails on 2-in-4/NAE-4", m))?;
    }
    let evals: usize = (3..=5).map(|m| 6usize.pow(m as u32) * 4).sum();
    Ok(format!("majority m=3,4,5 ({} evaluations) and alternating threshold m=3,5 verified", evals))
}

// ---------------------------------------------------------------------------
// 5

type Triple = [u8; 3];

fn canonical_instance(set: &[Triple], perms: &[Vec<usize>]) -> Vec<Triple> {
    let mut best: Option<Vec<Triple>> = None;
    for p in perms {
        let mut img: Vec<Triple> = set.iter().map(|t| t.map(|x| p[x as usize] as u8)).collect();
        img.sort_unstable();
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
    }
    best.unwrap_or_default()
}

fn criterion_5() -> Outcome {
    const VARS: usize = 5;
    let perms = permutations(VARS);
    let triples: Vec<Triple> = pcsp_lab::structure::all_tuples(3, VARS).map(|t| [t[0] as u8, t[1] as u8, t[2] as u8]).collect();
    let mut level: BTreeSet<Vec<Triple>> = BTreeSet::new();
    level.insert(Vec::new());
    let mut all: Vec<Vec<Triple>> = Vec::new();
    for _ in 0..4 {
        let mut next = BTreeSet::new();
        for set in &level {
            for t in &triples {
                if set.contains(t) {
                    continue;
                }
                let mut grown = set.clone();
                grown.push(*t);
                next.insert(canonical_instance(&grown, &perms));
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    let (one_in_three, nae3) = (exactly(1, 3), nae(3));
    let mut lp_checks = 0;
    let mut accepted = 0;
    for set in &all {
        let tuples: Vec<Vec<Elem>> = set.iter().map(|t| t.iter().map(|&x| x as Elem).collect()).collect();
        let inst = Structure::from_tuples("I", Signature::single("R", 3), VARS, vec![tuples]).map_err(e2s)?;
        if hom_search(&inst, &nae3).map_err(e2s)?.is_some() {
            continue;
        }
        lp_checks += 1;
        let sa = leq_sa(&inst, &one_in_three, 2).map_err(e2s)?;
        accepted += sa as usize;
        ensure(!sa, || format!("SA^2 accepts but no NAE-3 homomorphism: {:?}", set))?;
    }
    Ok(format!(
        "{} instances up to renaming, {} without NAE-3 homomorphism all rejected by SA^2 ({} violations)",
        all.len(),
        lp_checks,
        accepted
    ))
}

// ---------------------------------------------------------------------------
// 6

fn criterion_6() -> Outcome {
    let mut rng = rng_for(6, 0);
    let templates = [exactly(1, 3), nae(3), not_all_equal(3, 2), exactly(2, 4)];
    let mut done = 0;
    let mut tries = 0;
    while done < 50 {
        tries += 1;
        if tries > 5000 {
            return Err(format!("only {} feasible SA^2 solutions found", done));
        }
        let s = &templates[rng.gen_range(0..templates.len())];
        let r = s.relation(0).arity();
        let n = rng.gen_range(r..=6);
        let mut ts: Vec<Vec<Elem>> = pcsp_lab::structure::all_tuples(r, n).filter(|_| rng.gen_bool(0.08)).collect();
        ts.truncate(5);
        let inst = Structure::from_tuples("I", s.signature().clone(), n, vec![ts]).map_err(e2s)?;
        let Some(sol) = solve_sa(&inst, s, 2).map_err(e2s)? else { continue };
        let support: Vec<(Elem, Elem)> = sol.x.iter().filter(|(f, v)| f.len() == 1 && v.is_positive()).map(|(f, _)| f.pairs()[0]).collect();
        let (v, b) = support[rng.gen_range(0..support.len())];
        let cond = condition_on(&sol, v, b).map_err(e2s)?;
        let lp1 = SaLp::build(&inst, s, 1).map_err(e2s)?;
        ensure(lp1.check(&cond), || format!("conditioned solution violates SA^1 on {}", write_structure(&inst)))?;
        let vb = PartialMap::new(vec![(v, b)]).map_err(e2s)?;
        ensure(cond.x_value(&vb).is_one(), || format!("x_{{{}:{}}} = {} after conditioning", v, b, cond.x_value(&vb)))?;
        done += 1;
    }
    Ok(format!("50 conditioned SA^2 solutions satisfy SA^1 with x_(v->b) = 1 ({} instances tried)", tries))
}

// ---------------------------------------------------------------------------
// 7

fn binomial_tail(m: u64, gamma: &Q, t: &Q) -> Q {
    let from = (t * BigInt::from(m)).ceil().to_integer();
    let one_minus = Q::one() - gamma;
    let mut sum = Q::zero();
    let mut choose = BigInt::one();
    for i in 0..=m {
        if BigInt::from(i) >= from {
            sum += Q::from_integer(choose.clone()) * pow(gamma, i) * pow(&one_minus, m - i);
        }
        choose = choose * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    sum
}

fn pow(x: &Q, e: u64) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

fn criterion_7() -> Outcome {
    const SEEDS: u64 = 500;
    // (r, n, q, d)
    let grid: [(u32, usize, usize, i64); 6] = [(2, 12, 2, 8), (2, 14, 2, 10), (2, 14, 2, 4), (2, 10, 3, 6), (3, 12, 2, 60), (3, 14, 2, 80)];
    let mut lines = Vec::new();
    let mut informative = (0, 0);
    for &(r, n, q, d) in &grid {
        let dq = Q::from_integer(BigInt::from(d));
        let dr = Real::from_rational(&dq);
        let t = not_all_equal(q, r as usize);
        let delta = pcsp_lab::random_instances::params::general_delta(r);
        let beta = (Q::one() + &delta) / BigInt::from(r - 1);
        let alpha = rat(1, 2);
        let b1 = p1(r, &dr, n as u64, q as u64).to_f64().min(1.0);
        let b2 = p2(r, &dr, n as u64, &Real::from_rational(&alpha), &Real::from_rational(&beta)).map_err(e2s)?.to_f64().min(1.0);
        let (mut homs, mut dense) = (0u64, 0u64);
        for seed in 0..SEEDS {
            let inst = sample_hypergraph(n, r as usize, &dq, seed).map_err(e2s)?;
            homs += hom_search(&inst, &t).map_err(e2s)?.is_some() as u64;
            let v = is_alpha_beta_sparse(&inst, &Real::from_rational(&alpha), &beta, SparsityMode::Exact);
            dense += !v.sparse as u64;
        }
        let (f1, f2) = (homs as f64 / SEEDS as f64, dense as f64 / SEEDS as f64);
        let sigma = |p: f64| (p * (1.0 - p) / SEEDS as f64).sqrt();
        ensure(f1 <= b1 + 3.0 * sigma(b1), || format!("r={} n={} q={} d={}: hom freq {} > p1 {}", r, n, q, d, f1, b1))?;
        ensure(f2 <= b2 + 3.0 * sigma(b2), || format!("r={} n={} q={} d={}: dense freq {} > p2 {}", r, n, q, d, f2, b2))?;
        informative.0 += (b1 < 1.0) as usize;
        informative.1 += (b2 < 1.0) as usize;
        lines.push(format!("({},{},{},{}) hom {:.3}<=p1 {:.3e}, dense {:.3}<=p2 {:.3e}", r, n, q, d, f1, b1, f2, b2));
    }
    let mut rng = rng_for(7, 0);
    for _ in 0..200 {
        let m: u64 = rng.gen_range(1..=20);
        let den: i64 = rng.gen_range(2..=20);
        let gnum = rng.gen_range(0..den);
        let gamma = rat(gnum, den);
        let tden: i64 = rng.gen_range(2..=20);
        let tnum = (gnum * tden / den + 1 + rng.gen_range(0..=tden)).min(tden);
        let t = rat(tnum, tden);
        if t <= gamma {
            continue;
        }
        let bound = chernoff_bound(m, &Real::from_rational(&gamma), &Real::from_rational(&t));
        let tail = Real::from_rational(&binomial_tail(m, &gamma, &t));
        ensure(bound >= tail, || format!("chernoff({}, {}, {}) = {} < tail {}", m, gamma, t, bound.short(), tail.short()))?;
    }
    Ok(format!(
        "{} grid points x {} seeds within 3 sigma (p1 < 1 on {}, p2 < 1 on {}); chernoff >= exact tail on 200 triples [{}]",
        grid.len(),
        SEEDS,
        informative.0,
        informative.1,
        lines.join("; ")
    ))
}

// ---------------------------------------------------------------------------
// 8

/// Sub-structure keeping the tuples of relation 0 selected by `mask`.
fn sub_j(j: &Structure, mask: u32) -> Structure {
    let rel = j.relation(0);
    let tuples: Vec<Vec<Elem>> = (0..rel.len()).filter(|i| mask >> i & 1 == 1).map(|i| rel.tuple(i).to_vec()).collect();
    Structure::from_tuples("J", j.signature().clone(), j.domain_size(), vec![tuples]).unwrap()
}

fn spanned(j: &Structure) -> usize {
    let mut seen = vec![false; j.domain_size()];
    for t in j.relation(0).iter() {
        for &e in t {
            seen[e as usize] = true;
        }
    }
    seen.into_iter().filter(|&b| b).count()
}

/// Every sub-J with `m <= c` tuples spans more than `(r-1) m / (1 + delta)` elements.
fn density_premise(j: &Structure, ps: &ParameterSet) -> bool {
    let m_all = j.relation(0).len();
    (1u32..1 << m_all).all(|mask| {
        let m = mask.count_ones() as i64;
        if Q::from_integer(m.into()) > ps.c {
            return true;
        }
        let v = spanned(&sub_j(j, mask)) as i64;
        Q::from_integer(v.into()) * (Q::one() + &ps.delta) > Q::from_integer(((ps.r as i64 - 1) * m).into())
    })
}

struct LemmaStats {
    instances: usize,
    skipped: usize,
    subs: usize,
    sets: usize,
}

fn lemma_suite(s: &Structure, ps: &ParameterSet, ds: &[Q], ns: std::ops::RangeInclusive<usize>, seed: u64) -> Result<LemmaStats, String> {
    let r = ps.r as usize;
    let need = match ps.mode {
        Mode::General => ps.delta.clone(),
        Mode::Digraph => ps.delta_prime.clone().expect("digraph delta'"),
    };
    let mut st = LemmaStats { instances: 0, skipped: 0, subs: 0, sets: 0 };
    let mut attempt = 0;
    for n in ns {
        for d in ds {
            for _ in 0..3 {
                attempt += 1;
                let j = sample_hypergraph(n, r, d, seed * 1000 + attempt).map_err(e2s)?;
                if j.relation(0).len() > 12 || j.relation(0).is_empty() || !density_premise(&j, ps) {
                    st.skipped += 1;
                    continue;
                }
                st.instances += 1;
                let m_all = j.relation(0).len();
                for mask in 1u32..1 << m_all {
                    let m = mask.count_ones() as i64;
                    if Q::from_integer(m.into()) > ps.c {
                        continue;
                    }
                    let sub = sub_j(&j, mask);
                    st.subs += 1;
                    let sets = find_boundary_sets(&sub, r).map_err(e2s)?;
                    ensure(Q::from_integer((sets.len() as i64).into()) >= &need * BigInt::from(m), || {
                        format!("{} boundary sets for m={} in {}", sets.len(), m, write_structure(&sub))
                    })?;
                    for b in &sets {
                        ensure(is_boundary_set(&sub, &b.elements, s, 1 << 20).map_err(e2s)?, || {
                            format!("{:?} is not a boundary set of {}", b.elements, write_structure(&sub))
                        })?;
                    }
                    st.sets += sets.len();
                    ensure(hom_search(&sub, s).map_err(e2s)?.is_some(), || format!("no homomorphism: {}", write_structure(&sub)))?;
                }
                ensure(compute_strategy(&j, s, ps.k as usize).map_err(e2s)?.is_some(), || {
                    format!("no {}-strategy: {}", ps.k, write_structure(&j))
                })?;
            }
        }
    }
    ensure(st.instances >= 10, || format!("only {} instances met the density premise", st.instances))?;
    Ok(st)
}

fn criterion_8() -> Outcome {
    let k3 = not_all_equal(3, 2);
    let mut general = DeriveRequest::general(2, 3, 3, 12);
    general.k = Some(2);
    let ps_g = derive_parameters(&general).map_err(e2s)?;
    ensure(ps_g.delta == rat(1, 21), || format!("general delta {}", ps_g.delta))?;

    let mut digraph = DeriveRequest::digraph(3, 3, 12, rat(1, 40), rat(1, 2));
    digraph.k = Some(2);
    digraph.forced_delta = Some(rat(1, 10));
    let ps_d = derive_parameters(&digraph).map_err(e2s)?;
    ensure(ps_d.delta_prime == Some(rat(4, 33)) && delta_prime(&rat(1, 10)) == rat(4, 33), || "delta' != 4/33".into())?;

    let mut hyper = DeriveRequest::general(3, 2, 2, 12);
    hyper.k = Some(3);
    let ps_h = derive_parameters(&hyper).map_err(e2s)?;

    let graph_ds = [rat(1, 2), rat(1, 1), rat(3, 2), rat(2, 1)];
    let hyper_ds = [rat(1, 2), rat(1, 1), rat(2, 1), rat(3, 1)];
    let a = lemma_suite(&k3, &ps_g, &graph_ds, 6..=12, 81)?;
    let b = lemma_suite(&k3, &ps_d, &graph_ds, 6..=12, 82)?;
    let c = lemma_suite(&exactly(1, 3), &ps_h, &hyper_ds, 6..=12, 83)?;
    let show = |name: &str, s: &LemmaStats| {
        format!("{}: {} instances ({} skipped), {} sub-structures, {} boundary sets", name, s.instances, s.skipped, s.subs, s.sets)
    };
    Ok(format!("{}; {}; {}", show("K3 general", &a), show("K3 digraph", &b), show("1-in-3 r=3", &c)))
}

// ---------------------------------------------------------------------------
// 9

fn criterion_9() -> Outcome {
    let mut worst = 0.0f64;
    for (i, n) in [50usize, 100, 200].iter().cycle().take(50).enumerate() {
        let p = [0.05, 0.1, 0.2, 0.4, 0.7][i % 5];
        let (g, planted) = planted_three_colorable(*n, p, 900 + i as u64);
        let c = wigderson_color(&g, &PlantedOracle { colors: planted }).map_err(e2s)?;
        ensure(validate_coloring(&g, &c), || format!("improper colouring, n={} seed={}", n, 900 + i))?;
        let bound = 3 * (*n as f64).sqrt().ceil() as usize;
        ensure(c.palette_size() <= bound, || format!("n={}: palette {} > {}", n, c.palette_size(), bound))?;
        worst = worst.max(c.palette_size() as f64 / bound as f64);
    }
    Ok(format!("50 graphs proper, palette <= 3 ceil(sqrt n) (max ratio {:.2})", worst))
}

// ---------------------------------------------------------------------------
// 10

fn criterion_10() -> Outcome {
    let mut fallbacks = 0;
    let mut rows = Vec::new();
    for i in 0..30usize {
        let n = [100usize, 250, 500][i % 3];
        let eps = [0.25, 0.3, 0.4][(i / 3) % 3];
        let p = [0.02, 0.1, 0.3][(i / 9) % 3];
        let (g, planted) = planted_three_colorable(n, p, 1000 + i as u64);
        let cfg = GeneralizedConfig { epsilon: eps, ..GeneralizedConfig::default() };
        let (c, trace) = generalized_color(&g, &cfg, &PlantedOracle { colors: planted }).map_err(e2s)?;
        ensure(validate_coloring(&g, &c), || format!("improper colouring n={} eps={}", n, eps))?;
        let q = color_recurrence_q(n, eps, cfg.c);
        if trace.iter().any(|t| t.case == LevelCase::Fallback) {
            fallbacks += 1;
        } else {
            ensure(c.palette_size() <= q, || format!("n={} eps={}: palette {} > Q {}", n, eps, c.palette_size(), q))?;
        }
        if i < 9 {
            rows.push(format!("n={} eps={} palette {} Q {}", n, eps, c.palette_size(), q));
        }
    }
    Ok(format!("30 runs proper; fallback in {}/30; {}", fallbacks, rows.join(", ")))
}

// ---------------------------------------------------------------------------
// 11

type Row = (Vec<Q>, Rel, Q);

fn solve_square(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = b.len();
    let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(r, v)| r.iter().cloned().chain([v.clone()]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some((0..n).map(|i| &m[i][n] / &m[i][i]).collect())
}

fn satisfies(rows: &[Row], x: &[Q]) -> bool {
    rows.iter().all(|(a, rel, b)| {
        let lhs: Q = a.iter().zip(x).map(|(c, v)| c * v).sum();
        match rel {
            Rel::Le => lhs <= *b,
            Rel::Eq => lhs == *b,
            Rel::Ge => lhs >= *b,
        }
    })
}

/// Feasibility by vertex enumeration; valid because every variable has a lower bound.
fn basis_oracle(n: usize, rows: &[Row]) -> bool {
    let mut idx: Vec<usize> = (0..n).collect();
    if rows.len() < n {
        return false;
    }
    loop {
        let a: Vec<Vec<Q>> = idx.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Q> = idx.iter().map(|&i| rows[i].2.clone()).collect();
        if let Some(x) = solve_square(&a, &b) {
            if satisfies(rows, &x) {
                return true;
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < rows.len() - n + i {
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn criterion_11() -> Outcome {
    let mut rng = rng_for(11, 0);
    let mut feasible = 0;
    for case in 0..500 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(0..=8);
        let mut lp = RationalLp::new();
        let mut rows: Vec<Row> = Vec::new();
        for v in 0..n {
            let lo = Q::from_integer(rng.gen_range(-3..=3).into());
            let hi = rng.gen_bool(0.4).then(|| &lo + Q::from_integer(rng.gen_range(0..=4).into()));
            lp.add_var(format!("x{}", v), Some(lo.clone()), hi.clone()).map_err(e2s)?;
            let unit: Vec<Q> = (0..n).map(|w| if w == v { Q::one() } else { Q::zero() }).collect();
            rows.push((unit.clone(), Rel::Ge, lo));
            if let Some(h) = hi {
                rows.push((unit, Rel::Le, h));
            }
        }
        for _ in 0..m {
            let coeffs: Vec<Q> = (0..n).map(|_| Q::from_integer(rng.gen_range(-3..=3).into())).collect();
            let rel = [Rel::Le, Rel::Eq, Rel::Ge][rng.gen_range(0..3)];
            let rhs = rat(rng.gen_range(-10..=10), rng.gen_range(1..=3));
            let sparse: Vec<(usize, Q)> = coeffs.iter().cloned().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            lp.add_constraint(sparse, rel, rhs.clone()).map_err(e2s)?;
            rows.push((coeffs, rel, rhs));
        }
        let oracle = basis_oracle(n, &rows);
        match lp.solve().map_err(e2s)? {
            LpOutcome::Feasible(x) => {
                ensure(oracle, || format!("case {}: solver feasible, oracle infeasible", case))?;
                ensure(lp.check_point(&x) && satisfies(&rows, &x), || format!("case {}: certificate fails", case))?;
                feasible += 1;
            }
            LpOutcome::Infeasible => ensure(!oracle, || format!("case {}: solver infeasible, oracle feasible", case))?,
        }
    }
    Ok(format!("500 LPs agree with basis enumeration ({} feasible, all certificates exact)", feasible))
}

// ---------------------------------------------------------------------------
// 12

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["pcsp"];
    full.extend_from_slice(args);
    let code = cli::run(full, &mut out, &mut err);
    (code, out)
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir().map_err(e2s)?;
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let put = |name: &str, text: &str| fs::write(dir.path().join(name), text);
    put("k3", &write_structure(&complete_graph(3))).map_err(e2s)?;
    put("k5", &write_structure(&complete_graph(5))).map_err(e2s)?;
    put("c5", &write_structure(&pcsp_lab::structure::cycle(5))).map_err(e2s)?;
    put("s24", &write_structure(&exactly(2, 4))).map_err(e2s)?;
    put("nae4", &write_structure(&nae(4))).map_err(e2s)?;
    put("s13", &write_structure(&exactly(1, 3))).map_err(e2s)?;
    put("nae3", &write_structure(&nae(3))).map_err(e2s)?;
    let (g, planted) = planted_three_colorable(60, 0.2, 12);
    put("g", &write_structure(&g.to_structure())).map_err(e2s)?;
    put("planted", &write_coloring(&planted)).map_err(e2s)?;

    let runs: Vec<(&str, Vec<String>, Vec<&str>)> = vec![
        ("analyze", vec!["analyze".into(), "--left".into(), p("k3"), "--right".into(), p("k5"), "--format".into(), "json".into()], vec![]),
        (
            "consistency",
            vec![
                "consistency".into(),
                "--instance".into(),
                p("c5"),
                "--template".into(),
                p("k3"),
                "--k".into(),
                "3".into(),
                "--emit-strategy".into(),
                p("strategy"),
            ],
            vec!["strategy"],
        ),
        (
            "sa",
            vec![
                "sa".into(),
                "--instance".into(),
                p("c5"),
                "--template".into(),
                p("k3"),
                "--level".into(),
                "2".into(),
                "--certificate".into(),
                p("cert"),
                "--dump-lp".into(),
                p("lp"),
            ],
            vec!["cert", "lp"],
        ),
        (
            "polymorph",
            vec![
                "polymorph".into(),
                "--left".into(),
                p("s24"),
                "--right".into(),
                p("nae4"),
                "--arity".into(),
                "3".into(),
                "--wnu".into(),
                "--out".into(),
                p("ops"),
            ],
            vec!["ops"],
        ),
        (
            "sample",
            vec![
                "sample".into(),
                "--n".into(),
                "12".into(),
                "--r".into(),
                "3".into(),
                "--d".into(),
                "3/2".into(),
                "--seed".into(),
                "7".into(),
                "--out".into(),
                p("sampled"),
            ],
            vec!["sampled"],
        ),
        (
            "hard",
            vec![
                "hard".into(),
                "--left".into(),
                p("s13"),
                "--right".into(),
                p("nae3"),
                "--n".into(),
                "10".into(),
                "--k".into(),
                "2".into(),
                "--attempts".into(),
                "5".into(),
                "--seed".into(),
                "3".into(),
                "--report".into(),
                p("hard.csv"),
                "--out".into(),
                p("hard.struct"),
            ],
            vec!["hard.csv"],
        ),
        (
            "color",
            vec![
                "color".into(),
                "--graph".into(),
                p("g"),
                "--mode".into(),
                "general".into(),
                "--planted".into(),
                p("planted"),
                "--out".into(),
                p("col"),
                "--trace".into(),
                p("trace.csv"),
            ],
            vec!["col", "trace.csv"],
        ),
        (
            "bench",
            vec![
                "bench".into(),
                "--left".into(),
                p("s24"),
                "--right".into(),
                p("nae4"),
                "--n".into(),
                "6,8".into(),
                "--seeds".into(),
                "2".into(),
                "--k".into(),
                "2".into(),
                "--sa".into(),
                "1".into(),
                "--out".into(),
                p("bench.csv"),
            ],
            vec!["bench.csv"],
        ),
    ];
    let mut names = Vec::new();
    for (name, args, files) in &runs {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let snapshot = || -> Result<Snapshot, String> {
            let (code, out) = run_cli(&argv);
            let contents = files.iter().map(|f| fs::read(dir.path().join(f)).map_err(e2s)).collect::<Result<Vec<_>, _>>()?;
            Ok((code, out, contents))
        };
        let first = snapshot()?;
        ensure(first.0 == 0 || first.0 == 1, || format!("{} exited with {}", name, first.0))?;
        let second = snapshot()?;
        ensure(first == second, || format!("{}: outputs differ between runs", name))?;
        names.push(*name);
    }
    ensure(Path::new(&p("bench.csv")).exists(), || "bench CSV missing".into())?;
    Ok(format!("byte-identical outputs for {}", names.join(", ")))
}

// ---------------------------------------------------------------------------

type Snapshot = (i32, Vec<u8>, Vec<Vec<u8>>);
type Criterion = fn() -> Outcome;

#[test]
fn acceptance_criteria() {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("implication chain hom => SA^k => k-strategy", criterion_1),
        ("K2 has width 3 on all graphs up to 7 vertices", criterion_2),
        ("template classifier", criterion_3),
        ("WNU and threshold polymorphisms", criterion_4),
        ("SA^2 for 1-in-3 implies NAE-3", criterion_5),
        ("conditioning identity", criterion_6),
        ("probabilistic bounds", criterion_7),
        ("boundary and consistency lemmas", criterion_8),
        ("Wigderson palette bound", criterion_9),
        ("generalized colouring", criterion_10),
        ("LP engine vs basis enumeration", criterion_11),
        ("reproducible outputs", criterion_12),
    ];
    let results: Vec<(Outcome, f64)> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                let f = *f;
                std::thread::Builder::new()
                    .stack_size(64 << 20)
                    .spawn_scoped(scope, move || {
                        let start = Instant::now();
                        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                        (r, start.elapsed().as_secs_f64())
                    })
                    .unwrap()
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = Vec::new();
    for (i, ((name, _), (res, secs))) in criteria.iter().zip(&results).enumerate() {
        match res {
            Ok(detail) => println!("PASS {:>2} {} [{:.1}s]: {}", i + 1, name, secs, detail),
            Err(why) => {
                println!("FAIL {:>2} {} [{:.1}s]: {}", i + 1, name, secs, why);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {:?}", failed);
}
