//! Approximate graph colouring: Wigderson's method, its generalization driven by
//! a 3-colouring oracle, a partition baseline, and the colour-count recurrence.

use rand::Rng;
use serde::Serialize;

use crate::error::{arg, Error, Result};
use crate::format::CSV_HEADER;
use crate::hom::{default_node_budget, hom_search_with_budget};
use crate::seed::rng_for;
use crate::structure::{complete_graph, Elem, Signature, Structure};

/// Simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return arg(format!("edge ({}, {}) outside 0..{}", u, v, n));
            }
            if u == v {
                return arg(format!("loop at vertex {}", u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Ok(Graph { adj })
    }

    /// Reads a structure with a single binary relation; edges are symmetrized.
    pub fn from_structure(s: &Structure) -> Result<Graph> {
        if s.relations().len() != 1 || s.relation(0).arity() != 2 {
            return arg("a graph needs exactly one binary relation");
        }
        let edges: Vec<(usize, usize)> = s.relation(0).iter().map(|t| (t[0] as usize, t[1] as usize)).collect();
        Graph::new(s.domain_size(), &edges)
    }

    /// Symmetric structure over the symbol `E`.
    pub fn to_structure(&self) -> Structure {
        let mut tuples = Vec::new();
        for (u, a) in self.adj.iter().enumerate() {
            for &v in a {
                tuples.push(vec![u as Elem, v as Elem]);
            }
        }
        Structure::from_tuples("graph", Signature::single("E", 2), self.n(), vec![tuples]).expect("valid graph")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, a) in self.adj.iter().enumerate() {
            out.extend(a.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Induced subgraph; vertex `i` of the result is `xs[i]`.
    pub fn induced(&self, xs: &[usize]) -> Graph {
        let mut back = vec![usize::MAX; self.n()];
        for (i, &x) in xs.iter().enumerate() {
            back[x] = i;
        }
        let adj = xs
            .iter()
            .map(|&x| {
                let mut a: Vec<usize> = self.adj[x].iter().filter(|&&y| back[y] != usize::MAX).map(|&y| back[y]).collect();
                a.sort_unstable();
                a
            })
            .collect();
        Graph { adj }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub colors: Vec<usize>,
}

impl Coloring {
    pub fn palette_size(&self) -> usize {
        let mut c = self.colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    }
}

/// Total map of the right length with no monochromatic edge.
pub fn validate_coloring(g: &Graph, c: &Coloring) -> bool {
    c.colors.len() == g.n() && g.edges().iter().all(|&(u, v)| c.colors[u] != c.colors[v])
}

/// Answers 3-colouring queries on induced subgraphs.
pub trait ThreeColorOracle {
    /// Colours in `0..3` for `xs`, in order, proper on `G|_xs`; `None` to refuse.
    fn three_color(&self, g: &Graph, xs: &[usize]) -> Option<Vec<usize>>;
}

/// Returns a known hidden colouring.
pub struct PlantedOracle {
    pub colors: Vec<usize>,
}

impl ThreeColorOracle for PlantedOracle {
    fn three_color(&self, g: &Graph, xs: &[usize]) -> Option<Vec<usize>> {
        let out: Vec<usize> = xs.iter().map(|&x| self.colors[x]).collect();
        let sub = g.induced(xs);
        let ok = out.iter().all(|&c| c < 3) && validate_coloring(&sub, &Coloring { colors: out.clone() });
        ok.then_some(out)
    }
}

/// Exact backtracking search, refusing when the node budget runs out.
pub struct BacktrackOracle {
    pub budget: u64,
}

impl Default for BacktrackOracle {
    fn default() -> Self {
        BacktrackOracle { budget: default_node_budget() }
    }
}

impl ThreeColorOracle for BacktrackOracle {
    fn three_color(&self, g: &Graph, xs: &[usize]) -> Option<Vec<usize>> {
        let sub = g.induced(xs).to_structure();
        let h = hom_search_with_budget(&sub, &complete_graph(3), self.budget).ok()??;
        Some(h.into_iter().map(|c| c as usize).collect())
    }
}

/// Random graph with a hidden 3-colouring: uniform colour classes, and each
/// bichromatic pair an edge with probability `p`.
pub fn planted_three_colorable(n: usize, p: f64, seed: u64) -> (Graph, Vec<usize>) {
    let mut rng = rng_for(seed, 0);
    let colors: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if colors[u] != colors[v] && rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((u, v));
            }
        }
    }
    (Graph::new(n, &edges).expect("valid edges"), colors)
}

/// BFS bipartition, colours 0 and 1; `None` iff there is an odd cycle.
pub fn two_color(g: &Graph) -> Option<Coloring> {
    let n = g.n();
    let mut col = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for s in 0..n {
        if col[s] != usize::MAX {
            continue;
        }
        col[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if col[v] == usize::MAX {
                    col[v] = 1 - col[u];
                    queue.push_back(v);
                } else if col[v] == col[u] {
                    return None;
                }
            }
        }
    }
    Some(Coloring { colors: col })
}

/// Proper colouring with `c(v)` in `lists[v]`, each list of size at most 2,
/// via 2-SAT over "v takes its first colour".
pub fn list_two_color(g: &Graph, lists: &[Vec<usize>]) -> Option<Coloring> {
    let n = g.n();
    if lists.len() != n {
        return None;
    }
    let mut ls: Vec<Vec<usize>> = Vec::with_capacity(n);
    for l in lists {
        let mut l = l.clone();
        l.sort_unstable();
        l.dedup();
        if l.is_empty() || l.len() > 2 {
            return None;
        }
        ls.push(l);
    }
    // literal 2v: v takes ls[v][0]; 2v+1: v takes ls[v][1] (or is forced when singleton)
    let mut sat = TwoSat::new(n);
    for (v, l) in ls.iter().enumerate() {
        if l.len() == 1 {
            sat.force(2 * v);
        }
    }
    for (u, v) in g.edges() {
        for (iu, &cu) in ls[u].iter().enumerate() {
            for (iv, &cv) in ls[v].iter().enumerate() {
                if cu == cv {
                    sat.not_both(2 * u + iu, 2 * v + iv);
                }
            }
        }
    }
    let pick = sat.solve()?;
    Some(Coloring { colors: (0..n).map(|v| ls[v][if pick[v] { 0 } else { 1 }]).collect() })
}

/// Implication-graph 2-SAT; variable `v` true means literal `2v`.
struct TwoSat {
    n: usize,
    imp: Vec<Vec<usize>>,
}

impl TwoSat {
    fn new(n: usize) -> Self {
        TwoSat { n, imp: vec![Vec::new(); 2 * n] }
    }

    fn add_or(&mut self, a: usize, b: usize) {
        self.imp[a ^ 1].push(b);
        self.imp[b ^ 1].push(a);
    }

    fn force(&mut self, a: usize) {
        self.add_or(a, a);
    }

    fn not_both(&mut self, a: usize, b: usize) {
        self.add_or(a ^ 1, b ^ 1);
    }

    fn solve(&self) -> Option<Vec<bool>> {
        let comp = tarjan(&self.imp);
        let mut out = vec![false; self.n];
        for v in 0..self.n {
            let (t, f) = (comp[2 * v], comp[2 * v + 1]);
            if t == f {
                return None;
            }
            // Tarjan numbers components in reverse topological order
            out[v] = t < f;
        }
        Some(out)
    }
}

fn tarjan(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let (mut next_index, mut next_comp) = (0, 0);
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("nonempty");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

/// `ceil(x)`, treating values within `1e-9` of an integer as that integer.
fn ceil_snap(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r.max(0.0) as usize
    } else {
        x.ceil().max(0.0) as usize
    }
}

fn isqrt_ceil(n: usize) -> usize {
    let mut t = (n as f64).sqrt() as usize;
    while t * t > n {
        t -= 1;
    }
    while t * t < n {
        t += 1;
    }
    t
}

/// Wigderson's colouring with at most `3 ceil(sqrt n)` colours.
///
/// While some vertex `v` has at least `t = ceil(sqrt n)` neighbours left, its
/// neighbourhood is 2-coloured with two fresh colours and `{v} u N(v)` is removed.
/// The removed centres are pairwise non-adjacent and share colour 0. The rest has
/// maximum degree below `t` and is coloured greedily.
pub fn wigderson_color(g: &Graph, oracle: &dyn ThreeColorOracle) -> Result<Coloring> {
    let n = g.n();
    let t = isqrt_ceil(n);
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut colors = vec![usize::MAX; n];
    let mut next = 1;
    let remove = |v: usize, alive: &mut Vec<bool>, deg: &mut Vec<usize>| {
        alive[v] = false;
        for &w in g.neighbors(v) {
            deg[w] -= 1;
        }
    };
    while let Some(v) = (0..n).find(|&v| alive[v] && deg[v] >= t && t > 0) {
        let nb: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| alive[w]).collect();
        let two = match two_color(&g.induced(&nb)) {
            Some(c) => c.colors,
            None => {
                let mut xs = vec![v];
                xs.extend(&nb);
                let c = oracle
                    .three_color(g, &xs)
                    .ok_or_else(|| Error::Promise(format!("oracle refused the neighbourhood of vertex {}", v)))?;
                // relabel so that v's colour comes first
                c[1..].iter().map(|&x| if x < c[0] { x } else { x - 1 }).collect()
            }
        };
        colors[v] = 0;
        for (i, &w) in nb.iter().enumerate() {
            colors[w] = next + two[i];
        }
        next += 2;
        remove(v, &mut alive, &mut deg);
        for &w in &nb {
            remove(w, &mut alive, &mut deg);
        }
    }
    let base = next;
    for v in 0..n {
        if alive[v] {
            let used: Vec<usize> = g.neighbors(v).iter().filter(|&&w| alive[w] && colors[w] != usize::MAX).map(|&w| colors[w]).collect();
            colors[v] = (base..).find(|c| !used.contains(c)).expect("unbounded");
        }
    }
    Ok(Coloring { colors })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralizedConfig {
    pub epsilon: f64,
    /// The constant `C`.
    pub c: f64,
    pub n0: usize,
    /// Largest `|Y|` at which the case (a) search may enumerate all subsets.
    pub exhaustive_limit: usize,
}

impl Default for GeneralizedConfig {
    fn default() -> Self {
        GeneralizedConfig { epsilon: 0.3, c: 2.0, n0: 32, exhaustive_limit: 20 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LevelCase {
    /// `m <= C m^(1-eps)`: colour everything left.
    Base,
    /// `m <= k`: a single 3-colouring covers the rest.
    Small,
    A,
    B,
    /// Neither case produced a large enough set.
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelTrace {
    pub level: usize,
    pub m: usize,
    pub case: LevelCase,
    pub x_size: usize,
    pub colors: usize,
    /// Case (a) extended the colouring of `S` by list colouring (rather than asking the oracle).
    pub list_extended: bool,
}

pub fn trace_csv(trace: &[LevelTrace]) -> String {
    let mut out = format!("{}\nlevel,m,case,x_size,colors,list_extended\n", CSV_HEADER);
    for t in trace {
        out.push_str(&format!("{},{},{:?},{},{},{}\n", t.level, t.m, t.case, t.x_size, t.colors, t.list_extended));
    }
    out
}

/// `max(3 + ceil(C^2 n^(1-2 eps)), n0)`.
pub fn generalized_k(n: usize, cfg: &GeneralizedConfig) -> usize {
    (3 + ceil_snap(cfg.c * cfg.c * (n as f64).powf(1.0 - 2.0 * cfg.epsilon))).max(cfg.n0)
}

fn closed_cover(g: &Graph, s: &[usize], in_y: &[bool]) -> Vec<usize> {
    let mut mark = vec![false; g.n()];
    for &v in s {
        mark[v] = true;
        for &w in g.neighbors(v) {
            if in_y[w] {
                mark[w] = true;
            }
        }
    }
    (0..g.n()).filter(|&v| mark[v]).collect()
}

/// Greedy maximum coverage: `size` vertices of `Y` maximizing `|S u N(S)|`.
fn greedy_cover(g: &Graph, y: &[usize], in_y: &[bool], size: usize) -> Vec<usize> {
    let mut covered = vec![false; g.n()];
    let mut chosen = vec![false; g.n()];
    let mut s = Vec::with_capacity(size);
    for _ in 0..size {
        let gain = |v: usize| (!covered[v]) as usize + g.neighbors(v).iter().filter(|&&w| in_y[w] && !covered[w]).count();
        let best = y.iter().copied().filter(|&v| !chosen[v]).max_by_key(|&v| (gain(v), std::cmp::Reverse(v)));
        let Some(v) = best else { break };
        chosen[v] = true;
        covered[v] = true;
        for &w in g.neighbors(v) {
            if in_y[w] {
                covered[w] = true;
            }
        }
        s.push(v);
    }
    s
}

/// Some `S` of the given size with `|S u N(S)| > threshold`, by exhaustive search.
fn exhaustive_cover(g: &Graph, y: &[usize], in_y: &[bool], size: usize, threshold: f64) -> Option<Vec<usize>> {
    let m = y.len();
    if size > m {
        return None;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let s: Vec<usize> = idx.iter().map(|&i| y[i]).collect();
        if closed_cover(g, &s, in_y).len() as f64 > threshold {
            return Some(s);
        }
        if !crate::random_instances::sampling::next_combination(&mut idx, m) {
            return None;
        }
    }
}

/// Recursive colouring with fresh 3-colour blocks per level, following the width
/// upper-bound argument; the strategy is replaced by `oracle`.
pub fn generalized_color(g: &Graph, cfg: &GeneralizedConfig, oracle: &dyn ThreeColorOracle) -> Result<(Coloring, Vec<LevelTrace>)> {
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 0.5) || cfg.c <= 0.0 {
        return arg("need 0 < epsilon < 1/2 and C > 0");
    }
    let n = g.n();
    let k = generalized_k(n, cfg);
    let s_size = k - 3;
    let mut colors = vec![usize::MAX; n];
    let mut in_y = vec![true; n];
    let mut trace = Vec::new();
    let mut level = 0;
    let refuse = |what: &str| Error::Promise(format!("oracle refused to 3-colour {}", what));
    loop {
        let y: Vec<usize> = (0..n).filter(|&v| in_y[v]).collect();
        let m = y.len();
        if m == 0 {
            break;
        }
        let threshold = cfg.c * (m as f64).powf(1.0 - cfg.epsilon);
        let base = 3 * level;
        let assign = |xs: &[usize], cs: &[usize], colors: &mut Vec<usize>, in_y: &mut Vec<bool>| {
            for (i, &x) in xs.iter().enumerate() {
                colors[x] = base + cs[i];
                in_y[x] = false;
            }
        };
        if m as f64 <= threshold + 1e-9 || m <= k {
            let cs = oracle.three_color(g, &y).ok_or_else(|| refuse("the remaining graph"))?;
            assign(&y, &cs, &mut colors, &mut in_y);
            let case = if m as f64 <= threshold + 1e-9 { LevelCase::Base } else { LevelCase::Small };
            trace.push(LevelTrace { level, m, case, x_size: m, colors: 3, list_extended: false });
            break;
        }
        let need = ceil_snap(threshold);

        // case (a)
        let mut s = greedy_cover(g, &y, &in_y, s_size);
        let mut found = closed_cover(g, &s, &in_y).len() as f64 > threshold;
        if !found && m <= cfg.exhaustive_limit {
            if let Some(e) = exhaustive_cover(g, &y, &in_y, s_size, threshold) {
                s = e;
                found = true;
            }
        }
        if found {
            let x = closed_cover(g, &s, &in_y);
            let hs = oracle.three_color(g, &s).ok_or_else(|| refuse("S"))?;
            let mut col_s = vec![usize::MAX; n];
            for (i, &v) in s.iter().enumerate() {
                col_s[v] = hs[i];
            }
            let rest: Vec<usize> = x.iter().copied().filter(|&v| col_s[v] == usize::MAX).collect();
            let lists: Vec<Vec<usize>> =
                rest.iter().map(|&v| (0..3).filter(|&c| !g.neighbors(v).iter().any(|&u| col_s[u] == c)).collect()).collect();
            let extended = list_two_color(&g.induced(&rest), &lists);
            let list_extended = extended.is_some();
            let cs: Vec<usize> = match extended {
                Some(ext) => {
                    for (i, &v) in rest.iter().enumerate() {
                        col_s[v] = ext.colors[i];
                    }
                    x.iter().map(|&v| col_s[v]).collect()
                }
                None => oracle.three_color(g, &x).ok_or_else(|| refuse("S u N(S)"))?,
            };
            assign(&x, &cs, &mut colors, &mut in_y);
            trace.push(LevelTrace { level, m, case: LevelCase::A, x_size: x.len(), colors: 3, list_extended });
            level += 1;
            continue;
        }

        // case (b): disjoint blobs S u N(S), each S built from vertices whose
        // closed neighbourhood avoids every earlier blob
        let mut blocked = vec![false; n];
        let mut x = Vec::new();
        loop {
            let mut blob_s = Vec::new();
            for &v in &y {
                if blob_s.len() == s_size {
                    break;
                }
                if !blocked[v] && g.neighbors(v).iter().all(|&w| !in_y[w] || !blocked[w]) {
                    blob_s.push(v);
                }
            }
            if blob_s.len() < s_size {
                break;
            }
            for v in closed_cover(g, &blob_s, &in_y) {
                blocked[v] = true;
            }
            x.extend(blob_s);
        }
        if x.len() >= need {
            x.sort_unstable();
            // no edges between different blobs' S, so one query suffices
            let cs = oracle.three_color(g, &x).ok_or_else(|| refuse("the union of blobs"))?;
            assign(&x, &cs, &mut colors, &mut in_y);
            trace.push(LevelTrace { level, m, case: LevelCase::B, x_size: x.len(), colors: 3, list_extended: false });
        } else {
            let x: Vec<usize> = y[..need.min(m)].to_vec();
            let cs = oracle.three_color(g, &x).ok_or_else(|| refuse("a fallback block"))?;
            assign(&x, &cs, &mut colors, &mut in_y);
            trace.push(LevelTrace { level, m, case: LevelCase::Fallback, x_size: x.len(), colors: 3, list_extended: false });
        }
        level += 1;
    }
    Ok((Coloring { colors }, trace))
}

/// Consecutive blocks of `ceil(n^(1-eps))` vertices, each 3-coloured with fresh colours.
pub fn partition_baseline(g: &Graph, epsilon: f64, oracle: &dyn ThreeColorOracle) -> Result<Coloring> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return arg("need 0 < epsilon < 1");
    }
    let n = g.n();
    let block = ceil_snap((n as f64).powf(1.0 - epsilon)).max(1);
    let mut colors = vec![0; n];
    for (b, start) in (0..n).step_by(block).enumerate() {
        let xs: Vec<usize> = (start..(start + block).min(n)).collect();
        let cs = oracle.three_color(g, &xs).ok_or_else(|| Error::Promise(format!("oracle refused block {}", b)))?;
        for (i, &x) in xs.iter().enumerate() {
            colors[x] = 3 * b + cs[i];
        }
    }
    Ok(Coloring { colors })
}

/// `Q(m) = 3 + Q(m - ceil(C m^(1-eps)))` while `m > C m^(1-eps)`, else 3.
pub fn color_recurrence_q(n: usize, epsilon: f64, c: f64) -> usize {
    let mut m = n;
    let mut q = 0;
    loop {
        let t = c * (m as f64).powf(1.0 - epsilon);
        if m as f64 <= t + 1e-9 {
            return q + 3;
        }
        q += 3;
        m -= ceil_snap(t).min(m);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &e).unwrap()
    }

    #[test]
    fn two_coloring() {
        assert_eq!(two_color(&cyc(4)).unwrap().palette_size(), 2);
        assert!(two_color(&cyc(5)).is_none());
        assert_eq!(two_color(&Graph::new(0, &[]).unwrap()).unwrap().colors.len(), 0);
    }

    fn brute_list(g: &Graph, lists: &[Vec<usize>]) -> bool {
        fn go(g: &Graph, lists: &[Vec<usize>], c: &mut Vec<usize>) -> bool {
            let v = c.len();
            if v == g.n() {
                return validate_coloring(g, &Coloring { colors: c.clone() });
            }
            for &x in &lists[v] {
                c.push(x);
                if go(g, lists, c) {
                    return true;
                }
                c.pop();
            }
            false
        }
        go(g, lists, &mut Vec::new())
    }

    #[test]
    fn list_coloring_examples() {
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let c = list_two_color(&p3, &vec![vec![0, 1]; 3]).unwrap();
        assert_eq!(c.colors[0], c.colors[2]);
        assert_ne!(c.colors[0], c.colors[1]);
        assert!(list_two_color(&cyc(3), &vec![vec![0, 1]; 3]).is_none());
        let c = list_two_color(&p3, &[vec![2], vec![0], vec![1]]).unwrap();
        assert_eq!(c.colors, vec![2, 0, 1]);
        assert!(list_two_color(&p3, &[vec![], vec![0], vec![1]]).is_none());
    }

    #[test]
    fn list_coloring_matches_brute_force() {
        let mut rng = rng_for(11, 0);
        for _ in 0..300 {
            let n = rng.gen_range(1..8);
            let mut e = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.4) {
                        e.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &e).unwrap();
            let lists: Vec<Vec<usize>> = (0..n)
                .map(|_| {
                    let a = rng.gen_range(0..3);
                    if rng.gen_bool(0.3) {
                        vec![a]
                    } else {
                        vec![a, (a + 1 + rng.gen_range(0..2)) % 3]
                    }
                })
                .collect();
            let got = list_two_color(&g, &lists);
            assert_eq!(got.is_some(), brute_list(&g, &lists));
            if let Some(c) = got {
                assert!(validate_coloring(&g, &c));
                assert!((0..n).all(|v| lists[v].contains(&c.colors[v])));
            }
        }
    }

    #[test]
    fn wigderson_small() {
        let tri = cyc(3);
        let c = wigderson_color(&tri, &BacktrackOracle::default()).unwrap();
        assert!(validate_coloring(&tri, &c));
        assert!(c.palette_size() <= 6);
        let empty = Graph::new(5, &[]).unwrap();
        assert_eq!(wigderson_color(&empty, &BacktrackOracle::default()).unwrap().palette_size(), 1);
        let (g, planted) = planted_three_colorable(100, 0.2, 4);
        let c = wigderson_color(&g, &PlantedOracle { colors: planted }).unwrap();
        assert!(validate_coloring(&g, &c));
        assert!(c.palette_size() <= 30);
    }

    #[test]
    fn recurrence_values() {
        assert_eq!(color_recurrence_q(16, 0.5, 1.0), 18);
        assert_eq!(color_recurrence_q(3, 0.3, 2.0), 3);
        let mut prev = 0;
        for n in 0..400 {
            let q = color_recurrence_q(n, 0.3, 2.0);
            assert!(q >= prev);
            prev = q;
        }
    }

    #[test]
    fn baseline_and_general() {
        let (g, planted) = planted_three_colorable(16, 0.5, 2);
        let oracle = PlantedOracle { colors: planted };
        let c = partition_baseline(&g, 0.5, &oracle).unwrap();
        assert!(validate_coloring(&g, &c) && c.palette_size() <= 12);
        let (g, planted) = planted_three_colorable(200, 0.1, 7);
        let oracle = PlantedOracle { colors: planted };
        let cfg = GeneralizedConfig::default();
        let (c, trace) = generalized_color(&g, &cfg, &oracle).unwrap();
        assert!(validate_coloring(&g, &c));
        if trace.iter().all(|t| t.case != LevelCase::Fallback) {
            assert!(c.palette_size() <= color_recurrence_q(200, cfg.epsilon, cfg.c));
        }
        let e = Graph::new(10, &[]).unwrap();
        let (c, _) = generalized_color(&e, &cfg, &BacktrackOracle::default()).unwrap();
        assert!(c.palette_size() <= 3);
    }

    #[test]
    fn structure_round_trip() {
        let g = cyc(5);
        assert_eq!(Graph::from_structure(&g.to_structure()).unwrap(), g);
        assert!(!validate_coloring(&g, &Coloring { colors: vec![0, 0, 1, 0, 1] }));
    }
}
