//! Backtracking homomorphism search with forward checking.
//!
//! Variables are assigned in ascending element order and values are tried in
//! ascending order, so the first solution found and the enumeration order are
//! canonical.

use crate::error::{arg, Error, Result};
use crate::structure::{Elem, Structure};

/// Environment variable overriding the default node budget.
pub const BUDGET_ENV: &str = "PCSP_BUDGET_NODES";
pub const DEFAULT_NODE_BUDGET: u64 = 200_000_000;

thread_local! {
    static BUDGET_OVERRIDE: std::cell::Cell<Option<u64>> = const { std::cell::Cell::new(None) };
}

/// Node budget: the current thread's override if set, else `PCSP_BUDGET_NODES`,
/// else [`DEFAULT_NODE_BUDGET`].
pub fn default_node_budget() -> u64 {
    if let Some(b) = BUDGET_OVERRIDE.with(|c| c.get()) {
        return b;
    }
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_NODE_BUDGET)
}

/// Sets (or clears) the node budget override for the current thread.
pub fn set_thread_node_budget(budget: Option<u64>) {
    BUDGET_OVERRIDE.with(|c| c.set(budget));
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub(crate) fn new(n: usize, full: bool) -> Self {
        let mut words = vec![if full { u64::MAX } else { 0 }; n.div_ceil(64)];
        if full && !n.is_multiple_of(64) {
            *words.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        Bits { words }
    }

    #[inline]
    pub(crate) fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Intersects in place; returns whether anything changed.
    fn intersect(&mut self, other: &Bits) -> bool {
        let mut changed = false;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            let n = *a & b;
            changed |= n != *a;
            *a = n;
        }
        changed
    }

    fn next_from(&self, start: usize) -> Option<usize> {
        let mut wi = start / 64;
        if wi >= self.words.len() {
            return None;
        }
        let mut w = self.words[wi] & (u64::MAX << (start % 64));
        loop {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }
}

struct Constraint {
    rel: usize,
    vars: Vec<usize>,
    // position pairs (i, j), i < j, holding the same variable
    repeats: Vec<(usize, usize)>,
}

/// Enumerates homomorphisms `source -> target`, optionally with per-element
/// candidate sets.
pub struct HomSearch<'a> {
    target: &'a Structure,
    n: usize,
    cons: Vec<Constraint>,
    var_cons: Vec<Vec<usize>>,
    domains: Vec<Bits>,
    assign: Vec<Elem>,
    next_val: Vec<usize>,
    marks: Vec<usize>,
    trail: Vec<(usize, Bits)>,
    nodes: u64,
    budget: u64,
    state: State,
    scratch: Vec<Bits>,
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum State {
    Fresh,
    Running,
    Done,
}

impl<'a> HomSearch<'a> {
    pub fn new(source: &'a Structure, target: &'a Structure) -> Result<Self> {
        if source.signature() != target.signature() {
            return arg("source and target have different signatures");
        }
        let n = source.domain_size();
        let mut cons = Vec::new();
        let mut var_cons = vec![Vec::new(); n];
        for (ri, rel) in source.relations().iter().enumerate() {
            for t in rel.iter() {
                let vars: Vec<usize> = t.iter().map(|&e| e as usize).collect();
                let mut repeats = Vec::new();
                for i in 0..vars.len() {
                    for j in i + 1..vars.len() {
                        if vars[i] == vars[j] {
                            repeats.push((i, j));
                        }
                    }
                }
                let id = cons.len();
                let mut seen: Vec<usize> = vars.clone();
                seen.sort_unstable();
                seen.dedup();
                for &v in &seen {
                    var_cons[v].push(id);
                }
                cons.push(Constraint { rel: ri, vars, repeats });
            }
        }
        let m = target.domain_size();
        let max_arity = source.signature().symbols().iter().map(|s| s.arity).max().unwrap_or(0);
        Ok(HomSearch {
            target,
            n,
            cons,
            var_cons,
            domains: vec![Bits::new(m, true); n],
            assign: vec![0; n],
            next_val: vec![0; n],
            marks: vec![0; n],
            trail: Vec::new(),
            nodes: 0,
            budget: default_node_budget(),
            state: State::Fresh,
            scratch: vec![Bits::new(m, false); max_arity],
        })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Restricts element `x` to the given candidate values.
    pub fn restrict(&mut self, x: usize, values: &[Elem]) -> Result<()> {
        if self.state != State::Fresh {
            return arg("restrictions must be set before searching");
        }
        if x >= self.n {
            return arg(format!("element {} outside source domain", x));
        }
        let mut b = Bits::new(self.target.domain_size(), false);
        for &v in values {
            if v as usize >= self.target.domain_size() {
                return arg(format!("value {} outside target domain", v));
            }
            b.insert(v as usize);
        }
        self.domains[x].intersect(&b);
        Ok(())
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (x, old) = self.trail.pop().unwrap();
            self.domains[x] = old;
        }
    }

    /// Filters the unassigned variables of constraint `ci` against the tuples of
    /// the target relation consistent with the current state. Variables `<= upto`
    /// count as assigned.
    fn revise(&mut self, ci: usize, upto: Option<usize>) -> bool {
        let c = &self.cons[ci];
        let rel = self.target.relation(c.rel);
        let assigned = |x: usize| upto.is_some_and(|u| x <= u);
        let r = c.vars.len();
        for s in self.scratch.iter_mut().take(r) {
            s.clear();
        }
        let mut any = false;
        'tuples: for t in rel.iter() {
            for (i, &x) in c.vars.iter().enumerate() {
                let v = t[i];
                if assigned(x) {
                    if self.assign[x] != v {
                        continue 'tuples;
                    }
                } else if !self.domains[x].contains(v as usize) {
                    continue 'tuples;
                }
            }
            for &(i, j) in &c.repeats {
                if t[i] != t[j] {
                    continue 'tuples;
                }
            }
            any = true;
            for (i, &x) in c.vars.iter().enumerate() {
                if !assigned(x) {
                    self.scratch[i].insert(t[i] as usize);
                }
            }
        }
        if !any {
            return false;
        }
        for i in 0..r {
            let x = self.cons[ci].vars[i];
            if assigned(x) {
                continue;
            }
            if self.domains[x].words != self.scratch[i].words {
                let old = self.domains[x].clone();
                if self.domains[x].intersect(&self.scratch[i]) {
                    self.trail.push((x, old));
                    if self.domains[x].is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn propagate_root(&mut self) -> bool {
        if self.domains.iter().any(Bits::is_empty) {
            return false;
        }
        (0..self.cons.len()).all(|ci| self.revise(ci, None))
    }

    fn propagate(&mut self, v: usize) -> bool {
        for k in 0..self.var_cons[v].len() {
            let ci = self.var_cons[v][k];
            if !self.revise(ci, Some(v)) {
                return false;
            }
        }
        true
    }

    /// The next homomorphism in canonical order, as a map indexed by element.
    pub fn next_hom(&mut self) -> Result<Option<Vec<Elem>>> {
        let mut depth;
        match self.state {
            State::Done => return Ok(None),
            State::Fresh => {
                self.state = State::Running;
                if self.n > 0 && self.target.domain_size() == 0 {
                    self.state = State::Done;
                    return Ok(None);
                }
                if !self.propagate_root() {
                    self.state = State::Done;
                    return Ok(None);
                }
                if self.n == 0 {
                    self.state = State::Done;
                    return Ok(Some(Vec::new()));
                }
                depth = 0;
                self.next_val[0] = 0;
            }
            State::Running => {
                depth = self.n - 1;
                self.undo_to(self.marks[depth]);
            }
        }
        loop {
            let v = depth;
            match self.domains[v].next_from(self.next_val[v]) {
                None => {
                    if v == 0 {
                        self.state = State::Done;
                        return Ok(None);
                    }
                    depth = v - 1;
                    self.undo_to(self.marks[depth]);
                }
                Some(a) => {
                    self.next_val[v] = a + 1;
                    self.nodes += 1;
                    if self.nodes > self.budget {
                        self.state = State::Done;
                        return Err(Error::Budget(format!("homomorphism search exceeded {} nodes", self.budget)));
                    }
                    self.marks[v] = self.trail.len();
                    self.assign[v] = a as Elem;
                    if self.propagate(v) {
                        if v + 1 == self.n {
                            return Ok(Some(self.assign.clone()));
                        }
                        depth = v + 1;
                        self.next_val[depth] = 0;
                    } else {
                        self.undo_to(self.marks[v]);
                    }
                }
            }
        }
    }

    /// Collects every homomorphism, failing if more than `limit` exist.
    pub fn collect_all(mut self, limit: usize) -> Result<Vec<Vec<Elem>>> {
        let mut out = Vec::new();
        while let Some(h) = self.next_hom()? {
            if out.len() == limit {
                return Err(Error::Budget(format!("more than {} homomorphisms", limit)));
            }
            out.push(h);
        }
        Ok(out)
    }
}

/// First homomorphism `source -> target` in canonical order, if any.
pub fn hom_search(source: &Structure, target: &Structure) -> Result<Option<Vec<Elem>>> {
    HomSearch::new(source, target)?.next_hom()
}

pub fn hom_search_with_budget(source: &Structure, target: &Structure, budget: u64) -> Result<Option<Vec<Elem>>> {
    HomSearch::new(source, target)?.with_budget(budget).next_hom()
}
