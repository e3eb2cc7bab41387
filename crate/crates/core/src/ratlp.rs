//! Exact rational LP feasibility.
//!
//! Bound propagation presolve followed by a sparse phase-I simplex with
//! Dantzig pricing. Ties in the ratio test are broken lexicographically on the
//! rows of the inverse basis, which rules out cycling.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{arg, Error, Result};
use crate::rat::Rat;

pub type VarId = usize;
type Q = BigRational;
/// Sparse row, relation and right-hand side before conversion to standard form.
type Row = (Vec<(usize, Q)>, Rel, Q);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

impl Rel {
    fn holds(self, lhs: &Q, rhs: &Q) -> bool {
        match self {
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ge => lhs >= rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<(VarId, Q)>,
    pub rel: Rel,
    pub rhs: Q,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Feasible(Vec<Q>),
    Infeasible,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveStats {
    pub presolve_fixed: usize,
    pub rows: usize,
    pub cols: usize,
    pub pivots: usize,
}

/// A feasibility LP over named variables with optional bounds.
#[derive(Clone, Debug, Default)]
pub struct RationalLp {
    keys: Vec<String>,
    index: HashMap<String, VarId>,
    lower: Vec<Option<Q>>,
    upper: Vec<Option<Q>>,
    rows: Vec<Constraint>,
    max_pivots: Option<usize>,
}

impl RationalLp {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, key: impl Into<String>, lower: Option<Q>, upper: Option<Q>) -> Result<VarId> {
        let key = key.into();
        if self.index.contains_key(&key) {
            return arg(format!("duplicate variable key {}", key));
        }
        let id = self.keys.len();
        self.index.insert(key.clone(), id);
        self.keys.push(key);
        self.lower.push(lower);
        self.upper.push(upper);
        Ok(id)
    }

    pub fn var(&self, key: &str) -> Option<VarId> {
        self.index.get(key).copied()
    }

    pub fn key(&self, id: VarId) -> &str {
        &self.keys[id]
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn num_vars(&self) -> usize {
        self.keys.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn bounds(&self, id: VarId) -> (Option<&Q>, Option<&Q>) {
        (self.lower[id].as_ref(), self.upper[id].as_ref())
    }

    pub fn set_max_pivots(&mut self, n: usize) {
        self.max_pivots = Some(n);
    }

    /// Adds `sum coeffs rel rhs`; repeated variables are merged.
    pub fn add_constraint(&mut self, coeffs: Vec<(VarId, Q)>, rel: Rel, rhs: Q) -> Result<()> {
        let mut merged: Vec<(VarId, Q)> = Vec::with_capacity(coeffs.len());
        let mut sorted = coeffs;
        sorted.sort_by_key(|c| c.0);
        for (v, c) in sorted {
            if v >= self.keys.len() {
                return arg(format!("unknown variable id {}", v));
            }
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|c| !c.1.is_zero());
        self.rows.push(Constraint { coeffs: merged, rel, rhs });
        Ok(())
    }

    /// Exact check of a candidate point against all constraints and bounds.
    pub fn check_point(&self, x: &[Q]) -> bool {
        if x.len() != self.keys.len() {
            return false;
        }
        for (i, v) in x.iter().enumerate() {
            if self.lower[i].as_ref().is_some_and(|l| v < l) || self.upper[i].as_ref().is_some_and(|u| v > u) {
                return false;
            }
        }
        self.rows.iter().all(|r| {
            let lhs: Q = r.coeffs.iter().map(|(v, c)| c * &x[*v]).sum();
            r.rel.holds(&lhs, &r.rhs)
        })
    }

    /// Human-readable dump: `min 0 subject to:` then one constraint per line.
    pub fn dump(&self) -> String {
        let mut out = String::from("min 0 subject to:\n");
        for r in &self.rows {
            let terms: Vec<String> = r.coeffs.iter().map(|(v, c)| format!("{}*{}", c, self.keys[*v])).collect();
            let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            let _ = writeln!(out, "{} {} {}", lhs, r.rel.symbol(), r.rhs);
        }
        out.push_str("bounds:\n");
        for (i, k) in self.keys.iter().enumerate() {
            let lo = self.lower[i].as_ref().map_or("-inf".to_string(), |v| v.to_string());
            let hi = self.upper[i].as_ref().map_or("+inf".to_string(), |v| v.to_string());
            let _ = writeln!(out, "{} <= {} <= {}", lo, k, hi);
        }
        out
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        self.solve_with_stats().map(|r| r.0)
    }

    pub fn solve_with_stats(&self) -> Result<(LpOutcome, SolveStats)> {
        let mut stats = SolveStats::default();
        let mut pre = match Presolve::run(self) {
            Some(p) => p,
            None => return Ok((LpOutcome::Infeasible, stats)),
        };
        stats.presolve_fixed = pre.fixed.iter().filter(|f| f.is_some()).count();
        let (mut tab, cols) = pre.standard_form(self);
        stats.rows = tab.rows.len();
        stats.cols = tab.ncols;
        let feasible = tab.phase_one(self.max_pivots, &mut stats.pivots)?;
        if !feasible {
            return Ok((LpOutcome::Infeasible, stats));
        }
        let y = tab.values();
        for (j, col) in cols.iter().enumerate() {
            let v = &y[j];
            if v.is_zero() && col.sign > 0 && col.offset.is_zero() {
                continue;
            }
            let x = pre.fixed[col.var].get_or_insert_with(Q::zero);
            // each original variable gets its offset once, from its first column
            if col.first {
                *x += &col.offset;
            }
            if col.sign > 0 {
                *x += v;
            } else {
                *x -= v;
            }
        }
        let x: Vec<Q> = pre.fixed.into_iter().map(|v| v.unwrap_or_else(Q::zero)).collect();
        if !self.check_point(&x) {
            return Err(Error::Argument("internal error: simplex point fails verification".into()));
        }
        Ok((LpOutcome::Feasible(x), stats))
    }
}

struct Presolve {
    lo: Vec<Option<Q>>,
    hi: Vec<Option<Q>>,
    fixed: Vec<Option<Q>>,
    active: Vec<bool>,
}

struct Column {
    var: VarId,
    sign: i8,
    offset: Q,
    first: bool,
}

impl Presolve {
    /// Bound propagation; `None` means infeasibility was detected.
    fn run(lp: &RationalLp) -> Option<Presolve> {
        let n = lp.keys.len();
        let mut p = Presolve { lo: lp.lower.clone(), hi: lp.upper.clone(), fixed: vec![None; n], active: vec![true; lp.rows.len()] };
        let mut var_rows: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ri, r) in lp.rows.iter().enumerate() {
            for (v, _) in &r.coeffs {
                var_rows[*v].push(ri);
            }
        }
        for v in 0..n {
            match (&p.lo[v], &p.hi[v]) {
                (Some(l), Some(h)) if l > h => return None,
                (Some(l), Some(h)) if l == h => p.fixed[v] = Some(l.clone()),
                _ => {}
            }
        }
        let mut queue: VecDeque<usize> = (0..lp.rows.len()).collect();
        let mut queued = vec![true; lp.rows.len()];
        while let Some(ri) = queue.pop_front() {
            queued[ri] = false;
            if !p.active[ri] {
                continue;
            }
            let row = &lp.rows[ri];
            let mut rhs = row.rhs.clone();
            let mut free: Vec<(VarId, &Q)> = Vec::new();
            for (v, c) in &row.coeffs {
                match &p.fixed[*v] {
                    Some(x) => rhs -= c * x,
                    None => free.push((*v, c)),
                }
            }
            let mut touched: Vec<VarId> = Vec::new();
            if free.is_empty() {
                if !row.rel.holds(&Q::zero(), &rhs) {
                    return None;
                }
                p.active[ri] = false;
                continue;
            }
            if free.len() == 1 {
                let (v, c) = free[0];
                let val = &rhs / c;
                let rel = if c.is_negative() { flip(row.rel) } else { row.rel };
                match rel {
                    Rel::Eq => {
                        if !p.fix(v, val) {
                            return None;
                        }
                    }
                    Rel::Le => {
                        if p.hi[v].as_ref().is_none_or(|h| &val < h) {
                            p.hi[v] = Some(val);
                        }
                    }
                    Rel::Ge => {
                        if p.lo[v].as_ref().is_none_or(|l| &val > l) {
                            p.lo[v] = Some(val);
                        }
                    }
                }
                if !p.settle(v) {
                    return None;
                }
                p.active[ri] = false;
                touched.push(v);
            } else {
                // activity range of the free part
                let mut min_act = Some(Q::zero());
                let mut max_act = Some(Q::zero());
                for &(v, c) in &free {
                    let (for_min, for_max) = if c.is_positive() { (&p.lo[v], &p.hi[v]) } else { (&p.hi[v], &p.lo[v]) };
                    min_act = match (min_act, for_min) {
                        (Some(a), Some(b)) => Some(a + c * b),
                        _ => None,
                    };
                    max_act = match (max_act, for_max) {
                        (Some(a), Some(b)) => Some(a + c * b),
                        _ => None,
                    };
                }
                let below = min_act.as_ref().is_some_and(|m| m > &rhs);
                let above = max_act.as_ref().is_some_and(|m| m < &rhs);
                let at_min = min_act.as_ref().is_some_and(|m| m == &rhs);
                let at_max = max_act.as_ref().is_some_and(|m| m == &rhs);
                let (infeasible, fix_min, fix_max, redundant) = match row.rel {
                    Rel::Eq => (below || above, at_min, at_max && !at_min, false),
                    Rel::Le => (below, at_min, false, max_act.as_ref().is_some_and(|m| m <= &rhs)),
                    Rel::Ge => (above, false, at_max, min_act.as_ref().is_some_and(|m| m >= &rhs)),
                };
                if infeasible {
                    return None;
                }
                if fix_min || fix_max {
                    for &(v, c) in &free {
                        let take_lo = c.is_positive() == fix_min;
                        let val = if take_lo { p.lo[v].clone() } else { p.hi[v].clone() };
                        if !p.fix(v, val.expect("finite activity bound")) {
                            return None;
                        }
                        touched.push(v);
                    }
                    p.active[ri] = false;
                } else if redundant {
                    p.active[ri] = false;
                }
            }
            for v in touched {
                for &r2 in &var_rows[v] {
                    if p.active[r2] && !queued[r2] {
                        queued[r2] = true;
                        queue.push_back(r2);
                    }
                }
            }
        }
        Some(p)
    }

    fn fix(&mut self, v: VarId, val: Q) -> bool {
        if self.lo[v].as_ref().is_some_and(|l| &val < l) || self.hi[v].as_ref().is_some_and(|h| &val > h) {
            return false;
        }
        self.lo[v] = Some(val.clone());
        self.hi[v] = Some(val.clone());
        self.fixed[v] = Some(val);
        true
    }

    fn settle(&mut self, v: VarId) -> bool {
        match (&self.lo[v], &self.hi[v]) {
            (Some(l), Some(h)) if l > h => false,
            (Some(l), Some(h)) if l == h => {
                self.fixed[v] = Some(l.clone());
                true
            }
            _ => true,
        }
    }

    /// Rows `A y = b`, `b >= 0`, `y >= 0`, over the unfixed variables.
    fn standard_form(&self, lp: &RationalLp) -> (Tableau, Vec<Column>) {
        let mut cols: Vec<Column> = Vec::new();
        let mut first_col: Vec<Option<usize>> = vec![None; lp.keys.len()];
        let mut bound_rows: Vec<(usize, Q)> = Vec::new();
        for (v, fc) in first_col.iter_mut().enumerate() {
            if self.fixed[v].is_some() {
                continue;
            }
            *fc = Some(cols.len());
            match (&self.lo[v], &self.hi[v]) {
                (Some(l), h) => {
                    cols.push(Column { var: v, sign: 1, offset: l.clone(), first: true });
                    if let Some(h) = h {
                        bound_rows.push((cols.len() - 1, h - l));
                    }
                }
                (None, Some(h)) => cols.push(Column { var: v, sign: -1, offset: h.clone(), first: true }),
                (None, None) => {
                    cols.push(Column { var: v, sign: 1, offset: Q::zero(), first: true });
                    cols.push(Column { var: v, sign: -1, offset: Q::zero(), first: false });
                }
            }
        }
        let mut rows: Vec<Row> = Vec::new();
        for (ri, r) in lp.rows.iter().enumerate() {
            if !self.active[ri] {
                continue;
            }
            let mut rhs = r.rhs.clone();
            let mut terms = Vec::new();
            for (v, c) in &r.coeffs {
                if let Some(x) = &self.fixed[*v] {
                    rhs -= c * x;
                    continue;
                }
                let j = first_col[*v].unwrap();
                let col = &cols[j];
                rhs -= c * &col.offset;
                terms.push((j, if col.sign > 0 { c.clone() } else { -c }));
                if j + 1 < cols.len() && cols[j + 1].var == *v {
                    terms.push((j + 1, -c));
                }
            }
            rows.push((terms, r.rel, rhs));
        }
        for (j, h) in bound_rows {
            rows.push((vec![(j, Q::one())], Rel::Le, h));
        }
        (Tableau::new(cols.len(), rows), cols)
    }
}

fn flip(r: Rel) -> Rel {
    match r {
        Rel::Le => Rel::Ge,
        Rel::Ge => Rel::Le,
        Rel::Eq => Rel::Eq,
    }
}

type SparseRow = Vec<(usize, Rat)>;

struct Tableau {
    ncols: usize,
    structural: usize,
    first_artificial: usize,
    rows: Vec<SparseRow>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    col_rows: Vec<Vec<usize>>,
    reduced: Vec<Rat>,
    objective: Rat,
    retired: Vec<bool>,
    // row whose initial basic column is `j`, or usize::MAX
    init_pos: Vec<usize>,
}

fn get(row: &SparseRow, col: usize) -> Option<&Rat> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

impl Tableau {
    fn new(structural: usize, rows: Vec<Row>) -> Self {
        let slacks = rows.iter().filter(|r| r.1 != Rel::Eq).count();
        let mut next_slack = structural;
        let first_artificial = structural + slacks;
        let mut next_art = first_artificial;
        let mut out_rows = Vec::with_capacity(rows.len());
        let mut rhs_v = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        for (terms, rel, rhs) in rows {
            let mut terms: SparseRow = terms.iter().map(|(j, c)| (*j, Rat::from(c))).collect();
            let mut rhs = Rat::from(&rhs);
            let mut slack = None;
            match rel {
                Rel::Le => {
                    terms.push((next_slack, Rat::ONE));
                    slack = Some(next_slack);
                    next_slack += 1;
                }
                Rel::Ge => {
                    terms.push((next_slack, Rat::from(-1)));
                    slack = Some(next_slack);
                    next_slack += 1;
                }
                Rel::Eq => {}
            }
            if rhs.is_negative() {
                rhs = -&rhs;
                for t in terms.iter_mut() {
                    t.1 = -&t.1;
                }
            }
            let slack_basic = slack.filter(|&s| terms.iter().any(|t| t.0 == s && t.1.is_one()));
            match slack_basic {
                Some(s) => basis.push(s),
                None => {
                    terms.push((next_art, Rat::ONE));
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            terms.sort_by_key(|t| t.0);
            out_rows.push(terms);
            rhs_v.push(rhs);
        }
        let ncols = next_art;
        let mut init_pos = vec![usize::MAX; ncols];
        for (i, &b) in basis.iter().enumerate() {
            init_pos[b] = i;
        }
        let mut col_rows = vec![Vec::new(); ncols];
        for (i, r) in out_rows.iter().enumerate() {
            for (j, _) in r {
                col_rows[*j].push(i);
            }
        }
        let mut reduced = vec![Rat::ZERO; ncols];
        let mut objective = Rat::ZERO;
        for (i, r) in out_rows.iter().enumerate() {
            if basis[i] >= first_artificial {
                objective = &objective + &rhs_v[i];
                for (j, c) in r {
                    if *j < first_artificial {
                        reduced[*j] = &reduced[*j] - c;
                    }
                }
            }
        }
        Tableau {
            ncols,
            structural,
            first_artificial,
            rows: out_rows,
            rhs: rhs_v,
            basis,
            col_rows,
            reduced,
            objective,
            retired: vec![false; ncols],
            init_pos,
        }
    }

    /// Among improving columns, the one with fewest nonzeros (fill-in
    /// control), ties to the most negative reduced cost.
    fn entering(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for j in 0..self.first_artificial {
            if self.retired[j] || !self.reduced[j].is_negative() {
                continue;
            }
            let nz = self.col_rows[j].len();
            let better = match best {
                None => true,
                Some((b, bn)) => nz < bn || (nz == bn && self.reduced[j] < self.reduced[b]),
            };
            if better {
                best = Some((j, nz));
            }
        }
        best.map(|b| b.0)
    }

    fn leaving(&mut self, q: usize) -> Option<usize> {
        let rows = &self.rows;
        self.col_rows[q].retain(|&i| get(&rows[i], q).is_some());
        self.col_rows[q].sort_unstable();
        self.col_rows[q].dedup();
        let mut best: Option<(usize, Rat)> = None;
        for &i in &self.col_rows[q] {
            let a = get(&self.rows[i], q).unwrap();
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / a;
            let better = match &best {
                None => true,
                Some((b, r)) => match ratio.cmp(r) {
                    Ordering::Less => true,
                    Ordering::Equal => self.lex_less(i, *b, q),
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|b| b.0)
    }

    /// Row `i` of `[rhs | B^-1]` scaled by `1/a_iq`, as sparse entries keyed by
    /// initial basis position.
    fn lex_row(&self, i: usize, q: usize) -> Vec<(usize, Rat)> {
        let a = get(&self.rows[i], q).unwrap();
        let mut v: Vec<(usize, Rat)> =
            self.rows[i].iter().filter(|(j, _)| self.init_pos[*j] != usize::MAX).map(|(j, c)| (self.init_pos[*j], c / a)).collect();
        v.sort_by_key(|e| e.0);
        v
    }

    fn lex_less(&self, i: usize, b: usize, q: usize) -> bool {
        let (x, y) = (self.lex_row(i, q), self.lex_row(b, q));
        let (mut p, mut r) = (0, 0);
        loop {
            let (kx, ky) = (x.get(p).map(|e| e.0), y.get(r).map(|e| e.0));
            let ord = match (kx, ky) {
                (None, None) => return false,
                (Some(a), Some(c)) if a == c => {
                    p += 1;
                    r += 1;
                    x[p - 1].1.cmp(&y[r - 1].1)
                }
                (Some(a), c) if c.is_none_or(|c| a < c) => {
                    p += 1;
                    x[p - 1].1.cmp(&Rat::ZERO)
                }
                _ => {
                    r += 1;
                    Rat::ZERO.cmp(&y[r - 1].1)
                }
            };
            if ord != Ordering::Equal {
                return ord == Ordering::Less;
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let piv = get(&self.rows[r], q).unwrap().clone();
        if !piv.is_one() {
            for e in self.rows[r].iter_mut() {
                e.1 = &e.1 / &piv;
            }
            self.rhs[r] = &self.rhs[r] / &piv;
        }
        let prow = std::mem::take(&mut self.rows[r]);
        let prhs = self.rhs[r].clone();
        let targets: Vec<usize> = self.col_rows[q].iter().copied().filter(|&i| i != r).collect();
        for i in targets {
            let Some(f) = get(&self.rows[i], q).cloned() else { continue };
            let old = std::mem::take(&mut self.rows[i]);
            let mut merged = Vec::with_capacity(old.len() + prow.len());
            let (mut a, mut b) = (old.into_iter().peekable(), prow.iter().peekable());
            loop {
                match (a.peek(), b.peek()) {
                    (Some(x), Some(y)) if x.0 < y.0 => merged.push(a.next().unwrap()),
                    (Some(x), Some(y)) if x.0 > y.0 => {
                        let y = b.next().unwrap();
                        merged.push((y.0, -&(&f * &y.1)));
                        self.col_rows[y.0].push(i);
                    }
                    (Some(_), Some(_)) => {
                        let (j, v) = a.next().unwrap();
                        let y = b.next().unwrap();
                        let nv = v.sub_mul(&f, &y.1);
                        if !nv.is_zero() {
                            merged.push((j, nv));
                        }
                    }
                    (Some(_), None) => merged.push(a.next().unwrap()),
                    (None, Some(_)) => {
                        let y = b.next().unwrap();
                        merged.push((y.0, -&(&f * &y.1)));
                        self.col_rows[y.0].push(i);
                    }
                    (None, None) => break,
                }
            }
            self.rows[i] = merged;
            self.rhs[i] = self.rhs[i].sub_mul(&f, &prhs);
        }
        let dq = self.reduced[q].clone();
        if !dq.is_zero() {
            for (j, v) in &prow {
                if *j < self.first_artificial {
                    self.reduced[*j] = self.reduced[*j].sub_mul(&dq, v);
                }
            }
            self.objective = &self.objective + &(&dq * &prhs);
        }
        self.reduced[q] = Rat::ZERO;
        let leaving = self.basis[r];
        if leaving >= self.first_artificial {
            self.retired[leaving] = true;
        }
        self.basis[r] = q;
        self.rows[r] = prow;
        self.col_rows[q] = vec![r];
    }

    /// Runs phase I; true iff the artificial objective reaches zero.
    fn phase_one(&mut self, max_pivots: Option<usize>, pivots: &mut usize) -> Result<bool> {
        loop {
            if self.objective.is_zero() {
                return Ok(true);
            }
            let Some(q) = self.entering() else {
                return Ok(false);
            };
            let Some(r) = self.leaving(q) else {
                // unbounded direction cannot occur for the bounded phase-I objective
                return Err(Error::Argument("internal error: unbounded phase-I ray".into()));
            };
            self.pivot(r, q);
            *pivots += 1;
            if max_pivots.is_some_and(|m| *pivots > m) {
                return Err(Error::Budget(format!("simplex exceeded {} pivots", max_pivots.unwrap())));
            }
        }
    }

    fn values(&self) -> Vec<Q> {
        let mut y = vec![Q::zero(); self.structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.structural {
                y[b] = self.rhs[i].to_big();
            }
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn nonneg(lp: &mut RationalLp, n: usize) -> Vec<VarId> {
        (0..n).map(|i| lp.add_var(format!("x{}", i), Some(Q::zero()), None).unwrap()).collect()
    }

    #[test]
    fn simple_feasible_and_infeasible() {
        let mut lp = RationalLp::new();
        let x = nonneg(&mut lp, 2);
        lp.add_constraint(vec![(x[0], q(1, 1)), (x[1], q(1, 1))], Rel::Eq, q(1, 1)).unwrap();
        lp.add_constraint(vec![(x[0], q(1, 1)), (x[1], q(-1, 1))], Rel::Ge, q(1, 3)).unwrap();
        match lp.solve().unwrap() {
            LpOutcome::Feasible(p) => assert!(lp.check_point(&p)),
            _ => panic!("expected feasible"),
        }
        lp.add_constraint(vec![(x[1], q(1, 1))], Rel::Ge, q(1, 2)).unwrap();
        assert_eq!(lp.solve().unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn free_and_upper_bounded_variables() {
        let mut lp = RationalLp::new();
        let a = lp.add_var("a", None, None).unwrap();
        let b = lp.add_var("b", None, Some(q(-2, 1))).unwrap();
        let c = lp.add_var("c", Some(q(1, 2)), Some(q(3, 4))).unwrap();
        lp.add_constraint(vec![(a, q(1, 1)), (b, q(1, 1)), (c, q(2, 1))], Rel::Eq, q(-5, 1)).unwrap();
        lp.add_constraint(vec![(a, q(1, 1)), (c, q(-1, 1))], Rel::Le, q(-3, 1)).unwrap();
        let LpOutcome::Feasible(p) = lp.solve().unwrap() else { panic!() };
        assert!(lp.check_point(&p));
    }

    #[test]
    fn presolve_forcing_rows() {
        let mut lp = RationalLp::new();
        let x = nonneg(&mut lp, 3);
        lp.add_constraint(vec![(x[0], q(1, 1)), (x[1], q(1, 1))], Rel::Eq, q(0, 1)).unwrap();
        lp.add_constraint(vec![(x[0], q(1, 1)), (x[2], q(1, 1))], Rel::Eq, q(1, 1)).unwrap();
        let (out, stats) = lp.solve_with_stats().unwrap();
        assert_eq!(out, LpOutcome::Feasible(vec![q(0, 1), q(0, 1), q(1, 1)]));
        assert_eq!(stats.pivots, 0);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling LP written as a feasibility problem.
        let mut lp = RationalLp::new();
        let x = nonneg(&mut lp, 4);
        let r = |v: [i64; 4], d: [i64; 4]| x.iter().zip(v.iter().zip(d)).map(|(&x, (&n, d))| (x, q(n, d))).collect::<Vec<_>>();
        lp.add_constraint(r([1, -60, -1, 9], [4, 1, 25, 1]), Rel::Le, q(0, 1)).unwrap();
        lp.add_constraint(r([1, -90, -1, 3], [2, 1, 50, 1]), Rel::Le, q(0, 1)).unwrap();
        lp.add_constraint(r([0, 0, 1, 0], [1, 1, 1, 1]), Rel::Le, q(1, 1)).unwrap();
        lp.add_constraint(r([3, -150, 1, -6], [4, 1, 50, 1]), Rel::Ge, q(1, 20)).unwrap();
        let out = lp.solve().unwrap();
        if let LpOutcome::Feasible(p) = out {
            assert!(lp.check_point(&p));
        }
    }

    #[test]
    fn dump_lists_constraints_and_bounds() {
        let mut lp = RationalLp::new();
        let x = nonneg(&mut lp, 1);
        lp.add_constraint(vec![(x[0], q(1, 2))], Rel::Le, q(1, 1)).unwrap();
        let d = lp.dump();
        assert!(d.starts_with("min 0 subject to:\n1/2*x0 <= 1\n"));
        assert!(d.contains("0 <= x0 <= +inf"));
    }

    #[test]
    fn duplicate_keys_rejected() {
        let mut lp = RationalLp::new();
        lp.add_var("a", None, None).unwrap();
        assert!(lp.add_var("a", None, None).is_err());
    }
}
