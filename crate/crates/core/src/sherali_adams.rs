//! The Sherali-Adams relaxation SA^k of `Hom(I, S)` as an exact rational LP.
//!
//! Variables are `x_f` for partial maps `f: I -> S` on at most `k` elements,
//! and `lambda_{f,R,u,t}` for maps `f` on at most `k-1` elements, tuples
//! `u in R^I` and `t in R^S` that repeat wherever `u` repeats. The lambda variables linearize the requirement
//! that each constraint's local distribution is supported on `R^S`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::consistency::PartialMap;
use crate::error::{arg, parse_err, Error, Result};
use crate::format::{format_rational, parse_rational};
use crate::ratlp::{LpOutcome, RationalLp, Rel, VarId};
use crate::structure::{exactly, Elem, Structure};

type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaKey {
    pub f: PartialMap,
    pub rel: usize,
    pub tuple: usize,
    pub target: usize,
}

/// A point of SA^k, with zero entries omitted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SaSolution {
    pub level: usize,
    pub x: BTreeMap<PartialMap, Q>,
    pub lambda: BTreeMap<LambdaKey, Q>,
}

impl SaSolution {
    pub fn x_value(&self, f: &PartialMap) -> Q {
        self.x.get(f).cloned().unwrap_or_else(Q::zero)
    }

    pub fn lambda_value(&self, key: &LambdaKey) -> Q {
        self.lambda.get(key).cloned().unwrap_or_else(Q::zero)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SaLimits {
    pub max_vars: usize,
}

impl Default for SaLimits {
    fn default() -> Self {
        SaLimits { max_vars: 2_000_000 }
    }
}

pub fn x_key(f: &PartialMap) -> String {
    let body: Vec<String> = f.pairs().iter().map(|(x, a)| format!("{}:{}", x, a)).collect();
    format!("x{{{}}}", body.join(","))
}

pub fn lambda_key(k: &LambdaKey) -> String {
    let body: Vec<String> = k.f.pairs().iter().map(|(x, a)| format!("{}:{}", x, a)).collect();
    format!("l{{{}}}[{},{},{}]", body.join(","), k.rel, k.tuple, k.target)
}

fn parse_map_body(body: &str) -> Option<PartialMap> {
    if body.is_empty() {
        return Some(PartialMap::empty());
    }
    let mut pairs = Vec::new();
    for p in body.split(',') {
        let (x, a) = p.split_once(':')?;
        pairs.push((x.parse().ok()?, a.parse().ok()?));
    }
    PartialMap::new(pairs).ok()
}

enum Key {
    X(PartialMap),
    L(LambdaKey),
}

fn parse_key(key: &str) -> Option<Key> {
    if let Some(rest) = key.strip_prefix("x{") {
        return parse_map_body(rest.strip_suffix('}')?).map(Key::X);
    }
    let rest = key.strip_prefix("l{")?;
    let (body, idx) = rest.split_once("}[")?;
    let idx: Vec<usize> = idx.strip_suffix(']')?.split(',').map(|s| s.parse().ok()).collect::<Option<_>>()?;
    let [rel, tuple, target] = idx[..] else { return None };
    Some(Key::L(LambdaKey { f: parse_map_body(body)?, rel, tuple, target }))
}

/// All partial maps `[n] -> [p]` on at most `k` elements, by size then lexicographically.
pub fn all_partial_maps(n: usize, p: usize, k: usize, limit: usize) -> Result<Vec<PartialMap>> {
    let k = k.min(n);
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for j in 0..=k {
        if j > 0 {
            binom = binom * (n - j + 1) as u128 / j as u128;
        }
        total = total.saturating_add(binom.saturating_mul((p as u128).saturating_pow(j as u32)));
    }
    if total > limit as u128 {
        return Err(Error::Budget(format!("SA index set has {} maps (limit {})", total, limit)));
    }
    let mut out = vec![PartialMap::empty()];
    let mut start = 0;
    for _ in 0..k {
        let end = out.len();
        for idx in start..end {
            let h = out[idx].clone();
            let lo = h.pairs().last().map_or(0, |q| q.0 + 1);
            for x in lo..n as Elem {
                for a in 0..p as Elem {
                    out.push(h.extend(x, a).unwrap());
                }
            }
        }
        start = end;
    }
    Ok(out)
}

/// The SA^k LP together with its variable index.
pub struct SaLp {
    pub level: usize,
    pub lp: RationalLp,
    x_vars: HashMap<PartialMap, VarId>,
    lambdas: Vec<(LambdaKey, VarId)>,
}

impl SaLp {
    pub fn build(i: &Structure, s: &Structure, k: usize) -> Result<SaLp> {
        Self::build_with(i, s, k, SaLimits::default())
    }

    pub fn build_with(i: &Structure, s: &Structure, k: usize, limits: SaLimits) -> Result<SaLp> {
        if k == 0 {
            return arg("level must be at least 1");
        }
        if i.signature() != s.signature() {
            return arg("instance and template have different signatures");
        }
        let n = i.domain_size();
        let p = s.domain_size();
        let maps = all_partial_maps(n, p, k, limits.max_vars)?;
        let per_map: usize = i.relations().iter().zip(s.relations()).map(|(a, b)| a.len() * b.len()).sum();
        let small = maps.iter().take_while(|m| m.len() < k).count();
        if maps.len() + small * per_map > limits.max_vars {
            return Err(Error::Budget(format!("SA LP would have {} variables (limit {})", maps.len() + small * per_map, limits.max_vars)));
        }
        let mut lp = RationalLp::new();
        let zero = Q::zero();
        let one = Q::one();
        let mut x_vars = HashMap::with_capacity(maps.len());
        for f in &maps {
            let id = lp.add_var(x_key(f), Some(zero.clone()), Some(one.clone()))?;
            x_vars.insert(f.clone(), id);
        }
        // x_{} = 1
        lp.add_constraint(vec![(x_vars[&PartialMap::empty()], one.clone())], Rel::Eq, one.clone())?;
        // marginalization
        for f in maps.iter().take(small) {
            let xf = x_vars[f];
            for u in 0..n as Elem {
                if f.contains_key(u) {
                    continue;
                }
                let mut row: Vec<(VarId, Q)> = (0..p as Elem).map(|a| (x_vars[&f.extend(u, a).unwrap()], one.clone())).collect();
                row.push((xf, -one.clone()));
                lp.add_constraint(row, Rel::Eq, zero.clone())?;
            }
        }
        // local distributions on constraints
        let mut lambdas = Vec::with_capacity(small * per_map);
        for f in maps.iter().take(small) {
            let xf = x_vars[f];
            for (ri, (rel_i, rel_s)) in i.relations().iter().zip(s.relations()).enumerate() {
                for (ti, u) in rel_i.iter().enumerate() {
                    // targets must agree wherever the instance tuple repeats an element
                    let ids: Vec<(usize, VarId)> = (0..rel_s.len())
                        .filter(|&target| {
                            let t = rel_s.tuple(target);
                            (0..u.len()).all(|a| (0..a).all(|b| u[a] != u[b] || t[a] == t[b]))
                        })
                        .map(|target| {
                            let key = LambdaKey { f: f.clone(), rel: ri, tuple: ti, target };
                            let id = lp.add_var(lambda_key(&key), Some(zero.clone()), None)?;
                            lambdas.push((key, id));
                            Ok((target, id))
                        })
                        .collect::<Result<_>>()?;
                    let mut row: Vec<(VarId, Q)> = ids.iter().map(|&(_, v)| (v, one.clone())).collect();
                    row.push((xf, -one.clone()));
                    lp.add_constraint(row, Rel::Eq, zero.clone())?;
                    for (pos, &var) in u.iter().enumerate() {
                        for a in 0..p as Elem {
                            let mut row: Vec<(VarId, Q)> =
                                ids.iter().filter(|(t, _)| rel_s.tuple(*t)[pos] == a).map(|&(_, v)| (v, -one.clone())).collect();
                            match f.get(var) {
                                Some(b) if b == a => row.push((xf, one.clone())),
                                Some(_) => {}
                                None => row.push((x_vars[&f.extend(var, a).unwrap()], one.clone())),
                            }
                            lp.add_constraint(row, Rel::Eq, zero.clone())?;
                        }
                    }
                }
            }
        }
        Ok(SaLp { level: k, lp, x_vars, lambdas })
    }

    pub fn num_x_vars(&self) -> usize {
        self.x_vars.len()
    }

    pub fn num_lambda_vars(&self) -> usize {
        self.lambdas.len()
    }

    pub fn solution_from_point(&self, point: &[Q]) -> SaSolution {
        let mut sol = SaSolution { level: self.level, ..Default::default() };
        for (f, &id) in &self.x_vars {
            if !point[id].is_zero() {
                sol.x.insert(f.clone(), point[id].clone());
            }
        }
        for (key, id) in &self.lambdas {
            if !point[*id].is_zero() {
                sol.lambda.insert(key.clone(), point[*id].clone());
            }
        }
        sol
    }

    /// The LP point of `sol`; `None` if it names variables outside this LP.
    pub fn point_from_solution(&self, sol: &SaSolution) -> Option<Vec<Q>> {
        let mut point = vec![Q::zero(); self.lp.num_vars()];
        for (f, v) in &sol.x {
            point[*self.x_vars.get(f)?] = v.clone();
        }
        for (k, v) in &sol.lambda {
            point[self.lp.var(&lambda_key(k))?] = v.clone();
        }
        Some(point)
    }

    /// Exact feasibility check of a candidate solution.
    pub fn check(&self, sol: &SaSolution) -> bool {
        sol.level == self.level && self.point_from_solution(sol).is_some_and(|p| self.lp.check_point(&p))
    }

    pub fn solve(&self) -> Result<Option<SaSolution>> {
        Ok(match self.lp.solve()? {
            LpOutcome::Feasible(p) => Some(self.solution_from_point(&p)),
            LpOutcome::Infeasible => None,
        })
    }
}

/// A feasible point of SA^k, if any.
pub fn solve_sa(i: &Structure, s: &Structure, k: usize) -> Result<Option<SaSolution>> {
    SaLp::build(i, s, k)?.solve()
}

/// Whether SA^k for `(I, S)` is feasible.
pub fn leq_sa(i: &Structure, s: &Structure, k: usize) -> Result<bool> {
    Ok(solve_sa(i, s, k)?.is_some())
}

/// Conditions a level-`k` solution on `x_{v -> b}`, producing a level `k-1`
/// solution in which `v -> b` has value 1.
pub fn condition_on(sol: &SaSolution, v: Elem, b: Elem) -> Result<SaSolution> {
    if sol.level < 2 {
        return arg("conditioning needs a solution of level at least 2");
    }
    let vb = PartialMap::new(vec![(v, b)])?;
    let d = sol.x_value(&vb);
    if d.is_zero() {
        return arg(format!("x_{{{}:{}}} is zero", v, b));
    }
    let mut out = SaSolution { level: sol.level - 1, ..Default::default() };
    for (f, val) in &sol.x {
        if f.get(v) != Some(b) {
            continue;
        }
        // both g = f and g = f - v satisfy g ∪ {v -> b} = f
        let q = val / &d;
        if f.len() < sol.level {
            out.x.insert(f.clone(), q.clone());
        }
        out.x.insert(f.remove(v), q);
    }
    for (key, val) in &sol.lambda {
        if key.f.get(v) != Some(b) {
            continue;
        }
        let q = val / &d;
        if key.f.len() + 1 < sol.level {
            out.lambda.insert(key.clone(), q.clone());
        }
        out.lambda.insert(LambdaKey { f: key.f.remove(v), ..key.clone() }, q);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedRecord {
    pub v: Elem,
    pub b: Elem,
    pub feasible: bool,
}

/// SA^1 with the extra equation `x_{v -> b} = 1`, for every pair `(v, b)`.
pub fn augmented_sa1_check(i: &Structure, s: &Structure) -> Result<Vec<AugmentedRecord>> {
    let base = SaLp::build(i, s, 1)?;
    let mut out = Vec::new();
    for v in 0..i.domain_size() as Elem {
        for b in 0..s.domain_size() as Elem {
            let mut lp = base.lp.clone();
            let id = base.x_vars[&PartialMap::new(vec![(v, b)])?];
            lp.add_constraint(vec![(id, Q::one())], Rel::Eq, Q::one())?;
            out.push(AugmentedRecord { v, b, feasible: lp.solve()?.is_feasible() });
        }
    }
    Ok(out)
}

/// [`augmented_sa1_check`] against the template `s`-in-`r`.
pub fn augmented_sa1_check_exactly(i: &Structure, s: usize, r: usize) -> Result<Vec<AugmentedRecord>> {
    augmented_sa1_check(i, &exactly(s, r))
}

/// `key = p/q` lines for the nonzero entries.
pub fn write_certificate(sol: &SaSolution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# sa level={}", sol.level);
    for (f, v) in &sol.x {
        let _ = writeln!(out, "{} = {}", x_key(f), format_rational(v));
    }
    for (k, v) in &sol.lambda {
        let _ = writeln!(out, "{} = {}", lambda_key(k), format_rational(v));
    }
    out
}

pub fn parse_certificate(text: &str) -> Result<SaSolution> {
    let mut sol = SaSolution::default();
    let mut level = None;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let line = line.trim();
        if let Some(l) = line.strip_prefix("# sa level=") {
            match l.parse() {
                Ok(l) => level = Some(l),
                Err(_) => return parse_err(ln, "bad level"),
            }
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once(" = ") else {
            return parse_err(ln, "expected `key = p/q`");
        };
        let Some(v) = parse_rational(v) else {
            return parse_err(ln, format!("bad rational `{}`", v));
        };
        match parse_key(k.trim()) {
            Some(Key::X(f)) => {
                sol.x.insert(f, v);
            }
            Some(Key::L(l)) => {
                sol.lambda.insert(l, v);
            }
            None => return parse_err(ln, format!("bad key `{}`", k)),
        }
    }
    match level {
        Some(l) => sol.level = l,
        None => return parse_err(1, "missing `# sa level=` header"),
    }
    Ok(sol)
}
