//! Greatest k-strategies via a restriction/extension fixpoint.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;

use crate::error::{arg, parse_err, Error, Result};
use crate::hom::hom_search;
use crate::structure::{Elem, Structure};

/// A finite partial map, stored as `(element, value)` pairs sorted by element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PartialMap(Vec<(Elem, Elem)>);

impl PartialMap {
    pub fn new(mut pairs: Vec<(Elem, Elem)>) -> Result<Self> {
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return arg("partial map assigns an element twice");
        }
        Ok(PartialMap(pairs))
    }

    pub fn empty() -> Self {
        PartialMap(Vec::new())
    }

    pub fn pairs(&self) -> &[(Elem, Elem)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, x: Elem) -> Option<Elem> {
        self.0.binary_search_by_key(&x, |p| p.0).ok().map(|i| self.0[i].1)
    }

    pub fn contains_key(&self, x: Elem) -> bool {
        self.get(x).is_some()
    }

    /// `self ∪ {x -> a}`; `None` if `x` is mapped elsewhere.
    pub fn extend(&self, x: Elem, a: Elem) -> Option<Self> {
        match self.0.binary_search_by_key(&x, |p| p.0) {
            Ok(i) => (self.0[i].1 == a).then(|| self.clone()),
            Err(i) => {
                let mut v = self.0.clone();
                v.insert(i, (x, a));
                Some(PartialMap(v))
            }
        }
    }

    /// `self` with `x` removed from the domain.
    pub fn remove(&self, x: Elem) -> Self {
        PartialMap(self.0.iter().copied().filter(|p| p.0 != x).collect())
    }

    /// Whether the map is a partial homomorphism from `i` to `s`.
    pub fn is_partial_hom(&self, i: &Structure, s: &Structure) -> bool {
        if self.0.iter().any(|&(x, a)| x as usize >= i.domain_size() || a as usize >= s.domain_size()) {
            return false;
        }
        let mut img = Vec::new();
        i.relations().iter().zip(s.relations()).all(|(ri, rs)| {
            ri.iter().all(|t| {
                img.clear();
                for &e in t {
                    match self.get(e) {
                        Some(v) => img.push(v),
                        None => return true,
                    }
                }
                rs.contains(&img)
            })
        })
    }

    /// Formats as `x:a` tokens separated by spaces.
    pub fn to_line(&self) -> String {
        self.0.iter().map(|(x, a)| format!("{}:{}", x, a)).collect::<Vec<_>>().join(" ")
    }

    pub fn parse_line(line: &str) -> Option<Self> {
        let mut pairs = Vec::new();
        for tok in line.split_whitespace() {
            let (x, a) = tok.split_once(':')?;
            pairs.push((x.parse().ok()?, a.parse().ok()?));
        }
        PartialMap::new(pairs).ok()
    }
}

/// A set of partial homomorphisms with domains of size at most `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    k: usize,
    maps: BTreeSet<PartialMap>,
}

impl Strategy {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn maps(&self) -> &BTreeSet<PartialMap> {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn contains(&self, f: &PartialMap) -> bool {
        self.maps.contains(f)
    }

    /// Checks the strategy conditions directly: nonempty, partial homomorphisms
    /// only, closed under restriction, and every map on fewer than `k`
    /// elements extends to every further element.
    pub fn is_valid(&self, i: &Structure, s: &Structure) -> bool {
        let n = i.domain_size();
        let k = self.k.min(n);
        if self.maps.is_empty() {
            return false;
        }
        for f in &self.maps {
            if f.len() > k || !f.is_partial_hom(i, s) {
                return false;
            }
            for &(x, _) in f.pairs() {
                if !self.maps.contains(&f.remove(x)) {
                    return false;
                }
            }
            if f.len() < k {
                for x in 0..n as Elem {
                    if f.contains_key(x) {
                        continue;
                    }
                    let ok = (0..s.domain_size() as Elem).any(|a| self.maps.contains(&f.extend(x, a).unwrap()));
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// One map per line, `x:a` tokens; the empty map is a blank line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# strategy k={}", self.k);
        for f in &self.maps {
            let _ = writeln!(out, "{}", f.to_line());
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let k = match lines.next() {
            Some((_, l)) => match l.trim().strip_prefix("# strategy k=").and_then(|k| k.parse().ok()) {
                Some(k) => k,
                None => return parse_err(1, "expected `# strategy k=<k>` header"),
            },
            None => return parse_err(1, "empty strategy file"),
        };
        let mut maps = BTreeSet::new();
        for (i, l) in lines {
            match PartialMap::parse_line(l) {
                Some(f) => {
                    maps.insert(f);
                }
                None => return parse_err(i + 1, format!("bad partial map `{}`", l)),
            }
        }
        Ok(Strategy { k, maps })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ConsistencyLimits {
    /// Cap on the number of partial homomorphisms enumerated.
    pub max_maps: usize,
}

impl Default for ConsistencyLimits {
    fn default() -> Self {
        ConsistencyLimits { max_maps: 4_000_000 }
    }
}

/// Every partial homomorphism `I -> S` with domain size at most `k`, grouped by
/// size and in lexicographic order inside each group.
pub fn partial_homs(i: &Structure, s: &Structure, k: usize, max_maps: usize) -> Result<Vec<PartialMap>> {
    if i.signature() != s.signature() {
        return arg("instance and template have different signatures");
    }
    let n = i.domain_size();
    let k = k.min(n);
    // tuples containing each element, to check new maps incrementally
    let mut touching: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (ri, rel) in i.relations().iter().enumerate() {
        for ti in 0..rel.len() {
            let mut seen: Vec<Elem> = rel.tuple(ti).to_vec();
            seen.sort_unstable();
            seen.dedup();
            for e in seen {
                touching[e as usize].push((ri, ti));
            }
        }
    }
    // nullary relations and others without tuples touching any element
    let empty_ok = i.relations().iter().zip(s.relations()).all(|(ri, rs)| ri.arity() > 0 || ri.is_empty() || !rs.is_empty());
    if !empty_ok {
        return Ok(Vec::new());
    }
    let mut all = vec![PartialMap::empty()];
    let mut level_start = 0;
    let mut img = Vec::new();
    for _ in 0..k {
        let level_end = all.len();
        for idx in level_start..level_end {
            let h = all[idx].clone();
            let lo = h.pairs().last().map_or(0, |p| p.0 + 1);
            for x in lo..n as Elem {
                for a in 0..s.domain_size() as Elem {
                    let g = h.extend(x, a).unwrap();
                    let ok = touching[x as usize].iter().all(|&(ri, ti)| {
                        img.clear();
                        for &e in i.relation(ri).tuple(ti) {
                            match g.get(e) {
                                Some(v) => img.push(v),
                                None => return true,
                            }
                        }
                        s.relation(ri).contains(&img)
                    });
                    if ok {
                        if all.len() >= max_maps {
                            return Err(Error::Budget(format!("more than {} partial homomorphisms", max_maps)));
                        }
                        all.push(g);
                    }
                }
            }
        }
        level_start = level_end;
    }
    Ok(all)
}

/// The greatest k-strategy for `(I, S)`, or `None` if it is empty.
pub fn compute_strategy(i: &Structure, s: &Structure, k: usize) -> Result<Option<Strategy>> {
    compute_strategy_with(i, s, k, ConsistencyLimits::default(), None)
}

/// As [`compute_strategy`]; `shuffle` permutes the initial worklist order,
/// which must not change the result.
pub fn compute_strategy_with(
    i: &Structure,
    s: &Structure,
    k: usize,
    limits: ConsistencyLimits,
    shuffle: Option<u64>,
) -> Result<Option<Strategy>> {
    if k == 0 {
        return arg("k must be at least 1");
    }
    let n = i.domain_size();
    let p = s.domain_size();
    let keff = k.min(n);
    let maps = partial_homs(i, s, keff, limits.max_maps)?;
    if maps.is_empty() {
        return Ok(None);
    }
    let index: HashMap<&PartialMap, usize> = maps.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let small = maps.iter().take_while(|m| m.len() < keff).count();
    let mut count = vec![0u32; small * n];
    let mut alive = vec![true; maps.len()];
    for (id, h) in maps.iter().enumerate().take(small) {
        for x in 0..n as Elem {
            if h.contains_key(x) {
                continue;
            }
            let c = (0..p as Elem).filter(|&a| index.contains_key(&h.extend(x, a).unwrap())).count();
            count[id * n + x as usize] = c as u32;
        }
    }
    let mut order: Vec<usize> = (0..small).collect();
    if let Some(seed) = shuffle {
        order.shuffle(&mut crate::seed::rng_for(seed, 0));
    }
    let mut work = Vec::new();
    for id in order {
        let h = &maps[id];
        if (0..n as Elem).any(|x| !h.contains_key(x) && count[id * n + x as usize] == 0) {
            work.push(id);
        }
    }
    while let Some(id) = work.pop() {
        if !alive[id] {
            continue;
        }
        alive[id] = false;
        let g = &maps[id];
        for &(x, _) in g.pairs() {
            let h = index[&g.remove(x)];
            if alive[h] {
                let c = &mut count[h * n + x as usize];
                *c -= 1;
                if *c == 0 {
                    work.push(h);
                }
            }
        }
        if g.len() < keff {
            for y in 0..n as Elem {
                if g.contains_key(y) {
                    continue;
                }
                for a in 0..p as Elem {
                    if let Some(&e) = index.get(&g.extend(y, a).unwrap()) {
                        if alive[e] {
                            work.push(e);
                        }
                    }
                }
            }
        }
    }
    if !alive[0] {
        return Ok(None);
    }
    let maps = maps.into_iter().zip(alive).filter_map(|(m, a)| a.then_some(m)).collect();
    Ok(Some(Strategy { k, maps }))
}

/// Whether a nonempty k-strategy for `(I, S)` exists.
pub fn leq_k(i: &Structure, s: &Structure, k: usize) -> Result<bool> {
    Ok(compute_strategy(i, s, k)?.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidthRecord {
    pub index: usize,
    pub leq_k: bool,
    pub hom_to_t: bool,
    /// A strategy exists yet there is no homomorphism to `T`.
    pub counterexample: bool,
}

/// Tests k-consistency as a solver for `PCSP(S, T)` on the given instances.
pub fn width_counterexample_check(s: &Structure, t: &Structure, k: usize, instances: &[Structure]) -> Result<Vec<WidthRecord>> {
    if hom_search(s, t)?.is_none() {
        return arg("not a template: no homomorphism from S to T");
    }
    instances
        .iter()
        .enumerate()
        .map(|(index, inst)| {
            let leq = leq_k(inst, s, k)?;
            let hom = hom_search(inst, t)?.is_some();
            Ok(WidthRecord { index, leq_k: leq, hom_to_t: hom, counterexample: leq && !hom })
        })
        .collect()
}
