//! Operation tables, polymorphisms, minors, weak near-unanimity operations and
//! free structures of minion fragments.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{arg, parse_err, Error, Result};
use crate::hom::HomSearch;
use crate::structure::{Elem, Relation, Structure};

/// Table of an `arity`-ary function `[in_size]^arity -> [out_size]`. The entry
/// for `(x_1, ..., x_n)` sits at `sum x_i * in_size^(i-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperationTable {
    arity: usize,
    in_size: usize,
    out_size: usize,
    table: Vec<Elem>,
}

impl OperationTable {
    pub fn new(arity: usize, in_size: usize, out_size: usize, table: Vec<Elem>) -> Result<Self> {
        let len = (in_size as u128).checked_pow(arity as u32);
        if len != Some(table.len() as u128) {
            return arg(format!("table has {} entries, expected {}^{}", table.len(), in_size, arity));
        }
        if table.iter().any(|&v| v as usize >= out_size) {
            return arg("table value outside the output domain");
        }
        Ok(OperationTable { arity, in_size, out_size, table })
    }

    pub fn from_fn(arity: usize, in_size: usize, out_size: usize, mut f: impl FnMut(&[Elem]) -> Elem) -> Result<Self> {
        let mut table = Vec::with_capacity(in_size.pow(arity as u32));
        let mut args = vec![0 as Elem; arity];
        for idx in 0..in_size.pow(arity as u32) {
            let mut r = idx;
            for a in args.iter_mut() {
                *a = (r % in_size) as Elem;
                r /= in_size;
            }
            table.push(f(&args));
        }
        OperationTable::new(arity, in_size, out_size, table)
    }

    pub fn projection(arity: usize, in_size: usize, coord: usize) -> Result<Self> {
        if coord >= arity {
            return arg("projection coordinate out of range");
        }
        Self::from_fn(arity, in_size, in_size, |x| x[coord])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn in_size(&self) -> usize {
        self.in_size
    }

    pub fn out_size(&self) -> usize {
        self.out_size
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn index_of(&self, args: &[Elem]) -> usize {
        args.iter().rev().fold(0, |acc, &a| acc * self.in_size + a as usize)
    }

    pub fn eval(&self, args: &[Elem]) -> Elem {
        self.table[self.index_of(args)]
    }

    /// `op <arity> <inSize> <outSize>` followed by the flat table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "op {} {} {}", self.arity, self.in_size, self.out_size);
        let _ = writeln!(out, "{}", crate::format::join(&self.table));
        out
    }
}

/// Parses a sequence of operation tables.
pub fn parse_operations(text: &str) -> Result<Vec<OperationTable>> {
    let mut out = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim())).filter(|(_, l)| !l.is_empty());
    while let Some((ln, head)) = lines.next() {
        let w: Vec<&str> = head.split_whitespace().collect();
        let (arity, in_size, out_size): (usize, usize, usize) = match w[..] {
            ["op", a, i, o] => match (a.parse(), i.parse(), o.parse()) {
                (Ok(a), Ok(i), Ok(o)) => (a, i, o),
                _ => return parse_err(ln, "bad `op` header"),
            },
            _ => return parse_err(ln, "expected `op <arity> <inSize> <outSize>`"),
        };
        let expected = in_size.checked_pow(arity as u32).unwrap_or(usize::MAX);
        let table: Vec<Elem> = if expected == 0 {
            Vec::new()
        } else {
            let Some((ln2, body)) = lines.next() else {
                return parse_err(ln, "missing table line");
            };
            match body.split_whitespace().map(str::parse).collect::<std::result::Result<Vec<Elem>, _>>() {
                Ok(t) => t,
                Err(_) => return parse_err(ln2, "bad table entry"),
            }
        };
        match OperationTable::new(arity, in_size, out_size, table) {
            Ok(t) => out.push(t),
            Err(e) => return parse_err(ln, e.to_string()),
        }
    }
    Ok(out)
}

/// Checks the polymorphism condition relation by relation.
pub fn is_polymorphism(f: &OperationTable, s: &Structure, t: &Structure) -> bool {
    if s.signature() != t.signature() || f.in_size != s.domain_size() || f.out_size != t.domain_size() {
        return false;
    }
    let n = f.arity;
    let mut img = Vec::new();
    for (rs, rt) in s.relations().iter().zip(t.relations()) {
        if n == 0 {
            // a nullary operation is a constant c; every relation needs (c, ..., c)
            if !rt.contains(&vec![f.table[0]; rt.arity()]) && !rs.is_empty() {
                return false;
            }
            continue;
        }
        if rs.is_empty() {
            continue;
        }
        let mut idx = vec![0usize; n];
        loop {
            img.clear();
            for j in 0..rs.arity() {
                let args: Vec<Elem> = idx.iter().map(|&ti| rs.tuple(ti)[j]).collect();
                img.push(f.eval(&args));
            }
            if !rt.contains(&img) {
                return false;
            }
            let mut i = 0;
            while i < n {
                idx[i] += 1;
                if idx[i] < rs.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    true
}

/// Default cap on the tuples of `S^m` built during enumeration.
pub const DEFAULT_POWER_LIMIT: usize = 5_000_000;

/// All `m`-ary polymorphisms of `(S, T)` in lexicographic table order.
pub fn enumerate_polymorphisms(s: &Structure, t: &Structure, m: usize, limit: usize) -> Result<Vec<OperationTable>> {
    let pw = s.power(m, DEFAULT_POWER_LIMIT)?;
    let maps = HomSearch::new(&pw, t)?.collect_all(limit)?;
    maps.into_iter().map(|table| OperationTable::new(m, s.domain_size(), t.domain_size(), table)).collect()
}

/// The minor `g^pi(x_1..x_n) = g(x_pi(1), ..., x_pi(m))`.
pub fn minor(g: &OperationTable, pi: &[usize], n: usize) -> Result<OperationTable> {
    if pi.len() != g.arity {
        return arg(format!("minor map has length {}, arity is {}", pi.len(), g.arity));
    }
    if pi.iter().any(|&p| p >= n) {
        return arg("minor map leaves the target arity");
    }
    OperationTable::from_fn(n, g.in_size, g.out_size, |x| {
        let args: Vec<Elem> = pi.iter().map(|&p| x[p]).collect();
        g.eval(&args)
    })
}

/// Weak near-unanimity: idempotence aside, `f(y,x,..,x) = f(x,y,..,x) = ... = f(x,..,x,y)`.
pub fn is_wnu(f: &OperationTable) -> bool {
    let m = f.arity;
    if m < 2 {
        return false;
    }
    let a = f.in_size as Elem;
    for x in 0..a {
        for y in 0..a {
            let mut args = vec![x; m];
            args[0] = y;
            let first = f.eval(&args);
            for i in 1..m {
                args[i - 1] = x;
                args[i] = y;
                if f.eval(&args) != first {
                    return false;
                }
            }
        }
    }
    true
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let n = self.0[c];
            self.0[c] = r;
            c = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Looks for an `m`-ary WNU polymorphism of `(S, T)` by searching for a
/// homomorphism from the quotient of `S^m` that identifies the cells a WNU
/// must send to the same value.
pub fn has_wnu(s: &Structure, t: &Structure, m: usize) -> Result<Option<OperationTable>> {
    if m < 2 {
        return arg("WNU arity must be at least 2");
    }
    let pw = s.power(m, DEFAULT_POWER_LIMIT)?;
    let a = s.domain_size();
    let cells = pw.domain_size();
    let mut uf = UnionFind((0..cells).collect());
    let enc = |args: &[usize]| args.iter().rev().fold(0, |acc, &x| acc * a + x);
    for x in 0..a {
        for y in 0..a {
            let mut args = vec![x; m];
            args[0] = y;
            let first = enc(&args);
            for i in 1..m {
                args[i - 1] = x;
                args[i] = y;
                uf.union(first, enc(&args));
            }
        }
    }
    let mut class_of = vec![0usize; cells];
    let mut ids: HashMap<usize, usize> = HashMap::new();
    for (c, slot) in class_of.iter_mut().enumerate() {
        let r = uf.find(c);
        let next = ids.len();
        *slot = *ids.entry(r).or_insert(next);
    }
    let classes = ids.len();
    let relations = pw
        .relations()
        .iter()
        .map(|r| {
            let rows: Vec<Vec<Elem>> = r.iter().map(|t| t.iter().map(|&e| class_of[e as usize] as Elem).collect()).collect();
            Relation::new(r.arity(), classes, rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let quotient = Structure::new("wnu-quotient", s.signature().clone(), classes, relations)?;
    let Some(h) = HomSearch::new(&quotient, t)?.next_hom()? else {
        return Ok(None);
    };
    let table = class_of.iter().map(|&c| h[c]).collect();
    Ok(Some(OperationTable::new(m, a, t.domain_size(), table)?))
}

/// Majority of an `m`-ary tuple over `carrier` values, falling back to the
/// first argument when no value occurs more than `m/2` times.
pub fn majority_first_tiebreak(m: usize, carrier: usize) -> Result<OperationTable> {
    if m == 0 || carrier == 0 {
        return arg("majority needs positive arity and carrier");
    }
    OperationTable::from_fn(m, carrier, carrier, |x| {
        let mut counts = vec![0usize; carrier];
        for &v in x {
            counts[v as usize] += 1;
        }
        match counts.iter().position(|&c| 2 * c > m) {
            Some(v) => v as Elem,
            None => x[0],
        }
    })
}

/// Boolean alternating threshold for odd `m`: 1 iff `x_1 - x_2 + x_3 - ... > 0`.
pub fn alternating_threshold(m: usize) -> Result<OperationTable> {
    if m < 1 || m.is_multiple_of(2) {
        return arg("alternating threshold needs odd arity");
    }
    OperationTable::from_fn(m, 2, 2, |x| {
        let s: i64 = x.iter().enumerate().map(|(i, &v)| if i % 2 == 0 { v as i64 } else { -(v as i64) }).sum();
        (s > 0) as Elem
    })
}

/// A finite fragment of a minion: functions grouped by arity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinionFragment {
    by_arity: BTreeMap<usize, BTreeSet<OperationTable>>,
}

impl MinionFragment {
    pub fn new(ops: impl IntoIterator<Item = OperationTable>) -> Result<Self> {
        let mut frag = MinionFragment::default();
        let mut sizes = None;
        for op in ops {
            let sz = (op.in_size, op.out_size);
            if *sizes.get_or_insert(sz) != sz {
                return arg("fragment mixes domain sizes");
            }
            frag.by_arity.entry(op.arity).or_default().insert(op);
        }
        Ok(frag)
    }

    /// All minors of `g` of arity `n`, for each `n` in `arities`.
    pub fn generated_by(g: &OperationTable, arities: &[usize]) -> Result<Self> {
        let mut ops = Vec::new();
        for &n in arities {
            for pi in crate::structure::all_tuples(g.arity, n) {
                let pi: Vec<usize> = pi.iter().map(|&p| p as usize).collect();
                ops.push(minor(g, &pi, n)?);
            }
        }
        Self::new(ops)
    }

    pub fn of_arity(&self, n: usize) -> impl Iterator<Item = &OperationTable> {
        self.by_arity.get(&n).into_iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_arity.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The free structure of the fragment generated by `A`. Its elements are the
/// `|A|`-ary members of the fragment in sorted order; each tuple of `R^A`
/// list (in lexicographic order) and each `m`-ary member `g`, where `m` is the
/// number of tuples, contribute the tuple of binary-coordinate minors of `g`.
pub fn free_structure(a: &Structure, frag: &MinionFragment) -> Result<Structure> {
    let n = a.domain_size();
    let elems: Vec<&OperationTable> = frag.of_arity(n).collect();
    let index: HashMap<&OperationTable, usize> = elems.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut relations = Vec::new();
    for rel in a.relations() {
        let m = rel.len();
        let r = rel.arity();
        let mut rows = Vec::new();
        if m > 0 {
            for g in frag.of_arity(m) {
                let mut row = Vec::with_capacity(r);
                for i in 0..r {
                    let pi: Vec<usize> = (0..m).map(|j| rel.tuple(j)[i] as usize).collect();
                    let fi = minor(g, &pi, n)?;
                    match index.get(&fi) {
                        Some(&e) => row.push(e as Elem),
                        None => {
                            return Err(Error::Argument(format!(
                                "fragment is not closed: minor {:?} of {:?} is missing",
                                fi.table, g.table
                            )))
                        }
                    }
                }
                rows.push(row);
            }
        }
        relations.push(Relation::new(r, elems.len(), rows)?);
    }
    Structure::new(format!("F({})", a.name()), a.signature().clone(), elems.len(), relations)
}

/// Some `a` with `(a, ..., a)` in every relation.
pub fn has_reflexive_tuple(t: &Structure) -> Option<Elem> {
    t.reflexive_element()
}
