//! Finite relational structures over a shared signature.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::error::{arg, Result};

/// Domain elements are always `0..n`.
pub type Elem = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of relation symbols with arities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let symbols: Vec<Symbol> = symbols.into_iter().map(|(name, arity)| Symbol { name: name.into(), arity }).collect();
        let mut seen = HashSet::new();
        for s in &symbols {
            if s.name.is_empty() || s.name.chars().any(char::is_whitespace) {
                return arg(format!("bad relation symbol name {:?}", s.name));
            }
            if !seen.insert(s.name.as_str()) {
                return arg(format!("duplicate relation symbol {}", s.name));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn single(name: &str, arity: usize) -> Self {
        Signature::new([(name, arity)]).expect("single symbol")
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, i: usize) -> usize {
        self.symbols[i].arity
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// Arity of the product of all relations.
    pub fn total_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).sum()
    }
}

/// A set of tuples over `0..carrier`, kept sorted and duplicate free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    carrier: usize,
    len: usize,
    data: Vec<Elem>,
}

impl Relation {
    pub fn new<T: AsRef<[Elem]>>(arity: usize, carrier: usize, tuples: impl IntoIterator<Item = T>) -> Result<Self> {
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return arg(format!("tuple {:?} has length {}, expected {}", t, t.len(), arity));
            }
            if let Some(&e) = t.iter().find(|&&e| e as usize >= carrier) {
                return arg(format!("element {} outside domain of size {}", e, carrier));
            }
            rows.push(t.to_vec());
        }
        Ok(Self::from_rows(arity, carrier, rows))
    }

    fn from_rows(arity: usize, carrier: usize, mut rows: Vec<Vec<Elem>>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        let len = rows.len();
        let data = rows.into_iter().flatten().collect();
        Relation { arity, carrier, len, data }
    }

    pub fn empty(arity: usize, carrier: usize) -> Self {
        Relation { arity, carrier, len: 0, data: Vec::new() }
    }

    /// All tuples satisfying `pred`, enumerated in lexicographic order.
    pub fn from_fn(arity: usize, carrier: usize, mut pred: impl FnMut(&[Elem]) -> bool) -> Self {
        let mut data = Vec::new();
        let mut len = 0;
        for t in all_tuples(arity, carrier) {
            if pred(&t) {
                data.extend_from_slice(&t);
                len += 1;
            }
        }
        Relation { arity, carrier, len, data }
    }

    pub fn full(arity: usize, carrier: usize) -> Self {
        Self::from_fn(arity, carrier, |_| true)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn tuple(&self, i: usize) -> &[Elem] {
        &self.data[i * self.arity..(i + 1) * self.arity]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        (0..self.len).map(move |i| self.tuple(i))
    }

    pub fn index_of(&self, t: &[Elem]) -> Option<usize> {
        if t.len() != self.arity {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.tuple(mid).cmp(t) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, t: &[Elem]) -> bool {
        self.index_of(t).is_some()
    }

    pub fn with_carrier(&self, carrier: usize) -> Result<Self> {
        if self.data.iter().any(|&e| e as usize >= carrier) {
            return arg("relation uses elements outside the new carrier");
        }
        Ok(Relation { carrier, ..self.clone() })
    }

    /// `{(t[c0], ..., t[cm]) : t in R}`.
    pub fn projection(&self, coords: &[usize]) -> Result<Self> {
        if let Some(&c) = coords.iter().find(|&&c| c >= self.arity) {
            return arg(format!("coordinate {} out of range for arity {}", c, self.arity));
        }
        let rows = self.iter().map(|t| coords.iter().map(|&c| t[c]).collect()).collect();
        Ok(Self::from_rows(coords.len(), self.carrier, rows))
    }

    /// Relational composition of two binary relations.
    pub fn compose(&self, other: &Relation) -> Result<Self> {
        if self.arity != 2 || other.arity != 2 {
            return arg("composition needs binary relations");
        }
        if self.carrier != other.carrier {
            return arg("composition needs a common carrier");
        }
        let mut rows = Vec::new();
        for a in self.iter() {
            for b in other.iter().filter(|b| b[0] == a[1]) {
                rows.push(vec![a[0], b[1]]);
            }
        }
        Ok(Self::from_rows(2, self.carrier, rows))
    }

    /// Cartesian product `R x R'` as an `(r + r')`-ary relation.
    pub fn product(&self, other: &Relation) -> Result<Self> {
        if self.carrier != other.carrier {
            return arg("product needs a common carrier");
        }
        let mut data = Vec::with_capacity(self.len * other.len * (self.arity + other.arity));
        for a in self.iter() {
            for b in other.iter() {
                data.extend_from_slice(a);
                data.extend_from_slice(b);
            }
        }
        Ok(Relation { arity: self.arity + other.arity, carrier: self.carrier, len: self.len * other.len, data })
    }

    pub fn is_full(&self) -> bool {
        self.len as u128 == (self.carrier as u128).pow(self.arity as u32)
    }
}

/// Iterates `[0, carrier)^arity` in lexicographic order.
pub fn all_tuples(arity: usize, carrier: usize) -> impl Iterator<Item = Vec<Elem>> {
    let mut cur = if carrier == 0 && arity > 0 { None } else { Some(vec![0 as Elem; arity]) };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = arity;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if (next[i] as usize) < carrier {
                cur = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    })
}

/// A finite structure: domain `0..domain`, one relation per signature symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    name: String,
    signature: Signature,
    domain: usize,
    relations: Vec<Relation>,
}

impl Structure {
    pub fn new(name: impl Into<String>, signature: Signature, domain: usize, relations: Vec<Relation>) -> Result<Self> {
        if relations.len() != signature.len() {
            return arg(format!("{} relations given for a signature with {} symbols", relations.len(), signature.len()));
        }
        for (i, r) in relations.iter().enumerate() {
            if r.arity != signature.arity(i) {
                return arg(format!("relation {} has the wrong arity", signature.symbols()[i].name));
            }
            if r.carrier != domain {
                return arg(format!("relation {} has the wrong carrier", signature.symbols()[i].name));
            }
        }
        Ok(Structure { name: name.into(), signature, domain, relations })
    }

    /// Builds a structure from explicit tuple lists, one per symbol.
    pub fn from_tuples(name: impl Into<String>, signature: Signature, domain: usize, tuples: Vec<Vec<Vec<Elem>>>) -> Result<Self> {
        if tuples.len() != signature.len() {
            return arg("one tuple list per relation symbol is required");
        }
        let relations =
            tuples.into_iter().enumerate().map(|(i, ts)| Relation::new(signature.arity(i), domain, ts)).collect::<Result<Vec<_>>>()?;
        Structure::new(name, signature, domain, relations)
    }

    /// A structure with no tuples.
    pub fn empty(name: impl Into<String>, signature: Signature, domain: usize) -> Self {
        let relations = signature.symbols().iter().map(|s| Relation::empty(s.arity, domain)).collect();
        Structure { name: name.into(), signature, domain, relations }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn domain_size(&self) -> usize {
        self.domain
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, i: usize) -> &Relation {
        &self.relations[i]
    }

    pub fn relation_by_name(&self, name: &str) -> Option<&Relation> {
        self.signature.position(name).map(|i| &self.relations[i])
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(Relation::len).sum()
    }

    /// Product of all relations in signature order.
    pub fn product_relation(&self) -> Relation {
        let mut acc = Relation { arity: 0, carrier: self.domain, len: 1, data: Vec::new() };
        for r in &self.relations {
            acc = acc.product(r).expect("same carrier");
        }
        acc
    }

    /// The single-relation structure whose relation is the product relation.
    pub fn reduce(&self) -> Structure {
        let prod = self.product_relation();
        let sig = Signature::single("R", prod.arity());
        Structure { name: self.name.clone(), signature: sig, domain: self.domain, relations: vec![prod] }
    }

    /// `A^n`, elements encoded mixed-radix with the first coordinate least significant.
    /// Fails if the result would have more than `max_tuples` tuples.
    pub fn power(&self, n: usize, max_tuples: usize) -> Result<Structure> {
        let size = (self.domain as u128).checked_pow(n as u32).filter(|&s| s <= u32::MAX as u128);
        let Some(size) = size else {
            return Err(crate::Error::Budget(format!("power domain {}^{} too large", self.domain, n)));
        };
        let size = size as usize;
        let mut relations = Vec::with_capacity(self.relations.len());
        for rel in &self.relations {
            let count = (rel.len as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
            if count > max_tuples as u128 {
                return Err(crate::Error::Budget(format!("power relation would have {} tuples (limit {})", count, max_tuples)));
            }
            let mut rows = Vec::with_capacity(count as usize);
            let mut idx = vec![0usize; n];
            if rel.len > 0 || n == 0 {
                loop {
                    let mut row = vec![0 as Elem; rel.arity];
                    let mut scale = 1u64;
                    for &ti in idx.iter() {
                        let t = rel.tuple(ti);
                        for (j, &v) in t.iter().enumerate() {
                            row[j] += (v as u64 * scale) as Elem;
                        }
                        scale *= self.domain as u64;
                    }
                    rows.push(row);
                    let mut i = 0;
                    while i < n {
                        idx[i] += 1;
                        if idx[i] < rel.len {
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
            relations.push(Relation::from_rows(rel.arity, size, rows));
        }
        Ok(Structure { name: format!("{}^{}", self.name, n), signature: self.signature.clone(), domain: size, relations })
    }

    /// Substructure induced on `elems`; element `i` of the result is `elems[i]`.
    pub fn induced(&self, elems: &[Elem]) -> Result<Structure> {
        let mut back = vec![u32::MAX; self.domain];
        for (i, &e) in elems.iter().enumerate() {
            if e as usize >= self.domain {
                return arg(format!("element {} outside domain", e));
            }
            if back[e as usize] != u32::MAX {
                return arg(format!("element {} listed twice", e));
            }
            back[e as usize] = i as Elem;
        }
        let relations = self
            .relations
            .iter()
            .map(|r| {
                let rows = r
                    .iter()
                    .filter(|t| t.iter().all(|&e| back[e as usize] != u32::MAX))
                    .map(|t| t.iter().map(|&e| back[e as usize]).collect())
                    .collect();
                Relation::from_rows(r.arity, elems.len(), rows)
            })
            .collect();
        Ok(Structure { name: self.name.clone(), signature: self.signature.clone(), domain: elems.len(), relations })
    }

    /// Union over the common element universe `0..max(|A|, |B|)`.
    pub fn union(&self, other: &Structure) -> Result<Structure> {
        if self.signature != other.signature {
            return arg("union needs a common signature");
        }
        let domain = self.domain.max(other.domain);
        let relations = self
            .relations
            .iter()
            .zip(&other.relations)
            .map(|(a, b)| {
                let rows = a.iter().chain(b.iter()).map(<[Elem]>::to_vec).collect();
                Relation::from_rows(a.arity, domain, rows)
            })
            .collect();
        Ok(Structure { name: self.name.clone(), signature: self.signature.clone(), domain, relations })
    }

    /// Checks that `map` (indexed by element) is a homomorphism into `target`.
    pub fn is_homomorphism(&self, target: &Structure, map: &[Elem]) -> bool {
        if self.signature != target.signature || map.len() != self.domain {
            return false;
        }
        if map.iter().any(|&v| v as usize >= target.domain) {
            return false;
        }
        let mut img = Vec::new();
        self.relations.iter().zip(&target.relations).all(|(r, t)| {
            r.iter().all(|tup| {
                img.clear();
                img.extend(tup.iter().map(|&e| map[e as usize]));
                t.contains(&img)
            })
        })
    }

    /// Whether some element `a` has `(a,...,a)` in every relation.
    pub fn reflexive_element(&self) -> Option<Elem> {
        (0..self.domain as Elem).find(|&a| self.relations.iter().all(|r| r.contains(&vec![a; r.arity])))
    }
}

/// The complete graph `K_q` on the symbol `E`.
pub fn complete_graph(q: usize) -> Structure {
    let rel = Relation::from_fn(2, q, |t| t[0] != t[1]);
    Structure::new(format!("K{}", q), Signature::single("E", 2), q, vec![rel]).unwrap()
}

/// The undirected cycle on `n` vertices (a loop for `n = 1`, an edge for `n = 2`).
pub fn cycle(n: usize) -> Structure {
    let mut edges = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        edges.push(vec![i as Elem, j as Elem]);
        edges.push(vec![j as Elem, i as Elem]);
    }
    let rel = Relation::new(2, n, edges).unwrap();
    Structure::new(format!("C{}", n), Signature::single("E", 2), n, vec![rel]).unwrap()
}

/// The undirected path on `n` vertices.
pub fn path(n: usize) -> Structure {
    let mut edges = Vec::new();
    for i in 1..n {
        edges.push(vec![(i - 1) as Elem, i as Elem]);
        edges.push(vec![i as Elem, (i - 1) as Elem]);
    }
    let rel = Relation::new(2, n, edges).unwrap();
    Structure::new(format!("P{}", n), Signature::single("E", 2), n, vec![rel]).unwrap()
}

/// Boolean `r`-ary relation holding exactly when `s` coordinates are 1.
pub fn exactly(s: usize, r: usize) -> Structure {
    let rel = Relation::from_fn(r, 2, |t| t.iter().filter(|&&x| x == 1).count() == s);
    Structure::new(format!("{}-in-{}", s, r), Signature::single("R", r), 2, vec![rel]).unwrap()
}

/// Boolean not-all-equal relation of arity `r`.
pub fn nae(r: usize) -> Structure {
    not_all_equal(2, r)
}

/// Not-all-equal relation of arity `r` over `q` values. For `r = 2` this is `K_q` on symbol `R`.
pub fn not_all_equal(q: usize, r: usize) -> Structure {
    let rel = Relation::from_fn(r, q, |t| t.iter().any(|&x| x != t[0]));
    let name = if q == 2 { format!("NAE-{}", r) } else { format!("NAE{}-{}", q, r) };
    Structure::new(name, Signature::single("R", r), q, vec![rel]).unwrap()
}

/// Graph on symbol `E` from an undirected edge list.
pub fn graph_structure(n: usize, edges: &[(usize, usize)]) -> Result<Structure> {
    let mut tuples = Vec::with_capacity(edges.len() * 2);
    for &(u, v) in edges {
        tuples.push(vec![u as Elem, v as Elem]);
        tuples.push(vec![v as Elem, u as Elem]);
    }
    let rel = Relation::new(2, n, tuples)?;
    Structure::new("G", Signature::single("E", 2), n, vec![rel])
}
