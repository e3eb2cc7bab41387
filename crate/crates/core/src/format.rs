//! Plain-text formats for structures, operation tables, strategies, SA
//! certificates and CSV reports.
//!
//! Structure format:
//!
//! ```text
//! structure <name>
//! domain <n>
//! relation <rel-name> <arity>
//! <tuple, whitespace separated element ids>
//! ...
//! end
//! ```
//!
//! Blank lines and `#` comments are ignored. A nullary relation that holds is
//! written with the single tuple line `()`.

use std::fmt::Write as _;

use num_rational::BigRational;

use crate::error::{parse_err, Result};
use crate::structure::{Elem, Relation, Signature, Structure};

/// First line of every CSV the tool writes.
pub const CSV_HEADER: &str = "# pcsp-lab v1";

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Parses every structure in `text`.
pub fn parse_structures(text: &str) -> Result<Vec<Structure>> {
    let mut out = Vec::new();
    let mut lines = content_lines(text).peekable();
    while let Some((ln, line)) = lines.next() {
        let mut words = line.split_whitespace();
        if words.next() != Some("structure") {
            return parse_err(ln, format!("expected `structure <name>`, found `{}`", line));
        }
        let name = words.next().unwrap_or("").to_string();
        if name.is_empty() || words.next().is_some() {
            return parse_err(ln, "expected `structure <name>`");
        }
        let Some((ln, line)) = lines.next() else {
            return parse_err(ln, "missing `domain` line");
        };
        let domain = match line.split_whitespace().collect::<Vec<_>>()[..] {
            ["domain", n] => match n.parse::<usize>() {
                Ok(n) if n <= u32::MAX as usize => n,
                _ => return parse_err(ln, format!("bad domain size `{}`", n)),
            },
            _ => return parse_err(ln, "expected `domain <n>`"),
        };
        let mut symbols: Vec<(String, usize)> = Vec::new();
        let mut tuples: Vec<Vec<Vec<Elem>>> = Vec::new();
        let mut closed = false;
        let mut last_ln = ln;
        for (ln, line) in lines.by_ref() {
            last_ln = ln;
            let words: Vec<&str> = line.split_whitespace().collect();
            match words[0] {
                "end" if words.len() == 1 => {
                    closed = true;
                    break;
                }
                "relation" => {
                    let [_, name, arity] = words[..] else {
                        return parse_err(ln, "expected `relation <name> <arity>`");
                    };
                    let Ok(arity) = arity.parse::<usize>() else {
                        return parse_err(ln, format!("bad arity `{}`", arity));
                    };
                    if symbols.iter().any(|(n, _)| n == name) {
                        return parse_err(ln, format!("relation `{}` declared twice", name));
                    }
                    symbols.push((name.to_string(), arity));
                    tuples.push(Vec::new());
                }
                _ => {
                    let Some(&(_, arity)) = symbols.last() else {
                        return parse_err(ln, "tuple before any `relation` line");
                    };
                    let tuple: Vec<Elem> = if line == "()" {
                        Vec::new()
                    } else {
                        let mut t = Vec::with_capacity(words.len());
                        for w in &words {
                            match w.parse::<u64>() {
                                Ok(e) if (e as usize) < domain => t.push(e as Elem),
                                Ok(e) => return parse_err(ln, format!("element {} out of range for domain {}", e, domain)),
                                Err(_) => return parse_err(ln, format!("bad element id `{}`", w)),
                            }
                        }
                        t
                    };
                    if tuple.len() != arity {
                        return parse_err(ln, format!("tuple has {} entries, relation arity is {}", tuple.len(), arity));
                    }
                    tuples.last_mut().unwrap().push(tuple);
                }
            }
        }
        if !closed {
            return parse_err(last_ln, "missing `end`");
        }
        let sig = Signature::new(symbols.clone()).map_err(|e| crate::Error::Parse { line: ln, msg: e.to_string() })?;
        let relations = symbols.iter().zip(tuples).map(|((_, a), ts)| Relation::new(*a, domain, ts)).collect::<Result<Vec<_>>>()?;
        out.push(Structure::new(name, sig, domain, relations)?);
    }
    Ok(out)
}

/// Parses exactly one structure.
pub fn parse_structure(text: &str) -> Result<Structure> {
    let mut all = parse_structures(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        n => parse_err(1, format!("expected one structure, found {}", n)),
    }
}

pub fn write_structure(s: &Structure) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "structure {}", if s.name().is_empty() { "S" } else { s.name() });
    let _ = writeln!(out, "domain {}", s.domain_size());
    for (sym, rel) in s.signature().symbols().iter().zip(s.relations()) {
        let _ = writeln!(out, "relation {} {}", sym.name, sym.arity);
        for t in rel.iter() {
            if t.is_empty() {
                out.push_str("()\n");
            } else {
                out.push_str(&join(t));
                out.push('\n');
            }
        }
    }
    out.push_str("end\n");
    out
}

pub(crate) fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Parses a rational written as `p/q`, an integer, or a finite decimal.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{}{}", if int.is_empty() { "0" } else { int }, frac).parse().ok()?;
    let mut den = BigInt::one();
    for _ in 0..frac.len() {
        den *= 10;
    }
    let r = BigRational::new(digits, den);
    Some(if neg { -r } else { r })
}

pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Writes a vertex coloring as `vertex color` lines.
pub fn write_coloring(colors: &[usize]) -> String {
    let mut out = String::new();
    for (v, c) in colors.iter().enumerate() {
        let _ = writeln!(out, "{} {}", v, c);
    }
    out
}

pub fn parse_coloring(text: &str) -> Result<Vec<usize>> {
    let mut pairs = Vec::new();
    for (ln, line) in content_lines(text) {
        let w: Vec<&str> = line.split_whitespace().collect();
        let [v, c] = w[..] else {
            return parse_err(ln, "expected `vertex color`");
        };
        match (v.parse::<usize>(), c.parse::<usize>()) {
            (Ok(v), Ok(c)) => pairs.push((ln, v, c)),
            _ => return parse_err(ln, "expected two non-negative integers"),
        }
    }
    let n = pairs.iter().map(|&(_, v, _)| v + 1).max().unwrap_or(0);
    let mut out = vec![usize::MAX; n];
    for (ln, v, c) in pairs {
        if out[v] != usize::MAX {
            return parse_err(ln, format!("vertex {} colored twice", v));
        }
        out[v] = c;
    }
    if let Some(v) = out.iter().position(|&c| c == usize::MAX) {
        return parse_err(1, format!("vertex {} has no color", v));
    }
    Ok(out)
}
