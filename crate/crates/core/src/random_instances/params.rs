//! Parameter derivation for the random construction and the bound formulas.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::hireal::Real;
use crate::error::{arg, Error, Result};

/// Largest `floor(alpha n)` for which `p2` is summed term by term.
pub const P2_TERM_LIMIT: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    General,
    /// Arity 2 only, with the relaxed delta range.
    Digraph,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn real(x: &BigRational) -> Real {
    Real::from_rational(x)
}

/// `q^n exp(-dn / (r^r q^(r-1)))`, rounded up.
pub fn p1(r: u32, d: &Real, n: u64, q: u64) -> Real {
    let qr = Real::from_int(q as i64);
    let denom = Real::from_int(r as i64).powi(r as usize).mul(&qr.powi(r as usize - 1));
    let nr = Real::from_int(n as i64);
    let expo = nr.mul(&qr.ln()).sub(&d.mul(&nr).div(&denom));
    expo.exp().pad_up()
}

/// `sum_{v=1}^{floor(alpha n)} ((n/v)^(1-(r-1)beta) d^beta e^(1+(r+1)beta) r^(-r beta) beta^(-beta))^v`,
/// rounded up.
pub fn p2(r: u32, d: &Real, n: u64, alpha: &Real, beta: &Real) -> Result<Real> {
    let nr = Real::from_int(n as i64);
    let top = alpha.mul(&nr).floor_u64().unwrap_or(0);
    if top > P2_TERM_LIMIT {
        return Err(Error::Budget(format!("p2 would sum {} terms (limit {})", top, P2_TERM_LIMIT)));
    }
    let rr = Real::from_int(r as i64);
    let one = Real::one();
    let e_coef = one.sub(&Real::from_int(r as i64 - 1).mul(beta));
    // log of the v-independent factor
    let k = beta
        .mul(&d.ln())
        .add(&one.add(&Real::from_int(r as i64 + 1).mul(beta)))
        .sub(&rr.mul(beta).mul(&rr.ln()))
        .sub(&beta.mul(&beta.ln()));
    let mut sum = Real::zero();
    for v in 1..=top {
        let vr = Real::from_int(v as i64);
        let log_base = e_coef.mul(&nr.div(&vr).ln()).add(&k);
        sum = sum.add(&vr.mul(&log_base).exp());
    }
    Ok(sum.pad_up())
}

/// `(e gamma / t)^(t m)`, rounded up.
pub fn chernoff_bound(m: u64, gamma: &Real, t: &Real) -> Real {
    let base = Real::e().mul(gamma).div(t);
    if !base.is_positive() {
        return Real::zero();
    }
    base.pow(&t.mul(&Real::from_int(m as i64))).pad_up()
}

#[derive(Clone, Debug)]
pub struct DeriveRequest {
    pub r: u32,
    pub p: u64,
    pub q: u64,
    pub n: u64,
    pub mode: Mode,
    pub epsilon: Option<BigRational>,
    pub k: Option<u64>,
    /// Width exponent, digraph mode.
    pub gamma: Option<BigRational>,
    pub forced_delta: Option<BigRational>,
}

impl DeriveRequest {
    pub fn general(r: u32, p: u64, q: u64, n: u64) -> DeriveRequest {
        DeriveRequest { r, p, q, n, mode: Mode::General, epsilon: None, k: None, gamma: None, forced_delta: None }
    }

    pub fn digraph(p: u64, q: u64, n: u64, epsilon: BigRational, gamma: BigRational) -> DeriveRequest {
        DeriveRequest { r: 2, p, q, n, mode: Mode::Digraph, epsilon: Some(epsilon), k: None, gamma: Some(gamma), forced_delta: None }
    }
}

#[derive(Clone, Debug)]
pub struct ParameterSet {
    pub r: u32,
    pub k: u64,
    pub p: u64,
    pub q: u64,
    pub n: u64,
    pub mode: Mode,
    pub delta: BigRational,
    pub beta: BigRational,
    pub alpha: Real,
    /// `alpha` as an exact rational when the recipe makes it one.
    pub alpha_exact: Option<BigRational>,
    pub c: BigRational,
    pub d: Real,
    pub delta_prime: Option<BigRational>,
    pub epsilon: Option<BigRational>,
    /// A forced delta outside the range the constructions are proved for.
    pub unsupported_delta: bool,
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub mode: Mode,
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    pub c5: bool,
    pub c6: bool,
    pub c7: bool,
    pub p1: Real,
    /// `None` when the sum exceeded [`P2_TERM_LIMIT`] terms; C7 is then false.
    pub p2: Option<Real>,
}

impl ConditionReport {
    pub fn entries(&self) -> Vec<(&'static str, bool)> {
        let digraph = self.mode == Mode::Digraph;
        vec![
            (if digraph { "C1'" } else { "C1" }, self.c1),
            ("C2", self.c2),
            ("C3", self.c3),
            (if digraph { "C4'" } else { "C4" }, self.c4),
            ("C5", self.c5),
            ("C6", self.c6),
            ("C7", self.c7),
        ]
    }

    pub fn all(&self) -> bool {
        self.entries().iter().all(|e| e.1)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.entries().into_iter().filter(|e| !e.1).map(|e| e.0).collect()
    }
}

fn floor_rat(x: &BigRational) -> u64 {
    x.floor().to_integer().to_u64().unwrap_or(0)
}

pub fn general_delta(r: u32) -> BigRational {
    q(1, ((r + 1) * (3 * r + 1)) as i64)
}

/// `(1 - 2 delta) / (6 (1 + delta))`.
pub fn delta_prime(delta: &BigRational) -> BigRational {
    let one = BigRational::one();
    (&one - delta * BigInt::from(2)) / ((&one + delta) * BigInt::from(6))
}

/// `(beta/d)^(1/(r-1)) (r/e)^(r/(r-1))`, the largest alpha allowed by C3.
fn c3_bound(r: u32, beta: &BigRational, d: &Real) -> Real {
    let rr = Real::from_int(r as i64);
    let inv = Real::one().div(&Real::from_int(r as i64 - 1));
    real(beta).div(d).pow(&inv).mul(&rr.div(&Real::e()).pow(&rr.mul(&inv)))
}

/// The two smallness requirements on epsilon in the general recipe; returns the smaller.
fn general_epsilon_cap(r: u32, p: u64, delta: &BigRational, beta: &BigRational, d: &Real) -> Real {
    let db_p = real(&(delta * beta / BigInt::from(p)));
    let first = db_p.mul(&c3_bound(r, beta, d));
    let (dl, bt) = (real(delta), real(beta));
    let rr = Real::from_int(r as i64);
    let bd = bt.div(&dl);
    let log2 = d
        .ln()
        .mul(&bd)
        .neg()
        .sub(&Real::one().div(&dl))
        .sub(&Real::from_int(r as i64 + 1).mul(&bd))
        .add(&rr.mul(&bd).mul(&rr.ln()))
        .add(&bd.mul(&bt.ln()));
    let second = db_p.div(&Real::from_int(3)).mul(&log2.exp());
    if first < second {
        first
    } else {
        second
    }
}

pub fn derive_parameters(req: &DeriveRequest) -> Result<ParameterSet> {
    if req.r < 2 {
        return arg("arity r must be at least 2");
    }
    if req.p == 0 || req.q == 0 || req.n == 0 {
        return arg("p, q and n must be positive");
    }
    if let Some(e) = &req.epsilon {
        if !e.is_positive() {
            return arg("epsilon must be positive");
        }
    }
    match req.mode {
        Mode::General => derive_general(req),
        Mode::Digraph => derive_digraph(req),
    }
}

fn derive_general(req: &DeriveRequest) -> Result<ParameterSet> {
    let r = req.r;
    let (delta, unsupported) = match &req.forced_delta {
        Some(d) if d.is_positive() => (d.clone(), d > &general_delta(r)),
        Some(_) => return arg("forced delta must be positive"),
        None => (general_delta(r), false),
    };
    let beta = (BigRational::one() + &delta) / BigInt::from(r - 1);
    let qr = Real::from_int(req.q as i64);
    let d = Real::from_int(r as i64).powi(r as usize).mul(&qr.powi(r as usize - 1)).mul(&Real::from_int(2 * req.q as i64).ln());
    let n_rat = BigRational::from_integer(BigInt::from(req.n));
    let epsilon = match (&req.epsilon, req.k) {
        (Some(e), _) => e.clone(),
        (None, Some(k)) => BigRational::from_integer(BigInt::from(k)) / &n_rat,
        (None, None) => {
            let cap = general_epsilon_cap(r, req.p, &delta, &beta, &d).div(&Real::from_int(2));
            match cap.rational_below() {
                Some(e) if e.is_positive() => e,
                _ => return arg("could not derive a positive epsilon"),
            }
        }
    };
    let k = req.k.unwrap_or_else(|| floor_rat(&(&epsilon * &n_rat)));
    let p = BigInt::from(req.p);
    let alpha = &epsilon * &p / (&delta * &beta);
    let c = BigRational::from_integer(BigInt::from(k) * &p) / &delta;
    Ok(ParameterSet {
        r,
        k,
        p: req.p,
        q: req.q,
        n: req.n,
        mode: Mode::General,
        alpha: real(&alpha),
        alpha_exact: Some(alpha),
        delta,
        beta,
        c,
        d,
        delta_prime: None,
        epsilon: Some(epsilon),
        unsupported_delta: unsupported,
    })
}

fn derive_digraph(req: &DeriveRequest) -> Result<ParameterSet> {
    if req.r != 2 {
        return arg("digraph mode requires r = 2");
    }
    let one = BigRational::one();
    let half = q(1, 2);
    let (delta, unsupported) = match &req.forced_delta {
        Some(d) if d.is_positive() && d < &one => (d.clone(), d >= &half),
        Some(_) => return arg("forced delta must lie in (0, 1)"),
        None => {
            let (Some(eps), Some(gamma)) = (&req.epsilon, &req.gamma) else {
                return arg("digraph mode needs epsilon and gamma (or a forced delta)");
            };
            if gamma >= &(&one - eps * BigInt::from(3)) {
                return arg("infeasible: gamma must be below 1 - 3 epsilon");
            }
            let delta0 = eps / (&one - eps - gamma);
            ((delta0 + &half) / BigInt::from(2), false)
        }
    };
    let k = match (req.k, &req.gamma) {
        (Some(k), _) => k,
        (None, Some(g)) => Real::from_int(req.n as i64).pow(&real(g)).floor_u64().unwrap_or(0).max(1),
        (None, None) => return arg("digraph mode needs k or gamma"),
    };
    let beta = &one + &delta;
    let qr = Real::from_int(req.q as i64);
    let d = Real::from_int(5).mul(&qr).mul(&qr.ln());
    let (dl, opd) = (real(&delta), real(&(&one + &delta)));
    // C = (1+delta) 4^(delta/(1+delta)) e^((-4-3 delta)/(1+delta))
    let cc = opd.mul(&Real::from_int(4).pow(&dl.div(&opd))).mul(&Real::from_int(-4).sub(&Real::from_int(3).mul(&dl)).div(&opd).exp());
    let alpha = if d.is_positive() { cc.div(&d).pow(&opd.div(&dl)) } else { Real::zero() };
    let dp = delta_prime(&delta);
    let kp = BigRational::from_integer(BigInt::from(k) * BigInt::from(req.p));
    let c = if dp.is_positive() { &kp / &dp } else { &kp / &delta };
    Ok(ParameterSet {
        r: 2,
        k,
        p: req.p,
        q: req.q,
        n: req.n,
        mode: Mode::Digraph,
        delta,
        beta,
        alpha,
        alpha_exact: None,
        c,
        d,
        delta_prime: Some(dp),
        epsilon: req.epsilon.clone(),
        unsupported_delta: unsupported,
    })
}

pub fn check_conditions(ps: &ParameterSet) -> ConditionReport {
    let zero = BigRational::zero();
    let r = ps.r;
    let kp = BigRational::from_integer(BigInt::from(ps.k) * BigInt::from(ps.p));
    let c1 = match ps.mode {
        Mode::General => ps.delta > zero && ps.delta <= general_delta(r),
        Mode::Digraph => ps.delta > zero && ps.delta < q(1, 2),
    };
    let c2 = ps.beta > zero && ps.beta <= (BigRational::one() + &ps.delta) / BigInt::from(r - 1);
    let c3 = ps.alpha.is_positive() && ps.d.is_positive() && ps.alpha <= c3_bound(r, &ps.beta, &ps.d);
    let c4 = match ps.mode {
        Mode::General => ps.c >= &kp / &ps.delta,
        Mode::Digraph => match &ps.delta_prime {
            Some(dp) if dp > &zero => ps.c >= &kp / dp,
            _ => false,
        },
    };
    let n = BigRational::from_integer(BigInt::from(ps.n));
    let c5 = ps.n >= ps.q
        && match &ps.alpha_exact {
            Some(a) if a > &zero => n >= &ps.c / (a * &ps.beta),
            Some(_) => false,
            None => ps.alpha.is_positive() && real(&n) >= real(&ps.c).div(&ps.alpha.mul(&real(&ps.beta))),
        };
    let n_pow = Real::from_int(ps.n as i64).powi(r as usize - 1);
    let c6 = ps.d >= Real::one() && ps.d <= n_pow;
    let p1v = p1(r, &ps.d, ps.n, ps.q);
    let p2v = if ps.d.is_positive() { p2(r, &ps.d, ps.n, &ps.alpha, &real(&ps.beta)).ok() } else { None };
    let c7 = match &p2v {
        Some(v) => p1v.add(v).pad_up() < Real::one(),
        None => false,
    };
    ConditionReport { mode: ps.mode, c1, c2, c3, c4, c5, c6, c7, p1: p1v, p2: p2v }
}

impl ParameterSet {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "mode: {:?}\nr: {}\np: {}\nq: {}\nn: {}\nk: {}\ndelta: {}\nbeta: {}\nalpha: {}\nc: {}\nd: {}\n",
            self.mode,
            self.r,
            self.p,
            self.q,
            self.n,
            self.k,
            self.delta,
            self.beta,
            self.alpha.short(),
            self.c,
            self.d.short()
        );
        if let Some(e) = &self.epsilon {
            s.push_str(&format!("epsilon: {}\n", e));
        }
        if let Some(dp) = &self.delta_prime {
            s.push_str(&format!("delta_prime: {}\n", dp));
        }
        if self.unsupported_delta {
            s.push_str("warning: forced delta is outside the proven range\n");
        }
        s
    }
}
