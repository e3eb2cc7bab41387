//! Thin wrapper over `BigFloat` for the bound formulas.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

/// Working precision in bits.
pub const PRECISION: usize = 320;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_cc<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone, Debug)]
pub struct Real(BigFloat);

impl Real {
    pub fn from_int(v: i64) -> Real {
        Real(BigFloat::from_i64(v, PRECISION))
    }

    fn from_bigint(v: &BigInt) -> Real {
        Real(with_cc(|cc| BigFloat::parse(&v.to_string(), Radix::Dec, PRECISION, RM, cc)))
    }

    pub fn from_rational(q: &BigRational) -> Real {
        Real::from_bigint(q.numer()).div(&Real::from_bigint(q.denom()))
    }

    pub fn zero() -> Real {
        Real::from_int(0)
    }

    pub fn one() -> Real {
        Real::from_int(1)
    }

    pub fn e() -> Real {
        Real::one().exp()
    }

    pub fn add(&self, o: &Real) -> Real {
        Real(self.0.add(&o.0, PRECISION, RM))
    }

    pub fn sub(&self, o: &Real) -> Real {
        Real(self.0.sub(&o.0, PRECISION, RM))
    }

    pub fn mul(&self, o: &Real) -> Real {
        Real(self.0.mul(&o.0, PRECISION, RM))
    }

    pub fn div(&self, o: &Real) -> Real {
        Real(self.0.div(&o.0, PRECISION, RM))
    }

    pub fn neg(&self) -> Real {
        Real(self.0.neg())
    }

    pub fn ln(&self) -> Real {
        Real(with_cc(|cc| self.0.ln(PRECISION, RM, cc)))
    }

    pub fn exp(&self) -> Real {
        Real(with_cc(|cc| self.0.exp(PRECISION, RM, cc)))
    }

    /// `self^y` for positive `self`.
    pub fn pow(&self, y: &Real) -> Real {
        y.mul(&self.ln()).exp()
    }

    pub fn powi(&self, n: usize) -> Real {
        Real(self.0.powi(n, PRECISION, RM))
    }

    pub fn floor(&self) -> Real {
        Real(self.0.floor())
    }

    /// Multiplies by `1 + 2^-200` (or `1 - 2^-200` for negative values) so
    /// the working-precision error is absorbed into an upper bound.
    pub fn pad_up(&self) -> Real {
        let eps = Real::one().div(&Real::from_int(2).powi(200));
        let f = if self.0.is_negative() { Real::one().sub(&eps) } else { Real::one().add(&eps) };
        self.mul(&f)
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive() && !self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().unwrap_or(f64::NAN)
    }

    /// Floor as a `u64`, saturating, and `None` for negative or non-finite values.
    pub fn floor_u64(&self) -> Option<u64> {
        if !self.is_finite() || self.0.is_negative() {
            return None;
        }
        let f = self.floor();
        if f > Real::from_int(i64::MAX) {
            return Some(u64::MAX);
        }
        let s = with_cc(|cc| f.0.format(Radix::Dec, RM, cc)).ok()?;
        let v: f64 = s.parse().ok()?;
        Some(v as u64)
    }

    /// A dyadic rational at most `self`, within a relative `2^-60` for positive values.
    pub fn rational_below(&self) -> Option<BigRational> {
        if !self.is_finite() {
            return None;
        }
        let shift = match self.0.exponent() {
            Some(e) if self.is_positive() => (60 - e as i64).max(0) as usize,
            _ => 60,
        };
        let scaled = self.mul(&Real::from_int(2).powi(shift)).floor();
        let s = with_cc(|cc| scaled.0.format(Radix::Dec, RM, cc)).ok()?;
        let num = decimal_integer(&s)?;
        Some(BigRational::new(num, BigInt::from(1u8) << shift))
    }
}

/// Parses astro-float's decimal rendering of an integer value (`d.ddde+x`).
fn decimal_integer(s: &str) -> Option<BigInt> {
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m, e.trim_start_matches('+').parse::<i64>().ok()?),
        None => (s, 0),
    };
    let neg = mant.starts_with('-');
    let mant = mant.trim_start_matches(['-', '+']);
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{}{}", ip, fp);
    let shift = exp - fp.len() as i64;
    let mut v: BigInt = digits.parse().ok()?;
    if shift >= 0 {
        v *= BigInt::from(10u32).pow(shift as u32);
    } else {
        v /= BigInt::from(10u32).pow((-shift) as u32);
    }
    Some(if neg { -v.abs() } else { v })
}

impl PartialEq for Real {
    fn eq(&self, o: &Real) -> bool {
        self.0.cmp(&o.0) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, o: &Real) -> Option<Ordering> {
        self.0.cmp(&o.0).map(|c| c.cmp(&0))
    }
}

impl Real {
    /// Total order treating NaN as the largest value.
    pub fn total_cmp(&self, o: &Real) -> Ordering {
        self.partial_cmp(o).unwrap_or(Ordering::Greater)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = with_cc(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
        f.write_str(&s)
    }
}

impl Real {
    /// Short scientific rendering for reports.
    pub fn short(&self) -> String {
        let v = self.to_f64();
        if v.is_finite() && v != 0.0 {
            return format!("{:.6e}", v);
        }
        if self.0.is_zero() {
            return "0".into();
        }
        // outside f64 range: reduce mantissa digits by hand
        let s = self.to_string();
        match s.split_once('e') {
            Some((m, e)) => format!("{}e{}", &m[..m.len().min(8)], e),
            None => s,
        }
    }
}
