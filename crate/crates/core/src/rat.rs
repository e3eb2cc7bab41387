//! Exact rationals with an `i64` fast path and a `BigRational` fallback.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub enum Rat {
    /// numerator, positive denominator, in lowest terms
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rat {
    pub const ZERO: Rat = Rat::Small(0, 1);
    pub const ONE: Rat = Rat::Small(1, 1);

    fn from_i128(n: i128, d: i128) -> Rat {
        debug_assert!(d != 0);
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = n.gcd(&d);
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) => Rat::Small(a, b),
            _ => Rat::Big(Box::new(BigRational::new(n.into(), d.into()))),
        }
    }

    fn from_big(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) => Rat::Small(a, b),
            _ => Rat::Big(Box::new(r)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(a, b) => BigRational::new_raw(BigInt::from(*a), BigInt::from(*b)),
            Rat::Big(r) => (**r).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(a, _) => *a == 0,
            Rat::Big(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Rat::Small(a, _) => *a > 0,
            Rat::Big(r) => r.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(a, _) => *a < 0,
            Rat::Big(r) => r.is_negative(),
        }
    }

    /// `self - f * g`, the tableau update.
    pub fn sub_mul(&self, f: &Rat, g: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d), Rat::Small(e, h)) = (self, f, g) {
            // a/b - (c e)/(d h)
            let (a, b, c, d, e, h) = (*a as i128, *b as i128, *c as i128, *d as i128, *e as i128, *h as i128);
            let (pn, pd) = (c * e, d * h);
            if let (Some(x), Some(y), Some(z)) = (a.checked_mul(pd), pn.checked_mul(b), b.checked_mul(pd)) {
                if let Some(n) = x.checked_sub(y) {
                    return Rat::from_i128(n, z);
                }
            }
        }
        Rat::from_big(self.to_big() - f.to_big() * g.to_big())
    }
}

impl From<&BigRational> for Rat {
    fn from(r: &BigRational) -> Rat {
        Rat::from_big(r.clone())
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Rat {
        Rat::Small(v, 1)
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Rat) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $small:expr, $big:expr) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, o: &Rat) -> Rat {
                if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, o) {
                    let f: fn(i128, i128, i128, i128) -> Option<(i128, i128)> = $small;
                    if let Some((n, d)) = f(*a as i128, *b as i128, *c as i128, *d as i128) {
                        return Rat::from_i128(n, d);
                    }
                }
                let g: fn(BigRational, BigRational) -> BigRational = $big;
                Rat::from_big(g(self.to_big(), o.to_big()))
            }
        }
    };
}

binop!(Add, add, |a, b, c, d| Some((a.checked_mul(d)?.checked_add(c.checked_mul(b)?)?, b.checked_mul(d)?)), |x, y| x + y);
binop!(Sub, sub, |a, b, c, d| Some((a.checked_mul(d)?.checked_sub(c.checked_mul(b)?)?, b.checked_mul(d)?)), |x, y| x - y);
binop!(Mul, mul, |a, b, c, d| Some((a.checked_mul(c)?, b.checked_mul(d)?)), |x, y| x * y);
binop!(Div, div, |a, b, c, d| Some((a.checked_mul(d)?, b.checked_mul(c)?)), |x, y| x / y);

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match self {
            Rat::Small(a, b) if *a != i64::MIN => Rat::Small(-a, *b),
            _ => Rat::from_big(-self.to_big()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    proptest! {
        #[test]
        fn agrees_with_bigrational(a in any::<i64>(), b in 1..i64::MAX, c in any::<i64>(), d in 1..i64::MAX) {
            let (x, y) = (big(a, b), big(c, d));
            let (p, q) = (Rat::from(&x), Rat::from(&y));
            prop_assert_eq!((&p + &q).to_big(), &x + &y);
            prop_assert_eq!((&p - &q).to_big(), &x - &y);
            prop_assert_eq!((&p * &q).to_big(), &x * &y);
            if c != 0 {
                prop_assert_eq!((&p / &q).to_big(), &x / &y);
            }
            prop_assert_eq!(p.cmp(&q), x.cmp(&y));
            prop_assert_eq!(p.sub_mul(&q, &p).to_big(), &x - &y * &x);
            prop_assert_eq!((-&p).to_big(), -x);
        }
    }

    #[test]
    fn small_stays_small() {
        let h = Rat::from(&big(1, 2));
        assert!(matches!(&h + &h, Rat::Small(1, 1)));
        assert!((&h - &h).is_zero());
    }
}
