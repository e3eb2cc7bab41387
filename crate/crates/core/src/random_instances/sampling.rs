use num_bigint::{BigInt, RandBigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{arg, Result};
use crate::seed::rng_for;
use crate::structure::{Elem, Signature, Structure};

/// Random `r`-uniform hypergraph on `n` elements: every `r`-subset is an edge
/// independently with probability `d / n^(r-1)`, recorded as one ascending tuple
/// of the single relation `R`.
pub fn sample_hypergraph(n: usize, r: usize, d: &BigRational, seed: u64) -> Result<Structure> {
    if r < 2 {
        return arg("arity r must be at least 2");
    }
    if d.is_negative() {
        return arg("d must be non-negative");
    }
    let prob = d / BigRational::from_integer(BigInt::from(n.max(1)).pow(r as u32 - 1));
    if prob > BigRational::one() {
        return arg(format!("edge probability {} exceeds 1", prob));
    }
    let sig = Signature::single("R", r);
    if n < r {
        return Ok(Structure::empty("sample", sig, n));
    }
    let num = prob.numer().clone();
    let den = prob.denom().clone();
    let small = num.to_u64().zip(den.to_u64());
    let den_u = den.to_biguint().expect("positive denominator");
    let mut rng = rng_for(seed, 0);
    let mut tuples = Vec::new();
    let mut comb: Vec<usize> = (0..r).collect();
    loop {
        let hit = if prob.is_zero() {
            false
        } else if let Some((a, b)) = small {
            rng.gen_range(0..b) < a
        } else {
            BigInt::from_biguint(Sign::Plus, rng.gen_biguint_below(&den_u)) < num
        };
        if hit {
            tuples.push(comb.iter().map(|&x| x as Elem).collect::<Vec<_>>());
        }
        if !next_combination(&mut comb, n) {
            break;
        }
    }
    Structure::from_tuples("sample", sig, n, vec![tuples])
}

/// Advances to the next `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
