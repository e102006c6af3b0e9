//! Primes where the order of an integer a is at most √p / ln p.

use super::driver::{chunks, Workers};
use crate::arith::modmath::pow_mod_u64;
use crate::arith::{factor_integer, for_each_prime};
use crate::error::{Error, Result};

/// Largest bound for the integer-order census.
pub const SMALL_ORDER_CAP: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallOrderCensus {
    pub a: i64,
    pub x: u64,
    pub violations: u64,
    pub total: u64,
}

/// Multiplicative order of a mod p, p ∤ a.
pub fn order_mod_p(a: i64, p: u64) -> Result<u64> {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Err(Error::ZeroElement);
    }
    let mut n = p - 1;
    for &(q, e) in factor_integer(n as u128)?.factors() {
        let q = q as u64;
        for _ in 0..e {
            if pow_mod_u64(r, n / q, p) == 1 {
                n /= q;
            } else {
                break;
            }
        }
    }
    Ok(n)
}

/// ord ≤ √p / ln p, natural logarithm.
pub fn is_violation(ord: u64, p: u64) -> bool {
    let pf = p as f64;
    (ord as f64) <= pf.sqrt() / pf.ln()
}

pub fn run_small_order_census(a: i64, x: u64, workers: &Workers) -> Result<SmallOrderCensus> {
    if a.unsigned_abs() <= 1 {
        return Err(Error::InvalidArgument(format!("|a| must exceed 1, got {a}")));
    }
    if x > SMALL_ORDER_CAP {
        return Err(Error::BudgetExceeded(format!("bound {x} exceeds {SMALL_ORDER_CAP}")));
    }
    let parts = workers.map(&chunks(2, x + 1), |chunk| {
        let (mut v, mut t) = (0u64, 0u64);
        let mut err = None;
        for_each_prime(chunk.lo, chunk.hi, |p| {
            if a % p as i64 == 0 || err.is_some() {
                return;
            }
            t += 1;
            match order_mod_p(a, p) {
                Ok(o) => v += is_violation(o, p) as u64,
                Err(e) => err = Some(e),
            }
        })?;
        err.map_or(Ok((v, t)), Err)
    })?;
    let (violations, total) = parts.into_iter().fold((0, 0), |(a, b), (c, d)| (a + c, b + d));
    Ok(SmallOrderCensus { a, x, violations, total })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(a: i64, p: u64) -> u64 {
        let r = a.rem_euclid(p as i64) as u64;
        let mut acc = r;
        let mut n = 1;
        while acc != 1 {
            acc = acc * r % p;
            n += 1;
        }
        n
    }

    #[test]
    fn hand_examples() {
        assert_eq!(order_mod_p(2, 7).unwrap(), 3);
        assert!(!is_violation(3, 7));
        assert_eq!(order_mod_p(2, 3).unwrap(), 2);
        assert!(!is_violation(2, 3));
        assert_eq!(order_mod_p(3, 2).unwrap(), 1);
        assert!(is_violation(1, 2));
        let w = Workers::new(1).unwrap();
        assert_eq!(run_small_order_census(3, 2, &w).unwrap(), SmallOrderCensus { a: 3, x: 2, violations: 1, total: 1 });
        assert_eq!(run_small_order_census(2, 2, &w).unwrap().total, 0);
        assert!(run_small_order_census(-1, 100, &w).is_err());
    }

    #[test]
    fn orders_match_brute_force() {
        for p in crate::arith::sieve_primes(2, 3000).unwrap() {
            for a in [2i64, 3, -2, 10] {
                if a % p as i64 != 0 {
                    assert_eq!(order_mod_p(a, p).unwrap(), brute_order(a, p), "a={a} p={p}");
                }
            }
        }
    }

    #[test]
    fn violations_by_brute_force() {
        let w = Workers::new(3).unwrap();
        let got = run_small_order_census(2, 5000, &w).unwrap();
        let mut v = 0;
        let mut t = 0;
        for p in crate::arith::sieve_primes(3, 5001).unwrap() {
            t += 1;
            let o = brute_order(2, p) as f64;
            if o <= (p as f64).sqrt() / (p as f64).ln() {
                v += 1;
            }
        }
        assert_eq!((got.violations, got.total), (v, t));
    }
}
