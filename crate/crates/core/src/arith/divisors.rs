//! Rough and smooth divisor predicates on factored integers.

use super::factor::FactoredInteger;
use crate::error::{Error, Result};

/// Enumeration cap for [`has_rough_divisor_in_range`].
pub const DIVISOR_ENUMERATION_CAP: u64 = 1 << 20;

/// Is there a divisor `m` of `n` with `low <= m <= high` whose prime factors
/// are all at least `rough_bound`?
///
/// The divisor 1 counts (it has no prime factors). Exceeding
/// [`DIVISOR_ENUMERATION_CAP`] enumerated divisors yields `CapExceeded`.
pub fn has_rough_divisor_in_range(
    n: &FactoredInteger,
    low: u128,
    high: u128,
    rough_bound: u128,
) -> Result<bool> {
    if low > high {
        return Err(Error::InvalidArgument(format!("low {low} > high {high}")));
    }
    if high == 0 {
        return Ok(false);
    }
    let rough: Vec<(u128, u32)> = n.factors().iter().copied().filter(|&(q, _)| q >= rough_bound).collect();
    let mut visited = 0u64;
    let found = search(&rough, 1, low, high, &mut visited)?;
    Ok(found)
}

fn search(primes: &[(u128, u32)], acc: u128, low: u128, high: u128, visited: &mut u64) -> Result<bool> {
    *visited += 1;
    if *visited > DIVISOR_ENUMERATION_CAP {
        return Err(Error::CapExceeded { size: *visited as u128, cap: DIVISOR_ENUMERATION_CAP as u128 });
    }
    if acc >= low {
        // acc <= high is maintained by the caller.
        return Ok(true);
    }
    let Some((&(q, e), rest)) = primes.split_first() else {
        return Ok(false);
    };
    let mut m = acc;
    for i in 0..=e {
        if i > 0 {
            match m.checked_mul(q) {
                Some(v) if v <= high => m = v,
                _ => break,
            }
        }
        if search(rest, m, low, high, visited)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Largest prime dividing `n`; undefined for 1.
pub fn largest_prime_factor(n: &FactoredInteger) -> Result<u128> {
    n.factors().last().map(|&(p, _)| p).ok_or(Error::UndefinedForUnit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factor_integer;

    #[test]
    fn spec_examples() {
        let n57 = factor_integer(57).unwrap();
        assert!(has_rough_divisor_in_range(&n57, 19, 19, 5).unwrap());
        assert!(!has_rough_divisor_in_range(&n57, 20, 56, 5).unwrap());
        let n8 = factor_integer(8).unwrap();
        assert!(!has_rough_divisor_in_range(&n8, 2, 8, 3).unwrap());
        assert_eq!(largest_prime_factor(&n57).unwrap(), 19);
        assert_eq!(largest_prime_factor(&n8).unwrap(), 2);
        assert_eq!(largest_prime_factor(&factor_integer(342).unwrap()).unwrap(), 19);
        assert_eq!(largest_prime_factor(&factor_integer(1).unwrap()), Err(Error::UndefinedForUnit));
    }

    #[test]
    fn one_is_vacuously_rough() {
        let n = factor_integer(10).unwrap();
        assert!(has_rough_divisor_in_range(&n, 1, 1, 1000).unwrap());
        assert!(has_rough_divisor_in_range(&n, 0, 3, 3).unwrap());
    }

    #[test]
    fn cap_is_reported() {
        // 2 * 3 * 5 * ... * 101: 2^26 divisors, all far below the huge window.
        let primes: Vec<(u128, u32)> = (2u128..=101).filter(|&q| crate::arith::is_prime(q)).map(|q| (q, 1)).collect();
        let primes = &primes[..21];
        let n = FactoredInteger::from_prime_powers(primes.to_vec()).unwrap();
        assert!(matches!(
            has_rough_divisor_in_range(&n, n.value() + 1, n.value() + 1, 2),
            Err(Error::CapExceeded { .. })
        ));
    }
}
