//! Certified integer factorization below 2^127.
//!
//! Trial division by the primes below [`TRIAL_BOUND`], then Brent's variant of
//! Pollard rho with the fixed polynomial schedule x^2 + c, c = 1, 2, 3, ...
//! Every reported prime is certified by [`is_prime`](super::is_prime). The
//! schedule has no randomness, so factorizations are reproducible bit for bit.

use super::modmath::{is_prime, Mont128};
use super::sieve::small_primes;
use crate::error::{Error, Result};
use num_integer::Integer;
use std::fmt;

pub const TRIAL_BOUND: u64 = 100_000;

/// Values handed to [`factor_integer`] must stay below this.
pub const FACTOR_CAP: u128 = 1 << 127;

/// A positive integer together with its prime-power factorization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    value: u128,
    factors: Vec<(u128, u32)>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger { value: 1, factors: Vec::new() }
    }

    /// Builds from explicit prime powers, checking primality and the product.
    pub fn from_prime_powers(mut factors: Vec<(u128, u32)>) -> Result<Self> {
        factors.sort_unstable();
        let mut value: u128 = 1;
        for w in factors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidArgument(format!("repeated prime {}", w[0].0)));
            }
        }
        for &(p, e) in &factors {
            if e == 0 || !is_prime(p) {
                return Err(Error::InvalidArgument(format!("{p}^{e} is not a prime power factor")));
            }
            let pe = p
                .checked_pow(e)
                .and_then(|pe| value.checked_mul(pe))
                .filter(|v| *v < FACTOR_CAP)
                .ok_or_else(|| Error::Overflow(format!("product exceeds 2^127 at {p}^{e}")))?;
            value = pe;
        }
        Ok(FactoredInteger { value, factors })
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    /// (prime, exponent) pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, q: u128) -> u32 {
        self.factors.iter().find(|&&(p, _)| p == q).map_or(0, |&(_, e)| e)
    }

    /// Product of two factored integers.
    pub fn mul(&self, other: &FactoredInteger) -> Result<FactoredInteger> {
        let value = self
            .value
            .checked_mul(other.value)
            .filter(|v| *v < FACTOR_CAP)
            .ok_or_else(|| Error::Overflow("factored product exceeds 2^127".into()))?;
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() || j < other.factors.len() {
            match (self.factors.get(i), other.factors.get(j)) {
                (Some(&(p, e)), Some(&(q, f))) if p == q => {
                    factors.push((p, e + f));
                    i += 1;
                    j += 1;
                }
                (Some(&(p, e)), Some(&(q, _))) if p < q => {
                    factors.push((p, e));
                    i += 1;
                }
                (Some(&(p, e)), None) => {
                    factors.push((p, e));
                    i += 1;
                }
                (_, Some(&(q, f))) => {
                    factors.push((q, f));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Ok(FactoredInteger { value, factors })
    }

    /// The least common multiple, keeping the larger exponent of each prime.
    pub fn lcm(&self, other: &FactoredInteger) -> Result<FactoredInteger> {
        let mut merged: Vec<(u128, u32)> = self.factors.clone();
        for &(q, f) in &other.factors {
            match merged.iter_mut().find(|(p, _)| *p == q) {
                Some(slot) => slot.1 = slot.1.max(f),
                None => merged.push((q, f)),
            }
        }
        FactoredInteger::from_prime_powers(merged)
    }

    /// Divides out `d`, which must divide the value.
    pub fn div_exact(&self, d: &FactoredInteger) -> Result<FactoredInteger> {
        let mut factors = Vec::new();
        for &(p, e) in &self.factors {
            let f = d.exponent_of(p);
            if f > e {
                return Err(Error::NonDivisor { ell: d.value, order: self.value });
            }
            if e > f {
                factors.push((p, e - f));
            }
        }
        if d.factors.iter().any(|&(q, _)| self.exponent_of(q) == 0) {
            return Err(Error::NonDivisor { ell: d.value, order: self.value });
        }
        Ok(FactoredInteger { value: self.value / d.value, factors })
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// One Brent–rho attempt with polynomial x^2 + c; returns a nontrivial factor.
fn brent_rho(n: u128, c: u128) -> Option<u128> {
    const BATCH: u64 = 128;
    const MAX_R: u64 = 1 << 34;
    let m = Mont128::new(n);
    let cm = m.to_mont(c);
    let f = |x: u128| m.add(m.mul(x, x), cm);
    let mut y = m.to_mont(2);
    let mut x = y;
    let mut ys = y;
    let mut q = m.one();
    let mut g: u128 = 1;
    let mut r: u64 = 1;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                let diff = x.abs_diff(y);
                q = m.mul(q, diff);
            }
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
        if r > MAX_R {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            let diff = x.abs_diff(ys);
            g = diff.gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_composite(n: u128, out: &mut Vec<u128>) {
    if is_prime(n) {
        out.push(n);
        return;
    }
    let r = super::modmath::isqrt(n);
    if r * r == n {
        split_composite(r, out);
        split_composite(r, out);
        return;
    }
    for c in 1u128.. {
        if let Some(d) = brent_rho(n, c) {
            split_composite(d, out);
            split_composite(n / d, out);
            return;
        }
    }
}

/// Complete certified factorization of `1 <= n < 2^127`.
pub fn factor_integer(n: u128) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    if n >= FACTOR_CAP {
        return Err(Error::RangeTooLarge { what: "factor input", value: n, cap: FACTOR_CAP });
    }
    let mut rest = n;
    let mut factors: Vec<(u128, u32)> = Vec::new();
    for &p in small_primes() {
        let p = p as u128;
        if p * p > rest {
            break;
        }
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let mut big = Vec::new();
        split_composite(rest, &mut big);
        big.sort_unstable();
        for q in big {
            match factors.last_mut() {
                Some((p, e)) if *p == q => *e += 1,
                _ => factors.push((q, 1)),
            }
        }
    }
    Ok(FactoredInteger { value: n, factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(mut n: u128) -> Vec<(u128, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn spec_examples() {
        let one = factor_integer(1).unwrap();
        assert_eq!(one.value(), 1);
        assert!(one.factors().is_empty());
        assert_eq!(factor_integer(57).unwrap().factors(), &[(3, 1), (19, 1)]);
        assert_eq!(factor_integer(63).unwrap().factors(), &[(3, 2), (7, 1)]);
    }

    #[test]
    fn matches_trial_division_oracle() {
        for n in (1..50_000u128).chain([999_983 * 999_979, 1 << 40, 600_851_475_143]) {
            assert_eq!(factor_integer(n).unwrap().factors(), trial_division(n).as_slice(), "n = {n}");
        }
    }

    #[test]
    fn large_semiprimes_and_powers() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        let f = factor_integer(p * q).unwrap();
        assert_eq!(f.factors(), &[(q, 1), (p, 1)]);
        let f = factor_integer(p * p * q).unwrap();
        assert_eq!(f.factors(), &[(q, 1), (p, 2)]);
        // Two 40-bit primes: the shape of the fifth cyclotomic value near 2^20.
        let a = 1_099_511_627_791u128;
        let b = 1_099_511_628_401u128;
        assert!(is_prime(a) && is_prime(b));
        let f = factor_integer(a * b * 6).unwrap();
        assert_eq!(f.factors(), &[(2, 1), (3, 1), (a, 1), (b, 1)]);
        // 2^127 - 1 is prime but outside the cap; 2^126 - 1 is not.
        let f = factor_integer((1u128 << 126) - 1).unwrap();
        let product: u128 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
        assert_eq!(product, (1u128 << 126) - 1);
        assert!(f.primes().all(is_prime));
    }

    #[test]
    fn cap_and_zero() {
        assert!(matches!(factor_integer(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(factor_integer(FACTOR_CAP), Err(Error::RangeTooLarge { .. })));
    }

    #[test]
    fn mul_lcm_div() {
        let a = factor_integer(12).unwrap();
        let b = factor_integer(90).unwrap();
        assert_eq!(a.mul(&b).unwrap(), factor_integer(1080).unwrap());
        assert_eq!(a.lcm(&b).unwrap(), factor_integer(180).unwrap());
        assert_eq!(b.div_exact(&factor_integer(15).unwrap()).unwrap(), factor_integer(6).unwrap());
        assert!(b.div_exact(&factor_integer(7).unwrap()).is_err());
        assert_eq!(a.to_string(), "2^2 * 3");
    }
}
