//! Census parameters (h, ε, c) as exact terminating decimals, and exact
//! comparisons of integers against rational powers p^r.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Nonnegative rational num/den in lowest terms, normally parsed from a
/// decimal literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Decimal {
    num: u128,
    den: u128,
}

impl Decimal {
    pub fn new(num: u128, den: u128) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let g = num.gcd(&den);
        Ok(Decimal { num: num / g, den: den / g })
    }

    pub fn integer(n: u128) -> Self {
        Decimal { num: n, den: 1 }
    }

    /// Exact value of the shortest decimal that round-trips `v`.
    pub fn from_f64(v: f64) -> Result<Self> {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidArgument(format!("{v} is not a finite nonnegative number")));
        }
        format!("{v}").parse()
    }

    pub fn num(&self) -> u128 {
        self.num
    }

    pub fn den(&self) -> u128 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add_integer(&self, n: u128) -> Result<Self> {
        let num = n
            .checked_mul(self.den)
            .and_then(|v| v.checked_add(self.num))
            .ok_or_else(|| Error::Overflow("decimal sum".into()))?;
        Decimal::new(num, self.den)
    }

    /// 1 − self, for self ≤ 1.
    pub fn one_minus(&self) -> Result<Self> {
        if self.num > self.den {
            return Err(Error::InvalidArgument(format!("{self} exceeds 1")));
        }
        Decimal::new(self.den - self.num, self.den)
    }
}

impl PartialOrd for Decimal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Decimal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.num.checked_mul(other.den), other.num.checked_mul(self.den)) {
            (Some(a), Some(b)) => a.cmp(&b),
            _ => (BigUint::from(self.num) * other.den).cmp(&(BigUint::from(other.num) * self.den)),
        }
    }
}

impl FromStr for Decimal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("'{s}' is not a nonnegative decimal"));
        let t = s.trim().strip_prefix('+').unwrap_or(s.trim());
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let frac = frac.trim_end_matches('0');
        let digits = format!("{int}{frac}");
        let num: u128 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
        let den = 10u128.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        Decimal::new(num, den)
    }
}

impl fmt::Display for Decimal {
    /// Terminating decimals print exactly; others fall back to 10 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut den = self.den;
        let (mut twos, mut fives) = (0u32, 0u32);
        while den.is_multiple_of(2) {
            den /= 2;
            twos += 1;
        }
        while den.is_multiple_of(5) {
            den /= 5;
            fives += 1;
        }
        if den != 1 {
            return f.write_str(&super::numfmt::format_ratio(self.num, self.den));
        }
        let places = twos.max(fives);
        let scaled = BigUint::from(self.num) * BigUint::from(10u32).pow(places) / BigUint::from(self.den);
        let digits = scaled.to_string();
        if places == 0 {
            return f.write_str(&digits);
        }
        let places = places as usize;
        let padded = format!("{digits:0>width$}", width = places + 1);
        let (i, fr) = padded.split_at(padded.len() - places);
        write!(f, "{i}.{fr}")
    }
}

/// Above these sizes exact power comparisons are replaced by floating point.
const EXACT_DEN_LIMIT: u128 = 100_000;
const EXACT_BITS_LIMIT: u64 = 1 << 24;

fn exact_feasible(base_bits: u64, p: u64, r: &Decimal) -> bool {
    let p_bits = 64 - p.leading_zeros() as u64;
    r.den <= EXACT_DEN_LIMIT
        && (r.num as u64).saturating_mul(p_bits) <= EXACT_BITS_LIMIT
        && base_bits.saturating_mul(r.den as u64) <= EXACT_BITS_LIMIT
}

/// Compares n with p^r exactly: n^den against p^num.
pub fn cmp_pow(n: u128, p: u64, r: &Decimal) -> Ordering {
    if n == 0 {
        return Ordering::Less;
    }
    let lhs = (n as f64).ln();
    let rhs = r.to_f64() * (p as f64).ln();
    let margin = 1e-9 * (1.0 + lhs.abs().max(rhs.abs()));
    if lhs > rhs + margin {
        return Ordering::Greater;
    }
    if lhs < rhs - margin {
        return Ordering::Less;
    }
    let n_bits = 128 - n.leading_zeros() as u64;
    if !exact_feasible(n_bits, p, r) {
        return lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal);
    }
    let a = BigUint::from(n).pow(r.den as u32);
    let b = BigUint::from(p).pow(r.num as u32);
    a.cmp(&b)
}

/// ⌊p^r⌋.
pub fn floor_pow(p: u64, r: &Decimal) -> u128 {
    let est = (p as f64).powf(r.to_f64());
    if est < 1e30 {
        let margin = est * 1e-12 + 1e-9;
        let frac = est.fract();
        if frac > margin && frac < 1.0 - margin {
            return est.floor() as u128;
        }
    }
    if !exact_feasible(0, p, r) {
        return est.floor() as u128;
    }
    let target = BigUint::from(p).pow(r.num as u32);
    if r.den == 1 {
        return target.to_u128().unwrap_or(u128::MAX);
    }
    target.nth_root(r.den as u32).to_u128().unwrap_or(u128::MAX)
}

/// ⌈p^r⌉.
pub fn ceil_pow(p: u64, r: &Decimal) -> u128 {
    let f = floor_pow(p, r);
    if cmp_pow(f, p, r) == Ordering::Equal {
        f
    } else {
        f + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Decimal {
        s.parse().unwrap()
    }

    #[test]
    fn parsing_and_display() {
        assert_eq!(d("0.05"), Decimal::new(1, 20).unwrap());
        assert_eq!(d("24"), Decimal::integer(24));
        assert_eq!(d("1.50"), Decimal::new(3, 2).unwrap());
        assert_eq!(d(".5"), Decimal::new(1, 2).unwrap());
        assert_eq!(Decimal::from_f64(0.1).unwrap(), Decimal::new(1, 10).unwrap());
        assert_eq!(Decimal::from_f64(5040.0).unwrap(), Decimal::integer(5040));
        for s in ["", ".", "-1", "1e5", "abc", "1.2.3"] {
            assert!(s.parse::<Decimal>().is_err(), "{s}");
        }
        assert_eq!(d("0.05").to_string(), "0.05");
        assert_eq!(d("24").to_string(), "24");
        assert_eq!(d("0.125").to_string(), "0.125");
        assert_eq!(Decimal::new(1, 3).unwrap().to_string(), "0.3333333333");
        assert!(d("0.02") < d("0.04"));
        assert_eq!(d("0.1").add_integer(2).unwrap(), Decimal::new(21, 10).unwrap());
        assert_eq!(d("0.1").one_minus().unwrap(), Decimal::new(9, 10).unwrap());
    }

    #[test]
    fn powers_match_integer_oracle() {
        // Oracle: ⌊p^{a/b}⌋ is the largest n with n^b ≤ p^a.
        for p in [2u64, 3, 7, 97, 1009, 65_521, 1_048_573] {
            for r in ["0.05", "0.3", "0.5", "0.9", "0.98", "1", "1.02", "1.5", "2.1", "4.05"] {
                let r = d(r);
                let f = floor_pow(p, &r);
                let target = BigUint::from(p).pow(r.num() as u32);
                assert!(BigUint::from(f).pow(r.den() as u32) <= target, "p={p} r={r}");
                assert!(BigUint::from(f + 1).pow(r.den() as u32) > target, "p={p} r={r}");
            }
        }
    }

    #[test]
    fn exact_powers_and_ties() {
        assert_eq!(floor_pow(4, &d("0.5")), 2);
        assert_eq!(ceil_pow(4, &d("0.5")), 2);
        assert_eq!(ceil_pow(5, &d("0.5")), 3);
        assert_eq!(floor_pow(3, &d("0.9")), 2);
        assert_eq!(ceil_pow(3, &d("0.9")), 3);
        assert_eq!(floor_pow(3, &d("1.1")), 3);
        assert_eq!(ceil_pow(3, &d("0.3")), 2);
        assert_eq!(cmp_pow(8, 4, &d("1.5")), Ordering::Equal);
        assert_eq!(cmp_pow(9, 4, &d("1.5")), Ordering::Greater);
        assert_eq!(cmp_pow(7, 4, &d("1.5")), Ordering::Less);
        assert_eq!(cmp_pow(1 << 60, 2, &d("60")), Ordering::Equal);
        assert_eq!(cmp_pow((1 << 60) - 1, 2, &d("60")), Ordering::Less);
        assert_eq!(cmp_pow(0, 2, &d("0")), Ordering::Less);
        assert_eq!(cmp_pow(1, 2, &d("0")), Ordering::Equal);
    }
}
