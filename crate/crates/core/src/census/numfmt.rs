//! Fixed-point rendering with 10 significant digits, rounding half to even,
//! computed exactly for rationals and for rational powers of integers.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

const SIG: i32 = 10;

/// A positive exact quantity that can report ⌊v·10^m⌋ and whether
/// v·10^m is an integer.
trait Exact {
    fn floor_scaled(&self, m: i32) -> BigUint;
    fn integral_scaled(&self, m: i32) -> bool;
    fn approx_log10(&self) -> f64;
}

struct Fraction {
    num: BigUint,
    den: BigUint,
}

impl Exact for Fraction {
    fn floor_scaled(&self, m: i32) -> BigUint {
        if m >= 0 {
            &self.num * pow10(m as u32) / &self.den
        } else {
            &self.num / (&self.den * pow10((-m) as u32))
        }
    }

    fn integral_scaled(&self, m: i32) -> bool {
        if m >= 0 {
            (&self.num * pow10(m as u32) % &self.den).is_zero()
        } else {
            (&self.num % (&self.den * pow10((-m) as u32))).is_zero()
        }
    }

    fn approx_log10(&self) -> f64 {
        log10_big(&self.num) - log10_big(&self.den)
    }
}

/// base^{a/b}
struct Root {
    base: u64,
    a: u32,
    b: u32,
}

impl Root {
    fn scaled_power(&self, m: i32) -> (BigUint, BigUint) {
        // v·10^m = (base^a · 10^{m b})^{1/b}; for m < 0 the 10-power goes below.
        let pa = BigUint::from(self.base).pow(self.a);
        if m >= 0 {
            (pa * pow10(m as u32 * self.b), BigUint::from(1u32))
        } else {
            (pa, pow10((-m) as u32 * self.b))
        }
    }
}

impl Exact for Root {
    fn floor_scaled(&self, m: i32) -> BigUint {
        let (num, den) = self.scaled_power(m);
        (num / den).nth_root(self.b)
    }

    fn integral_scaled(&self, m: i32) -> bool {
        let (num, den) = self.scaled_power(m);
        if !(&num % &den).is_zero() {
            return false;
        }
        let q = num / den;
        q.nth_root(self.b).pow(self.b) == q
    }

    fn approx_log10(&self) -> f64 {
        (self.base as f64).log10() * self.a as f64 / self.b as f64
    }
}

fn pow10(k: u32) -> BigUint {
    BigUint::from(10u32).pow(k)
}

fn log10_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().unwrap_or(f64::MAX).log10()
    } else {
        let shifted = n >> (bits - 64) as usize;
        shifted.to_f64().unwrap().log10() + (bits - 64) as f64 * std::f64::consts::LOG10_2
    }
}

fn render(v: &dyn Exact) -> String {
    // Exponent e with 10^e ≤ v < 10^{e+1}.
    let mut e = v.approx_log10().floor() as i32;
    loop {
        let lead = v.floor_scaled(-e);
        if lead.is_zero() {
            e -= 1;
        } else if lead >= BigUint::from(10u32) {
            e += 1;
        } else {
            break;
        }
    }
    let m = SIG - 1 - e;
    let mut n = v.floor_scaled(m);
    let next = v.floor_scaled(m + 1);
    let digit = (&next % 10u32).to_u32().unwrap();
    let round_up = match digit {
        0..=4 => false,
        6..=9 => true,
        _ => !v.integral_scaled(m + 1) || (&n % 2u32) == BigUint::from(1u32),
    };
    let mut m = m;
    if round_up {
        n += 1u32;
        if n == pow10(SIG as u32) {
            n = pow10(SIG as u32 - 1);
            m -= 1;
        }
    }
    place_point(&n.to_string(), m)
}

/// digits · 10^{−m} as a fixed-point string.
fn place_point(digits: &str, m: i32) -> String {
    if m <= 0 {
        return format!("{digits}{}", "0".repeat((-m) as usize));
    }
    let m = m as usize;
    if m >= digits.len() {
        format!("0.{}{digits}", "0".repeat(m - digits.len()))
    } else {
        let (i, f) = digits.split_at(digits.len() - m);
        format!("{i}.{f}")
    }
}

/// num/den to 10 significant digits; "0" for zero, "nan" for 0/0.
pub fn format_ratio(num: u128, den: u128) -> String {
    format_big_ratio(BigUint::from(num), BigUint::from(den))
}

pub fn format_big_ratio(num: BigUint, den: BigUint) -> String {
    if den.is_zero() {
        return "nan".into();
    }
    if num.is_zero() {
        return "0".into();
    }
    render(&Fraction { num, den })
}

/// base^{a/b} to 10 significant digits.
pub fn format_root(base: u64, a: u32, b: u32) -> String {
    assert!(b > 0 && base > 0);
    render(&Root { base, a, b })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        assert_eq!(format_ratio(1, 2), "0.5000000000");
        assert_eq!(format_ratio(1, 3), "0.3333333333");
        assert_eq!(format_ratio(2, 3), "0.6666666667");
        assert_eq!(format_ratio(1, 1), "1.000000000");
        assert_eq!(format_ratio(12345, 10), "1234.500000");
        assert_eq!(format_ratio(0, 5), "0");
        assert_eq!(format_ratio(0, 0), "nan");
        assert_eq!(format_ratio(1, 80), "0.01250000000");
        assert_eq!(format_ratio(123_456_789_012, 1), "123456789000");
        assert_eq!(format_ratio(99_999_999_997, 10), "10000000000");
    }

    #[test]
    fn half_even() {
        // 12345678905 / 10^10 sits exactly between two 10-digit values.
        assert_eq!(format_ratio(12_345_678_905, 10_000_000_000), "1.234567890");
        assert_eq!(format_ratio(12_345_678_915, 10_000_000_000), "1.234567892");
        // Just above the tie rounds up.
        assert_eq!(format_ratio(123_456_789_051, 100_000_000_000), "1.234567891");
    }

    #[test]
    fn roots() {
        assert_eq!(format_root(4, 1, 2), "2.000000000");
        assert_eq!(format_root(2, 1, 2), "1.414213562");
        assert_eq!(format_root(11, 2, 2), "11.00000000");
        assert_eq!(format_root(1009, 3, 2), "32050.64319");
        assert_eq!(format_root(997, 1, 6), "3.160694541");
        assert_eq!(format_root(1000, 6, 2), "1000000000");
        assert_eq!(format_root(10, 1, 1), "10.00000000");
    }
}
