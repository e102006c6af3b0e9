//! Dense polynomials over a prime field F_p, p < 2^20.

use crate::arith::modmath::{inv_mod_u64, pow_mod_u64};
use crate::error::{Error, Result};
use std::fmt;

/// Largest admissible characteristic. Keeps every coefficient product and the
/// short accumulations of products inside 64-bit words.
pub const MAX_CHARACTERISTIC: u64 = 1 << 20;

/// A polynomial over F_p, lowest-degree coefficient first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyModP {
    p: u64,
    coeffs: Vec<u64>,
}

impl fmt::Debug for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.p)
    }
}

impl fmt::Display for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl PolyModP {
    /// Builds from residues, reducing and trimming.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        assert!((2..=MAX_CHARACTERISTIC).contains(&p), "characteristic {p} out of range");
        let mut poly = PolyModP { p, coeffs };
        for c in poly.coeffs.iter_mut() {
            *c %= p;
        }
        poly.trim();
        poly
    }

    /// Coefficientwise reduction of an integer polynomial.
    pub fn from_ints(coeffs: &[i64], p: u64) -> Self {
        let v = coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        Self::new(p, v)
    }

    pub fn zero(p: u64) -> Self {
        Self::new(p, Vec::new())
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    /// The monomial x.
    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.p, other.p, "polynomials over different prime fields");
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.p;
        Self::new(p, self.coeffs.iter().map(|&a| a * (c % p) % p).collect())
    }

    /// Monic associate; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = inv_mod_u64(self.leading(), self.p).expect("nonzero residue mod a prime is invertible");
        self.scale(inv)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| (self.coeff(i) + other.coeff(i)) % self.p).collect();
        Self::new(self.p, v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| (self.coeff(i) + self.p - other.coeff(i)) % self.p).collect();
        Self::new(self.p, v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut v = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = (v[i + j] + a * b) % p;
            }
        }
        Self::new(p, v)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_field(divisor);
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let p = self.p;
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(p), Self::zero(p)));
        };
        if nd < dd {
            return Ok((Self::zero(p), self.clone()));
        }
        let inv_lead = inv_mod_u64(divisor.leading(), p).expect("field element");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = rem[i + dd] * inv_lead % p;
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = (rem[i + j] + p - c * b % p) % p;
            }
        }
        rem.truncate(dd);
        Ok((Self::new(p, quot), Self::new(p, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact division; panics in debug builds if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.divrem(divisor).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let v = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect();
        Self::new(p, v)
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus).expect("nonzero modulus")
    }

    /// self^e mod modulus by square-and-multiply.
    pub fn pow_mod(&self, mut e: u128, modulus: &Self) -> Self {
        let mut base = self.rem(modulus).expect("nonzero modulus");
        let mut acc = Self::one(self.p).rem(modulus).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, modulus);
            }
        }
        acc
    }

    /// Value at a point of F_p.
    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p;
        self.coeffs.iter().rev().fold(0u64, |acc, &c| (acc * (x % p) + c) % p)
    }

    /// Substitutes x -> x^{1/p}; only meaningful when every exponent is a multiple of p.
    pub(crate) fn pth_root(&self) -> Self {
        let p = self.p as usize;
        let v = self.coeffs.iter().step_by(p).copied().collect();
        // a^(1/p) = a on F_p.
        Self::new(self.p, v)
    }

    /// Multiplicative inverse of a residue.
    pub(crate) fn inv_residue(p: u64, a: u64) -> u64 {
        pow_mod_u64(a, p - 2, p)
    }
}

/// Coefficientwise reduction of an integer polynomial mod p.
pub fn poly_reduce(f: &[i64], p: u64) -> PolyModP {
    PolyModP::from_ints(f, p)
}
