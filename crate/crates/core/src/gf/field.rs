//! Extension fields F_p[x]/(g) for monic irreducible g, and their elements.

use super::factor::is_irreducible;
use super::poly::PolyModP;
use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Largest supported extension degree.
pub const MAX_EXT_DEGREE: usize = 12;

pub(crate) type Raw = [u64; MAX_EXT_DEGREE];

/// The field F_p[x]/(g). Elements hold an `Arc` to their field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtField {
    p: u64,
    modulus: PolyModP,
    k: usize,
    /// Negated low coefficients of the modulus: x^k = Σ tail[j] x^j.
    tail: Raw,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[x]/({})", self.p, self.modulus)
    }
}

impl ExtField {
    /// Checks that `modulus` is monic and irreducible.
    pub fn new(modulus: PolyModP) -> Result<Arc<Self>> {
        if modulus.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !modulus.is_monic() || modulus.degree() == Some(0) {
            return Err(Error::InvalidArgument(format!("modulus {modulus} must be monic of degree >= 1")));
        }
        if !is_irreducible(&modulus) {
            return Err(Error::InvalidArgument(format!("modulus {modulus} is reducible")));
        }
        Self::new_unchecked(modulus)
    }

    /// Skips the irreducibility test; the caller vouches for it.
    pub(crate) fn new_unchecked(modulus: PolyModP) -> Result<Arc<Self>> {
        let k = modulus.degree().ok_or(Error::ZeroPolynomial)?;
        if k == 0 || k > MAX_EXT_DEGREE {
            return Err(Error::InvalidArgument(format!("extension degree {k} outside 1..={MAX_EXT_DEGREE}")));
        }
        let p = modulus.p();
        let mut tail = [0u64; MAX_EXT_DEGREE];
        for (j, t) in tail.iter_mut().enumerate().take(k) {
            *t = (p - modulus.coeff(j)) % p;
        }
        Ok(Arc::new(ExtField { p, modulus, k, tail }))
    }

    /// The prime field F_p itself, as F_p[x]/(x).
    pub fn prime_field(p: u64) -> Arc<Self> {
        Self::new_unchecked(PolyModP::x(p)).expect("degree one")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &PolyModP {
        &self.modulus
    }

    /// p^k when it fits in 128 bits.
    pub fn size(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.k as u32)
    }

    /// p^k − 1, the order of the multiplicative group.
    pub fn group_order(&self) -> Result<u128> {
        self.size()
            .map(|q| q - 1)
            .ok_or_else(|| Error::Overflow(format!("{}^{} exceeds 128 bits", self.p, self.k)))
    }

    pub(crate) fn raw_one(&self) -> Raw {
        let mut r = [0u64; MAX_EXT_DEGREE];
        r[0] = 1;
        r
    }

    pub(crate) fn raw_mul(&self, a: &Raw, b: &Raw) -> Raw {
        let (p, k) = (self.p, self.k);
        let mut t = [0u64; 2 * MAX_EXT_DEGREE - 1];
        for i in 0..k {
            if a[i] == 0 {
                continue;
            }
            for j in 0..k {
                t[i + j] += a[i] * b[j];
            }
        }
        // Products are < 2^40 and at most 12 are summed: no overflow.
        for i in (k..2 * k - 1).rev() {
            let c = t[i] % p;
            if c == 0 {
                continue;
            }
            for j in 0..k {
                t[i - k + j] += c * self.tail[j];
            }
        }
        let mut out = [0u64; MAX_EXT_DEGREE];
        for i in 0..k {
            out[i] = t[i] % p;
        }
        out
    }

    pub(crate) fn raw_pow(&self, a: &Raw, mut e: u128) -> Raw {
        let mut acc = self.raw_one();
        let mut base = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.raw_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.raw_mul(&base, &base);
            }
        }
        acc
    }

    pub(crate) fn raw_add(&self, a: &Raw, b: &Raw) -> Raw {
        let mut out = [0u64; MAX_EXT_DEGREE];
        for i in 0..self.k {
            out[i] = (a[i] + b[i]) % self.p;
        }
        out
    }

    pub(crate) fn raw_sub(&self, a: &Raw, b: &Raw) -> Raw {
        let mut out = [0u64; MAX_EXT_DEGREE];
        for i in 0..self.k {
            out[i] = (a[i] + self.p - b[i]) % self.p;
        }
        out
    }

    pub(crate) fn raw_is_zero(&self, a: &Raw) -> bool {
        a[..self.k].iter().all(|&c| c == 0)
    }

    pub(crate) fn raw_is_one(&self, a: &Raw) -> bool {
        a[0] == 1 && a[1..self.k].iter().all(|&c| c == 0)
    }

    /// a^{-1} = a^{q-2}; fails for the zero element.
    pub(crate) fn raw_inv(&self, a: &Raw) -> Result<Raw> {
        if self.raw_is_zero(a) {
            return Err(Error::ZeroElement);
        }
        // a^{-1} = (a^p · … · a^{p^{k-1}}) / N(a)
        let mut conj_prod = self.raw_one();
        let mut c = *a;
        for _ in 1..self.k {
            c = self.raw_pow(&c, self.p as u128);
            conj_prod = self.raw_mul(&conj_prod, &c);
        }
        let norm = self.raw_mul(&conj_prod, a)[0];
        let inv_norm = PolyModP::inv_residue(self.p, norm);
        let mut out = conj_prod;
        for v in out.iter_mut().take(self.k) {
            *v = *v * inv_norm % self.p;
        }
        Ok(out)
    }

    pub(crate) fn raw_from_poly(&self, f: &PolyModP) -> Raw {
        let r = f.rem(&self.modulus).expect("nonzero modulus");
        let mut out = [0u64; MAX_EXT_DEGREE];
        for (i, &c) in r.coeffs().iter().enumerate() {
            out[i] = c;
        }
        out
    }
}

/// An element of F_p[x]/(g), carrying its field.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<ExtField>,
    c: Raw,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.c == other.c
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self.as_poly(), self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_poly())
    }
}

pub(crate) fn same_field(a: &Arc<ExtField>, b: &Arc<ExtField>) -> bool {
    Arc::ptr_eq(a, b) || (a.p == b.p && a.modulus == b.modulus)
}

impl FieldElement {
    pub(crate) fn from_raw(field: Arc<ExtField>, c: Raw) -> Self {
        FieldElement { field, c }
    }


    /// Reduces `f` modulo the field's modulus.
    pub fn from_poly(field: &Arc<ExtField>, f: &PolyModP) -> Result<Self> {
        if f.p() != field.p {
            return Err(Error::FieldMismatch);
        }
        Ok(FieldElement { c: field.raw_from_poly(f), field: field.clone() })
    }

    /// Element with the given coefficients (lowest first), reduced mod p.
    pub fn from_coeffs(field: &Arc<ExtField>, coeffs: &[u64]) -> Result<Self> {
        Self::from_poly(field, &PolyModP::new(field.p, coeffs.to_vec()))
    }

    pub fn from_base(field: &Arc<ExtField>, c: u64) -> Self {
        let mut r = [0u64; MAX_EXT_DEGREE];
        r[0] = c % field.p;
        FieldElement { field: field.clone(), c: r }
    }

    pub fn one(field: &Arc<ExtField>) -> Self {
        Self::from_base(field, 1)
    }

    pub fn zero(field: &Arc<ExtField>) -> Self {
        Self::from_base(field, 0)
    }

    /// The class of x, i.e. a root of the modulus.
    pub fn generator(field: &Arc<ExtField>) -> Self {
        Self::from_poly(field, &PolyModP::x(field.p)).expect("same characteristic")
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c[..self.field.k]
    }

    pub fn as_poly(&self) -> PolyModP {
        PolyModP::new(self.field.p, self.coeffs().to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.field.raw_is_zero(&self.c)
    }

    pub fn is_one(&self) -> bool {
        self.field.raw_is_one(&self.c)
    }

    /// True when the element lies in the prime subfield.
    pub fn in_prime_field(&self) -> bool {
        self.c[1..self.field.k].iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FieldElement { field: self.field.clone(), c: self.field.raw_mul(&self.c, &other.c) })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FieldElement { field: self.field.clone(), c: self.field.raw_add(&self.c, &other.c) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FieldElement { field: self.field.clone(), c: self.field.raw_sub(&self.c, &other.c) })
    }

    pub fn neg(&self) -> Self {
        let zero = [0u64; MAX_EXT_DEGREE];
        FieldElement { field: self.field.clone(), c: self.field.raw_sub(&zero, &self.c) }
    }

    /// Square-and-multiply; a^0 = 1 (including 0^0).
    pub fn pow(&self, e: u128) -> Self {
        FieldElement { field: self.field.clone(), c: self.field.raw_pow(&self.c, e) }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(FieldElement { field: self.field.clone(), c: self.field.raw_inv(&self.c)? })
    }

    /// a^p.
    pub fn frobenius(&self) -> Self {
        self.pow(self.field.p as u128)
    }

    /// N(a) = a^{(p^k − 1)/(p − 1)} = a · a^p · … · a^{p^{k−1}}, a residue mod p.
    pub fn norm_to_base(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let f = &self.field;
        let mut acc = self.c;
        let mut conj = self.c;
        for _ in 1..f.k {
            conj = f.raw_pow(&conj, f.p as u128);
            acc = f.raw_mul(&acc, &conj);
        }
        debug_assert!(acc[1..f.k].iter().all(|&c| c == 0), "norm must lie in F_p");
        Ok(acc[0])
    }

    /// Degree of the element over F_p: the least d with a^{p^d} = a.
    pub fn degree_over_base(&self) -> usize {
        let mut c = self.frobenius();
        let mut d = 1;
        while c != *self {
            c = c.frobenius();
            d += 1;
        }
        d
    }
}

pub fn ext_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    a.mul(b)
}

pub fn ext_pow(a: &FieldElement, e: u128) -> FieldElement {
    a.pow(e)
}

pub fn frobenius(a: &FieldElement) -> FieldElement {
    a.frobenius()
}

pub fn norm_to_base(a: &FieldElement) -> Result<u64> {
    a.norm_to_base()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Arc<ExtField> {
        ExtField::new(PolyModP::new(3, vec![1, 0, 1])).unwrap()
    }

    /// Exhaustive power oracle: repeated multiplication.
    fn naive_pow(a: &FieldElement, e: u32) -> FieldElement {
        let mut acc = FieldElement::one(a.field());
        for _ in 0..e {
            acc = acc.mul(a).unwrap();
        }
        acc
    }

    #[test]
    fn pow_examples_in_f9() {
        let field = f9();
        let t = FieldElement::generator(&field);
        assert_eq!(t.pow(2), FieldElement::from_base(&field, 2));
        assert_eq!(t.pow(4), FieldElement::one(&field));
        assert_eq!(naive_pow(&t, 4), FieldElement::one(&field));
        assert_eq!(t.pow(0), FieldElement::one(&field));
        for e in 0..30 {
            assert_eq!(t.pow(e), naive_pow(&t, e as u32));
        }
    }

    #[test]
    fn frobenius_examples() {
        let field = f9();
        let t = FieldElement::generator(&field);
        assert_eq!(t.frobenius(), FieldElement::from_coeffs(&field, &[0, 2]).unwrap());
        assert_eq!(t.frobenius().frobenius(), t);
        for c in 0..3 {
            let e = FieldElement::from_base(&field, c);
            assert_eq!(e.frobenius(), e);
        }
    }

    #[test]
    fn norm_examples() {
        let field = f9();
        let t = FieldElement::generator(&field);
        assert_eq!(t.norm_to_base().unwrap(), 1);
        assert_eq!(FieldElement::from_base(&field, 2).norm_to_base().unwrap(), 1); // 2^2 = 4 = 1
        let f25 = ExtField::new(PolyModP::new(5, vec![4, 3, 1])).unwrap();
        let beta = FieldElement::generator(&f25);
        assert_eq!(beta.norm_to_base().unwrap(), 4);
        // Oracle: β^{(25-1)/(5-1)} = β^6 by direct multiplication.
        assert_eq!(naive_pow(&beta, 6), FieldElement::from_base(&f25, 4));
        assert_eq!(FieldElement::zero(&f25).norm_to_base(), Err(Error::ZeroElement));
        for c in 1..5 {
            let e = FieldElement::from_base(&f25, c);
            assert_eq!(e.norm_to_base().unwrap(), c * c % 5);
        }
    }

    #[test]
    fn field_mismatch() {
        let a = FieldElement::generator(&f9());
        let f25 = ExtField::new(PolyModP::new(5, vec![4, 3, 1])).unwrap();
        let b = FieldElement::generator(&f25);
        assert_eq!(a.mul(&b), Err(Error::FieldMismatch));
        // Structurally equal fields built separately interoperate.
        let c = FieldElement::generator(&f9());
        assert!(a.mul(&c).is_ok());
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert!(ExtField::new(PolyModP::new(7, vec![5, 0, 1])).is_err());
        assert!(ExtField::new(PolyModP::new(7, vec![1, 0, 2])).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let f25 = ExtField::new(PolyModP::new(5, vec![4, 3, 1])).unwrap();
        for a0 in 0..5 {
            for a1 in 0..5 {
                let a = FieldElement::from_coeffs(&f25, &[a0, a1]).unwrap();
                if a.is_zero() {
                    assert!(a.inv().is_err());
                } else {
                    assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
                }
            }
        }
    }
}
