//! Root finding over an extension field F_q = F_p[y]/(m).
//!
//! Used to place reductions of several algebraic numbers into one common
//! field. Works on dense polynomials whose coefficients are field elements.

use super::field::{ExtField, FieldElement, Raw, MAX_EXT_DEGREE};
use super::poly::PolyModP;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Polynomial in X over `field`, lowest degree first, trimmed.
#[derive(Clone, Debug)]
struct ExtPoly {
    c: Vec<Raw>,
}

struct Ring<'a> {
    f: &'a ExtField,
}

impl Ring<'_> {
    fn trim(&self, mut v: Vec<Raw>) -> ExtPoly {
        while v.last().is_some_and(|c| self.f.raw_is_zero(c)) {
            v.pop();
        }
        ExtPoly { c: v }
    }

    fn deg(&self, a: &ExtPoly) -> Option<usize> {
        a.c.len().checked_sub(1)
    }

    fn one(&self) -> ExtPoly {
        ExtPoly { c: vec![self.f.raw_one()] }
    }

    fn x(&self) -> ExtPoly {
        ExtPoly { c: vec![[0; MAX_EXT_DEGREE], self.f.raw_one()] }
    }

    fn sub(&self, a: &ExtPoly, b: &ExtPoly) -> ExtPoly {
        let n = a.c.len().max(b.c.len());
        let zero = [0; MAX_EXT_DEGREE];
        let v = (0..n)
            .map(|i| self.f.raw_sub(a.c.get(i).unwrap_or(&zero), b.c.get(i).unwrap_or(&zero)))
            .collect();
        self.trim(v)
    }

    fn add(&self, a: &ExtPoly, b: &ExtPoly) -> ExtPoly {
        let n = a.c.len().max(b.c.len());
        let zero = [0; MAX_EXT_DEGREE];
        let v = (0..n)
            .map(|i| self.f.raw_add(a.c.get(i).unwrap_or(&zero), b.c.get(i).unwrap_or(&zero)))
            .collect();
        self.trim(v)
    }

    fn mul(&self, a: &ExtPoly, b: &ExtPoly) -> ExtPoly {
        if a.c.is_empty() || b.c.is_empty() {
            return ExtPoly { c: Vec::new() };
        }
        let mut v = vec![[0u64; MAX_EXT_DEGREE]; a.c.len() + b.c.len() - 1];
        for (i, x) in a.c.iter().enumerate() {
            for (j, y) in b.c.iter().enumerate() {
                v[i + j] = self.f.raw_add(&v[i + j], &self.f.raw_mul(x, y));
            }
        }
        self.trim(v)
    }

    fn divrem(&self, a: &ExtPoly, b: &ExtPoly) -> (ExtPoly, ExtPoly) {
        let db = self.deg(b).expect("nonzero divisor");
        let Some(da) = self.deg(a) else {
            return (ExtPoly { c: Vec::new() }, ExtPoly { c: Vec::new() });
        };
        if da < db {
            return (ExtPoly { c: Vec::new() }, a.clone());
        }
        let inv = self.f.raw_inv(&b.c[db]).expect("nonzero leading coefficient");
        let mut r = a.c.clone();
        let mut q = vec![[0u64; MAX_EXT_DEGREE]; da - db + 1];
        for i in (0..=da - db).rev() {
            let coef = self.f.raw_mul(&r[i + db], &inv);
            q[i] = coef;
            for (j, y) in b.c.iter().enumerate() {
                r[i + j] = self.f.raw_sub(&r[i + j], &self.f.raw_mul(&coef, y));
            }
        }
        r.truncate(db);
        (self.trim(q), self.trim(r))
    }

    fn rem(&self, a: &ExtPoly, b: &ExtPoly) -> ExtPoly {
        self.divrem(a, b).1
    }

    fn monic(&self, a: &ExtPoly) -> ExtPoly {
        let Some(d) = self.deg(a) else { return a.clone() };
        let inv = self.f.raw_inv(&a.c[d]).expect("nonzero");
        ExtPoly { c: a.c.iter().map(|c| self.f.raw_mul(c, &inv)).collect() }
    }

    fn gcd(&self, a: &ExtPoly, b: &ExtPoly) -> ExtPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.c.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    fn pow_mod(&self, a: &ExtPoly, mut e: u128, m: &ExtPoly) -> ExtPoly {
        let mut acc = self.rem(&self.one(), m);
        let mut base = self.rem(a, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &base), m);
            }
            e >>= 1;
            if e > 0 {
                base = self.rem(&self.mul(&base, &base), m);
            }
        }
        acc
    }

    /// Splits a monic product of distinct linear factors into its roots.
    fn split_linear(&self, g: &ExtPoly, q: u128, rng: &mut ChaCha8Rng, out: &mut Vec<Raw>) {
        let n = self.deg(g).expect("nonzero");
        if n == 0 {
            return;
        }
        if n == 1 {
            // X + c: root −c
            let zero = [0; MAX_EXT_DEGREE];
            out.push(self.f.raw_sub(&zero, &g.c[0]));
            return;
        }
        let p = self.f.p();
        loop {
            let r = self.trim(
                (0..n)
                    .map(|_| {
                        let mut c = [0u64; MAX_EXT_DEGREE];
                        for v in c.iter_mut().take(self.f.degree()) {
                            *v = rng.gen_range(0..p);
                        }
                        c
                    })
                    .collect(),
            );
            if self.deg(&r).unwrap_or(0) == 0 {
                continue;
            }
            let cand = if p == 2 {
                let bits = 128 - (q - 1).leading_zeros(); // q = 2^bits
                let mut t = r.clone();
                let mut s = r.clone();
                for _ in 1..bits {
                    t = self.rem(&self.mul(&t, &t), g);
                    s = self.add(&s, &t);
                }
                s
            } else {
                self.sub(&self.pow_mod(&r, (q - 1) / 2, g), &self.one())
            };
            let h = self.gcd(g, &cand);
            let hd = self.deg(&h).unwrap_or(0);
            if hd > 0 && hd < n {
                self.split_linear(&h, q, rng, out);
                self.split_linear(&self.divrem(g, &h).0, q, rng, out);
                return;
            }
        }
    }
}

/// All roots of `f` (an F_p polynomial) lying in `field`, sorted by
/// coefficient vector. Repeated roots are reported once.
pub fn roots_in_field(f: &PolyModP, field: &Arc<ExtField>, seed: u64) -> Result<Vec<FieldElement>> {
    if f.p() != field.p() {
        return Err(Error::FieldMismatch);
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let q = field
        .size()
        .ok_or_else(|| Error::Overflow(format!("field size {}^{} exceeds 128 bits", field.p(), field.degree())))?;
    let ring = Ring { f: field };
    let lifted = ring.trim(
        f.coeffs()
            .iter()
            .map(|&c| {
                let mut r = [0u64; MAX_EXT_DEGREE];
                r[0] = c;
                r
            })
            .collect(),
    );
    let lifted = ring.monic(&lifted);
    if ring.deg(&lifted) == Some(0) {
        return Ok(Vec::new());
    }
    // X^q by k successive p-th powers.
    let mut xq = ring.x();
    for _ in 0..field.degree() {
        xq = ring.pow_mod(&xq, field.p() as u128, &lifted);
    }
    let g = ring.gcd(&lifted, &ring.sub(&xq, &ring.x()));
    let mut seed_mix = seed ^ 0xa076_1d64_78bd_642f;
    for &c in f.coeffs().iter().chain(field.modulus().coeffs()) {
        seed_mix = seed_mix.rotate_left(7) ^ c.wrapping_mul(0xe703_7ed1_a0b4_28db);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed_mix);
    let mut raw = Vec::new();
    ring.split_linear(&g, q, &mut rng, &mut raw);
    raw.sort_unstable();
    Ok(raw.into_iter().map(|c| FieldElement::from_raw(field.clone(), c)).collect())
}

/// The least monic irreducible polynomial of degree `d` over F_p, in the
/// order that reads the coefficient vector (c_0, …, c_{d−1}) as base-p digits.
pub fn standard_modulus(p: u64, d: usize) -> Result<PolyModP> {
    if d == 0 || d > MAX_EXT_DEGREE {
        return Err(Error::InvalidArgument(format!("degree {d} outside 1..={MAX_EXT_DEGREE}")));
    }
    let mut digits = vec![0u64; d];
    loop {
        let mut c = digits.clone();
        c.push(1);
        let g = PolyModP::new(p, c);
        if super::factor::is_irreducible(&g) {
            return Ok(g);
        }
        // increment base-p counter
        let mut i = 0;
        loop {
            if i == d {
                return Err(Error::InvalidArgument(format!("no irreducible of degree {d} mod {p}")));
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// F_{p^d} built on [`standard_modulus`].
pub fn standard_field(p: u64, d: usize) -> Result<Arc<ExtField>> {
    ExtField::new_unchecked(standard_modulus(p, d)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_split_quadratic() {
        let field = ExtField::prime_field(7);
        let roots = roots_in_field(&PolyModP::from_ints(&[-2, 0, 1], 7), &field, 0).unwrap();
        let vals: Vec<u64> = roots.iter().map(|r| r.coeffs()[0]).collect();
        assert_eq!(vals, vec![3, 4]);
    }

    #[test]
    fn roots_in_quadratic_extension() {
        // x^2 - 2 has no roots mod 3 but two in F_9.
        let f9 = standard_field(3, 2).unwrap();
        let f = PolyModP::from_ints(&[-2, 0, 1], 3);
        assert!(roots_in_field(&f, &ExtField::prime_field(3), 0).unwrap().is_empty());
        let roots = roots_in_field(&f, &f9, 0).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert_eq!(r.mul(r).unwrap(), FieldElement::from_base(&f9, 2));
        }
    }

    #[test]
    fn cube_roots_across_extensions() {
        // 2 is not a cube mod 7, so x^3 - 2 is irreducible there: its roots
        // live exactly in the extensions of degree divisible by 3.
        let f = PolyModP::from_ints(&[-2, 0, 0, 1], 7);
        for (d, expected) in [(2usize, 0usize), (3, 3), (6, 3)] {
            let field = standard_field(7, d).unwrap();
            let roots = roots_in_field(&f, &field, 5).unwrap();
            assert_eq!(roots.len(), expected, "d = {d}");
            for r in &roots {
                assert_eq!(r.pow(3), FieldElement::from_base(&field, 2));
            }
        }
        // x^3 + 1 = (x + 1)(x^2 + x + 1) over F_2.
        let f = PolyModP::from_ints(&[1, 0, 0, 1], 2);
        for (d, expected) in [(3usize, 1usize), (4, 3), (6, 3)] {
            let field = standard_field(2, d).unwrap();
            let roots = roots_in_field(&f, &field, 5).unwrap();
            assert_eq!(roots.len(), expected, "d = {d}");
            assert!(roots.iter().all(|r| r.pow(3).is_one()));
        }
    }

    #[test]
    fn standard_modulus_is_least() {
        assert_eq!(standard_modulus(3, 2).unwrap().coeffs(), &[1, 0, 1]);
        assert_eq!(standard_modulus(2, 2).unwrap().coeffs(), &[1, 1, 1]);
        assert_eq!(standard_modulus(7, 2).unwrap().coeffs(), &[1, 0, 1]);
        assert_eq!(standard_modulus(5, 2).unwrap().coeffs(), &[2, 0, 1]);
    }
}
