//! From a minimal polynomial over Z to the reductions of its root modulo p.
//!
//! A prime is *excluded* when it divides the leading coefficient, the
//! constant term (so the reduction is nonzero) or the discriminant.

use crate::arith::FactoredInteger;
use crate::error::{Error, Result};
use crate::gf::{
    factor_mod_p_seeded, roots_in_field, ExtField, FieldElement, PolyFactor, PolyModP, MAX_CHARACTERISTIC,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::sync::Arc;

/// An algebraic number given by its minimal polynomial
/// c_k x^k + … + c_0 (primitive, c_k > 0, irreducible over Q).
#[derive(Clone, Debug)]
pub struct AlgebraicNumberSpec {
    coeffs: Vec<i64>,
    label: String,
    discriminant: BigInt,
    seed: u64,
}

impl PartialEq for AlgebraicNumberSpec {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.label == other.label
    }
}

/// Local picture of the minimal polynomial at one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplitting {
    pub p: u64,
    /// Irreducible factor degrees, repeated by multiplicity, ascending.
    pub degrees: Vec<usize>,
    pub ramified: bool,
    pub excluded: bool,
}

/// Outcome of the modular irreducibility spot check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityEvidence {
    /// Some prime shows a factor-degree pattern incompatible with any
    /// rational factorization.
    Certified { witness_primes: Vec<u64> },
    /// Every tested prime still admits the listed proper factor degrees.
    Inconclusive { possible_degrees: Vec<usize> },
}

impl AlgebraicNumberSpec {
    /// Coefficients lowest degree first.
    pub fn new(coeffs: Vec<i64>, label: impl Into<String>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::InvalidArgument("minimal polynomial must have degree >= 1".into()));
        }
        if *coeffs.last().unwrap() <= 0 {
            return Err(Error::InvalidArgument("leading coefficient must be positive".into()));
        }
        if coeffs[0] == 0 {
            return Err(Error::InvalidArgument("constant term is zero (α = 0 or reducible)".into()));
        }
        let content = coeffs.iter().fold(0i64, |g, &c| g.gcd(&c));
        if content != 1 {
            return Err(Error::InvalidArgument(format!("polynomial is not primitive (content {content})")));
        }
        if coeffs.len() - 1 > crate::gf::MAX_EXT_DEGREE {
            return Err(Error::InvalidArgument(format!(
                "degree {} exceeds the supported {}",
                coeffs.len() - 1,
                crate::gf::MAX_EXT_DEGREE
            )));
        }
        let discriminant = discriminant(&coeffs);
        if discriminant.is_zero() {
            return Err(Error::InvalidArgument("polynomial has a repeated root".into()));
        }
        Ok(AlgebraicNumberSpec { coeffs, label: label.into(), discriminant, seed: 0 })
    }

    /// Seed for the randomized equal-degree splitting. Results do not depend on it.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// deg(α).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    fn check_prime(p: u64) -> Result<()> {
        if p > MAX_CHARACTERISTIC {
            return Err(Error::RangeTooLarge {
                what: "characteristic",
                value: p as u128,
                cap: MAX_CHARACTERISTIC as u128,
            });
        }
        if !crate::arith::is_prime(p as u128) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        Ok(())
    }

    /// p divides c_k, c_0 or the discriminant.
    pub fn is_excluded(&self, p: u64) -> bool {
        let pi = p as i64;
        self.coeffs[0] % pi == 0
            || self.coeffs[self.degree()] % pi == 0
            || (&self.discriminant % BigInt::from(p)).is_zero()
    }

    /// The minimal polynomial mod p, made monic.
    pub fn reduced(&self, p: u64) -> PolyModP {
        PolyModP::from_ints(&self.coeffs, p).monic()
    }

    /// Canonically ordered factorization of the reduced polynomial.
    pub fn local_factors(&self, p: u64) -> Result<Vec<PolyFactor>> {
        Self::check_prime(p)?;
        let f = PolyModP::from_ints(&self.coeffs, p);
        if f.is_zero() {
            return Ok(Vec::new());
        }
        factor_mod_p_seeded(&f, self.seed)
    }

    pub fn classify_prime(&self, p: u64) -> Result<PrimeSplitting> {
        let factors = self.local_factors(p)?;
        let mut degrees: Vec<usize> = factors
            .iter()
            .flat_map(|(g, m)| std::iter::repeat_n(g.degree().unwrap_or(0), *m as usize))
            .collect();
        degrees.sort_unstable();
        let ramified = factors.iter().any(|&(_, m)| m > 1);
        Ok(PrimeSplitting { p, degrees, ramified, excluded: self.is_excluded(p) })
    }

    /// One field element per irreducible factor of degree `d`: the class of x
    /// in F_p[x]/(g).
    pub fn reductions_of_degree(&self, p: u64, d: usize) -> Result<Vec<FieldElement>> {
        Self::check_prime(p)?;
        if self.is_excluded(p) {
            return Err(Error::ExcludedPrime(p));
        }
        self.local_factors(p)?
            .into_iter()
            .filter(|(g, _)| g.degree() == Some(d))
            .map(|(g, _)| Ok(FieldElement::generator(&ExtField::new_unchecked(g)?)))
            .collect()
    }

    /// All reductions of α that land in the given field, i.e. the roots of
    /// the minimal polynomial there.
    pub fn reductions_in_field(&self, field: &Arc<ExtField>) -> Result<Vec<FieldElement>> {
        let p = field.p();
        Self::check_prime(p)?;
        if self.is_excluded(p) {
            return Err(Error::ExcludedPrime(p));
        }
        roots_in_field(&self.reduced(p), field, self.seed)
    }

    /// p is not excluded and some irreducible factor has degree exactly d.
    pub fn is_in_s(&self, p: u64, d: usize) -> bool {
        if Self::check_prime(p).is_err() || self.is_excluded(p) {
            return false;
        }
        self.local_factors(p)
            .map(|fs| fs.iter().any(|(g, _)| g.degree() == Some(d)))
            .unwrap_or(false)
    }

    /// N(α) = (−1)^k c_0 / c_k in lowest terms.
    pub fn norm(&self) -> Ratio<i128> {
        let k = self.degree();
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        Ratio::new(sign * self.coeffs[0] as i128, self.coeffs[k] as i128)
    }

    /// |N(α)| = 1.
    pub fn is_unit_norm(&self) -> bool {
        let n = self.norm();
        n.numer().abs() == 1 && n.denom().abs() == 1
    }

    /// Spot check of irreducibility over Q from factor-degree patterns at
    /// the first `prime_count` unexcluded primes.
    pub fn irreducibility_evidence(&self, prime_count: usize) -> IrreducibilityEvidence {
        let n = self.degree();
        let mut possible: BTreeSet<usize> = (1..n).collect();
        let mut witnesses = Vec::new();
        let mut tested = 0;
        let mut p = 2u64;
        while tested < prime_count && p < MAX_CHARACTERISTIC {
            if crate::arith::is_prime(p as u128) && !self.is_excluded(p) {
                tested += 1;
                if let Ok(split) = self.classify_prime(p) {
                    let sums = subset_sums(&split.degrees);
                    let before = possible.len();
                    possible.retain(|d| sums.contains(d));
                    if possible.len() < before {
                        witnesses.push(p);
                    }
                    if possible.is_empty() {
                        return IrreducibilityEvidence::Certified { witness_primes: witnesses };
                    }
                }
            }
            p += 1;
        }
        if possible.is_empty() {
            IrreducibilityEvidence::Certified { witness_primes: witnesses }
        } else {
            IrreducibilityEvidence::Inconclusive { possible_degrees: possible.into_iter().collect() }
        }
    }
}

fn subset_sums(parts: &[usize]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0usize]);
    for &d in parts {
        let next: Vec<usize> = sums.iter().map(|s| s + d).collect();
        sums.extend(next);
    }
    sums
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant of two integer polynomials (lowest degree first) via the
/// Sylvester matrix.
pub fn resultant(f: &[i64], g: &[i64]) -> BigInt {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, &c) in f.iter().rev().enumerate() {
            rows[i][i + j] = BigInt::from(c);
        }
    }
    for i in 0..m {
        for (j, &c) in g.iter().rev().enumerate() {
            rows[n + i][i + j] = BigInt::from(c);
        }
    }
    bareiss_det(rows)
}

/// disc(f) = (−1)^{n(n−1)/2} Res(f, f') / c_n.
pub fn discriminant(f: &[i64]) -> BigInt {
    let n = f.len() - 1;
    if n == 1 {
        return BigInt::one();
    }
    let df: Vec<i64> = f.iter().enumerate().skip(1).map(|(i, &c)| i as i64 * c).collect();
    let res = resultant(f, &df);
    let lead = BigInt::from(f[n]);
    let d = res / lead;
    if (n * (n - 1) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

/// Convenience wrappers mirroring the operation names.
pub fn classify_prime(spec: &AlgebraicNumberSpec, p: u64) -> Result<PrimeSplitting> {
    spec.classify_prime(p)
}

pub fn reductions_of_degree(spec: &AlgebraicNumberSpec, p: u64, d: usize) -> Result<Vec<FieldElement>> {
    spec.reductions_of_degree(p, d)
}

pub fn is_in_s(spec: &AlgebraicNumberSpec, p: u64, d: usize) -> bool {
    spec.is_in_s(p, d)
}

pub fn norm_of_alpha(spec: &AlgebraicNumberSpec) -> Ratio<i128> {
    spec.norm()
}

/// p^d − 1 factored, for the group of the degree-d reductions.
pub fn local_group_order(p: u64, d: usize) -> Result<FactoredInteger> {
    crate::arith::factor_pk_minus_1(p, d as u32)
}

/// Rough size of the discriminant, for diagnostics.
pub fn discriminant_bits(spec: &AlgebraicNumberSpec) -> u64 {
    spec.discriminant.abs().to_f64().map_or(0, |v| v.log2().ceil() as u64)
}
