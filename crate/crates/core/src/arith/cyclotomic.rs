//! Cyclotomic polynomials Φ_d for d ≤ 12 and the factorization of p^k − 1.

use super::factor::{factor_integer, FactoredInteger, FACTOR_CAP};
use crate::error::{Error, Result};

pub const MAX_CYCLOTOMIC_INDEX: u32 = 12;

const STANDARD: [&[i64]; 12] = [
    &[-1, 1],
    &[1, 1],
    &[1, 1, 1],
    &[1, 0, 1],
    &[1, 1, 1, 1, 1],
    &[1, -1, 1],
    &[1, 1, 1, 1, 1, 1, 1],
    &[1, 0, 0, 0, 1],
    &[1, 0, 0, 1, 0, 0, 1],
    &[1, -1, 1, -1, 1],
    &[1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    &[1, 0, -1, 0, 1],
];

/// Coefficient tables (lowest degree first) for Φ_1 .. Φ_12.
///
/// The table is a value so the self-test can be pointed at a corrupted copy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicTable {
    rows: Vec<Vec<i64>>,
}

impl Default for CyclotomicTable {
    fn default() -> Self {
        CyclotomicTable { rows: STANDARD.iter().map(|r| r.to_vec()).collect() }
    }
}

impl CyclotomicTable {
    pub fn standard() -> Self {
        Self::default()
    }

    /// Replaces the row for Φ_d. Intended for fault-injection tests.
    pub fn with_row(mut self, d: u32, coeffs: Vec<i64>) -> Result<Self> {
        check_index(d)?;
        self.rows[d as usize - 1] = coeffs;
        Ok(self)
    }

    pub fn coeffs(&self, d: u32) -> Result<&[i64]> {
        check_index(d)?;
        Ok(&self.rows[d as usize - 1])
    }

    /// Φ_d(x) evaluated exactly.
    pub fn eval(&self, d: u32, x: u128) -> Result<u128> {
        let coeffs = self.coeffs(d)?;
        let x = i128::try_from(x).map_err(|_| Error::Overflow("evaluation point".into()))?;
        let mut acc: i128 = 0;
        for &c in coeffs.iter().rev() {
            acc = acc
                .checked_mul(x)
                .and_then(|v| v.checked_add(c as i128))
                .ok_or_else(|| Error::Overflow(format!("Φ_{d}({x}) exceeds 127 bits")))?;
        }
        u128::try_from(acc).map_err(|_| Error::Overflow(format!("Φ_{d}({x}) is negative")))
    }

    /// Factorization of p^k − 1 assembled from the factorizations of Φ_d(p), d | k.
    pub fn factor_pk_minus_1(&self, p: u64, k: u32) -> Result<FactoredInteger> {
        if p < 2 {
            return Err(Error::InvalidArgument(format!("p = {p} is not a prime")));
        }
        check_index(k)?;
        let target = (p as u128)
            .checked_pow(k)
            .filter(|v| *v < FACTOR_CAP)
            .ok_or(Error::RangeTooLarge { what: "p^k", value: u128::MAX, cap: FACTOR_CAP })?
            - 1;
        let mut acc = FactoredInteger::one();
        for d in (1..=k).filter(|d| k.is_multiple_of(*d)) {
            let v = self.eval(d, p as u128)?;
            if v == 0 {
                return Err(Error::InvalidArgument(format!("Φ_{d}({p}) = 0")));
            }
            acc = acc.mul(&factor_integer(v)?)?;
        }
        if acc.value() != target {
            return Err(Error::InvalidArgument(format!(
                "cyclotomic product {} != {p}^{k} - 1 = {target}",
                acc.value()
            )));
        }
        Ok(acc)
    }
}

fn check_index(d: u32) -> Result<()> {
    if d == 0 || d > MAX_CYCLOTOMIC_INDEX {
        return Err(Error::UnsupportedIndex(d));
    }
    Ok(())
}

/// Φ_d(p) from the standard table.
pub fn cyclotomic_eval(d: u32, p: u128) -> Result<u128> {
    CyclotomicTable::standard().eval(d, p)
}

/// Factorization of p^k − 1 via its cyclotomic pieces.
pub fn factor_pk_minus_1(p: u64, k: u32) -> Result<FactoredInteger> {
    CyclotomicTable::standard().factor_pk_minus_1(p, k)
}
