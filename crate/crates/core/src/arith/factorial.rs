//! The factorial cap h = H! and the prime powers ℓ(q).

use crate::error::{Error, Result};

/// The parameter H with h = H!. H! itself is never materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FactorialCap(u64);

impl FactorialCap {
    pub fn new(h: u64) -> Result<Self> {
        if h < 2 {
            return Err(Error::InvalidArgument(format!("factorial cap H = {h} must be at least 2")));
        }
        Ok(FactorialCap(h))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Exponent of the prime `q` in H! (Legendre's sum).
    pub fn valuation(self, q: u128) -> u32 {
        let mut e = 0u32;
        let mut m = self.0 as u128 / q;
        while m > 0 {
            e += m as u32;
            m /= q;
        }
        e
    }

    /// H! when it fits in 128 bits (H ≤ 34).
    pub fn factorial(self) -> Option<u128> {
        (2..=self.0 as u128).try_fold(1u128, |acc, i| acc.checked_mul(i))
    }
}

/// Smallest power of `q` not dividing H!.
pub fn ell_of_q(q: u128, cap: FactorialCap) -> Result<u128> {
    let e = cap.valuation(q) + 1;
    q.checked_pow(e).ok_or_else(|| Error::Overflow(format!("{q}^{e} exceeds 128 bits")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let cap = FactorialCap::new(4).unwrap();
        assert_eq!(ell_of_q(2, cap).unwrap(), 16);
        assert_eq!(ell_of_q(3, cap).unwrap(), 9);
        assert_eq!(ell_of_q(5, cap).unwrap(), 5);
    }

    #[test]
    fn cap_validation() {
        assert!(FactorialCap::new(1).is_err());
        assert_eq!(FactorialCap::new(5).unwrap().factorial(), Some(120));
    }

    #[test]
    fn ell_never_divides_but_ell_over_q_does() {
        for big_h in 2..=20u64 {
            let cap = FactorialCap::new(big_h).unwrap();
            let h = cap.factorial().unwrap();
            for q in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29] {
                let ell = ell_of_q(q, cap).unwrap();
                assert_ne!(h % ell, 0);
                assert_eq!(h % (ell / q), 0);
                if q > big_h as u128 {
                    assert_eq!(ell, q);
                }
            }
        }
    }
}
