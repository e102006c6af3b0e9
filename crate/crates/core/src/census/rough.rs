//! How often P(n) has a divisor in [n^{1−ε}, n^{1+ε}] whose prime factors
//! are all at least n^c, for a positive definite quadratic P.

use super::driver::{chunks, Chunk, Workers};
use super::numfmt::format_ratio;
use super::real::{ceil_pow, floor_pow, Decimal};
use crate::arith::modmath::{inv_mod_u64, sqrt_mod_u64};
use crate::arith::{has_rough_divisor_in_range, is_prime, isqrt, sieve_primes, FactoredInteger};
use crate::error::{Error, Result};

/// Largest n the rough census scans.
pub const ROUGH_CAP: u64 = 1 << 24;

/// c_2 n^2 + c_1 n + c_0 with c_2 > 0 and negative discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticPoly {
    pub c0: i64,
    pub c1: i64,
    pub c2: i64,
}

impl QuadraticPoly {
    /// Coefficients lowest degree first.
    pub fn new(coeffs: &[i64]) -> Result<Self> {
        let mut c = coeffs.to_vec();
        while c.last() == Some(&0) {
            c.pop();
        }
        if c.len() != 3 {
            return Err(Error::HypothesisViolated(format!("P must have degree 2, got {:?}", coeffs)));
        }
        let q = QuadraticPoly { c0: c[0], c1: c[1], c2: c[2] };
        if q.c2 <= 0 {
            return Err(Error::HypothesisViolated("leading coefficient must be positive".into()));
        }
        let disc = (q.c1 as i128).pow(2) - 4 * q.c2 as i128 * q.c0 as i128;
        if disc >= 0 {
            return Err(Error::HypothesisViolated(format!("discriminant {disc} is not negative")));
        }
        Ok(q)
    }

    /// P(n), positive for every n.
    pub fn eval(&self, n: u64) -> u128 {
        let n = n as i128;
        (self.c2 as i128 * n * n + self.c1 as i128 * n + self.c0 as i128) as u128
    }

    /// Residues n mod q with q | P(n).
    fn roots_mod(&self, q: u64) -> Vec<u64> {
        let r = |c: i64| c.rem_euclid(q as i64) as u64;
        let (a, b, c) = (r(self.c2), r(self.c1), r(self.c0));
        if q < 64 {
            return (0..q).filter(|&n| (a * n % q * n + b * n + c).is_multiple_of(q)).collect();
        }
        if a == 0 {
            return match (b, c) {
                (0, 0) => (0..q).collect(),
                (0, _) => Vec::new(),
                _ => vec![(q - c) % q * inv_mod_u64(b, q).unwrap() % q],
            };
        }
        let disc = ((b as u128 * b as u128 + 4 * (q - a) as u128 * c as u128) % q as u128) as u64;
        let Some(s) = sqrt_mod_u64(disc, q) else { return Vec::new() };
        let inv2a = inv_mod_u64(2 * a % q, q).unwrap();
        let mut roots = vec![(q - b + s) % q * inv2a % q, (2 * q - b - s) % q * inv2a % q];
        roots.sort_unstable();
        roots.dedup();
        roots
    }
}

#[derive(Clone, Debug)]
pub struct RoughConfig {
    pub poly: QuadraticPoly,
    pub epsilons: Vec<Decimal>,
    pub c: Decimal,
    pub x: u64,
    pub over_primes: bool,
}

impl RoughConfig {
    pub fn validate(&self) -> Result<()> {
        if self.x > ROUGH_CAP {
            return Err(Error::BudgetExceeded(format!("rough census bound {} exceeds {}", self.x, ROUGH_CAP)));
        }
        let half = Decimal::new(1, 2)?;
        if self.c.is_zero() || self.c > half {
            return Err(Error::InvalidArgument(format!("c = {} must lie in (0, 1/2]", self.c)));
        }
        if let Some(e) = self.epsilons.iter().find(|e| **e > half) {
            return Err(Error::InvalidArgument(format!("epsilon = {e} must lie in [0, 1/2]")));
        }
        Ok(())
    }
}

/// One row of d_c(ε).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoughCensus {
    pub epsilon: Decimal,
    pub c: Decimal,
    pub x: u64,
    pub over_primes: bool,
    pub hits: u64,
    pub total: u64,
}

impl RoughCensus {
    pub fn merge(&self, other: &RoughCensus) -> Result<RoughCensus> {
        if (self.epsilon, self.c, self.over_primes) != (other.epsilon, other.c, other.over_primes) {
            return Err(Error::ConfigMismatch("rough censuses differ in ε, c or range".into()));
        }
        Ok(RoughCensus { x: self.x.max(other.x), hits: self.hits + other.hits, total: self.total + other.total, ..self.clone() })
    }

    pub fn fraction_text(&self) -> String {
        format_ratio(self.hits as u128, self.total as u128)
    }
}

/// Primes up to √max P(n) with the roots of P modulo each.
struct ValueSieve {
    poly: QuadraticPoly,
    primes: Vec<(u64, Vec<u64>)>,
}

impl ValueSieve {
    fn new(poly: QuadraticPoly, x: u64) -> Result<Self> {
        let top = poly.eval(2).max(poly.eval(x.max(2)));
        let limit = isqrt(top) as u64 + 1;
        let primes = sieve_primes(2, limit + 1)?
            .into_iter()
            .map(|q| (q, poly.roots_mod(q)))
            .filter(|(_, r)| !r.is_empty())
            .collect();
        Ok(ValueSieve { poly, primes })
    }

    /// Factorizations of P(n) for n in the chunk, indexed by n − lo.
    fn factor_chunk(&self, chunk: Chunk) -> Result<Vec<FactoredInteger>> {
        let len = (chunk.hi - chunk.lo) as usize;
        let mut rest: Vec<u128> = (chunk.lo..chunk.hi).map(|n| self.poly.eval(n)).collect();
        let mut found: Vec<Vec<(u128, u32)>> = vec![Vec::new(); len];
        for (q, roots) in &self.primes {
            let q = *q;
            for &r in roots {
                let first = chunk.lo + (r + q - chunk.lo % q) % q;
                let mut n = first;
                while n < chunk.hi {
                    let i = (n - chunk.lo) as usize;
                    let mut e = 0;
                    while rest[i].is_multiple_of(q as u128) {
                        rest[i] /= q as u128;
                        e += 1;
                    }
                    if e > 0 {
                        found[i].push((q as u128, e));
                    }
                    n += q;
                }
            }
        }
        found
            .into_iter()
            .zip(rest)
            .map(|(mut f, r)| {
                if r > 1 {
                    debug_assert!(is_prime(r));
                    f.push((r, 1));
                }
                f.sort_unstable();
                FactoredInteger::from_prime_powers(f)
            })
            .collect()
    }
}

/// Does P(n) have a divisor in [⌈n^{1−ε}⌉, ⌊n^{1+ε}⌋] with all prime factors ≥ ⌈n^c⌉?
pub fn rough_hit(value: &FactoredInteger, n: u64, epsilon: &Decimal, c: &Decimal) -> Result<bool> {
    let low = ceil_pow(n, &epsilon.one_minus()?);
    let high = floor_pow(n, &epsilon.add_integer(1)?);
    let rough = ceil_pow(n, c);
    if low > high {
        return Ok(false);
    }
    has_rough_divisor_in_range(value, low, high, rough)
}

pub fn run_rough_census(cfg: &RoughConfig, workers: &Workers) -> Result<Vec<RoughCensus>> {
    cfg.validate()?;
    let sieve = ValueSieve::new(cfg.poly, cfg.x)?;
    let per_chunk = workers.map(&chunks(2, cfg.x + 1), |chunk| {
        let values = sieve.factor_chunk(chunk)?;
        let mut hits = vec![0u64; cfg.epsilons.len()];
        let mut total = 0u64;
        for n in chunk.lo..chunk.hi {
            if cfg.over_primes && !is_prime(n as u128) {
                continue;
            }
            total += 1;
            let v = &values[(n - chunk.lo) as usize];
            for (h, e) in hits.iter_mut().zip(&cfg.epsilons) {
                *h += rough_hit(v, n, e, &cfg.c)? as u64;
            }
        }
        Ok((hits, total))
    })?;
    let mut out: Vec<RoughCensus> = cfg
        .epsilons
        .iter()
        .map(|&epsilon| RoughCensus { epsilon, c: cfg.c, x: cfg.x, over_primes: cfg.over_primes, hits: 0, total: 0 })
        .collect();
    for (hits, total) in per_chunk {
        for (row, h) in out.iter_mut().zip(hits) {
            row.hits += h;
            row.total += total;
        }
    }
    Ok(out)
}

pub const ROUGH_CENSUS_CSV: &str = "rough_census.csv";

pub fn write_rough_census(path: &std::path::Path, rows: &[RoughCensus]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["epsilon", "c", "x", "hits", "total", "fraction"])?;
    for r in rows {
        w.write_record([
            r.epsilon.to_string(),
            r.c.to_string(),
            r.x.to_string(),
            r.hits.to_string(),
            r.total.to_string(),
            r.fraction_text(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
