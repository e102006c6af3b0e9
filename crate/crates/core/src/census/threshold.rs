//! Primes where every spec reduces to degree k and some spec's reductions
//! all have order at least p^{g(k)+ε}.

use super::driver::{chunks, Workers};
use super::numfmt::format_ratio;
use super::real::{cmp_pow, Decimal};
use super::CENSUS_CAP;
use crate::arith::{factor_pk_minus_1, for_each_prime};
use crate::error::{Error, Result};
use crate::order::mult_order;
use crate::reduction::AlgebraicNumberSpec;
use std::cmp::Ordering;

/// g(3) = 2, g(4) = 3, g(6) = 4.
pub fn g_of_k(k: usize) -> Result<u32> {
    match k {
        3 => Ok(2),
        4 => Ok(3),
        6 => Ok(4),
        _ => Err(Error::InvalidArgument(format!("threshold degree must be 3, 4 or 6, got {k}"))),
    }
}

#[derive(Clone, Debug)]
pub struct ThresholdConfig {
    pub specs: Vec<AlgebraicNumberSpec>,
    pub k: usize,
    pub epsilons: Vec<Decimal>,
    pub x: u64,
}

impl ThresholdConfig {
    pub fn validate(&self) -> Result<()> {
        g_of_k(self.k)?;
        if self.specs.is_empty() {
            return Err(Error::InvalidArgument("threshold census needs at least one spec".into()));
        }
        if self.x > CENSUS_CAP {
            return Err(Error::BudgetExceeded(format!("census bound {} exceeds {}", self.x, CENSUS_CAP)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdCensus {
    pub k: usize,
    pub g: u32,
    pub epsilon: Decimal,
    pub x: u64,
    pub pass: u64,
    pub total: u64,
}

impl ThresholdCensus {
    pub fn merge(&self, other: &ThresholdCensus) -> Result<ThresholdCensus> {
        if (self.k, self.epsilon) != (other.k, other.epsilon) {
            return Err(Error::ConfigMismatch("threshold censuses differ in k or ε".into()));
        }
        Ok(ThresholdCensus { x: self.x.max(other.x), pass: self.pass + other.pass, total: self.total + other.total, ..*self })
    }

    pub fn fraction_text(&self) -> String {
        format_ratio(self.pass as u128, self.total as u128)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdReport {
    pub rows: Vec<ThresholdCensus>,
    /// Per spec, the number of primes up to x with a degree-k reduction.
    pub spec_s_counts: Vec<u64>,
    pub warnings: Vec<String>,
}

/// Smallest order among the degree-k reductions of each spec, or None when
/// some spec has none at p.
pub fn joint_min_orders(specs: &[AlgebraicNumberSpec], k: usize, p: u64) -> Result<Option<Vec<u128>>> {
    if specs.iter().any(|s| !s.is_in_s(p, k)) {
        return Ok(None);
    }
    let group = factor_pk_minus_1(p, k as u32)?;
    let mut out = Vec::with_capacity(specs.len());
    for s in specs {
        let mut m = u128::MAX;
        for e in s.reductions_of_degree(p, k)? {
            m = m.min(mult_order(&e, &group)?);
        }
        out.push(m);
    }
    Ok(Some(out))
}

/// Some spec's smallest order reaches p^{g+ε}.
pub fn threshold_passes(min_orders: &[u128], p: u64, exponent: &Decimal) -> bool {
    min_orders.iter().any(|&o| cmp_pow(o, p, exponent) != Ordering::Less)
}

pub fn run_threshold_census(cfg: &ThresholdConfig, workers: &Workers) -> Result<ThresholdReport> {
    cfg.validate()?;
    let g = g_of_k(cfg.k)?;
    let exponents: Vec<Decimal> = cfg.epsilons.iter().map(|e| e.add_integer(g as u128)).collect::<Result<_>>()?;
    let parts = workers.map(&chunks(2, cfg.x + 1), |chunk| {
        let mut pass = vec![0u64; exponents.len()];
        let mut total = 0u64;
        let mut singles = vec![0u64; cfg.specs.len()];
        let mut err = None;
        for_each_prime(chunk.lo, chunk.hi, |p| {
            if err.is_some() {
                return;
            }
            for (c, s) in singles.iter_mut().zip(&cfg.specs) {
                *c += s.is_in_s(p, cfg.k) as u64;
            }
            match joint_min_orders(&cfg.specs, cfg.k, p) {
                Ok(Some(orders)) => {
                    total += 1;
                    for (c, e) in pass.iter_mut().zip(&exponents) {
                        *c += threshold_passes(&orders, p, e) as u64;
                    }
                }
                Ok(None) => {}
                Err(e) => err = Some(e),
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok((pass, total, singles)),
        }
    })?;
    let mut rows: Vec<ThresholdCensus> = cfg
        .epsilons
        .iter()
        .map(|&epsilon| ThresholdCensus { k: cfg.k, g, epsilon, x: cfg.x, pass: 0, total: 0 })
        .collect();
    let mut spec_s_counts = vec![0u64; cfg.specs.len()];
    for (pass, total, singles) in parts {
        for (r, c) in rows.iter_mut().zip(pass) {
            r.pass += c;
            r.total += total;
        }
        for (a, b) in spec_s_counts.iter_mut().zip(singles) {
            *a += b;
        }
    }
    let warnings = cfg
        .specs
        .iter()
        .zip(&spec_s_counts)
        .filter(|(_, &c)| c == 0)
        .map(|(s, _)| format!("spec '{}' has no degree-{} reduction at any prime up to {}", s.label(), cfg.k, cfg.x))
        .collect();
    Ok(ThresholdReport { rows, spec_s_counts, warnings })
}

pub const THRESHOLD_CENSUS_CSV: &str = "threshold_census.csv";

pub fn write_threshold_census(path: &std::path::Path, rows: &[ThresholdCensus]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["k", "g", "epsilon", "x", "pass", "total", "fraction"])?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.g.to_string(),
            r.epsilon.to_string(),
            r.x.to_string(),
            r.pass.to_string(),
            r.total.to_string(),
            r.fraction_text(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
