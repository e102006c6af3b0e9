//! Primes in S for which p^d − 1 is p^{1/(2k)}-smooth, k = deg α.

use super::driver::{chunks, Workers};
use super::numfmt::format_root;
use super::CENSUS_CAP;
use crate::arith::{factor_pk_minus_1, for_each_prime, largest_prime_factor};
use crate::error::{Error, Result};
use crate::reduction::AlgebraicNumberSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothRow {
    pub p: u64,
    pub largest_prime_factor: u128,
    /// 2k in the bound p^{1/(2k)}.
    pub root: u32,
}

impl SmoothRow {
    pub fn bound_text(&self) -> String {
        format_root(self.p, 1, self.root)
    }
}

/// lpf < p^{1/(2k)}  ⇔  lpf^{2k} < p.
fn below_root(lpf: u128, p: u64, root: u32) -> bool {
    lpf.checked_pow(root).is_some_and(|v| v < p as u128)
}

/// Primes p ≤ x with p ∈ S(spec, d) and largest prime factor of p^d − 1
/// below p^{1/(2k)}; p with p^d − 1 = 1 are skipped.
pub fn run_smooth_filter(spec: &AlgebraicNumberSpec, d: usize, x: u64, workers: &Workers) -> Result<Vec<SmoothRow>> {
    if x > CENSUS_CAP {
        return Err(Error::BudgetExceeded(format!("census bound {x} exceeds {CENSUS_CAP}")));
    }
    let root = 2 * spec.degree() as u32;
    let parts = workers.map(&chunks(2, x + 1), |chunk| {
        let mut rows = Vec::new();
        let mut err = None;
        for_each_prime(chunk.lo, chunk.hi, |p| {
            if err.is_some() {
                return;
            }
            let step = || -> Result<Option<SmoothRow>> {
                let n = factor_pk_minus_1(p, d as u32)?;
                if n.value() == 1 {
                    return Ok(None);
                }
                let lpf = largest_prime_factor(&n)?;
                if !below_root(lpf, p, root) || !spec.is_in_s(p, d) {
                    return Ok(None);
                }
                Ok(Some(SmoothRow { p, largest_prime_factor: lpf, root }))
            };
            match step() {
                Ok(Some(r)) => rows.push(r),
                Ok(None) => {}
                Err(e) => err = Some(e),
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(rows),
        }
    })?;
    Ok(parts.into_iter().flatten().collect())
}

pub const SMOOTH_FILTER_CSV: &str = "smooth_filter.csv";

pub fn write_smooth_filter(path: &std::path::Path, rows: &[SmoothRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["p", "largest_prime_factor", "bound"])?;
    for r in rows {
        w.write_record([r.p.to_string(), r.largest_prime_factor.to_string(), r.bound_text()])?;
    }
    w.flush()?;
    Ok(())
}
