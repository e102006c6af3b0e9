//! Per-prime period and deviation table for one recurrence.

use super::driver::{chunks, Workers};
use super::numfmt::{format_big_ratio, format_root};
use crate::arith::for_each_prime;
use crate::error::{Error, Result};
use crate::linrec::{period_mod_p, residue_histogram_with_budget, RecurrenceSpec};
use num_bigint::BigUint;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The histogram needed more steps than the budget allows.
    Unverified,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "1",
            Verdict::Fail => "0",
            Verdict::Unverified => "unverified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceRow {
    pub p: u64,
    pub period: u128,
    /// max_r |count_r·p − T|, when the histogram was computed.
    pub max_dev_scaled: Option<u128>,
    pub degree: usize,
    pub verdict: Verdict,
}

impl RecurrenceRow {
    pub fn max_dev_text(&self) -> String {
        self.max_dev_scaled
            .map_or(String::new(), |m| format_big_ratio(BigUint::from(m), BigUint::from(self.p)))
    }

    pub fn bound_text(&self) -> String {
        format_root(self.p, self.degree as u32, 2)
    }
}

/// One row per unexcluded prime p ≤ x.
pub fn run_recurrence_census(rec: &RecurrenceSpec, x: u64, budget: u128, workers: &Workers) -> Result<Vec<RecurrenceRow>> {
    if x > super::CENSUS_CAP {
        return Err(Error::BudgetExceeded(format!("census bound {x} exceeds {}", super::CENSUS_CAP)));
    }
    let parts = workers.map(&chunks(2, x + 1), |chunk| {
        let mut rows = Vec::new();
        let mut err = None;
        for_each_prime(chunk.lo, chunk.hi, |p| {
            if err.is_some() || rec.is_excluded(p) {
                return;
            }
            match recurrence_row(rec, p, budget) {
                Ok(r) => rows.push(r),
                Err(e) => err = Some(e),
            }
        })?;
        err.map_or(Ok(rows), Err)
    })?;
    Ok(parts.into_iter().flatten().collect())
}

pub fn recurrence_row(rec: &RecurrenceSpec, p: u64, budget: u128) -> Result<RecurrenceRow> {
    let degree = rec.degree();
    match residue_histogram_with_budget(rec, p, budget) {
        Ok(r) => Ok(RecurrenceRow {
            p,
            period: r.period,
            max_dev_scaled: Some(r.max_dev_scaled),
            degree,
            verdict: if r.within_bound() { Verdict::Pass } else { Verdict::Fail },
        }),
        Err(Error::BudgetExceeded(_)) => {
            let period = period_mod_p(rec, p)?;
            // Every count lies in [0, T], so T ≤ p^{k/2} settles it without a histogram.
            let vacuous = BigUint::from(period).pow(2) <= BigUint::from(p).pow(degree as u32);
            let verdict = if vacuous { Verdict::Pass } else { Verdict::Unverified };
            Ok(RecurrenceRow { p, period, max_dev_scaled: None, degree, verdict })
        }
        Err(e) => Err(e),
    }
}

pub const LINREC_CSV: &str = "linrec.csv";

pub fn write_recurrence_census(path: &std::path::Path, rows: &[RecurrenceRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["p", "T", "max_dev", "bound", "pass"])?;
    for r in rows {
        w.write_record([r.p.to_string(), r.period.to_string(), r.max_dev_text(), r.bound_text(), r.verdict.as_str().to_string()])?;
    }
    w.flush()?;
    Ok(())
}
