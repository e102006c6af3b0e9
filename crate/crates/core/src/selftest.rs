//! Small embedded oracle suites, runnable from the binary without a config.

use crate::arith::{factor_integer, is_prime, sieve_primes, CyclotomicTable};
use crate::error::Result;
use crate::gf::{standard_field, FieldElement};
use crate::linrec::{period_mod_p, RecurrenceSpec};
use crate::order::mult_order;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn record(name: &'static str, outcome: Result<Option<String>>) -> CheckResult {
    match outcome {
        Ok(None) => CheckResult { name, passed: true, detail: String::new() },
        Ok(Some(msg)) => CheckResult { name, passed: false, detail: msg },
        Err(e) => CheckResult { name, passed: false, detail: e.to_string() },
    }
}

fn cyclotomic_products(table: &CyclotomicTable) -> Result<Option<String>> {
    for p in sieve_primes(2, 200)? {
        for k in 1..=6u32 {
            let mut prod: u128 = 1;
            for d in (1..=k).filter(|d| k % d == 0) {
                prod *= table.eval(d, p as u128)?;
            }
            let want = (p as u128).pow(k) - 1;
            if prod != want {
                return Ok(Some(format!("product of Φ_d({p}) over d | {k} is {prod}, expected {want}")));
            }
        }
    }
    Ok(None)
}

fn orders_by_powers(table: &CyclotomicTable) -> Result<Option<String>> {
    for p in sieve_primes(2, 32)? {
        for k in 1..=4usize {
            let size = (p as u128).pow(k as u32);
            if size > 256 {
                break;
            }
            let field = standard_field(p, k)?;
            let group = table.factor_pk_minus_1(p, k as u32)?;
            for idx in 1..size {
                let mut coeffs = Vec::with_capacity(k);
                let mut rest = idx;
                for _ in 0..k {
                    coeffs.push((rest % p as u128) as u64);
                    rest /= p as u128;
                }
                let a = FieldElement::from_coeffs(&field, &coeffs)?;
                let mut acc = a.clone();
                let mut n = 1u128;
                while !acc.is_one() {
                    acc = acc.mul(&a)?;
                    n += 1;
                }
                let got = mult_order(&a, &group)?;
                if got != n {
                    return Ok(Some(format!("order of {coeffs:?} in F_{p}^{k} is {n}, computed {got}")));
                }
            }
        }
    }
    Ok(None)
}

fn factorization_round_trips() -> Result<Option<String>> {
    let samples = (2u128..5000).chain([(1u128 << 61) - 1, 600_851_475_143, 1_000_000_007 * 998_244_353]);
    for n in samples {
        let f = factor_integer(n)?;
        if f.value() != n || !f.primes().all(is_prime) {
            return Ok(Some(format!("factorization of {n} does not reconstruct it")));
        }
    }
    Ok(None)
}

fn pisano_corpus() -> Result<Option<String>> {
    let fib = RecurrenceSpec::with_integers(vec![-1, -1, 1], &[1, 1])?;
    for p in sieve_primes(2, 300)? {
        if fib.is_excluded(p) {
            continue;
        }
        let (mut a, mut b, mut t) = (1u64, 1u64, 0u128);
        loop {
            (a, b) = (b, (a + b) % p);
            t += 1;
            if (a, b) == (1, 1) {
                break;
            }
        }
        let got = period_mod_p(&fib, p)?;
        if got != t {
            return Ok(Some(format!("Fibonacci period mod {p} is {t}, computed {got}")));
        }
    }
    Ok(None)
}

/// Runs every suite against the given cyclotomic table.
pub fn run_selftest(table: &CyclotomicTable) -> SelftestReport {
    SelftestReport {
        checks: vec![
            record("cyclotomic products", cyclotomic_products(table)),
            record("orders against repeated multiplication", orders_by_powers(table)),
            record("factorization round trips", factorization_round_trips()),
            record("Fibonacci periods", pisano_corpus()),
        ],
    }
}
