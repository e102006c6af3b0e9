//! Periods and histograms against direct iteration and an independent
//! companion-matrix certificate.

use proptest::prelude::*;
use redord_core::arith::{factor_integer, sieve_primes};
use redord_core::linrec::{period_info, period_mod_p, residue_histogram, RecurrenceSpec};

const ITERATION_CAP: u128 = 2_000_000;

fn initial(rec: &RecurrenceSpec, p: u64) -> Vec<u64> {
    rec.initial_state(p).unwrap()
}

fn step(c: &[i64], s: &mut Vec<u64>, p: u64) {
    let k = s.len();
    let acc: i128 = (0..k).map(|i| c[i] as i128 * s[i] as i128).sum();
    let next = (-acc).rem_euclid(p as i128) as u64;
    s.remove(0);
    s.push(next);
}

/// Period by iterating until the state repeats, if that happens within the cap.
fn iterated_period(rec: &RecurrenceSpec, p: u64) -> Option<u128> {
    let s0 = initial(rec, p);
    let mut s = s0.clone();
    for t in 1..=ITERATION_CAP {
        step(rec.char_coeffs(), &mut s, p);
        if s == s0 {
            return Some(t);
        }
    }
    None
}

type Matrix = Vec<Vec<u64>>;

fn companion(c: &[i64], p: u64) -> Matrix {
    let k = c.len() - 1;
    let mut m = vec![vec![0u64; k]; k];
    for i in 0..k - 1 {
        m[i][i + 1] = 1;
    }
    for j in 0..k {
        m[k - 1][j] = (-(c[j] as i128)).rem_euclid(p as i128) as u64;
    }
    m
}

fn mat_mul(a: &Matrix, b: &Matrix, p: u64) -> Matrix {
    let k = a.len();
    let mut out = vec![vec![0u64; k]; k];
    for i in 0..k {
        for j in 0..k {
            out[i][j] = (0..k).fold(0u128, |acc, l| (acc + a[i][l] as u128 * b[l][j] as u128) % p as u128) as u64;
        }
    }
    out
}

fn apply_power(m: &Matrix, mut e: u128, v: &[u64], p: u64) -> Vec<u64> {
    let k = m.len();
    let mut result: Matrix = (0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect();
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(&result, &base, p);
        }
        base = mat_mul(&base, &base, p);
        e >>= 1;
    }
    (0..k).map(|i| (0..k).fold(0u128, |acc, j| (acc + result[i][j] as u128 * v[j] as u128) % p as u128) as u64).collect()
}

/// M^T s0 = s0 and M^{T/q} s0 ≠ s0 for every prime q | T.
fn certifies_period(rec: &RecurrenceSpec, p: u64, t: u128) -> bool {
    let m = companion(rec.char_coeffs(), p);
    let s0 = initial(rec, p);
    if apply_power(&m, t, &s0, p) != s0 {
        return false;
    }
    factor_integer(t).unwrap().primes().all(|q| apply_power(&m, t / q, &s0, p) != s0)
}

fn corpus() -> Vec<RecurrenceSpec> {
    let table: [(&[i64], &[i64]); 20] = [
        (&[-1, -1, 1], &[0, 1]),
        (&[-1, -1, 1], &[2, 1]),
        (&[-1, -2, 1], &[0, 1]),
        (&[1, -3, 1], &[1, 1]),
        (&[-2, 1], &[1]),
        (&[3, 1], &[5]),
        (&[1, 0, 1], &[1, 0]),
        (&[-1, -1, 0, 1], &[0, 0, 1]),
        (&[-1, -1, -1, 1], &[0, 0, 1]),
        (&[-2, 0, 0, 1], &[1, 2, 3]),
        (&[1, -1, 0, 1], &[3, 0, 2]),
        (&[-1, -1, 0, 0, 1], &[0, 0, 0, 1]),
        (&[-1, -1, -1, -1, 1], &[0, 0, 0, 1]),
        (&[1, 0, -1, 0, 1], &[1, 2, 0, 5]),
        (&[-1, 0, -2, 0, 1], &[4, 0, 0, 1]),
        (&[-1, -1, 0, 0, 0, 1], &[0, 0, 0, 0, 1]),
        (&[1, -1, 0, 0, 0, 1], &[1, 1, 1, 1, 1]),
        (&[-1, -1, 0, 0, 0, 0, 1], &[0, 0, 0, 0, 0, 1]),
        (&[1, 0, 0, 1, 0, 0, 1], &[1, 0, 0, 0, 0, 0]),
        (&[-1, 1, -1, 1, -1, 1, 1], &[2, 7, 1, 8, 2, 8]),
    ];
    table.iter().map(|(c, a)| RecurrenceSpec::with_integers(c.to_vec(), a).unwrap()).collect()
}

#[test]
fn pisano_periods_up_to_500() {
    let fib = RecurrenceSpec::with_integers(vec![-1, -1, 1], &[0, 1]).unwrap();
    assert_eq!(period_mod_p(&fib, 11).unwrap(), 10);
    for p in sieve_primes(2, 500).unwrap() {
        if fib.is_excluded(p) {
            continue;
        }
        assert_eq!(Some(period_mod_p(&fib, p).unwrap()), iterated_period(&fib, p), "p = {p}");
    }
}

#[test]
fn corpus_periods_up_to_500() {
    let mut iterated = 0usize;
    let mut certified = 0usize;
    for rec in corpus() {
        for p in sieve_primes(2, 500).unwrap() {
            if rec.is_excluded(p) {
                continue;
            }
            let info = period_info(&rec, p).unwrap();
            assert_eq!(info.root_order_lcm % info.period, 0);
            match iterated_period(&rec, p) {
                Some(t) => {
                    assert_eq!(info.period, t, "{:?} p = {p}", rec.char_coeffs());
                    iterated += 1;
                }
                None => {
                    assert!(certifies_period(&rec, p, info.period), "{:?} p = {p}", rec.char_coeffs());
                    certified += 1;
                }
            }
        }
    }
    assert!(iterated > 1000 && certified > 100, "{iterated} iterated, {certified} certified");
}

#[test]
fn histograms_match_direct_iteration_for_small_periods() {
    for rec in corpus() {
        for p in sieve_primes(2, 200).unwrap() {
            if rec.is_excluded(p) {
                continue;
            }
            let info = period_info(&rec, p).unwrap();
            if info.period > 200_000 {
                continue;
            }
            let report = residue_histogram(&rec, p).unwrap();
            let mut counts = vec![0u128; p as usize];
            let mut s = initial(&rec, p);
            for _ in 0..info.period {
                counts[s[0] as usize] += 1;
                step(rec.char_coeffs(), &mut s, p);
            }
            assert_eq!(report.counts, counts, "{:?} p = {p}", rec.char_coeffs());
            assert_eq!(report.counts.iter().sum::<u128>(), report.period);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    /// Starting the window anywhere inside the period gives the same counts.
    #[test]
    fn histogram_is_shift_invariant(idx in 0usize..20, p_idx in 0usize..30, shift in 0u32..1000) {
        let rec = &corpus()[idx];
        let p = sieve_primes(3, 200).unwrap()[p_idx];
        prop_assume!(!rec.is_excluded(p));
        prop_assume!(period_mod_p(rec, p).unwrap() <= 100_000);
        let report = residue_histogram(rec, p).unwrap();
        let shifted_state = rec.state_at(p, shift as u128).unwrap();
        let k = rec.degree();
        let initial: Vec<i64> = shifted_state.iter().map(|&v| v as i64).collect();
        let shifted = RecurrenceSpec::with_integers(rec.char_coeffs().to_vec(), &initial[..k]);
        prop_assume!(shifted.is_ok());
        let again = residue_histogram(&shifted.unwrap(), p).unwrap();
        prop_assert_eq!(again.counts, report.counts);
    }
}
