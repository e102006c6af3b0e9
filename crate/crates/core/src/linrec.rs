//! Linear recurrences with rational initial values, reduced mod p: periods,
//! residue histograms over one period, and the p^{k/2} deviation check.

use crate::arith::modmath::inv_mod_u64;
use crate::arith::{factor_pk_minus_1, FactoredInteger};
use crate::error::{Error, Result};
use crate::gf::{factor_mod_p, ExtField, FieldElement, PolyModP, MAX_CHARACTERISTIC};
use crate::order::mult_order;
use crate::reduction::discriminant;
use num_bigint::BigUint;
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;

/// Default cap on the number of recurrence steps a histogram may iterate.
pub const DEFAULT_STEP_BUDGET: u128 = 1 << 27;

/// a_{n+k} = −(c_{k−1} a_{n+k−1} + … + c_0 a_n) for the monic
/// characteristic polynomial x^k + c_{k−1} x^{k−1} + … + c_0.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceSpec {
    char_coeffs: Vec<i64>,
    initial: Vec<Ratio<i64>>,
    discriminant: BigInt,
}

impl RecurrenceSpec {
    /// Characteristic coefficients lowest degree first, then a_0, …, a_{k−1}.
    pub fn new(char_coeffs: Vec<i64>, initial: Vec<Ratio<i64>>) -> Result<Self> {
        if char_coeffs.len() < 2 {
            return Err(Error::InvalidArgument("characteristic polynomial must have degree >= 1".into()));
        }
        if *char_coeffs.last().unwrap() != 1 {
            return Err(Error::InvalidArgument("characteristic polynomial must be monic".into()));
        }
        if char_coeffs[0] == 0 {
            return Err(Error::InvalidArgument("characteristic polynomial has zero constant term".into()));
        }
        let k = char_coeffs.len() - 1;
        if initial.len() != k {
            return Err(Error::InvalidArgument(format!("expected {k} initial values, got {}", initial.len())));
        }
        if initial.iter().all(|r| r.is_zero()) {
            return Err(Error::InvalidArgument("initial values are all zero".into()));
        }
        let discriminant = discriminant(&char_coeffs);
        if discriminant.is_zero() {
            return Err(Error::InvalidArgument("characteristic polynomial has a repeated root".into()));
        }
        Ok(RecurrenceSpec { char_coeffs, initial, discriminant })
    }

    /// Integer initial values.
    pub fn with_integers(char_coeffs: Vec<i64>, initial: &[i64]) -> Result<Self> {
        Self::new(char_coeffs, initial.iter().map(|&a| Ratio::from_integer(a)).collect())
    }

    pub fn degree(&self) -> usize {
        self.char_coeffs.len() - 1
    }

    pub fn char_coeffs(&self) -> &[i64] {
        &self.char_coeffs
    }

    pub fn initial(&self) -> &[Ratio<i64>] {
        &self.initial
    }

    /// p divides the constant term, an initial denominator, or the discriminant.
    pub fn is_excluded(&self, p: u64) -> bool {
        let pi = p as i64;
        self.char_coeffs[0] % pi == 0
            || self.initial.iter().any(|r| r.denom() % pi == 0)
            || (&self.discriminant % BigInt::from(p)).is_zero()
    }

    fn check(&self, p: u64) -> Result<()> {
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
        if self.is_excluded(p) {
            return Err(Error::ExcludedPrime(p));
        }
        Ok(())
    }

    /// Initial state (a_0, …, a_{k−1}) mod p.
    pub fn initial_state(&self, p: u64) -> Result<Vec<u64>> {
        self.check(p)?;
        Ok(self
            .initial
            .iter()
            .map(|r| {
                let num = r.numer().rem_euclid(p as i64) as u64;
                let den = inv_mod_u64(r.denom().rem_euclid(p as i64) as u64, p).expect("unexcluded denominator");
                num * den % p
            })
            .collect())
    }

    /// Steps the recurrence once in place.
    fn step(&self, reduced: &[u64], state: &mut [u64], p: u64) {
        let k = state.len();
        let mut acc: u64 = 0;
        for i in 0..k {
            acc = (acc + reduced[i] * state[i]) % p;
        }
        state.copy_within(1.., 0);
        state[k - 1] = (p - acc) % p;
    }

    fn reduced_coeffs(&self, p: u64) -> Vec<u64> {
        self.char_coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect()
    }

    /// State at time t: (a_t, …, a_{t+k−1}), through x^t mod the
    /// characteristic polynomial.
    pub fn state_at(&self, p: u64, t: u128) -> Result<Vec<u64>> {
        let s0 = self.initial_state(p)?;
        let f = PolyModP::from_ints(&self.char_coeffs, p);
        Ok(state_at(&f, &s0, t))
    }
}

fn state_at(f: &PolyModP, s0: &[u64], t: u128) -> Vec<u64> {
    let p = f.p();
    let k = s0.len();
    let x = PolyModP::x(p);
    let mut r = x.pow_mod(t, f);
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let v = (0..k).fold(0u64, |acc, j| (acc + r.coeff(j) * s0[j]) % p);
        out.push(v);
        r = r.mul_mod(&x, f);
    }
    out
}

/// Period and the lcm of the characteristic root orders it divides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodInfo {
    pub period: u128,
    pub root_order_lcm: u128,
}

/// Least T ≥ 1 with state(T) = state(0).
pub fn period_mod_p(rec: &RecurrenceSpec, p: u64) -> Result<u128> {
    Ok(period_info(rec, p)?.period)
}

pub fn period_info(rec: &RecurrenceSpec, p: u64) -> Result<PeriodInfo> {
    let s0 = rec.initial_state(p)?;
    let f = PolyModP::from_ints(&rec.char_coeffs, p);
    let lcm = root_order_lcm(&f)?;
    let period = minimal_divisor(&lcm, |t| state_at(&f, &s0, t) == s0);
    Ok(PeriodInfo { period, root_order_lcm: lcm.value() })
}

fn root_order_lcm(f: &PolyModP) -> Result<FactoredInteger> {
    let p = f.p();
    let mut lcm = FactoredInteger::one();
    for (g, _) in factor_mod_p(f)? {
        let d = g.degree().unwrap_or(0);
        let field = ExtField::new(g)?;
        let group = factor_pk_minus_1(p, d as u32)?;
        let ord = mult_order(&FieldElement::generator(&field), &group)?;
        let ord_factored = FactoredInteger::from_prime_powers(
            group
                .factors()
                .iter()
                .filter_map(|&(q, _)| {
                    let mut e = 0;
                    let mut m = ord;
                    while m % q == 0 {
                        m /= q;
                        e += 1;
                    }
                    (e > 0).then_some((q, e))
                })
                .collect(),
        )?;
        lcm = lcm.lcm(&ord_factored)?;
    }
    Ok(lcm)
}

/// Smallest divisor t of n with `holds(t)`, given `holds(n)` and that the
/// set where it holds is closed under gcd.
fn minimal_divisor(n: &FactoredInteger, mut holds: impl FnMut(u128) -> bool) -> u128 {
    let mut t = n.value();
    for &(q, e) in n.factors() {
        for _ in 0..e {
            if holds(t / q) {
                t /= q;
            } else {
                break;
            }
        }
    }
    t
}

/// Residue counts over one period and their largest deviation from T/p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquidistReport {
    pub p: u64,
    pub period: u128,
    pub counts: Vec<u128>,
    /// max_r |counts[r]·p − T|; the deviation itself is this over p.
    pub max_dev_scaled: u128,
    /// k, so that the bound is p^{k/2}.
    pub degree: usize,
}

impl EquidistReport {
    /// max_dev as an exact fraction.
    pub fn max_dev(&self) -> Ratio<u128> {
        Ratio::new(self.max_dev_scaled, self.p as u128)
    }

    /// max_dev ≤ p^{k/2}, decided exactly.
    pub fn within_bound(&self) -> bool {
        deviation_within_bound(self.max_dev_scaled, self.p, self.degree)
    }

    /// p^{k/2} as a float, for display.
    pub fn bound_f64(&self) -> f64 {
        (self.p as f64).powf(self.degree as f64 / 2.0)
    }
}

/// scaled / p ≤ p^{k/2}  ⇔  scaled² ≤ p^{k+2}.
fn deviation_within_bound(scaled: u128, p: u64, k: usize) -> bool {
    let lhs = BigUint::from(scaled).pow(2);
    let rhs = BigUint::from(p).pow(k as u32 + 2);
    lhs <= rhs
}

/// Histogram with the default step budget.
pub fn residue_histogram(rec: &RecurrenceSpec, p: u64) -> Result<EquidistReport> {
    residue_histogram_with_budget(rec, p, DEFAULT_STEP_BUDGET)
}

/// Histogram over one full period. When state(T/e) = λ·state(0) for some
/// λ ∈ F_p^*, the period consists of e blocks, each λ times the previous, so
/// only the first T/e steps are iterated and the rest follows by scaling.
pub fn residue_histogram_with_budget(rec: &RecurrenceSpec, p: u64, budget: u128) -> Result<EquidistReport> {
    let s0 = rec.initial_state(p)?;
    let f = PolyModP::from_ints(&rec.char_coeffs, p);
    let lcm = root_order_lcm(&f)?;
    let period = minimal_divisor(&lcm, |t| state_at(&f, &s0, t) == s0);
    if s0.iter().all(|&v| v == 0) {
        let mut counts = vec![0u128; p as usize];
        counts[0] = 1;
        let max_dev_scaled = (p as u128 - 1).max(1);
        return Ok(EquidistReport { p, period: 1, counts, max_dev_scaled, degree: rec.degree() });
    }
    let period_f = crate::arith::factor_integer(period)?;
    let block = minimal_divisor(&period_f, |t| scaling_of(&state_at(&f, &s0, t), &s0, p).is_some());
    if block > budget {
        return Err(Error::BudgetExceeded(format!(
            "histogram at p = {p} needs {block} steps (period {period}), budget {budget}"
        )));
    }
    let lambda = scaling_of(&state_at(&f, &s0, block), &s0, p).expect("block scales the state");
    let e = period / block;

    let reduced = rec.reduced_coeffs(p);
    let mut block_counts = vec![0u64; p as usize];
    let mut state = s0.clone();
    for _ in 0..block {
        block_counts[state[0] as usize] += 1;
        rec.step(&reduced, &mut state, p);
    }

    let mut counts = vec![0u128; p as usize];
    counts[0] = e * block_counts[0] as u128;
    // count(r) = Σ_m block(λ^{−m} r): walk each coset of ⟨λ⟩ once.
    let mut done = vec![false; p as usize];
    for r in 1..p {
        if done[r as usize] {
            continue;
        }
        let mut coset = Vec::with_capacity(e as usize);
        let mut x = r;
        loop {
            coset.push(x);
            x = x * lambda % p;
            if x == r {
                break;
            }
        }
        let total: u128 = coset.iter().map(|&y| block_counts[y as usize] as u128).sum();
        for &y in &coset {
            done[y as usize] = true;
            counts[y as usize] = total;
        }
    }

    let mut max_dev_scaled = 0u128;
    for &c in &counts {
        let scaled = c
            .checked_mul(p as u128)
            .ok_or_else(|| Error::Overflow("residue count times p".into()))?;
        max_dev_scaled = max_dev_scaled.max(scaled.abs_diff(period));
    }
    Ok(EquidistReport { p, period, counts, max_dev_scaled, degree: rec.degree() })
}

/// λ with a = λ·b, if one exists (b nonzero).
fn scaling_of(a: &[u64], b: &[u64], p: u64) -> Option<u64> {
    let i = b.iter().position(|&v| v != 0)?;
    let lambda = a[i] * inv_mod_u64(b[i], p)? % p;
    (lambda != 0 && a.iter().zip(b).all(|(&x, &y)| x == lambda * y % p)).then_some(lambda)
}

/// max_dev ≤ p^{k/2}. Periods at most p^{k/2} pass without iterating,
/// since every count lies in [0, T].
pub fn check_equidist(rec: &RecurrenceSpec, p: u64) -> Result<bool> {
    check_equidist_with_budget(rec, p, DEFAULT_STEP_BUDGET)
}

pub fn check_equidist_with_budget(rec: &RecurrenceSpec, p: u64, budget: u128) -> Result<bool> {
    let period = period_mod_p(rec, p)?;
    let k = rec.degree();
    if deviation_within_bound(period.saturating_mul(p as u128), p, k) {
        return Ok(true);
    }
    Ok(residue_histogram_with_budget(rec, p, budget)?.within_bound())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> RecurrenceSpec {
        RecurrenceSpec::with_integers(vec![-1, -1, 1], &[1, 1]).unwrap()
    }

    /// Iterate until the state repeats.
    fn iterate_period(rec: &RecurrenceSpec, p: u64) -> (u128, Vec<u128>) {
        let s0 = rec.initial_state(p).unwrap();
        let reduced = rec.reduced_coeffs(p);
        let mut s = s0.clone();
        let mut counts = vec![0u128; p as usize];
        let mut t = 0u128;
        loop {
            counts[s[0] as usize] += 1;
            rec.step(&reduced, &mut s, p);
            t += 1;
            if s == s0 {
                return (t, counts);
            }
        }
    }

    #[test]
    fn period_examples() {
        assert_eq!(period_mod_p(&fib(), 11).unwrap(), 10);
        let constant = RecurrenceSpec::with_integers(vec![-1, 1], &[1]).unwrap();
        for p in [2u64, 3, 101] {
            assert_eq!(period_mod_p(&constant, p).unwrap(), 1);
        }
        let twos = RecurrenceSpec::with_integers(vec![-2, 1], &[1]).unwrap();
        assert_eq!(period_mod_p(&twos, 5).unwrap(), 4);
        assert_eq!(period_mod_p(&fib(), 5), Err(Error::ExcludedPrime(5)));
    }

    #[test]
    fn histogram_examples() {
        let r = residue_histogram(&fib(), 11).unwrap();
        // a_0..a_9 = 1 1 2 3 5 8 2 10 1 0
        let mut expected = vec![0u128; 11];
        for (res, c) in [(0, 1), (1, 3), (2, 2), (3, 1), (5, 1), (8, 1), (10, 1)] {
            expected[res] = c;
        }
        assert_eq!(r.counts, expected);
        assert_eq!(r.counts.iter().sum::<u128>(), 10);
        assert!(r.within_bound());

        let constant = RecurrenceSpec::with_integers(vec![-1, 1], &[1]).unwrap();
        let r = residue_histogram(&constant, 7).unwrap();
        assert_eq!(r.counts, vec![0, 1, 0, 0, 0, 0, 0]);

        let twos = RecurrenceSpec::with_integers(vec![-2, 1], &[1]).unwrap();
        let r = residue_histogram(&twos, 5).unwrap();
        assert_eq!(r.counts, vec![0, 1, 1, 1, 1]);
        // Residue 0 never occurs: |0 − 4/5| dominates |1 − 4/5|.
        assert_eq!(r.max_dev(), Ratio::new(4, 5));
    }

    #[test]
    fn rational_initial_values() {
        // a_0 = 1/2, a_1 = 1/3 with Fibonacci; 2 and 3 are excluded.
        let rec = RecurrenceSpec::new(vec![-1, -1, 1], vec![Ratio::new(1, 2), Ratio::new(1, 3)]).unwrap();
        assert!(rec.is_excluded(2) && rec.is_excluded(3) && rec.is_excluded(5));
        assert_eq!(rec.initial_state(7).unwrap(), vec![4, 5]);
        let (t, counts) = iterate_period(&rec, 7);
        let r = residue_histogram(&rec, 7).unwrap();
        assert_eq!((r.period, r.counts), (t, counts));
    }

    #[test]
    fn scaled_blocks_match_direct_iteration() {
        let corpus = [
            RecurrenceSpec::with_integers(vec![-1, -1, 1], &[0, 1]).unwrap(),
            RecurrenceSpec::with_integers(vec![-1, -1, 0, 1], &[0, 0, 1]).unwrap(),
            RecurrenceSpec::with_integers(vec![-1, -1, 0, 1], &[3, 0, 2]).unwrap(),
            RecurrenceSpec::with_integers(vec![-1, -1, 0, 0, 1], &[1, 0, 0, 0]).unwrap(),
            RecurrenceSpec::with_integers(vec![2, -3, 1], &[1, 5]).unwrap(),
        ];
        for rec in &corpus {
            for p in crate::arith::sieve_primes(2, 60).unwrap() {
                if rec.is_excluded(p) {
                    continue;
                }
                let (t, counts) = iterate_period(rec, p);
                let r = residue_histogram(rec, p).unwrap();
                assert_eq!(r.period, t, "p = {p}");
                assert_eq!(r.counts, counts, "p = {p}");
            }
        }
    }

    #[test]
    fn initial_state_vanishing_mod_p() {
        let rec = RecurrenceSpec::with_integers(vec![3, 1], &[5]).unwrap();
        let r = residue_histogram(&rec, 5).unwrap();
        assert_eq!((r.period, r.counts), iterate_period(&rec, 5));
    }

    #[test]
    fn budget_is_enforced() {
        let rec = RecurrenceSpec::with_integers(vec![-1, -1, 0, 0, 1], &[1, 0, 0, 0]).unwrap();
        assert!(matches!(residue_histogram_with_budget(&rec, 997, 1000), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn short_periods_pass_without_iterating() {
        // x^2 + 1 has period 4 at every odd prime; 4 ≤ p.
        let rec = RecurrenceSpec::with_integers(vec![1, 0, 1], &[1, 0]).unwrap();
        assert!(check_equidist_with_budget(&rec, 10007, 0).unwrap());
    }
}
