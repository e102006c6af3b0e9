//! Orders against discrete-log tables built by walking powers, and the
//! power-residue structure behind the C_q predicates.

use proptest::prelude::*;
use redord_core::arith::{factor_pk_minus_1, sieve_primes, FactorialCap};
use redord_core::gf::{standard_field, ExtField, FieldElement};
use redord_core::order::{condition_cq, condition_cq_total, is_power_residue, mult_order};
use std::sync::Arc;

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn all_elements(field: &Arc<ExtField>) -> Vec<FieldElement> {
    let p = field.p();
    let k = field.degree();
    let q = p.pow(k as u32);
    (1..q)
        .map(|mut n| {
            let mut c = vec![0u64; k];
            for slot in c.iter_mut() {
                *slot = n % p;
                n /= p;
            }
            FieldElement::from_coeffs(field, &c).unwrap()
        })
        .collect()
}

/// Order of every nonzero element: walk the powers of a generator found by
/// brute force, then ord(g^i) = (q−1)/gcd(i, q−1).
fn orders_by_power_walk(field: &Arc<ExtField>) -> Vec<(Vec<u64>, u128)> {
    let elems = all_elements(field);
    let n = elems.len() as u128;
    let walk = |g: &FieldElement| -> Option<Vec<FieldElement>> {
        let mut seen = vec![g.clone()];
        let mut acc = g.clone();
        while !acc.is_one() {
            acc = acc.mul(g).unwrap();
            seen.push(acc.clone());
        }
        (seen.len() as u128 == n).then_some(seen)
    };
    let powers = elems.iter().find_map(walk).expect("cyclic group");
    powers
        .iter()
        .enumerate()
        .map(|(i, e)| (e.coeffs().to_vec(), n / gcd(i as u128 + 1, n)))
        .collect()
}

#[test]
fn orders_match_power_walk_up_to_4096() {
    for p in sieve_primes(2, 4096).unwrap() {
        let mut k = 1;
        while p.pow(k as u32) <= 4096 {
            let field = standard_field(p, k).unwrap();
            let group = factor_pk_minus_1(p, k as u32).unwrap();
            for (coeffs, ord) in orders_by_power_walk(&field) {
                let a = FieldElement::from_coeffs(&field, &coeffs).unwrap();
                assert_eq!(mult_order(&a, &group).unwrap(), ord, "p={p} k={k} a={coeffs:?}");
            }
            k += 1;
        }
    }
}

fn small_field() -> impl Strategy<Value = (u64, usize)> {
    prop::sample::select(vec![
        (2u64, 1usize), (2, 5), (2, 8), (3, 4), (5, 3), (7, 2), (7, 3), (11, 2), (13, 4),
        (101, 1), (101, 2), (997, 2), (65_537, 1), (1_048_573, 2),
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]
    #[test]
    fn order_is_minimal((p, k) in small_field(), raw in prop::collection::vec(any::<u64>(), 8)) {
        let field = standard_field(p, k).unwrap();
        let coeffs: Vec<u64> = raw.iter().take(k).map(|c| c % p).collect();
        let a = FieldElement::from_coeffs(&field, &coeffs).unwrap();
        prop_assume!(!a.is_zero());
        let group = factor_pk_minus_1(p, k as u32).unwrap();
        let ord = mult_order(&a, &group).unwrap();
        prop_assert!(a.pow(ord).is_one());
        prop_assert_eq!(group.value() % ord, 0);
        for &(q, _) in group.factors() {
            if ord.is_multiple_of(q) {
                prop_assert!(!a.pow(ord / q).is_one());
            }
        }
        prop_assert_eq!(mult_order(&a.frobenius(), &group).unwrap(), ord);
        let index = group.value() / ord;
        for &(q, e) in group.factors() {
            let mut ell = 1u128;
            for _ in 0..e {
                ell *= q;
                prop_assert_eq!(is_power_residue(&a, ell, &group).unwrap(), index.is_multiple_of(ell));
            }
        }
    }

    #[test]
    fn no_total_cq_means_index_divides_h(
        (p, k) in small_field(),
        raw in prop::collection::vec(any::<u64>(), 8),
        cap in 2u64..=7,
        power in 0u32..4,
    ) {
        let field = standard_field(p, k).unwrap();
        let coeffs: Vec<u64> = raw.iter().take(k).map(|c| c % p).collect();
        let a = FieldElement::from_coeffs(&field, &coeffs).unwrap();
        prop_assume!(!a.is_zero());
        // Raise to small powers so that large indices actually occur.
        let a = a.pow([1u128, 2, 6, 24][power as usize]);
        let group = factor_pk_minus_1(p, k as u32).unwrap();
        let cap = FactorialCap::new(cap).unwrap();
        let h = cap.factorial().unwrap();
        let ord = mult_order(&a, &group).unwrap();
        let any_cq = group
            .primes()
            .any(|q| condition_cq_total(&a, q, cap, &group).unwrap());
        prop_assert_eq!(!any_cq, (h * ord).is_multiple_of(group.value()));
    }
}

/// With the per-cyclotomic-factor form, a power of q can divide p^k − 1 without
/// dividing any single Φ_d(p). Here p = 7, k = 3, H = 3 (h = 6, ℓ(3) = 9):
/// 7^3 − 1 = 6 · 57, and 9 divides neither factor.
#[test]
fn per_factor_cq_misses_split_prime_powers() {
    let p = 7;
    let field = standard_field(p, 3).unwrap();
    let group = factor_pk_minus_1(p, 3).unwrap();
    let cap = FactorialCap::new(3).unwrap();
    let g = all_elements(&field)
        .into_iter()
        .find(|e| mult_order(e, &group).unwrap() == 342)
        .unwrap();
    let a = g.pow(9);
    assert_eq!(mult_order(&a, &group).unwrap(), 38);
    for q in group.primes() {
        for d in [1, 3] {
            assert!(!condition_cq(p, &a, q, cap, d).unwrap(), "q={q} d={d}");
        }
    }
    assert!(condition_cq_total(&a, 3, cap, &group).unwrap());
    assert_ne!((6 * 38), 0);
}
