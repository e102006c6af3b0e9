//! Multiplicative orders, power residues, the C_q predicates and the
//! small-exponent searches over several reductions.

use crate::arith::{cyclotomic_eval, ell_of_q, factor_pk_minus_1, FactorialCap, FactoredInteger};
use crate::error::{Error, Result};
use crate::gf::{standard_field, FieldElement};
use crate::reduction::AlgebraicNumberSpec;
use rayon::prelude::*;

/// Order of one reduction at one prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderRecord {
    pub p: u64,
    pub d: usize,
    pub ord: u128,
    /// (p^d − 1) / ord.
    pub index: u128,
}

fn check_group(a: &FieldElement, group_order: &FactoredInteger) -> Result<()> {
    let expected = a.field().group_order()?;
    if group_order.value() != expected {
        return Err(Error::GroupOrderMismatch { given: group_order.value(), expected });
    }
    Ok(())
}

/// Least n ≥ 1 with a^n = 1, by descent from the group order.
pub fn mult_order(a: &FieldElement, group_order: &FactoredInteger) -> Result<u128> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    check_group(a, group_order)?;
    let mut n = group_order.value();
    for &(q, e) in group_order.factors() {
        for _ in 0..e {
            if a.pow(n / q).is_one() {
                n /= q;
            } else {
                break;
            }
        }
    }
    Ok(n)
}

/// a is an ell-th power in its field, i.e. a^{(p^k−1)/ell} = 1.
pub fn is_power_residue(a: &FieldElement, ell: u128, group_order: &FactoredInteger) -> Result<bool> {
    check_group(a, group_order)?;
    let n = group_order.value();
    if ell == 0 || !n.is_multiple_of(ell) {
        return Err(Error::NonDivisor { ell, order: n });
    }
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(a.pow(n / ell).is_one())
}

/// C_q at the cyclotomic factor Φ_d: ℓ(q) | Φ_d(p) and a is an ℓ(q)-th power.
pub fn condition_cq(p: u64, a: &FieldElement, q: u128, cap: FactorialCap, d: usize) -> Result<bool> {
    let k = a.field().degree();
    if a.p() != p {
        return Err(Error::FieldMismatch);
    }
    if d == 0 || !k.is_multiple_of(d) {
        return Err(Error::InvalidArgument(format!("d = {d} does not divide the field degree {k}")));
    }
    let ell = ell_of_q(q, cap)?;
    if cyclotomic_eval(d as u32, p as u128)? % ell != 0 {
        return Ok(false);
    }
    is_power_residue(a, ell, &factor_pk_minus_1(p, k as u32)?)
}

/// C_q against the whole group: ℓ(q) | p^k − 1 and a is an ℓ(q)-th power.
pub fn condition_cq_total(a: &FieldElement, q: u128, cap: FactorialCap, group_order: &FactoredInteger) -> Result<bool> {
    let ell = ell_of_q(q, cap)?;
    if !group_order.value().is_multiple_of(ell) {
        check_group(a, group_order)?;
        return Ok(false);
    }
    is_power_residue(a, ell, group_order)
}

/// Orders of every degree-d reduction of α at p, in canonical factor order.
/// Empty when p is not in S.
pub fn reduction_orders(spec: &AlgebraicNumberSpec, p: u64, d: usize) -> Result<Vec<u128>> {
    if !spec.is_in_s(p, d) {
        return Ok(Vec::new());
    }
    let reductions = spec.reductions_of_degree(p, d)?;
    let group = factor_pk_minus_1(p, d as u32)?;
    reductions.iter().map(|e| mult_order(e, &group)).collect()
}

/// Record for the first canonical degree-d reduction, or None when p ∉ S.
pub fn order_record(spec: &AlgebraicNumberSpec, p: u64, d: usize) -> Result<Option<OrderRecord>> {
    if !spec.is_in_s(p, d) {
        return Ok(None);
    }
    let first = spec.reductions_of_degree(p, d)?.into_iter().next();
    let Some(e) = first else { return Ok(None) };
    let group = factor_pk_minus_1(p, d as u32)?;
    let ord = mult_order(&e, &group)?;
    Ok(Some(OrderRecord { p, d, ord, index: group.value() / ord }))
}

/// Largest search space accepted by the exhaustive scans.
pub const SEARCH_CAP: u128 = 1 << 24;

const POWER_TABLE_LIMIT: u64 = 4096;

/// Exponent vector in [0, N)^n maximizing the order of ∏ elems_i^{e_i};
/// ties go to the lexicographically least vector.
pub fn best_product_order(
    elems: &[FieldElement],
    n_bound: u64,
    group_order: &FactoredInteger,
) -> Result<(Vec<u64>, u128)> {
    let Some(first) = elems.first() else {
        return Err(Error::InvalidArgument("no elements".into()));
    };
    if elems.iter().any(|e| !same(e, first)) {
        return Err(Error::FieldMismatch);
    }
    check_group(first, group_order)?;
    if n_bound < 2 {
        return Err(Error::InvalidArgument("exponent bound must be at least 2".into()));
    }
    let size = (n_bound as u128).checked_pow(elems.len() as u32).unwrap_or(u128::MAX);
    if size > SEARCH_CAP {
        return Err(Error::CapExceeded { size, cap: SEARCH_CAP });
    }
    let n = elems.len();
    let tables: Option<Vec<Vec<FieldElement>>> = (n_bound <= POWER_TABLE_LIMIT).then(|| {
        elems
            .iter()
            .map(|e| {
                let mut row = Vec::with_capacity(n_bound as usize);
                let mut acc = FieldElement::one(e.field());
                for _ in 0..n_bound {
                    row.push(acc.clone());
                    acc = acc.mul(e).expect("same field");
                }
                row
            })
            .collect()
    });
    let digits = |mut idx: u128| -> Vec<u64> {
        let mut v = vec![0u64; n];
        for slot in v.iter_mut().rev() {
            *slot = (idx % n_bound as u128) as u64;
            idx /= n_bound as u128;
        }
        v
    };
    let order_at = |idx: u128| -> u128 {
        let exps = digits(idx);
        let mut prod = FieldElement::one(first.field());
        for (i, &e) in exps.iter().enumerate() {
            let term = match &tables {
                Some(t) => t[i][e as usize].clone(),
                None => elems[i].pow(e as u128),
            };
            prod = prod.mul(&term).expect("same field");
        }
        mult_order(&prod, group_order).expect("nonzero product in the checked group")
    };
    // Index order equals lexicographic order; keep the smallest index among maxima.
    let (ord, idx) = (1..size as u64)
        .into_par_iter()
        .map(|i| (order_at(i as u128), std::cmp::Reverse(i)))
        .max()
        .expect("at least one candidate");
    Ok((digits(idx.0 as u128), ord))
}

fn same(a: &FieldElement, b: &FieldElement) -> bool {
    a.field().p() == b.field().p() && a.field().modulus() == b.field().modulus()
}

/// Relation found (or not) at one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeRelation {
    pub p: u64,
    pub relation: Option<Vec<i64>>,
}

/// Heuristic multiplicative-relation screen. Absence of a relation is
/// evidence of independence, not a proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationScan {
    pub degree: usize,
    /// One label per exponent slot: "<spec>^{p^j}".
    pub labels: Vec<String>,
    pub per_prime: Vec<PrimeRelation>,
    /// Primes where some spec has no degree-d reduction.
    pub skipped: Vec<u64>,
    /// First relation holding at every scanned prime.
    pub common: Option<Vec<i64>>,
}

/// Searches small exponent vectors over the degree-d reductions of each spec
/// and their Frobenius conjugates, all placed in the standard F_{p^d}.
/// Exponents lie in [−B, B] with the first nonzero one positive; vectors are
/// visited by increasing max-norm, then lexicographically.
pub fn small_relation_scan(
    specs: &[AlgebraicNumberSpec],
    primes: &[u64],
    degree: usize,
    exponent_bound: u32,
) -> Result<RelationScan> {
    let labels: Vec<String> = specs
        .iter()
        .flat_map(|s| (0..degree).map(move |j| match j {
            0 => s.label().to_string(),
            1 => format!("{}^p", s.label()),
            _ => format!("{}^(p^{j})", s.label()),
        }))
        .collect();
    let n = labels.len();
    let mut scan = RelationScan { degree, labels, per_prime: Vec::new(), skipped: Vec::new(), common: None };
    if n == 0 || exponent_bound == 0 {
        return Ok(scan);
    }
    let width = 2 * exponent_bound as u128 + 1;
    let size = width.checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > SEARCH_CAP {
        return Err(Error::CapExceeded { size, cap: SEARCH_CAP });
    }
    let b = exponent_bound as i64;

    // tables[prime][slot][e + B] = slot^e
    let mut tables: Vec<Vec<Vec<FieldElement>>> = Vec::new();
    for &p in primes {
        let Some(elems) = conjugate_slots(specs, p, degree)? else {
            scan.skipped.push(p);
            continue;
        };
        let rows = elems
            .iter()
            .map(|e| {
                let inv = e.inv()?;
                Ok((-b..=b)
                    .map(|k| if k >= 0 { e.pow(k as u128) } else { inv.pow((-k) as u128) })
                    .collect())
            })
            .collect::<Result<Vec<Vec<FieldElement>>>>()?;
        scan.per_prime.push(PrimeRelation { p, relation: None });
        tables.push(rows);
    }
    if tables.is_empty() {
        return Ok(scan);
    }

    'norms: for m in 1..=b {
        let mut v = vec![-m; n];
        loop {
            let max = v.iter().map(|x| x.abs()).max().unwrap();
            let first_nonzero = v.iter().find(|&&x| x != 0).copied().unwrap_or(0);
            if max == m && first_nonzero > 0 {
                let mut all = true;
                for (t, rel) in tables.iter().zip(scan.per_prime.iter_mut()) {
                    let mut prod = t[0][(v[0] + b) as usize].clone();
                    for (slot, &e) in v.iter().enumerate().skip(1) {
                        prod = prod.mul(&t[slot][(e + b) as usize])?;
                    }
                    if prod.is_one() {
                        if rel.relation.is_none() {
                            rel.relation = Some(v.clone());
                        }
                    } else {
                        all = false;
                    }
                }
                if all {
                    scan.common = Some(v.clone());
                    break 'norms;
                }
            }
            // Lexicographic successor in [−m, m]^n.
            let mut i = n;
            loop {
                if i == 0 {
                    continue 'norms;
                }
                i -= 1;
                if v[i] < m {
                    v[i] += 1;
                    break;
                }
                v[i] = -m;
            }
        }
    }
    Ok(scan)
}

/// φ(α), φ(α)^p, … for every spec inside the standard F_{p^d}; None when
/// some spec has no degree-d reduction at p.
fn conjugate_slots(specs: &[AlgebraicNumberSpec], p: u64, d: usize) -> Result<Option<Vec<FieldElement>>> {
    if specs.iter().any(|s| !s.is_in_s(p, d)) {
        return Ok(None);
    }
    let field = standard_field(p, d)?;
    let mut out = Vec::with_capacity(specs.len() * d);
    for s in specs {
        let root = s
            .reductions_in_field(&field)?
            .into_iter()
            .find(|r| r.degree_over_base() == d)
            .expect("a degree-d factor has a root of degree d");
        let mut c = root;
        for _ in 0..d {
            let next = c.frobenius();
            out.push(c);
            c = next;
        }
    }
    Ok(Some(out))
}
