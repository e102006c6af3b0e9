//! Factorization of polynomials over F_p: squarefree decomposition,
//! distinct-degree splitting and Cantor–Zassenhaus equal-degree splitting.
//!
//! The equal-degree step draws random polynomials from a ChaCha stream seeded
//! by (seed, p, coefficients of the input), and the output is sorted
//! canonically, so the result never depends on the draw order.

use super::poly::PolyModP;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A monic irreducible factor with its multiplicity.
pub type PolyFactor = (PolyModP, u32);

/// Canonical order: by degree, then lexicographically on the coefficient
/// list (lowest degree first).
pub fn canonical_cmp(a: &PolyModP, b: &PolyModP) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs()))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn rng_for(seed: u64, f: &PolyModP) -> ChaCha8Rng {
    let mut h = splitmix(seed ^ 0x5eed);
    h = splitmix(h ^ f.p());
    for &c in f.coeffs() {
        h = splitmix(h ^ c);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Squarefree decomposition of a monic polynomial: pairs (g, m) with g
/// squarefree, pairwise coprime, and f = ∏ g^m.
fn squarefree(f: &PolyModP) -> Vec<PolyFactor> {
    let p = f.p();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        // What remains is a polynomial in x^p.
        for (g, m) in squarefree(&c.pth_root()) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree split of a monic squarefree polynomial into pairs
/// (product of all irreducible factors of degree d, d).
fn distinct_degree(f: &PolyModP) -> Vec<(PolyModP, usize)> {
    let p = f.p();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = PolyModP::x(p);
    let mut h = x.clone();
    let mut d = 0;
    while let Some(n) = rest.degree() {
        if n < 2 * (d + 1) {
            if n > 0 {
                out.push((rest.clone(), n));
            }
            break;
        }
        d += 1;
        h = h.pow_mod(p as u128, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest).expect("nonzero");
            out.push((g, d));
        }
    }
    out
}

fn random_poly(p: u64, below_degree: usize, rng: &mut ChaCha8Rng) -> PolyModP {
    PolyModP::new(p, (0..below_degree).map(|_| rng.gen_range(0..p)).collect())
}

/// Splits a monic product of distinct irreducibles all of degree `d`.
fn equal_degree(f: &PolyModP, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<PolyModP>) {
    let n = f.degree().expect("nonzero");
    if n == d {
        out.push(f.clone());
        return;
    }
    let p = f.p();
    loop {
        let a = random_poly(p, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // Trace to F_2: a + a^2 + a^4 + … + a^{2^{d-1}}.
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..d {
                t = t.mul_mod(&t, f);
                s = s.add(&t);
            }
            s
        } else {
            // a^{(p^d − 1)/2} = (a · a^p · … · a^{p^{d−1}})^{(p−1)/2}
            let mut conj = a.rem(f).expect("nonzero");
            let mut prod = conj.clone();
            for _ in 1..d {
                conj = conj.pow_mod(p as u128, f);
                prod = prod.mul_mod(&conj, f);
            }
            prod.pow_mod(((p - 1) / 2) as u128, f).sub(&PolyModP::one(p))
        };
        let g = f.gcd(&candidate);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            equal_degree(&g, d, rng, out);
            equal_degree(&f.div_exact(&g), d, rng, out);
            return;
        }
    }
}

/// Full factorization with the default seed.
pub fn factor_mod_p(f: &PolyModP) -> Result<Vec<PolyFactor>> {
    factor_mod_p_seeded(f, 0)
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted canonically. The leading coefficient is dropped (see
/// [`PolyModP::leading`]); constants factor as the empty list.
pub fn factor_mod_p_seeded(f: &PolyModP, seed: u64) -> Result<Vec<PolyFactor>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let monic = f.monic();
    let mut rng = rng_for(seed, &monic);
    let mut out: Vec<PolyFactor> = Vec::new();
    for (part, mult) in squarefree(&monic) {
        for (block, d) in distinct_degree(&part) {
            let mut pieces = Vec::new();
            equal_degree(&block, d, &mut rng, &mut pieces);
            out.extend(pieces.into_iter().map(|g| (g, mult)));
        }
    }
    out.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
    Ok(out)
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &PolyModP) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let f = f.monic();
    let p = f.p();
    let x = PolyModP::x(p);
    // x^{p^j} mod f for j = 0..=n
    let mut powers = vec![x.clone()];
    for j in 1..=n {
        powers.push(powers[j - 1].pow_mod(p as u128, &f));
    }
    if powers[n] != x.rem(&f).expect("nonzero") {
        return false;
    }
    let mut m = n;
    let mut r = 2;
    while m > 1 {
        if m % r == 0 {
            while m % r == 0 {
                m /= r;
            }
            if !f.gcd(&powers[n / r].sub(&x)).is_one() {
                return false;
            }
        }
        r += 1;
    }
    true
}
