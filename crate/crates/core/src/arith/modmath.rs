//! Modular arithmetic for moduli below 2^127 and deterministic primality.
//!
//! Moduli that fit in 64 bits go through native `u128` products. Larger odd
//! moduli use Montgomery multiplication with R = 2^128; the 256-bit
//! intermediate is assembled from four 64x64 limb products.

/// Full 128x128 -> 256 bit product, returned as (hi, lo).
#[inline]
pub fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = (1u128 << 64) - 1;
    let (a1, a0) = (a >> 64, a & MASK);
    let (b1, b0) = (b >> 64, b & MASK);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Montgomery context for an odd modulus `n < 2^127`.
#[derive(Clone, Copy, Debug)]
pub struct Mont128 {
    n: u128,
    neg_inv: u128,
    r1: u128,
    r2: u128,
}

impl Mont128 {
    pub fn new(n: u128) -> Self {
        assert!(n & 1 == 1 && n >> 127 == 0 && n > 1, "modulus must be odd, > 1 and < 2^127");
        let mut inv = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        let neg_inv = inv.wrapping_neg();
        let r1 = (u128::MAX % n + 1) % n;
        let mut r2 = r1;
        for _ in 0..128 {
            r2 <<= 1;
            if r2 >= n {
                r2 -= n;
            }
        }
        Mont128 { n, neg_inv, r1, r2 }
    }

    #[inline]
    pub fn modulus(&self) -> u128 {
        self.n
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.neg_inv);
        let (mh, ml) = mul_wide(m, self.n);
        let (_, carry) = lo.overflowing_add(ml);
        let t = hi + mh + carry as u128;
        if t >= self.n {
            t - self.n
        } else {
            t
        }
    }

    #[inline]
    pub fn to_mont(&self, a: u128) -> u128 {
        let (hi, lo) = mul_wide(a % self.n, self.r2);
        self.redc(hi, lo)
    }

    #[inline]
    pub fn from_mont(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    #[inline]
    pub fn one(&self) -> u128 {
        self.r1
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    /// Halving of a Montgomery residue (the representation is linear).
    #[inline]
    pub fn half(&self, a: u128) -> u128 {
        if a & 1 == 0 {
            a >> 1
        } else {
            (a >> 1) + (self.n >> 1) + 1
        }
    }

    pub fn pow(&self, base: u128, mut e: u128) -> u128 {
        let mut acc = self.r1;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        e >>= 1;
    }
    acc
}

/// Modular multiplication for any modulus `m < 2^127`.
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return ((a % m) * (b % m)) % m;
    }
    // Shift-and-add; only used off the hot paths for even wide moduli.
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc += a;
            if acc >= m {
                acc -= m;
            }
        }
        a <<= 1;
        if a >= m {
            a -= m;
        }
        b >>= 1;
    }
    acc
}

pub fn pow_mod(base: u128, mut e: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    if m <= u64::MAX as u128 {
        let m64 = m as u64;
        if e <= u64::MAX as u128 {
            return pow_mod_u64((base % m) as u64, e as u64, m64) as u128;
        }
    }
    let mut acc = 1u128;
    let mut b = base % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` when gcd(a, m) = 1.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 && old_r != -1 {
        return None;
    }
    let inv = (old_s * old_r).rem_euclid(m as i128);
    Some(inv as u64)
}

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Above this bound the 13 prime bases are no longer a proven certificate
/// (Sorenson–Webster), so a strong Lucas test is added (Baillie–PSW).
const MR_DETERMINISTIC_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

fn strong_probable_prime_u64(n: u64, a: u64) -> bool {
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    let mut x = pow_mod_u64(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn strong_probable_prime_mont(m: &Mont128, a: u128) -> bool {
    let n = m.modulus();
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    let one = m.one();
    let minus_one = m.sub(0, one);
    let mut x = m.pow(m.to_mont(a), d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = m.mul(x, x);
        if x == minus_one {
            return true;
        }
    }
    false
}

fn jacobi(a: i128, mut n: u128) -> i32 {
    let mut a_u = a.rem_euclid(n as i128) as u128;
    let mut t = 1;
    while a_u != 0 {
        while a_u & 1 == 0 {
            a_u >>= 1;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a_u, &mut n);
        if a_u % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a_u %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

fn is_square(n: u128) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Integer square root (floor).
/// Square root of `a` modulo an odd prime `p` (Tonelli–Shanks); `None` for non-residues.
pub fn sqrt_mod_u64(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if pow_mod_u64(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p).find(|&z| pow_mod_u64(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod_u64(z, q, p);
    let mut t = pow_mod_u64(a, q, p);
    let mut r = pow_mod_u64(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod_u64(t2, t2, p);
            i += 1;
        }
        let b = pow_mod_u64(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod_u64(b, b, p);
        t = mul_mod_u64(t, c, p);
        r = mul_mod_u64(r, b, p);
    }
    Some(r)
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

/// Strong Lucas probable-prime test with Selfridge parameters.
fn strong_lucas(n: u128) -> bool {
    if is_square(n) {
        return false;
    }
    let mut d: i128 = 5;
    loop {
        let j = jacobi(d, n);
        if j == -1 {
            break;
        }
        if j == 0 && d.unsigned_abs() != n {
            return false;
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
    }
    let m = Mont128::new(n);
    let p_mont = m.one();
    let q = (1 - d) / 4;
    let q_mont = m.to_mont(q.rem_euclid(n as i128) as u128);
    let d_mont = m.to_mont(d.rem_euclid(n as i128) as u128);

    let delta = n + 1;
    let s = delta.trailing_zeros();
    let k = delta >> s;

    // Binary ladder on k computing U_k, V_k, Q^k.
    let mut u = 0u128;
    let mut v = m.add(m.one(), m.one());
    let mut qk = m.one();
    for bit in (0..(128 - k.leading_zeros())).rev() {
        // doubling
        u = m.mul(u, v);
        v = m.sub(m.mul(v, v), m.add(qk, qk));
        qk = m.mul(qk, qk);
        if (k >> bit) & 1 == 1 {
            let u_new = m.half(m.add(m.mul(p_mont, u), v));
            let v_new = m.half(m.add(m.mul(d_mont, u), m.mul(p_mont, v)));
            u = u_new;
            v = v_new;
            qk = m.mul(qk, q_mont);
        }
    }
    if u == 0 || v == 0 {
        return true;
    }
    for _ in 1..s {
        v = m.sub(m.mul(v, v), m.add(qk, qk));
        qk = m.mul(qk, qk);
        if v == 0 {
            return true;
        }
    }
    false
}

/// Deterministic primality for `n < 2^127`.
///
/// Miller–Rabin over the first 13 primes is a proof below 3.3e24; beyond
/// that the test is Baillie–PSW.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        let p = p as u128;
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 43 * 43 {
        return true;
    }
    if n <= u64::MAX as u128 {
        let n64 = n as u64;
        return MR_BASES.iter().all(|&a| strong_probable_prime_u64(n64, a));
    }
    let m = Mont128::new(n);
    if !MR_BASES.iter().all(|&a| strong_probable_prime_mont(&m, a as u128)) {
        return false;
    }
    n < MR_DETERMINISTIC_BOUND || strong_lucas(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_prime(n: u128) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn wide_product_matches_bigint() {
        use num_bigint::BigUint;
        let vals = [0u128, 1, u64::MAX as u128 * 3 + 17, (1u128 << 100) + 12345, u128::MAX];
        for &a in &vals {
            for &b in &vals {
                let (hi, lo) = mul_wide(a, b);
                let got = (BigUint::from(hi) << 128u32) + BigUint::from(lo);
                assert_eq!(got, BigUint::from(a) * BigUint::from(b));
            }
        }
    }

    #[test]
    fn montgomery_matches_shift_add() {
        let n = (1u128 << 126) + 15; // odd
        let m = Mont128::new(n);
        let vals = [3u128, n - 1, 1 << 90, 123_456_789_012_345_678_901_234];
        for &a in &vals {
            for &b in &vals {
                let got = m.from_mont(m.mul(m.to_mont(a), m.to_mont(b)));
                assert_eq!(got, mul_mod(a, b, n));
            }
        }
    }

    #[test]
    fn primality_small_agrees_with_trial_division() {
        for n in 0..20_000u128 {
            assert_eq!(is_prime(n), naive_prime(n), "n = {n}");
        }
    }

    #[test]
    fn primality_known_large_values() {
        // 2^61 - 1 and 2^89 - 1 and 2^107 - 1 and 2^127 - 1 minus a factor check.
        assert!(is_prime((1u128 << 61) - 1));
        assert!(is_prime((1u128 << 89) - 1));
        assert!(is_prime((1u128 << 107) - 1));
        assert!(!is_prime((1u128 << 67) - 1)); // 193707721 * 761838257287
        // Strong pseudoprime to many bases: 3825123056546413051 = 149491 * 747451 * 34233211
        assert!(!is_prime(3_825_123_056_546_413_051));
        // Product of two ~50-bit primes, above 2^81.
        let p = 1_125_899_906_842_597u128; // 2^50 - 27
        let q = 1_125_899_906_842_679u128;
        assert!(is_prime(p) && is_prime(q));
        assert!(!is_prime(p * q));
    }

    #[test]
    fn lucas_agrees_on_small_odd_numbers() {
        for n in (3..5000u128).step_by(2) {
            if is_square(n) {
                continue;
            }
            if naive_prime(n) {
                assert!(strong_lucas(n), "prime {n} rejected");
            }
        }
        // 5459 = 53 * 103 is the smallest strong Lucas pseudoprime.
        assert!(strong_lucas(5459));
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(inv_mod_u64(3, 7), Some(5));
        assert_eq!(inv_mod_u64(6, 9), None);
        assert_eq!(inv_mod_u64(1, 2), Some(1));
    }

    #[test]
    fn square_roots_mod_p() {
        for p in [3u64, 5, 7, 13, 17, 97, 257, 65_537, 1_048_573] {
            let residues: std::collections::BTreeSet<u64> =
                (1..p.min(3000)).map(|x| x * x % p).collect();
            for a in 0..p.min(3000) {
                match sqrt_mod_u64(a, p) {
                    Some(r) => assert_eq!(r * r % p, a % p, "p={p} a={a}"),
                    None => assert!(a != 0 && (p > 3000 || !residues.contains(&a)), "p={p} a={a}"),
                }
            }
        }
    }
}
