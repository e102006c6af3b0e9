//! Segmented sieve of Eratosthenes over half-open ranges.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Largest admissible upper bound for [`sieve_primes`].
pub const SIEVE_CAP: u64 = 1 << 40;

const SEGMENT: u64 = 1 << 18;

/// Plain sieve for `[0, n)`; used for the base primes of each segment.
fn simple_sieve(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes in `[lo, hi)`, ascending.
///
/// Memory is O(sqrt(hi) + segment) regardless of the range width.
pub fn sieve_primes(lo: u64, hi: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for_each_prime(lo, hi, |p| out.push(p))?;
    Ok(out)
}

/// Streams the primes of `[lo, hi)` in ascending order into `f`.
pub fn for_each_prime(lo: u64, hi: u64, mut f: impl FnMut(u64)) -> Result<()> {
    if hi > SIEVE_CAP {
        return Err(Error::RangeTooLarge { what: "sieve bound", value: hi as u128, cap: SIEVE_CAP as u128 });
    }
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    let lo = lo.max(2);
    if lo >= hi {
        return Ok(());
    }
    let root = super::modmath::isqrt(hi as u128) as u64 + 1;
    let base = simple_sieve(root + 1);
    let mut flags = vec![false; SEGMENT as usize];
    let mut seg_lo = lo;
    while seg_lo < hi {
        let seg_hi = (seg_lo + SEGMENT).min(hi);
        let len = (seg_hi - seg_lo) as usize;
        flags[..len].fill(true);
        for &p in &base {
            if p * p >= seg_hi {
                break;
            }
            let mut start = seg_lo.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut j = start;
            while j < seg_hi {
                flags[(j - seg_lo) as usize] = false;
                j += p;
            }
        }
        for (i, &is_p) in flags[..len].iter().enumerate() {
            if is_p {
                f(seg_lo + i as u64);
            }
        }
        seg_lo = seg_hi;
    }
    Ok(())
}

/// Primes below `bound`, computed once and shared.
pub(crate) fn small_primes() -> &'static [u64] {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    CACHE.get_or_init(|| simple_sieve(super::factor::TRIAL_BOUND + 1))
}
