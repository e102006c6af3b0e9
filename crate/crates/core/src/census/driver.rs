//! Splits [lo, hi) into fixed-size chunks and maps them on a worker pool.
//! Chunk boundaries never depend on the worker count, and results come back
//! in chunk order, so merged output is identical for any number of workers.

use crate::error::{Error, Result};
use rayon::prelude::*;

/// Chunk length used by every census.
pub const CHUNK_LEN: u64 = 1 << 13;

/// Half-open chunk [lo, hi).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chunk {
    pub lo: u64,
    pub hi: u64,
}

pub fn chunks(lo: u64, hi: u64) -> Vec<Chunk> {
    let mut out = Vec::new();
    let mut a = lo;
    while a < hi {
        // Align to multiples of CHUNK_LEN so a resumed run sees the same cuts.
        let b = ((a / CHUNK_LEN + 1) * CHUNK_LEN).min(hi);
        out.push(Chunk { lo: a, hi: b });
        a = b;
    }
    out
}

/// Worker pool of a fixed size.
pub struct Workers {
    pool: rayon::ThreadPool,
}

impl Workers {
    pub fn new(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("worker count must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start workers: {e}")))?;
        Ok(Workers { pool })
    }

    pub fn count(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Maps `f` over the chunks; results are in chunk order. The first error
    /// in chunk order wins.
    pub fn map<T, F>(&self, chunks: &[Chunk], f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(Chunk) -> Result<T> + Sync,
    {
        self.pool.install(|| chunks.par_iter().map(|&c| f(c)).collect::<Vec<_>>().into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunking_is_aligned() {
        let c = chunks(2, 3 * CHUNK_LEN + 5);
        assert_eq!(c.first(), Some(&Chunk { lo: 2, hi: CHUNK_LEN }));
        assert_eq!(c.last(), Some(&Chunk { lo: 3 * CHUNK_LEN, hi: 3 * CHUNK_LEN + 5 }));
        assert_eq!(c.len(), 4);
        assert!(chunks(5, 5).is_empty());
        let resumed = chunks(CHUNK_LEN, 3 * CHUNK_LEN + 5);
        assert_eq!(&c[1..], &resumed[..]);
    }

    #[test]
    fn results_in_order_for_any_pool() {
        let c = chunks(0, 20 * CHUNK_LEN);
        let serial: Vec<u64> = c.iter().map(|c| c.lo * 3 + c.hi).collect();
        for w in [1, 2, 8] {
            let got = Workers::new(w).unwrap().map(&c, |c| Ok(c.lo * 3 + c.hi)).unwrap();
            assert_eq!(got, serial);
        }
        assert!(Workers::new(0).is_err());
    }
}
