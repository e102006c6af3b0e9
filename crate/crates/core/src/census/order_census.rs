//! Density of primes whose degree-d reductions have order at least f(p)/h.

use super::driver::{chunks, Chunk, Workers};
use super::numfmt::format_ratio;
use super::real::Decimal;
use super::CENSUS_CAP;
use crate::arith::{factor_pk_minus_1, for_each_prime, FactorialCap};
use crate::error::{Error, Result};
use crate::order::{condition_cq_total, mult_order};
use crate::reduction::AlgebraicNumberSpec;
use num_bigint::BigUint;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

/// Default h values.
pub const DEFAULT_H_GRID: [u128; 10] = [1, 2, 4, 6, 12, 24, 48, 120, 720, 5040];

/// Which f(p) the pass test divides by h.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FLaw {
    /// f(p) = p^d − 1.
    GroupOrder,
    /// f(p) = 2(p + 1), for quadratic units reduced to degree 2.
    UnitQuadratic,
}

/// Requested law; `Auto` picks `UnitQuadratic` exactly when deg α = d = 2 and |N(α)| = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FMode {
    Auto,
    Fixed(FLaw),
}

impl FLaw {
    pub fn resolve(mode: FMode, spec: &AlgebraicNumberSpec, d: usize) -> FLaw {
        match mode {
            FMode::Fixed(law) => law,
            FMode::Auto if d == 2 && spec.degree() == 2 && spec.is_unit_norm() => FLaw::UnitQuadratic,
            FMode::Auto => FLaw::GroupOrder,
        }
    }

    pub fn value(self, p: u64, group_order: u128) -> u128 {
        match self {
            FLaw::GroupOrder => group_order,
            FLaw::UnitQuadratic => 2 * (p as u128 + 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FLaw::GroupOrder => "group-order",
            FLaw::UnitQuadratic => "unit-quadratic",
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrderCensusConfig {
    pub spec: AlgebraicNumberSpec,
    pub d: usize,
    pub x: u64,
    pub cap: FactorialCap,
    pub h_grid: Vec<Decimal>,
    pub mode: FMode,
}

impl OrderCensusConfig {
    pub fn new(spec: AlgebraicNumberSpec, d: usize, x: u64, cap: FactorialCap, h_grid: Vec<Decimal>) -> Self {
        OrderCensusConfig { spec, d, x, cap, h_grid, mode: FMode::Auto }
    }

    pub fn default_grid() -> Vec<Decimal> {
        DEFAULT_H_GRID.iter().map(|&h| Decimal::integer(h)).collect()
    }

    pub fn law(&self) -> FLaw {
        FLaw::resolve(self.mode, &self.spec, self.d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x > CENSUS_CAP {
            return Err(Error::BudgetExceeded(format!("census bound {} exceeds {}", self.x, CENSUS_CAP)));
        }
        if self.d == 0 || self.d > crate::gf::MAX_EXT_DEGREE {
            return Err(Error::InvalidArgument(format!("reduction degree {} out of range", self.d)));
        }
        if self.h_grid.is_empty() || self.h_grid.iter().any(|h| h.is_zero()) {
            return Err(Error::InvalidArgument("h grid must be nonempty and positive".into()));
        }
        if self.h_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("h grid must be strictly ascending".into()));
        }
        Ok(())
    }

    /// Bounds reported in the density summary: x/4, x/2, x.
    pub fn summary_bounds(&self) -> [u64; 3] {
        [self.x / 4, self.x / 2, self.x]
    }
}

/// Streaming accumulator for d(h).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityTable {
    pub coeffs: Vec<i64>,
    pub d: usize,
    pub law: FLaw,
    pub cap: FactorialCap,
    pub h_grid: Vec<Decimal>,
    pub x: u64,
    pub s_count: u64,
    pub pass_counts: Vec<u64>,
    /// Primes in S where some degree-d reduction meets some C_q with h = H!.
    pub cq_count: u64,
}

impl DensityTable {
    pub fn empty(cfg: &OrderCensusConfig, x: u64) -> Self {
        DensityTable {
            coeffs: cfg.spec.coeffs().to_vec(),
            d: cfg.d,
            law: cfg.law(),
            cap: cfg.cap,
            h_grid: cfg.h_grid.clone(),
            x,
            s_count: 0,
            pass_counts: vec![0; cfg.h_grid.len()],
            cq_count: 0,
        }
    }

    pub fn record(&mut self, outcome: &PrimeOutcome) {
        if !outcome.in_s {
            return;
        }
        self.s_count += 1;
        for (c, &pass) in self.pass_counts.iter_mut().zip(&outcome.passes) {
            *c += pass as u64;
        }
        self.cq_count += outcome.cq as u64;
    }

    /// Componentwise sum; the census bound becomes the larger one.
    pub fn merge(&self, other: &DensityTable) -> Result<DensityTable> {
        if self.coeffs != other.coeffs
            || self.d != other.d
            || self.law != other.law
            || self.cap != other.cap
            || self.h_grid != other.h_grid
        {
            return Err(Error::ConfigMismatch("density tables come from different configurations".into()));
        }
        let mut out = self.clone();
        out.x = self.x.max(other.x);
        out.s_count += other.s_count;
        out.cq_count += other.cq_count;
        for (a, b) in out.pass_counts.iter_mut().zip(&other.pass_counts) {
            *a += b;
        }
        Ok(out)
    }

    /// pass_counts[j] / s_count, rendered to 10 significant digits ("nan" when S is empty).
    pub fn fraction_text(&self, j: usize) -> String {
        format_ratio(self.pass_counts[j] as u128, self.s_count as u128)
    }

    pub fn fraction(&self, j: usize) -> f64 {
        self.pass_counts[j] as f64 / self.s_count as f64
    }
}

pub fn merge(a: &DensityTable, b: &DensityTable) -> Result<DensityTable> {
    a.merge(b)
}

/// What the census records for one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeOutcome {
    pub p: u64,
    pub in_s: bool,
    /// Smallest order among the degree-d reductions, and its index.
    pub ord: Option<u128>,
    pub index: Option<u128>,
    pub passes: Vec<bool>,
    pub cq: bool,
}

/// a·b ≥ c·d without overflow.
fn product_ge(a: u128, b: u128, c: u128, d: u128) -> bool {
    match (a.checked_mul(b), c.checked_mul(d)) {
        (Some(l), Some(r)) => l >= r,
        _ => BigUint::from(a) * b >= BigUint::from(c) * d,
    }
}

pub fn census_prime(cfg: &OrderCensusConfig, law: FLaw, p: u64) -> Result<PrimeOutcome> {
    let n = cfg.h_grid.len();
    if !cfg.spec.is_in_s(p, cfg.d) {
        return Ok(PrimeOutcome { p, in_s: false, ord: None, index: None, passes: vec![false; n], cq: false });
    }
    let reductions = cfg.spec.reductions_of_degree(p, cfg.d)?;
    let group = factor_pk_minus_1(p, cfg.d as u32)?;
    let mut min_ord = u128::MAX;
    let mut cq = false;
    for e in &reductions {
        min_ord = min_ord.min(mult_order(e, &group)?);
        if !cq {
            for q in group.primes() {
                if condition_cq_total(e, q, cfg.cap, &group)? {
                    cq = true;
                    break;
                }
            }
        }
    }
    let f = law.value(p, group.value());
    let passes = cfg.h_grid.iter().map(|h| product_ge(min_ord, h.num(), f, h.den())).collect();
    Ok(PrimeOutcome { p, in_s: true, ord: Some(min_ord), index: Some(group.value() / min_ord), passes, cq })
}

/// Outcomes for the primes of one chunk, plus the tables for each summary bound.
#[derive(Clone, Debug)]
pub struct ChunkOutcome {
    pub chunk: Chunk,
    pub rows: Vec<PrimeOutcome>,
    pub tables: Vec<DensityTable>,
}

fn census_chunk(cfg: &OrderCensusConfig, law: FLaw, chunk: Chunk) -> Result<ChunkOutcome> {
    let bounds = cfg.summary_bounds();
    let mut tables: Vec<DensityTable> = bounds.iter().map(|&b| DensityTable::empty(cfg, b)).collect();
    let mut rows = Vec::new();
    let mut err = None;
    for_each_prime(chunk.lo, chunk.hi, |p| {
        if err.is_some() {
            return;
        }
        match census_prime(cfg, law, p) {
            Ok(o) => {
                for (t, &b) in tables.iter_mut().zip(&bounds) {
                    if p <= b {
                        t.record(&o);
                    }
                }
                rows.push(o);
            }
            Err(e) => err = Some(e),
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(ChunkOutcome { chunk, rows, tables }),
    }
}

/// Full census in memory.
#[derive(Clone, Debug)]
pub struct OrderCensus {
    pub rows: Vec<PrimeOutcome>,
    /// Tables at x/4, x/2 and x.
    pub summary: Vec<DensityTable>,
}

impl OrderCensus {
    /// The table at the full bound x.
    pub fn table(&self) -> &DensityTable {
        self.summary.last().expect("three bounds")
    }
}

fn fold_tables(cfg: &OrderCensusConfig, parts: impl Iterator<Item = Vec<DensityTable>>) -> Result<Vec<DensityTable>> {
    let mut acc: Vec<DensityTable> = cfg.summary_bounds().iter().map(|&b| DensityTable::empty(cfg, b)).collect();
    for part in parts {
        for (a, b) in acc.iter_mut().zip(&part) {
            *a = a.merge(b)?;
        }
    }
    Ok(acc)
}

pub fn run_order_census(cfg: &OrderCensusConfig, workers: &Workers) -> Result<OrderCensus> {
    cfg.validate()?;
    let law = cfg.law();
    let outcomes = workers.map(&chunks(2, cfg.x + 1), |c| census_chunk(cfg, law, c))?;
    let summary = fold_tables(cfg, outcomes.iter().map(|o| o.tables.clone()))?;
    let rows = outcomes.into_iter().flat_map(|o| o.rows).collect();
    Ok(OrderCensus { rows, summary })
}

/// Per-prime CSV header.
pub fn order_census_header(cfg: &OrderCensusConfig) -> Vec<String> {
    let mut h: Vec<String> = ["p", "in_S", "degree", "ord", "index"].iter().map(|s| s.to_string()).collect();
    h.extend(cfg.h_grid.iter().map(|g| format!("passes_h{g}")));
    h
}

pub fn order_census_record(cfg: &OrderCensusConfig, o: &PrimeOutcome) -> Vec<String> {
    let opt = |v: Option<u128>| v.map_or(String::new(), |v| v.to_string());
    let mut r = vec![o.p.to_string(), (o.in_s as u8).to_string(), cfg.d.to_string(), opt(o.ord), opt(o.index)];
    r.extend(o.passes.iter().map(|&b| (b as u8).to_string()));
    r
}

pub const ORDER_CENSUS_CSV: &str = "order_census.csv";
pub const DENSITY_SUMMARY_CSV: &str = "density_summary.csv";

pub fn write_density_summary(path: &Path, summary: &[DensityTable]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "h", "pass_count", "s_count", "fraction"])?;
    for t in summary {
        for (j, h) in t.h_grid.iter().enumerate() {
            w.write_record([
                t.x.to_string(),
                h.to_string(),
                t.pass_counts[j].to_string(),
                t.s_count.to_string(),
                t.fraction_text(j),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Path of the checkpoint for a configuration fingerprint.
pub fn checkpoint_path(dir: &Path, fingerprint: &str) -> PathBuf {
    dir.join(format!("order_census.{fingerprint}.ckpt.csv"))
}

fn checkpoint_header(cfg: &OrderCensusConfig) -> Vec<String> {
    let mut h = vec!["lo".to_string(), "hi".to_string()];
    for b in cfg.summary_bounds() {
        h.push(format!("s_count_x{b}"));
        h.push(format!("cq_count_x{b}"));
        h.extend(cfg.h_grid.iter().map(|g| format!("pass_x{b}_h{g}")));
    }
    h
}

fn checkpoint_record(o: &ChunkOutcome) -> Vec<String> {
    let mut r = vec![o.chunk.lo.to_string(), o.chunk.hi.to_string()];
    for t in &o.tables {
        r.push(t.s_count.to_string());
        r.push(t.cq_count.to_string());
        r.extend(t.pass_counts.iter().map(|c| c.to_string()));
    }
    r
}

/// Completed chunks recorded in a checkpoint, if it matches this run.
fn read_checkpoint(path: &Path, cfg: &OrderCensusConfig, plan: &[Chunk]) -> Result<Vec<(Chunk, Vec<DensityTable>)>> {
    let mut rd = csv::Reader::from_path(path)?;
    let header: Vec<String> = rd.headers()?.iter().map(String::from).collect();
    if header != checkpoint_header(cfg) {
        return Err(Error::ConfigMismatch(format!("checkpoint {} has a different layout", path.display())));
    }
    let n = cfg.h_grid.len();
    let bad = || Error::ConfigMismatch(format!("checkpoint {} is malformed", path.display()));
    let mut done = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let Ok(rec) = rec else { break };
        let nums: Vec<u64> = rec.iter().map(|v| v.parse::<u64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        if nums.len() != 2 + 3 * (2 + n) {
            break;
        }
        let chunk = Chunk { lo: nums[0], hi: nums[1] };
        if plan.get(i) != Some(&chunk) {
            return Err(bad());
        }
        let mut tables = Vec::new();
        for (k, &b) in cfg.summary_bounds().iter().enumerate() {
            let base = 2 + k * (2 + n);
            let mut t = DensityTable::empty(cfg, b);
            t.s_count = nums[base];
            t.cq_count = nums[base + 1];
            t.pass_counts = nums[base + 2..base + 2 + n].to_vec();
            tables.push(t);
        }
        done.push((chunk, tables));
    }
    Ok(done)
}

/// Keeps the header and the rows with p < bound.
fn truncate_rows(path: &Path, bound: u64) -> Result<bool> {
    let Ok(file) = File::open(path) else { return Ok(false) };
    let mut kept = String::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let keep = i == 0 || line.split(',').next().and_then(|v| v.parse::<u64>().ok()).is_some_and(|p| p < bound);
        if keep {
            kept.push_str(&line);
            kept.push('\n');
        }
    }
    fs::write(path, kept)?;
    Ok(true)
}

/// Runs the census writing order_census.csv and density_summary.csv into
/// `dir`. With a fingerprint, progress is checkpointed after every wave of
/// chunks and a matching checkpoint is resumed; it is removed on success.
pub fn write_order_census(
    cfg: &OrderCensusConfig,
    workers: &Workers,
    dir: &Path,
    fingerprint: Option<&str>,
) -> Result<Vec<DensityTable>> {
    cfg.validate()?;
    let law = cfg.law();
    let plan = chunks(2, cfg.x + 1);
    let rows_path = dir.join(ORDER_CENSUS_CSV);
    let ckpt = fingerprint.map(|f| checkpoint_path(dir, f));

    let mut done: Vec<(Chunk, Vec<DensityTable>)> = Vec::new();
    if let Some(ck) = ckpt.as_ref().filter(|c| c.exists()) {
        done = read_checkpoint(ck, cfg, &plan)?;
        let resume_at = done.last().map_or(0, |(c, _)| c.hi);
        if done.is_empty() || !truncate_rows(&rows_path, resume_at)? {
            done.clear();
        }
    }
    if done.is_empty() {
        let mut w = csv::Writer::from_path(&rows_path)?;
        w.write_record(order_census_header(cfg))?;
        w.flush()?;
        if let Some(ck) = &ckpt {
            let mut w = csv::Writer::from_path(ck)?;
            w.write_record(checkpoint_header(cfg))?;
            w.flush()?;
        }
    } else if let Some(ck) = &ckpt {
        // Rewrite the checkpoint without any partially written tail.
        let mut w = csv::Writer::from_path(ck)?;
        w.write_record(checkpoint_header(cfg))?;
        for (chunk, tables) in &done {
            w.write_record(checkpoint_record(&ChunkOutcome { chunk: *chunk, rows: Vec::new(), tables: tables.clone() }))?;
        }
        w.flush()?;
    }

    let mut parts: Vec<Vec<DensityTable>> = done.iter().map(|(_, t)| t.clone()).collect();
    let wave = workers.count() * 4;
    for batch in plan[done.len()..].chunks(wave) {
        let outcomes = workers.map(batch, |c| census_chunk(cfg, law, c))?;
        let file = OpenOptions::new().append(true).open(&rows_path)?;
        let mut rows = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        for o in &outcomes {
            for r in &o.rows {
                rows.write_record(order_census_record(cfg, r))?;
            }
        }
        rows.flush()?;
        if let Some(ck) = &ckpt {
            let file = OpenOptions::new().append(true).open(ck)?;
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
            for o in &outcomes {
                w.write_record(checkpoint_record(o))?;
            }
            w.flush()?;
            w.into_inner().map_err(|e| Error::Io(e.to_string()))?.sync_data()?;
        }
        parts.extend(outcomes.into_iter().map(|o| o.tables));
    }
    let summary = fold_tables(cfg, parts.into_iter())?;
    write_density_summary(&dir.join(DENSITY_SUMMARY_CSV), &summary)?;
    if let Some(ck) = &ckpt {
        fs::remove_file(ck)?;
    }
    let _ = std::io::stdout().flush();
    Ok(summary)
}
