use crate::config::{Config, ConfigError};
use redord_core::arith::CyclotomicTable;
use redord_core::census::order_census::{DENSITY_SUMMARY_CSV, ORDER_CENSUS_CSV};
use redord_core::census::recurrence::{write_recurrence_census, LINREC_CSV};
use redord_core::census::rough::{write_rough_census, ROUGH_CENSUS_CSV};
use redord_core::census::smooth::{write_smooth_filter, SMOOTH_FILTER_CSV};
use redord_core::census::threshold::{write_threshold_census, THRESHOLD_CENSUS_CSV};
use redord_core::census::{
    run_recurrence_census, run_rough_census, run_smooth_filter, run_threshold_census, write_order_census,
    OrderCensusConfig, QuadraticPoly, RoughConfig, ThresholdConfig, Verdict, Workers,
};
use redord_core::linrec::{RecurrenceSpec, DEFAULT_STEP_BUDGET};
use redord_core::selftest::run_selftest;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    OrderCensus,
    Rough,
    Smooth,
    Linrec,
    Threshold,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::OrderCensus => "order-census",
            Command::Rough => "rough",
            Command::Smooth => "smooth",
            Command::Linrec => "linrec",
            Command::Threshold => "threshold",
        }
    }
}

/// Overrides from the command line.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    SelftestFailed,
    Config(String),
    Budget(String),
}

impl ExitStatus {
    pub fn code(&self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::SelftestFailed => 1,
            ExitStatus::Config(_) => 2,
            ExitStatus::Budget(_) => 3,
        }
    }
}

impl From<ConfigError> for ExitStatus {
    fn from(e: ConfigError) -> Self {
        ExitStatus::Config(e.0)
    }
}

impl From<redord_core::Error> for ExitStatus {
    fn from(e: redord_core::Error) -> Self {
        use redord_core::Error::*;
        match e {
            BudgetExceeded(_) | CapExceeded { .. } | RangeTooLarge { .. } => ExitStatus::Budget(e.to_string()),
            other => ExitStatus::Config(other.to_string()),
        }
    }
}

struct Run {
    cfg: Config,
    out: PathBuf,
    workers: Workers,
    seed: u64,
    fingerprint: String,
}

fn prepare(cmd: Command, config_path: &Path, opts: &Options) -> Result<Run, ExitStatus> {
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| ExitStatus::Config(format!("cannot read {}: {e}", config_path.display())))?;
    let cfg = Config::parse(&text)?;
    let seed = opts.seed.or(cfg.raw.seed).unwrap_or(0);
    let count = match opts.workers {
        Some(0) => return Err(ExitStatus::Config("--workers must be at least 1".into())),
        Some(n) => n,
        None => cfg.workers()?.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
    };
    let out = opts.out.clone().or_else(|| cfg.raw.out.as_ref().map(PathBuf::from)).unwrap_or_else(|| ".".into());
    std::fs::create_dir_all(&out).map_err(|e| ExitStatus::Config(format!("cannot create {}: {e}", out.display())))?;
    let mut h = Sha256::new();
    h.update(cmd.name().as_bytes());
    h.update(seed.to_le_bytes());
    h.update(text.as_bytes());
    let fingerprint = hex::encode(&h.finalize()[..8]);
    Ok(Run { cfg, out, workers: Workers::new(count)?, seed, fingerprint })
}

/// Runs one census subcommand and reports how the process should exit.
pub fn run(cmd: Command, config_path: &Path, opts: &Options) -> ExitStatus {
    let r = match prepare(cmd, config_path, opts) {
        Ok(r) => r,
        Err(e) => return e,
    };
    let outcome = match cmd {
        Command::OrderCensus => order_census(&r),
        Command::Rough => rough(&r),
        Command::Smooth => smooth(&r),
        Command::Linrec => linrec(&r),
        Command::Threshold => threshold(&r),
    };
    outcome.err().unwrap_or(ExitStatus::Success)
}

fn order_census(r: &Run) -> Result<(), ExitStatus> {
    let census = r.cfg.census()?;
    let spec = r.cfg.spec(r.seed)?;
    let h_grid = match &census.h_grid {
        Some(g) => r.cfg.decimals(g)?,
        None => OrderCensusConfig::default_grid(),
    };
    let mut oc = OrderCensusConfig::new(spec, *census.d.get_ref(), *census.x.get_ref(), r.cfg.factorial_cap(census)?, h_grid);
    oc.mode = r.cfg.f_mode(census)?;
    if let Err(e) = oc.validate() {
        return Err(match e {
            redord_core::Error::BudgetExceeded(_) => e.into(),
            other => {
                let span = census.h_grid.as_ref().filter(|_| (1..=redord_core::gf::MAX_EXT_DEGREE).contains(&oc.d)).map_or(census.d.span(), |g| g.span());
                r.cfg.error_at(span, other).into()
            }
        });
    }
    let tables = write_order_census(&oc, &r.workers, &r.out, Some(&r.fingerprint))?;
    println!("{} and {} written to {}", ORDER_CENSUS_CSV, DENSITY_SUMMARY_CSV, r.out.display());
    println!("f(p) law: {}", oc.law().name());
    if let Some(t) = tables.last() {
        for (j, h) in t.h_grid.iter().enumerate() {
            println!("x={} h={} pass={}/{} fraction={}", t.x, h, t.pass_counts[j], t.s_count, t.fraction_text(j));
        }
    }
    Ok(())
}

fn rough(r: &Run) -> Result<(), ExitStatus> {
    let raw = r.cfg.rough()?;
    let poly = match &raw.poly {
        Some(p) => QuadraticPoly::new(p.get_ref()).map_err(|e| r.cfg.error_at(p.span(), e))?,
        None => QuadraticPoly::new(&[1, 0, 1])?,
    };
    let rc = RoughConfig {
        poly,
        epsilons: r.cfg.decimals(&raw.epsilon)?,
        c: r.cfg.decimal(&raw.c)?,
        x: *raw.x.get_ref(),
        over_primes: raw.over_primes.unwrap_or(true),
    };
    if let Err(e) = rc.validate() {
        return Err(match e {
            redord_core::Error::BudgetExceeded(_) => e.into(),
            other => r.cfg.error_at(raw.c.span(), other).into(),
        });
    }
    let rows = run_rough_census(&rc, &r.workers)?;
    write_rough_census(&r.out.join(ROUGH_CENSUS_CSV), &rows)?;
    for row in &rows {
        println!("epsilon={} c={} hits={}/{} fraction={}", row.epsilon, row.c, row.hits, row.total, row.fraction_text());
    }
    Ok(())
}

fn smooth(r: &Run) -> Result<(), ExitStatus> {
    let raw = r.cfg.smooth()?;
    let spec = r.cfg.spec(r.seed)?;
    let d = *raw.d.get_ref();
    if d == 0 || d > redord_core::gf::MAX_EXT_DEGREE {
        return Err(r.cfg.error_at(raw.d.span(), format!("reduction degree {d} out of range")).into());
    }
    let rows = run_smooth_filter(&spec, d, *raw.x.get_ref(), &r.workers)?;
    write_smooth_filter(&r.out.join(SMOOTH_FILTER_CSV), &rows)?;
    println!("{} primes kept", rows.len());
    Ok(())
}

fn linrec(r: &Run) -> Result<(), ExitStatus> {
    let raw = r.cfg.linrec()?;
    let initial = r.cfg.rationals(&raw.initial)?;
    let rec = RecurrenceSpec::new(raw.char_coeffs.get_ref().clone(), initial)
        .map_err(|e| r.cfg.error_at(raw.char_coeffs.span(), e))?;
    let budget = raw.budget.as_ref().map_or(DEFAULT_STEP_BUDGET, |b| *b.get_ref() as u128);
    let rows = run_recurrence_census(&rec, *raw.x.get_ref(), budget, &r.workers)?;
    write_recurrence_census(&r.out.join(LINREC_CSV), &rows)?;
    let count = |v: Verdict| rows.iter().filter(|row| row.verdict == v).count();
    let (pass, fail, unverified) = (count(Verdict::Pass), count(Verdict::Fail), count(Verdict::Unverified));
    println!("{} primes: {pass} within bound, {fail} above, {unverified} unverified", rows.len());
    if unverified > 0 {
        return Err(ExitStatus::Budget(format!("{unverified} primes exceeded the step budget {budget}")));
    }
    Ok(())
}

fn threshold(r: &Run) -> Result<(), ExitStatus> {
    let raw = r.cfg.threshold()?;
    let tc = ThresholdConfig {
        specs: r.cfg.spec_list(r.seed)?,
        k: *raw.k.get_ref(),
        epsilons: r.cfg.decimals(&raw.epsilon)?,
        x: *raw.x.get_ref(),
    };
    if let Err(e) = tc.validate() {
        return Err(match e {
            redord_core::Error::BudgetExceeded(_) => e.into(),
            other => r.cfg.error_at(raw.k.span(), other).into(),
        });
    }
    let report = run_threshold_census(&tc, &r.workers)?;
    write_threshold_census(&r.out.join(THRESHOLD_CENSUS_CSV), &report.rows)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for row in &report.rows {
        println!("k={} epsilon={} pass={}/{} fraction={}", row.k, row.epsilon, row.pass, row.total, row.fraction_text());
    }
    Ok(())
}

/// Runs the embedded oracle suites against `table` and prints one line per suite.
pub fn cmd_selftest(table: &CyclotomicTable) -> ExitStatus {
    let report = run_selftest(table);
    for c in &report.checks {
        if c.passed {
            println!("PASS {}", c.name);
        } else {
            println!("FAIL {}: {}", c.name, c.detail);
        }
    }
    if report.passed() {
        ExitStatus::Success
    } else {
        ExitStatus::SelftestFailed
    }
}
