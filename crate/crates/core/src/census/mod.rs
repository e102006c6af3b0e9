//! Prime-by-prime experiments: order densities, thresholds, rough and
//! smooth divisor statistics, with deterministic parallel merging.

pub mod driver;
pub mod numfmt;
pub mod order_census;
pub mod real;
pub mod recurrence;
pub mod rough;
pub mod small_orders;
pub mod smooth;
pub mod threshold;

pub use driver::{Chunk, Workers};
pub use order_census::{
    merge, run_order_census, write_order_census, DensityTable, FLaw, FMode, OrderCensus, OrderCensusConfig,
    PrimeOutcome,
};
pub use real::{ceil_pow, cmp_pow, floor_pow, Decimal};
pub use recurrence::{run_recurrence_census, RecurrenceRow, Verdict};
pub use rough::{run_rough_census, QuadraticPoly, RoughCensus, RoughConfig};
pub use small_orders::{run_small_order_census, SmallOrderCensus};
pub use smooth::{run_smooth_filter, SmoothRow};
pub use threshold::{g_of_k, run_threshold_census, ThresholdCensus, ThresholdConfig, ThresholdReport};

/// Largest bound for censuses that reduce modulo every prime up to x.
pub const CENSUS_CAP: u64 = 1 << 20;
