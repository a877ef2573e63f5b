//! Shared fixtures for the criterion benchmarks.

use std::sync::Arc;

use lacunary_core::{CompositeNumber, LacunarySeries, Op, PowerSchedule, Ratio};

/// `a_1 = 2`, `a_{n+1} = a_n^2` at the default budget.
pub fn squaring_schedule() -> Arc<PowerSchedule> {
    Arc::new(PowerSchedule::new(2, Ratio::from_integer(1)).expect("valid schedule"))
}

pub fn series(base: u64) -> LacunarySeries {
    LacunarySeries::new(base, squaring_schedule()).expect("valid base")
}

/// Bases 2 and 3 over the squaring schedule.
pub fn example_composite(op: Op) -> CompositeNumber {
    CompositeNumber::new(op, 2, 3, squaring_schedule()).expect("valid composite")
}
