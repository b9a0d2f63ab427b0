//! Synthetic interval relations.
//!
//! Generator: xoshiro256++ seeded through SplitMix64 (`seed_from_u64`).
//! Per tuple, two 64-bit draws in this order:
//!
//! 1. `ts = 1 + x % domain_hi`
//! 2. `u = (x >> 11) * 2^-53` in `[0, 1)`, `duration = max(1, round(-ln(1 - u) / lambda))`
//!
//! and `te = ts + duration`. The same spec always yields the same relation.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use sweepjoin::Relation;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DatasetSpec {
    pub n: usize,
    /// Rate of the exponential duration distribution; mean duration is `1 / lambda`.
    pub lambda: f64,
    /// Starts are drawn from `[1, domain_hi]`.
    pub domain_hi: i64,
    pub seed: u64,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        DatasetSpec { n: 0, lambda: 0.1, domain_hi: 1_000_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum DatasetError {
    #[error("lambda must be positive and finite, got {0}")]
    Lambda(f64),
    #[error("domain upper bound must be at least 1, got {0}")]
    Domain(i64),
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<(), DatasetError> {
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(DatasetError::Lambda(self.lambda));
        }
        if self.domain_hi < 1 {
            return Err(DatasetError::Domain(self.domain_hi));
        }
        Ok(())
    }
}

fn unit_interval(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Relation with uniform starts and exponential durations.
pub fn gen_synthetic(spec: &DatasetSpec) -> Result<Relation<i64>, DatasetError> {
    spec.validate()?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(spec.seed);
    let span = spec.domain_hi as u64;
    let tuples: Vec<(i64, i64, u32)> = (0..spec.n)
        .map(|i| {
            let ts = 1 + (rng.next_u64() % span) as i64;
            let u = unit_interval(rng.next_u64());
            let duration = (-(1.0 - u).ln() / spec.lambda).round().max(1.0);
            // durations beyond i64 range cannot occur for sane lambda; clamp anyway
            let duration = if duration >= i64::MAX as f64 / 2.0 { i64::MAX / 2 } else { duration as i64 };
            (ts, ts + duration, i as u32)
        })
        .collect();
    Ok(Relation::new(format!("synthetic-{}", spec.seed), tuples).expect("generated intervals are non-empty"))
}

/// Workload with `m` identical `s` tuples starting at 10 inside `a` long
/// `r` tuples, so one uninterrupted run of `m` starts meets `a` active tuples.
pub fn batch_dataset(m: usize, a: usize) -> (Relation<i64>, Relation<i64>) {
    let r = Relation::new("batch-r", (0..a).map(|i| (0, 100, i as u32))).expect("valid");
    let s = Relation::new("batch-s", (0..m).map(|i| (10, 20, i as u32))).expect("valid");
    (r, s)
}
