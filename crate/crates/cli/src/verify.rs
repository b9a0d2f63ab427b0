//! Sweep results checked against the nested-loop oracle.

use std::collections::BTreeSet;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use sweepjoin::{nested_loop_join, run_join, JoinError, JoinOptions, PredicateKind, PredicateSpec, Relation, TupleId};
use thiserror::Error;

/// Largest relation the oracle is run on unless configured otherwise.
pub const DEFAULT_ORACLE_CAP: usize = 3000;

/// Bound values exercised by batch verification; `None` is relaxed.
pub const BOUND_GRID: [Option<i64>; 5] = [None, Some(0), Some(1), Some(3), Some(50)];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("relation of {n} tuples exceeds the oracle cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error(transparent)]
    Join(#[from] JoinError),
}

/// Difference between a result and the oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub expected: usize,
    /// Oracle pairs absent from the result.
    pub missing: Vec<(TupleId, TupleId)>,
    /// Result pairs the oracle rejects.
    pub unexpected: Vec<(TupleId, TupleId)>,
}

impl VerifyOutcome {
    pub fn is_ok(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }

    pub fn describe(&self) -> String {
        let mut out = String::new();
        for (r, s) in &self.missing {
            out += &format!("- {r},{s}\n");
        }
        for (r, s) in &self.unexpected {
            out += &format!("+ {r},{s}\n");
        }
        out
    }
}

/// Compares `actual` against the oracle's result.
pub fn verify_pairs(
    spec: &PredicateSpec<i64>,
    r: &Relation<i64>,
    s: &Relation<i64>,
    actual: &BTreeSet<(TupleId, TupleId)>,
    cap: usize,
) -> Result<VerifyOutcome, VerifyError> {
    for rel in [r, s] {
        if rel.len() > cap {
            return Err(VerifyError::CapExceeded { n: rel.len(), cap });
        }
    }
    spec.validate().map_err(JoinError::from)?;
    let expected = nested_loop_join(spec, r, s);
    Ok(VerifyOutcome {
        expected: expected.len(),
        missing: expected.difference(actual).copied().collect(),
        unexpected: actual.difference(&expected).copied().collect(),
    })
}

/// Runs the sweep and compares it against the oracle.
pub fn verify_join(
    spec: &PredicateSpec<i64>,
    r: &Relation<i64>,
    s: &Relation<i64>,
    opts: &JoinOptions,
    cap: usize,
) -> Result<VerifyOutcome, VerifyError> {
    for rel in [r, s] {
        if rel.len() > cap {
            return Err(VerifyError::CapExceeded { n: rel.len(), cap });
        }
    }
    let actual = run_join(spec, r, s, opts)?.pair_set();
    verify_pairs(spec, r, s, &actual, cap)
}

/// Every relation combined with every legal choice of bounds from `bounds`.
pub fn all_specs(bounds: &[Option<i64>]) -> Vec<PredicateSpec<i64>> {
    let mut out = Vec::new();
    for kind in PredicateKind::ALL {
        let deltas: &[Option<i64>] = if kind.accepts_delta() { bounds } else { &[None] };
        let epsilons: &[Option<i64>] = if kind.accepts_epsilon() { bounds } else { &[None] };
        for &delta in deltas {
            for &epsilon in epsilons {
                out.push(PredicateSpec { relation: kind, delta, epsilon });
            }
        }
    }
    out
}

/// Small random relations for oracle checks: up to `max_n` tuples each,
/// every endpoint in `[0, hi]`.
pub fn random_instance(seed: u64, max_n: usize, hi: i64) -> (Relation<i64>, Relation<i64>) {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut draw = |name: &str| {
        let n = (rng.next_u64() % (max_n as u64 + 1)) as usize;
        let tuples: Vec<(i64, i64, u32)> = (0..n)
            .map(|i| {
                let ts = (rng.next_u64() % hi as u64) as i64;
                let te = ts + 1 + (rng.next_u64() % (hi - ts) as u64) as i64;
                (ts, te, i as u32)
            })
            .collect();
        Relation::new(name, tuples).expect("non-empty intervals")
    };
    let r = draw("r");
    let s = draw("s");
    (r, s)
}

/// A failed configuration in a batch run.
#[derive(Clone, Debug)]
pub struct BatchFailure {
    pub seed: u64,
    pub spec: PredicateSpec<i64>,
    pub outcome: VerifyOutcome,
}

#[derive(Clone, Debug, Default)]
pub struct BatchSummary {
    pub instances: usize,
    pub checks: usize,
    pub failures: Vec<BatchFailure>,
}

/// Verifies every spec in `specs` on one random instance per seed.
pub fn verify_batch(
    seeds: impl IntoIterator<Item = u64>,
    specs: &[PredicateSpec<i64>],
    max_n: usize,
    hi: i64,
    opts: &JoinOptions,
) -> Result<BatchSummary, VerifyError> {
    let mut summary = BatchSummary::default();
    for seed in seeds {
        let (r, s) = random_instance(seed, max_n, hi);
        summary.instances += 1;
        for spec in specs {
            let outcome = verify_join(spec, &r, &s, opts, usize::MAX)?;
            summary.checks += 1;
            if !outcome.is_ok() {
                summary.failures.push(BatchFailure { seed, spec: *spec, outcome });
            }
        }
    }
    Ok(summary)
}
