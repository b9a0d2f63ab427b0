//! Run statistics: uninterrupted-sequence histogram and JSON rendering.

use serde_json::{json, Value};
use sweepjoin::{ComparatorKind, EndpointIndex, EngineConfig, EngineMode, JoinStats};

/// Number of length buckets: lengths 1 to 9, then 10 and above.
pub const BUCKETS: usize = 10;

/// Counts of maximal runs of consecutive same-relation endpoints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SequenceHistogram {
    /// `counts[i]` is the number of runs of length `i + 1`; the last bucket
    /// holds every run of length 10 or more.
    pub counts: [u64; BUCKETS],
}

impl SequenceHistogram {
    pub fn runs(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Fraction of runs per bucket; all zero when there are no runs.
    pub fn frequencies(&self) -> [f64; BUCKETS] {
        let total = self.runs();
        let mut out = [0.0; BUCKETS];
        if total > 0 {
            for (f, c) in out.iter_mut().zip(self.counts) {
                *f = c as f64 / total as f64;
            }
        }
        out
    }

    pub fn bucket_label(i: usize) -> String {
        if i + 1 == BUCKETS {
            format!("{BUCKETS}+")
        } else {
            (i + 1).to_string()
        }
    }

    fn record(&mut self, len: usize) {
        if len > 0 {
            self.counts[len.min(BUCKETS) - 1] += 1;
        }
    }

    pub fn to_json(&self) -> Value {
        let freqs = self.frequencies();
        let buckets: Vec<Value> = (0..BUCKETS)
            .map(|i| json!({ "length": Self::bucket_label(i), "runs": self.counts[i], "frequency": freqs[i] }))
            .collect();
        json!({ "runs": self.runs(), "buckets": buckets })
    }
}

/// Merges both endpoint streams with the sweep's tie rule (`r` first on
/// equal endpoints) and histograms the lengths of same-relation runs.
pub fn sequence_histogram(idx_r: &EndpointIndex<i64>, idx_s: &EndpointIndex<i64>) -> SequenceHistogram {
    let (r, s) = (idx_r.events(), idx_s.events());
    let (mut i, mut j) = (0, 0);
    let mut hist = SequenceHistogram::default();
    let mut current: Option<bool> = None;
    let mut run = 0usize;
    while i < r.len() || j < s.len() {
        let take_r = j == s.len() || (i < r.len() && ComparatorKind::NonStrict.holds(&r[i], &s[j]));
        if take_r {
            i += 1;
        } else {
            j += 1;
        }
        if current == Some(take_r) {
            run += 1;
        } else {
            hist.record(run);
            current = Some(take_r);
            run = 1;
        }
    }
    hist.record(run);
    hist
}

pub fn engine_label(engine: &EngineConfig) -> String {
    let mode = match engine.mode {
        EngineMode::Eager => "eager".to_string(),
        EngineMode::Lazy { capacity } => format!("lazy({capacity})"),
    };
    format!("{mode}/{:?}", engine.active_set).to_lowercase()
}

pub fn stats_json(stats: &JoinStats) -> Value {
    json!({
        "getnext_count": stats.getnext_count,
        "comparison_count": stats.comparison_count,
        "output_count": stats.output_count,
        "buffer_flushes": stats.buffer_flushes,
        "endpoint_comparisons": stats.endpoint_comparisons,
    })
}
