//! Plane-sweeping interval joins.
//!
//! Relations of half-open intervals `[ts, te)` are joined on Allen's
//! relations or on the parameterized ISEQL relations with one sweep over
//! sorted endpoint streams. Every operator is assembled from the same
//! pieces:
//!
//! * an [`EndpointIndex`] per relation,
//! * [iterators](iter) that filter, shift, merge and deduplicate endpoints,
//! * the [sweep](engine) that keeps the active `r` tuples in a
//!   [`GaplessHashMap`] and pairs them with each `s` endpoint.
//!
//! ```
//! use sweepjoin::{run_join, JoinOptions, PredicateKind, PredicateSpec, Relation};
//!
//! let r = Relation::<i64>::new("r", [(0, 1, 0), (1, 3, 0), (2, 5, 0)]).unwrap();
//! let s = Relation::<i64>::new("s", [(1, 3, 0), (3, 4, 0)]).unwrap();
//! let spec = PredicateSpec::new(PredicateKind::Before).with_delta(1);
//! let out = run_join(&spec, &r, &s, &JoinOptions::default()).unwrap();
//! let pairs: Vec<(u32, u32)> = out.pair_set().into_iter().map(|(a, b)| (a.0, b.0)).collect();
//! assert_eq!(pairs, [(0, 0), (1, 1)]);
//! ```
//!
//! The timestamp type is generic over [`TimePoint`]; the aliases below fix it
//! to `i64` (the default width) or `i32`.

pub mod endpoint;
pub mod engine;
pub mod iter;
pub mod joins;
pub mod map;
pub mod oracle;
pub mod predicate;
pub mod relation;
pub mod time;

pub use endpoint::{build_endpoint_index, compare_endpoints, ComparatorKind, Endpoint, EndpointIndex, EndpointKind};
pub use engine::{
    compute_gnorf, join_by_s, lazy_join_by_s, run_sweep, ActiveSetKind, ChecksumConsumer, Consumer, EngineConfig,
    EngineError, EngineMode, FilteringConsumer, FnConsumer, JoinStats, PairCollector, ResultPair, ReversingConsumer,
    DEFAULT_LAZY_CAPACITY,
};
pub use joins::{
    checksum, partitioned_join, run_join, run_join_with, Formulation, JoinError, JoinInputs, JoinOptions, JoinOutcome,
    PartitionedOutcome,
};
pub use map::{ActiveSet, ChainedMapBaseline, GaplessHashMap};
pub use oracle::{eval_predicate, nested_loop_join};
pub use predicate::{PredicateKind, PredicateSpec, SpecError};
pub use relation::{validate_relation, IntervalTuple, InvalidRelation, Relation, TupleId};
pub use time::TimePoint;

pub type Timestamp = i64;
pub type Relation64 = Relation<i64>;
pub type Relation32 = Relation<i32>;
pub type IntervalTuple64 = IntervalTuple<i64>;
pub type IntervalTuple32 = IntervalTuple<i32>;
pub type Endpoint64 = Endpoint<i64>;
pub type Endpoint32 = Endpoint<i32>;
pub type EndpointIndex64 = EndpointIndex<i64>;
pub type EndpointIndex32 = EndpointIndex<i32>;
pub type PredicateSpec64 = PredicateSpec<i64>;
pub type PredicateSpec32 = PredicateSpec<i32>;
pub type ResultPair64 = ResultPair<i64>;
pub type ResultPair32 = ResultPair<i32>;
