mod common;

use common::{intervals, relation};
use proptest::prelude::*;
use sweepjoin::{
    checksum, nested_loop_join, partitioned_join, run_join, ActiveSetKind, EngineConfig, Formulation, JoinOptions,
    PredicateKind, PredicateSpec,
};

const BOUNDS: [Option<i64>; 5] = [None, Some(0), Some(1), Some(3), Some(50)];

fn spec_strategy() -> impl Strategy<Value = PredicateSpec<i64>> {
    (
        prop::sample::select(PredicateKind::ALL.to_vec()),
        prop::sample::select(BOUNDS.to_vec()),
        prop::sample::select(BOUNDS.to_vec()),
    )
        .prop_map(|(kind, d, e)| PredicateSpec {
            relation: kind,
            delta: d.filter(|_| kind.accepts_delta()),
            epsilon: e.filter(|_| kind.accepts_epsilon()),
        })
}

fn options_strategy() -> impl Strategy<Value = JoinOptions> {
    (
        prop_oneof![Just(EngineConfig::eager()), (1usize..40).prop_map(EngineConfig::lazy)],
        prop::bool::ANY,
        prop::bool::ANY,
    )
        .prop_map(|(engine, chained, ef)| JoinOptions {
            engine: if chained { engine.with_active_set(ActiveSetKind::Chained) } else { engine },
            formulation: if ef { Formulation::EndFollowing } else { Formulation::StartPreceding },
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1500))]

    #[test]
    fn sweep_matches_oracle(
        spec in spec_strategy(),
        opts in options_strategy(),
        r in intervals(30, 100),
        s in intervals(30, 100),
    ) {
        let (r, s) = (relation("r", &r), relation("s", &s));
        let got = run_join(&spec, &r, &s, &opts).unwrap();
        prop_assert_eq!(got.pair_set(), nested_loop_join(&spec, &r, &s));
        prop_assert_eq!(got.pairs.len(), got.pair_set().len(), "duplicate pairs");
        prop_assert_eq!(got.stats.output_count as usize, got.pairs.len());
    }

    #[test]
    fn relaxing_a_bound_only_adds_pairs(
        kind in prop::sample::select(PredicateKind::ALL.iter().copied().filter(|k| k.accepts_delta() || k.accepts_epsilon()).collect::<Vec<_>>()),
        small in 0i64..10,
        extra in 0i64..10,
        r in intervals(25, 60),
        s in intervals(25, 60),
    ) {
        let (r, s) = (relation("r", &r), relation("s", &s));
        let opts = JoinOptions::default();
        let with = |b: Option<i64>| {
            let spec = PredicateSpec {
                relation: kind,
                delta: b.filter(|_| kind.accepts_delta()),
                epsilon: b.filter(|_| kind.accepts_epsilon()),
            };
            run_join(&spec, &r, &s, &opts).unwrap().pair_set()
        };
        let tight = with(Some(small));
        let loose = with(Some(small + extra));
        let relaxed = with(None);
        prop_assert!(tight.is_subset(&loose));
        prop_assert!(loose.is_subset(&relaxed));
    }

    #[test]
    fn before_with_zero_gap_is_meets(r in intervals(30, 50), s in intervals(30, 50)) {
        let (r, s) = (relation("r", &r), relation("s", &s));
        let opts = JoinOptions::default();
        let before = run_join(&PredicateSpec::new(PredicateKind::Before).with_delta(0), &r, &s, &opts).unwrap();
        let meets = run_join(&PredicateSpec::new(PredicateKind::Meets), &r, &s, &opts).unwrap();
        prop_assert_eq!(before.pair_set(), meets.pair_set());
    }

    #[test]
    fn inverse_runs_on_swapped_inputs(spec in spec_strategy(), r in intervals(25, 80), s in intervals(25, 80)) {
        let Some(inv) = spec.inverse() else { return Ok(()) };
        let (r, s) = (relation("r", &r), relation("s", &s));
        let opts = JoinOptions::default();
        let direct = run_join(&inv, &r, &s, &opts).unwrap().pair_set();
        let swapped: std::collections::BTreeSet<_> =
            run_join(&spec, &s, &r, &opts).unwrap().pair_set().into_iter().map(|(a, b)| (b, a)).collect();
        prop_assert_eq!(direct, swapped);
    }

    #[test]
    fn partitioning_does_not_change_the_result(
        spec in spec_strategy(),
        k in 1usize..6,
        r in intervals(30, 100),
        s in intervals(30, 100),
    ) {
        let (r, s) = (relation("r", &r), relation("s", &s));
        let opts = JoinOptions::default();
        let whole = run_join(&spec, &r, &s, &opts).unwrap();
        let parts = partitioned_join(&spec, &r, &s, k, &opts).unwrap();
        prop_assert_eq!(parts.pair_set(), whole.pair_set());
        prop_assert_eq!(checksum(&parts.pairs, &r, &s), checksum(&whole.pairs, &r, &s));
        prop_assert_eq!(parts.per_partition.len(), k);
    }
}
