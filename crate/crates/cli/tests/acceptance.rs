//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use sweepjoin::iter::stream_source;
use sweepjoin::joins::join_sources;
use sweepjoin::{
    checksum, partitioned_join, run_join, ActiveSetKind, EndpointIndex, EndpointKind, EngineConfig, Formulation,
    GaplessHashMap, IntervalTuple, JoinOptions, PairCollector, PredicateKind, PredicateSpec, Relation, TupleId,
};
use sweepjoin_cli::bench::{batch_gnorf, scan_benchmark, time_join, ScanTiming};
use sweepjoin_cli::dataset::{gen_synthetic, DatasetSpec};
use sweepjoin_cli::verify::{all_specs, random_instance, verify_join, BOUND_GRID};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        match $cond {
            true => {}
            false => return Err(format!($($msg)+)),
        }
    };
}

fn sample_relations() -> (Relation<i64>, Relation<i64>) {
    let r = Relation::new("r", [(0, 1, 0), (1, 3, 0), (2, 5, 0)]).unwrap();
    let s = Relation::new("s", [(1, 3, 0), (3, 4, 0)]).unwrap();
    (r, s)
}

fn ids(pairs: &[(u32, u32)]) -> BTreeSet<(TupleId, TupleId)> {
    pairs.iter().map(|&(a, b)| (TupleId(a), TupleId(b))).collect()
}

fn sorted_pairs<T>(pairs: &[sweepjoin::ResultPair<T>]) -> Vec<(TupleId, TupleId)> {
    let mut v: Vec<_> = pairs.iter().map(|p| (p.r_id, p.s_id)).collect();
    v.sort_unstable();
    v
}

fn oracle_equivalence() -> Outcome {
    let specs: Vec<_> = all_specs(&BOUND_GRID)
        .into_iter()
        .filter(|s| s.relation.is_allen() || PredicateKind::ISEQL.contains(&s.relation))
        .collect();
    let started = Instant::now();
    let mut checks = 0;
    for seed in 0..500u64 {
        let (r, s) = random_instance(10_000 + seed, 200, 100);
        let formulation = if seed % 2 == 0 { Formulation::StartPreceding } else { Formulation::EndFollowing };
        let opts = JoinOptions { formulation, ..JoinOptions::default() };
        for spec in &specs {
            let out = verify_join(spec, &r, &s, &opts, usize::MAX).map_err(|e| e.to_string())?;
            ensure!(out.is_ok(), "{spec} on seed {seed}:\n{}", out.describe());
            checks += 1;
        }
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(120), "took {elapsed:.1?}");
    Ok(format!("{} configurations x 500 instances, {checks} checks in {elapsed:.1?}", specs.len()))
}

fn example_before() -> Outcome {
    let (r, s) = sample_relations();
    let bounded = run_join(&PredicateSpec::new(PredicateKind::Before).with_delta(1), &r, &s, &JoinOptions::default())
        .map_err(|e| e.to_string())?
        .pair_set();
    let relaxed = run_join(&PredicateSpec::new(PredicateKind::Before), &r, &s, &JoinOptions::default())
        .map_err(|e| e.to_string())?
        .pair_set();
    ensure!(bounded == ids(&[(0, 0), (1, 1)]), "delta=1 gave {bounded:?}");
    ensure!(relaxed == ids(&[(0, 0), (0, 1), (1, 1)]), "relaxed gave {relaxed:?}");
    Ok("delta=1 {(r1,s1),(r2,s2)}, relaxed adds (r1,s2)".into())
}

fn index_listing() -> Outcome {
    let (r, _) = sample_relations();
    let got: Vec<(i64, EndpointKind, u32)> =
        EndpointIndex::build(&r).events().iter().map(|e| (e.timestamp, e.kind, e.tuple_id.0 + 1)).collect();
    use EndpointKind::{End, Start};
    let want = [(0, Start, 1), (1, End, 1), (1, Start, 2), (2, Start, 3), (3, End, 2), (5, End, 3)];
    ensure!(got == want, "got {got:?}");
    let text: Vec<String> = got.iter().map(|(t, k, id)| format!("<{t},{k},{id}>")).collect();
    Ok(text.join(""))
}

fn lazy_eager() -> Outcome {
    let specs = all_specs(&BOUND_GRID);
    let mut runs = 0;
    for seed in 0..100u64 {
        let (r, s) = random_instance(20_000 + seed, 200, 100);
        for spec in &specs {
            let eager =
                run_join(spec, &r, &s, &JoinOptions::with_engine(EngineConfig::eager())).map_err(|e| e.to_string())?;
            let eager_pairs = sorted_pairs(&eager.pairs);
            let eager_sum = checksum(&eager.pairs, &r, &s);
            for capacity in [1, 2, 7, 32, 2048] {
                let active = if capacity % 2 == 0 { ActiveSetKind::Gapless } else { ActiveSetKind::Chained };
                let opts = JoinOptions::with_engine(EngineConfig::lazy(capacity).with_active_set(active));
                let lazy = run_join(spec, &r, &s, &opts).map_err(|e| e.to_string())?;
                ensure!(sorted_pairs(&lazy.pairs) == eager_pairs, "{spec} c={capacity} seed {seed}: pair sets differ");
                ensure!(
                    checksum(&lazy.pairs, &r, &s) == eager_sum,
                    "{spec} c={capacity} seed {seed}: checksums differ"
                );
                ensure!(
                    lazy.stats.getnext_count <= eager.stats.getnext_count,
                    "{spec} c={capacity} seed {seed}: getnext {} > {}",
                    lazy.stats.getnext_count,
                    eager.stats.getnext_count
                );
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} lazy runs match eager"))
}

fn gnorf_grid() -> Outcome {
    let mut seen = Vec::new();
    for (m, a, c) in [(10usize, 4usize, 32usize), (100, 8, 32), (5, 3, 1)] {
        let (_, _, g) = batch_gnorf(m, a, c).map_err(|e| e.to_string())?;
        let want = m as f64 / m.div_ceil(c) as f64;
        ensure!(g == want, "({m},{a},{c}): gnorf {g}, expected {want}");
        seen.push(format!("({m},{a},{c})={g}"));
    }
    Ok(seen.join(" "))
}

fn gapless_model() -> Outcome {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(6);
    let mut map: GaplessHashMap<u64> = GaplessHashMap::new();
    let mut model: HashMap<u32, u64> = HashMap::new();
    let ops = 100_000;
    for step in 0..ops {
        let key = (rng.next_u64() % 2_000) as u32;
        match rng.next_u64() % 8 {
            0..=3 => {
                if let std::collections::hash_map::Entry::Vacant(slot) = model.entry(key) {
                    slot.insert(step);
                    map.insert(TupleId(key), step);
                }
            }
            4..=6 => {
                ensure!(
                    map.remove(TupleId(key)) == model.remove(&key).is_some(),
                    "step {step}: remove({key}) disagrees"
                );
            }
            _ => {
                let mut scanned = Vec::with_capacity(map.len());
                map.scan(|v| scanned.push(*v));
                ensure!(scanned.len() == model.len(), "step {step}: scan saw {} entries", scanned.len());
            }
        }
        ensure!(map.len() == model.len(), "step {step}: len {} vs {}", map.len(), model.len());
        for (k, v) in map.iter() {
            ensure!(model.get(&k.0) == Some(v), "step {step}: stray entry {k}");
        }
        map.check_invariants().map_err(|e| format!("step {step}: {e}"))?;
    }
    Ok(format!("{ops} operations, audits clean, final size {}", map.len()))
}

fn scan_speed() -> Outcome {
    let t = scan_benchmark(1_000_000, 1_000_000, 7, 5);
    let line = format!(
        "gapless {:.2} ns/entry, chained {:.2} ns/entry, {:.1}x",
        ScanTiming::ns_per_entry(t.gapless, t.entries),
        ScanTiming::ns_per_entry(t.chained, t.entries),
        t.speedup()
    );
    ensure!(t.speedup() >= 2.0, "{line}");
    Ok(line)
}

fn throughput_scaling() -> Outcome {
    let spec = PredicateSpec::new(PredicateKind::StartPreceding);
    // fixed density: one start per time unit, mean duration 10
    let sizes = [1_000_000usize, 2_000_000];
    let rels = sizes.map(|n| gen_synthetic(&DatasetSpec { n, domain_hi: n as i64, seed: 8, ..DatasetSpec::default() }));
    let mut best = [Duration::MAX; 2];
    // sizes alternate so drift in machine load hits both
    for _ in 0..5 {
        for (b, rel) in best.iter_mut().zip(&rels) {
            let rel = rel.as_ref().map_err(|e| e.to_string())?;
            let row = time_join(&spec, rel, rel, EngineConfig::default(), 1).map_err(|e| e.to_string())?;
            *b = (*b).min(row.total_time());
        }
    }
    let ratio = best[1].as_secs_f64() / best[0].as_secs_f64();
    let line = format!("n=1e6 {} ms, n=2e6 {} ms, ratio {ratio:.2}", best[0].as_millis(), best[1].as_millis());
    ensure!(best[0] < Duration::from_secs(5), "{line}");
    ensure!(ratio <= 2.5, "{line}");
    Ok(line)
}

/// Timestamp of the endpoint that triggers each pair of an unfiltered join.
fn trigger(kind: PredicateKind, r: &IntervalTuple<i64>, s: &IntervalTuple<i64>) -> Option<i64> {
    use PredicateKind::*;
    match kind {
        StartPreceding | StrictStartPreceding | Before | AllenBefore | Meets => Some(s.ts),
        EndFollowing | StrictEndFollowing => Some(s.te),
        ReverseStartPreceding | After | AllenAfter | MetBy => Some(r.ts),
        ReverseEndFollowing => Some(r.te),
        _ => None,
    }
}

fn early_emission() -> Outcome {
    use PredicateKind::*;
    let streamable = [StartPreceding, StrictStartPreceding, EndFollowing, StrictEndFollowing];
    let unfiltered = [
        StartPreceding,
        StrictStartPreceding,
        ReverseStartPreceding,
        EndFollowing,
        StrictEndFollowing,
        ReverseEndFollowing,
        Before,
        After,
        AllenBefore,
        AllenAfter,
        Meets,
        MetBy,
    ];
    let mut pairs_checked = 0usize;
    for seed in 0..50u64 {
        let (r, s) = random_instance(30_000 + seed, 200, 100);
        let opts = JoinOptions::with_engine(if seed % 2 == 0 { EngineConfig::eager() } else { EngineConfig::lazy(7) });
        for kind in unfiltered {
            let out = run_join(&PredicateSpec::new(kind), &r, &s, &opts).map_err(|e| e.to_string())?;
            for p in &out.pairs {
                let want = trigger(kind, r.tuple(p.r_id), s.tuple(p.s_id)).unwrap();
                ensure!(
                    p.emitted_at == want,
                    "{kind} seed {seed}: ({}, {}) at {} not {want}",
                    p.r_id,
                    p.s_id,
                    p.emitted_at
                );
                pairs_checked += 1;
            }
        }

        let (idx_r, idx_s) = (EndpointIndex::build(&r), EndpointIndex::build(&s));
        for kind in streamable {
            let batch = run_join(&PredicateSpec::new(kind), &r, &s, &opts).map_err(|e| e.to_string())?.pair_set();
            let (mut feed_r, src_r) = stream_source();
            let (mut feed_s, src_s) = stream_source();
            let (er, es) = (idx_r.events().to_vec(), idx_s.events().to_vec());
            let producer = std::thread::spawn(move || {
                // interleave the two feeds so the sweep waits on both
                let (mut a, mut b) = (er.into_iter().peekable(), es.into_iter().peekable());
                while a.peek().is_some() || b.peek().is_some() {
                    if let Some(e) = a.next() {
                        feed_r.push(e).unwrap();
                    }
                    if let Some(e) = b.next() {
                        feed_s.push(e).unwrap();
                    }
                }
            });
            let mut out = PairCollector::new();
            join_sources(kind, &r, &s, src_r, src_s, &opts, &mut out).map_err(|e| e.to_string())?;
            producer.join().map_err(|_| "producer panicked".to_string())?;
            let streamed: BTreeSet<_> = out.pairs.iter().map(|p| (p.r_id, p.s_id)).collect();
            ensure!(streamed == batch, "{kind} seed {seed}: streamed result differs from batch");
        }
    }
    Ok(format!("{pairs_checked} pairs emitted at their trigger; 50 instances streamed"))
}

fn partition_soundness() -> Outcome {
    let specs = all_specs(&BOUND_GRID);
    let mut runs = 0;
    for seed in 0..50u64 {
        let (r, s) = random_instance(40_000 + seed, 200, 100);
        let opts = JoinOptions::default();
        for spec in &specs {
            let whole = run_join(spec, &r, &s, &opts).map_err(|e| e.to_string())?;
            let (want, want_sum) = (sorted_pairs(&whole.pairs), checksum(&whole.pairs, &r, &s));
            for k in [1, 2, 4] {
                let parts = partitioned_join(spec, &r, &s, k, &opts).map_err(|e| e.to_string())?;
                ensure!(sorted_pairs(&parts.pairs) == want, "{spec} k={k} seed {seed}: pair sets differ");
                ensure!(checksum(&parts.pairs, &r, &s) == want_sum, "{spec} k={k} seed {seed}: checksums differ");
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} partitioned runs match"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("before example", example_before),
        ("endpoint index listing", index_listing),
        ("lazy/eager equivalence", lazy_eager),
        ("gnorf batch grid", gnorf_grid),
        ("gapless map model", gapless_model),
        ("scan speed", scan_speed),
        ("throughput and scaling", throughput_scaling),
        ("early emission and streaming", early_emission),
        ("partition soundness", partition_soundness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = started.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{elapsed:.1?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{elapsed:.1?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
