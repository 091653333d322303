// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::BTreeMap;

use common::*;
use hls_forge::arch::{estimate_registers, validate_schedule, value_lifetimes};
use hls_forge::constraints::{check_feasibility, EdgeOrigin, Gcg, Vertex};
use hls_forge::flow::{synthesize, Design, Outcome, SynthOptions};
use hls_forge::ir::{gen_fft_with, gen_toy, render_sfg, FftOptions, OpKind, OperatorLibrary};
use hls_forge::memory::extract_memory_table;
use hls_forge::scheduler::{brute_force_schedule, Schedule};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn peak_usage(s: &Schedule) -> BTreeMap<OpKind, u32> {
    let mut peak = BTreeMap::new();
    for e in &s.entries {
        let busy = s
            .entries
            .iter()
            .filter(|o| o.kind == e.kind && o.start <= e.start && e.start < o.end)
            .count() as u32;
        let p = peak.entry(e.kind).or_insert(0);
        *p = (*p).max(busy);
    }
    peak
}

fn max_overlap(intervals: &[(i64, i64)]) -> u32 {
    intervals
        .iter()
        .map(|&(t, _)| intervals.iter().filter(|&&(a, b)| a <= t && t < b).count() as u32)
        .max()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn heuristic_is_valid_and_never_beats_the_oracle(seed in any::<u64>()) {
        let inst = random_instance(&mut StdRng::seed_from_u64(seed), 6, 4);
        let heuristic = inst.schedule(Some(12));
        let oracle = brute_force_schedule(&inst.sfg, &inst.gcg, &inst.mapping, &inst.lib, 12).unwrap();
        if let Ok(h) = &heuristic {
            let v = validate_schedule(h, &inst.sfg, &inst.gcg, &inst.mapping, &inst.lib);
            prop_assert!(v.is_empty(), "{:?}", v);
            let o = oracle.as_ref().expect("oracle must find what the heuristic found");
            prop_assert!(h.latency >= o.latency);
            prop_assert_eq!(&h.operator_pool, &peak_usage(h));
        }
        if let Some(o) = &oracle {
            let v = validate_schedule(o, &inst.sfg, &inst.gcg, &inst.mapping, &inst.lib);
            prop_assert!(v.is_empty(), "{:?}", v);
        }
    }

    #[test]
    fn registers_equal_peak_live_values(seed in any::<u64>()) {
        let inst = random_instance(&mut StdRng::seed_from_u64(seed), 8, 4);
        if let Ok(s) = inst.schedule(None) {
            let lifetimes = value_lifetimes(&s, &inst.sfg);
            prop_assert_eq!(estimate_registers(&s, &inst.sfg), max_overlap(&lifetimes));
        }
    }

    #[test]
    fn earliest_and_latest_solutions_satisfy_every_edge(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = rng.gen_range(1..=6);
        let mut g = Gcg::new((0..k).map(|i| format!("v{i}")).collect());
        for _ in 0..rng.gen_range(0..=2 * k) {
            let (a, b) = (Vertex(rng.gen_range(0..=k as u32)), Vertex(rng.gen_range(0..=k as u32)));
            let w = rng.gen_range(-4..=6);
            if rng.gen_bool(0.5) {
                g.add_min(a, b, w, EdgeOrigin::Relation);
            } else {
                g.add_max(a, b, w, EdgeOrigin::Relation);
            }
        }
        match check_feasibility(&g) {
            Ok(ts) => {
                prop_assert!(g.violated_by(&ts.asap[..k]).is_empty());
                prop_assert!(g.violated_by(&ts.alap[..k]).is_empty());
                prop_assert!(ts.asap.iter().zip(&ts.alap).all(|(a, l)| a <= l));
                prop_assert!(ts.alap[..k].iter().all(|&t| t <= ts.deadline));
            }
            Err(w) => {
                prop_assert!(w.weight > 0);
                prop_assert_eq!(w.edges.iter().map(|e| e.weight).sum::<i64>(), w.weight);
                for (i, e) in w.edges.iter().enumerate() {
                    let next = &w.edges[(i + 1) % w.edges.len()];
                    prop_assert_eq!(e.to, next.from);
                }
            }
        }
    }
}

#[test]
fn scheduling_is_deterministic() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..40 {
        let inst = random_instance(&mut rng, 8, 4);
        let a = inst.schedule(None);
        let b = inst.schedule(None);
        match (a, b) {
            (Ok(a), Ok(b)) => assert_eq!(a.to_json(), b.to_json()),
            (Err(a), Err(b)) => assert_eq!(a.to_string(), b.to_string()),
            _ => panic!("outcome changed between runs"),
        }
    }
}

fn first_feasible_and_beyond(design: &Design, span: i64) -> Vec<(i64, bool)> {
    let ok = |l: i64| {
        matches!(
            synthesize(design, SynthOptions { latency: Some(l), horizon: None }).unwrap(),
            Outcome::Scheduled(_)
        )
    };
    let first = (1..500).find(|&l| ok(l)).expect("some bound succeeds");
    (first..first + span).map(|l| (l, ok(l))).collect()
}

#[test]
fn relaxing_the_bound_keeps_small_designs_feasible() {
    let toy = Design::parse(&render_sfg(&gen_toy()), SEQ_IO, ONE_BANK, None).unwrap();
    let fft = gen_fft_with(8, FftOptions { fold_trivial_twiddles: true }).unwrap();
    let mut map = String::from("bank bank0 ports 1 wseq 1 wrand 2\nbank bank1 ports 1 wseq 1 wrand 2\n");
    for (i, row) in extract_memory_table(&fft).rows.iter().enumerate() {
        map.push_str(&format!("place {} bank{} {}\n", row.data, i % 2, i / 2));
    }
    let fft = Design::parse(&render_sfg(&fft), "", &map, Some(&OperatorLibrary::fft_reference().to_json())).unwrap();
    for design in [toy, fft] {
        let points = first_feasible_and_beyond(&design, 12);
        assert!(points.iter().all(|&(_, ok)| ok), "{points:?}");
    }
}

#[test]
fn tighter_bounds_never_use_fewer_operators_on_the_toy() {
    let design = Design::parse(&render_sfg(&gen_toy()), PAR_IO, TWO_BANKS, None).unwrap();
    let ops = |l| match synthesize(&design, SynthOptions { latency: Some(l), horizon: None }).unwrap() {
        Outcome::Scheduled(s) => Some(s.report.operators()),
        _ => None,
    };
    let counts: Vec<u32> = (3..=8).filter_map(ops).collect();
    assert_eq!(counts.len(), 6);
    assert!(counts.windows(2).all(|w| w[0] >= w[1]), "{counts:?}");
    assert_eq!(counts.last(), Some(&3));
}
