// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use hls_forge::arch::{validate_schedule, Violation, ViolationKind};
use hls_forge::ir::OpKind;
use hls_forge::scheduler::Schedule;

fn corrupt(mutate: impl FnOnce(&mut Schedule)) -> Vec<Violation> {
    let inst = Instance::toy(SEQ_IO, ONE_BANK);
    let mut s = inst.schedule(None).unwrap();
    mutate(&mut s);
    validate_schedule(&s, &inst.sfg, &inst.gcg, &inst.mapping, &inst.lib)
}

fn kinds(v: &[Violation]) -> Vec<ViolationKind> {
    v.iter().map(|x| x.kind).collect()
}

fn at(s: &Schedule, name: &str) -> usize {
    s.entries.iter().position(|e| e.name == name).unwrap()
}

#[test]
fn valid_schedules_have_no_violations() {
    for (io, map) in [(SEQ_IO, ONE_BANK), (PAR_IO, TWO_BANKS), (SEQ_IO, TWO_BANKS), (SEQ_IO, "")] {
        let inst = Instance::toy(io, map);
        let s = inst.schedule(None).unwrap();
        assert_eq!(validate_schedule(&s, &inst.sfg, &inst.gcg, &inst.mapping, &inst.lib), vec![]);
    }
}

#[test]
fn consumer_before_producer_is_a_dependency_violation() {
    let v = corrupt(|s| {
        let i = at(s, "s1");
        s.entries[i].start = 3;
        s.entries[i].end = 4;
    });
    assert!(kinds(&v).contains(&ViolationKind::Dependency), "{v:?}");
    assert!(v.iter().any(|x| x.entities.iter().any(|e| e == "s1")));
}

#[test]
fn shortened_read_is_a_port_violation() {
    let v = corrupt(|s| {
        let i = at(s, "m1");
        s.entries[i].reads[0].span = 1;
    });
    assert!(kinds(&v).contains(&ViolationKind::PortOverlap), "{v:?}");
}

#[test]
fn wrong_duration_is_a_timing_violation() {
    let v = corrupt(|s| {
        let i = at(s, "m2");
        s.entries[i].end += 1;
    });
    assert!(kinds(&v).contains(&ViolationKind::Timing), "{v:?}");
}

#[test]
fn input_moved_off_its_slot_is_a_timing_violation() {
    let v = corrupt(|s| {
        s.io_times.insert("b".into(), 2);
    });
    assert!(kinds(&v).contains(&ViolationKind::Timing), "{v:?}");
}

#[test]
fn two_ops_on_one_instance_at_once_is_a_binding_violation() {
    let inst = Instance::toy(PAR_IO, TWO_BANKS);
    let mut s = inst.schedule(None).unwrap();
    for e in s.entries.iter_mut().filter(|e| e.kind == OpKind::Mul) {
        e.instance = 0;
    }
    let v = validate_schedule(&s, &inst.sfg, &inst.gcg, &inst.mapping, &inst.lib);
    assert!(kinds(&v).contains(&ViolationKind::Binding), "{v:?}");
}

#[test]
fn oversized_pool_is_a_binding_violation() {
    let v = corrupt(|s| {
        s.operator_pool.insert(OpKind::Add, 3);
    });
    assert_eq!(kinds(&v), vec![ViolationKind::Binding]);
}

#[test]
fn violations_are_reported_in_a_stable_order() {
    let mutate = |s: &mut Schedule| {
        s.latency = 9;
        let i = at(s, "m1");
        s.entries[i].reads[0].cycle = 0;
    };
    let a = corrupt(mutate);
    let b = corrupt(mutate);
    assert!(a.len() >= 2);
    assert_eq!(a, b);
}
