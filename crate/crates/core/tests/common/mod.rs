// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
#![allow(dead_code)]

use hls_forge::constraints::{build_acg, check_feasibility, merge_gcg, parse_io_spec, Gcg, Iocg};
use hls_forge::ir::{gen_toy, NodeId, OpKind, OperatorLibrary, Sfg, SfgBuilder};
use hls_forge::memory::{extract_memory_table, parse_mapping, MemoryMapping};
use hls_forge::scheduler::{list_schedule, Schedule, ScheduleError};
use rand::seq::SliceRandom;
use rand::Rng;

pub const ONE_BANK: &str = "bank bank0 ports 1 wseq 1 wrand 2\nplace v1 bank0 0\nplace v2 bank0 1\nplace v3 bank0 2\nplace v4 bank0 3";
pub const TWO_BANKS: &str =
    "bank bank0 ports 1 wseq 1 wrand 2\nbank bank1 ports 1 wseq 1 wrand 2\nplace v1 bank0 0\nplace v3 bank0 1\nplace v2 bank1 0\nplace v4 bank1 1";
pub const SEQ_IO: &str = "bus B0 in a@0 b@1\nbus B0 out c@?\nlatency a c 5";
pub const PAR_IO: &str = "bus B0 in a@0\nbus B1 in b@0\nbus B2 out c@?\nlatency a c 3";

/// Everything one scheduling run needs.
pub struct Instance {
    pub sfg: Sfg,
    pub iocg: Iocg,
    pub gcg: Gcg,
    pub mapping: MemoryMapping,
    pub lib: OperatorLibrary,
    pub io_text: String,
    pub map_text: String,
}

impl Instance {
    pub fn new(sfg: Sfg, io: &str, map: &str, lib: OperatorLibrary) -> Instance {
        let iocg = parse_io_spec(io, &sfg).unwrap();
        let gcg = merge_gcg(&build_acg(&sfg, &lib).unwrap(), &iocg).unwrap();
        let mapping = parse_mapping(map, &extract_memory_table(&sfg)).unwrap();
        Instance {
            sfg,
            iocg,
            gcg,
            mapping,
            lib,
            io_text: io.to_string(),
            map_text: map.to_string(),
        }
    }

    pub fn toy(io: &str, map: &str) -> Instance {
        Instance::new(gen_toy(), io, map, OperatorLibrary::unit())
    }

    pub fn schedule(&self, horizon: Option<i64>) -> Result<Schedule, ScheduleError> {
        let ts = check_feasibility(&self.gcg).expect("feasible constraints");
        list_schedule(&self.sfg, &self.gcg, &ts, &self.mapping, &self.lib, horizon)
    }
}

/// A random graph of at most `max_ops` operations and `max_mem` memory
/// data, every operation reaching an output, with a latency bound from the
/// first input to every output and a random bank mapping.
pub fn random_instance(rng: &mut impl Rng, max_ops: usize, max_mem: usize) -> Instance {
    let n_in = rng.gen_range(1..=2);
    let n_mem = rng.gen_range(0..=max_mem);
    let n_ops = rng.gen_range(1..=max_ops);

    // Sources: 0..n_in inputs, then memory data. Operations follow.
    let n_src = n_in + n_mem;
    let mut operands: Vec<(usize, usize)> = Vec::new();
    for k in 0..n_ops {
        let pool = n_src + k;
        let a = rng.gen_range(0..pool);
        let mut b = rng.gen_range(0..pool);
        while b == a && pool > 1 {
            b = rng.gen_range(0..pool);
        }
        if b == a {
            // Single source: square it through a constant instead.
            b = usize::MAX;
        }
        operands.push((a, b));
    }
    let used = |s: usize| operands.iter().any(|&(a, b)| a == s || b == s);

    let mut bld = SfgBuilder::new();
    let mut ids: Vec<Option<NodeId>> = vec![None; n_src + n_ops];
    for (i, slot) in ids.iter_mut().enumerate().take(n_in) {
        *slot = Some(bld.input(format!("i{i}")));
    }
    let mut mems = Vec::new();
    for m in 0..n_mem {
        if used(n_in + m) {
            let name = format!("d{m}");
            ids[n_in + m] = Some(bld.mem(name.clone()));
            mems.push(name);
        }
    }
    let one = bld.constant("one", 1);
    for (k, &(a, b)) in operands.iter().enumerate() {
        let kind = *[OpKind::Add, OpKind::Sub, OpKind::Mul].choose(rng).unwrap();
        let lhs = ids[a].unwrap();
        let rhs = if b == usize::MAX { one } else { ids[b].unwrap() };
        ids[n_src + k] = Some(bld.op(format!("o{k}"), kind, lhs, rhs));
    }
    let mut outs = 0;
    for k in 0..n_ops {
        if !used(n_src + k) {
            bld.output(format!("y{outs}"), ids[n_src + k].unwrap());
            outs += 1;
        }
    }
    let sfg = bld.build();

    let lib = OperatorLibrary::new(
        200.0,
        &[
            (OpKind::Add, rng.gen_range(1..=2)),
            (OpKind::Sub, 1),
            (OpKind::Mul, rng.gen_range(1..=2)),
        ],
    )
    .unwrap();

    let mut io = String::new();
    for i in 0..n_in {
        if rng.gen_bool(0.7) {
            io.push_str(&format!("bus B{i} in i{i}@{}\n", rng.gen_range(0..=1)));
        }
    }
    let probe = Instance::new(sfg.clone(), &io, "", lib.clone());
    let ts = check_feasibility(&probe.gcg).unwrap();
    let first = (0..n_in)
        .min_by_key(|&i| (ts.asap_of(sfg.find(&format!("i{i}")).unwrap()), i))
        .unwrap();
    let t0 = ts.asap_of(sfg.find(&format!("i{first}")).unwrap());
    for o in 0..outs {
        let crit = ts.asap_of(sfg.find(&format!("y{o}")).unwrap()) - t0;
        io.push_str(&format!("latency i{first} y{o} {}\n", crit + rng.gen_range(0..=3)));
    }

    let n_banks = rng.gen_range(1..=2);
    let mut map = String::new();
    for b in 0..n_banks {
        let ports = if rng.gen_bool(0.25) { 2 } else { 1 };
        map.push_str(&format!("bank m{b} ports {ports} wseq 1 wrand {}\n", rng.gen_range(1..=3)));
    }
    let mut next_addr = vec![0u32; n_banks];
    let mut order = mems.clone();
    order.shuffle(rng);
    for d in order {
        if rng.gen_bool(0.85) {
            let b = rng.gen_range(0..n_banks);
            // Leave occasional address gaps to break bursts.
            next_addr[b] += u32::from(rng.gen_bool(0.2));
            map.push_str(&format!("place {d} m{b} {}\n", next_addr[b]));
            next_addr[b] += 1;
        }
    }
    Instance::new(sfg, &io, &map, lib)
}
