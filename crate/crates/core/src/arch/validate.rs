// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Independent schedule checker. Recomputes everything it checks from the
//! graph, the constraint system and the mapping; stored spans, pools and
//! access tables are compared against the recomputation, never trusted.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::constraints::Gcg;
use crate::ir::{NodeId, NodeKind, OpKind, OperatorLibrary, Sfg};
use crate::memory::{build_mcg, BankId, MemoryMapping};
use crate::scheduler::Schedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationKind {
    Dependency,
    PortOverlap,
    Timing,
    Binding,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::Dependency => "DEPENDENCY",
            ViolationKind::PortOverlap => "PORT_OVERLAP",
            ViolationKind::Timing => "TIMING",
            ViolationKind::Binding => "BINDING",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub entities: Vec<String>,
    pub cycle: i64,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at cycle {}: {}", self.kind, self.cycle, self.message)
    }
}

struct Checker<'a> {
    sfg: &'a Sfg,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn push(&mut self, kind: ViolationKind, entities: &[&str], cycle: i64, message: String) {
        self.out.push(Violation {
            kind,
            entities: entities.iter().map(|s| s.to_string()).collect(),
            cycle,
            message,
        });
    }

    fn name(&self, id: NodeId) -> &str {
        &self.sfg.node(id).name
    }
}

/// Every violated schedule invariant; empty iff the schedule is valid.
pub fn validate_schedule(
    schedule: &Schedule,
    sfg: &Sfg,
    gcg: &Gcg,
    mapping: &MemoryMapping,
    lib: &OperatorLibrary,
) -> Vec<Violation> {
    use ViolationKind::*;
    let mut c = Checker { sfg, out: Vec::new() };

    // Entries: one per operation, matching kind, name and latency.
    let mut start: Vec<Option<i64>> = vec![None; sfg.len()];
    let mut end: Vec<Option<i64>> = vec![None; sfg.len()];
    for e in &schedule.entries {
        if e.op.index() >= sfg.len() {
            c.push(Binding, &[&e.name], e.start, format!("entry for unknown node {}", e.op));
            continue;
        }
        let node = sfg.node(e.op);
        if node.kind != NodeKind::Op(e.kind) {
            c.push(Binding, &[&node.name], e.start, format!("`{}` is not a {} operation", node.name, e.kind));
            continue;
        }
        if node.name != e.name {
            c.push(Binding, &[&node.name, &e.name], e.start, format!("entry for `{}` is labelled `{}`", node.name, e.name));
        }
        if start[e.op.index()].is_some() {
            c.push(Binding, &[&node.name], e.start, format!("`{}` is scheduled twice", node.name));
            continue;
        }
        match lib.latency(e.kind) {
            Ok(l) if e.end - e.start != i64::from(l) => c.push(
                Timing,
                &[&node.name],
                e.start,
                format!("`{}` spans {} cycles, its operator takes {l}", node.name, e.end - e.start),
            ),
            Err(err) => c.push(Timing, &[&node.name], e.start, err.to_string()),
            _ => {}
        }
        start[e.op.index()] = Some(e.start);
        end[e.op.index()] = Some(e.end);
    }
    if schedule.entries.windows(2).any(|w| w[0].op >= w[1].op) {
        c.push(Binding, &[], 0, "entries are not in ascending op order".into());
    }
    for (n, _) in sfg.ops() {
        if start[n.id.index()].is_none() {
            c.push(Binding, &[&n.name], 0, format!("`{}` is not scheduled", n.name));
        }
    }

    // I/O transfer cycles.
    let mut io: Vec<Option<i64>> = vec![None; sfg.len()];
    for n in sfg.nodes().iter().filter(|n| n.kind.is_io()) {
        match schedule.io_times.get(&n.name) {
            Some(&t) => io[n.id.index()] = Some(t),
            None => c.push(Timing, &[&n.name], 0, format!("no transfer cycle for `{}`", n.name)),
        }
    }
    for name in schedule.io_times.keys() {
        if sfg.find(name).is_none_or(|id| !sfg.node(id).kind.is_io()) {
            c.push(Timing, &[name], 0, format!("transfer cycle for unknown I/O `{name}`"));
        }
    }

    // Data dependencies.
    for e in sfg.edges() {
        let avail = match sfg.node(e.producer).kind {
            NodeKind::Op(_) => end[e.producer.index()],
            NodeKind::Input => io[e.producer.index()],
            _ => None,
        };
        let need = match sfg.node(e.consumer).kind {
            NodeKind::Op(_) => start[e.consumer.index()],
            NodeKind::Output => io[e.consumer.index()],
            _ => None,
        };
        if let (Some(a), Some(n)) = (avail, need) {
            if a > n {
                let (p, q) = (c.name(e.producer).to_string(), c.name(e.consumer).to_string());
                c.push(Dependency, &[&p, &q], n, format!("`{q}` uses `{p}` at cycle {n}, available from {a}"));
            }
        }
    }

    check_memory(&mut c, schedule, mapping, &start);
    check_constraints(&mut c, schedule, gcg, &start, &io, sfg);
    check_binding(&mut c, schedule);
    c.out
}

/// (cycle, span, address, data) per read.
type PortLog = Vec<(i64, u32, u32, String)>;

fn check_memory(c: &mut Checker<'_>, schedule: &Schedule, mapping: &MemoryMapping, start: &[Option<i64>]) {
    use ViolationKind::*;
    let sfg = c.sfg;
    let mut per_port: BTreeMap<(BankId, u32), PortLog> = BTreeMap::new();
    for e in &schedule.entries {
        if e.op.index() >= sfg.len() || start[e.op.index()] != Some(e.start) {
            continue;
        }
        let mut expected: Vec<String> = sfg
            .operands(e.op)
            .into_iter()
            .filter(|&p| sfg.node(p).kind == NodeKind::MemData)
            .map(|p| sfg.node(p).name.clone())
            .filter(|d| mapping.placement(d).is_some())
            .collect();
        let mut got: Vec<String> = e.reads.iter().map(|r| r.data.clone()).collect();
        expected.sort();
        got.sort();
        if expected != got {
            c.push(
                Binding,
                &[&e.name],
                e.start,
                format!("`{}` reads {got:?} but its banked operands are {expected:?}", e.name),
            );
        }
        for r in &e.reads {
            let Some(pl) = mapping.placement(&r.data) else {
                continue;
            };
            let bank = mapping.bank(pl.bank);
            if bank.name != r.bank {
                c.push(Binding, &[&e.name, &r.data], r.cycle, format!("`{}` lives in `{}`, not `{}`", r.data, bank.name, r.bank));
                continue;
            }
            if r.port >= bank.ports {
                c.push(Binding, &[&e.name, &r.data], r.cycle, format!("bank `{}` has no port {}", bank.name, r.port));
                continue;
            }
            if r.span == 0 || r.cycle + i64::from(r.span) - 1 != e.start {
                c.push(
                    Dependency,
                    &[&e.name, &r.data],
                    r.cycle,
                    format!("read of `{}` must end on cycle {} where `{}` starts", r.data, e.start, e.name),
                );
            }
            per_port
                .entry((pl.bank, r.port))
                .or_default()
                .push((r.cycle, r.span, pl.address, r.data.clone()));
        }
    }

    for ((bank, port), reads) in &mut per_port {
        reads.sort();
        let mcg = build_mcg(mapping, *bank);
        let bank_name = mapping.bank(*bank).name.clone();
        let mut prev: Option<(i64, u32)> = None;
        for (cycle, span, addr, data) in reads.iter() {
            let derived = mcg.weight_between(prev.map(|p| p.1), *addr);
            if derived != *span {
                c.push(
                    PortOverlap,
                    &[&bank_name, data],
                    *cycle,
                    format!("read of `{data}` on {bank_name}.p{port} occupies {derived} cycles, recorded {span}"),
                );
            }
            if let Some((last, _)) = prev {
                if *cycle <= last {
                    c.push(
                        PortOverlap,
                        &[&bank_name, data],
                        *cycle,
                        format!("read of `{data}` on {bank_name}.p{port} overlaps the previous read ending at {last}"),
                    );
                }
            }
            let last = cycle + i64::from(*span) - 1;
            prev = Some((prev.map_or(last, |p| p.0.max(last)), *addr));
        }
    }

    // Stored timelines must list exactly the reads.
    let tables = schedule.access_tables.banks();
    if tables.len() != mapping.banks.len() {
        c.push(PortOverlap, &[], 0, "access tables do not match the mapping's banks".into());
        return;
    }
    for (b, bt) in tables.iter().enumerate() {
        let bank = BankId(b as u32);
        if bt.ports.len() != mapping.bank(bank).ports as usize || bt.bank != mapping.bank(bank).name {
            c.push(PortOverlap, &[&bt.bank], 0, format!("access table of `{}` does not match the mapping", bt.bank));
            continue;
        }
        for (p, timeline) in bt.ports.iter().enumerate() {
            let mut stored: Vec<(i64, u32, String)> = timeline
                .reservations()
                .map(|r| (r.cycle, r.span, r.data.clone()))
                .collect();
            stored.sort();
            let mut derived: Vec<(i64, u32, String)> = per_port
                .get(&(bank, p as u32))
                .map(|v| v.iter().map(|(cy, s, _, d)| (*cy, *s, d.clone())).collect())
                .unwrap_or_default();
            derived.sort();
            if stored != derived {
                c.push(
                    PortOverlap,
                    &[&bt.bank],
                    stored.first().map_or(0, |s| s.0),
                    format!("access table of {}.p{p} disagrees with the scheduled reads", bt.bank),
                );
            }
        }
    }
}

fn check_constraints(c: &mut Checker<'_>, schedule: &Schedule, gcg: &Gcg, start: &[Option<i64>], io: &[Option<i64>], sfg: &Sfg) {
    use ViolationKind::*;
    if gcg.vertex_count() != sfg.len() + 1 {
        c.push(Timing, &[], 0, "constraint graph does not match the graph".into());
        return;
    }
    let n = gcg.vertex_count();
    let origin = gcg.origin().index();
    // Fixed: origin, operations, inputs. Outputs and sources float to their
    // least consistent cycle.
    let mut fixed = vec![false; n];
    let mut t = vec![0i64; n];
    fixed[origin] = true;
    for i in 0..sfg.len() {
        let kind = sfg.node(NodeId(i as u32)).kind;
        let v = match kind {
            NodeKind::Op(_) => start[i],
            NodeKind::Input => io[i],
            _ => None,
        };
        if let Some(x) = v {
            fixed[i] = true;
            t[i] = x;
            if x < 0 {
                c.push(Timing, &[&sfg.node(NodeId(i as u32)).name], x, "scheduled before the frame origin".into());
            }
        }
    }
    let mut stable = false;
    for _ in 0..=n {
        stable = true;
        for e in &gcg.edges {
            let (a, b) = (e.from.index(), e.to.index());
            if !fixed[b] && t[a] + e.weight > t[b] {
                t[b] = t[a] + e.weight;
                stable = false;
            }
        }
        if stable {
            break;
        }
    }
    if !stable {
        c.push(Timing, &[], 0, "output transfers cannot satisfy the constraints".into());
    }
    // Recorded output cycles are checked against the constraints as given,
    // and must equal the least consistent cycle.
    let mut actual = t.clone();
    for o in sfg.outputs() {
        let name = sfg.node(o).name.clone();
        if let Some(x) = io[o.index()] {
            actual[o.index()] = x;
            if stable && x != t[o.index()] {
                c.push(Timing, &[&name], x, format!("`{name}` transfers at {x}, earliest consistent cycle is {}", t[o.index()]));
            }
        }
    }
    for e in &gcg.edges {
        let (a, b) = (actual[e.from.index()], actual[e.to.index()]);
        if b < a + e.weight {
            let (fa, fb) = (gcg.name(e.from).to_string(), gcg.name(e.to).to_string());
            c.push(
                Timing,
                &[&fa, &fb],
                b,
                format!("{:?} constraint t({fb}) >= t({fa}) {:+} violated ({b} < {})", e.origin, e.weight, a + e.weight),
            );
        }
    }

    let first = sfg.inputs().into_iter().filter_map(|i| io[i.index()]).min().unwrap_or(0);
    let outputs = sfg.outputs();
    let last = if outputs.is_empty() {
        schedule.entries.iter().map(|e| e.end).max().unwrap_or(0)
    } else {
        outputs.into_iter().filter_map(|o| io[o.index()]).max().unwrap_or(0)
    };
    let latency = (last - first).max(0);
    if schedule.latency != latency {
        c.push(Timing, &[], last, format!("recorded latency {} differs from the schedule's {latency}", schedule.latency));
    }
}

fn check_binding(c: &mut Checker<'_>, schedule: &Schedule) {
    use ViolationKind::*;
    let mut order: Vec<&crate::scheduler::ScheduleEntry> = schedule.entries.iter().collect();
    order.sort_by_key(|e| (e.start, e.op));
    let mut busy: BTreeMap<OpKind, Vec<i64>> = BTreeMap::new();
    for e in order {
        let slots = busy.entry(e.kind).or_default();
        let canonical = match slots.iter().position(|&until| until <= e.start) {
            Some(s) => s,
            None => {
                slots.push(i64::MIN);
                slots.len() - 1
            }
        };
        slots[canonical] = e.end;
        if e.instance as usize != canonical {
            c.push(
                Binding,
                &[&e.name],
                e.start,
                format!("`{}` bound to {}#{}, first free instance is #{canonical}", e.name, e.kind, e.instance),
            );
        }
    }
    for k in OpKind::ALL {
        let need = busy.get(&k).map_or(0, |v| v.len() as u32);
        let have = schedule.operator_pool.get(&k).copied().unwrap_or(0);
        if need != have {
            c.push(Binding, &[k.mnemonic()], 0, format!("pool holds {have} {k} operators, schedule needs {need}"));
        }
    }
}
