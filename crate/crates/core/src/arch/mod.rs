// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Architecture derived from a schedule: resource report, register
//! estimate, Gantt trace, and an independent validator.

mod validate;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::constraints::{Direction, Iocg};
use crate::ir::{NodeKind, OpKind, Sfg};
use crate::memory::MemoryMapping;
use crate::scheduler::Schedule;

pub use validate::{validate_schedule, Violation, ViolationKind};

/// Resource summary, columns in the order of the classic synthesis tables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchitectureReport {
    pub memory_banks: u32,
    pub input_busses: u32,
    pub output_busses: u32,
    pub sub: u32,
    pub add: u32,
    pub mult: u32,
    pub latency: i64,
    pub registers: u32,
}

pub const REPORT_HEADERS: [&str; 8] = [
    "Memory bank",
    "Input busses",
    "Output busses",
    "Sub.",
    "Add.",
    "Mult.",
    "Latency",
    "Registers",
];

impl ArchitectureReport {
    pub fn values(&self) -> [String; 8] {
        [
            self.memory_banks.to_string(),
            self.input_busses.to_string(),
            self.output_busses.to_string(),
            self.sub.to_string(),
            self.add.to_string(),
            self.mult.to_string(),
            self.latency.to_string(),
            self.registers.to_string(),
        ]
    }

    pub fn operators(&self) -> u32 {
        self.sub + self.add + self.mult
    }

    /// Two aligned lines: headers and values.
    pub fn to_text(&self) -> String {
        let values = self.values();
        let mut head = String::new();
        let mut row = String::new();
        for (i, (h, v)) in REPORT_HEADERS.iter().zip(&values).enumerate() {
            let w = h.len().max(v.len());
            let sep = if i == 0 { "" } else { "  " };
            let _ = write!(head, "{sep}{h:>w$}");
            let _ = write!(row, "{sep}{v:>w$}");
        }
        format!("{head}\n{row}\n")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Largest number of transfers of `dir` sharing one cycle.
fn simultaneous_transfers(schedule: &Schedule, sfg: &Sfg, dir: Direction) -> u32 {
    let kind = match dir {
        Direction::In => NodeKind::Input,
        Direction::Out => NodeKind::Output,
    };
    let mut per_cycle: BTreeMap<i64, u32> = BTreeMap::new();
    for id in sfg.of_kind(|k| k == kind) {
        if let Some(&t) = schedule.io_times.get(&sfg.node(id).name) {
            *per_cycle.entry(t).or_default() += 1;
        }
    }
    per_cycle.values().copied().max().unwrap_or(0)
}

/// Operator counts come from the pool, banks from the mapping. Bus counts
/// are the declared busses of each direction; a direction with none
/// declared reports the peak number of simultaneous transfers instead.
pub fn derive_report(schedule: &Schedule, sfg: &Sfg, mapping: &MemoryMapping, iocg: &Iocg) -> ArchitectureReport {
    let busses = |dir| {
        let declared = iocg.busses(dir).len() as u32;
        if declared > 0 {
            declared
        } else {
            simultaneous_transfers(schedule, sfg, dir)
        }
    };
    ArchitectureReport {
        memory_banks: mapping.banks.len() as u32,
        input_busses: busses(Direction::In),
        output_busses: busses(Direction::Out),
        sub: schedule.instances(OpKind::Sub),
        add: schedule.instances(OpKind::Add),
        mult: schedule.instances(OpKind::Mul),
        latency: schedule.latency,
        registers: estimate_registers(schedule, sfg),
    }
}

/// Value lifetimes `[produced, max(last use, produced + 1))`.
///
/// Inputs live from their transfer, operation results from their end,
/// memory reads from the consuming operation's start, register-resident
/// memory data from cycle 0. Outputs consume at their transfer. Constants
/// are wired and never held.
pub fn value_lifetimes(schedule: &Schedule, sfg: &Sfg) -> Vec<(i64, i64)> {
    let use_time = |consumer| match sfg.node(consumer).kind {
        NodeKind::Output => schedule.io_times.get(&sfg.node(consumer).name).copied(),
        NodeKind::Op(_) => schedule.entry(consumer).map(|e| e.start),
        _ => None,
    };
    let mut out = Vec::new();
    for n in sfg.nodes() {
        let produced = match n.kind {
            NodeKind::Input => schedule.io_times.get(&n.name).copied(),
            NodeKind::Op(_) => schedule.entry(n.id).map(|e| e.end),
            NodeKind::MemData => {
                let banked = schedule.reads().any(|(_, r)| r.data == n.name);
                if banked {
                    for (e, _) in schedule.reads().filter(|(_, r)| r.data == n.name) {
                        out.push((e.start, e.start + 1));
                    }
                    continue;
                }
                Some(0)
            }
            NodeKind::Const(_) | NodeKind::Output => None,
        };
        let Some(p) = produced else {
            continue;
        };
        let last = sfg.fanout(n.id).filter_map(|e| use_time(e.consumer)).max().unwrap_or(p);
        out.push((p, last.max(p + 1)));
    }
    out
}

/// Left-edge register allocation over [`value_lifetimes`].
pub fn estimate_registers(schedule: &Schedule, sfg: &Sfg) -> u32 {
    let mut lives = value_lifetimes(schedule, sfg);
    lives.sort();
    let mut registers: Vec<i64> = Vec::new();
    for (start, end) in lives {
        match registers.iter_mut().find(|free| **free <= start) {
            Some(r) => *r = end,
            None => registers.push(end),
        }
    }
    registers.len() as u32
}

/// Fixed-width text grid: one row per operator instance and per bank port,
/// one column per cycle from the earliest read or cycle 0 to the last busy
/// cycle. Busy cells show the operation or datum.
pub fn emit_gantt(schedule: &Schedule) -> String {
    // row label -> (cycle -> text)
    let mut rows: Vec<(String, BTreeMap<i64, String>)> = Vec::new();
    for k in OpKind::ALL {
        for i in 0..schedule.instances(k) {
            let mut cells = BTreeMap::new();
            for e in schedule.entries.iter().filter(|e| e.kind == k && e.instance == i) {
                for c in e.start..e.end {
                    cells.insert(c, e.name.clone());
                }
            }
            rows.push((format!("{k}#{i}"), cells));
        }
    }
    for bank in schedule.access_tables.banks() {
        for (p, timeline) in bank.ports.iter().enumerate() {
            let mut cells = BTreeMap::new();
            for r in timeline.reservations() {
                for c in r.cycle..r.end() {
                    cells.insert(c, r.data.clone());
                }
            }
            rows.push((format!("{}.p{p}", bank.bank), cells));
        }
    }

    let first = rows
        .iter()
        .filter_map(|(_, c)| c.keys().next().copied())
        .min()
        .map_or(0, |m: i64| m.min(0));
    let last = rows.iter().filter_map(|(_, c)| c.keys().next_back().copied()).max();
    let cycles: Vec<i64> = match last {
        Some(l) => (first..=l).collect(),
        None => Vec::new(),
    };
    let width = rows
        .iter()
        .flat_map(|(_, c)| c.values().map(String::len))
        .chain(cycles.iter().map(|c| c.to_string().len()))
        .max()
        .unwrap_or(1);
    let label = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max("cycle".len());

    let mut out = String::new();
    let _ = write!(out, "{:<label$} |", "cycle");
    for c in &cycles {
        let _ = write!(out, " {c:>width$} |");
    }
    out.push('\n');
    for (name, cells) in &rows {
        let _ = write!(out, "{name:<label$} |");
        for c in &cycles {
            let text = cells.get(c).map_or("", String::as_str);
            let _ = write!(out, " {text:<width$} |");
        }
        out.push('\n');
    }
    out
}
