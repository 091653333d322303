// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Scheduling and binding under timing and memory constraints.
//!
//! Timing model shared by every scheduler and by the validator:
//!
//! * an operation occupies its operator over `[start, start + latency)` and
//!   its result is usable from `end = start + latency`;
//! * input vertices are pinned at their earliest feasible cycle, output
//!   vertices take the least cycle the constraint system allows;
//! * a memory operand is read on one port of its bank and the read ends on
//!   the consuming operation's start cycle, so a read of span `w` covers
//!   `[start - w + 1, start]`. The span is the MCG weight from the port's
//!   previous read (by time) to the datum. Reads never hold data in a
//!   register, and may begin before cycle 0.

mod list;
mod oracle;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::constraints::{Gcg, TimingSolution};
use crate::ir::{LibraryError, NodeId, NodeKind, OpKind, Sfg};
use crate::memory::{AccessTable, MemoryMapping, Placement};

pub use list::list_schedule;
pub use oracle::{brute_force_schedule, OracleError, ORACLE_MAX_HORIZON, ORACLE_MAX_OPS};

/// One memory read feeding an operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemRead {
    pub data: String,
    pub bank: String,
    pub port: u32,
    /// First cycle the port is busy.
    pub cycle: i64,
    pub span: u32,
}

impl MemRead {
    /// Last busy cycle.
    pub fn last(&self) -> i64 {
        self.cycle + i64::from(self.span) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduleEntry {
    pub op: NodeId,
    pub name: String,
    pub kind: OpKind,
    pub start: i64,
    pub end: i64,
    pub instance: u32,
    pub reads: Vec<MemRead>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Schedule {
    /// By ascending op id.
    pub entries: Vec<ScheduleEntry>,
    /// Transfer cycle of every input and output.
    pub io_times: BTreeMap<String, i64>,
    pub operator_pool: BTreeMap<OpKind, u32>,
    pub access_tables: AccessTable,
    pub latency: i64,
}

impl Schedule {
    pub fn entry(&self, op: NodeId) -> Option<&ScheduleEntry> {
        self.entries
            .binary_search_by_key(&op, |e| e.op)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn instances(&self, kind: OpKind) -> u32 {
        self.operator_pool.get(&kind).copied().unwrap_or(0)
    }

    /// Pretty JSON with stable key order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }

    /// Every memory read with the op it feeds.
    pub fn reads(&self) -> impl Iterator<Item = (&ScheduleEntry, &MemRead)> + '_ {
        self.entries.iter().flat_map(|e| e.reads.iter().map(move |r| (e, r)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FailureCause {
    MemoryConflict,
    Timing,
}

impl fmt::Display for FailureCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureCause::MemoryConflict => "MEMORY_CONFLICT",
            FailureCause::Timing => "TIMING",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfeasibilityReport {
    pub node: NodeId,
    pub name: String,
    pub step: i64,
    pub cause: FailureCause,
    pub suggestion: String,
}

impl fmt::Display for InfeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: `{}` cannot be scheduled at step {}; {}",
            self.cause, self.name, self.step, self.suggestion
        )
    }
}

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("{0}")]
    Infeasible(InfeasibilityReport),
    #[error(transparent)]
    Library(#[from] LibraryError),
}

impl ScheduleError {
    pub fn report(&self) -> Option<&InfeasibilityReport> {
        match self {
            ScheduleError::Infeasible(r) => Some(r),
            ScheduleError::Library(_) => None,
        }
    }
}

/// Ready-list ordering: lower remaining mobility, then lower margin, then
/// burst continuation, then lower id.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PriorityKey {
    pub mobility: i64,
    pub margin: i64,
    pub burst: bool,
    pub op: NodeId,
}

impl Ord for PriorityKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.mobility, self.margin, !self.burst, self.op).cmp(&(other.mobility, other.margin, !other.burst, other.op))
    }
}

impl PartialOrd for PriorityKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `postponed` is the number of steps the op has already been deferred
/// while ready; `burst` whether one of its reads continues a port's burst.
pub fn priority_key(op: NodeId, ts: &TimingSolution, step: i64, postponed: u32, burst: bool) -> PriorityKey {
    PriorityKey {
        mobility: ts.mobility_of(op) - i64::from(postponed),
        margin: ts.alap_of(op) - step,
        burst,
        op,
    }
}

/// Memory operands of `op` that live in a bank, in operand order.
pub(crate) fn memory_operands<'a>(sfg: &'a Sfg, mapping: &MemoryMapping, op: NodeId) -> Vec<(&'a str, Placement)> {
    sfg.operands(op)
        .into_iter()
        .filter(|&p| sfg.node(p).kind == NodeKind::MemData)
        .filter_map(|p| {
            let name = sfg.node(p).name.as_str();
            mapping.placement(name).map(|pl| (name, pl))
        })
        .collect()
}

/// Latest output transfer (or operation end when there are no outputs)
/// minus the earliest input transfer.
pub(crate) fn schedule_latency(sfg: &Sfg, entries: &[ScheduleEntry], io_times: &BTreeMap<String, i64>) -> i64 {
    let time = |id: NodeId| io_times.get(&sfg.node(id).name).copied();
    let first = sfg.inputs().into_iter().filter_map(time).min().unwrap_or(0);
    let outputs = sfg.outputs();
    let last = if outputs.is_empty() {
        entries.iter().map(|e| e.end).max().unwrap_or(0)
    } else {
        outputs.into_iter().filter_map(time).max().unwrap_or(0)
    };
    (last - first).max(0)
}

/// First-free-instance binding over entries sorted by start then id.
/// Returns the instance count per kind; optimal for interval conflicts.
pub(crate) fn bind_instances(entries: &mut [ScheduleEntry]) -> BTreeMap<OpKind, u32> {
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by_key(|&i| (entries[i].start, entries[i].op));
    let mut busy: BTreeMap<OpKind, Vec<i64>> = BTreeMap::new();
    for i in order {
        let e = &mut entries[i];
        let slots = busy.entry(e.kind).or_default();
        let slot = match slots.iter().position(|&until| until <= e.start) {
            Some(s) => s,
            None => {
                slots.push(i64::MIN);
                slots.len() - 1
            }
        };
        slots[slot] = e.end;
        e.instance = slot as u32;
    }
    busy.into_iter().map(|(k, v)| (k, v.len() as u32)).collect()
}

/// Validates that `gcg` and `ts` describe `sfg`; used by both schedulers.
pub(crate) fn check_shapes(sfg: &Sfg, gcg: &Gcg, ts: &TimingSolution) {
    assert_eq!(gcg.vertex_count(), sfg.len() + 1, "constraint graph does not match the SFG");
    assert_eq!(ts.asap.len(), gcg.vertex_count(), "timing solution does not match the constraint graph");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{build_acg, check_feasibility, merge_gcg, parse_io_spec};
    use crate::ir::{gen_toy, OperatorLibrary};

    #[test]
    fn key_orders_by_mobility_first() {
        let g = gen_toy();
        let acg = build_acg(&g, &OperatorLibrary::unit()).unwrap();
        let gcg = merge_gcg(&acg, &parse_io_spec("bus B0 in a@0 b@1\nlatency a c 5", &g).unwrap()).unwrap();
        let ts = check_feasibility(&gcg).unwrap();
        let (m1, m2) = (g.find("m1").unwrap(), g.find("m2").unwrap());
        assert_eq!(ts.mobility_of(m1), 2);
        assert_eq!(ts.mobility_of(m2), 1);
        assert!(priority_key(m2, &ts, 1, 0, false) < priority_key(m1, &ts, 1, 0, true));
        // Two postponements leave m1 more urgent than a fresh m2.
        assert!(priority_key(m1, &ts, 1, 2, false) < priority_key(m2, &ts, 1, 0, false));
    }

    #[test]
    fn burst_then_id_break_ties() {
        let k = |op, burst| PriorityKey {
            mobility: 1,
            margin: 1,
            burst,
            op: NodeId(op),
        };
        assert!(k(9, true) < k(3, false));
        assert!(k(3, false) < k(9, false));
        let mut v = [k(5, false), k(2, false), k(7, true)];
        v.sort();
        assert_eq!(v.iter().map(|k| k.op.0).collect::<Vec<_>>(), [7, 2, 5]);
    }

    #[test]
    fn binding_reuses_released_instances() {
        let e = |op, start, end| ScheduleEntry {
            op: NodeId(op),
            name: format!("o{op}"),
            kind: OpKind::Mul,
            start,
            end,
            instance: 99,
            reads: vec![],
        };
        let mut entries = vec![e(0, 0, 2), e(1, 1, 3), e(2, 2, 4), e(3, 3, 4)];
        let pool = bind_instances(&mut entries);
        assert_eq!(pool[&OpKind::Mul], 2);
        assert_eq!(entries.iter().map(|e| e.instance).collect::<Vec<_>>(), [0, 1, 0, 1]);
    }
}
