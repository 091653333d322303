// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Mobility-driven list scheduling with memory accessibility filtering.

use std::collections::BTreeMap;

use super::{
    bind_instances, check_shapes, memory_operands, priority_key, schedule_latency, FailureCause, InfeasibilityReport,
    MemRead, Schedule, ScheduleEntry, ScheduleError,
};
use crate::constraints::{check_feasibility, Gcg, TimingSolution, Vertex};
use crate::ir::{NodeId, NodeKind, OpKind, OperatorLibrary, Sfg};
use crate::memory::{build_mcg, AccessKind, AccessTable, BankId, Mcg, MemoryMapping};

const MEMORY_HINT: &str = "add one memory bank or increase latency";
const TIMING_HINT: &str = "relax the latency bound or the I/O constraints";

fn report(sfg: &Sfg, node: NodeId, step: i64, cause: FailureCause) -> ScheduleError {
    ScheduleError::Infeasible(InfeasibilityReport {
        node,
        name: sfg.node(node).name.clone(),
        step,
        cause,
        suggestion: match cause {
            FailureCause::MemoryConflict => MEMORY_HINT,
            FailureCause::Timing => TIMING_HINT,
        }
        .to_string(),
    })
}

struct PlannedRead {
    bank: BankId,
    port: u32,
    data: String,
    cycle: i64,
    span: u32,
}

/// Reads ending exactly at `step` for every banked operand of `op`, each on
/// the lowest-index port whose window is free. `None` if some operand has
/// no such port.
fn plan_reads(
    sfg: &Sfg,
    mapping: &MemoryMapping,
    mcgs: &[Mcg],
    table: &AccessTable,
    op: NodeId,
    step: i64,
) -> Option<Vec<PlannedRead>> {
    let mut plan: Vec<PlannedRead> = Vec::new();
    for (data, pl) in memory_operands(sfg, mapping, op) {
        let mcg = &mcgs[pl.bank.index()];
        let ports = mapping.bank(pl.bank).ports;
        let read = (0..ports)
            .filter(|&p| !plan.iter().any(|r| r.bank == pl.bank && r.port == p))
            .find_map(|p| {
                let timeline = table.port(pl.bank, p)?;
                let span = mcg.weight_between(timeline.last_access, pl.address);
                let cycle = step - i64::from(span) + 1;
                timeline.conflict(cycle, span).is_none().then(|| PlannedRead {
                    bank: pl.bank,
                    port: p,
                    data: data.to_string(),
                    cycle,
                    span,
                })
            })?;
        plan.push(read);
    }
    Some(plan)
}

/// Whether a banked operand of `op` sits at the address right after some
/// port's last access.
fn continues_burst(sfg: &Sfg, mapping: &MemoryMapping, table: &AccessTable, op: NodeId) -> bool {
    memory_operands(sfg, mapping, op).into_iter().any(|(_, pl)| {
        (0..mapping.bank(pl.bank).ports).any(|p| {
            table
                .port(pl.bank, p)
                .and_then(|t| t.last_access)
                .is_some_and(|a| a.checked_add(1) == Some(pl.address))
        })
    })
}

/// Schedules every operation of `sfg`.
///
/// Inputs are pinned at their earliest cycle in `ts` and the system is
/// re-solved. Steps then run from 0 up to `horizon` (default: latest ALAP
/// cycle plus one). At each step the ready operations are taken in
/// [`priority_key`] order; an operation whose reads cannot all end on this
/// step, or that finds no free operator, is postponed while it still has
/// margin. At zero margin an operator shortage allocates a new instance and
/// a port shortage ends the run with a `MEMORY_CONFLICT` report.
pub fn list_schedule(
    sfg: &Sfg,
    gcg: &Gcg,
    ts: &TimingSolution,
    mapping: &MemoryMapping,
    lib: &OperatorLibrary,
    horizon: Option<i64>,
) -> Result<Schedule, ScheduleError> {
    check_shapes(sfg, gcg, ts);
    let inputs = sfg.inputs();
    let pinned = gcg.pinned(inputs.iter().map(|&i| (i, ts.asap_of(i))));
    let ts = match check_feasibility(&pinned) {
        Ok(ts) => ts,
        Err(w) => return Err(report(sfg, witness_node(sfg, &w.cycle), 0, FailureCause::Timing)),
    };
    let horizon = horizon.unwrap_or(ts.deadline + 1);

    let mcgs: Vec<Mcg> = (0..mapping.banks.len())
        .map(|b| build_mcg(mapping, BankId(b as u32)))
        .collect();
    let mut table = AccessTable::new(mapping);

    let ops: Vec<(NodeId, OpKind)> = sfg.ops().map(|(n, k)| (n.id, k)).collect();
    let mut latency: BTreeMap<OpKind, i64> = BTreeMap::new();
    for &(_, k) in &ops {
        latency.insert(k, i64::from(lib.latency(k)?));
    }
    // Operator instances per kind, as the cycle each becomes free.
    let mut pool: BTreeMap<OpKind, Vec<i64>> = latency.keys().map(|&k| (k, vec![i64::MIN])).collect();

    let mut end: Vec<Option<i64>> = vec![None; sfg.len()];
    let mut postponed: Vec<u32> = vec![0; sfg.len()];
    let mut entries: Vec<ScheduleEntry> = Vec::with_capacity(ops.len());
    let mut remaining: Vec<(NodeId, OpKind)> = ops.clone();

    let mut step = 0;
    while !remaining.is_empty() && step <= horizon {
        let ready = |&(op, _): &(NodeId, OpKind)| {
            step >= ts.asap_of(op)
                && sfg.operands(op).into_iter().all(|p| match sfg.node(p).kind {
                    NodeKind::Op(_) => end[p.index()].is_some_and(|e| e <= step),
                    NodeKind::Input => ts.asap_of(p) <= step,
                    _ => true,
                })
        };
        let mut list: Vec<_> = remaining
            .iter()
            .filter(|o| ready(o))
            .map(|&(op, kind)| {
                let burst = continues_burst(sfg, mapping, &table, op);
                (priority_key(op, &ts, step, postponed[op.index()], burst), kind)
            })
            .collect();
        list.sort();

        for (key, kind) in list {
            let op = key.op;
            if key.margin < 0 {
                return Err(report(sfg, op, step, FailureCause::Timing));
            }
            let Some(plan) = plan_reads(sfg, mapping, &mcgs, &table, op, step) else {
                if key.margin == 0 {
                    return Err(report(sfg, op, step, FailureCause::MemoryConflict));
                }
                postponed[op.index()] += 1;
                continue;
            };
            let instances = pool.get_mut(&kind).expect("pool covers every used kind");
            let slot = match instances.iter().position(|&free| free <= step) {
                Some(s) => s,
                None if key.margin == 0 => {
                    instances.push(i64::MIN);
                    instances.len() - 1
                }
                None => {
                    postponed[op.index()] += 1;
                    continue;
                }
            };
            let finish = step + latency[&kind];
            instances[slot] = finish;
            end[op.index()] = Some(finish);

            let mut reads = Vec::with_capacity(plan.len());
            for r in plan {
                table
                    .reserve_access(&mcgs[r.bank.index()], r.port, &r.data, r.cycle, r.span, AccessKind::Read)
                    .expect("planned window is free");
                reads.push(MemRead {
                    data: r.data,
                    bank: mapping.bank(r.bank).name.clone(),
                    port: r.port,
                    cycle: r.cycle,
                    span: r.span,
                });
            }
            entries.push(ScheduleEntry {
                op,
                name: sfg.node(op).name.clone(),
                kind,
                start: step,
                end: finish,
                instance: slot as u32,
                reads,
            });
        }
        remaining.retain(|&(op, _)| end[op.index()].is_none());
        step += 1;
    }
    if let Some(&(op, _)) = remaining.first() {
        return Err(report(sfg, op, horizon, FailureCause::Timing));
    }

    entries.sort_by_key(|e| e.op);
    let operator_pool = bind_instances(&mut entries);

    let fixed = pinned.pinned(entries.iter().map(|e| (e.op, e.start)));
    let solved = match check_feasibility(&fixed) {
        Ok(s) => s,
        Err(w) => {
            let last = entries.iter().map(|e| e.end).max().unwrap_or(0);
            return Err(report(sfg, witness_node(sfg, &w.cycle), last, FailureCause::Timing));
        }
    };
    let io_times: BTreeMap<String, i64> = sfg
        .nodes()
        .iter()
        .filter(|n| n.kind.is_io())
        .map(|n| (n.name.clone(), solved.asap_of(n.id)))
        .collect();
    let latency = schedule_latency(sfg, &entries, &io_times);
    Ok(Schedule {
        entries,
        io_times,
        operator_pool,
        access_tables: table,
        latency,
    })
}

/// An SFG node on a positive cycle, preferring outputs.
fn witness_node(sfg: &Sfg, cycle: &[Vertex]) -> NodeId {
    let nodes: Vec<NodeId> = cycle
        .iter()
        .filter(|v| v.index() < sfg.len())
        .map(|v| NodeId(v.0))
        .collect();
    nodes
        .iter()
        .copied()
        .find(|&n| sfg.node(n).kind == NodeKind::Output)
        .or_else(|| nodes.first().copied())
        .unwrap_or(NodeId(0))
}
