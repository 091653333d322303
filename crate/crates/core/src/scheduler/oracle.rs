// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Exhaustive minimum-latency scheduling for tiny graphs.
//!
//! Follows the same rules as [`super::list_schedule`]: inputs pinned at
//! their earliest cycle, every operation started within its ASAP/ALAP window
//! of the pinned system and by `horizon`, unlimited operators, reads ending
//! on the consuming operation's start. Every start vector is enumerated in
//! lexicographic order (by op id), and for each one every assignment of reads
//! to ports.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{bind_instances, check_shapes, memory_operands, schedule_latency, MemRead, Schedule, ScheduleEntry};
use crate::constraints::{check_feasibility, Gcg};
use crate::ir::{LibraryError, NodeId, OpKind, OperatorLibrary, Sfg};
use crate::memory::{build_mcg, AccessKind, AccessTable, BankId, Mcg, MemoryMapping};

pub const ORACLE_MAX_OPS: usize = 8;
pub const ORACLE_MAX_HORIZON: i64 = 16;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance too large for exhaustive search: {ops} ops, horizon {horizon} (limits {ORACLE_MAX_OPS} and {ORACLE_MAX_HORIZON})")]
    TooLarge { ops: usize, horizon: i64 },
    #[error(transparent)]
    Library(#[from] LibraryError),
}

struct Op {
    id: NodeId,
    kind: OpKind,
    latency: i64,
    lo: i64,
    hi: i64,
    /// Banked operands as (bank, address, data).
    reads: Vec<(BankId, u32, String)>,
}

struct Search<'a> {
    sfg: &'a Sfg,
    gcg: &'a Gcg,
    mapping: &'a MemoryMapping,
    mcgs: Vec<Mcg>,
    ops: Vec<Op>,
    /// Position in `ops` of each SFG node that is an operation.
    slot_of: Vec<Option<usize>>,
    /// Cycle of every pinned input, by node index.
    input_time: Vec<Option<i64>>,
    starts: Vec<i64>,
    best: Option<Leaf>,
}

/// Best leaf: (latency, op starts, ports per operand, vertex times).
type Leaf = (i64, Vec<i64>, Vec<Vec<u32>>, Vec<i64>);

/// A read to place: (end cycle, op position, operand position, bank, address).
type Pending = (i64, usize, usize, BankId, u32);

impl Search<'_> {
    fn dependencies_hold(&self, k: usize) -> bool {
        let op = &self.ops[k];
        let s = self.starts[k];
        for p in self.sfg.operands(op.id) {
            if let Some(j) = self.slot_of[p.index()] {
                if j < k && self.starts[j] + self.ops[j].latency > s {
                    return false;
                }
            } else if let Some(t) = self.input_time[p.index()] {
                if t > s {
                    return false;
                }
            }
        }
        for e in self.sfg.fanout(op.id) {
            if let Some(j) = self.slot_of[e.consumer.index()] {
                if j < k && s + op.latency > self.starts[j] {
                    return false;
                }
            }
        }
        true
    }

    /// Necessary condition: no more reads end on one cycle of a bank than
    /// it has ports.
    fn ports_suffice(&self, k: usize) -> bool {
        let s = self.starts[k];
        for (bank, _, _) in &self.ops[k].reads {
            let mut n = 0;
            for j in 0..=k {
                if self.starts[j] == s {
                    n += self.ops[j].reads.iter().filter(|r| r.0 == *bank).count();
                }
            }
            if n > self.mapping.bank(*bank).ports as usize {
                return false;
            }
        }
        true
    }

    /// Least times for the vertices not fixed by the schedule, or `None` if
    /// some constraint cannot hold.
    fn vertex_times(&self) -> Option<Vec<i64>> {
        let n = self.gcg.vertex_count();
        let origin = self.gcg.origin().index();
        let mut fixed = vec![false; n];
        let mut t = vec![0i64; n];
        fixed[origin] = true;
        for (k, op) in self.ops.iter().enumerate() {
            fixed[op.id.index()] = true;
            t[op.id.index()] = self.starts[k];
        }
        for (i, time) in self.input_time.iter().enumerate() {
            if let Some(c) = time {
                fixed[i] = true;
                t[i] = *c;
            }
        }
        let mut stable = false;
        for _ in 0..=n {
            stable = true;
            for e in &self.gcg.edges {
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
        let ok = stable
            && t.iter().all(|&x| x >= 0)
            && self.gcg.edges.iter().all(|e| t[e.to.index()] >= t[e.from.index()] + e.weight);
        ok.then_some(t)
    }

    /// Lexicographically first port assignment (per op, per banked operand)
    /// that keeps every port's reads apart.
    fn assign_ports(&self) -> Option<Vec<Vec<u32>>> {
        let mut pending: Vec<Pending> = Vec::new();
        for (k, op) in self.ops.iter().enumerate() {
            for (r, (bank, addr, _)) in op.reads.iter().enumerate() {
                pending.push((self.starts[k], k, r, *bank, *addr));
            }
        }
        pending.sort_by_key(|p| (p.0, p.1, p.2));
        // Per (bank, port): last read end and address.
        let mut state: Vec<Vec<Option<(i64, u32)>>> = self
            .mapping
            .banks
            .iter()
            .map(|b| vec![None; b.ports as usize])
            .collect();
        let mut chosen = vec![0u32; pending.len()];
        if !self.place(&pending, 0, &mut state, &mut chosen) {
            return None;
        }
        let mut out: Vec<Vec<u32>> = self.ops.iter().map(|o| vec![0; o.reads.len()]).collect();
        for (i, p) in pending.iter().enumerate() {
            out[p.1][p.2] = chosen[i];
        }
        Some(out)
    }

    fn place(&self, pending: &[Pending], i: usize, state: &mut [Vec<Option<(i64, u32)>>], chosen: &mut [u32]) -> bool {
        let Some(&(end, _, _, bank, addr)) = pending.get(i) else {
            return true;
        };
        let mcg = &self.mcgs[bank.index()];
        let ports = state[bank.index()].len();
        let mut tried_idle = false;
        for p in 0..ports {
            let prev = state[bank.index()][p];
            if prev.is_none() {
                // Idle ports are interchangeable.
                if tried_idle {
                    continue;
                }
                tried_idle = true;
            }
            let span = i64::from(mcg.weight_between(prev.map(|x| x.1), addr));
            if prev.is_some_and(|(last, _)| end - span < last) {
                continue;
            }
            state[bank.index()][p] = Some((end, addr));
            chosen[i] = p as u32;
            if self.place(pending, i + 1, state, chosen) {
                return true;
            }
            state[bank.index()][p] = prev;
        }
        false
    }

    fn leaf(&mut self) {
        let Some(times) = self.vertex_times() else {
            return;
        };
        let Some(ports) = self.assign_ports() else {
            return;
        };
        let io: BTreeMap<String, i64> = self
            .sfg
            .nodes()
            .iter()
            .filter(|n| n.kind.is_io())
            .map(|n| (n.name.clone(), times[n.id.index()]))
            .collect();
        let ends: Vec<ScheduleEntry> = self
            .ops
            .iter()
            .enumerate()
            .map(|(k, op)| ScheduleEntry {
                op: op.id,
                name: String::new(),
                kind: op.kind,
                start: self.starts[k],
                end: self.starts[k] + op.latency,
                instance: 0,
                reads: Vec::new(),
            })
            .collect();
        let latency = schedule_latency(self.sfg, &ends, &io);
        if self.best.as_ref().is_none_or(|b| latency < b.0) {
            self.best = Some((latency, self.starts.clone(), ports, times));
        }
    }

    fn dfs(&mut self, k: usize) {
        if k == self.ops.len() {
            self.leaf();
            return;
        }
        for s in self.ops[k].lo..=self.ops[k].hi {
            self.starts[k] = s;
            if self.dependencies_hold(k) && self.ports_suffice(k) {
                self.dfs(k + 1);
            }
        }
    }

    fn build(&self) -> Option<Schedule> {
        let (latency, starts, ports, times) = self.best.clone()?;
        let mut entries: Vec<ScheduleEntry> = Vec::with_capacity(self.ops.len());
        // Reads in end order so each port's table sees its history in time.
        let mut reads: Vec<(i64, usize, usize)> = Vec::new();
        for (k, op) in self.ops.iter().enumerate() {
            for r in 0..op.reads.len() {
                reads.push((starts[k], k, r));
            }
            entries.push(ScheduleEntry {
                op: op.id,
                name: self.sfg.node(op.id).name.clone(),
                kind: op.kind,
                start: starts[k],
                end: starts[k] + op.latency,
                instance: 0,
                reads: vec![
                    MemRead {
                        data: String::new(),
                        bank: String::new(),
                        port: 0,
                        cycle: 0,
                        span: 0,
                    };
                    op.reads.len()
                ],
            });
        }
        reads.sort();
        let mut table = AccessTable::new(self.mapping);
        for (end, k, r) in reads {
            let (bank, addr, ref data) = self.ops[k].reads[r];
            let port = ports[k][r];
            let mcg = &self.mcgs[bank.index()];
            let last = table.port(bank, port).and_then(|t| t.last_access);
            let span = mcg.weight_between(last, addr);
            let cycle = end - i64::from(span) + 1;
            table
                .reserve_access(mcg, port, data, cycle, span, AccessKind::Read)
                .expect("port assignment was checked");
            entries[k].reads[r] = MemRead {
                data: data.clone(),
                bank: self.mapping.bank(bank).name.clone(),
                port,
                cycle,
                span,
            };
        }
        entries.sort_by_key(|e| e.op);
        let operator_pool = bind_instances(&mut entries);
        let io_times = self
            .sfg
            .nodes()
            .iter()
            .filter(|n| n.kind.is_io())
            .map(|n| (n.name.clone(), times[n.id.index()]))
            .collect();
        Some(Schedule {
            entries,
            io_times,
            operator_pool,
            access_tables: table,
            latency,
        })
    }
}

/// Minimum-latency schedule by exhaustive search, lexicographically
/// smallest start vector among optima; `Ok(None)` when none exists.
/// Limited to [`ORACLE_MAX_OPS`] operations and [`ORACLE_MAX_HORIZON`].
pub fn brute_force_schedule(
    sfg: &Sfg,
    gcg: &Gcg,
    mapping: &MemoryMapping,
    lib: &OperatorLibrary,
    horizon: i64,
) -> Result<Option<Schedule>, OracleError> {
    let n_ops = sfg.ops().count();
    if n_ops > ORACLE_MAX_OPS || horizon > ORACLE_MAX_HORIZON {
        return Err(OracleError::TooLarge { ops: n_ops, horizon });
    }
    let Ok(free) = check_feasibility(gcg) else {
        return Ok(None);
    };
    check_shapes(sfg, gcg, &free);
    let inputs = sfg.inputs();
    let pinned = gcg.pinned(inputs.iter().map(|&i| (i, free.asap_of(i))));
    let Ok(ts) = check_feasibility(&pinned) else {
        return Ok(None);
    };

    let mut input_time = vec![None; sfg.len()];
    for &i in &inputs {
        input_time[i.index()] = Some(ts.asap_of(i));
    }
    let mut slot_of = vec![None; sfg.len()];
    let mut ops = Vec::with_capacity(n_ops);
    for (node, kind) in sfg.ops() {
        slot_of[node.id.index()] = Some(ops.len());
        let reads = memory_operands(sfg, mapping, node.id)
            .into_iter()
            .map(|(d, pl)| (pl.bank, pl.address, d.to_string()))
            .collect();
        ops.push(Op {
            id: node.id,
            kind,
            latency: i64::from(lib.latency(kind)?),
            lo: ts.asap_of(node.id).max(0),
            hi: ts.alap_of(node.id).min(horizon),
            reads,
        });
    }
    let mut search = Search {
        sfg,
        gcg: &pinned,
        mapping,
        mcgs: (0..mapping.banks.len())
            .map(|b| build_mcg(mapping, BankId(b as u32)))
            .collect(),
        starts: vec![0; ops.len()],
        ops,
        slot_of,
        input_time,
        best: None,
    };
    search.dfs(0);
    Ok(search.build())
}
