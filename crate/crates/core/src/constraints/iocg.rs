// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! I/O constraint specifications.
//!
//! ```text
//! bus B0 in  a@0 b@1
//! bus B0 out c@?
//! equal a b            # t_a = t_b + 0
//! min a c 2            # t_c >= t_a + 2
//! max a c 6            # t_c <= t_a + 6
//! latency a c 5        # latency bound, a MAX constraint
//! period 1
//! ```
//!
//! `;` may separate statements on one line.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ir::{NodeId, NodeKind, Sfg};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IoEvent {
    pub name: String,
    pub node: NodeId,
    pub bus: String,
    pub direction: Direction,
    /// Cycle offset from the frame origin; `None` when the transfer floats.
    pub slot: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    /// `t_to >= t_from + offset`
    Min,
    /// `t_to <= t_from + offset`
    Max,
    /// `t_from = t_to + offset`
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub from: String,
    pub to: String,
    pub kind: RelationKind,
    pub offset: i64,
}

/// `t_to <= t_from + cycles`, flagged as the computation latency.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatencyBound {
    pub from: String,
    pub to: String,
    pub cycles: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Iocg {
    pub events: Vec<IoEvent>,
    pub relations: Vec<Relation>,
    pub latency: Vec<LatencyBound>,
    pub frame_period: Option<i64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IoSpecError {
    #[error("line {line}: `{name}` is not an input or output of the graph")]
    UnknownData { name: String, line: usize },
    #[error("line {line}: `{name}` is an {actual} but was declared on an {declared} bus")]
    WrongDirection {
        name: String,
        line: usize,
        declared: &'static str,
        actual: &'static str,
    },
    #[error("line {line}: bus {bus} already carries `{other}` at slot {slot}")]
    SlotConflict {
        bus: String,
        slot: i64,
        other: String,
        line: usize,
    },
    #[error("line {line}: `{name}` is already declared")]
    DuplicateEvent { name: String, line: usize },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

impl Iocg {
    pub fn event(&self, name: &str) -> Option<&IoEvent> {
        self.events.iter().find(|e| e.name == name)
    }

    /// Distinct busses carrying events in `dir`.
    pub fn busses(&self, dir: Direction) -> Vec<&str> {
        let mut v: Vec<&str> = self
            .events
            .iter()
            .filter(|e| e.direction == dir)
            .map(|e| e.bus.as_str())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Replaces every latency bound with `cycles`. With no bound declared,
    /// bounds the earliest input (lowest fixed slot, then lowest node id)
    /// to every output of `sfg`.
    pub fn with_latency_override(mut self, cycles: i64, sfg: &Sfg) -> Iocg {
        if !self.latency.is_empty() {
            for l in &mut self.latency {
                l.cycles = cycles;
            }
            return self;
        }
        let first = sfg.inputs().into_iter().min_by_key(|&id| {
            let slot = self
                .events
                .iter()
                .find(|e| e.node == id)
                .and_then(|e| e.slot)
                .unwrap_or(i64::MAX);
            (slot, id)
        });
        if let Some(first) = first {
            let from = sfg.node(first).name.clone();
            for out in sfg.outputs() {
                self.latency.push(LatencyBound {
                    from: from.clone(),
                    to: sfg.node(out).name.clone(),
                    cycles,
                });
            }
        }
        self
    }
}

fn malformed(line: usize, message: impl Into<String>) -> IoSpecError {
    IoSpecError::Malformed {
        line,
        message: message.into(),
    }
}

fn kind_name(k: NodeKind) -> &'static str {
    match k {
        NodeKind::Input => "input",
        NodeKind::Output => "output",
        _ => "internal node",
    }
}

pub fn parse_io_spec(text: &str, sfg: &Sfg) -> Result<Iocg, IoSpecError> {
    let io: HashMap<&str, (NodeId, NodeKind)> = sfg
        .nodes()
        .iter()
        .filter(|n| n.kind.is_io())
        .map(|n| (n.name.as_str(), (n.id, n.kind)))
        .collect();
    let resolve = |name: &str, line: usize| {
        io.get(name).copied().ok_or_else(|| IoSpecError::UnknownData {
            name: name.to_string(),
            line,
        })
    };

    let mut iocg = Iocg::default();
    let mut slots: BTreeMap<(String, i64), String> = BTreeMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("");
        for stmt in body.split(';') {
            let toks: Vec<&str> = stmt.split_whitespace().collect();
            let Some(&keyword) = toks.first() else {
                continue;
            };
            match keyword {
                "bus" => {
                    let (Some(&bus), Some(&dir)) = (toks.get(1), toks.get(2)) else {
                        return Err(malformed(line, "expected `bus <id> in|out <data>@<slot>...`"));
                    };
                    let direction = match dir.trim_end_matches(':') {
                        "in" => Direction::In,
                        "out" => Direction::Out,
                        other => return Err(malformed(line, format!("unknown direction `{other}`"))),
                    };
                    for tok in &toks[3..] {
                        let (name, slot) = match tok.split_once('@') {
                            Some((n, "?")) => (n, None),
                            Some((n, s)) => {
                                let slot: i64 = s
                                    .parse()
                                    .map_err(|_| malformed(line, format!("invalid slot `{s}`")))?;
                                if slot < 0 {
                                    return Err(malformed(line, format!("negative slot for `{n}`")));
                                }
                                (n, Some(slot))
                            }
                            None => (*tok, None),
                        };
                        let (node, kind) = resolve(name, line)?;
                        let expected = match direction {
                            Direction::In => NodeKind::Input,
                            Direction::Out => NodeKind::Output,
                        };
                        if kind != expected {
                            return Err(IoSpecError::WrongDirection {
                                name: name.to_string(),
                                line,
                                declared: if direction == Direction::In { "input" } else { "output" },
                                actual: kind_name(kind),
                            });
                        }
                        if iocg.event(name).is_some() {
                            return Err(IoSpecError::DuplicateEvent {
                                name: name.to_string(),
                                line,
                            });
                        }
                        if let Some(slot) = slot {
                            if let Some(other) = slots.insert((bus.to_string(), slot), name.to_string()) {
                                return Err(IoSpecError::SlotConflict {
                                    bus: bus.to_string(),
                                    slot,
                                    other,
                                    line,
                                });
                            }
                        }
                        iocg.events.push(IoEvent {
                            name: name.to_string(),
                            node,
                            bus: bus.to_string(),
                            direction,
                            slot,
                        });
                    }
                }
                "equal" | "min" | "max" | "latency" => {
                    let needs_offset = keyword != "equal";
                    let arity_ok = if needs_offset {
                        toks.len() == 4
                    } else {
                        toks.len() == 3 || toks.len() == 4
                    };
                    if !arity_ok {
                        return Err(malformed(
                            line,
                            format!("expected `{keyword} <from> <to>{}`", if needs_offset { " <cycles>" } else { " [offset]" }),
                        ));
                    }
                    let (from, to) = (toks[1], toks[2]);
                    resolve(from, line)?;
                    resolve(to, line)?;
                    let offset: i64 = match toks.get(3) {
                        Some(s) => s
                            .parse()
                            .map_err(|_| malformed(line, format!("invalid cycle count `{s}`")))?,
                        None => 0,
                    };
                    if keyword == "latency" {
                        if offset < 0 {
                            return Err(malformed(line, "latency must be non-negative"));
                        }
                        iocg.latency.push(LatencyBound {
                            from: from.to_string(),
                            to: to.to_string(),
                            cycles: offset,
                        });
                    } else {
                        let kind = match keyword {
                            "min" => RelationKind::Min,
                            "max" => RelationKind::Max,
                            _ => RelationKind::Equal,
                        };
                        iocg.relations.push(Relation {
                            from: from.to_string(),
                            to: to.to_string(),
                            kind,
                            offset,
                        });
                    }
                }
                "period" => {
                    let p: i64 = toks
                        .get(1)
                        .and_then(|s| s.parse().ok())
                        .filter(|&p| p > 0 && toks.len() == 2)
                        .ok_or_else(|| malformed(line, "expected `period <positive cycles>`"))?;
                    iocg.frame_period = Some(p);
                }
                other => return Err(malformed(line, format!("unknown statement `{other}`"))),
            }
        }
    }
    Ok(iocg)
}
