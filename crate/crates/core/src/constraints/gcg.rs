// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Acg, Iocg, RelationKind, Vertex};
use crate::ir::NodeId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    Min,
    Max,
}

/// Where a constraint edge came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeOrigin {
    Dependency,
    Slot,
    Equal,
    Relation,
    Latency,
    Pin,
}

/// Normalized constraint `t_to >= t_from + weight`. `kind` records whether
/// it was declared as a minimum or as a (reversed) maximum constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcgEdge {
    pub from: Vertex,
    pub to: Vertex,
    pub weight: i64,
    pub kind: ConstraintKind,
    pub origin: EdgeOrigin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatencyConstraint {
    pub from: Vertex,
    pub to: Vertex,
    pub cycles: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gcg {
    names: Vec<String>,
    pub edges: Vec<GcgEdge>,
    pub latency: Vec<LatencyConstraint>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MergeError {
    #[error("constraint references `{0}`, which is not an input or output vertex")]
    Unresolved(String),
}

impl Gcg {
    /// An unconstrained system over the named vertices plus the origin.
    pub fn new(names: Vec<String>) -> Gcg {
        Gcg {
            names,
            edges: Vec::new(),
            latency: Vec::new(),
        }
    }

    /// Number of vertices including the origin.
    pub fn vertex_count(&self) -> usize {
        self.names.len() + 1
    }

    pub fn origin(&self) -> Vertex {
        Vertex(self.names.len() as u32)
    }

    pub fn name(&self, v: Vertex) -> &str {
        self.names.get(v.index()).map_or("origin", String::as_str)
    }

    /// `t_to >= t_from + weight`
    pub fn add_min(&mut self, from: Vertex, to: Vertex, weight: i64, origin: EdgeOrigin) {
        self.edges.push(GcgEdge {
            from,
            to,
            weight,
            kind: ConstraintKind::Min,
            origin,
        });
    }

    /// `t_to <= t_from + weight`, stored as `t_from >= t_to - weight`.
    pub fn add_max(&mut self, from: Vertex, to: Vertex, weight: i64, origin: EdgeOrigin) {
        self.edges.push(GcgEdge {
            from: to,
            to: from,
            weight: -weight,
            kind: ConstraintKind::Max,
            origin,
        });
    }

    /// `t_v = cycle` relative to the origin.
    pub fn anchor(&mut self, v: Vertex, cycle: i64, origin: EdgeOrigin) {
        let o = self.origin();
        self.add_min(o, v, cycle, origin);
        self.add_max(o, v, cycle, origin);
    }

    /// Copy of this system with each vertex in `pins` fixed to a cycle.
    pub fn pinned(&self, pins: impl IntoIterator<Item = (NodeId, i64)>) -> Gcg {
        let mut g = self.clone();
        for (id, t) in pins {
            g.anchor(id.into(), t, EdgeOrigin::Pin);
        }
        g
    }

    pub fn constraint_edges(&self) -> impl Iterator<Item = &GcgEdge> + '_ {
        self.edges.iter().filter(|e| e.origin != EdgeOrigin::Dependency)
    }

    /// Checks every edge against an assignment indexed by vertex. The origin
    /// is taken to be at cycle zero and all times must be non-negative.
    pub fn violated_by(&self, times: &[i64]) -> Vec<GcgEdge> {
        let t = |v: Vertex| if v == self.origin() { 0 } else { times[v.index()] };
        self.edges
            .iter()
            .filter(|e| t(e.to) < t(e.from) + e.weight)
            .copied()
            .collect()
    }
}

/// Merges I/O constraints onto the I/O vertices of `acg`.
pub fn merge_gcg(acg: &Acg, iocg: &Iocg) -> Result<Gcg, MergeError> {
    let io: HashMap<&str, Vertex> = acg
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind.is_io())
        .map(|(i, v)| (v.name.as_str(), Vertex(i as u32)))
        .collect();
    let resolve = |name: &str| {
        io.get(name)
            .copied()
            .ok_or_else(|| MergeError::Unresolved(name.to_string()))
    };

    let mut g = Gcg::new(acg.vertices.iter().map(|v| v.name.clone()).collect());
    for e in &acg.edges {
        g.add_min(e.from.into(), e.to.into(), e.weight, EdgeOrigin::Dependency);
    }
    for ev in &iocg.events {
        let v = resolve(&ev.name)?;
        if let Some(slot) = ev.slot {
            g.anchor(v, slot, EdgeOrigin::Slot);
        }
    }
    for r in &iocg.relations {
        let (a, b) = (resolve(&r.from)?, resolve(&r.to)?);
        match r.kind {
            RelationKind::Min => g.add_min(a, b, r.offset, EdgeOrigin::Relation),
            RelationKind::Max => g.add_max(a, b, r.offset, EdgeOrigin::Relation),
            RelationKind::Equal => {
                g.add_min(b, a, r.offset, EdgeOrigin::Equal);
                g.add_min(a, b, -r.offset, EdgeOrigin::Equal);
            }
        }
    }
    for l in &iocg.latency {
        let (a, b) = (resolve(&l.from)?, resolve(&l.to)?);
        g.add_max(a, b, l.cycles, EdgeOrigin::Latency);
        g.latency.push(LatencyConstraint {
            from: a,
            to: b,
            cycles: l.cycles,
        });
    }
    Ok(g)
}
