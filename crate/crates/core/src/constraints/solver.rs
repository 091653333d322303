// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Difference-constraint solving by longest paths.

use std::fmt;

use serde::Serialize;

use super::{Gcg, GcgEdge, Vertex};
use crate::ir::NodeId;

const UNREACHED: i64 = i64::MIN;

/// Earliest and latest cycles per vertex (origin included, last).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TimingSolution {
    pub asap: Vec<i64>,
    pub alap: Vec<i64>,
    /// Cycle every vertex must reach by in the ALAP solution.
    pub deadline: i64,
}

impl TimingSolution {
    pub fn asap_of(&self, id: NodeId) -> i64 {
        self.asap[id.index()]
    }

    pub fn alap_of(&self, id: NodeId) -> i64 {
        self.alap[id.index()]
    }

    pub fn mobility_of(&self, id: NodeId) -> i64 {
        self.alap_of(id) - self.asap_of(id)
    }
}

/// A cycle of constraint edges with positive total weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfeasibilityWitness {
    /// Vertices in traversal order; the cycle closes back on the first.
    pub cycle: Vec<Vertex>,
    pub names: Vec<String>,
    pub edges: Vec<GcgEdge>,
    pub weight: i64,
}

impl fmt::Display for InfeasibilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "positive cycle (total {} cycles): ", self.weight)?;
        for (name, e) in self.names.iter().zip(&self.edges) {
            write!(f, "{name} -[{}]-> ", e.weight)?;
        }
        f.write_str(self.names.first().map_or("", String::as_str))
    }
}

/// Edge list led by the implicit non-negativity edges `origin -> v` (weight 0).
fn all_edges(gcg: &Gcg) -> Vec<GcgEdge> {
    let origin = gcg.origin();
    let mut edges: Vec<GcgEdge> = (0..origin.0)
        .map(|v| GcgEdge {
            from: origin,
            to: Vertex(v),
            weight: 0,
            kind: super::ConstraintKind::Min,
            origin: super::EdgeOrigin::Slot,
        })
        .collect();
    edges.extend_from_slice(&gcg.edges);
    edges
}

enum Relaxed {
    Converged,
    /// A vertex that still relaxed after |V| passes.
    Cycle { pred: Vec<Option<usize>>, at: Vertex },
}

fn longest_paths(n: usize, edges: &[GcgEdge], dist: &mut [i64], reverse: bool) -> Relaxed {
    let mut pred: Vec<Option<usize>> = vec![None; n];
    for pass in 0..n {
        let mut last = None;
        for (i, e) in edges.iter().enumerate() {
            let (src, dst) = if reverse { (e.to, e.from) } else { (e.from, e.to) };
            let d = dist[src.index()];
            if d == UNREACHED {
                continue;
            }
            if d + e.weight > dist[dst.index()] {
                dist[dst.index()] = d + e.weight;
                pred[dst.index()] = Some(i);
                last = Some(dst);
            }
        }
        match last {
            None => return Relaxed::Converged,
            Some(v) => {
                if pass == n - 1 {
                    return Relaxed::Cycle { pred, at: v };
                }
            }
        }
    }
    Relaxed::Converged
}

fn extract_cycle(gcg: &Gcg, edges: &[GcgEdge], pred: &[Option<usize>], at: Vertex) -> InfeasibilityWitness {
    let n = pred.len();
    let step = |v: Vertex| edges[pred[v.index()].expect("relaxed vertex has a predecessor")].from;
    let mut v = at;
    for _ in 0..n {
        v = step(v);
    }
    let start = v;
    let mut rev_edges = Vec::new();
    loop {
        let e = edges[pred[v.index()].unwrap()];
        rev_edges.push(e);
        v = e.from;
        if v == start {
            break;
        }
    }
    rev_edges.reverse();
    let cycle: Vec<Vertex> = rev_edges.iter().map(|e| e.from).collect();
    InfeasibilityWitness {
        names: cycle.iter().map(|&v| gcg.name(v).to_string()).collect(),
        weight: rev_edges.iter().map(|e| e.weight).sum(),
        cycle,
        edges: rev_edges,
    }
}

/// Solves the constraint system. The earliest solution is the longest path
/// from the origin; the latest is anchored to the latency bounds when any
/// exist, else to the earliest makespan. A positive cycle makes the system
/// infeasible and is returned as the witness.
pub fn check_feasibility(gcg: &Gcg) -> Result<TimingSolution, InfeasibilityWitness> {
    let n = gcg.vertex_count();
    let origin = gcg.origin();
    let edges = all_edges(gcg);

    let mut asap = vec![UNREACHED; n];
    asap[origin.index()] = 0;
    if let Relaxed::Cycle { pred, at } = longest_paths(n, &edges, &mut asap, false) {
        return Err(extract_cycle(gcg, &edges, &pred, at));
    }

    let makespan = asap.iter().copied().max().unwrap_or(0);
    let deadline = gcg
        .latency
        .iter()
        .map(|l| asap[l.from.index()] + l.cycles)
        .fold(makespan, i64::max);

    // slack[v] = deadline - alap[v]; longest paths on the reversed graph
    // starting from slack 0 everywhere and `deadline` at the origin.
    let mut slack = vec![0; n];
    slack[origin.index()] = deadline;
    let relaxed = longest_paths(n, &edges, &mut slack, true);
    debug_assert!(matches!(relaxed, Relaxed::Converged));
    let alap: Vec<i64> = slack.iter().map(|s| deadline - s).collect();
    debug_assert!(asap.iter().zip(&alap).all(|(a, l)| a <= l));

    Ok(TimingSolution {
        asap,
        alap,
        deadline,
    })
}

/// `alap - asap` per vertex.
pub fn compute_mobility(ts: &TimingSolution) -> Vec<i64> {
    ts.asap.iter().zip(&ts.alap).map(|(a, l)| l - a).collect()
}
