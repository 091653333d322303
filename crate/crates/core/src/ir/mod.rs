// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Signal flow graph representation.
//!
//! An [`Sfg`] is a pure dataflow DAG: inputs, outputs, constants and
//! memory-resident data feed binary arithmetic operations. Node ids are
//! dense and double as indices into the node vector.

mod gen;
mod library;
mod parse;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use gen::{gen_fft, gen_fft_with, gen_toy, twiddle_value, FftError, FftOptions};
pub use library::{LibraryError, OperatorLibrary};
pub use parse::{parse_sfg, render_sfg, SfgParseError};
pub use validate::{validate_sfg, Diagnostic, DiagnosticKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpKind {
    Add,
    Sub,
    Mul,
}

impl OpKind {
    pub const ALL: [OpKind; 3] = [OpKind::Add, OpKind::Sub, OpKind::Mul];

    pub fn mnemonic(self) -> &'static str {
        match self {
            OpKind::Add => "add",
            OpKind::Sub => "sub",
            OpKind::Mul => "mul",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<OpKind> {
        match s {
            "add" => Some(OpKind::Add),
            "sub" => Some(OpKind::Sub),
            "mul" => Some(OpKind::Mul),
            _ => None,
        }
    }

    pub fn apply(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            OpKind::Add => lhs + rhs,
            OpKind::Sub => lhs - rhs,
            OpKind::Mul => lhs * rhs,
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Input,
    Output,
    Const(i64),
    MemData,
    Op(OpKind),
}

impl NodeKind {
    pub fn is_source(self) -> bool {
        matches!(self, NodeKind::Input | NodeKind::Const(_) | NodeKind::MemData)
    }

    pub fn is_io(self) -> bool {
        matches!(self, NodeKind::Input | NodeKind::Output)
    }

    pub fn op_kind(self) -> Option<OpKind> {
        match self {
            NodeKind::Op(k) => Some(k),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    pub name: String,
}

/// A data dependency: `producer`'s value feeds operand slot `operand` of `consumer`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub producer: NodeId,
    pub consumer: NodeId,
    pub operand: u8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sfg {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    // Adjacency caches, indexed by node id. Only populated for endpoints in range.
    fanin: Vec<Vec<usize>>,
    fanout: Vec<Vec<usize>>,
}

impl Sfg {
    /// Builds a graph from raw parts without checking any invariant.
    /// Use [`validate_sfg`] to inspect the result.
    pub fn from_parts(nodes: Vec<Node>, edges: Vec<Edge>) -> Sfg {
        let n = nodes.len();
        let mut fanin = vec![Vec::new(); n];
        let mut fanout = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            if e.consumer.index() < n {
                fanin[e.consumer.index()].push(i);
            }
            if e.producer.index() < n {
                fanout[e.producer.index()].push(i);
            }
        }
        for list in &mut fanin {
            list.sort_by_key(|&i| edges[i].operand);
        }
        Sfg {
            nodes,
            edges,
            fanin,
            fanout,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn find(&self, name: &str) -> Option<NodeId> {
        self.nodes.iter().find(|n| n.name == name).map(|n| n.id)
    }

    /// Incoming edges of `id`, ordered by operand position.
    pub fn fanin(&self, id: NodeId) -> impl Iterator<Item = &Edge> + '_ {
        self.fanin[id.index()].iter().map(move |&i| &self.edges[i])
    }

    pub fn fanout(&self, id: NodeId) -> impl Iterator<Item = &Edge> + '_ {
        self.fanout[id.index()].iter().map(move |&i| &self.edges[i])
    }

    /// Producers feeding `id`, ordered by operand position.
    pub fn operands(&self, id: NodeId) -> Vec<NodeId> {
        self.fanin(id).map(|e| e.producer).collect()
    }

    pub fn ops(&self) -> impl Iterator<Item = (&Node, OpKind)> + '_ {
        self.nodes
            .iter()
            .filter_map(|n| n.kind.op_kind().map(|k| (n, k)))
    }

    pub fn of_kind(&self, pred: impl Fn(NodeKind) -> bool) -> Vec<NodeId> {
        self.nodes
            .iter()
            .filter(|n| pred(n.kind))
            .map(|n| n.id)
            .collect()
    }

    pub fn inputs(&self) -> Vec<NodeId> {
        self.of_kind(|k| k == NodeKind::Input)
    }

    pub fn outputs(&self) -> Vec<NodeId> {
        self.of_kind(|k| k == NodeKind::Output)
    }

    pub fn count_ops(&self, kind: OpKind) -> usize {
        self.ops().filter(|(_, k)| *k == kind).count()
    }

    /// Kahn topological order, or `None` when the graph has a cycle.
    pub fn topo_order(&self) -> Option<Vec<NodeId>> {
        let n = self.nodes.len();
        let mut indeg: Vec<usize> = (0..n).map(|i| self.fanin[i].len()).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(NodeId(v as u32));
            for &ei in &self.fanout[v] {
                let c = self.edges[ei].consumer.index();
                if c < n {
                    indeg[c] -= 1;
                    if indeg[c] == 0 {
                        ready.insert(c);
                    }
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Evaluates the graph numerically. `source` supplies values for inputs
    /// and memory data; constants evaluate to their literal. Returns one value
    /// per node, or `None` for a cyclic graph.
    pub fn evaluate(&self, mut source: impl FnMut(&Node) -> f64) -> Option<Vec<f64>> {
        let order = self.topo_order()?;
        let mut values = vec![0.0; self.nodes.len()];
        for id in order {
            let node = self.node(id);
            let operands = self.operands(id);
            values[id.index()] = match node.kind {
                NodeKind::Input | NodeKind::MemData => source(node),
                NodeKind::Const(v) => v as f64,
                NodeKind::Output => operands.first().map_or(0.0, |p| values[p.index()]),
                NodeKind::Op(k) => {
                    let a = operands.first().map_or(0.0, |p| values[p.index()]);
                    let b = operands.get(1).map_or(0.0, |p| values[p.index()]);
                    k.apply(a, b)
                }
            };
        }
        Some(values)
    }
}

/// Incremental constructor used by the parser and generators.
#[derive(Debug, Default)]
pub struct SfgBuilder {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

impl SfgBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, kind: NodeKind, name: impl Into<String>) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node {
            id,
            kind,
            name: name.into(),
        });
        id
    }

    pub fn input(&mut self, name: impl Into<String>) -> NodeId {
        self.node(NodeKind::Input, name)
    }

    pub fn mem(&mut self, name: impl Into<String>) -> NodeId {
        self.node(NodeKind::MemData, name)
    }

    pub fn constant(&mut self, name: impl Into<String>, value: i64) -> NodeId {
        self.node(NodeKind::Const(value), name)
    }

    pub fn op(&mut self, name: impl Into<String>, kind: OpKind, lhs: NodeId, rhs: NodeId) -> NodeId {
        let id = self.node(NodeKind::Op(kind), name);
        self.edge(lhs, id, 0);
        self.edge(rhs, id, 1);
        id
    }

    pub fn output(&mut self, name: impl Into<String>, src: NodeId) -> NodeId {
        let id = self.node(NodeKind::Output, name);
        self.edge(src, id, 0);
        id
    }

    pub fn edge(&mut self, producer: NodeId, consumer: NodeId, operand: u8) {
        self.edges.push(Edge {
            producer,
            consumer,
            operand,
        });
    }

    pub fn build(self) -> Sfg {
        Sfg::from_parts(self.nodes, self.edges)
    }
}
