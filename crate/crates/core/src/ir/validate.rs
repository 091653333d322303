// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::fmt;

use super::{NodeId, NodeKind, Sfg};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// Node stored at index `i` does not carry id `i`.
    NonDenseId,
    DanglingEdge,
    DuplicateName,
    /// Operation in-degree is not exactly two.
    Arity { found: usize },
    /// Input, constant or memory datum with incoming edges.
    SourceInDegree { found: usize },
    OutputInDegree { found: usize },
    OutputOutDegree { found: usize },
    DuplicateOperand { operand: u8 },
    Cycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    /// Offending node, when the violation is attached to one.
    pub node: Option<NodeId>,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Checks every structural invariant of `sfg`. Returns one diagnostic per
/// violation, ordered by node id (graph-wide problems sort first).
pub fn validate_sfg(sfg: &Sfg) -> Vec<Diagnostic> {
    let nodes = sfg.nodes();
    let n = nodes.len();
    let mut out = Vec::new();

    for (i, e) in sfg.edges().iter().enumerate() {
        if e.producer.index() >= n || e.consumer.index() >= n {
            out.push(Diagnostic {
                node: None,
                kind: DiagnosticKind::DanglingEdge,
                message: format!(
                    "edge #{i} {} -> {} references a node that does not exist",
                    e.producer, e.consumer
                ),
            });
        }
    }

    let mut seen: HashMap<&str, NodeId> = HashMap::new();
    let mut per_node: Vec<Vec<Diagnostic>> = vec![Vec::new(); n];
    for (i, node) in nodes.iter().enumerate() {
        let diag = &mut per_node[i];
        let name = &node.name;
        if node.id.index() != i {
            diag.push(Diagnostic {
                node: Some(NodeId(i as u32)),
                kind: DiagnosticKind::NonDenseId,
                message: format!("node `{name}` at index {i} carries id {}", node.id.0),
            });
        }
        if let Some(first) = seen.insert(name.as_str(), NodeId(i as u32)) {
            seen.insert(name.as_str(), first);
            diag.push(Diagnostic {
                node: Some(NodeId(i as u32)),
                kind: DiagnosticKind::DuplicateName,
                message: format!("name `{name}` already used by {first}"),
            });
        }
        let id = NodeId(i as u32);
        let indeg = sfg.fanin(id).count();
        let outdeg = sfg.fanout(id).count();
        match node.kind {
            NodeKind::Op(k) => {
                if indeg != 2 {
                    diag.push(Diagnostic {
                        node: Some(id),
                        kind: DiagnosticKind::Arity { found: indeg },
                        message: format!("{k} operation `{name}` has {indeg} operands, expected 2"),
                    });
                }
            }
            NodeKind::Output => {
                if indeg != 1 {
                    diag.push(Diagnostic {
                        node: Some(id),
                        kind: DiagnosticKind::OutputInDegree { found: indeg },
                        message: format!("output `{name}` has in-degree {indeg}, expected 1"),
                    });
                }
                if outdeg != 0 {
                    diag.push(Diagnostic {
                        node: Some(id),
                        kind: DiagnosticKind::OutputOutDegree { found: outdeg },
                        message: format!("output `{name}` has out-degree {outdeg}, expected 0"),
                    });
                }
            }
            NodeKind::Input | NodeKind::Const(_) | NodeKind::MemData => {
                if indeg != 0 {
                    diag.push(Diagnostic {
                        node: Some(id),
                        kind: DiagnosticKind::SourceInDegree { found: indeg },
                        message: format!("source node `{name}` has in-degree {indeg}, expected 0"),
                    });
                }
            }
        }
        let mut slots: Vec<u8> = sfg.fanin(id).map(|e| e.operand).collect();
        slots.sort_unstable();
        if let Some(w) = slots.windows(2).find(|w| w[0] == w[1]) {
            diag.push(Diagnostic {
                node: Some(id),
                kind: DiagnosticKind::DuplicateOperand { operand: w[0] },
                message: format!("node `{name}` has two edges into operand {}", w[0]),
            });
        }
    }

    for id in cyclic_nodes(sfg) {
        per_node[id.index()].push(Diagnostic {
            node: Some(id),
            kind: DiagnosticKind::Cycle,
            message: format!("node `{}` lies on a dependency cycle", sfg.node(id).name),
        });
    }

    out.extend(per_node.into_iter().flatten());
    out
}

/// Nodes that can reach themselves.
pub(crate) fn cyclic_nodes(sfg: &Sfg) -> Vec<NodeId> {
    if sfg.topo_order().is_some() {
        return Vec::new();
    }
    // Quadratic, but only reached on invalid input.
    let n = sfg.len();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            sfg.fanout(NodeId(v as u32))
                .map(|e| e.consumer.index())
                .filter(|&c| c < n)
                .collect()
        })
        .collect();
    let mut on_cycle = Vec::new();
    for start in 0..n {
        let mut stack: Vec<usize> = succ[start].clone();
        let mut visited = vec![false; n];
        while let Some(v) = stack.pop() {
            if v == start {
                on_cycle.push(NodeId(start as u32));
                break;
            }
            if !std::mem::replace(&mut visited[v], true) {
                stack.extend(succ[v].iter().copied());
            }
        }
    }
    on_cycle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{gen_toy, Edge, Node, OpKind, SfgBuilder};

    #[test]
    fn toy_is_valid() {
        assert!(validate_sfg(&gen_toy()).is_empty());
    }

    #[test]
    fn op_with_one_operand() {
        let mut b = SfgBuilder::new();
        let a = b.input("a");
        let m = b.node(NodeKind::Op(OpKind::Add), "m");
        b.edge(a, m, 0);
        b.output("y", m);
        let d = validate_sfg(&b.build());
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::Arity { found: 1 });
        assert_eq!(d[0].node, Some(m));
    }

    #[test]
    fn output_with_consumer() {
        let mut b = SfgBuilder::new();
        let a = b.input("a");
        let y = b.output("y", a);
        let z = b.node(NodeKind::Output, "z");
        b.edge(y, z, 0);
        let d = validate_sfg(&b.build());
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::OutputOutDegree { found: 1 });
        assert_eq!(d[0].node, Some(y));
    }

    #[test]
    fn diagnostics_sorted_by_node() {
        let mut b = SfgBuilder::new();
        let a = b.input("a");
        let x = b.node(NodeKind::Op(OpKind::Mul), "x");
        b.edge(a, x, 0);
        let y = b.node(NodeKind::Output, "y");
        let _ = y;
        let d = validate_sfg(&b.build());
        let ids: Vec<_> = d.iter().map(|d| d.node.unwrap()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn dangling_and_non_dense() {
        let nodes = vec![Node {
            id: NodeId(3),
            kind: NodeKind::Input,
            name: "a".into(),
        }];
        let edges = vec![Edge {
            producer: NodeId(0),
            consumer: NodeId(9),
            operand: 0,
        }];
        let d = validate_sfg(&Sfg::from_parts(nodes, edges));
        assert_eq!(d[0].kind, DiagnosticKind::DanglingEdge);
        assert_eq!(d[1].kind, DiagnosticKind::NonDenseId);
    }

    #[test]
    fn self_loop_is_cycle() {
        let mut b = SfgBuilder::new();
        let a = b.input("a");
        let u = b.node(NodeKind::Op(OpKind::Add), "u");
        b.edge(u, u, 0);
        b.edge(a, u, 1);
        let d = validate_sfg(&b.build());
        assert!(d.iter().any(|d| d.kind == DiagnosticKind::Cycle && d.node == Some(u)));
    }
}
