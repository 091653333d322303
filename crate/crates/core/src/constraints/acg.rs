// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0

use crate::ir::{LibraryError, NodeId, NodeKind, OperatorLibrary, Sfg};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcgVertex {
    pub name: String,
    pub kind: NodeKind,
}

/// `t_to >= t_from + weight`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AcgEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Acg {
    pub vertices: Vec<AcgVertex>,
    pub edges: Vec<AcgEdge>,
}

impl Acg {
    pub fn edge(&self, from: NodeId, to: NodeId) -> Option<&AcgEdge> {
        self.edges.iter().find(|e| e.from == from && e.to == to)
    }
}

/// One vertex per SFG node; one edge per data dependency weighted by the
/// producer's latency (zero for inputs, constants and memory data).
pub fn build_acg(sfg: &Sfg, lib: &OperatorLibrary) -> Result<Acg, LibraryError> {
    let vertices = sfg
        .nodes()
        .iter()
        .map(|n| AcgVertex {
            name: n.name.clone(),
            kind: n.kind,
        })
        .collect();
    let edges = sfg
        .edges()
        .iter()
        .map(|e| {
            let weight = match sfg.node(e.producer).kind {
                NodeKind::Op(k) => i64::from(lib.latency(k)?),
                _ => 0,
            };
            Ok(AcgEdge {
                from: e.producer,
                to: e.consumer,
                weight,
            })
        })
        .collect::<Result<_, LibraryError>>()?;
    Ok(Acg { vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{gen_toy, OpKind, SfgBuilder};

    fn id(sfg: &Sfg, name: &str) -> NodeId {
        sfg.find(name).unwrap()
    }

    #[test]
    fn unit_latencies() {
        let g = gen_toy();
        let acg = build_acg(&g, &OperatorLibrary::unit()).unwrap();
        assert_eq!(acg.vertices.len(), 12);
        assert_eq!(acg.edges.len(), 11);
        assert_eq!(acg.edge(id(&g, "m1"), id(&g, "a1")).unwrap().weight, 1);
        assert_eq!(acg.edge(id(&g, "v1"), id(&g, "m1")).unwrap().weight, 0);
    }

    #[test]
    fn two_cycle_multiplier() {
        let g = gen_toy();
        let acg = build_acg(&g, &OperatorLibrary::fft_reference()).unwrap();
        assert_eq!(acg.edge(id(&g, "m1"), id(&g, "a1")).unwrap().weight, 2);
        assert_eq!(acg.edge(id(&g, "m2"), id(&g, "a2")).unwrap().weight, 2);
        assert_eq!(acg.edge(id(&g, "a1"), id(&g, "s1")).unwrap().weight, 1);
    }

    #[test]
    fn wire() {
        let mut b = SfgBuilder::new();
        let a = b.input("a");
        b.output("y", a);
        let acg = build_acg(&b.build(), &OperatorLibrary::unit()).unwrap();
        assert_eq!(acg.edges, vec![AcgEdge { from: NodeId(0), to: NodeId(1), weight: 0 }]);
    }

    #[test]
    fn missing_latency() {
        let lib = OperatorLibrary::new(100.0, &[(OpKind::Add, 1)]).unwrap();
        assert!(build_acg(&gen_toy(), &lib).is_err());
    }
}
