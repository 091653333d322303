// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use super::{BankId, MemoryMapping};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum McgVertex {
    /// No previous access on the port.
    Idle,
    Data { name: String, address: u32 },
}

impl McgVertex {
    fn address(&self) -> Option<u32> {
        match self {
            McgVertex::Idle => None,
            McgVertex::Data { address, .. } => Some(*address),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct McgEdge {
    pub from: usize,
    pub to: usize,
    pub weight: u32,
}

/// Memory constraint graph of one bank: vertex 0 is the idle pole, the
/// others are the bank's data by ascending address. Every ordered pair of
/// distinct vertices, and every datum with itself, is joined by an edge
/// whose weight is the port occupancy of the second access.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mcg {
    pub bank: BankId,
    pub w_seq: u32,
    pub w_rand: u32,
    pub vertices: Vec<McgVertex>,
    pub edges: Vec<McgEdge>,
}

impl Mcg {
    /// Occupancy of an access at `to` right after an access at `from`
    /// (`None` meaning the idle pole).
    pub fn weight_between(&self, from: Option<u32>, to: u32) -> u32 {
        match from {
            Some(a) if a.checked_add(1) == Some(to) => self.w_seq,
            _ => self.w_rand,
        }
    }

    pub fn vertex(&self, data: &str) -> Option<usize> {
        self.vertices
            .iter()
            .position(|v| matches!(v, McgVertex::Data { name, .. } if name == data))
    }

    pub fn address(&self, data: &str) -> Option<u32> {
        self.vertex(data).and_then(|i| self.vertices[i].address())
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<u32> {
        self.edges
            .iter()
            .find(|e| e.from == from && e.to == to)
            .map(|e| e.weight)
    }

    /// Weight between two data by name; `None` for `from` is the idle pole.
    pub fn weight_by_name(&self, from: Option<&str>, to: &str) -> Option<u32> {
        let f = match from {
            Some(d) => self.vertex(d)?,
            None => 0,
        };
        self.weight(f, self.vertex(to)?)
    }
}

/// Panics if `bank` is not a bank of `mapping`.
pub fn build_mcg(mapping: &MemoryMapping, bank: BankId) -> Mcg {
    let b = mapping.bank(bank);
    let mut vertices = vec![McgVertex::Idle];
    vertices.extend(mapping.data_in(bank).into_iter().map(|(d, a)| McgVertex::Data {
        name: d.to_string(),
        address: a,
    }));
    let mut mcg = Mcg {
        bank,
        w_seq: b.w_seq,
        w_rand: b.w_rand,
        vertices,
        edges: Vec::new(),
    };
    let n = mcg.vertices.len();
    for from in 0..n {
        for to in 1..n {
            let weight = mcg.weight_between(mcg.vertices[from].address(), mcg.vertices[to].address().unwrap());
            mcg.edges.push(McgEdge { from, to, weight });
        }
        if from > 0 {
            mcg.edges.push(McgEdge {
                from,
                to: 0,
                weight: mcg.w_rand,
            });
        }
    }
    mcg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::gen_toy;
    use crate::memory::{extract_memory_table, parse_mapping};

    fn toy_mcg() -> Mcg {
        let t = extract_memory_table(&gen_toy());
        let m = parse_mapping("bank bank0 ports 1 wseq 1 wrand 2\nplace v1 bank0 0\nplace v2 bank0 1\nplace v3 bank0 2\nplace v4 bank0 3", &t).unwrap();
        build_mcg(&m, BankId(0))
    }

    #[test]
    fn burst_chain_is_cheaper() {
        let g = toy_mcg();
        assert_eq!(g.weight_by_name(Some("v1"), "v2"), Some(1));
        assert_eq!(g.weight_by_name(Some("v2"), "v1"), Some(2));
        assert_eq!(g.weight_by_name(Some("v2"), "v3"), Some(1));
        assert_eq!(g.weight_by_name(Some("v2"), "v4"), Some(2));
        assert_eq!(g.weight_by_name(None, "v1"), Some(2));
        assert_eq!(g.vertices.len(), 5);
        assert_eq!(g.edges.len(), 5 * 5 - 1);
    }

    #[test]
    fn single_datum_bank() {
        let t = extract_memory_table(&gen_toy());
        let m = parse_mapping("bank b\nplace v3 b 7", &t).unwrap();
        let g = build_mcg(&m, BankId(0));
        assert_eq!(g.vertices.len(), 2);
        let mut pairs: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.from, e.to)).collect();
        pairs.sort();
        assert_eq!(pairs, vec![(0, 1), (1, 0), (1, 1)]);
        assert!(g.edges.iter().all(|e| e.weight == 2));
    }

    #[test]
    fn adjacency_rule_is_exhaustive() {
        let g = toy_mcg();
        for e in &g.edges {
            let seq = match (g.vertices[e.from].address(), g.vertices[e.to].address()) {
                (Some(a), Some(b)) => b == a + 1,
                _ => false,
            };
            assert_eq!(e.weight == g.w_seq, seq, "{e:?}");
        }
    }
}
