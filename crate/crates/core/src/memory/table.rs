// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::ir::{NodeId, NodeKind, Sfg};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemoryRow {
    pub data: String,
    pub node: NodeId,
    /// Words occupied; every datum is one word.
    pub size: u32,
    pub readers: Vec<NodeId>,
    pub writers: Vec<NodeId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MemoryTable {
    pub rows: Vec<MemoryRow>,
}

impl MemoryTable {
    pub fn row(&self, data: &str) -> Option<&MemoryRow> {
        self.rows.iter().find(|r| r.data == data)
    }
}

/// One row per memory datum of `sfg`, in node id order.
pub fn extract_memory_table(sfg: &Sfg) -> MemoryTable {
    let rows = sfg
        .nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::MemData)
        .map(|n| {
            let mut readers: Vec<NodeId> = sfg.fanout(n.id).map(|e| e.consumer).collect();
            readers.sort_unstable();
            readers.dedup();
            let mut writers: Vec<NodeId> = sfg.fanin(n.id).map(|e| e.producer).collect();
            writers.sort_unstable();
            writers.dedup();
            MemoryRow {
                data: n.name.clone(),
                node: n.id,
                size: 1,
                readers,
                writers,
            }
        })
        .collect();
    MemoryTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{gen_fft, gen_toy, SfgBuilder};

    #[test]
    fn toy_rows() {
        let g = gen_toy();
        let t = extract_memory_table(&g);
        let names: Vec<&str> = t.rows.iter().map(|r| r.data.as_str()).collect();
        assert_eq!(names, ["v1", "v2", "v3", "v4"]);
        for (row, reader) in t.rows.iter().zip(["m1", "m2", "a1", "a2"]) {
            assert_eq!(row.readers, vec![g.find(reader).unwrap()]);
            assert!(row.writers.is_empty());
        }
    }

    #[test]
    fn fft_rows_are_the_twiddles() {
        let g = gen_fft(8).unwrap();
        let t = extract_memory_table(&g);
        let mut expected: Vec<String> = g
            .nodes()
            .iter()
            .filter(|n| n.name.starts_with("Wr_") || n.name.starts_with("Wi_"))
            .map(|n| n.name.clone())
            .collect();
        let mut got: Vec<String> = t.rows.iter().map(|r| r.data.clone()).collect();
        expected.sort();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 8);
    }

    #[test]
    fn no_memory_data() {
        let mut b = SfgBuilder::new();
        let a = b.input("a");
        b.output("y", a);
        assert!(extract_memory_table(&b.build()).rows.is_empty());
    }
}
