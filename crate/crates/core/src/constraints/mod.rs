// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Timing constraint graphs.
//!
//! The algorithmic graph ([`Acg`]) carries data dependencies weighted by
//! producer latency. The I/O constraint graph ([`Iocg`]) carries what the
//! surrounding system imposes on transfers. Their merge ([`Gcg`]) is a system
//! of difference constraints `t_to >= t_from + weight`, solved by longest
//! paths from the frame origin.

mod acg;
mod gcg;
mod iocg;
mod solver;

pub use acg::{build_acg, Acg, AcgEdge, AcgVertex};
pub use gcg::{merge_gcg, ConstraintKind, EdgeOrigin, Gcg, GcgEdge, LatencyConstraint, MergeError};
pub use iocg::{parse_io_spec, Direction, IoEvent, IoSpecError, Iocg, LatencyBound, Relation, RelationKind};
pub use solver::{check_feasibility, compute_mobility, InfeasibilityWitness, TimingSolution};

use serde::{Deserialize, Serialize};

/// A vertex of a constraint graph: SFG node ids map one-to-one onto
/// vertices `0..n`, and vertex `n` is the frame origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vertex(pub u32);

impl Vertex {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<crate::ir::NodeId> for Vertex {
    fn from(id: crate::ir::NodeId) -> Self {
        Vertex(id.0)
    }
}
