// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Memory architecture: which data live in which bank, how expensive each
//! access is given the previous one, and per-port occupancy timelines.
//!
//! A port access costs `w_seq` cycles when it hits the address right after
//! the port's previous access and `w_rand` cycles otherwise (including the
//! first access from the idle state).

mod access;
mod mapping;
mod mcg;
mod table;

pub use access::{AccessError, AccessKind, AccessTable, PortTimeline, Probe, Reservation};
pub use mapping::{parse_mapping, Bank, BankId, MappingError, MemoryMapping, Placement};
pub use mcg::{build_mcg, Mcg, McgEdge, McgVertex};
pub use table::{extract_memory_table, MemoryRow, MemoryTable};

pub const DEFAULT_W_SEQ: u32 = 1;
pub const DEFAULT_W_RAND: u32 = 2;
