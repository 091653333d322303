// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Constraint-driven high-level synthesis scheduling for DSP signal flow graphs.
//!
//! The flow mirrors a classic HLS back end: parse the [`ir::Sfg`], derive
//! timing constraints ([`constraints`]), describe the memory architecture
//! ([`memory`]), list-schedule under both ([`scheduler`]), then validate and
//! report the resulting architecture ([`arch`]). [`flow`] wires the stages
//! together for the CLI and the C API.

pub mod arch;
pub mod constraints;
pub mod flow;
pub mod ir;
pub mod memory;
pub mod scheduler;
