// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Per-port access timelines.
//!
//! Cycles are signed: a read feeding an operation that starts at cycle 0
//! may occupy its port before the frame origin.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::{BankId, Mcg, MemoryMapping};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AccessKind {
    Read,
    Write,
}

/// Port busy over `[cycle, cycle + span)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Reservation {
    pub data: String,
    pub address: u32,
    pub cycle: i64,
    pub span: u32,
    pub kind: AccessKind,
}

impl Reservation {
    pub fn end(&self) -> i64 {
        self.cycle + i64::from(self.span)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PortTimeline {
    #[serde(serialize_with = "as_list")]
    reservations: BTreeMap<i64, Reservation>,
    /// Address of the most recent reservation; `None` while idle.
    pub last_access: Option<u32>,
}

fn as_list<S: serde::Serializer>(m: &BTreeMap<i64, Reservation>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.values())
}

impl PortTimeline {
    pub fn reservations(&self) -> impl Iterator<Item = &Reservation> + '_ {
        self.reservations.values()
    }

    /// First reservation intersecting `[start, start + span)`.
    pub fn conflict(&self, start: i64, span: u32) -> Option<&Reservation> {
        let end = start + i64::from(span);
        // Reservations never overlap, so only the last one starting before
        // `end` can reach into the window.
        self.reservations
            .range(..end)
            .next_back()
            .map(|(_, r)| r)
            .filter(|r| r.end() > start)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Probe {
    pub cycle: i64,
    pub span: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AccessError {
    #[error("`{data}` at cycle {cycle} overlaps `{existing}` reserved at cycle {existing_cycle}")]
    Overlap {
        data: String,
        cycle: i64,
        existing: String,
        existing_cycle: i64,
    },
    #[error("`{0}` is not placed in this bank")]
    UnknownData(String),
    #[error("bank {bank:?} has no port {port}")]
    NoSuchPort { bank: BankId, port: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BankTimelines {
    pub bank: String,
    pub ports: Vec<PortTimeline>,
}

/// Access timelines for every port of every bank in a mapping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct AccessTable {
    banks: Vec<BankTimelines>,
}

impl AccessTable {
    pub fn new(mapping: &MemoryMapping) -> AccessTable {
        AccessTable {
            banks: mapping
                .banks
                .iter()
                .map(|b| BankTimelines {
                    bank: b.name.clone(),
                    ports: vec![PortTimeline::default(); b.ports as usize],
                })
                .collect(),
        }
    }

    pub fn port(&self, bank: BankId, port: u32) -> Option<&PortTimeline> {
        self.banks.get(bank.index())?.ports.get(port as usize)
    }

    pub fn banks(&self) -> &[BankTimelines] {
        &self.banks
    }

    fn port_or_err(&self, bank: BankId, port: u32) -> Result<&PortTimeline, AccessError> {
        self.port(bank, port).ok_or(AccessError::NoSuchPort { bank, port })
    }

    /// Earliest cycle at or after `earliest` where `port` of `mcg`'s bank can
    /// serve `data`, with the span implied by the port's last access. Pure.
    pub fn probe_access(&self, mcg: &Mcg, port: u32, data: &str, earliest: i64) -> Result<Probe, AccessError> {
        let address = mcg
            .address(data)
            .ok_or_else(|| AccessError::UnknownData(data.to_string()))?;
        let timeline = self.port_or_err(mcg.bank, port)?;
        let span = mcg.weight_between(timeline.last_access, address);
        let mut cycle = earliest;
        while let Some(r) = timeline.conflict(cycle, span) {
            cycle = r.end();
        }
        Ok(Probe { cycle, span })
    }

    /// Marks `[cycle, cycle + span)` busy on `port` and records `data` as the
    /// port's last access.
    pub fn reserve_access(
        &mut self,
        mcg: &Mcg,
        port: u32,
        data: &str,
        cycle: i64,
        span: u32,
        kind: AccessKind,
    ) -> Result<(), AccessError> {
        let address = mcg
            .address(data)
            .ok_or_else(|| AccessError::UnknownData(data.to_string()))?;
        let timeline = self.port_or_err(mcg.bank, port)?;
        if let Some(r) = timeline.conflict(cycle, span) {
            return Err(AccessError::Overlap {
                data: data.to_string(),
                cycle,
                existing: r.data.clone(),
                existing_cycle: r.cycle,
            });
        }
        let timeline = &mut self.banks[mcg.bank.index()].ports[port as usize];
        timeline.reservations.insert(
            cycle,
            Reservation {
                data: data.to_string(),
                address,
                cycle,
                span,
                kind,
            },
        );
        timeline.last_access = Some(address);
        Ok(())
    }
}
