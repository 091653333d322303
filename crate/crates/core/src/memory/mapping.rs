// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Designer-supplied memory mapping.
//!
//! ```text
//! bank bank0 ports 1 wseq 1 wrand 2
//! place v1 bank0 0
//! place v2 bank0 1
//! ```
//!
//! `ports`, `wseq` and `wrand` are optional. Memory data without a `place`
//! line stay in registers.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{MemoryTable, DEFAULT_W_RAND, DEFAULT_W_SEQ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BankId(pub u32);

impl BankId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bank {
    pub name: String,
    pub ports: u32,
    pub w_seq: u32,
    pub w_rand: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub bank: BankId,
    pub address: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryMapping {
    pub banks: Vec<Bank>,
    pub placement: BTreeMap<String, Placement>,
    /// Memory data kept in registers.
    pub unplaced: BTreeSet<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MappingError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: `{data}` is not a memory datum of the graph")]
    UnknownData { data: String, line: usize },
    #[error("line {line}: unknown bank `{bank}`")]
    UnknownBank { bank: String, line: usize },
    #[error("line {line}: bank `{bank}` declared twice")]
    DuplicateBank { bank: String, line: usize },
    #[error("line {line}: `{data}` is placed twice")]
    DuplicatePlacement { data: String, line: usize },
    #[error("line {line}: `{data}` and `{other}` share address {address} of bank `{bank}`")]
    AddressConflict {
        data: String,
        other: String,
        bank: String,
        address: u32,
        line: usize,
    },
    #[error("line {line}: bank `{bank}`: {message}")]
    InvalidBank {
        bank: String,
        line: usize,
        message: String,
    },
}

impl MemoryMapping {
    pub fn bank_id(&self, name: &str) -> Option<BankId> {
        self.banks
            .iter()
            .position(|b| b.name == name)
            .map(|i| BankId(i as u32))
    }

    pub fn bank(&self, id: BankId) -> &Bank {
        &self.banks[id.index()]
    }

    pub fn placement(&self, data: &str) -> Option<Placement> {
        self.placement.get(data).copied()
    }

    /// Data placed in `bank`, by ascending address.
    pub fn data_in(&self, bank: BankId) -> Vec<(&str, u32)> {
        let mut v: Vec<(&str, u32)> = self
            .placement
            .iter()
            .filter(|(_, p)| p.bank == bank)
            .map(|(d, p)| (d.as_str(), p.address))
            .collect();
        v.sort_by_key(|&(d, a)| (a, d));
        v
    }

    /// Builds a mapping programmatically, checking the same rules as the parser.
    pub fn from_parts(
        banks: Vec<Bank>,
        placements: &[(&str, &str, u32)],
        table: &MemoryTable,
    ) -> Result<MemoryMapping, MappingError> {
        let mut text = String::new();
        for b in &banks {
            text.push_str(&format!(
                "bank {} ports {} wseq {} wrand {}\n",
                b.name, b.ports, b.w_seq, b.w_rand
            ));
        }
        for (d, b, a) in placements {
            text.push_str(&format!("place {d} {b} {a}\n"));
        }
        parse_mapping(&text, table)
    }
}

fn syntax(line: usize, message: impl Into<String>) -> MappingError {
    MappingError::Syntax {
        line,
        message: message.into(),
    }
}

pub fn parse_mapping(text: &str, table: &MemoryTable) -> Result<MemoryMapping, MappingError> {
    let mut m = MemoryMapping::default();
    let mut used: BTreeMap<(BankId, u32), String> = BTreeMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("");
        for stmt in body.split(';') {
            let toks: Vec<&str> = stmt.split_whitespace().collect();
            let Some(&keyword) = toks.first() else {
                continue;
            };
            match keyword {
                "bank" => {
                    let Some(&name) = toks.get(1) else {
                        return Err(syntax(line, "expected `bank <id> [ports N] [wseq N] [wrand N]`"));
                    };
                    if m.bank_id(name).is_some() {
                        return Err(MappingError::DuplicateBank {
                            bank: name.to_string(),
                            line,
                        });
                    }
                    let mut bank = Bank {
                        name: name.to_string(),
                        ports: 1,
                        w_seq: DEFAULT_W_SEQ,
                        w_rand: DEFAULT_W_RAND,
                    };
                    let rest = &toks[2..];
                    if !rest.len().is_multiple_of(2) {
                        return Err(syntax(line, "bank attributes come in `key value` pairs"));
                    }
                    for kv in rest.chunks(2) {
                        let value: u32 = kv[1]
                            .parse()
                            .map_err(|_| syntax(line, format!("invalid value `{}`", kv[1])))?;
                        match kv[0] {
                            "ports" => bank.ports = value,
                            "wseq" => bank.w_seq = value,
                            "wrand" => bank.w_rand = value,
                            other => return Err(syntax(line, format!("unknown bank attribute `{other}`"))),
                        }
                    }
                    let invalid = |message: &str| MappingError::InvalidBank {
                        bank: name.to_string(),
                        line,
                        message: message.to_string(),
                    };
                    if bank.ports == 0 {
                        return Err(invalid("needs at least one port"));
                    }
                    if bank.w_seq == 0 {
                        return Err(invalid("wseq must be at least 1"));
                    }
                    if bank.w_seq > bank.w_rand {
                        return Err(invalid("wseq must not exceed wrand"));
                    }
                    m.banks.push(bank);
                }
                "place" => {
                    let [_, data, bank, addr] = toks[..] else {
                        return Err(syntax(line, "expected `place <data> <bank> <address>`"));
                    };
                    let address: u32 = addr
                        .parse()
                        .map_err(|_| syntax(line, format!("invalid address `{addr}`")))?;
                    if table.row(data).is_none() {
                        return Err(MappingError::UnknownData {
                            data: data.to_string(),
                            line,
                        });
                    }
                    let Some(bank_id) = m.bank_id(bank) else {
                        return Err(MappingError::UnknownBank {
                            bank: bank.to_string(),
                            line,
                        });
                    };
                    if m.placement.contains_key(data) {
                        return Err(MappingError::DuplicatePlacement {
                            data: data.to_string(),
                            line,
                        });
                    }
                    if let Some(other) = used.insert((bank_id, address), data.to_string()) {
                        return Err(MappingError::AddressConflict {
                            data: data.to_string(),
                            other,
                            bank: bank.to_string(),
                            address,
                            line,
                        });
                    }
                    m.placement.insert(
                        data.to_string(),
                        Placement {
                            bank: bank_id,
                            address,
                        },
                    );
                }
                other => return Err(syntax(line, format!("unknown statement `{other}`"))),
            }
        }
    }
    m.unplaced = table
        .rows
        .iter()
        .filter(|r| !m.placement.contains_key(&r.data))
        .map(|r| r.data.clone())
        .collect();
    Ok(m)
}
