// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Line-oriented SFG text format.
//!
//! ```text
//! input a
//! mem v1
//! const zero 0
//! op m1 mul a v1
//! output c m1
//! ```
//!
//! Operands may reference names declared later in the file.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::validate::{validate_sfg, DiagnosticKind};
use super::{NodeId, NodeKind, OpKind, Sfg, SfgBuilder};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SfgParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: duplicate node name `{name}` (first declared on line {first})")]
    DuplicateName {
        name: String,
        line: usize,
        first: usize,
    },
    #[error("line {line}: `{node}` references undeclared node `{name}`")]
    UnknownReference {
        node: String,
        name: String,
        line: usize,
    },
    #[error("dependency cycle through {}", .nodes.join(", "))]
    Cycle { nodes: Vec<String> },
    #[error("line {line}: `{node}` takes {expected} operand(s), found {found}")]
    Arity {
        node: String,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid graph: {0}")]
    Structure(String),
}

struct Decl<'a> {
    line: usize,
    kind: NodeKind,
    name: &'a str,
    operands: Vec<(&'a str, usize)>,
}

fn column_of(line: &str, token: &str) -> usize {
    // Tokens are subslices of `line`.
    token.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

pub fn parse_sfg(text: &str) -> Result<Sfg, SfgParseError> {
    let mut decls: Vec<Decl<'_>> = Vec::new();
    let mut names: HashMap<&str, usize> = HashMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        let Some(&keyword) = toks.first() else {
            continue;
        };
        let syntax = |tok: &str, message: String| SfgParseError::Syntax {
            line: lineno,
            column: column_of(raw, tok),
            message,
        };
        let Some(&name) = toks.get(1) else {
            return Err(syntax(keyword, format!("`{keyword}` needs a node name")));
        };
        if !valid_name(name) {
            return Err(syntax(name, format!("invalid node name `{name}`")));
        }
        let (kind, operand_toks, expected): (NodeKind, &[&str], usize) = match keyword {
            "input" => (NodeKind::Input, &toks[2..], 0),
            "mem" => (NodeKind::MemData, &toks[2..], 0),
            "output" => (NodeKind::Output, &toks[2..], 1),
            "const" => {
                let Some(&lit) = toks.get(2) else {
                    return Err(syntax(name, format!("constant `{name}` needs a value")));
                };
                let value: i64 = lit
                    .parse()
                    .map_err(|_| syntax(lit, format!("invalid integer literal `{lit}`")))?;
                if let Some(&extra) = toks.get(3) {
                    return Err(syntax(extra, format!("unexpected token `{extra}`")));
                }
                (NodeKind::Const(value), &[][..], 0)
            }
            "op" => {
                let Some(&mnemonic) = toks.get(2) else {
                    return Err(syntax(name, format!("operation `{name}` needs an operator")));
                };
                let Some(k) = OpKind::from_mnemonic(mnemonic) else {
                    return Err(syntax(mnemonic, format!("unknown operator `{mnemonic}`")));
                };
                (NodeKind::Op(k), &toks[3..], 2)
            }
            other => return Err(syntax(other, format!("unknown declaration `{other}`"))),
        };
        if operand_toks.len() != expected {
            return Err(SfgParseError::Arity {
                node: name.to_string(),
                line: lineno,
                expected,
                found: operand_toks.len(),
            });
        }
        for &tok in operand_toks {
            if !valid_name(tok) {
                return Err(syntax(tok, format!("invalid operand name `{tok}`")));
            }
        }
        if let Some(&first) = names.get(name) {
            return Err(SfgParseError::DuplicateName {
                name: name.to_string(),
                line: lineno,
                first: decls[first].line,
            });
        }
        names.insert(name, decls.len());
        decls.push(Decl {
            line: lineno,
            kind,
            name,
            operands: operand_toks.iter().map(|&t| (t, lineno)).collect(),
        });
    }

    let mut b = SfgBuilder::new();
    for d in &decls {
        b.node(d.kind, d.name);
    }
    for (i, d) in decls.iter().enumerate() {
        for (pos, &(operand, line)) in d.operands.iter().enumerate() {
            let Some(&src) = names.get(operand) else {
                return Err(SfgParseError::UnknownReference {
                    node: d.name.to_string(),
                    name: operand.to_string(),
                    line,
                });
            };
            b.edge(NodeId(src as u32), NodeId(i as u32), pos as u8);
        }
    }
    let sfg = b.build();

    let diags = validate_sfg(&sfg);
    let cyclic: Vec<String> = diags
        .iter()
        .filter(|d| d.kind == DiagnosticKind::Cycle)
        .filter_map(|d| d.node.map(|n| sfg.node(n).name.clone()))
        .collect();
    if !cyclic.is_empty() {
        return Err(SfgParseError::Cycle { nodes: cyclic });
    }
    if let Some(d) = diags.first() {
        return Err(SfgParseError::Structure(d.message.clone()));
    }
    Ok(sfg)
}

/// Canonical text form: one declaration per node in id order.
pub fn render_sfg(sfg: &Sfg) -> String {
    let mut out = String::new();
    for node in sfg.nodes() {
        let operands: Vec<&str> = sfg
            .operands(node.id)
            .iter()
            .map(|p| sfg.node(*p).name.as_str())
            .collect();
        let _ = match node.kind {
            NodeKind::Input => writeln!(out, "input {}", node.name),
            NodeKind::MemData => writeln!(out, "mem {}", node.name),
            NodeKind::Const(v) => writeln!(out, "const {} {v}", node.name),
            NodeKind::Output => writeln!(out, "output {} {}", node.name, operands.join(" ")),
            NodeKind::Op(k) => writeln!(out, "op {} {k} {}", node.name, operands.join(" ")),
        };
    }
    out
}
