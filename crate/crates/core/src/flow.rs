// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! End-to-end synthesis: parse, constrain, schedule, validate, report.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arch::{derive_report, emit_gantt, validate_schedule, ArchitectureReport, Violation, REPORT_HEADERS};
use crate::constraints::{
    build_acg, check_feasibility, merge_gcg, parse_io_spec, Gcg, InfeasibilityWitness, IoSpecError, Iocg, MergeError,
};
use crate::ir::{parse_sfg, LibraryError, OperatorLibrary, Sfg, SfgParseError};
use crate::memory::{extract_memory_table, parse_mapping, MappingError, MemoryMapping};
use crate::scheduler::{list_schedule, FailureCause, InfeasibilityReport, Schedule, ScheduleError};

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("signal flow graph: {0}")]
    Sfg(#[from] SfgParseError),
    #[error("I/O constraints: {0}")]
    IoSpec(#[from] IoSpecError),
    #[error("memory mapping: {0}")]
    Mapping(#[from] MappingError),
    #[error("operator library: {0}")]
    Library(#[from] LibraryError),
    #[error("constraint merge: {0}")]
    Merge(#[from] MergeError),
    #[error("schedule failed validation:\n{}", .0.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Violation>),
}

/// Parsed inputs of one synthesis run.
#[derive(Clone, Debug)]
pub struct Design {
    pub sfg: Sfg,
    pub iocg: Iocg,
    pub mapping: MemoryMapping,
    pub lib: OperatorLibrary,
}

impl Design {
    /// `lib_json` of `None` selects unit latencies.
    pub fn parse(sfg: &str, io: &str, mapping: &str, lib_json: Option<&str>) -> Result<Design, FlowError> {
        Design::from_sfg(parse_sfg(sfg)?, io, mapping, lib_json)
    }

    /// As [`Design::parse`] for an already built graph.
    pub fn from_sfg(sfg: Sfg, io: &str, mapping: &str, lib_json: Option<&str>) -> Result<Design, FlowError> {
        let iocg = parse_io_spec(io, &sfg)?;
        let mapping = parse_mapping(mapping, &extract_memory_table(&sfg))?;
        let lib = match lib_json {
            Some(text) => OperatorLibrary::from_json(text)?,
            None => OperatorLibrary::unit(),
        };
        lib.covers(&sfg)?;
        Ok(Design {
            sfg,
            iocg,
            mapping,
            lib,
        })
    }

    /// Optional paths read as empty documents (no constraints, no banks,
    /// unit latencies).
    pub fn load(sfg: &Path, io: Option<&Path>, mapping: Option<&Path>, lib: Option<&Path>) -> Result<Design, FlowError> {
        let sfg = read(sfg)?;
        let io = io.map(read).transpose()?.unwrap_or_default();
        let mapping = mapping.map(read).transpose()?.unwrap_or_default();
        let lib = lib.map(read).transpose()?;
        Design::parse(&sfg, &io, &mapping, lib.as_deref())
    }

    pub fn with_mapping(&self, mapping: MemoryMapping) -> Design {
        Design {
            mapping,
            ..self.clone()
        }
    }

    /// Merged constraint system, latency bounds overridden if asked.
    pub fn gcg(&self, latency: Option<i64>) -> Result<Gcg, FlowError> {
        let iocg = match latency {
            Some(l) => self.iocg.clone().with_latency_override(l, &self.sfg),
            None => self.iocg.clone(),
        };
        Ok(merge_gcg(&build_acg(&self.sfg, &self.lib)?, &iocg)?)
    }
}

pub fn read(path: &Path) -> Result<String, FlowError> {
    fs::read_to_string(path).map_err(|source| FlowError::Read {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SynthOptions {
    /// Replaces every latency bound (or bounds the first input to every
    /// output when none is declared).
    pub latency: Option<i64>,
    pub horizon: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub schedule: Schedule,
    pub report: ArchitectureReport,
}

impl Synthesis {
    pub fn gantt(&self) -> String {
        emit_gantt(&self.schedule)
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Scheduled(Box<Synthesis>),
    /// The constraint system alone has no solution.
    TimingInfeasible(InfeasibilityWitness),
    /// The scheduler gave up.
    ScheduleInfeasible(InfeasibilityReport),
}

/// Process exit status per failure class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitClass {
    Ok = 0,
    InputError = 1,
    Timing = 2,
    MemoryConflict = 3,
}

impl ExitClass {
    pub fn code(self) -> i32 {
        self as i32
    }
}

impl Outcome {
    pub fn class(&self) -> ExitClass {
        match self {
            Outcome::Scheduled(_) => ExitClass::Ok,
            Outcome::TimingInfeasible(_) => ExitClass::Timing,
            Outcome::ScheduleInfeasible(r) => match r.cause {
                FailureCause::Timing => ExitClass::Timing,
                FailureCause::MemoryConflict => ExitClass::MemoryConflict,
            },
        }
    }

    pub fn synthesis(&self) -> Option<&Synthesis> {
        match self {
            Outcome::Scheduled(s) => Some(s),
            _ => None,
        }
    }

    /// One-paragraph explanation of a failure; empty on success.
    pub fn diagnostic(&self) -> String {
        match self {
            Outcome::Scheduled(_) => String::new(),
            Outcome::TimingInfeasible(w) => format!("TIMING: constraints are contradictory, {w}"),
            Outcome::ScheduleInfeasible(r) => r.to_string(),
        }
    }
}

/// Runs the whole flow. A schedule that fails validation is an error, not an
/// outcome.
pub fn synthesize(design: &Design, opts: SynthOptions) -> Result<Outcome, FlowError> {
    let gcg = design.gcg(opts.latency)?;
    let ts = match check_feasibility(&gcg) {
        Ok(ts) => ts,
        Err(w) => return Ok(Outcome::TimingInfeasible(w)),
    };
    let schedule = match list_schedule(&design.sfg, &gcg, &ts, &design.mapping, &design.lib, opts.horizon) {
        Ok(s) => s,
        Err(ScheduleError::Infeasible(r)) => return Ok(Outcome::ScheduleInfeasible(r)),
        Err(ScheduleError::Library(e)) => return Err(e.into()),
    };
    let violations = validate_schedule(&schedule, &design.sfg, &gcg, &design.mapping, &design.lib);
    if !violations.is_empty() {
        return Err(FlowError::Invalid(violations));
    }
    let report = derive_report(&schedule, &design.sfg, &design.mapping, &design.iocg);
    Ok(Outcome::Scheduled(Box::new(Synthesis { schedule, report })))
}

/// Smallest bound in `lo..=hi` for which synthesis succeeds.
pub fn minimize_latency(design: &Design, lo: i64, hi: i64) -> Result<Option<(i64, Synthesis)>, FlowError> {
    for l in lo..=hi {
        if let Outcome::Scheduled(s) = synthesize(
            design,
            SynthOptions {
                latency: Some(l),
                horizon: None,
            },
        )? {
            return Ok(Some((l, *s)));
        }
    }
    Ok(None)
}

/// Writes `report.txt`, `report.json`, `schedule.json` and, if asked,
/// `gantt.txt` into `dir`.
pub fn write_artifacts(s: &Synthesis, dir: &Path, gantt: bool) -> Result<(), FlowError> {
    let write = |name: &str, text: String| {
        let path = dir.join(name);
        fs::write(&path, text).map_err(|source| FlowError::Write { path, source })
    };
    fs::create_dir_all(dir).map_err(|source| FlowError::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    write("report.txt", s.report.to_text())?;
    write("report.json", s.report.to_json() + "\n")?;
    write("schedule.json", s.schedule.to_json() + "\n")?;
    if gantt {
        write("gantt.txt", s.gantt())?;
    }
    Ok(())
}

/// One grid point of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub latency_bound: i64,
    pub mapping: String,
    pub status: String,
    pub report: Option<ArchitectureReport>,
    pub detail: String,
}

pub const SWEEP_HEADERS: [&str; 4] = ["latency_bound", "mapping", "status", "detail"];

/// Synthesizes every (latency, mapping) pair, latency-major. Points run in
/// parallel; failures are recorded in their row.
pub fn sweep(design: &Design, latencies: &[i64], mappings: &[(String, MemoryMapping)]) -> Vec<SweepRow> {
    let grid: Vec<(i64, usize)> = latencies
        .iter()
        .flat_map(|&l| (0..mappings.len()).map(move |m| (l, m)))
        .collect();
    grid.par_iter()
        .map(|&(l, m)| {
            let (label, mapping) = &mappings[m];
            let point = design.with_mapping(mapping.clone());
            let outcome = synthesize(
                &point,
                SynthOptions {
                    latency: Some(l),
                    horizon: None,
                },
            );
            let (status, report, detail) = match outcome {
                Ok(Outcome::Scheduled(s)) => ("ok", Some(s.report), String::new()),
                Ok(o @ Outcome::TimingInfeasible(_)) => ("timing", None, o.diagnostic()),
                Ok(o @ Outcome::ScheduleInfeasible(_)) => {
                    let status = if o.class() == ExitClass::MemoryConflict { "memory" } else { "timing" };
                    (status, None, o.diagnostic())
                }
                Err(e) => ("error", None, e.to_string()),
            };
            SweepRow {
                latency_bound: l,
                mapping: label.clone(),
                status: status.to_string(),
                report,
                detail,
            }
        })
        .collect()
}

/// CSV with the sweep key columns followed by the report columns.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> = SWEEP_HEADERS[..3]
        .iter()
        .chain(REPORT_HEADERS.iter())
        .chain(&SWEEP_HEADERS[3..])
        .copied()
        .collect();
    w.write_record(&header).expect("in-memory write");
    for r in rows {
        let mut rec = vec![r.latency_bound.to_string(), r.mapping.clone(), r.status.clone()];
        match &r.report {
            Some(rep) => rec.extend(rep.values()),
            None => rec.extend(std::iter::repeat_n(String::new(), REPORT_HEADERS.len())),
        }
        rec.push(r.detail.clone());
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{gen_toy, render_sfg};

    const ONE_BANK: &str = "bank bank0 ports 1 wseq 1 wrand 2\nplace v1 bank0 0\nplace v2 bank0 1\nplace v3 bank0 2\nplace v4 bank0 3";
    const TWO_BANKS: &str = "bank bank0\nbank bank1\nplace v1 bank0 0\nplace v3 bank0 1\nplace v2 bank1 0\nplace v4 bank1 1";

    fn design(io: &str, map: &str) -> Design {
        Design::parse(&render_sfg(&gen_toy()), io, map, None).unwrap()
    }

    #[test]
    fn exit_classes() {
        let d = design("bus B0 in a@0 b@1\nbus B0 out c@?\nlatency a c 5", ONE_BANK);
        let o = synthesize(&d, SynthOptions::default()).unwrap();
        assert_eq!(o.class(), ExitClass::Ok);
        assert_eq!(o.synthesis().unwrap().report.latency, 5);

        let d = design("bus B0 in a@0\nbus B1 in b@0\nlatency a c 3", ONE_BANK);
        let o = synthesize(&d, SynthOptions::default()).unwrap();
        assert_eq!(o.class(), ExitClass::MemoryConflict);
        assert!(o.diagnostic().contains("MEMORY_CONFLICT"));

        let d = design("min a c 5\nmax a c 3", ONE_BANK);
        let o = synthesize(&d, SynthOptions::default()).unwrap();
        assert_eq!(o.class(), ExitClass::Timing);
        assert!(o.diagnostic().contains("positive cycle"));
    }

    #[test]
    fn latency_override() {
        let d = design("bus B0 in a@0\nbus B1 in b@0", ONE_BANK);
        let o = synthesize(
            &d,
            SynthOptions {
                latency: Some(3),
                horizon: None,
            },
        )
        .unwrap();
        assert_eq!(o.class(), ExitClass::MemoryConflict);
        let (l, s) = minimize_latency(&d, 1, 8).unwrap().unwrap();
        assert_eq!(l, s.report.latency);
        assert!(l > 3);
    }

    #[test]
    fn toy_sweep() {
        let d = design("bus B0 in a@0\nbus B1 in b@0\nlatency a c 3", ONE_BANK);
        let t = extract_memory_table(&d.sfg);
        let maps = vec![
            ("one".to_string(), parse_mapping(ONE_BANK, &t).unwrap()),
            ("two".to_string(), parse_mapping(TWO_BANKS, &t).unwrap()),
        ];
        let rows = sweep(&d, &[3, 5], &maps);
        assert_eq!(rows.len(), 4);
        let keys: Vec<(i64, &str, &str)> = rows
            .iter()
            .map(|r| (r.latency_bound, r.mapping.as_str(), r.status.as_str()))
            .collect();
        assert_eq!(keys, [(3, "one", "memory"), (3, "two", "ok"), (5, "one", "ok"), (5, "two", "ok")]);
        let csv = sweep_csv(&rows);
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("latency_bound,mapping,status,Memory bank,"));
    }

    #[test]
    fn parse_errors_surface() {
        assert!(matches!(Design::parse("op x frob a b", "", "", None), Err(FlowError::Sfg(_))));
        let sfg = render_sfg(&gen_toy());
        assert!(matches!(Design::parse(&sfg, "bus B in zz@0", "", None), Err(FlowError::IoSpec(_))));
        assert!(matches!(Design::parse(&sfg, "", "place v1 nowhere 0", None), Err(FlowError::Mapping(_))));
        assert!(matches!(Design::parse(&sfg, "", "", Some("{")), Err(FlowError::Library(_))));
    }
}
