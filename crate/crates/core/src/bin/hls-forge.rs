// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hls_forge::flow::{self, Design, ExitClass, FlowError, Outcome, SynthOptions};
use hls_forge::ir::{gen_fft_with, gen_toy, render_sfg, FftOptions};
use hls_forge::memory::{extract_memory_table, parse_mapping};

#[derive(Parser)]
#[command(name = "hls-forge", version, about = "Constraint-driven HLS scheduling for signal flow graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Schedule one design and report its architecture.
    Synth(SynthArgs),
    /// Synthesize a latency x mapping grid into a CSV table.
    Sweep(SweepArgs),
    /// Write a generated signal flow graph.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Args)]
struct Inputs {
    /// Signal flow graph.
    #[arg(long)]
    sfg: PathBuf,
    /// I/O constraint specification.
    #[arg(long)]
    io: Option<PathBuf>,
    /// Operator library (JSON); unit latencies when omitted.
    #[arg(long)]
    lib: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Memory mapping; every datum stays in registers when omitted.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Replace the latency bounds (or bound the first input to every output).
    #[arg(long)]
    latency: Option<i64>,
    /// Last control step the scheduler may use.
    #[arg(long)]
    horizon: Option<i64>,
    /// Print the Gantt trace (and write gantt.txt with --out).
    #[arg(long)]
    gantt: bool,
    /// Print the report as JSON instead of a table.
    #[arg(long)]
    json: bool,
    /// Directory for report and schedule artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    inputs: Inputs,
    /// Comma-separated memory mappings.
    #[arg(long, value_delimiter = ',', required = true)]
    map: Vec<PathBuf>,
    /// Comma-separated latency bounds.
    #[arg(long, value_delimiter = ',', required = true)]
    latency: Vec<i64>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenKind {
    /// The three-input toy graph.
    Toy {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Radix-2 decimation-in-time FFT of size N.
    Fft {
        n: u32,
        /// Elide multiplications by trivial twiddles.
        #[arg(long)]
        fold: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), FlowError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| FlowError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn synth(args: SynthArgs) -> Result<ExitClass, FlowError> {
    let design = Design::load(
        &args.inputs.sfg,
        args.inputs.io.as_deref(),
        args.map.as_deref(),
        args.inputs.lib.as_deref(),
    )?;
    let outcome = flow::synthesize(
        &design,
        SynthOptions {
            latency: args.latency,
            horizon: args.horizon,
        },
    )?;
    match &outcome {
        Outcome::Scheduled(s) => {
            if args.json {
                println!("{}", s.report.to_json());
            } else {
                print!("{}", s.report.to_text());
            }
            if args.gantt {
                print!("\n{}", s.gantt());
            }
            if let Some(dir) = &args.out {
                flow::write_artifacts(s, dir, args.gantt)?;
            }
        }
        failed => eprintln!("{}", failed.diagnostic()),
    }
    Ok(outcome.class())
}

fn sweep(args: SweepArgs) -> Result<ExitClass, FlowError> {
    let design = Design::load(&args.inputs.sfg, args.inputs.io.as_deref(), None, args.inputs.lib.as_deref())?;
    let table = extract_memory_table(&design.sfg);
    let mut mappings = Vec::with_capacity(args.map.len());
    for path in &args.map {
        let mapping = parse_mapping(&flow::read(path)?, &table)?;
        mappings.push((path.display().to_string(), mapping));
    }
    let rows = flow::sweep(&design, &args.latency, &mappings);
    emit(args.csv.as_deref(), &flow::sweep_csv(&rows))?;
    Ok(ExitClass::Ok)
}

fn gen(kind: GenKind) -> Result<ExitClass, String> {
    let (sfg, out) = match kind {
        GenKind::Toy { out } => (gen_toy(), out),
        GenKind::Fft { n, fold, out } => {
            let sfg = gen_fft_with(
                n,
                FftOptions {
                    fold_trivial_twiddles: fold,
                },
            )
            .map_err(|e| e.to_string())?;
            (sfg, out)
        }
    };
    emit(out.as_deref(), &render_sfg(&sfg)).map_err(|e| e.to_string())?;
    Ok(ExitClass::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => synth(a).map_err(|e| e.to_string()),
        Command::Sweep(a) => sweep(a).map_err(|e| e.to_string()),
        Command::Gen { kind } => gen(kind),
    };
    match result {
        Ok(class) => ExitCode::from(class.code() as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(ExitClass::InputError.code() as u8)
        }
    }
}
