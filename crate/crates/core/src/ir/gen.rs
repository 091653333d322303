// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0
//! Benchmark graph generators.

use thiserror::Error;

use super::{NodeId, OpKind, Sfg, SfgBuilder};

/// `c = (a*v1 + v3) - (b*v2 + v4)` with `v1..v4` memory resident.
pub fn gen_toy() -> Sfg {
    let mut b = SfgBuilder::new();
    let a = b.input("a");
    let bb = b.input("b");
    let v1 = b.mem("v1");
    let v2 = b.mem("v2");
    let v3 = b.mem("v3");
    let v4 = b.mem("v4");
    let m1 = b.op("m1", OpKind::Mul, a, v1);
    let m2 = b.op("m2", OpKind::Mul, bb, v2);
    let a1 = b.op("a1", OpKind::Add, m1, v3);
    let a2 = b.op("a2", OpKind::Add, m2, v4);
    let s1 = b.op("s1", OpKind::Sub, a1, a2);
    b.output("c", s1);
    b.build()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FftError {
    #[error("FFT length {0} is not a power of two")]
    NotPowerOfTwo(u32),
    #[error("FFT length {0} is below the minimum of 2")]
    TooSmall(u32),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FftOptions {
    /// Elide multiplications by `1` and `-j` and arithmetic on known zeros.
    pub fold_trivial_twiddles: bool,
}

/// Radix-2 decimation-in-time FFT over `n` real inputs, unfolded.
pub fn gen_fft(n: u32) -> Result<Sfg, FftError> {
    gen_fft_with(n, FftOptions::default())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Val {
    Zero,
    Node(NodeId),
}

struct FftBuilder {
    b: SfgBuilder,
    fold: bool,
    zero: Option<NodeId>,
    twiddles: Vec<Option<(NodeId, NodeId)>>,
}

impl FftBuilder {
    fn node(&mut self, v: Val) -> NodeId {
        match v {
            Val::Node(id) => id,
            Val::Zero => *self.zero.get_or_insert_with(|| self.b.constant("zero", 0)),
        }
    }

    fn twiddle(&mut self, i: usize) -> (NodeId, NodeId) {
        if let Some(t) = self.twiddles[i] {
            return t;
        }
        let t = (self.b.mem(format!("Wr_{i}")), self.b.mem(format!("Wi_{i}")));
        self.twiddles[i] = Some(t);
        t
    }

    fn arith(&mut self, name: String, kind: OpKind, lhs: Val, rhs: Val) -> Val {
        if self.fold {
            match (kind, lhs, rhs) {
                (OpKind::Mul, Val::Zero, _) | (OpKind::Mul, _, Val::Zero) => return Val::Zero,
                (OpKind::Add | OpKind::Sub, x, Val::Zero) => return x,
                (OpKind::Add, Val::Zero, x) => return x,
                _ => {}
            }
        }
        let l = self.node(lhs);
        let r = self.node(rhs);
        Val::Node(self.b.op(name, kind, l, r))
    }
}

fn bit_reverse(k: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        k.reverse_bits() >> (usize::BITS - bits)
    }
}

pub fn gen_fft_with(n: u32, opts: FftOptions) -> Result<Sfg, FftError> {
    if n < 2 {
        return Err(FftError::TooSmall(n));
    }
    if !n.is_power_of_two() {
        return Err(FftError::NotPowerOfTwo(n));
    }
    let n = n as usize;
    let bits = n.trailing_zeros();
    let mut f = FftBuilder {
        b: SfgBuilder::new(),
        fold: opts.fold_trivial_twiddles,
        zero: None,
        twiddles: vec![None; n / 2],
    };
    let inputs: Vec<NodeId> = (0..n).map(|k| f.b.input(format!("Xr_{k}"))).collect();
    let mut data: Vec<(Val, Val)> = (0..n)
        .map(|k| (Val::Node(inputs[bit_reverse(k, bits)]), Val::Zero))
        .collect();

    for stage in 1..=bits {
        let span = 1usize << stage;
        let half = span / 2;
        for start in (0..n).step_by(span) {
            for j in 0..half {
                let (p, q) = (start + j, start + j + half);
                let tw = j * (n / span);
                let tag = |t: &str| format!("s{stage}_{p}_{q}_{t}");
                let (x0r, x0i) = data[p];
                let (x1r, x1i) = data[q];
                use OpKind::*;
                let (y0, y1) = if f.fold && tw == 0 {
                    // W = 1
                    (
                        (f.arith(tag("y0r"), Add, x0r, x1r), f.arith(tag("y0i"), Add, x0i, x1i)),
                        (f.arith(tag("y1r"), Sub, x0r, x1r), f.arith(tag("y1i"), Sub, x0i, x1i)),
                    )
                } else if f.fold && 4 * tw == n {
                    // W = -j: t = (x1i, -x1r)
                    (
                        (f.arith(tag("y0r"), Add, x0r, x1i), f.arith(tag("y0i"), Sub, x0i, x1r)),
                        (f.arith(tag("y1r"), Sub, x0r, x1i), f.arith(tag("y1i"), Add, x0i, x1r)),
                    )
                } else {
                    let (wr, wi) = f.twiddle(tw);
                    let (wr, wi) = (Val::Node(wr), Val::Node(wi));
                    let rr = f.arith(tag("wr_r"), Mul, wr, x1r);
                    let ii = f.arith(tag("wi_i"), Mul, wi, x1i);
                    let ri = f.arith(tag("wr_i"), Mul, wr, x1i);
                    let ir = f.arith(tag("wi_r"), Mul, wi, x1r);
                    let tr = f.arith(tag("tr"), Sub, rr, ii);
                    let ti = f.arith(tag("ti"), Add, ri, ir);
                    (
                        (f.arith(tag("y0r"), Add, x0r, tr), f.arith(tag("y0i"), Add, x0i, ti)),
                        (f.arith(tag("y1r"), Sub, x0r, tr), f.arith(tag("y1i"), Sub, x0i, ti)),
                    )
                };
                data[p] = y0;
                data[q] = y1;
            }
        }
    }

    for (k, &(re, _)) in data.iter().enumerate() {
        let src = f.node(re);
        f.b.output(format!("Yr_{k}"), src);
    }
    for (k, &(_, im)) in data.iter().enumerate() {
        let src = f.node(im);
        f.b.output(format!("Yi_{k}"), src);
    }
    Ok(f.b.build())
}

/// Twiddle values matching the `Wr_<i>` / `Wi_<i>` memory data of an `n`-point graph.
pub fn twiddle_value(name: &str, n: u32) -> Option<f64> {
    let (part, idx) = name.split_once('_')?;
    let i: f64 = idx.parse::<u32>().ok()?.into();
    let angle = -2.0 * std::f64::consts::PI * i / f64::from(n);
    match part {
        "Wr" => Some(angle.cos()),
        "Wi" => Some(angle.sin()),
        _ => None,
    }
}
