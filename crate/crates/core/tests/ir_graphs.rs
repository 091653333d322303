// SPDX-FileCopyrightText: Copyright (c) 2026 The hls-forge Authors
// SPDX-License-Identifier: Apache-2.0

mod common;

use hls_forge::ir::{
    gen_fft, gen_fft_with, gen_toy, parse_sfg, render_sfg, twiddle_value, validate_sfg, FftOptions, NodeKind, OpKind,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

/// Direct O(n^2) transform of a real sequence.
fn dft(x: &[f64]) -> Vec<(f64, f64)> {
    let n = x.len() as f64;
    (0..x.len())
        .map(|k| {
            x.iter().enumerate().fold((0.0, 0.0), |(re, im), (t, &v)| {
                let a = -2.0 * std::f64::consts::PI * (k * t) as f64 / n;
                (re + v * a.cos(), im + v * a.sin())
            })
        })
        .collect()
}

fn check_against_dft(n: u32, fold: bool) {
    let g = gen_fft_with(n, FftOptions { fold_trivial_twiddles: fold }).unwrap();
    let x: Vec<f64> = (0..n).map(|k| (f64::from(k) * 0.7).sin() + 0.25 * f64::from(k % 3)).collect();
    let values = g
        .evaluate(|node| match node.kind {
            NodeKind::Input => x[node.name.strip_prefix("Xr_").unwrap().parse::<usize>().unwrap()],
            _ => twiddle_value(&node.name, n).unwrap(),
        })
        .unwrap();
    let at = |name: String| values[g.find(&name).unwrap().index()];
    for (k, (re, im)) in dft(&x).into_iter().enumerate() {
        assert!((at(format!("Yr_{k}")) - re).abs() < 1e-9, "n={n} fold={fold} Yr_{k}");
        assert!((at(format!("Yi_{k}")) - im).abs() < 1e-9, "n={n} fold={fold} Yi_{k}");
    }
}

#[test]
fn fft_matches_direct_transform() {
    for n in [2, 4, 8, 16, 32, 64] {
        check_against_dft(n, false);
        check_against_dft(n, true);
    }
}

#[test]
fn fft_four_point_shape() {
    let g = gen_fft(4).unwrap();
    // Two stages of two butterflies; each butterfly is 4 mul, 3 add, 3 sub.
    assert_eq!(g.count_ops(OpKind::Mul), 16);
    assert_eq!(g.count_ops(OpKind::Add), 12);
    assert_eq!(g.count_ops(OpKind::Sub), 12);
    assert_eq!(g.inputs().len(), 4);
    assert_eq!(g.outputs().len(), 8);
}

#[test]
fn fft_sizes_are_well_formed() {
    let mut n = 2;
    while n <= 128 {
        let g = gen_fft(n).unwrap();
        let butterflies = (n / 2 * n.trailing_zeros()) as usize;
        assert!(validate_sfg(&g).is_empty(), "n={n}");
        assert_eq!(g.count_ops(OpKind::Mul), 4 * butterflies);
        assert_eq!(g.count_ops(OpKind::Add), 3 * butterflies);
        assert_eq!(g.count_ops(OpKind::Sub), 3 * butterflies);
        let twiddles = g.nodes().iter().filter(|x| x.kind == NodeKind::MemData).count();
        assert_eq!(twiddles, n as usize);

        let folded = gen_fft_with(n, FftOptions { fold_trivial_twiddles: true }).unwrap();
        assert!(validate_sfg(&folded).is_empty(), "folded n={n}");
        assert!(folded.count_ops(OpKind::Mul) < g.count_ops(OpKind::Mul) || n == 2);
        n *= 2;
    }
}

#[test]
fn invalid_fft_lengths() {
    for n in [0, 1, 3, 6, 12, 100] {
        assert!(gen_fft(n).is_err(), "n={n}");
    }
}

#[test]
fn toy_round_trips_through_text() {
    let g = gen_toy();
    assert_eq!(parse_sfg(&render_sfg(&g)).unwrap(), g);
}

#[test]
fn parse_rejects_malformed_graphs() {
    assert!(parse_sfg("input a\nop u add u a\noutput y u").is_err());
    assert!(parse_sfg("input a\ninput a").is_err());
    assert!(parse_sfg("input a\noutput y nowhere").is_err());
    assert!(parse_sfg("input a\nfrobnicate a").is_err());
    assert_eq!(parse_sfg("").unwrap().len(), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_parse_round_trip(seed in any::<u64>()) {
        let inst = common::random_instance(&mut StdRng::seed_from_u64(seed), 8, 4);
        let text = render_sfg(&inst.sfg);
        let back = parse_sfg(&text).unwrap();
        prop_assert_eq!(&back, &inst.sfg);
        prop_assert_eq!(render_sfg(&back), text);
        prop_assert!(validate_sfg(&back).is_empty());
    }
}
