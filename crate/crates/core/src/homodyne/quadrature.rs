// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! Adaptive Gauss-Kronrod (7/15) integration of vector-valued functions.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: usize = 40;

/// Integrates `f: x -> R^len` over `[a, b]` until every component's
/// Kronrod-minus-Gauss error estimate is below `tol` in total.
pub fn integrate_vec<F>(mut f: F, len: usize, a: f64, b: f64, tol: f64) -> Vec<f64>
where
    F: FnMut(f64, &mut [f64]),
{
    let mut out = vec![0.0; len];
    let mut scratch = Scratch { buf: vec![0.0; len], kron: vec![0.0; len], gauss: vec![0.0; len] };
    recurse(&mut f, a, b, tol, 0, &mut out, &mut scratch);
    out
}

/// Scalar convenience wrapper.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    integrate_vec(|x, out| out[0] = f(x), 1, a, b, tol)[0]
}

struct Scratch {
    buf: Vec<f64>,
    kron: Vec<f64>,
    gauss: Vec<f64>,
}

fn recurse<F>(f: &mut F, a: f64, b: f64, tol: f64, depth: usize, out: &mut [f64], s: &mut Scratch)
where
    F: FnMut(f64, &mut [f64]),
{
    let err = rule(f, a, b, s);
    if err <= tol || depth >= MAX_DEPTH {
        for (o, k) in out.iter_mut().zip(&s.kron) {
            *o += k;
        }
        return;
    }
    let mid = 0.5 * (a + b);
    recurse(f, a, mid, 0.5 * tol, depth + 1, out, s);
    recurse(f, mid, b, 0.5 * tol, depth + 1, out, s);
}

/// Fills `s.kron` with the 15-point estimate and returns the max component error.
fn rule<F>(f: &mut F, a: f64, b: f64, s: &mut Scratch) -> f64
where
    F: FnMut(f64, &mut [f64]),
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    s.kron.iter_mut().for_each(|v| *v = 0.0);
    s.gauss.iter_mut().for_each(|v| *v = 0.0);
    for (i, (&x, &wk)) in XGK.iter().zip(&WGK).enumerate() {
        let nodes: &[f64] = if x == 0.0 { &[0.0] } else { &[-1.0, 1.0] };
        for sign in nodes {
            f(center + sign * half * x, &mut s.buf);
            for j in 0..s.buf.len() {
                s.kron[j] += wk * s.buf[j];
                if i % 2 == 1 {
                    s.gauss[j] += WG[i / 2] * s.buf[j];
                }
            }
        }
    }
    let mut err: f64 = 0.0;
    for j in 0..s.kron.len() {
        s.kron[j] *= half;
        s.gauss[j] *= half;
        err = err.max((s.kron[j] - s.gauss[j]).abs());
    }
    err
}
