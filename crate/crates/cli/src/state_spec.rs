// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! Input states written as `coherent:<re>,<im>`, `fock:<n>` or `super:<c0>,<c1>`.

use anyhow::{anyhow, bail, Context, Result};
use csqpt::fock::{coherent_density, DensityMatrix};
use csqpt::Complex64;

fn number(tok: &str) -> Result<f64> {
    let v: f64 = tok.trim().parse().map_err(|_| anyhow!("invalid number `{tok}`"))?;
    if !v.is_finite() {
        bail!("invalid number `{tok}`");
    }
    Ok(v)
}

fn pair(args: &str) -> Result<(f64, f64)> {
    match args.split(',').collect::<Vec<_>>()[..] {
        [a, b] => Ok((number(a)?, number(b)?)),
        _ => bail!("expected two comma-separated numbers, got `{args}`"),
    }
}

pub fn parse_state(spec: &str, dim: usize) -> Result<DensityMatrix> {
    let (kind, args) = spec.split_once(':').ok_or_else(|| anyhow!("state `{spec}` lacks a `kind:` prefix"))?;
    let state = match kind {
        "coherent" => {
            let (re, im) = pair(args)?;
            coherent_density(Complex64::new(re, im), dim)?
        }
        "fock" => {
            let n: usize = args.trim().parse().map_err(|_| anyhow!("invalid photon number `{args}`"))?;
            DensityMatrix::fock(n, dim)?
        }
        "super" => {
            let (c0, c1) = pair(args)?;
            DensityMatrix::superposition(Complex64::new(c0, 0.0), Complex64::new(c1, 0.0), dim)?
        }
        other => bail!("unknown state kind `{other}` (expected coherent, fock or super)"),
    };
    Ok(state)
}

/// Amplitude list such as `0,0.5,0.3:0.1` (`re` or `re:im` per entry).
pub fn parse_alphas(list: &str) -> Result<Vec<Complex64>> {
    list.split(',')
        .map(|tok| {
            let z = match tok.split_once(':') {
                Some((re, im)) => Complex64::new(number(re)?, number(im)?),
                None => Complex64::new(number(tok)?, 0.0),
            };
            Ok(z)
        })
        .collect::<Result<_>>()
        .with_context(|| format!("in amplitude list `{list}`"))
}
