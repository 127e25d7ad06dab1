// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use crate::homodyne::{section_of, HomodynePovm, QuadratureDataset};

/// Histogram of a dataset over the outcomes of a [`HomodynePovm`].
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedCounts {
    /// `counts[p][b]`
    pub counts: Vec<Vec<u64>>,
    /// Samples whose `x` fell outside the bin edges.
    pub dropped: u64,
}

impl BinnedCounts {
    pub fn phase_sections(&self) -> usize {
        self.counts.len()
    }

    pub fn bins(&self) -> usize {
        self.counts.first().map_or(0, Vec::len)
    }

    /// Counts inside the edges.
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Row-major flattening, outcome `j = p * B + b`.
    pub fn flat(&self) -> Vec<u64> {
        self.counts.iter().flatten().copied().collect()
    }

    pub fn section_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }
}

pub fn bin_dataset(ds: &QuadratureDataset, povm: &HomodynePovm) -> BinnedCounts {
    let sections = povm.phase_sections();
    let mut counts = vec![vec![0u64; povm.bins()]; sections];
    let mut dropped = 0;
    for s in &ds.samples {
        let p = section_of(s.theta, sections);
        match povm.bin_of(s.x) {
            Some(b) => counts[p][b] += 1,
            None => dropped += 1,
        }
    }
    BinnedCounts { counts, dropped }
}
