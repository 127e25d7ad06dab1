// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! Plain-text file formats: a `#` header line carrying metadata, then one
//! comma-separated record per line. Floats are written in Rust's shortest
//! round-trip form, so reading a file back gives bit-identical values.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, ProcessTensor, WignerGrid};
use crate::homodyne::{build_povm, uniform_edges, HomodynePovm, QuadratureDataset, QuadratureSample};
use crate::linalg::CMatrix;
use crate::mle::MleConfig;

const TENSOR_TAG: &str = "process-tensor";
const DENSITY_TAG: &str = "density-matrix";
const DATASET_TAG: &str = "quadrature-dataset";
const MANIFEST_TAG: &str = "manifest";

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn finish(path: &Path, mut w: BufWriter<File>) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

/// Line-numbered reader over a text file.
struct Lines {
    path: String,
    inner: std::io::Lines<BufReader<File>>,
    line: usize,
}

impl Lines {
    fn open(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(Lines { path: path.display().to_string(), inner: BufReader::new(file).lines(), line: 0 })
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { path: self.path.clone(), line: self.line, msg: msg.into() }
    }

    fn next_line(&mut self) -> Result<Option<String>> {
        match self.inner.next() {
            None => Ok(None),
            Some(r) => {
                self.line += 1;
                r.map(Some).map_err(|e| Error::io(&self.path, e))
            }
        }
    }

    /// Reads `# <tag> key=value ...` and returns the key/value pairs.
    fn header(&mut self, tag: &str) -> Result<HashMap<String, String>> {
        let Some(line) = self.next_line()? else {
            return Err(self.err("empty file"));
        };
        let mut words = line.strip_prefix('#').map(str::split_whitespace).ok_or_else(|| self.err(format!("expected `# {tag}` header")))?;
        if words.next() != Some(tag) {
            return Err(self.err(format!("expected `# {tag}` header")));
        }
        let mut out = HashMap::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| self.err(format!("malformed header field `{w}`")))?;
            out.insert(k.to_string(), v.to_string());
        }
        Ok(out)
    }

    /// Next non-blank, non-comment record split on commas.
    fn record(&mut self) -> Result<Option<Vec<String>>> {
        while let Some(line) = self.next_line()? {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            return Ok(Some(t.split(',').map(|f| f.trim().to_string()).collect()));
        }
        Ok(None)
    }

    fn expect_fields(&self, rec: &[String], n: usize) -> Result<()> {
        if rec.len() == n {
            Ok(())
        } else {
            Err(self.err(format!("expected {n} fields, found {}", rec.len())))
        }
    }

    fn float(&self, s: &str) -> Result<f64> {
        s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| self.err(format!("invalid number `{s}`")))
    }

    fn index(&self, s: &str, dim: usize) -> Result<usize> {
        s.parse::<usize>().ok().filter(|&i| i < dim).ok_or_else(|| self.err(format!("index `{s}` outside 0..{dim}")))
    }

    fn meta<T: std::str::FromStr>(&self, fields: &HashMap<String, String>, key: &str) -> Result<T> {
        let raw = fields.get(key).ok_or_else(|| self.err(format!("header lacks `{key}=`")))?;
        raw.parse().map_err(|_| self.err(format!("invalid `{key}` value `{raw}`")))
    }
}

pub fn write_tensor(path: impl AsRef<Path>, t: &ProcessTensor) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let d = t.dim();
    let mut body = format!("# {TENSOR_TAG} dim={d}\n");
    for k in 0..d {
        for l in 0..d {
            for m in 0..d {
                for n in 0..d {
                    let z = t.get(k, l, m, n);
                    if z.re != 0.0 || z.im != 0.0 {
                        let _ = writeln!(body, "{k},{l},{m},{n},{},{}", z.re, z.im);
                    }
                }
            }
        }
    }
    w.write_all(body.as_bytes()).map_err(|e| Error::io(path, e))?;
    finish(path, w)
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<ProcessTensor> {
    let mut r = Lines::open(path.as_ref())?;
    let header = r.header(TENSOR_TAG)?;
    let d: usize = r.meta(&header, "dim")?;
    if d == 0 {
        return Err(r.err("dim must be positive"));
    }
    let mut choi = CMatrix::zeros(d * d, d * d);
    while let Some(rec) = r.record()? {
        r.expect_fields(&rec, 6)?;
        let (k, l, m, n) = (r.index(&rec[0], d)?, r.index(&rec[1], d)?, r.index(&rec[2], d)?, r.index(&rec[3], d)?);
        choi[(k * d + m, l * d + n)] = Complex64::new(r.float(&rec[4])?, r.float(&rec[5])?);
    }
    ProcessTensor::from_choi(d, choi)
}

pub fn write_density(path: impl AsRef<Path>, rho: &DensityMatrix) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let d = rho.dim();
    let mut body = format!("# {DENSITY_TAG} dim={d}\n");
    for m in 0..d {
        for n in 0..d {
            let z = rho.get(m, n);
            let _ = writeln!(body, "{m},{n},{},{}", z.re, z.im);
        }
    }
    w.write_all(body.as_bytes()).map_err(|e| Error::io(path, e))?;
    finish(path, w)
}

/// Reads a density matrix and checks its invariants.
pub fn read_density(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    let mut r = Lines::open(path.as_ref())?;
    let header = r.header(DENSITY_TAG)?;
    let d: usize = r.meta(&header, "dim")?;
    if d == 0 {
        return Err(r.err("dim must be positive"));
    }
    let mut m = CMatrix::zeros(d, d);
    while let Some(rec) = r.record()? {
        r.expect_fields(&rec, 4)?;
        let (i, j) = (r.index(&rec[0], d)?, r.index(&rec[1], d)?);
        m[(i, j)] = Complex64::new(r.float(&rec[2])?, r.float(&rec[3])?);
    }
    DensityMatrix::new(m)
}

pub fn write_dataset(path: impl AsRef<Path>, ds: &QuadratureDataset) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let io = |e| Error::io(path, e);
    writeln!(w, "# {DATASET_TAG} alpha_re={} alpha_im={} seed={}", ds.probe_alpha.re, ds.probe_alpha.im, ds.seed).map_err(io)?;
    for s in &ds.samples {
        writeln!(w, "{},{}", s.theta, s.x).map_err(io)?;
    }
    finish(path, w)
}

/// Reads a dataset; an empty sample list is an error.
pub fn read_dataset(path: impl AsRef<Path>) -> Result<QuadratureDataset> {
    let mut r = Lines::open(path.as_ref())?;
    let header = r.header(DATASET_TAG)?;
    let alpha = Complex64::new(r.meta(&header, "alpha_re")?, r.meta(&header, "alpha_im")?);
    let seed: u64 = r.meta(&header, "seed")?;
    let mut samples = Vec::new();
    while let Some(rec) = r.record()? {
        r.expect_fields(&rec, 2)?;
        let theta = r.float(&rec[0])?;
        if !(0.0..std::f64::consts::TAU).contains(&theta) {
            return Err(r.err(format!("phase {theta} outside [0, 2pi)")));
        }
        samples.push(QuadratureSample { theta, x: r.float(&rec[1])? });
    }
    if samples.is_empty() {
        return Err(r.err("dataset has no samples"));
    }
    Ok(QuadratureDataset { samples, probe_alpha: alpha, seed })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub alpha: Complex64,
    /// As written in the manifest; relative paths are taken from the
    /// manifest's directory.
    pub path: PathBuf,
}

/// List of probe datasets. `notes` are free-form `#` lines after the header.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
    pub notes: Vec<String>,
}

impl Manifest {
    /// Entry paths resolved against the directory holding `manifest_path`.
    pub fn resolved(&self, manifest_path: &Path) -> Vec<(Complex64, PathBuf)> {
        let base = manifest_path.parent().unwrap_or(Path::new(""));
        self.entries.iter().map(|e| (e.alpha, base.join(&e.path))).collect()
    }
}

pub fn write_manifest(path: impl AsRef<Path>, manifest: &Manifest) -> Result<()> {
    let path = path.as_ref();
    let mut body = format!("# {MANIFEST_TAG}\n");
    for note in &manifest.notes {
        let _ = writeln!(body, "# {note}");
    }
    for e in &manifest.entries {
        let p = e.path.to_str().ok_or_else(|| Error::InvalidArgument(format!("non-UTF-8 path {}", e.path.display())))?;
        if p.contains(',') || p.contains('\n') {
            return Err(Error::InvalidArgument(format!("manifest paths cannot contain commas or newlines: {p}")));
        }
        let _ = writeln!(body, "{},{},{p}", e.alpha.re, e.alpha.im);
    }
    let mut w = create(path)?;
    w.write_all(body.as_bytes()).map_err(|e| Error::io(path, e))?;
    finish(path, w)
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let mut r = Lines::open(path.as_ref())?;
    r.header(MANIFEST_TAG)?;
    let mut manifest = Manifest::default();
    while let Some(line) = r.next_line()? {
        let t = line.trim();
        if let Some(note) = t.strip_prefix('#') {
            manifest.notes.push(note.trim().to_string());
            continue;
        }
        if t.is_empty() {
            continue;
        }
        let rec: Vec<&str> = t.splitn(3, ',').collect();
        if rec.len() != 3 {
            return Err(r.err("expected `alpha_re,alpha_im,path`"));
        }
        let alpha = Complex64::new(r.float(rec[0].trim())?, r.float(rec[1].trim())?);
        manifest.entries.push(ManifestEntry { alpha, path: PathBuf::from(rec[2].trim()) });
    }
    Ok(manifest)
}

/// `x,y,w` lines with a `# wigner nx=<n> ny=<n>` header, x-major.
pub fn write_wigner(path: impl AsRef<Path>, grid: &WignerGrid) -> Result<()> {
    let path = path.as_ref();
    let mut body = format!("# wigner nx={} ny={}\n", grid.x_axis.len(), grid.y_axis.len());
    for (i, x) in grid.x_axis.iter().enumerate() {
        for (j, y) in grid.y_axis.iter().enumerate() {
            let _ = writeln!(body, "{x},{y},{}", grid.values[i][j]);
        }
    }
    write_text(path, &body)
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Settings shared by the command-line tools, read from `key = value` lines.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub max_iter: usize,
    pub rel_tol: f64,
    /// `None` keeps the per-estimator default (1 for states, 0.5 for processes).
    pub dilution: Option<f64>,
    pub dim_rec: usize,
    pub phase_sections: usize,
    pub x_bins: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = MleConfig::state_default();
        RunConfig {
            max_iter: s.max_iter,
            rel_tol: s.rel_tol,
            dilution: None,
            dim_rec: s.dim,
            phase_sections: 20,
            x_bins: 100,
            x_min: -5.0,
            x_max: 5.0,
            seed: 2024,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses config text; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let line_of = |offset: usize| text[..offset.min(text.len())].matches('\n').count() + 1;
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse {
            path: origin.to_string(),
            line: e.span().map_or(0, |s| line_of(s.start)),
            msg: e.message().to_string(),
        })?;
        let mut cfg = RunConfig::default();
        for (key, value) in &table {
            let bad = |what: &str| {
                let line = text.lines().position(|l| l.trim_start().starts_with(key.as_str())).map_or(0, |i| i + 1);
                Error::Parse { path: origin.to_string(), line, msg: format!("`{key}` must be {what}") }
            };
            let uint = || value.as_integer().and_then(|v| u64::try_from(v).ok()).ok_or_else(|| bad("a non-negative integer"));
            let real = || value.as_float().or_else(|| value.as_integer().map(|v| v as f64)).ok_or_else(|| bad("a number"));
            match key.as_str() {
                "max_iter" => cfg.max_iter = uint()? as usize,
                "rel_tol" => cfg.rel_tol = real()?,
                "dilution" => cfg.dilution = Some(real()?),
                "dim_rec" => cfg.dim_rec = uint()? as usize,
                "phase_sections" => cfg.phase_sections = uint()? as usize,
                "x_bins" => cfg.x_bins = uint()? as usize,
                "x_min" => cfg.x_min = real()?,
                "x_max" => cfg.x_max = real()?,
                "seed" => cfg.seed = uint()?,
                other => return Err(Error::UnknownConfigKey(other.to_string())),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.state_mle().validate()?;
        self.process_mle().validate()?;
        if self.phase_sections == 0 || self.x_bins == 0 || !(self.x_max > self.x_min) {
            return Err(Error::InvalidArgument("need phase_sections >= 1, x_bins >= 1 and x_min < x_max".into()));
        }
        Ok(())
    }

    fn mle(&self, base: MleConfig) -> MleConfig {
        MleConfig {
            max_iter: self.max_iter,
            rel_tol: self.rel_tol,
            dilution: self.dilution.unwrap_or(base.dilution),
            dim: self.dim_rec,
        }
    }

    pub fn state_mle(&self) -> MleConfig {
        self.mle(MleConfig::state_default())
    }

    pub fn process_mle(&self) -> MleConfig {
        self.mle(MleConfig::process_default())
    }

    pub fn x_edges(&self) -> Vec<f64> {
        uniform_edges(self.x_min, self.x_max, self.x_bins)
    }

    pub fn povm(&self) -> Result<HomodynePovm> {
        build_povm(self.phase_sections, &self.x_edges(), self.dim_rec)
    }

    /// `key = value` text that parses back to `self`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "max_iter = {}", self.max_iter);
        let _ = writeln!(s, "rel_tol = {:e}", self.rel_tol);
        if let Some(d) = self.dilution {
            let _ = writeln!(s, "dilution = {d:?}");
        }
        let _ = writeln!(s, "dim_rec = {}", self.dim_rec);
        let _ = writeln!(s, "phase_sections = {}", self.phase_sections);
        let _ = writeln!(s, "x_bins = {}", self.x_bins);
        let _ = writeln!(s, "x_min = {:?}", self.x_min);
        let _ = writeln!(s, "x_max = {:?}", self.x_max);
        let _ = writeln!(s, "seed = {}", self.seed);
        s
    }
}

/// Deletes the files it tracks unless [`OutputGuard::commit`] is called, so
/// an aborted command leaves no partial output behind.
#[derive(Debug, Default)]
pub struct OutputGuard {
    paths: Vec<PathBuf>,
    committed: bool,
}

impl OutputGuard {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `path` for cleanup and hands it back.
    pub fn track(&mut self, path: impl Into<PathBuf>) -> PathBuf {
        let p = path.into();
        self.paths.push(p.clone());
        p
    }

    pub fn commit(mut self) {
        self.committed = true;
    }
}

impl Drop for OutputGuard {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.paths {
                let _ = fs::remove_file(p);
            }
        }
    }
}
