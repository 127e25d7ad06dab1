// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! `csqpt`: simulate homodyne probe data, reconstruct states and processes,
//! and analyze the results.

mod state_spec;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use csqpt::analysis::{analyze, predict_output_with_wigner, process_fidelity};
use csqpt::experiment::{default_probe_alphas, write_simulation, ExperimentSpec};
use csqpt::fock::{coherent_density, state_fidelity, wigner, ChannelModel, DensityMatrix, WignerGrid};
use csqpt::homodyne::uniform_edges;
use csqpt::io::{self, OutputGuard, RunConfig};
use csqpt::mle::{bin_dataset, process_mle, state_mle};

#[derive(Parser)]
#[command(name = "csqpt", version, about = "Coherent-state process tomography from homodyne data")]
struct Cli {
    /// `key = value` configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long, default_value_t = -2.5, allow_negative_numbers = true)]
    grid_min: f64,
    #[arg(long, default_value_t = 2.5, allow_negative_numbers = true)]
    grid_max: f64,
    #[arg(long, default_value_t = 101)]
    grid_points: usize,
}

impl GridArgs {
    fn axis(&self) -> Result<Vec<f64>> {
        if self.grid_points < 2 || !(self.grid_max > self.grid_min) {
            bail!("Wigner grid needs at least 2 points and grid_min < grid_max");
        }
        Ok(uniform_edges(self.grid_min, self.grid_max, self.grid_points - 1))
    }

    fn evaluate(&self, rho: &DensityMatrix) -> Result<WignerGrid> {
        let axis = self.axis()?;
        Ok(wigner(rho, &axis, &axis)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate probe datasets through a lossy phase channel
    Simulate {
        #[arg(long, default_value_t = 0.62)]
        eta: f64,
        #[arg(long, default_value_t = 0.92, allow_negative_numbers = true)]
        phi: f64,
        /// Comma-separated amplitudes, `re` or `re:im` each [default: 0, 0.1375, ..., 1.1]
        #[arg(long, allow_hyphen_values = true)]
        alphas: Option<String>,
        /// Samples per probe
        #[arg(long, default_value_t = 500_000)]
        samples: usize,
    },
    /// Reconstruct a density matrix from one dataset
    StateTomo {
        dataset: PathBuf,
        /// Also write the Wigner function of the estimate
        #[arg(long)]
        wigner: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Reconstruct a process tensor from the datasets listed in a manifest
    ProcessTomo {
        manifest: PathBuf,
        /// Tensor to compare against; defaults to the loss model fitted to the estimate
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Apply a tensor to `coherent:<re>,<im>`, `fock:<n>` or `super:<c0>,<c1>`
    Predict {
        tensor: PathBuf,
        #[arg(allow_hyphen_values = true)]
        state: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Wigner function of a density-matrix file
    Wigner {
        density: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Fidelity between two density matrices or two process tensors
    Fidelity { a: PathBuf, b: PathBuf },
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))
}

fn simulate(cli: &Cli, cfg: &RunConfig, eta: f64, phi: f64, alphas: Option<&str>, samples: usize) -> Result<()> {
    let probe_alphas = match alphas {
        Some(list) => state_spec::parse_alphas(list)?,
        None => default_probe_alphas(),
    };
    let spec = ExperimentSpec {
        channel: ChannelModel::new(eta, phi)?,
        probe_alphas,
        n_samples: samples,
        phase_sections: cfg.phase_sections,
        mle: cfg.process_mle(),
        seed: cfg.seed,
        output_dir: cli.out.clone(),
    };
    let manifest = write_simulation(&spec)?;
    println!("wrote {} probe datasets, manifest {}", spec.probe_alphas.len(), manifest.display());
    Ok(())
}

fn state_tomo(cli: &Cli, cfg: &RunConfig, dataset: &Path, with_wigner: bool, grid: &GridArgs) -> Result<()> {
    let ds = io::read_dataset(dataset)?;
    let povm = cfg.povm()?;
    let counts = bin_dataset(&ds, &povm);
    let outcome = state_mle(&counts, &povm, &cfg.state_mle())?;
    let rho = &outcome.estimate;
    let target = coherent_density(ds.probe_alpha, cfg.dim_rec)?;
    let w = grid.evaluate(rho)?;
    let (cx, cy) = w.centroid();

    let mut report = String::new();
    let _ = writeln!(report, "dataset={}", dataset.display());
    let _ = writeln!(report, "samples={} dropped={}", ds.len(), counts.dropped);
    let _ = writeln!(report, "iterations={} converged={}", outcome.iterations, outcome.converged);
    let _ = writeln!(report, "log_likelihood={:.12e}", outcome.log_likelihood);
    let _ = writeln!(report, "probe_alpha={},{}", ds.probe_alpha.re, ds.probe_alpha.im);
    let _ = writeln!(report, "fidelity_to_probe={:.12e}", state_fidelity(rho, &target)?);
    let _ = writeln!(report, "mean_photon_number={:.12e}", rho.mean_photon_number());
    let _ = writeln!(report, "wigner_center={cx:.12e},{cy:.12e}");
    let _ = writeln!(report, "wigner_center_distance={:.12e}", cx.hypot(cy));

    ensure_dir(&cli.out)?;
    let mut guard = OutputGuard::new();
    io::write_density(guard.track(cli.out.join("state.csv")), rho)?;
    if with_wigner {
        io::write_wigner(guard.track(cli.out.join("state_wigner.csv")), &w)?;
    }
    io::write_text(guard.track(cli.out.join("state_report.txt")), &report)?;
    guard.commit();
    print!("{report}");
    Ok(())
}

fn process_tomo(cli: &Cli, cfg: &RunConfig, manifest: &Path, reference: Option<&Path>) -> Result<()> {
    let povm = cfg.povm()?;
    let probes = csqpt::experiment::load_probes(manifest, &povm)?;
    let reference = reference.map(io::read_tensor).transpose()?;
    let outcome = process_mle(&probes, &povm, &cfg.process_mle())?;
    let tensor = &outcome.estimate;
    let analysis = analyze(tensor, reference.as_ref())?;
    let inv = tensor.invariants();

    let mut report = String::new();
    let _ = writeln!(report, "[run]");
    let _ = writeln!(report, "manifest={}", manifest.display());
    let _ = writeln!(report, "probes={}", probes.len());
    let _ = writeln!(report, "iterations={} converged={}", outcome.iterations, outcome.converged);
    let _ = writeln!(report, "log_likelihood={:.12e}", outcome.log_likelihood);
    let _ = writeln!(report, "tp_residual={:.3e} min_choi_eigenvalue={:.3e}", inv.tp_residual, inv.min_choi_eigenvalue);
    report.push('\n');
    report.push_str(&analysis.render());

    ensure_dir(&cli.out)?;
    let mut guard = OutputGuard::new();
    io::write_tensor(guard.track(cli.out.join("tensor.csv")), tensor)?;
    io::write_text(guard.track(cli.out.join("process_report.txt")), &report)?;
    guard.commit();
    print!("{report}");
    Ok(())
}

fn predict(cli: &Cli, tensor: &Path, state: &str, grid: &GridArgs) -> Result<()> {
    let t = io::read_tensor(tensor)?;
    let rho = state_spec::parse_state(state, t.dim()).with_context(|| format!("bad input state `{state}`"))?;
    let axis = grid.axis()?;
    let (out, w) = predict_output_with_wigner(&t, &rho, &axis, &axis)?;
    ensure_dir(&cli.out)?;
    let mut guard = OutputGuard::new();
    io::write_density(guard.track(cli.out.join("predicted_state.csv")), &out)?;
    io::write_wigner(guard.track(cli.out.join("predicted_wigner.csv")), &w)?;
    guard.commit();
    let pops: Vec<String> = out.populations().iter().map(|p| format!("{p:.6}")).collect();
    println!("populations={}", pops.join(","));
    Ok(())
}

fn wigner_cmd(cli: &Cli, density: &Path, grid: &GridArgs) -> Result<()> {
    let rho = io::read_density(density)?;
    let w = grid.evaluate(&rho)?;
    ensure_dir(&cli.out)?;
    let mut guard = OutputGuard::new();
    io::write_wigner(guard.track(cli.out.join("wigner.csv")), &w)?;
    guard.commit();
    println!("integral={:.9} min={:.6} max={:.6}", w.integral(), w.min(), w.max());
    Ok(())
}

fn header_of(path: &Path) -> Result<String> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(text.lines().next().unwrap_or_default().to_string())
}

fn fidelity(cli: &Cli, a: &Path, b: &Path) -> Result<()> {
    let (ha, hb) = (header_of(a)?, header_of(b)?);
    let report = if ha.starts_with("# density-matrix") && hb.starts_with("# density-matrix") {
        let (ra, rb) = (io::read_density(a)?, io::read_density(b)?);
        format!("fidelity={:.12e}\n", state_fidelity(&ra, &rb)?)
    } else if ha.starts_with("# process-tensor") && hb.starts_with("# process-tensor") {
        let f = process_fidelity(&io::read_tensor(a)?, &io::read_tensor(b)?)?;
        format!("diagonal={:.12e}\nfull={:.12e}\n", f.diagonal, f.full)
    } else {
        bail!("fidelity needs two density-matrix files or two process-tensor files");
    };
    ensure_dir(&cli.out)?;
    let mut guard = OutputGuard::new();
    io::write_text(guard.track(cli.out.join("fidelity_report.txt")), &report)?;
    guard.commit();
    print!("{report}");
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Command::Simulate { eta, phi, alphas, samples } => simulate(cli, &cfg, *eta, *phi, alphas.as_deref(), *samples),
        Command::StateTomo { dataset, wigner, grid } => state_tomo(cli, &cfg, dataset, *wigner, grid),
        Command::ProcessTomo { manifest, reference } => process_tomo(cli, &cfg, manifest, reference.as_deref()),
        Command::Predict { tensor, state, grid } => predict(cli, tensor, state, grid),
        Command::Wigner { density, grid } => wigner_cmd(cli, density, grid),
        Command::Fidelity { a, b } => fidelity(cli, a, b),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // library errors already embed their source in the message
            let mut msg = e.to_string();
            for cause in e.chain().skip(1) {
                let c = cause.to_string();
                if !msg.contains(&c) {
                    msg = format!("{msg}: {c}");
                }
            }
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
