//! Command-line front end: every toolkit capability as a subcommand with
//! reproducible seeds and file output.
//!
//! Conventions: CSV and data files go to `--out` (human summaries to
//! stdout, diagnostics to stderr); when `--out` is omitted, default file
//! names are placed in `$SPATIAL_CS_OUTDIR` (or the working directory).
//! Exit codes: 0 success, 2 usage error, 3 numeric/domain error,
//! 4 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spatial_cs::config::{apply_section, load_file, parse_mn_list, parse_mode};
use spatial_cs::experiments::{
    ccdf_csv, derive_trial_seed, mode_name, preset, run_ccdf, run_sweep, ExperimentConfig,
    MethodSpec, Protocol,
};
use spatial_cs::{io, CliError, CliResult};
use spatial_cs_core::bounds::{
    isotropy_check, nonuniform_recovery_mn, uniform_condition_check, uniform_recovery_constant,
    uniform_recovery_mn, ConditionVerdict,
};
use spatial_cs_core::geometry::{
    canonical_grid, sample_positions, ArrayConfig, ArrayMode, PositionDist,
};
use spatial_cs_core::model::{
    build_matrix, fourier_codes, observe, sigma_from_snr, synthesize_scene,
    waveform_roundtrip_check,
};
use spatial_cs_core::pattern_stats::{analytic_stats, array_pattern};
use spatial_cs_core::recovery::{support_error, RecoveryProblem};

#[derive(Parser)]
#[command(
    name = "spatial-cs",
    version,
    about = "Spatial compressive sensing toolkit for MIMO radar DOA estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical angle grid for an integer aperture.
    Grid {
        #[arg(long)]
        z: u32,
        /// Write the grid points as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw random element positions.
    Sample {
        #[command(flatten)]
        array: ArrayArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a measurement matrix (optionally with a scene and snapshots).
    Matrix {
        #[command(flatten)]
        array: ArrayArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep raw column norms instead of unit-normalizing.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also draw a K-sparse scene and write it here.
        #[arg(long, requires = "k")]
        scene_out: Option<PathBuf>,
        /// Also observe noisy snapshots and write them here.
        #[arg(long, requires = "k")]
        snapshots_out: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 20.0)]
        snr: f64,
    },
    /// Analytic pattern moments vs Monte Carlo at chosen arguments.
    PatternStats {
        #[arg(long, default_value_t = 10)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Comma-separated pattern arguments u.
        #[arg(long, default_value = "3.14159265,6.28318531,9.42477796")]
        u: String,
        #[arg(long, default_value_t = 20000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Empirical coherence tail vs the analytic bound, as CSV.
    CoherenceCcdf {
        #[arg(long, default_value_t = 250)]
        z: u32,
        /// Cells to sweep, e.g. 10x10,15x15.
        #[arg(long, default_value = "10x10,15x15,20x20")]
        mn: String,
        #[arg(long, default_value = "independent")]
        mode: String,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 0.8)]
        q_max: f64,
        #[arg(long, default_value_t = 160)]
        q_count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Element-count bounds for uniform and non-uniform recovery.
    Bounds {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        eps: f64,
        /// Scale constant of the non-uniform bound.
        #[arg(long, default_value_t = 1.0)]
        c_scale: f64,
        /// Log-argument constant of the non-uniform bound.
        #[arg(long, default_value_t = 1.0)]
        c_log: f64,
    },
    /// Test the isotropy and zero-mean-pattern conditions on a grid.
    IsotropyCheck {
        #[arg(long)]
        z: u32,
        #[arg(long, default_value = "uniform")]
        dist_tx: String,
        #[arg(long, default_value = "uniform")]
        dist_rx: String,
        #[arg(long, default_value = "independent")]
        mode: String,
    },
    /// Run one recovery method on generated or file data.
    Recover {
        /// Matrix file (pairs with --snapshots); omit to generate data.
        #[arg(long, requires = "snapshots")]
        matrix: Option<PathBuf>,
        #[arg(long, requires = "matrix")]
        snapshots: Option<PathBuf>,
        /// Scene file with the true support, to report the error flag.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[command(flatten)]
        array: ArrayArgs,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 20.0)]
        snr: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Method spec, e.g. omp or mbmp:d=3+3+1.
        #[arg(long, default_value = "omp")]
        method: String,
    },
    /// Monte Carlo sweep of a protocol; writes the sweep CSV schema.
    Sweep {
        #[arg(long, default_value = "nonuniform")]
        protocol: String,
        /// Full-scale figure preset (overrides protocol and defaults).
        #[arg(long)]
        preset: Option<String>,
        /// TOML config file with per-protocol sections.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        z: Option<u32>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        snr: Option<f64>,
        #[arg(long)]
        mn: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        inner_trials: Option<usize>,
        /// Comma-separated method specs.
        #[arg(long)]
        methods: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        mode: Option<String>,
        /// Worker threads (0 = default); results are identical at any
        /// setting.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Suppress wall-clock measurement so re-runs are byte-identical.
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the matched-filter model on synthesized waveforms.
    RoundtripCheck {
        /// Comma-separated transmitter counts.
        #[arg(long, default_value = "1,2,4,8")]
        m_list: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        z: u32,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use unnormalized Fourier rows (exercises the failure path).
        #[arg(long)]
        raw_codes: bool,
    },
}

/// Shared array geometry flags.
#[derive(Args)]
struct ArrayArgs {
    #[arg(long, default_value_t = 4)]
    m: usize,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    z: u32,
    /// Colocated transceivers (requires m = n).
    #[arg(long)]
    transceiver: bool,
}

impl ArrayArgs {
    fn config(&self) -> CliResult<ArrayConfig> {
        let cfg = if self.transceiver {
            if self.m != self.n {
                return Err(CliError::Usage(
                    "--transceiver requires --m equal to --n".into(),
                ));
            }
            ArrayConfig::transceiver_uniform(self.n, self.z as f64)
        } else {
            ArrayConfig::independent_uniform(self.m, self.n, self.z as f64)
        };
        cfg.map_err(CliError::from)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spatial-cs: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Resolves an output path: explicit flag, else the default name inside
/// `$SPATIAL_CS_OUTDIR` (or the working directory).
fn resolve_out(flag: Option<PathBuf>, default_name: &str) -> PathBuf {
    flag.unwrap_or_else(|| {
        std::env::var_os("SPATIAL_CS_OUTDIR")
            .map(|dir| Path::new(&dir).join(default_name))
            .unwrap_or_else(|| PathBuf::from(default_name))
    })
}

fn parse_dist(spec: &str) -> CliResult<PositionDist> {
    if spec == "uniform" {
        return Ok(PositionDist::symmetric_uniform());
    }
    if let Some(at) = spec.strip_prefix("point:") {
        let at = at
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("bad point-mass position '{at}'")))?;
        return Ok(PositionDist::PointMass { at });
    }
    if spec == "point" {
        return Ok(PositionDist::PointMass { at: 0.0 });
    }
    Err(CliError::Usage(format!(
        "unknown distribution '{spec}' (expected uniform|point[:position])"
    )))
}

fn parse_f64_list(spec: &str) -> CliResult<Vec<f64>> {
    spec.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("'{tok}' is not a number")))
        })
        .collect()
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Grid { z, out } => {
            let grid = canonical_grid(z)?;
            println!("z={z} g={} spacing={}", grid.g(), grid.spacing());
            if let Some(path) = out {
                let mut csv = String::from("index,phi\n");
                for (i, phi) in grid.phi().iter().enumerate() {
                    csv.push_str(&format!("{i},{phi}\n"));
                }
                io::write_text(&path, &csv)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Sample { array, seed, out } => {
            let cfg = array.config()?;
            let pos = sample_positions(&cfg, seed)?;
            let mut csv = String::from("role,index,position\n");
            for (i, x) in pos.xi.iter().enumerate() {
                csv.push_str(&format!("tx,{i},{x}\n"));
            }
            for (i, x) in pos.zeta.iter().enumerate() {
                csv.push_str(&format!("rx,{i},{x}\n"));
            }
            match out {
                Some(path) => {
                    io::write_text(&path, &csv)?;
                    println!("wrote {}", path.display());
                }
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::Matrix {
            array,
            seed,
            raw,
            out,
            scene_out,
            snapshots_out,
            k,
            p,
            snr,
        } => {
            let cfg = array.config()?;
            let grid = canonical_grid(array.z)?;
            let pos = sample_positions(&cfg, seed)?;
            let a = build_matrix(&cfg, &pos, &grid, !raw);
            let path = resolve_out(out, "matrix.csv");
            io::write_text(&path, &io::matrix_to_string(&a))?;
            println!(
                "wrote {} ({}x{}, normalized={})",
                path.display(),
                a.mn(),
                a.g(),
                u8::from(a.is_normalized())
            );
            if let Some(k) = k {
                let scene = synthesize_scene(
                    grid.g(),
                    k,
                    p,
                    derive_trial_seed(seed, "matrix/scene", 0, 0),
                )?;
                if let Some(path) = scene_out {
                    io::write_text(&path, &io::scene_to_string(&scene))?;
                    println!("wrote {}", path.display());
                }
                if let Some(path) = snapshots_out {
                    let sigma = sigma_from_snr(snr);
                    let snap = observe(
                        &a,
                        &scene,
                        sigma,
                        derive_trial_seed(seed, "matrix/noise", 0, 0),
                    )?;
                    io::write_text(&path, &io::snapshots_to_string(&snap))?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        Command::PatternStats {
            m,
            n,
            u,
            trials,
            seed,
        } => {
            if trials == 0 {
                return Err(CliError::Usage("trials must be at least 1".into()));
            }
            let us = parse_f64_list(&u)?;
            let dist = PositionDist::symmetric_uniform();
            let z = 50.0;
            let cfg = ArrayConfig::independent_uniform(m, n, z)?;
            println!("u,mean_analytic,mean_mc,var_re_analytic,var_re_mc,var_im_analytic,var_im_mc");
            for &u in &us {
                let stats = analytic_stats(&dist, &dist, m, n, u)?;
                let mut samples = Vec::with_capacity(trials);
                for t in 0..trials {
                    let pos = sample_positions(
                        &cfg,
                        derive_trial_seed(seed, "pattern-stats", t as u64, 0),
                    )?;
                    samples.push(array_pattern(&pos, u));
                }
                let mean_re = samples.iter().map(|b| b.re).sum::<f64>() / trials as f64;
                let mean_im = samples.iter().map(|b| b.im).sum::<f64>() / trials as f64;
                let var_re = samples
                    .iter()
                    .map(|b| (b.re - mean_re).powi(2))
                    .sum::<f64>()
                    / trials as f64;
                let var_im = samples
                    .iter()
                    .map(|b| (b.im - mean_im).powi(2))
                    .sum::<f64>()
                    / trials as f64;
                println!(
                    "{u},{},{mean_re},{},{var_re},{},{var_im}",
                    stats.mean.re, stats.var_re, stats.var_im
                );
            }
            Ok(())
        }
        Command::CoherenceCcdf {
            z,
            mn,
            mode,
            trials,
            q_max,
            q_count,
            seed,
            jobs,
            out,
        } => {
            let mut cfg = ExperimentConfig::desk_default(Protocol::Ccdf);
            cfg.z = z;
            cfg.mn_list = parse_mn_list(&mn)?;
            cfg.mode = parse_mode(&mode)?;
            cfg.trials = trials;
            cfg.q_grid = (q_max, q_count);
            cfg.base_seed = seed;
            cfg.jobs = jobs;
            let rows = run_ccdf(&cfg)?;
            let path = resolve_out(out, "coherence_ccdf.csv");
            io::write_text(&path, &ccdf_csv(&rows))?;
            println!("wrote {} ({} rows)", path.display(), rows.len());
            Ok(())
        }
        Command::Bounds {
            k,
            g,
            eps,
            c_scale,
            c_log,
        } => {
            let uniform = uniform_recovery_mn(k, g, eps)?;
            println!("c_constant={}", uniform_recovery_constant());
            println!("mn_bound_uniform={uniform:.6}");
            let nonuniform = nonuniform_recovery_mn(k, g, eps, c_scale, c_log)?;
            println!("mn_bound_nonuniform={nonuniform:.6}");
            Ok(())
        }
        Command::IsotropyCheck {
            z,
            dist_tx,
            dist_rx,
            mode,
        } => {
            let mode = parse_mode(&mode)?;
            let tx = parse_dist(&dist_tx)?;
            let rx = parse_dist(&dist_rx)?;
            let zf = z as f64;
            let cfg = match mode {
                ArrayMode::Independent => {
                    ArrayConfig::new(2, 2, zf, zf / 2.0, zf / 2.0, mode, tx, rx)?
                }
                ArrayMode::Transceiver => {
                    ArrayConfig::new(2, 2, zf, zf / 2.0, zf / 2.0, mode, tx.clone(), tx)?
                }
            };
            let grid = canonical_grid(z)?;
            print_verdict("isotropy", isotropy_check(&cfg, &grid)?);
            print_verdict("uniform_condition", uniform_condition_check(&cfg, &grid)?);
            Ok(())
        }
        Command::Recover {
            matrix,
            snapshots,
            truth,
            array,
            k,
            p,
            snr,
            seed,
            method,
        } => {
            let spec = MethodSpec::parse(&method)?;
            let resolved = spec.to_method()?;
            let (a, snap, truth_support) = match (matrix, snapshots) {
                (Some(mpath), Some(spath)) => {
                    let a = io::matrix_from_string(&io::read_text(&mpath)?)?;
                    let snap = io::snapshots_from_string(&io::read_text(&spath)?)?;
                    let truth_support = match truth {
                        Some(t) => Some(io::scene_from_string(&io::read_text(&t)?)?.support),
                        None => None,
                    };
                    (a, snap, truth_support)
                }
                _ => {
                    let cfg = array.config()?;
                    let grid = canonical_grid(array.z)?;
                    let pos = sample_positions(&cfg, derive_trial_seed(seed, "recover/pos", 0, 0))?;
                    let a = build_matrix(&cfg, &pos, &grid, true);
                    let scene = synthesize_scene(
                        grid.g(),
                        k,
                        p,
                        derive_trial_seed(seed, "recover/scene", 0, 0),
                    )?;
                    let sigma = sigma_from_snr(snr);
                    let snap = observe(
                        &a,
                        &scene,
                        sigma,
                        derive_trial_seed(seed, "recover/noise", 0, 0),
                    )?;
                    (a, snap, Some(scene.support))
                }
            };
            let problem = RecoveryProblem::new(&a, &snap, k)?;
            let result = resolved.run(&problem)?;
            let support: Vec<String> = result.support.iter().map(|s| s.to_string()).collect();
            println!(
                "method={} support={} residual={:.6e} iterations={}",
                spec.label(),
                support.join(","),
                result.residual_norm,
                result.iterations
            );
            if let Some(w) = result.warning {
                eprintln!("warning: {w:?}");
            }
            if let Some(truth) = truth_support {
                println!(
                    "support_error={}",
                    u8::from(support_error(&result.support, &truth))
                );
            }
            Ok(())
        }
        Command::Sweep {
            protocol,
            preset: preset_name,
            config,
            z,
            k,
            p,
            snr,
            mn,
            trials,
            inner_trials,
            methods,
            seed,
            mode,
            jobs,
            no_timing,
            out,
        } => {
            let mut configs: Vec<ExperimentConfig> = match &preset_name {
                Some(name) => preset(name)?,
                None => {
                    let proto = Protocol::parse(&protocol)?;
                    vec![ExperimentConfig::desk_default(proto)]
                }
            };
            if let Some(path) = config {
                let file = load_file(&path)?;
                for cfg in &mut configs {
                    if let Some(section) = file.section(cfg.protocol) {
                        apply_section(cfg, section)?;
                    }
                }
            }
            for cfg in &mut configs {
                if let Some(z) = z {
                    cfg.z = z;
                }
                if let Some(k) = k {
                    cfg.k = k;
                }
                if let Some(p) = p {
                    cfg.p = p;
                }
                if let Some(snr) = snr {
                    cfg.snr_db = snr;
                }
                if let Some(mn) = &mn {
                    cfg.mn_list = parse_mn_list(mn)?;
                }
                if let Some(t) = trials {
                    cfg.trials = t;
                }
                if let Some(t) = inner_trials {
                    cfg.inner_trials = t;
                }
                if let Some(specs) = &methods {
                    cfg.methods = specs
                        .split(',')
                        .map(MethodSpec::parse)
                        .collect::<CliResult<_>>()?;
                }
                if let Some(seed) = seed {
                    cfg.base_seed = seed;
                }
                if let Some(mode) = &mode {
                    cfg.mode = parse_mode(mode)?;
                }
                cfg.jobs = jobs;
                if no_timing {
                    cfg.record_runtime = false;
                }
            }
            let default_name = match &preset_name {
                Some(name) => format!("sweep_{name}.csv"),
                None => format!("sweep_{}.csv", configs[0].protocol.name()),
            };
            let path = resolve_out(out, &default_name);
            let mut csv = String::new();
            let mut summary = Vec::new();
            for cfg in &configs {
                if cfg.protocol == Protocol::Ccdf {
                    let rows = run_ccdf(cfg)?;
                    let body = ccdf_csv(&rows);
                    append_csv(&mut csv, &body);
                    summary.push(format!(
                        "{} ({}): {} rows",
                        cfg.protocol.name(),
                        mode_name(cfg.mode),
                        rows.len()
                    ));
                } else {
                    let output = run_sweep(cfg)?;
                    for failure in &output.failures {
                        eprintln!("solver failure: {failure}");
                    }
                    let body = spatial_cs::experiments::sweep_csv(cfg, &output);
                    append_csv(&mut csv, &body);
                    summary.push(format!(
                        "{}: {} cells x {} methods",
                        cfg.protocol.name(),
                        cfg.mn_list.len(),
                        cfg.methods.len()
                    ));
                }
            }
            io::write_text(&path, &csv)?;
            println!("wrote {}", path.display());
            for line in summary {
                println!("{line}");
            }
            Ok(())
        }
        Command::RoundtripCheck {
            m_list,
            n,
            z,
            k,
            p,
            seed,
            raw_codes,
        } => {
            let ms: Vec<usize> = m_list
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<usize>()
                        .map_err(|_| CliError::Usage(format!("bad count '{tok}'")))
                })
                .collect::<CliResult<_>>()?;
            let grid = canonical_grid(z)?;
            let mut all_ok = true;
            for m in ms {
                let cfg = ArrayConfig::independent_uniform(m, n, z as f64)?;
                let pos =
                    sample_positions(&cfg, derive_trial_seed(seed, "roundtrip/pos", m as u64, 0))?;
                let scene = synthesize_scene(
                    grid.g(),
                    k,
                    p,
                    derive_trial_seed(seed, "roundtrip/scene", m as u64, 0),
                )?;
                let codes = fourier_codes(m, !raw_codes);
                match waveform_roundtrip_check(&codes, &scene, &pos, z as f64, &grid) {
                    Ok(dev) => {
                        let ok = dev <= 1e-10;
                        all_ok &= ok;
                        println!(
                            "m={m} deviation={dev:.3e} {}",
                            if ok { "PASS" } else { "FAIL" }
                        );
                    }
                    Err(e) => {
                        all_ok = false;
                        println!("m={m} FAIL ({e})");
                    }
                }
            }
            if all_ok {
                Ok(())
            } else {
                Err(CliError::Numeric(
                    "waveform roundtrip deviated from the model".into(),
                ))
            }
        }
    }
}

fn print_verdict(label: &str, verdict: ConditionVerdict) {
    match verdict {
        ConditionVerdict::Holds => println!("{label}=holds"),
        ConditionVerdict::Fails { index, magnitude } => {
            println!("{label}=fails@i={index} psi={magnitude:.6e}")
        }
    }
}

/// Concatenates CSV bodies, keeping a single header line.
fn append_csv(acc: &mut String, body: &str) {
    if acc.is_empty() {
        acc.push_str(body);
    } else {
        let mut lines = body.lines();
        let _header = lines.next();
        for line in lines {
            acc.push_str(line);
            acc.push('\n');
        }
    }
}
