//! Monte Carlo experiment protocols: coherence ccdf sweeps and support
//! recovery error sweeps (single draw per trial, fixed-matrix inner
//! loops, multiple snapshots).
//!
//! Every protocol is a pure function of its configuration, including the
//! base seed: per-trial seeds are derived by hashing
//! (base, protocol tag, trial, inner) tuples, trials are independent work
//! items, and aggregation runs in input order, so results are identical
//! for any worker count.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use spatial_cs_core::bounds::{coherence_ccdf_bound, ElementBudget};
use spatial_cs_core::geometry::{
    canonical_grid, sample_positions, AngleGrid, ArrayConfig, ArrayMode,
};
use spatial_cs_core::model::{build_matrix, observe, sigma_from_snr, synthesize_scene};
use spatial_cs_core::pattern_stats::{coherence, empirical_ccdf};
use spatial_cs_core::recovery::{support_error, Method, RecoveryProblem};
use spatial_cs_core::Error as CoreError;

use crate::{CliError, CliResult};

/// The experiment families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Coherence ccdf against the analytic bound.
    Ccdf,
    /// Fresh positions, scene, and noise every trial.
    Nonuniform,
    /// Fixed positions per outer draw; error if any inner trial fails.
    Uniform,
    /// Non-uniform protocol with multiple snapshots per trial.
    Mmv,
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::Ccdf => "ccdf",
            Protocol::Nonuniform => "nonuniform",
            Protocol::Uniform => "uniform",
            Protocol::Mmv => "mmv",
        }
    }

    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "ccdf" => Ok(Protocol::Ccdf),
            "nonuniform" => Ok(Protocol::Nonuniform),
            "uniform" => Ok(Protocol::Uniform),
            "mmv" => Ok(Protocol::Mmv),
            other => Err(CliError::Usage(format!(
                "unknown protocol '{other}' (expected ccdf|nonuniform|uniform|mmv)"
            ))),
        }
    }
}

/// A method name plus its flat parameter map, in the registry's string
/// form: `name` or `name:key=value;key=value`. List-valued parameters use
/// `+` separators (e.g. `mbmp:d=3+3+1`) so specs stay comma-free for CSV
/// and flag lists.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSpec {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl MethodSpec {
    pub fn parse(spec: &str) -> CliResult<Self> {
        let mut parts = spec.splitn(2, ':');
        let name = parts.next().unwrap_or_default().trim().to_string();
        if name.is_empty() {
            return Err(CliError::Usage("empty method spec".into()));
        }
        let mut params = BTreeMap::new();
        if let Some(rest) = parts.next() {
            for pair in rest.split(';') {
                let pair = pair.trim();
                if pair.is_empty() {
                    continue;
                }
                let (key, value) = pair.split_once('=').ok_or_else(|| {
                    CliError::Usage(format!("method parameter '{pair}' is not key=value"))
                })?;
                params.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(MethodSpec { name, params })
    }

    /// Resolves against the solver registry.
    pub fn to_method(&self) -> CliResult<Method> {
        let translated: BTreeMap<String, String> = self
            .params
            .iter()
            .map(|(k, v)| (k.clone(), v.replace('+', ",")))
            .collect();
        Method::parse(&self.name, &translated).map_err(CliError::from)
    }

    /// Canonical label used in CSV output; contains no commas.
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            self.name.clone()
        } else {
            let params: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            format!("{}:{}", self.name, params.join(";"))
        }
    }
}

/// Full description of one sweep.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub protocol: Protocol,
    /// Integer aperture; the grid is the canonical `G = Z + 1` grid.
    pub z: u32,
    pub k: usize,
    pub p: usize,
    pub snr_db: f64,
    /// `(M, N)` cells to sweep.
    pub mn_list: Vec<(usize, usize)>,
    /// Position draws (outer draws for the fixed-matrix protocol).
    pub trials: usize,
    /// Scene/noise draws per position draw (fixed-matrix protocol only).
    pub inner_trials: usize,
    pub methods: Vec<MethodSpec>,
    pub base_seed: u64,
    pub mode: ArrayMode,
    /// `(q_max, count)`: thresholds `q_max/count .. q_max` for the ccdf.
    pub q_grid: (f64, usize),
    /// Record wall-clock per call. Timing makes CSV output run-dependent,
    /// so determinism checks switch it off (the column then reads 0.000).
    pub record_runtime: bool,
    /// Worker threads; 0 uses the global default.
    pub jobs: usize,
}

impl ExperimentConfig {
    /// Desk-scale defaults for a protocol: small enough to sweep in
    /// minutes while preserving the qualitative method orderings.
    pub fn desk_default(protocol: Protocol) -> Self {
        let p = if protocol == Protocol::Mmv { 5 } else { 1 };
        let methods = match protocol {
            Protocol::Ccdf => Vec::new(),
            Protocol::Mmv => ["music", "raormp", "focuss", "mbmp:d=2+2+1"]
                .iter()
                .map(|s| MethodSpec::parse(s).expect("static spec"))
                .collect(),
            _ => [
                "beamform",
                "omp",
                "ols",
                "cosamp",
                "focuss",
                "lasso",
                "mbmp:d=3+3+1",
            ]
            .iter()
            .map(|s| MethodSpec::parse(s).expect("static spec"))
            .collect(),
        };
        ExperimentConfig {
            protocol,
            z: 50,
            k: 3,
            p,
            snr_db: 20.0,
            mn_list: vec![(3, 3), (4, 4), (5, 5), (6, 6)],
            trials: if protocol == Protocol::Uniform {
                50
            } else {
                200
            },
            inner_trials: 500,
            methods,
            base_seed: 0,
            mode: ArrayMode::Independent,
            q_grid: (0.8, 80),
            record_runtime: true,
            jobs: 0,
        }
    }

    pub fn grid(&self) -> CliResult<AngleGrid> {
        canonical_grid(self.z).map_err(CliError::from)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.trials == 0 {
            return Err(CliError::Usage("trial count must be at least 1".into()));
        }
        if self.mn_list.is_empty() {
            return Err(CliError::Usage("mn list must not be empty".into()));
        }
        if self.mn_list.iter().any(|&(m, n)| m == 0 || n == 0) {
            return Err(CliError::Usage("element counts must be at least 1".into()));
        }
        if self.mode == ArrayMode::Transceiver && self.mn_list.iter().any(|&(m, n)| m != n) {
            return Err(CliError::Usage("transceiver cells need M = N".into()));
        }
        let g = self.z as usize + 1;
        match self.protocol {
            Protocol::Ccdf => {
                let (q_max, count) = self.q_grid;
                if !(q_max > 0.0) || count == 0 {
                    return Err(CliError::Usage(
                        "ccdf threshold grid must be nonempty".into(),
                    ));
                }
            }
            _ => {
                if self.k == 0 {
                    return Err(CliError::Usage("sparsity must be at least 1".into()));
                }
                if self.k > g {
                    return Err(CliError::Usage(format!(
                        "sparsity {} exceeds grid size {g}",
                        self.k
                    )));
                }
                if self.p == 0 {
                    return Err(CliError::Usage("pulse count must be at least 1".into()));
                }
                if self.protocol == Protocol::Mmv && self.p < 2 {
                    return Err(CliError::Usage(
                        "mmv protocol needs at least 2 snapshots".into(),
                    ));
                }
                if self.protocol == Protocol::Uniform && self.inner_trials == 0 {
                    return Err(CliError::Usage(
                        "inner trial count must be at least 1".into(),
                    ));
                }
                if self.methods.is_empty() {
                    return Err(CliError::Usage("method list must not be empty".into()));
                }
                for spec in &self.methods {
                    spec.to_method()?;
                }
            }
        }
        Ok(())
    }

    fn array_config(&self, m: usize, n: usize) -> CliResult<ArrayConfig> {
        let cfg = match self.mode {
            ArrayMode::Independent => ArrayConfig::independent_uniform(m, n, self.z as f64),
            ArrayMode::Transceiver => ArrayConfig::transceiver_uniform(n, self.z as f64),
        };
        cfg.map_err(CliError::from)
    }
}

/// Collision-resistant seed for one trial: a splitmix64 chain over the
/// base seed, an FNV-1a hash of the protocol tag, and the two counters.
/// Identical tuples always give identical seeds.
pub fn derive_trial_seed(
    base_seed: u64,
    protocol_tag: &str,
    trial_index: u64,
    inner_index: u64,
) -> u64 {
    let mut tag_hash = 0xcbf2_9ce4_8422_2325u64;
    for byte in protocol_tag.as_bytes() {
        tag_hash ^= u64::from(*byte);
        tag_hash = tag_hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut state = splitmix64(base_seed ^ tag_hash);
    state = splitmix64(state ^ trial_index);
    splitmix64(state ^ inner_index.rotate_left(32))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Aggregated outcome for one `(method, M, N)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub method: String,
    pub m: usize,
    pub n: usize,
    pub errors: usize,
    pub trials: usize,
    pub mean_runtime_ms: f64,
}

impl CellRecord {
    pub fn error_rate(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }
}

/// Output of a recovery sweep: one record per cell and method, plus any
/// solver failures (a failed solve counts as a trial error, not a fatal
/// condition).
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub records: Vec<CellRecord>,
    pub failures: Vec<String>,
}

struct MethodOutcome {
    error: bool,
    runtime_ms: f64,
    calls: usize,
    failure: Option<String>,
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    if jobs == 0 {
        Ok(f())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot build a {jobs}-thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

/// Dispatches a recovery sweep (`nonuniform`, `uniform`, or `mmv`).
pub fn run_sweep(config: &ExperimentConfig) -> CliResult<SweepOutput> {
    config.validate()?;
    match config.protocol {
        Protocol::Ccdf => Err(CliError::Usage(
            "ccdf protocol produces threshold tables; use run_ccdf".into(),
        )),
        Protocol::Uniform => run_fixed_matrix(config),
        Protocol::Nonuniform | Protocol::Mmv => run_fresh_matrix(config),
    }
}

/// Fresh positions, scene, and noise on every trial.
fn run_fresh_matrix(config: &ExperimentConfig) -> CliResult<SweepOutput> {
    let grid = config.grid()?;
    let methods = resolve_methods(config)?;
    let sigma = sigma_from_snr(config.snr_db);
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for &(m, n) in &config.mn_list {
        let arr = config.array_config(m, n)?;
        let tag = format!("{}/{}x{}", config.protocol.name(), m, n);
        let outcomes: Vec<Vec<MethodOutcome>> = with_pool(config.jobs, || {
            (0..config.trials as u64)
                .into_par_iter()
                .map(|t| single_trial(config, &arr, &grid, &methods, sigma, &tag, t))
                .collect()
        })?;
        aggregate(
            config,
            &methods,
            m,
            n,
            config.trials,
            outcomes,
            &mut records,
            &mut failures,
        );
    }
    Ok(SweepOutput { records, failures })
}

fn single_trial(
    config: &ExperimentConfig,
    arr: &ArrayConfig,
    grid: &AngleGrid,
    methods: &[(String, Method)],
    sigma: f64,
    tag: &str,
    trial: u64,
) -> Vec<MethodOutcome> {
    let pos_seed = derive_trial_seed(config.base_seed, &format!("{tag}/pos"), trial, 0);
    let scene_seed = derive_trial_seed(config.base_seed, &format!("{tag}/scene"), trial, 0);
    let noise_seed = derive_trial_seed(config.base_seed, &format!("{tag}/noise"), trial, 0);
    let setup = sample_positions(arr, pos_seed)
        .map(|pos| build_matrix(arr, &pos, grid, true))
        .and_then(|a| {
            let scene = synthesize_scene(grid.g(), config.k, config.p, scene_seed)?;
            let snap = observe(&a, &scene, sigma, noise_seed)?;
            let problem = RecoveryProblem::new(&a, &snap, config.k)?;
            Ok((scene, problem))
        });
    match setup {
        Ok((scene, problem)) => methods
            .iter()
            .map(|(label, method)| {
                run_method(config, method, label, &problem, &scene.support, trial)
            })
            .collect(),
        Err(e) => methods
            .iter()
            .map(|(label, _)| MethodOutcome {
                error: true,
                runtime_ms: 0.0,
                calls: 0,
                failure: Some(format!("{label} trial {trial}: setup failed: {e}")),
            })
            .collect(),
    }
}

fn run_method(
    config: &ExperimentConfig,
    method: &Method,
    label: &str,
    problem: &RecoveryProblem,
    truth: &[usize],
    trial: u64,
) -> MethodOutcome {
    let start = config.record_runtime.then(Instant::now);
    let run = method.run(problem);
    let runtime_ms = start.map_or(0.0, |s| s.elapsed().as_secs_f64() * 1e3);
    match run {
        Ok(result) => MethodOutcome {
            error: support_error(&result.support, truth),
            runtime_ms,
            calls: 1,
            failure: None,
        },
        Err(e) => MethodOutcome {
            error: true,
            runtime_ms,
            calls: 1,
            failure: Some(format!("{label} trial {trial}: {e}")),
        },
    }
}

/// Fixed-matrix protocol: each outer draw fixes the element positions and
/// fails if any of the inner scene/noise trials fails. Inner trials for a
/// method stop at its first error.
fn run_fixed_matrix(config: &ExperimentConfig) -> CliResult<SweepOutput> {
    let grid = config.grid()?;
    let methods = resolve_methods(config)?;
    let sigma = sigma_from_snr(config.snr_db);
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for &(m, n) in &config.mn_list {
        let arr = config.array_config(m, n)?;
        let tag = format!("{}/{}x{}", config.protocol.name(), m, n);
        let outcomes: Vec<Vec<MethodOutcome>> = with_pool(config.jobs, || {
            (0..config.trials as u64)
                .into_par_iter()
                .map(|outer| outer_draw(config, &arr, &grid, &methods, sigma, &tag, outer))
                .collect()
        })?;
        aggregate(
            config,
            &methods,
            m,
            n,
            config.trials,
            outcomes,
            &mut records,
            &mut failures,
        );
    }
    Ok(SweepOutput { records, failures })
}

fn outer_draw(
    config: &ExperimentConfig,
    arr: &ArrayConfig,
    grid: &AngleGrid,
    methods: &[(String, Method)],
    sigma: f64,
    tag: &str,
    outer: u64,
) -> Vec<MethodOutcome> {
    let pos_seed = derive_trial_seed(config.base_seed, &format!("{tag}/pos"), outer, 0);
    let fixed = sample_positions(arr, pos_seed).map(|pos| build_matrix(arr, &pos, grid, true));
    let a = match fixed {
        Ok(a) => a,
        Err(e) => {
            return methods
                .iter()
                .map(|(label, _)| MethodOutcome {
                    error: true,
                    runtime_ms: 0.0,
                    calls: 0,
                    failure: Some(format!("{label} outer {outer}: setup failed: {e}")),
                })
                .collect()
        }
    };
    let mut outcomes: Vec<MethodOutcome> = methods
        .iter()
        .map(|_| MethodOutcome {
            error: false,
            runtime_ms: 0.0,
            calls: 0,
            failure: None,
        })
        .collect();
    for inner in 0..config.inner_trials as u64 {
        if outcomes.iter().all(|o| o.error) {
            break;
        }
        let scene_seed = derive_trial_seed(config.base_seed, &format!("{tag}/scene"), outer, inner);
        let noise_seed = derive_trial_seed(config.base_seed, &format!("{tag}/noise"), outer, inner);
        let setup = synthesize_scene(grid.g(), config.k, config.p, scene_seed).and_then(|scene| {
            let snap = observe(&a, &scene, sigma, noise_seed)?;
            let problem = RecoveryProblem::new(&a, &snap, config.k)?;
            Ok((scene, problem))
        });
        let (scene, problem) = match setup {
            Ok(v) => v,
            Err(e) => {
                for (idx, (label, _)) in methods.iter().enumerate() {
                    if !outcomes[idx].error {
                        outcomes[idx].error = true;
                        outcomes[idx]
                            .failure
                            .get_or_insert(format!("{label} outer {outer}: setup failed: {e}"));
                    }
                }
                break;
            }
        };
        for (idx, (label, method)) in methods.iter().enumerate() {
            if outcomes[idx].error {
                continue;
            }
            let one = run_method(config, method, label, &problem, &scene.support, outer);
            outcomes[idx].runtime_ms += one.runtime_ms;
            outcomes[idx].calls += one.calls;
            if one.error {
                outcomes[idx].error = true;
                if one.failure.is_some() {
                    outcomes[idx].failure = one.failure;
                }
            }
        }
    }
    outcomes
}

fn resolve_methods(config: &ExperimentConfig) -> CliResult<Vec<(String, Method)>> {
    config
        .methods
        .iter()
        .map(|spec| Ok((spec.label(), spec.to_method()?)))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn aggregate(
    config: &ExperimentConfig,
    methods: &[(String, Method)],
    m: usize,
    n: usize,
    trials: usize,
    outcomes: Vec<Vec<MethodOutcome>>,
    records: &mut Vec<CellRecord>,
    failures: &mut Vec<String>,
) {
    for (idx, (label, _)) in methods.iter().enumerate() {
        let mut errors = 0;
        let mut runtime = 0.0;
        let mut calls = 0usize;
        for trial in &outcomes {
            let o = &trial[idx];
            errors += o.error as usize;
            runtime += o.runtime_ms;
            calls += o.calls;
            if let Some(f) = &o.failure {
                failures.push(f.clone());
            }
        }
        let mean_runtime_ms = if config.record_runtime && calls > 0 {
            runtime / calls as f64
        } else {
            0.0
        };
        records.push(CellRecord {
            method: label.clone(),
            m,
            n,
            errors,
            trials,
            mean_runtime_ms,
        });
    }
}

/// One row of a coherence-tail table.
#[derive(Debug, Clone, PartialEq)]
pub struct CcdfRow {
    pub q: f64,
    pub empirical: f64,
    pub bound: f64,
    pub mn: usize,
    pub mode: ArrayMode,
}

/// Draws `trials` position sets per cell, computes the coherence of each
/// dictionary realization, and tabulates the empirical tail against the
/// analytic maximum-over-sidelobes bound.
pub fn run_ccdf(config: &ExperimentConfig) -> CliResult<Vec<CcdfRow>> {
    config.validate()?;
    if config.protocol != Protocol::Ccdf {
        return Err(CliError::Usage(
            "run_ccdf requires the ccdf protocol".into(),
        ));
    }
    let grid = config.grid()?;
    let (q_max, q_count) = config.q_grid;
    let q_grid: Vec<f64> = (1..=q_count)
        .map(|i| q_max * i as f64 / q_count as f64)
        .collect();
    let mut rows = Vec::new();
    for &(m, n) in &config.mn_list {
        let arr = config.array_config(m, n)?;
        let tag = format!("ccdf/{}/{}x{}", mode_name(config.mode), m, n);
        let samples: Vec<Result<f64, CoreError>> = with_pool(config.jobs, || {
            (0..config.trials as u64)
                .into_par_iter()
                .map(|t| {
                    let seed = derive_trial_seed(config.base_seed, &format!("{tag}/pos"), t, 0);
                    let pos = sample_positions(&arr, seed)?;
                    let a = build_matrix(&arr, &pos, &grid, true);
                    Ok(coherence(&a)?.mu)
                })
                .collect()
        })?;
        let samples: Vec<f64> = samples
            .into_iter()
            .collect::<Result<_, _>>()
            .map_err(CliError::from)?;
        let empirical = empirical_ccdf(&samples, &q_grid).map_err(CliError::from)?;
        let budget = match config.mode {
            ArrayMode::Independent => ElementBudget::Independent { mn: m * n },
            ArrayMode::Transceiver => ElementBudget::Transceiver { n },
        };
        for (q, e) in q_grid.iter().zip(&empirical) {
            rows.push(CcdfRow {
                q: *q,
                empirical: *e,
                bound: coherence_ccdf_bound(*q, budget, grid.g(), false),
                mn: m * n,
                mode: config.mode,
            });
        }
    }
    Ok(rows)
}

pub fn mode_name(mode: ArrayMode) -> &'static str {
    match mode {
        ArrayMode::Independent => "independent",
        ArrayMode::Transceiver => "transceiver",
    }
}

/// Sweep CSV, exact schema:
/// `protocol,method,M,N,MN,Z,G,K,P,snr_db,trials,errors,error_rate,mean_runtime_ms,base_seed`.
pub fn sweep_csv(config: &ExperimentConfig, output: &SweepOutput) -> String {
    let mut out = String::from(
        "protocol,method,M,N,MN,Z,G,K,P,snr_db,trials,errors,error_rate,mean_runtime_ms,base_seed\n",
    );
    let g = config.z as usize + 1;
    for r in &output.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{:.6},{:.3},{}\n",
            config.protocol.name(),
            r.method,
            r.m,
            r.n,
            r.m * r.n,
            config.z,
            g,
            config.k,
            config.p,
            config.snr_db,
            r.trials,
            r.errors,
            r.error_rate(),
            r.mean_runtime_ms,
            config.base_seed
        ));
    }
    out
}

/// Ccdf CSV: `q,ccdf_empirical,ccdf_bound,MN,mode`.
pub fn ccdf_csv(rows: &[CcdfRow]) -> String {
    let mut out = String::from("q,ccdf_empirical,ccdf_bound,MN,mode\n");
    for r in rows {
        out.push_str(&format!(
            "{:.6},{:.6},{:.6},{},{}\n",
            r.q,
            r.empirical,
            r.bound,
            r.mn,
            mode_name(r.mode)
        ));
    }
    out
}

/// Named configurations reproducing the reference figures at full scale.
/// A preset may expand to several sweeps (the ccdf figure has an
/// independent and a transceiver panel).
pub fn preset(name: &str) -> CliResult<Vec<ExperimentConfig>> {
    match name {
        "paper-fig2" => {
            let mut ind = ExperimentConfig::desk_default(Protocol::Ccdf);
            ind.z = 250;
            ind.mn_list = vec![(10, 10), (15, 15), (20, 20)];
            ind.trials = 2000;
            ind.q_grid = (0.8, 160);
            let mut tr = ind.clone();
            tr.mode = ArrayMode::Transceiver;
            tr.mn_list = vec![(20, 20), (30, 30), (40, 40)];
            Ok(vec![ind, tr])
        }
        "paper-fig3" => {
            let mut cfg = ExperimentConfig::desk_default(Protocol::Nonuniform);
            cfg.z = 250;
            cfg.k = 5;
            cfg.trials = 1000;
            cfg.mn_list = (5..=13).map(|i| (i, i)).collect();
            cfg.methods = [
                "beamform",
                "omp",
                "ols",
                "cosamp",
                "focuss",
                "lasso",
                "mbmp:d=2+2+2+2+1",
            ]
            .iter()
            .map(|s| MethodSpec::parse(s).expect("static"))
            .collect();
            Ok(vec![cfg])
        }
        "paper-fig4" => {
            let mut cfg = ExperimentConfig::desk_default(Protocol::Uniform);
            cfg.z = 250;
            cfg.k = 5;
            cfg.trials = 100;
            cfg.inner_trials = 500;
            cfg.mn_list = (5..=13).map(|i| (i, i)).collect();
            cfg.methods = [
                "omp",
                "ols",
                "cosamp",
                "focuss",
                "lasso",
                "mbmp:d=3+3+3+3+1",
            ]
            .iter()
            .map(|s| MethodSpec::parse(s).expect("static"))
            .collect();
            Ok(vec![cfg])
        }
        "paper-fig5" => {
            let mut cfg = ExperimentConfig::desk_default(Protocol::Mmv);
            cfg.z = 250;
            cfg.k = 5;
            cfg.p = 5;
            cfg.trials = 1000;
            cfg.mn_list = vec![(3, 3), (4, 4), (5, 5), (6, 6), (7, 7)];
            cfg.methods = ["music", "raormp", "focuss", "mbmp:d=2+2+2+2+1"]
                .iter()
                .map(|s| MethodSpec::parse(s).expect("static"))
                .collect();
            Ok(vec![cfg])
        }
        other => Err(CliError::Usage(format!(
            "unknown preset '{other}' (expected paper-fig2|paper-fig3|paper-fig4|paper-fig5)"
        ))),
    }
}
