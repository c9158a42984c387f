//! Sweep configuration files: one TOML section per protocol with
//! `key = value` entries; command-line flags override file values.

use std::path::Path;

use serde::Deserialize;
use spatial_cs_core::geometry::ArrayMode;

use crate::experiments::{ExperimentConfig, MethodSpec, Protocol};
use crate::{CliError, CliResult};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub ccdf: Option<Section>,
    pub nonuniform: Option<Section>,
    pub uniform: Option<Section>,
    pub mmv: Option<Section>,
}

/// One protocol section; every field optional so files can be sparse.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Section {
    pub z: Option<u32>,
    pub k: Option<usize>,
    pub p: Option<usize>,
    pub snr_db: Option<f64>,
    pub mn: Option<Vec<[usize; 2]>>,
    pub trials: Option<usize>,
    pub inner_trials: Option<usize>,
    pub methods: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub mode: Option<String>,
    pub q_max: Option<f64>,
    pub q_count: Option<usize>,
    pub record_runtime: Option<bool>,
}

pub fn parse_mode(s: &str) -> CliResult<ArrayMode> {
    match s {
        "independent" => Ok(ArrayMode::Independent),
        "transceiver" => Ok(ArrayMode::Transceiver),
        other => Err(CliError::Usage(format!(
            "unknown mode '{other}' (expected independent|transceiver)"
        ))),
    }
}

pub fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = crate::io::read_text(path)?;
    toml::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config file {}: {e}", path.display())))
}

impl FileConfig {
    pub fn section(&self, protocol: Protocol) -> Option<&Section> {
        match protocol {
            Protocol::Ccdf => self.ccdf.as_ref(),
            Protocol::Nonuniform => self.nonuniform.as_ref(),
            Protocol::Uniform => self.uniform.as_ref(),
            Protocol::Mmv => self.mmv.as_ref(),
        }
    }
}

/// Applies a file section on top of a base configuration.
pub fn apply_section(config: &mut ExperimentConfig, section: &Section) -> CliResult<()> {
    if let Some(z) = section.z {
        config.z = z;
    }
    if let Some(k) = section.k {
        config.k = k;
    }
    if let Some(p) = section.p {
        config.p = p;
    }
    if let Some(snr) = section.snr_db {
        config.snr_db = snr;
    }
    if let Some(mn) = &section.mn {
        config.mn_list = mn.iter().map(|pair| (pair[0], pair[1])).collect();
    }
    if let Some(t) = section.trials {
        config.trials = t;
    }
    if let Some(t) = section.inner_trials {
        config.inner_trials = t;
    }
    if let Some(methods) = &section.methods {
        config.methods = methods
            .iter()
            .map(|s| MethodSpec::parse(s))
            .collect::<CliResult<_>>()?;
    }
    if let Some(seed) = section.seed {
        config.base_seed = seed;
    }
    if let Some(mode) = &section.mode {
        config.mode = parse_mode(mode)?;
    }
    if let Some(q_max) = section.q_max {
        config.q_grid.0 = q_max;
    }
    if let Some(q_count) = section.q_count {
        config.q_grid.1 = q_count;
    }
    if let Some(r) = section.record_runtime {
        config.record_runtime = r;
    }
    Ok(())
}

/// Parses an `MxN,MxN,...` cell list (e.g. `3x3,4x5`).
pub fn parse_mn_list(spec: &str) -> CliResult<Vec<(usize, usize)>> {
    spec.split(',')
        .map(|cell| {
            let cell = cell.trim();
            let (m, n) = cell
                .split_once('x')
                .ok_or_else(|| CliError::Usage(format!("cell '{cell}' is not MxN")))?;
            let m = m
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad transmitter count in '{cell}'")))?;
            let n = n
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad receiver count in '{cell}'")))?;
            Ok((m, n))
        })
        .collect()
}
