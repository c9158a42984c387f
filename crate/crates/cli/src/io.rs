//! Flat-file formats for matrices, scenes, and snapshots.
//!
//! Every file is plain CSV with a `#`-prefixed header line carrying the
//! dimensions; complex values are interleaved `re,im` column pairs.
//! Floats are written in Rust's shortest round-trip form, so write/read
//! is bit exact.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use spatial_cs_core::geometry::AngleGrid;
use spatial_cs_core::linalg::CMat;
use spatial_cs_core::model::{MeasurementMatrix, Scene, SnapshotData};

use crate::{CliError, CliResult};

fn parse_kv(header: &str, key: &str) -> CliResult<String> {
    header
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix(&format!("{key}=")).map(str::to_string))
        .ok_or_else(|| CliError::Io(format!("header is missing '{key}='")))
}

fn parse_num<T: std::str::FromStr>(header: &str, key: &str) -> CliResult<T> {
    parse_kv(header, key)?
        .parse::<T>()
        .map_err(|_| CliError::Io(format!("header field '{key}' is not a valid number")))
}

fn complex_rows(mat: &CMat) -> String {
    let mut out = String::new();
    for i in 0..mat.rows() {
        for j in 0..mat.cols() {
            if j > 0 {
                out.push(',');
            }
            let v = mat.at(i, j);
            let _ = write!(out, "{},{}", v.re, v.im);
        }
        out.push('\n');
    }
    out
}

fn read_complex_rows(lines: &[&str], rows: usize, cols: usize) -> CliResult<CMat> {
    if lines.len() != rows {
        return Err(CliError::Io(format!(
            "expected {rows} data rows, found {}",
            lines.len()
        )));
    }
    let mut mat = CMat::zeros(rows, cols);
    for (i, line) in lines.iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 * cols {
            return Err(CliError::Io(format!(
                "row {i} has {} fields, expected {}",
                fields.len(),
                2 * cols
            )));
        }
        for j in 0..cols {
            let re = parse_f64(fields[2 * j], i)?;
            let im = parse_f64(fields[2 * j + 1], i)?;
            mat.set(i, j, Complex64::new(re, im));
        }
    }
    Ok(mat)
}

fn parse_f64(tok: &str, row: usize) -> CliResult<f64> {
    tok.trim()
        .parse::<f64>()
        .map_err(|_| CliError::Io(format!("row {row}: '{tok}' is not a number")))
}

/// Matrix file: header with dimensions and the normalization flag, a grid
/// line, then `MN` rows of `2G` interleaved values.
pub fn matrix_to_string(matrix: &MeasurementMatrix) -> String {
    let mut out = format!(
        "# spatial-cs matrix m={} n={} g={} z={} normalized={}\n",
        matrix.m(),
        matrix.n(),
        matrix.g(),
        matrix.grid().z(),
        u8::from(matrix.is_normalized()),
    );
    let phi: Vec<String> = matrix.grid().phi().iter().map(|p| p.to_string()).collect();
    let _ = writeln!(out, "# grid {}", phi.join(","));
    out.push_str(&complex_rows(matrix.entries()));
    out
}

pub fn matrix_from_string(text: &str) -> CliResult<MeasurementMatrix> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.len() < 2 || !lines[0].starts_with("# spatial-cs matrix") {
        return Err(CliError::Io("not a spatial-cs matrix file".into()));
    }
    let m: usize = parse_num(lines[0], "m")?;
    let n: usize = parse_num(lines[0], "n")?;
    let g: usize = parse_num(lines[0], "g")?;
    let z: f64 = parse_num(lines[0], "z")?;
    let normalized: u8 = parse_num(lines[0], "normalized")?;
    let grid_line = lines[1]
        .strip_prefix("# grid ")
        .ok_or_else(|| CliError::Io("missing '# grid' line".into()))?;
    let phi: Vec<f64> = grid_line
        .split(',')
        .map(|tok| parse_f64(tok, 1))
        .collect::<CliResult<_>>()?;
    if phi.len() != g {
        return Err(CliError::Io(format!(
            "grid has {} points, header says {g}",
            phi.len()
        )));
    }
    let grid = AngleGrid::from_points(phi, z).map_err(CliError::from)?;
    let entries = read_complex_rows(&lines[2..], m * n, g)?;
    MeasurementMatrix::from_parts(entries, m, n, normalized == 1, grid).map_err(CliError::from)
}

/// Snapshot file: `MN` rows of `2P` interleaved values.
pub fn snapshots_to_string(snap: &SnapshotData) -> String {
    let mut out = format!(
        "# spatial-cs snapshots mn={} p={} sigma={} snr_db={}\n",
        snap.y.rows(),
        snap.y.cols(),
        snap.sigma,
        snap.snr_db,
    );
    out.push_str(&complex_rows(&snap.y));
    out
}

pub fn snapshots_from_string(text: &str) -> CliResult<SnapshotData> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.is_empty() || !lines[0].starts_with("# spatial-cs snapshots") {
        return Err(CliError::Io("not a spatial-cs snapshots file".into()));
    }
    let mn: usize = parse_num(lines[0], "mn")?;
    let p: usize = parse_num(lines[0], "p")?;
    let sigma: f64 = parse_num(lines[0], "sigma")?;
    let snr_db: f64 = parse_num(lines[0], "snr_db")?;
    let y = read_complex_rows(&lines[1..], mn, p)?;
    Ok(SnapshotData { y, sigma, snr_db })
}

/// Scene file: one row per target, `index` then `2P` gain values.
pub fn scene_to_string(scene: &Scene) -> String {
    let mut out = format!("# spatial-cs scene k={} p={}\n", scene.k(), scene.p());
    for (row, &g) in scene.support.iter().enumerate() {
        let _ = write!(out, "{g}");
        for p in 0..scene.p() {
            let v = scene.gains.at(row, p);
            let _ = write!(out, ",{},{}", v.re, v.im);
        }
        out.push('\n');
    }
    out
}

pub fn scene_from_string(text: &str) -> CliResult<Scene> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.is_empty() || !lines[0].starts_with("# spatial-cs scene") {
        return Err(CliError::Io("not a spatial-cs scene file".into()));
    }
    let k: usize = parse_num(lines[0], "k")?;
    let p: usize = parse_num(lines[0], "p")?;
    if lines.len() - 1 != k {
        return Err(CliError::Io(format!(
            "expected {k} target rows, found {}",
            lines.len() - 1
        )));
    }
    let mut support = Vec::with_capacity(k);
    let mut gains = CMat::zeros(k, p);
    for (row, line) in lines[1..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 1 + 2 * p {
            return Err(CliError::Io(format!(
                "target row {row} has {} fields, expected {}",
                fields.len(),
                1 + 2 * p
            )));
        }
        let idx = fields[0]
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Io(format!("row {row}: bad grid index '{}'", fields[0])))?;
        support.push(idx);
        for c in 0..p {
            let re = parse_f64(fields[1 + 2 * c], row)?;
            let im = parse_f64(fields[2 + 2 * c], row)?;
            gains.set(row, c, Complex64::new(re, im));
        }
    }
    Scene::new(support, gains).map_err(CliError::from)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
