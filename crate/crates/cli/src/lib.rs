//! Config loading and result persistence for the `zerocell` binary.
//!
//! A run writes `<name>.csv` with one line per result row and `<name>.json`
//! holding the run manifest, the verbatim config and run diagnostics. Both
//! files are written to a temporary file in the output directory and renamed
//! into place.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zerocell::experiments::{
    Diagnostic, ExperimentConfig, ExperimentOutput, ResultRow, EXPERIMENT_KINDS,
};

pub const CSV_HEADER: [&str; 9] = [
    "experiment",
    "sweep_value",
    "estimate",
    "stderr",
    "reference",
    "z_score",
    "passed",
    "seed",
    "trials",
];

/// Seed fallback when `--seed` is absent.
pub const SEED_ENV: &str = "ZEROCELL_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Model(#[from] zerocell::Error),
    #[error("{0}")]
    Usage(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Parses and validates a config file. Returns the typed config and the
/// verbatim JSON document.
pub fn load_config(path: &Path) -> Result<(ExperimentConfig, serde_json::Value), CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_config(&text).map_err(|message| CliError::Config {
        path: path.to_path_buf(),
        message,
    })
}

#[derive(Deserialize)]
struct KindProbe {
    kind: String,
}

fn line_of(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

/// Deserializes one variant struct straight from the text, so errors keep
/// their line and column, and rejects unknown keys other than `kind`.
fn strict<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, String> {
    let mut de = serde_json::Deserializer::from_str(text);
    let mut unknown = Vec::new();
    let value: T = serde_ignored::deserialize(&mut de, |path| {
        let p = path.to_string();
        if p != "kind" {
            unknown.push(p);
        }
    })
    .map_err(|e| e.to_string())?;
    de.end().map_err(|e| e.to_string())?;
    match unknown.first() {
        None => Ok(value),
        Some(p) => {
            let key = p.rsplit('.').next().unwrap_or(p);
            Err(match line_of(text, key) {
                Some(line) => format!("unknown field `{p}` at line {line}"),
                None => format!("unknown field `{p}`"),
            })
        }
    }
}

/// Parse errors carry the serde line and column.
pub fn parse_config(text: &str) -> Result<(ExperimentConfig, serde_json::Value), String> {
    let raw: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let probe: KindProbe = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let cfg = match probe.kind.as_str() {
        "erosionLimit" => ExperimentConfig::ErosionLimit(strict(text)?),
        "inclusionConvergence" => ExperimentConfig::InclusionConvergence(strict(text)?),
        "zeroCellSelfCheck" => ExperimentConfig::ZeroCellSelfCheck(strict(text)?),
        "volumeMoments" => ExperimentConfig::VolumeMoments(strict(text)?),
        "twoBallAnomaly" => ExperimentConfig::TwoBallAnomaly(strict(text)?),
        "d1Exact" => ExperimentConfig::D1Exact(strict(text)?),
        other => {
            return Err(format!(
                "unknown experiment kind `{other}` at line {}; expected one of {}",
                line_of(text, "kind").unwrap_or(1),
                EXPERIMENT_KINDS.join(", ")
            ))
        }
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok((cfg, raw))
}

/// 17 significant digits in scientific notation; `NaN` and `inf` for
/// non-finite values.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_record(row: &ResultRow) -> [String; 9] {
    [
        row.experiment.clone(),
        format_float(row.sweep_value),
        format_float(row.estimate),
        format_float(row.standard_error),
        format_float(row.reference),
        format_float(row.z_score),
        row.passed.to_string(),
        row.seed.to_string(),
        row.trials.to_string(),
    ]
}

pub fn rows_to_csv(rows: &[ResultRow]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(csv_record(row))?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WallClock {
    pub started_unix_seconds: f64,
    pub elapsed_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub config_path: PathBuf,
    pub root_seed: u64,
    pub worker_count: usize,
    pub output_dir: PathBuf,
    pub version: String,
    pub wall_clock: WallClock,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub kind: String,
    pub rows: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Sidecar {
    pub manifest: RunManifest,
    pub config: serde_json::Value,
    pub summary: Summary,
    pub diagnostics: BTreeMap<String, Diagnostic>,
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

/// Paths of the CSV and sidecar for an experiment name.
pub fn output_paths(dir: &Path, name: &str) -> (PathBuf, PathBuf) {
    (dir.join(format!("{name}.csv")), dir.join(format!("{name}.json")))
}

pub fn write_results(
    output: &ExperimentOutput,
    cfg: &ExperimentConfig,
    config: serde_json::Value,
    manifest: RunManifest,
) -> Result<(PathBuf, PathBuf), CliError> {
    let dir = manifest.output_dir.clone();
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let (csv_path, json_path) = output_paths(&dir, cfg.name());
    let bytes = rows_to_csv(&output.rows).map_err(|e| CliError::Io {
        path: csv_path.clone(),
        source: std::io::Error::other(e),
    })?;
    let sidecar = Sidecar {
        manifest,
        config,
        summary: Summary {
            kind: cfg.kind().to_string(),
            rows: output.rows.len(),
            failed: output.rows.iter().filter(|r| !r.passed).count(),
        },
        diagnostics: output.diagnostics.clone(),
    };
    let mut json = serde_json::to_vec_pretty(&sidecar).map_err(|e| CliError::Io {
        path: json_path.clone(),
        source: std::io::Error::other(e),
    })?;
    json.push(b'\n');
    write_atomic(&csv_path, &bytes)?;
    write_atomic(&json_path, &json)?;
    Ok((csv_path, json_path))
}
