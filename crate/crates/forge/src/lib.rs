//! Runner for orange-slice holonomy experiments: JSON configs in, JSON or
//! CSV reports out.

pub mod config;
pub mod error;
pub mod output;
pub mod report;
pub mod run;

use std::fs;
use std::path::{Path, PathBuf};

pub use config::{ExperimentConfig, Format};
pub use error::CliError;
pub use report::RunReport;
pub use run::{execute, RunOptions};

/// Published schema of experiment configs.
pub const EXPERIMENT_SCHEMA: &str = include_str!("../schema/experiment.schema.json");
/// Published schema of run reports.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

/// Where and how to write a report.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OutputOverrides {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    ExperimentConfig::from_json(&text)
}

/// Runs a config file and writes the rendered report. Returns the rendered
/// text and the path written, if any; without a path the caller prints it.
pub fn run_file(
    config_path: &Path,
    overrides: &OutputOverrides,
    opts: &RunOptions,
) -> Result<(String, Option<PathBuf>), CliError> {
    let config = load_config(config_path)?;
    let file_output = config.output.clone().unwrap_or_default();
    let path = overrides.path.clone().or(file_output.path);
    let format = overrides
        .format
        .or(file_output.format)
        .or_else(|| match path.as_ref()?.extension()?.to_str()? {
            "csv" => Some(Format::Csv),
            _ => None,
        })
        .unwrap_or(Format::Json);
    let report = execute(&config, opts)?;
    let text = output::render(&report, format)?;
    if let Some(p) = &path {
        fs::write(p, &text).map_err(|e| CliError::io(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok((text, path))
}
