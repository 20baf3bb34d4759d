//! Where a photon-number distribution comes from: a named family or a JSON file.
//!
//! File schema:
//!
//! ```json
//! {"probs": [0.75, 0.0, 0.25], "tail_bound": 0.0}
//! ```
//!
//! `probs[n]` is the probability of `n` photons. `tail_bound` is optional (default 0)
//! and bounds the mass beyond the last entry. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use photon_npt_core::{validate_pnd, Family, FamilySpec, PhotonNumberDistribution};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PndFile {
    probs: Vec<f64>,
    #[serde(default)]
    tail_bound: f64,
}

pub fn load_pnd_file(path: &Path) -> Result<PhotonNumberDistribution> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let file: PndFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse { path: path.to_path_buf(), message: e.to_string() })?;
    Ok(validate_pnd(&file.probs, file.tail_bound)?)
}

/// Echo of the input, as it appears in reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputSource {
    Family(FamilySpec),
    PndFile { path: String },
}

impl InputSource {
    pub fn build(&self) -> Result<PhotonNumberDistribution> {
        match self {
            InputSource::Family(spec) => Ok(spec.build()?),
            InputSource::PndFile { path } => load_pnd_file(Path::new(path)),
        }
    }
}

/// `k=v` with a finite numeric value.
pub fn parse_param(raw: &str) -> Result<(String, f64)> {
    let (key, value) =
        raw.split_once('=').ok_or_else(|| CliError::BadFlag(format!("--param `{raw}`: expected key=value")))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(CliError::BadFlag(format!("--param `{raw}`: empty key")));
    }
    let value: f64 =
        value.trim().parse().map_err(|_| CliError::BadFlag(format!("--param `{raw}`: `{value}` is not a number")))?;
    if !value.is_finite() {
        return Err(CliError::BadFlag(format!("--param `{raw}`: value must be finite")));
    }
    Ok((key.to_string(), value))
}

pub fn parse_params(raw: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut params = BTreeMap::new();
    for item in raw {
        let (key, value) = parse_param(item)?;
        if params.insert(key.clone(), value).is_some() {
            return Err(CliError::BadFlag(format!("--param `{key}` given twice")));
        }
    }
    Ok(params)
}

pub fn parse_family(raw: &str) -> Result<Family> {
    raw.parse().map_err(|e: photon_npt_core::states::UnknownFamily| CliError::BadFlag(e.to_string()))
}

/// Resolves the mutually exclusive `--family`/`--pnd-file` flags.
pub fn resolve(
    family: Option<&str>,
    params: &[String],
    pnd_file: Option<&PathBuf>,
    tail_target: f64,
) -> Result<InputSource> {
    match (family, pnd_file) {
        (Some(name), None) => {
            let mut spec = FamilySpec::new(parse_family(name)?, tail_target);
            spec.params = parse_params(params)?;
            Ok(InputSource::Family(spec))
        }
        (None, Some(path)) => {
            if !params.is_empty() {
                return Err(CliError::BadFlag("--param needs --family".into()));
            }
            Ok(InputSource::PndFile { path: path.display().to_string() })
        }
        (Some(_), Some(_)) => Err(CliError::BadFlag("give either --family or --pnd-file, not both".into())),
        (None, None) => Err(CliError::BadFlag("one of --family or --pnd-file is required".into())),
    }
}
