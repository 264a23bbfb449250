//! Model configuration: TOML file, command-line flags, and the expansion of
//! named models into a canonical potential.
//!
//! ```toml
//! [model]
//! name = "sc"
//! alpha = 1.0
//! R = 8.0
//!
//! [potential]      # used when no model name is given
//! 2 = 1.0
//! -2 = 110.0
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use clap::Args;
use serde::Deserialize;
use spikedtrio::trigform::PotentialSpec;

use crate::error::{CliError, CliResult};

/// Model selection flags shared by the model-driven subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// calogero | sc | sqao | cubic | custom
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    /// Spiked cubic: coefficient α of α² ρ³ sin3φ.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Spiked cubic: coefficient β of β² / (ρ² sin²3φ).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Spiked cubic: place the minimum at ρ = R (sets β² = (3/2) α² R⁵).
    #[arg(long = "R")]
    pub r: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Force term `m:coupling`; repeatable. Replaces the file's [potential].
    #[arg(long = "term", allow_hyphen_values = true)]
    pub terms: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    model: Option<ModelTable>,
    potential: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelTable {
    name: Option<String>,
    omega: Option<f64>,
    nu: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    #[serde(rename = "R")]
    r: Option<f64>,
    gamma: Option<f64>,
    lambda: Option<f64>,
}

/// A fully resolved model.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: PotentialSpec,
    /// Human-readable model description used in outputs.
    pub label: String,
}

fn parse_term(raw: &str) -> CliResult<(i32, f64)> {
    let (m, c) = raw
        .split_once(':')
        .ok_or_else(|| CliError::Config(format!("--term '{raw}': expected m:coupling")))?;
    let m = m
        .trim()
        .parse::<i32>()
        .map_err(|e| CliError::Config(format!("--term '{raw}': exponent: {e}")))?;
    let c = c
        .trim()
        .parse::<f64>()
        .map_err(|e| CliError::Config(format!("--term '{raw}': coupling: {e}")))?;
    Ok((m, c))
}

fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    toml::from_str(&text).map_err(|e| CliError::ConfigFile {
        path: path.to_path_buf(),
        message: e.to_string().trim_end().to_string(),
    })
}

fn require(value: Option<f64>, field: &str, model: &str) -> CliResult<f64> {
    let v = value.ok_or_else(|| CliError::Config(format!("model '{model}' needs --{field}")))?;
    if !v.is_finite() {
        return Err(CliError::Config(format!("--{field} must be finite, got {v}")));
    }
    Ok(v)
}

impl RunConfig {
    /// Merges `file` (if any) with `flags`, flags winning field by field.
    pub fn resolve(flags: &ModelArgs, file: Option<&Path>) -> CliResult<Self> {
        let file = match file {
            Some(path) => load_file(path)?,
            None => FileConfig::default(),
        };
        let table = file.model.unwrap_or_default();
        let pick = |flag: Option<f64>, from_file: Option<f64>| flag.or(from_file);
        let omega = pick(flags.omega, table.omega);
        let nu = pick(flags.nu, table.nu);
        let alpha = pick(flags.alpha, table.alpha);
        let beta = pick(flags.beta, table.beta);
        let r = pick(flags.r, table.r);
        let gamma = pick(flags.gamma, table.gamma);
        let lambda = pick(flags.lambda, table.lambda);

        let terms: Vec<(i32, f64)> = if !flags.terms.is_empty() {
            flags.terms.iter().map(|t| parse_term(t)).collect::<CliResult<_>>()?
        } else {
            file.potential
                .unwrap_or_default()
                .into_iter()
                .map(|(key, c)| {
                    key.trim().parse::<i32>().map(|m| (m, c)).map_err(|_| {
                        CliError::Config(format!(
                            "[potential] key '{key}' is not an integer exponent"
                        ))
                    })
                })
                .collect::<CliResult<_>>()?
        };

        let name = flags
            .model
            .clone()
            .or(table.name)
            .unwrap_or_else(|| if terms.is_empty() { String::new() } else { "custom".into() });
        let name = name.to_ascii_lowercase();

        let (spec, label) = match name.as_str() {
            "calogero" => {
                let (w, n) = (require(omega, "omega", &name)?, require(nu, "nu", &name)?);
                (PotentialSpec::calogero(w, n)?, format!("calogero omega={w} nu={n}"))
            }
            "sqao" => {
                let w = require(omega, "omega", &name)?;
                let l = require(lambda, "lambda", &name)?;
                let n = require(nu, "nu", &name)?;
                (
                    PotentialSpec::sqao(w, l, n)?,
                    format!("sqao omega={w} lambda={l} nu={n}"),
                )
            }
            "cubic" => {
                let w = require(omega, "omega", &name)?;
                let g = require(gamma, "gamma", &name)?;
                let n = require(nu, "nu", &name)?;
                (
                    PotentialSpec::cubic_anharmonic(w, g, n)?,
                    format!("cubic omega={w} gamma={g} nu={n}"),
                )
            }
            "sc" => {
                let a = require(alpha, "alpha", &name)?;
                let a2 = a * a;
                match (beta, r) {
                    (Some(_), Some(_)) => {
                        return Err(CliError::Config(
                            "model 'sc' takes either --beta or --R, not both".into(),
                        ))
                    }
                    (Some(b), None) => {
                        let b = require(Some(b), "beta", &name)?;
                        (PotentialSpec::spiked_cubic(a2, b * b)?, format!("sc alpha={a} beta={b}"))
                    }
                    (None, Some(radius)) => {
                        let radius = require(Some(radius), "R", &name)?;
                        (
                            PotentialSpec::spiked_cubic_at_radius(a2, radius)?,
                            format!("sc alpha={a} R={radius}"),
                        )
                    }
                    (None, None) => {
                        return Err(CliError::Config("model 'sc' needs --beta or --R".into()))
                    }
                }
            }
            "custom" => {
                if terms.is_empty() {
                    return Err(CliError::Config(
                        "model 'custom' needs --term m:coupling or a [potential] table".into(),
                    ));
                }
                let spec = PotentialSpec::new(terms)?;
                let label = format!("custom {spec}");
                (spec, label)
            }
            "" => {
                return Err(CliError::Config(
                    "no model: pass --model, --term, or a config with [model]/[potential]".into(),
                ))
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown model '{other}' (expected calogero, sc, sqao, cubic, custom)"
                )))
            }
        };
        Ok(Self { spec, label })
    }
}

/// `"MxN"`, or `"K"` for `KxK`.
pub fn parse_pair(raw: &str, what: &str) -> CliResult<(usize, usize)> {
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|e| CliError::Config(format!("--{what} '{raw}': {e}")))
    };
    match raw.split_once(['x', 'X']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => {
            let k = parse(raw)?;
            Ok((k, k))
        }
    }
}

/// `"lo:hi"`, inclusive.
pub fn parse_range(raw: &str) -> CliResult<(i32, i32)> {
    let err = |detail: String| CliError::Config(format!("--m-range '{raw}': {detail}"));
    let (lo, hi) = raw
        .split_once(':')
        .ok_or_else(|| err("expected lo:hi".into()))?;
    let lo = lo.trim().parse::<i32>().map_err(|e| err(e.to_string()))?;
    let hi = hi.trim().parse::<i32>().map_err(|e| err(e.to_string()))?;
    if lo > hi {
        return Err(err("lo exceeds hi".into()));
    }
    Ok((lo, hi))
}
