//! One function per subcommand, each returning the rendered output.

use std::fmt::Write as _;

use serde::Serialize;
use spikedtrio::eigensolver::{
    detect_separability, separable_radial_grid, solve_radial, solve_separable,
    solve_wedge_refined, EigenOptions, EigenResult, Grid1D, LinearSolver, WedgeGrid,
};
use spikedtrio::format::significant;
use spikedtrio::landscape::{classify, landscape_report, Confinement, LandscapeReport};
use spikedtrio::osculation::{
    approximate_spectrum, harmonic_approximation, radial_taylor, rho_approx_spectrum,
    sho_exact_spectrum, sho_osculate, RadialPotential, MAX_TAYLOR_ORDER,
};
use spikedtrio::trigform::{closed_form_omega, TrigFormJson};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

const CSV_DIGITS: usize = 12;

fn json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("plain data serializes");
    out.push('\n');
    out
}

fn unsupported(command: &str, format: Format) -> CliError {
    CliError::Config(format!("{command} does not support --format {format:?}").to_lowercase())
}

// ── identities ───────────────────────────────────────────────────────

pub fn identities(lo: i32, hi: i32, format: Format) -> CliResult<String> {
    let forms = (lo..=hi)
        .filter(|m| *m != 0)
        .map(closed_form_omega)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match format {
        Format::Text => forms.iter().map(|f| format!("{f}\n")).collect(),
        Format::Json => json(&forms.iter().map(|f| f.to_json()).collect::<Vec<TrigFormJson>>()),
        Format::Csv => {
            let mut out = String::from("m,sqrt2_power,power,coefficient\n");
            for f in &forms {
                for (k, c) in f.poly.terms() {
                    let _ = writeln!(out, "{},{},{},{}", f.m, f.m, k, c);
                }
            }
            out
        }
    })
}

// ── landscape ────────────────────────────────────────────────────────

#[derive(Serialize)]
struct LandscapeOutput<'a> {
    model: &'a str,
    spec: String,
    confinement: Confinement,
    #[serde(flatten)]
    report: LandscapeReport,
}

pub fn landscape(cfg: &RunConfig, rhos: &[f64], format: Format) -> CliResult<String> {
    let report = landscape_report(&cfg.spec, rhos)?;
    Ok(match format {
        Format::Json => json(&LandscapeOutput {
            model: &cfg.label,
            spec: cfg.spec.to_string(),
            confinement: classify(&cfg.spec),
            report,
        }),
        Format::Csv => {
            let mut out = String::from("rho,phi\n");
            for sample in &report.angular_minima_sample {
                for phi in &sample.phi {
                    let _ = writeln!(
                        out,
                        "{},{}",
                        significant(sample.rho, CSV_DIGITS),
                        significant(*phi, CSV_DIGITS)
                    );
                }
            }
            out
        }
        Format::Text => return Err(unsupported("landscape", format)),
    })
}

// ── spectrum ─────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SpectrumSource {
    /// Strong-repulsion harmonic approximation.
    Harmonic,
    /// Exact angular/radial split (exponents in {2, 4, -2} only).
    Separable,
}

pub fn spectrum(
    cfg: &RunConfig,
    levels_m: usize,
    levels_n: usize,
    source: SpectrumSource,
    format: Format,
) -> CliResult<String> {
    if levels_m == 0 || levels_n == 0 {
        return Err(CliError::Config("--levels must be positive".into()));
    }
    let table = match source {
        SpectrumSource::Harmonic => {
            let h = harmonic_approximation(&cfg.spec)?;
            approximate_spectrum(&h, levels_m as u32, levels_n as u32, &cfg.spec.to_string())
        }
        SpectrumSource::Separable => {
            let grid = separable_radial_grid(&cfg.spec, levels_n, levels_m)?;
            solve_separable(&cfg.spec, levels_n, levels_m, &grid)?
        }
    };
    Ok(match format {
        Format::Csv => table.to_csv(),
        Format::Json => json(&table),
        Format::Text => return Err(unsupported("spectrum", format)),
    })
}

// ── validate ─────────────────────────────────────────────────────────

#[derive(Serialize)]
struct LevelComparison {
    index: usize,
    m: u32,
    n: u32,
    harmonic: f64,
    numeric: f64,
    rel_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    separable: Option<f64>,
}

#[derive(Serialize)]
struct NumericDetail {
    method: String,
    coarse: EigenResult,
    fine: EigenResult,
    disagreement: Vec<f64>,
}

#[derive(Serialize)]
struct ValidateOutput<'a> {
    model: &'a str,
    spec: String,
    levels: Vec<LevelComparison>,
    numeric: NumericDetail,
}

pub struct ValidateOptions {
    pub levels: usize,
    pub n_rho: usize,
    pub n_phi: usize,
    pub tolerance: Option<f64>,
    pub solver: LinearSolver,
}

pub fn validate(cfg: &RunConfig, opts: &ValidateOptions, format: Format) -> CliResult<String> {
    let k = opts.levels;
    let h = harmonic_approximation(&cfg.spec)?;
    let mut ladder = approximate_spectrum(&h, k as u32, k as u32, "").entries;
    ladder.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    ladder.truncate(k);

    let grid = WedgeGrid::around_minimum(&h, k, opts.n_rho, opts.n_phi)?;
    let options = EigenOptions {
        solver: opts.solver,
        ..EigenOptions::default()
    };
    let refined = solve_wedge_refined(&cfg.spec, &grid, k, &options, opts.tolerance)?;

    let separable = if detect_separability(&cfg.spec).is_some() {
        let g = separable_radial_grid(&cfg.spec, k, k)?;
        Some(solve_separable(&cfg.spec, k, k, &g)?.sorted_energies())
    } else {
        None
    };

    let levels: Vec<LevelComparison> = ladder
        .iter()
        .zip(&refined.extrapolated)
        .enumerate()
        .map(|(index, (entry, &numeric))| LevelComparison {
            index,
            m: entry.m,
            n: entry.n,
            harmonic: entry.energy,
            numeric,
            rel_error: (entry.energy - numeric).abs() / numeric.abs(),
            separable: separable.as_ref().map(|s| s[index]),
        })
        .collect();

    Ok(match format {
        Format::Json => json(&ValidateOutput {
            model: &cfg.label,
            spec: cfg.spec.to_string(),
            numeric: NumericDetail {
                method: refined.fine.method.clone(),
                coarse: refined.coarse,
                fine: refined.fine,
                disagreement: refined.disagreement,
            },
            levels,
        }),
        Format::Csv => {
            let mut out = String::from("index,m,n,harmonic,numeric,rel_error\n");
            for l in &levels {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    l.index,
                    l.m,
                    l.n,
                    significant(l.harmonic, CSV_DIGITS),
                    significant(l.numeric, CSV_DIGITS),
                    significant(l.rel_error, CSV_DIGITS)
                );
            }
            out
        }
        Format::Text => return Err(unsupported("validate", format)),
    })
}

// ── osculate1d ───────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RadialModel {
    /// Inverse-cubic well `F r³ + G / r³`.
    Ue,
    /// Spiked harmonic oscillator `ω² r² + ν(ν+1) / r²`.
    Sho,
}

#[derive(Serialize)]
struct RadialLevel {
    m: u32,
    harmonic: f64,
    numeric: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<f64>,
}

#[derive(Serialize)]
struct OsculatingSho {
    f0: f64,
    g0: f64,
}

#[derive(Serialize)]
struct OsculateOutput {
    potential: Vec<(i32, f64)>,
    r: f64,
    taylor: Vec<f64>,
    levels: Vec<RadialLevel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    osculating_sho: Option<OsculatingSho>,
}

pub struct RadialParams {
    pub model: RadialModel,
    pub f: Option<f64>,
    pub g: Option<f64>,
    pub omega: Option<f64>,
    pub nu: Option<f64>,
    pub levels: usize,
}

pub fn osculate1d(p: &RadialParams, format: Format) -> CliResult<String> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| CliError::Config(format!("osculate1d needs --{name}")))
    };
    if p.levels == 0 {
        return Err(CliError::Config("--levels must be positive".into()));
    }
    let (v, sho, exact_nu) = match p.model {
        RadialModel::Ue => {
            let (f, g) = (need(p.f, "F")?, need(p.g, "G")?);
            let (f0, g0) = sho_osculate(f, g)?;
            (
                RadialPotential::inverse_cubic(f, g)?,
                Some(OsculatingSho { f0, g0 }),
                None,
            )
        }
        RadialModel::Sho => {
            let (omega, nu) = (need(p.omega, "omega")?, need(p.nu, "nu")?);
            (RadialPotential::spiked_harmonic(omega, nu)?, None, Some((omega, nu)))
        }
    };
    let taylor = radial_taylor(&v, MAX_TAYLOR_ORDER)?;
    let approx = rho_approx_spectrum(&v, p.levels as u32)?;
    let grid = Grid1D::default_for(&v, p.levels)?;
    let numeric = solve_radial(&v, &grid, p.levels)?;
    let levels: Vec<RadialLevel> = approx
        .entries
        .iter()
        .zip(&numeric.values)
        .map(|(e, &num)| RadialLevel {
            m: e.m,
            harmonic: e.energy,
            numeric: num,
            exact: exact_nu.map(|(omega, nu)| sho_exact_spectrum(omega, nu, e.m)),
        })
        .collect();
    Ok(match format {
        Format::Json => json(&OsculateOutput {
            potential: v.terms.clone(),
            r: taylor.r,
            taylor: taylor.coefficients,
            levels,
            osculating_sho: sho,
        }),
        Format::Csv => {
            let mut out = String::from("m,harmonic,numeric\n");
            for l in &levels {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    l.m,
                    significant(l.harmonic, CSV_DIGITS),
                    significant(l.numeric, CSV_DIGITS)
                );
            }
            out
        }
        Format::Text => return Err(unsupported("osculate1d", format)),
    })
}
