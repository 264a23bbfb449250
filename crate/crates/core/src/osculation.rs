//! Strong-repulsion harmonic approximation.
//!
//! Near the absolute minimum `(R, π/6)` the wedge potential is replaced by
//! `Ω_min + k_ρ ξ² + k_η η²` with `ρ = R + ξ`, `φ = π/6 + η/R`, and the
//! angular kinetic term `ρ⁻² ∂φ²` by `∂η²`. The two oscillators give
//! `E_{m,n} = Ω_min + √k_ρ (2m+1) + √k_η (2n+1)`, with corrections that
//! shrink with `1/R`. The same matching of value and curvature at a minimum
//! is applied to one-dimensional radial wells.

use crate::error::{Error, Result};
use crate::format::significant;
use crate::landscape::{self, Confinement};
use crate::trigform::PotentialSpec;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_6;
use std::fmt::Write as _;

/// `V(r) = Σ coeff · r^p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialPotential {
    pub terms: Vec<(i32, f64)>,
}

impl RadialPotential {
    pub fn new<I: IntoIterator<Item = (i32, f64)>>(terms: I) -> Result<Self> {
        let terms: Vec<(i32, f64)> = terms.into_iter().filter(|&(_, c)| c != 0.0).collect();
        if terms.is_empty() {
            return Err(Error::InvalidSpec("radial potential has no terms".into()));
        }
        if let Some(&(p, c)) = terms.iter().find(|(_, c)| !c.is_finite()) {
            return Err(Error::InvalidSpec(format!("coefficient {c} of r^{p} is not finite")));
        }
        Ok(Self { terms })
    }

    /// Spiked harmonic oscillator `ω² r² + ν(ν+1)/r²`.
    pub fn spiked_harmonic(omega: f64, nu: f64) -> Result<Self> {
        Self::new([(2, omega * omega), (-2, nu * (nu + 1.0))])
    }

    /// `F r³ + G/r³`.
    pub fn inverse_cubic(f: f64, g: f64) -> Result<Self> {
        Self::new([(3, f), (-3, g)])
    }

    /// Spiked quartic oscillator `ω² r² + λ r⁴ + ν(ν+1)/r²`.
    pub fn spiked_quartic(omega: f64, lambda: f64, nu: f64) -> Result<Self> {
        Self::new([(2, omega * omega), (4, lambda), (-2, nu * (nu + 1.0))])
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.terms.iter().map(|&(p, c)| c * r.powi(p)).sum()
    }

    /// Exact `j`-th derivative.
    pub fn derivative(&self, r: f64, j: u32) -> f64 {
        self.terms
            .iter()
            .map(|&(p, c)| {
                let falling: f64 = (0..j as i32).map(|i| (p - i) as f64).product();
                c * falling * r.powi(p - j as i32)
            })
            .sum()
    }

    pub fn is_confining(&self) -> bool {
        self.terms
            .iter()
            .filter(|&&(p, _)| p > 0)
            .max_by_key(|&&(p, _)| p)
            .is_some_and(|&(_, c)| c > 0.0)
    }

    pub fn is_spiked(&self) -> bool {
        self.terms
            .iter()
            .filter(|&&(p, _)| p < 0)
            .min_by_key(|&&(p, _)| p)
            .is_some_and(|&(_, c)| c > 0.0)
    }

    /// Same potential plus `extra · r^p`.
    pub fn with_term(&self, p: i32, extra: f64) -> Self {
        let mut terms = self.terms.clone();
        match terms.iter_mut().find(|(q, _)| *q == p) {
            Some(t) => t.1 += extra,
            None => terms.push((p, extra)),
        }
        terms.retain(|&(_, c)| c != 0.0);
        Self { terms }
    }
}

/// Location of the minimum and Taylor coefficients `c_j = V^(j)(R)/j!`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialTaylor {
    pub r: f64,
    pub coefficients: Vec<f64>,
}

pub const MAX_TAYLOR_ORDER: usize = 4;

pub fn radial_taylor(v: &RadialPotential, order: usize) -> Result<RadialTaylor> {
    if order > MAX_TAYLOR_ORDER {
        return Err(Error::Domain(format!(
            "Taylor order {order} exceeds {MAX_TAYLOR_ORDER}"
        )));
    }
    if !(v.is_confining() && v.is_spiked()) {
        return Err(Error::NoMinimum(
            "radial well needs a confining outer term and a repulsive inner spike".into(),
        ));
    }
    let r = landscape::minimize_radial(|r| v.derivative(r, 1), |r| v.derivative(r, 2))?;
    let mut factorial = 1.0;
    let coefficients = (0..=order)
        .map(|j| {
            if j > 0 {
                factorial *= j as f64;
            }
            v.derivative(r, j as u32) / factorial
        })
        .collect();
    Ok(RadialTaylor { r, coefficients })
}

/// Closed-form spectrum `ω(4n + 2ν + 3)` of `-d²/dr² + ω²r² + ν(ν+1)/r²`.
pub fn sho_exact_spectrum(omega: f64, nu: f64, n: u32) -> f64 {
    omega * (4.0 * n as f64 + 2.0 * nu + 3.0)
}

/// Spiked harmonic well `F0 r² + G0/r²` osculating `F r³ + G/r³`: same
/// minimum `R = (G/F)^{1/6}` and same curvature `9√(GF)/R²`, up to a
/// constant shift. Returns `(F0, G0) = ((9/4)(G F⁵)^{1/6}, (9/4)(G⁵ F)^{1/6})`.
pub fn sho_osculate(f: f64, g: f64) -> Result<(f64, f64)> {
    if !(f > 0.0 && g > 0.0) {
        return Err(Error::Domain(format!("F and G must be positive, got {f}, {g}")));
    }
    let f0 = 2.25 * (g * f.powi(5)).powf(1.0 / 6.0);
    let g0 = 2.25 * (g.powi(5) * f).powf(1.0 / 6.0);
    Ok((f0, g0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMethod {
    Harmonic,
    Numeric2d,
    Separable,
}

impl SpectrumMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectrumMethod::Harmonic => "harmonic",
            SpectrumMethod::Numeric2d => "numeric-2d",
            SpectrumMethod::Separable => "separable",
        }
    }
}

/// One level; `m` counts radial and `n` angular excitations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub m: u32,
    pub n: u32,
    #[serde(rename = "E")]
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub spec: String,
    pub method: SpectrumMethod,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumTable {
    pub fn energy(&self, m: u32, n: u32) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.m == m && e.n == n)
            .map(|e| e.energy)
    }

    /// Energies in ascending order regardless of labels.
    pub fn sorted_energies(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.entries.iter().map(|e| e.energy).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// `m,n,E,method` rows with 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,E,method\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                e.m,
                e.n,
                significant(e.energy, 12),
                self.method.as_str()
            );
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicApproximation {
    pub r: f64,
    pub phi0: f64,
    pub omega_min: f64,
    pub k_rho: f64,
    pub k_eta: f64,
    pub error_scale: f64,
}

impl HarmonicApproximation {
    /// Oscillator lengths `k^{-1/4}` in `ρ` and in `η = R(φ - π/6)`.
    pub fn lengths(&self) -> (f64, f64) {
        (self.k_rho.powf(-0.25), self.k_eta.powf(-0.25))
    }

    pub fn energy(&self, m: u32, n: u32) -> f64 {
        self.omega_min
            + self.k_rho.sqrt() * (2 * m + 1) as f64
            + self.k_eta.sqrt() * (2 * n + 1) as f64
    }
}

pub fn harmonic_approximation(spec: &PotentialSpec) -> Result<HarmonicApproximation> {
    if landscape::classify(spec) != Confinement::Confining {
        return Err(Error::NoMinimum(format!("potential {spec} is not confining")));
    }
    if !landscape::has_repulsive_spike(spec) {
        return Err(Error::InvalidSpec(format!(
            "potential {spec} has no repulsive short-range term"
        )));
    }
    let (r, omega_min) = landscape::symmetry_line_minimum(spec)?;
    let (k_rho, k_eta) = landscape::hessian_at_minimum(spec, r, FRAC_PI_6)?;
    Ok(HarmonicApproximation {
        r,
        phi0: FRAC_PI_6,
        omega_min,
        k_rho,
        k_eta,
        error_scale: 1.0 / r,
    })
}

/// `E_{m,n}` for `m < levels_m`, `n < levels_n`, `m` outer.
pub fn approximate_spectrum(
    h: &HarmonicApproximation,
    levels_m: u32,
    levels_n: u32,
    spec_label: &str,
) -> SpectrumTable {
    let entries = (0..levels_m)
        .flat_map(|m| (0..levels_n).map(move |n| (m, n)))
        .map(|(m, n)| SpectrumEntry {
            m,
            n,
            energy: h.energy(m, n),
        })
        .collect();
    SpectrumTable {
        spec: spec_label.to_string(),
        method: SpectrumMethod::Harmonic,
        entries,
    }
}

/// One-dimensional harmonic approximation `E_m = c0 + √c2 (2m+1)`.
pub fn rho_approx_spectrum(v: &RadialPotential, levels: u32) -> Result<SpectrumTable> {
    let taylor = radial_taylor(v, 2)?;
    let (c0, c2) = (taylor.coefficients[0], taylor.coefficients[2]);
    if c2 <= 0.0 {
        return Err(Error::NonConvex(c2));
    }
    let entries = (0..levels)
        .map(|m| SpectrumEntry {
            m,
            n: 0,
            energy: c0 + c2.sqrt() * (2 * m + 1) as f64,
        })
        .collect();
    Ok(SpectrumTable {
        spec: format!("{:?}", v.terms),
        method: SpectrumMethod::Harmonic,
        entries,
    })
}
