//! Exact closed forms of the three-body power-law potentials in polar Jacobi
//! coordinates.
//!
//! For an integer `m ≠ 0` the total two-body sum
//! `Ω^(m)(ρ, φ) = Σ_k d_k^m` over the three pair differences collapses to
//! `(√2)^m ρ^m p_m(t)` with `t = sin 3φ` and `p_m` a Laurent polynomial with
//! rational coefficients. The pair differences are taken in the orientation
//! `(x2 - x1, x3 - x2, x1 - x3) = -√2 ρ sin(φ + 2πk/3)`, under which the odd
//! forms are non-negative inside the wedge `0 < φ < π/3`. Even forms do not
//! depend on the orientation.
//!
//! The scaled differences `s_k = -sin(φ + 2πk/3)` are the roots of
//! `s³ - (3/4) s - t/4`, so their power sums obey Newton's identities with
//! `e1 = 0`, `e2 = -3/4`, `e3 = t/4`.

use crate::coordinates::{pair_differences, PolarConfig};
use crate::error::{Error, Result};
use crate::polynomial::{rational, RationalLaurentPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::SQRT_2;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

/// Pair differences below `SINGULAR_REL_EPS · ρ` make inverse powers singular.
pub const SINGULAR_REL_EPS: f64 = 1e-12;

/// Power sum `p_m(t) = Σ_k s_k^m` of the three scaled pair differences.
///
/// Positive `m` use `p_k = (3/4) p_{k-2} + (t/4) p_{k-3}` seeded with
/// `p_1 = 0, p_2 = 3/2, p_3 = 3t/4`. Negative `m` work with the reciprocal
/// roots, whose power sums obey `q_k = (-3/t) q_{k-1} + (4/t) q_{k-3}` from
/// `q_0 = 3, q_1 = -3/t, q_2 = 9/t²`.
pub fn power_sum(m: i32) -> Result<RationalLaurentPoly> {
    if m == 0 {
        return Err(Error::ZeroExponent);
    }
    let n = m.unsigned_abs() as usize;
    let mut seq: Vec<RationalLaurentPoly> = Vec::with_capacity(n + 1);
    if m > 0 {
        seq.push(RationalLaurentPoly::constant(rational(3, 1)));
        seq.push(RationalLaurentPoly::zero());
        seq.push(RationalLaurentPoly::constant(rational(3, 2)));
        let a = RationalLaurentPoly::constant(rational(3, 4));
        let b = RationalLaurentPoly::monomial(1, rational(1, 4));
        for k in 3..=n {
            let next = if k == 3 {
                RationalLaurentPoly::monomial(1, rational(3, 4))
            } else {
                &(&a * &seq[k - 2]) + &(&b * &seq[k - 3])
            };
            seq.push(next);
        }
    } else {
        seq.push(RationalLaurentPoly::constant(rational(3, 1)));
        seq.push(RationalLaurentPoly::monomial(-1, rational(-3, 1)));
        seq.push(RationalLaurentPoly::monomial(-2, rational(9, 1)));
        let a = RationalLaurentPoly::monomial(-1, rational(-3, 1));
        let b = RationalLaurentPoly::monomial(-1, rational(4, 1));
        for k in 3..=n {
            let next = &(&a * &seq[k - 1]) + &(&b * &seq[k - 3]);
            seq.push(next);
        }
    }
    Ok(seq.swap_remove(n))
}

/// `Ω^(m)(ρ, φ) = (√2)^m ρ^m poly(sin 3φ)`; the surd is carried as the
/// integer exponent `m`, never inside `poly`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigForm {
    pub m: i32,
    pub poly: RationalLaurentPoly,
}

/// JSON shape of a [`TrigForm`]: `{"m", "sqrt2_power", "coefficients"}`
/// with coefficients keyed by power and written as `"num/den"`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TrigFormJson {
    pub m: i32,
    pub sqrt2_power: i32,
    pub coefficients: BTreeMap<i32, String>,
}

fn two_pow(e: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(2u32).pow(e))
}

impl TrigForm {
    pub fn sqrt2_power(&self) -> i32 {
        self.m
    }

    /// Coefficients of `Ω^(m)/ρ^m` with `(√2)^m` folded in. The result is
    /// `(surd, poly)`: the form equals `surd · poly(t)` where `surd` is
    /// `1` for even `m` and `√2` for odd `m` (returned as `false`/`true`).
    pub fn rho_scaled(&self) -> (bool, RationalLaurentPoly) {
        let odd = self.m % 2 != 0;
        let half = self.m.div_euclid(2);
        let factor = if half >= 0 {
            two_pow(half as u32)
        } else {
            two_pow(half.unsigned_abs()).recip()
        };
        (odd, self.poly.scale(&factor))
    }

    /// For `m = -k < 0`: `poly / (-3/t)^k`, so that
    /// `Ω^(-k) = [Ω^(-1)]^k · factor(t)`. `None` for positive `m`.
    pub fn spike_factor(&self) -> Option<RationalLaurentPoly> {
        if self.m > 0 {
            return None;
        }
        let k = self.m.unsigned_abs();
        let base = BigRational::from_integer(BigInt::from(-3)).pow(k as i32);
        Some(self.poly.shift(self.m.abs()).scale(&base.recip()))
    }

    pub fn eval(&self, rho: f64, t: f64) -> f64 {
        SQRT_2.powi(self.m) * rho.powi(self.m) * self.poly.eval(t)
    }

    pub fn to_json(&self) -> TrigFormJson {
        TrigFormJson {
            m: self.m,
            sqrt2_power: self.m,
            coefficients: self
                .poly
                .terms()
                .map(|(k, c)| (k, format!("{}/{}", c.numer(), c.denom())))
                .collect(),
        }
    }
}

impl fmt::Display for TrigForm {
    /// e.g. `Ω^(6) = ρ^6 [27/4 + 3/2 s^2]`, `s = sin 3φ`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (surd, scaled) = self.rho_scaled();
        let root = if surd { "√2 " } else { "" };
        write!(f, "Ω^({}) = {root}ρ^{} [{}]", self.m, self.m, scaled.display("s"))?;
        if let Some(factor) = self.spike_factor() {
            write!(f, " = [Ω^(-1)]^{} [{}]", -self.m, factor.display("s"))?;
        }
        Ok(())
    }
}

fn memo() -> &'static RwLock<HashMap<i32, Arc<TrigForm>>> {
    static MEMO: OnceLock<RwLock<HashMap<i32, Arc<TrigForm>>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Closed form of `Ω^(m)`, generated once per process and shared.
pub fn closed_form_omega(m: i32) -> Result<Arc<TrigForm>> {
    if m == 0 {
        return Err(Error::ZeroExponent);
    }
    if let Some(form) = memo().read().expect("memo lock poisoned").get(&m) {
        return Ok(Arc::clone(form));
    }
    let form = Arc::new(TrigForm { m, poly: power_sum(m)? });
    let mut table = memo().write().expect("memo lock poisoned");
    Ok(Arc::clone(table.entry(m).or_insert(form)))
}

fn check_regular(m: i32, p: PolarConfig, rel_eps: f64) -> Result<(f64, f64, f64)> {
    let d = pair_differences(p);
    if m < 0 {
        let threshold = rel_eps * p.rho.abs();
        for v in [d.0, d.1, d.2] {
            if v.abs() < threshold || v == 0.0 {
                return Err(Error::SingularConfiguration {
                    m,
                    difference: v.abs(),
                    threshold,
                });
            }
        }
    }
    Ok(d)
}

/// Direct sum of the three oriented pair differences raised to `m`.
pub fn brute_force_omega(m: i32, p: PolarConfig) -> Result<f64> {
    brute_force_omega_with_eps(m, p, SINGULAR_REL_EPS)
}

pub fn brute_force_omega_with_eps(m: i32, p: PolarConfig, rel_eps: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroExponent);
    }
    let (d12, d23, d31) = check_regular(m, p, rel_eps)?;
    Ok([d12, d23, d31].iter().map(|d| (-d).powi(m)).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub m: i32,
    pub coupling: f64,
}

/// `Ŵ = Σ F_m W^(m)`, a list of power-law exponents and their couplings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub terms: Vec<Term>,
}

impl PotentialSpec {
    /// Validates and merges repeated exponents.
    pub fn new<I: IntoIterator<Item = (i32, f64)>>(terms: I) -> Result<Self> {
        let mut merged: BTreeMap<i32, f64> = BTreeMap::new();
        for (m, coupling) in terms {
            if m == 0 {
                return Err(Error::ZeroExponent);
            }
            if !coupling.is_finite() {
                return Err(Error::InvalidSpec(format!("coupling of m={m} is not finite")));
            }
            *merged.entry(m).or_insert(0.0) += coupling;
        }
        if merged.is_empty() {
            return Err(Error::InvalidSpec("no potential terms".into()));
        }
        Ok(Self {
            terms: merged
                .into_iter()
                .rev()
                .map(|(m, coupling)| Term { m, coupling })
                .collect(),
        })
    }

    /// Spiked harmonic (Calogero) forces `ω² d² + ν(ν+1)/d²`.
    pub fn calogero(omega: f64, nu: f64) -> Result<Self> {
        Self::new([(2, omega * omega), (-2, nu * (nu + 1.0))])
    }

    /// Spiked quartic forces `ω² d² + λ d⁴ + ν(ν+1)/d²`.
    pub fn sqao(omega: f64, lambda: f64, nu: f64) -> Result<Self> {
        Self::new([(2, omega * omega), (4, lambda), (-2, nu * (nu + 1.0))])
    }

    /// Cubic anharmonic forces `ω² d² + γ d³ + ν(ν+1)/d²`; zero couplings
    /// are dropped.
    pub fn cubic_anharmonic(omega: f64, gamma: f64, nu: f64) -> Result<Self> {
        Self::new(
            [(2, omega * omega), (3, gamma), (-2, nu * (nu + 1.0))]
                .into_iter()
                .filter(|&(_, c)| c != 0.0),
        )
    }

    /// Spiked cubic well `Ω = a2 ρ³ sin3φ + b2 / (ρ² sin²3φ)`, where `a2` and
    /// `b2` are the full coefficients of the two angular shapes. The
    /// couplings are `F_3 = a2 √2/3` and `F_-2 = 2 b2/9`.
    pub fn spiked_cubic(a2: f64, b2: f64) -> Result<Self> {
        Self::new([(3, a2 * SQRT_2 / 3.0), (-2, 2.0 * b2 / 9.0)])
    }

    /// [`spiked_cubic`](Self::spiked_cubic) with `b2 = (3/2) a2 R⁵`, which puts the
    /// absolute minimum at `ρ = R`.
    pub fn spiked_cubic_at_radius(a2: f64, r: f64) -> Result<Self> {
        Self::spiked_cubic(a2, 1.5 * a2 * r.powi(5))
    }

    pub fn coupling(&self, m: i32) -> Option<f64> {
        self.terms.iter().find(|t| t.m == m).map(|t| t.coupling)
    }

    pub fn has_negative_power(&self) -> bool {
        self.terms.iter().any(|t| t.m < 0 && t.coupling != 0.0)
    }

    pub fn exponents(&self) -> Vec<i32> {
        self.terms.iter().map(|t| t.m).collect()
    }

    pub fn compile(&self) -> Result<CompiledPotential> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let form = closed_form_omega(term.m)?;
            let poly = form.poly.to_f64_terms();
            let d1 = form.poly.derivative().to_f64_terms();
            let d2 = form.poly.derivative().derivative().to_f64_terms();
            terms.push(CompiledTerm {
                m: term.m,
                scale: term.coupling * SQRT_2.powi(term.m),
                poly,
                d1,
                d2,
            });
        }
        Ok(CompiledPotential {
            terms,
            singular: self.has_negative_power(),
        })
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("{}:{}", t.m, t.coupling))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone)]
struct CompiledTerm {
    m: i32,
    scale: f64,
    poly: Vec<(i32, f64)>,
    d1: Vec<(i32, f64)>,
    d2: Vec<(i32, f64)>,
}

fn horner(terms: &[(i32, f64)], t: f64) -> f64 {
    terms.iter().map(|&(k, c)| c * t.powi(k)).sum()
}

/// Value and exact partial derivatives of `Ω` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Partials {
    pub value: f64,
    pub d_rho: f64,
    pub d_phi: f64,
    pub d_rho_rho: f64,
    pub d_phi_phi: f64,
    pub d_rho_phi: f64,
}

/// A [`PotentialSpec`] with its closed forms converted to `f64` for repeated
/// evaluation.
#[derive(Debug, Clone)]
pub struct CompiledPotential {
    terms: Vec<CompiledTerm>,
    singular: bool,
}

impl CompiledPotential {
    /// `Ω(ρ, t)` without any singularity check.
    pub fn eval_rt(&self, rho: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| term.scale * rho.powi(term.m) * horner(&term.poly, t))
            .sum()
    }

    /// `∂Ω/∂t` at fixed `ρ`.
    pub fn d_t(&self, rho: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| term.scale * rho.powi(term.m) * horner(&term.d1, t))
            .sum()
    }

    pub fn eval_unchecked(&self, p: PolarConfig) -> f64 {
        self.eval_rt(p.rho, p.t())
    }

    pub fn eval(&self, p: PolarConfig) -> Result<f64> {
        self.check(p)?;
        Ok(self.eval_unchecked(p))
    }

    fn check(&self, p: PolarConfig) -> Result<()> {
        if self.singular {
            let m = self.terms.iter().map(|t| t.m).min().unwrap_or(-1);
            check_regular(m, p, SINGULAR_REL_EPS)?;
        }
        Ok(())
    }

    /// Exact derivatives through `t = sin 3φ`: `∂φ = 3 cos3φ ∂t` and
    /// `∂φφ = -9 t ∂t + 9 cos²3φ ∂tt`.
    pub fn partials_unchecked(&self, p: PolarConfig) -> Partials {
        let (t, c) = (3.0 * p.phi).sin_cos();
        let rho = p.rho;
        let mut out = Partials {
            value: 0.0,
            d_rho: 0.0,
            d_phi: 0.0,
            d_rho_rho: 0.0,
            d_phi_phi: 0.0,
            d_rho_phi: 0.0,
        };
        for term in &self.terms {
            let m = term.m as f64;
            let a = term.scale * rho.powi(term.m);
            let pv = horner(&term.poly, t);
            let p1 = horner(&term.d1, t);
            let p2 = horner(&term.d2, t);
            out.value += a * pv;
            out.d_rho += a * m / rho * pv;
            out.d_rho_rho += a * m * (m - 1.0) / (rho * rho) * pv;
            out.d_phi += a * 3.0 * c * p1;
            out.d_phi_phi += a * (-9.0 * t * p1 + 9.0 * c * c * p2);
            out.d_rho_phi += a * m / rho * 3.0 * c * p1;
        }
        out
    }

    pub fn partials(&self, p: PolarConfig) -> Result<Partials> {
        self.check(p)?;
        Ok(self.partials_unchecked(p))
    }

    /// Partials on the symmetry line `φ = π/6`, where `t = 1` and
    /// `cos 3φ = 0` exactly.
    pub fn partials_on_symmetry_line(&self, rho: f64) -> Partials {
        let mut out = Partials {
            value: 0.0,
            d_rho: 0.0,
            d_phi: 0.0,
            d_rho_rho: 0.0,
            d_phi_phi: 0.0,
            d_rho_phi: 0.0,
        };
        for term in &self.terms {
            let m = term.m as f64;
            let a = term.scale * rho.powi(term.m);
            let pv = horner(&term.poly, 1.0);
            let p1 = horner(&term.d1, 1.0);
            out.value += a * pv;
            out.d_rho += a * m / rho * pv;
            out.d_rho_rho += a * m * (m - 1.0) / (rho * rho) * pv;
            out.d_phi_phi += -9.0 * a * p1;
        }
        out
    }
}

/// `Σ F_m Ω^(m)(ρ, φ)` from the closed forms.
pub fn eval(spec: &PotentialSpec, p: PolarConfig) -> Result<f64> {
    spec.compile()?.eval(p)
}

pub fn partials(spec: &PotentialSpec, p: PolarConfig) -> Result<Partials> {
    spec.compile()?.partials(p)
}

/// `Σ F_m · brute_force_omega(m)`, the independent route to [`eval`].
pub fn brute_force_eval(spec: &PotentialSpec, p: PolarConfig) -> Result<f64> {
    spec.terms
        .iter()
        .map(|t| Ok(t.coupling * brute_force_omega(t.m, p)?))
        .sum()
}
