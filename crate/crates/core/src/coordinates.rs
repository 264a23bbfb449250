//! Jacobi coordinates for three equal-mass particles on a line and their
//! polar re-parametrization.
//!
//! The forward map is the orthogonal matrix
//!
//! ```text
//! Z = ( x1 + x2 + x3) / √3
//! X = ( x1 - x2     ) / √2
//! Y = ( x1 + x2 - 2 x3) / √6
//! ```
//!
//! and the inverse is its transpose. In polar form `X = ρ sin φ`,
//! `Y = ρ cos φ`, so every pair difference is `√2 ρ sin(φ + 2πk/3)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_3, PI, SQRT_2};

const INV_SQRT_2: f64 = 1.0 / SQRT_2;

fn inv_sqrt3() -> f64 {
    1.0 / 3f64.sqrt()
}

fn inv_sqrt6() -> f64 {
    1.0 / 6f64.sqrt()
}

/// Forward Jacobi matrix, rows (Z, X, Y).
pub fn jacobi_matrix() -> [[f64; 3]; 3] {
    let a = inv_sqrt3();
    let b = inv_sqrt6();
    [[a, a, a], [INV_SQRT_2, -INV_SQRT_2, 0.0], [b, b, -2.0 * b]]
}

/// Inverse Jacobi matrix (the transpose of [`jacobi_matrix`]).
pub fn inverse_jacobi_matrix() -> [[f64; 3]; 3] {
    let m = jacobi_matrix();
    let mut t = [[0.0; 3]; 3];
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            t[j][i] = v;
        }
    }
    t
}

fn apply(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleConfig {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl ParticleConfig {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiConfig {
    pub z: f64,
    pub x: f64,
    pub y: f64,
}

impl JacobiConfig {
    pub fn new(z: f64, x: f64, y: f64) -> Self {
        Self { z, x, y }
    }
}

/// Polar Jacobi coordinates. Physical configurations live in the wedge
/// `0 < φ < π/3`; values outside it are still accepted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarConfig {
    pub rho: f64,
    pub phi: f64,
}

impl PolarConfig {
    pub fn new(rho: f64, phi: f64) -> Self {
        Self { rho, phi }
    }

    /// Inverse of [`polar_map`]; the angle is returned in `(-π, π]`.
    pub fn from_cartesian(x: f64, y: f64) -> Self {
        Self {
            rho: x.hypot(y),
            phi: x.atan2(y),
        }
    }

    pub fn in_wedge(&self) -> bool {
        self.rho > 0.0 && self.phi > 0.0 && self.phi < FRAC_PI_3
    }

    /// `t = sin 3φ`, the variable of every closed-form potential.
    pub fn t(&self) -> f64 {
        (3.0 * self.phi).sin()
    }
}

pub fn to_jacobi(c: ParticleConfig) -> JacobiConfig {
    let [z, x, y] = apply(&jacobi_matrix(), [c.x1, c.x2, c.x3]);
    JacobiConfig { z, x, y }
}

pub fn from_jacobi(j: JacobiConfig) -> ParticleConfig {
    let [x1, x2, x3] = apply(&inverse_jacobi_matrix(), [j.z, j.x, j.y]);
    ParticleConfig { x1, x2, x3 }
}

/// `(X, Y) = (ρ sin φ, ρ cos φ)`.
pub fn polar_map(p: PolarConfig) -> (f64, f64) {
    let (s, c) = p.phi.sin_cos();
    (p.rho * s, p.rho * c)
}

/// `(x1 - x2, x2 - x3, x3 - x1)` obtained by composing [`polar_map`] and
/// [`from_jacobi`] at zero centre of mass.
pub fn pair_differences(p: PolarConfig) -> (f64, f64, f64) {
    let (x, y) = polar_map(p);
    let c = from_jacobi(JacobiConfig { z: 0.0, x, y });
    (c.x1 - c.x2, c.x2 - c.x3, c.x3 - c.x1)
}

/// Closed form `√2 ρ sin(φ + 2πk/3)` of the k-th pair difference.
pub fn pair_difference_closed(p: PolarConfig, k: usize) -> f64 {
    SQRT_2 * p.rho * (p.phi + 2.0 * PI * k as f64 / 3.0).sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_6;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn centre_of_mass_only() {
        let j = to_jacobi(ParticleConfig::new(1.0, 1.0, 1.0));
        assert!(close(j.z, 3f64.sqrt(), 1e-15));
        assert!(close(j.x, 0.0, 1e-15));
        assert!(close(j.y, 0.0, 1e-15));
    }

    #[test]
    fn antisymmetric_pair() {
        let a = 1.7;
        let j = to_jacobi(ParticleConfig::new(a, -a, 0.0));
        assert!(close(j.z, 0.0, 1e-15));
        assert!(close(j.x, SQRT_2 * a, 1e-15));
        assert!(close(j.y, 0.0, 1e-15));
    }

    #[test]
    fn inverse_examples() {
        let c = from_jacobi(JacobiConfig::new(3f64.sqrt(), 0.0, 0.0));
        for v in [c.x1, c.x2, c.x3] {
            assert!(close(v, 1.0, 1e-15));
        }
        let c = from_jacobi(JacobiConfig::new(0.0, SQRT_2, 0.0));
        assert!(close(c.x1, 1.0, 1e-15));
        assert!(close(c.x2, -1.0, 1e-15));
        assert!(close(c.x3, 0.0, 1e-15));
    }

    #[test]
    fn matrices_are_orthogonal_transposes() {
        let m = jacobi_matrix();
        let t = inverse_jacobi_matrix();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[i][j], t[j][i]);
                let dot: f64 = (0..3).map(|k| m[i][k] * m[j][k]).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(close(dot, expected, 1e-15), "rows {i},{j}: {dot}");
            }
        }
    }

    #[test]
    fn polar_examples() {
        let (x, y) = polar_map(PolarConfig::new(1.0, 0.0));
        assert!(close(x, 0.0, 1e-15) && close(y, 1.0, 1e-15));
        let (x, y) = polar_map(PolarConfig::new(2.0, FRAC_PI_6));
        assert!(close(x, 1.0, 1e-15) && close(y, 3f64.sqrt(), 1e-15));
    }

    #[test]
    fn pair_differences_at_symmetry_line() {
        let rho = 2.5;
        let (d12, d23, d31) = pair_differences(PolarConfig::new(rho, FRAC_PI_6));
        assert!(close(d12, rho / SQRT_2, 1e-14));
        assert!(close(d23, rho / SQRT_2, 1e-14));
        assert!(close(d31, -SQRT_2 * rho, 1e-14));
    }
}
