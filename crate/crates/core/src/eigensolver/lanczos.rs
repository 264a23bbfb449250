//! Shift-invert Lanczos with full reorthogonalization.
//!
//! The operator `(A - σI)⁻¹` is applied through an [`InverseOperator`]; its
//! largest Ritz values `θ` map back to the eigenvalues `σ + 1/θ` of `A`
//! closest to (and above) the shift.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::sparse::{BandedCholesky, CsrMatrix};
use super::tridiagonal::{normalize, SymTridiagonal};
use crate::error::{Error, Result};

/// Applies `(A - σI)⁻¹` to a vector.
pub trait InverseOperator: Sync {
    fn apply(&self, x: &[f64], y: &mut [f64]) -> Result<()>;
}

pub struct CholeskyInverse {
    factor: BandedCholesky,
}

impl CholeskyInverse {
    pub fn new(a: &CsrMatrix, sigma: f64) -> Result<Self> {
        let factor = BandedCholesky::factor(a, sigma).map_err(|row| {
            Error::InvalidGrid(format!(
                "shift {sigma} is not below the spectrum (non-positive pivot at row {row})"
            ))
        })?;
        Ok(Self { factor })
    }
}

impl InverseOperator for CholeskyInverse {
    fn apply(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        y.copy_from_slice(x);
        self.factor.solve_in_place(y);
        Ok(())
    }
}

/// Factorization-free inverse: Jacobi-preconditioned conjugate gradients.
pub struct ConjugateGradientInverse<'a> {
    a: &'a CsrMatrix,
    sigma: f64,
    inv_diag: Vec<f64>,
    tolerance: f64,
    max_iterations: usize,
}

impl<'a> ConjugateGradientInverse<'a> {
    pub fn new(a: &'a CsrMatrix, sigma: f64, tolerance: f64, max_iterations: usize) -> Self {
        let inv_diag = a.diagonal().iter().map(|d| 1.0 / (d - sigma)).collect();
        Self {
            a,
            sigma,
            inv_diag,
            tolerance,
            max_iterations,
        }
    }
}

impl InverseOperator for ConjugateGradientInverse<'_> {
    fn apply(&self, b: &[f64], x: &mut [f64]) -> Result<()> {
        let n = b.len();
        x.iter_mut().for_each(|v| *v = 0.0);
        let mut r = b.to_vec();
        let b_norm = dot(b, b).sqrt();
        if b_norm == 0.0 {
            return Ok(());
        }
        let mut z: Vec<f64> = r.iter().zip(&self.inv_diag).map(|(r, d)| r * d).collect();
        let mut p = z.clone();
        let mut ap = vec![0.0; n];
        let mut rz = dot(&r, &z);
        for _ in 0..self.max_iterations {
            self.a.matvec(&p, &mut ap);
            ap.par_iter_mut().zip(&p).for_each(|(q, pi)| *q -= self.sigma * pi);
            let alpha = rz / dot(&p, &ap);
            x.par_iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
            r.par_iter_mut().zip(&ap).for_each(|(ri, qi)| *ri -= alpha * qi);
            let r_norm = dot(&r, &r).sqrt();
            if r_norm <= self.tolerance * b_norm {
                return Ok(());
            }
            z.par_iter_mut()
                .zip(&r)
                .zip(&self.inv_diag)
                .for_each(|((zi, ri), d)| *zi = ri * d);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            p.par_iter_mut().zip(&z).for_each(|(pi, zi)| *pi = zi + beta * *pi);
        }
        let residual = dot(&r, &r).sqrt() / b_norm;
        Err(Error::NonConvergence {
            iterations: self.max_iterations,
            residual,
        })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    // Fixed chunking keeps the reduction order, and hence the result,
    // independent of the thread count.
    a.par_chunks(4096)
        .zip(b.par_chunks(4096))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .collect::<Vec<_>>()
        .iter()
        .sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.par_iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

#[derive(Debug, Clone)]
pub struct LanczosOutcome {
    /// Ascending eigenvalues of `A`.
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// `‖A x - λ x‖ / max(1, |λ|)` for each pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosSettings {
    pub tolerance: f64,
    pub max_steps: usize,
    pub seed: u64,
}

/// The `k` eigenvalues of `a` closest above the shift built into `op`.
pub fn shift_invert_lanczos(
    a: &CsrMatrix,
    op: &dyn InverseOperator,
    k: usize,
    settings: LanczosSettings,
) -> Result<LanczosOutcome> {
    let n = a.n;
    let k = k.min(n);
    let max_steps = settings.max_steps.min(n).max(k);
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let mut random_unit = |basis: &[Vec<f64>]| {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for u in basis {
                let c = dot(&v, u);
                axpy(-c, u, &mut v);
            }
        }
        normalize(&mut v);
        v
    };

    let mut basis: Vec<Vec<f64>> = vec![random_unit(&[])];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut best_residual = f64::INFINITY;

    for j in 0..max_steps {
        op.apply(&basis[j], &mut w)?;
        let a_j = dot(&w, &basis[j]);
        alpha.push(a_j);
        axpy(-a_j, &basis[j], &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &basis[j - 1], &mut w);
        }
        for _ in 0..2 {
            for u in &basis {
                let c = dot(&w, u);
                axpy(-c, u, &mut w);
            }
        }
        let b_j = dot(&w, &w).sqrt();
        let exhausted = j + 1 == max_steps;
        let breakdown = b_j <= 1e-13 * a_j.abs();

        if j + 1 >= k && ((j + 1) % 5 == 0 || exhausted || breakdown) {
            let t = SymTridiagonal::new(alpha.clone(), beta.clone());
            let thetas = t.highest_eigenvalues(k);
            let estimates_ok = thetas.iter().enumerate().all(|(i, &theta)| {
                let s = t.eigenvector(theta, i as u64);
                (b_j * s[j]).abs() <= 1e-10 * theta.abs()
            });
            if estimates_ok || exhausted || breakdown {
                let outcome = ritz_pairs(a, &t, &basis, &thetas, j + 1);
                let worst = outcome.residuals.iter().cloned().fold(0.0, f64::max);
                best_residual = best_residual.min(worst);
                if worst <= settings.tolerance {
                    return Ok(outcome);
                }
            }
        }
        if exhausted {
            break;
        }
        if breakdown {
            beta.push(0.0);
            let v = random_unit(&basis);
            basis.push(v);
        } else {
            beta.push(b_j);
            basis.push(w.iter().map(|x| x / b_j).collect());
        }
    }
    Err(Error::NonConvergence {
        iterations: max_steps,
        residual: best_residual,
    })
}

fn ritz_pairs(
    a: &CsrMatrix,
    t: &SymTridiagonal,
    basis: &[Vec<f64>],
    thetas: &[f64],
    iterations: usize,
) -> LanczosOutcome {
    let n = a.n;
    let mut pairs: Vec<(f64, Vec<f64>, f64)> = thetas
        .iter()
        .enumerate()
        .map(|(i, &theta)| {
            let s = t.eigenvector(theta, i as u64);
            let mut x = vec![0.0; n];
            for (coef, v) in s.iter().zip(basis) {
                axpy(*coef, v, &mut x);
            }
            normalize(&mut x);
            let mut ax = vec![0.0; n];
            a.matvec(&x, &mut ax);
            // Rayleigh quotient of the Ritz vector is at least as accurate
            // as σ + 1/θ.
            let lambda = dot(&x, &ax);
            let r = ax
                .iter()
                .zip(&x)
                .map(|(p, q)| (p - lambda * q).powi(2))
                .sum::<f64>()
                .sqrt();
            (lambda, x, r / lambda.abs().max(1.0))
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut outcome = LanczosOutcome {
        values: Vec::with_capacity(pairs.len()),
        vectors: Vec::with_capacity(pairs.len()),
        residuals: Vec::with_capacity(pairs.len()),
        iterations,
    };
    for (l, x, r) in pairs {
        outcome.values.push(l);
        outcome.vectors.push(x);
        outcome.residuals.push(r);
    }
    outcome
}
