//! Compressed sparse row matrices and banded Cholesky factors.

use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from per-row `(column, value)` lists; columns must be sorted.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in rows {
            for (j, v) in row {
                col_idx.push(j);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        });
    }

    /// Every stored entry has a bitwise-identical transposed partner.
    pub fn is_symmetric_bitwise(&self) -> bool {
        (0..self.n).all(|i| {
            self.row(i)
                .all(|(j, v)| self.row(j).any(|(c, w)| c == i && w.to_bits() == v.to_bits()))
        })
    }

    pub fn bandwidth(&self) -> usize {
        (0..self.n)
            .flat_map(|i| self.row(i).map(move |(j, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }
}

/// Lower Cholesky factor `L` of a symmetric positive definite band matrix,
/// row `i` holding columns `i - bw ..= i`.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    rows: Vec<f64>,
}

impl BandedCholesky {
    /// Factors `A - shift·I`. On a non-positive pivot returns its row.
    pub fn factor(a: &CsrMatrix, shift: f64) -> Result<Self, usize> {
        let n = a.n;
        let bw = a.bandwidth();
        let w = bw + 1;
        let mut rows = vec![0.0; n * w];
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j <= i {
                    let val = if i == j { v - shift } else { v };
                    rows[i * w + (j + bw - i)] = val;
                }
            }
        }
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let k0 = j0.max(j.saturating_sub(bw));
                let mut s = rows[i * w + (j + bw - i)];
                let li = &rows[i * w + (k0 + bw - i)..i * w + (j + bw - i)];
                let lj = &rows[j * w + (k0 + bw - j)..j * w + bw];
                s -= li.iter().zip(lj).map(|(a, b)| a * b).sum::<f64>();
                if i == j {
                    if !(s > 0.0) {
                        return Err(i);
                    }
                    rows[i * w + bw] = s.sqrt();
                } else {
                    rows[i * w + (j + bw - i)] = s / rows[j * w + bw];
                }
            }
        }
        Ok(Self { n, bw, rows })
    }

    /// Solves `L Lᵀ x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            let row = &self.rows[i * w..(i + 1) * w];
            let s: f64 = (j0..i).map(|j| row[j + bw - i] * b[j]).sum();
            b[i] = (b[i] - s) / row[bw];
        }
        for i in (0..n).rev() {
            b[i] /= self.rows[i * w + bw];
            let xi = b[i];
            let j0 = i.saturating_sub(bw);
            let row = &self.rows[i * w..(i + 1) * w];
            for j in j0..i {
                b[j] -= row[j + bw - i] * xi;
            }
        }
    }
}
