//! Small dense linear algebra for symmetric matrices and vectors in ℝⁿ.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Dense symmetric `n × n` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds a matrix from row-major entries, checking symmetry to a relative
    /// tolerance of 1e-12.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                what: "matrix entry",
                index: i,
            });
        }
        let scale = data.iter().fold(1.0f64, |m, x| m.max(math::abs(*x)));
        for i in 0..dim {
            for j in (i + 1)..dim {
                if math::abs(data[i * dim + j] - data[j * dim + i]) > 1e-12 * scale {
                    return Err(Error::Domain("matrix is not symmetric"));
                }
            }
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    /// Symmetric matrix from its upper triangle (row by row, diagonal included).
    pub fn from_upper(dim: usize, upper: &[f64]) -> Result<Self> {
        if upper.len() != dim * (dim + 1) / 2 {
            return Err(Error::DimensionMismatch {
                expected: dim * (dim + 1) / 2,
                found: upper.len(),
            });
        }
        let mut data = vec![0.0; dim * dim];
        let mut k = 0;
        for i in 0..dim {
            for j in i..dim {
                data[i * dim + j] = upper[k];
                data[j * dim + i] = upper[k];
                k += 1;
            }
        }
        Self::new(dim, data)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut data = vec![0.0; dim * dim];
        for (i, d) in diag.iter().enumerate() {
            data[i * dim + i] = *d;
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.dim)
            .map(|row| math::dot(row, v))
            .collect()
    }

    /// ⟨A v, v⟩.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            let mut row = 0.0;
            for j in 0..self.dim {
                row += self.data[i * self.dim + j] * v[j];
            }
            acc += row * v[i];
        }
        acc
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// `Qᵀ A Q` for a square row-major `q`.
    pub fn congruence(&self, q: &[f64]) -> Self {
        let n = self.dim;
        let mut aq = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                aq[i * n + j] = (0..n).map(|k| self.data[i * n + k] * q[k * n + j]).sum();
            }
        }
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n).map(|k| q[k * n + i] * aq[k * n + j]).sum();
            }
        }
        // symmetrize rounding
        for i in 0..n {
            for j in (i + 1)..n {
                let m = 0.5 * (out[i * n + j] + out[j * n + i]);
                out[i * n + j] = m;
                out[j * n + i] = m;
            }
        }
        Self { dim: n, data: out }
    }
}

/// Multiplies a square row-major matrix with a vector.
pub fn mat_vec(m: &[f64], v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|i| math::dot(&m[i * n..(i + 1) * n], v))
        .collect()
}

/// Transposed product `Mᵀ v`.
pub fn mat_t_vec(m: &[f64], v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n)
        .map(|j| (0..n).map(|i| m[i * n + j] * v[i]).sum())
        .collect()
}

/// Row-major rotation in the `(i, j)` coordinate plane of ℝⁿ.
pub fn plane_rotation(n: usize, i: usize, j: usize, angle: f64) -> Vec<f64> {
    let mut q = vec![0.0; n * n];
    for k in 0..n {
        q[k * n + k] = 1.0;
    }
    let (s, c) = (math::sin(angle), math::cos(angle));
    q[i * n + i] = c;
    q[j * n + j] = c;
    q[i * n + j] = -s;
    q[j * n + i] = s;
    q
}

/// Numerical rank of a set of vectors by Gaussian elimination with partial
/// pivoting, relative tolerance `tol`.
pub fn rank(vectors: &[Vec<f64>], dim: usize, tol: f64) -> usize {
    let mut rows: Vec<Vec<f64>> = vectors.to_vec();
    let scale = rows
        .iter()
        .flatten()
        .fold(0.0f64, |m, x| m.max(math::abs(*x)));
    if scale == 0.0 {
        return 0;
    }
    let mut r = 0;
    for col in 0..dim {
        let pivot = (r..rows.len())
            .max_by(|&a, &b| math::abs(rows[a][col]).total_cmp(&math::abs(rows[b][col])));
        let Some(p) = pivot else { break };
        if math::abs(rows[p][col]) <= tol * scale {
            continue;
        }
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            let f = row[col] / pivot_row[col];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= f * y;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Solves a small dense linear system `M x = b` (row-major `M`) by Gaussian
/// elimination with partial pivoting. Returns `None` for singular systems.
pub fn solve(m: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m[i * n..(i + 1) * n].to_vec()).collect();
    let mut x = b.to_vec();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| math::abs(a[i][col]).total_cmp(&math::abs(a[j][col])))?;
        if a[p][col] == 0.0 {
            return None;
        }
        a.swap(col, p);
        x.swap(col, p);
        for row in (col + 1)..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            x[row] -= f * x[col];
        }
    }
    for col in (0..n).rev() {
        let s: f64 = ((col + 1)..n).map(|k| a[col][k] * x[k]).sum();
        x[col] = (x[col] - s) / a[col][col];
    }
    Some(x)
}
