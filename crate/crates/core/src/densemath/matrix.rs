//! Dense complex matrices in row-major order, with the products, adjoints,
//! tensor products, and partial traces the rest of the crate is built on.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix entry by entry from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Builds a matrix from nested row vectors, rejecting ragged input.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if nrows == 0 || ncols == 0 {
            return Err(Error::dims("matrix must have at least one row and column"));
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::dims(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    ncols
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(ComplexMatrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    /// Rank-one matrix u v† from two vectors.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conjugate(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a {}x{} matrix", self.rows, self.cols);
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(
            self.cols,
            v.len(),
            "matvec of a {}x{} matrix with a length-{} vector",
            self.rows,
            self.cols,
            v.len()
        );
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise difference against another matrix of the same shape.
    pub fn max_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from Hermitian symmetry, max |a_ij - conj(a_ji)|.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// Hermitian part (a + a†)/2.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "adding a {}x{} matrix to a {}x{} matrix",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "subtracting a {}x{} matrix from a {}x{} matrix",
            rhs.rows,
            rhs.cols,
            self.rows,
            self.cols
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "multiplying a {}x{} matrix by a {}x{} matrix",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.data[i * self.cols + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += aik * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

/// Inner product ⟨u|v⟩, conjugate-linear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Tensor (Kronecker) product, first factor slowest.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let af = a.get(ia, ja);
            if af == Complex64::new(0.0, 0.0) {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out.set(ia * b.rows() + ib, ja * b.cols() + jb, af * b.get(ib, jb));
                }
            }
        }
    }
    out
}

/// Tensor product of vectors, matching the `kron` index convention.
pub fn kron_vec(u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            out.push(a * b);
        }
    }
    out
}

/// Traces out the factors not listed in `keep` from an operator on a tensor
/// product with the given factor dimensions. Kept factors stay in their
/// original order; `keep` must be strictly increasing.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::dims(format!(
            "partial trace of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let total: usize = dims.iter().product();
    if total != m.rows() {
        return Err(Error::dims(format!(
            "factor dimensions {:?} multiply to {}, matrix is {}x{}",
            dims,
            total,
            m.rows(),
            m.cols()
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&f| f >= dims.len()) {
        return Err(Error::dims(format!(
            "keep indices {:?} must be strictly increasing and below {}",
            keep,
            dims.len()
        )));
    }

    let n = dims.len();
    let mut stride = vec![1usize; n];
    for f in (0..n.saturating_sub(1)).rev() {
        stride[f] = stride[f + 1] * dims[f + 1];
    }
    let traced: Vec<usize> = (0..n).filter(|f| !keep.contains(f)).collect();

    // Linear offsets into the full index space for every joint value of a
    // factor subset, enumerated with the last factor fastest.
    let offsets = |factors: &[usize]| -> Vec<usize> {
        let count: usize = factors.iter().map(|&f| dims[f]).product();
        (0..count)
            .map(|lin| {
                let mut rem = lin;
                let mut off = 0;
                for &f in factors.iter().rev() {
                    off += (rem % dims[f]) * stride[f];
                    rem /= dims[f];
                }
                off
            })
            .collect()
    };

    let kept_offsets = offsets(keep);
    let traced_offsets = offsets(&traced);
    let out_dim = kept_offsets.len();

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for (r, &ro) in kept_offsets.iter().enumerate() {
        for (c, &co) in kept_offsets.iter().enumerate() {
            let mut sum = Complex64::new(0.0, 0.0);
            for &to in &traced_offsets {
                sum += m.get(ro + to, co + to);
            }
            out.set(r, c, sum);
        }
    }
    Ok(out)
}
