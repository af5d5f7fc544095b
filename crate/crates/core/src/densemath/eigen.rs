//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and
//! spectral functions restricted to the numerical support.

use num_complex::Complex64;

use crate::densemath::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative cutoff below which an eigenvalue counts as part of the kernel.
pub const SUPPORT_EPS: f64 = 1e-10;

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITICITY_EPS: f64 = 1e-10;

/// Relative tolerance for accepting a matrix as positive semidefinite.
pub const PSD_EPS: f64 = 1e-9;

const CONVERGENCE_EPS: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues (descending) and matching orthonormal eigenvector columns.
///
/// Each eigenvector's largest-magnitude entry is made real and nonnegative,
/// so repeated decompositions of the same matrix are bit-identical. For
/// degenerate eigenvalues the basis within the eigenspace is a convention
/// fixed by the rotation order, not a canonical choice.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Rebuilds V diag(λ) V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| v.get(r, k) * self.eigenvalues[k] * v.get(c, k).conj())
                .sum()
        })
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Indices of eigenvalues above the relative support cutoff.
    pub fn support_indices(&self) -> Vec<usize> {
        let cut = SUPPORT_EPS * self.max_eigenvalue().max(0.0);
        (0..self.dim())
            .filter(|&i| self.eigenvalues[i] > cut)
            .collect()
    }

    /// Orthogonal projector onto the span of the support eigenvectors.
    pub fn support_projector(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut p = ComplexMatrix::zeros(n, n);
        for i in self.support_indices() {
            let v = self.eigenvectors.column(i);
            for r in 0..n {
                for c in 0..n {
                    let add = v[r] * v[c].conj();
                    p.set(r, c, p.get(r, c) + add);
                }
            }
        }
        p
    }
}

fn off_diagonal_mass(a: &[Complex64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation zeroing the (p, q) entry of the Hermitian working
/// matrix, accumulated into the eigenvector matrix.
fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let abs = apq.norm();
    if abs < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / abs;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;

    // tan of the rotation angle, smaller-magnitude root for stability.
    let cot2 = (app - aqq) / (2.0 * abs);
    let t = if cot2.abs() > 1e10 {
        0.5 / cot2
    } else {
        let s = if cot2 >= 0.0 { 1.0 } else { -1.0 };
        s / (cot2.abs() + (1.0 + cot2 * cot2).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let sp = phase * s;
    let spc = phase.conj() * s;

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c + akq * spc;
        a[k * n + q] = akq * c - akp * sp;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c + aqk * sp;
        a[q * n + k] = aqk * c - apk * spc;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c + vkq * spc;
        v[k * n + q] = vkq * c - vkp * sp;
    }
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::dims(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let deviation = m.hermitian_deviation();
    let allowed = HERMITICITY_EPS * m.max_norm();
    if deviation > allowed {
        return Err(Error::NonHermitian { deviation, allowed });
    }

    // Work on the Hermitian part so the tolerated asymmetry cannot bias the
    // rotations.
    let sym = m.hermitize();
    let mut a: Vec<Complex64> = sym.data().to_vec();
    let mut v: Vec<Complex64> = ComplexMatrix::identity(n).data().to_vec();
    let target = CONVERGENCE_EPS * sym.fro_norm();

    let mut sweeps = 0;
    while off_diagonal_mass(&a, n) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        sweeps += 1;
    }

    let raw: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut column: Vec<Complex64> = (0..n).map(|r| v[r * n + src]).collect();
        fix_phase(&mut column);
        for (r, &z) in column.iter().enumerate() {
            eigenvectors.set(r, col, z);
        }
    }

    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Rescales a vector so its largest-magnitude entry (first such index on
/// ties) is real and nonnegative.
fn fix_phase(column: &mut [Complex64]) {
    let mut best = 0;
    let mut best_norm = 0.0;
    for (i, z) in column.iter().enumerate() {
        let nz = z.norm();
        if nz > best_norm {
            best_norm = nz;
            best = i;
        }
    }
    if best_norm < f64::MIN_POSITIVE {
        return;
    }
    let phase = column[best] / best_norm;
    let correction = phase.conj();
    for z in column.iter_mut() {
        *z *= correction;
    }
    column[best] = Complex64::new(column[best].re.abs(), 0.0);
}

/// Applies a real function to the support eigenvalues of a positive
/// semidefinite matrix, mapping the kernel to zero.
pub fn matfun_on_support(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m)?;
    let lambda_max = eig.max_eigenvalue().max(0.0);
    let min_eigenvalue = eig.min_eigenvalue();
    if min_eigenvalue < -PSD_EPS * lambda_max {
        return Err(Error::NotPsd { min_eigenvalue });
    }

    let n = eig.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in eig.support_indices() {
        let fv = f(eig.eigenvalues[i]);
        let v = eig.eigenvectors.column(i);
        for r in 0..n {
            for c in 0..n {
                let add = v[r] * v[c].conj() * fv;
                out.set(r, c, out.get(r, c) + add);
            }
        }
    }
    Ok(out.hermitize())
}
