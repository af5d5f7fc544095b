//! Density operators, purifications, and code subspaces.

use num_complex::Complex64;

use crate::densemath::{
    eig_hermitian, kron_vec, partial_trace, ComplexMatrix, HermitianEigen, PSD_EPS, SUPPORT_EPS,
};
use crate::error::{Error, Result};

/// Tolerance on the unit-trace condition of a density operator.
pub const TRACE_EPS: f64 = 1e-10;

/// Tolerance on isometry and projector conditions of a code subspace.
pub const ISOMETRY_EPS: f64 = 1e-10;

/// A validated density operator: Hermitian, unit trace, positive
/// semidefinite within tolerance. The eigendecomposition performed during
/// validation is kept, so spectra and support projectors are free afterwards.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    dim: usize,
    matrix: ComplexMatrix,
    eigen: HermitianEigen,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::dims(format!(
                "density operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_EPS {
            return Err(Error::NotUnitTrace { trace: trace.re });
        }
        let eigen = eig_hermitian(&matrix)?;
        let min_eigenvalue = eigen.min_eigenvalue();
        if min_eigenvalue < -PSD_EPS {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(DensityOperator {
            dim: matrix.rows(),
            matrix,
            eigen,
        })
    }

    /// Rank-one state |ψ⟩⟨ψ| from a normalized amplitude vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > TRACE_EPS {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(ComplexMatrix::outer(amplitudes, amplitudes))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64))
            .expect("maximally mixed state is always valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.eigenvalues
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    pub fn support_projector(&self) -> ComplexMatrix {
        self.eigen.support_projector()
    }

    /// Numerical rank: eigenvalues above the support cutoff.
    pub fn rank(&self) -> usize {
        self.eigen.support_indices().len()
    }

    pub fn purity(&self) -> f64 {
        self.eigenvalues().iter().map(|p| p * p).sum()
    }

    /// Reduces a state on a tensor product to the kept factors.
    pub fn reduce(&self, dims: &[usize], keep: &[usize]) -> Result<DensityOperator> {
        DensityOperator::new(partial_trace(&self.matrix, dims, keep)?)
    }
}

/// A purification of a density operator: a normalized vector on a reference
/// space tensored with the system space, reference factor first.
#[derive(Debug, Clone, PartialEq)]
pub struct PurifiedState {
    ref_dim: usize,
    sys_dim: usize,
    amplitudes: Vec<Complex64>,
}

impl PurifiedState {
    pub fn new(ref_dim: usize, sys_dim: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != ref_dim * sys_dim {
            return Err(Error::dims(format!(
                "purified state needs {} amplitudes, got {}",
                ref_dim * sys_dim,
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > TRACE_EPS {
            return Err(Error::NotNormalized { norm });
        }
        Ok(PurifiedState {
            ref_dim,
            sys_dim,
            amplitudes,
        })
    }

    pub fn ref_dim(&self) -> usize {
        self.ref_dim
    }

    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// The joint rank-one state |Φ⟩⟨Φ| on reference ⊗ system.
    pub fn joint_density(&self) -> DensityOperator {
        DensityOperator::new(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes))
            .expect("a normalized vector always yields a valid rank-one state")
    }
}

/// Standard purification of a density operator: Σ_i √p_i |e_i⟩ ⊗ |e_i⟩ over
/// the support eigenpairs, with the reference labeled by the same eigenbasis.
/// Deterministic because the eigendecomposition is.
pub fn purify(rho: &DensityOperator) -> PurifiedState {
    let d = rho.dim();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); d * d];
    for i in rho.eigen().support_indices() {
        let p = rho.eigenvalues()[i];
        let e = rho.eigen().eigenvectors.column(i);
        let term = kron_vec(&e, &e);
        let w = Complex64::new(p.sqrt(), 0.0);
        for (a, t) in amplitudes.iter_mut().zip(&term) {
            *a += w * t;
        }
    }
    // Renormalize away the discarded kernel mass.
    let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for a in amplitudes.iter_mut() {
        *a /= norm;
    }
    PurifiedState::new(d, d, amplitudes).expect("purification of a valid state is normalized")
}

/// A code subspace of an ambient space, presented by an isometry from the
/// logical space. Carries the subspace projector and the encoding.
#[derive(Debug, Clone)]
pub struct CodeSubspace {
    ambient_dim: usize,
    logical_dim: usize,
    isometry: ComplexMatrix,
}

impl CodeSubspace {
    pub fn new(isometry: ComplexMatrix) -> Result<Self> {
        let (ambient_dim, logical_dim) = (isometry.rows(), isometry.cols());
        if logical_dim == 0 || logical_dim > ambient_dim {
            return Err(Error::dims(format!(
                "code isometry must map into a space of at least its rank, got {}x{}",
                ambient_dim, logical_dim
            )));
        }
        let gram = &isometry.adjoint() * &isometry;
        let deviation = gram.max_diff(&ComplexMatrix::identity(logical_dim));
        if deviation > ISOMETRY_EPS {
            return Err(Error::NotIsometry { deviation });
        }
        Ok(CodeSubspace {
            ambient_dim,
            logical_dim,
            isometry,
        })
    }

    /// Embeds the logical space as the span of the first `logical_dim`
    /// computational basis vectors.
    pub fn standard(ambient_dim: usize, logical_dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::from_fn(ambient_dim, logical_dim, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn logical_dim(&self) -> usize {
        self.logical_dim
    }

    pub fn isometry(&self) -> &ComplexMatrix {
        &self.isometry
    }

    /// Orthogonal projector V V† onto the code subspace.
    pub fn projector(&self) -> ComplexMatrix {
        &self.isometry * &self.isometry.adjoint()
    }

    /// The j-th code basis vector, the image of the j-th logical basis
    /// vector.
    pub fn basis_vector(&self, j: usize) -> Vec<Complex64> {
        self.isometry.column(j)
    }
}

/// Conjugates a logical state into the ambient space, ρ ↦ V ρ V†.
pub fn encode(code: &CodeSubspace, rho: &DensityOperator) -> Result<DensityOperator> {
    if rho.dim() != code.logical_dim() {
        return Err(Error::dims(format!(
            "encoding a dimension-{} state into a dimension-{} logical space",
            rho.dim(),
            code.logical_dim()
        )));
    }
    let v = code.isometry();
    DensityOperator::new(&(v * rho.matrix()) * &v.adjoint())
}

/// The maximally mixed state on the code subspace, V V† / logical_dim. Its
/// support is exactly the code, which is what the reversibility checks need.
pub fn faithful_code_state(code: &CodeSubspace) -> DensityOperator {
    let p = code.projector();
    DensityOperator::new(p.scale_re(1.0 / code.logical_dim() as f64))
        .expect("projector scaled by its rank is a valid state")
}

/// True when the support of `rho` lies inside the support of `sigma`, judged
/// by compressing `rho` with the kernel projector of `sigma`.
pub fn support_contained(rho: &DensityOperator, sigma: &DensityOperator, tol: f64) -> bool {
    let d = sigma.dim();
    let kernel = &ComplexMatrix::identity(d) - &sigma.support_projector();
    let compressed = &(&kernel * rho.matrix()) * &kernel;
    compressed.max_norm() <= tol
}

/// Support cutoff used when comparing eigenvalues of states directly.
pub fn support_cut(eigenvalues: &[f64]) -> f64 {
    SUPPORT_EPS * eigenvalues.iter().copied().fold(0.0, f64::max)
}
