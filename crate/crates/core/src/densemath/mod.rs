//! Dense complex linear algebra: matrices, Hermitian eigendecomposition,
//! tensor products, partial traces, and spectral functions on the support.

mod eigen;
mod matrix;

pub use eigen::{
    eig_hermitian, matfun_on_support, HermitianEigen, HERMITICITY_EPS, PSD_EPS, SUPPORT_EPS,
};
pub use matrix::{inner, kron, kron_vec, partial_trace, ComplexMatrix};
