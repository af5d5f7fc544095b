//! Quantum channels stored through their Choi matrix, with a cached Kraus
//! representation, Stinespring dilation, complement, dual, composition, and
//! output marginals.
//!
//! The Choi matrix of a channel with input dimension d is normalized to unit
//! trace: it is the channel acting on one half of the maximally entangled
//! pair, so complete positivity and trace preservation become positivity and
//! a partial-trace condition on a single matrix. The channel action is
//! recovered by contraction: E(ρ) = d · Tr_ref[(ρᵀ ⊗ I) · choi].

use num_complex::Complex64;

use crate::densemath::{
    eig_hermitian, partial_trace, ComplexMatrix, HermitianEigen, SUPPORT_EPS,
};
use crate::error::{Error, Result};
use crate::qstate::{DensityOperator, PurifiedState};

/// Tolerance on Σ E† E = I when accepting a Kraus set.
pub const KRAUS_TP_EPS: f64 = 1e-8;

/// Tolerance on the partial-trace condition of a Choi matrix.
pub const CHOI_TP_EPS: f64 = 1e-9;

/// Tolerance on positivity of a Choi matrix.
pub const CHOI_PSD_EPS: f64 = 1e-9;

/// Which output factor of a bipartite-output channel to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// A completely positive trace-preserving map between finite-dimensional
/// systems.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    in_dim: usize,
    out_dim: usize,
    choi: ComplexMatrix,
    kraus: Vec<ComplexMatrix>,
}

fn kraus_tp_deviation(kraus: &[ComplexMatrix], in_dim: usize) -> f64 {
    let mut sum = ComplexMatrix::zeros(in_dim, in_dim);
    for e in kraus {
        sum = &sum + &(&e.adjoint() * e);
    }
    sum.max_diff(&ComplexMatrix::identity(in_dim))
}

/// Column-stacks a Kraus operator into the Choi-vector convention,
/// reference index slowest: w[(a, b)] = E[b, a] / √d.
fn kraus_to_choi_vec(e: &ComplexMatrix, in_dim: usize, out_dim: usize) -> Vec<Complex64> {
    let scale = 1.0 / (in_dim as f64).sqrt();
    let mut w = Vec::with_capacity(in_dim * out_dim);
    for a in 0..in_dim {
        for b in 0..out_dim {
            w.push(e.get(b, a) * scale);
        }
    }
    w
}

fn choi_from_kraus(kraus: &[ComplexMatrix], in_dim: usize, out_dim: usize) -> ComplexMatrix {
    let dim = in_dim * out_dim;
    let mut choi = ComplexMatrix::zeros(dim, dim);
    for e in kraus {
        let w = kraus_to_choi_vec(e, in_dim, out_dim);
        for r in 0..dim {
            if w[r] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..dim {
                let add = w[r] * w[c].conj();
                choi.set(r, c, choi.get(r, c) + add);
            }
        }
    }
    choi
}

/// Inverts the column stacking: an eigenpair (λ, v) of the Choi matrix
/// becomes the Kraus operator E[b, a] = √(d·λ) · v[(a, b)].
fn kraus_from_eig(eig: &HermitianEigen, in_dim: usize, out_dim: usize) -> Vec<ComplexMatrix> {
    let lambda_max = eig.max_eigenvalue().max(0.0);
    let cut = SUPPORT_EPS * lambda_max;
    let mut kraus = Vec::new();
    for i in 0..eig.dim() {
        let lambda = eig.eigenvalues[i];
        if lambda <= cut {
            continue;
        }
        let scale = (in_dim as f64 * lambda).sqrt();
        let v = eig.eigenvectors.column(i);
        kraus.push(ComplexMatrix::from_fn(out_dim, in_dim, |b, a| {
            v[a * out_dim + b] * scale
        }));
    }
    kraus
}

impl QuantumChannel {
    /// Builds a channel from a Kraus representation, which is kept as given.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::dims("a channel needs at least one Kraus operator"))?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        if in_dim == 0 || out_dim == 0 {
            return Err(Error::dims("Kraus operators must be non-empty matrices"));
        }
        for (k, e) in kraus.iter().enumerate() {
            if e.rows() != out_dim || e.cols() != in_dim {
                return Err(Error::dims(format!(
                    "Kraus operator {} is {}x{}, expected {}x{}",
                    k,
                    e.rows(),
                    e.cols(),
                    out_dim,
                    in_dim
                )));
            }
        }
        let deviation = kraus_tp_deviation(&kraus, in_dim);
        if deviation > KRAUS_TP_EPS {
            return Err(Error::NotTracePreserving { deviation });
        }
        let choi = choi_from_kraus(&kraus, in_dim, out_dim);
        Ok(QuantumChannel {
            in_dim,
            out_dim,
            choi,
            kraus,
        })
    }

    /// Builds a channel from its Choi matrix; the cached Kraus set is the
    /// spectral extraction.
    pub fn from_choi(in_dim: usize, out_dim: usize, choi: ComplexMatrix) -> Result<Self> {
        let dim = in_dim * out_dim;
        if in_dim == 0 || out_dim == 0 || choi.rows() != dim || choi.cols() != dim {
            return Err(Error::dims(format!(
                "Choi matrix is {}x{}, expected {}x{} for dimensions {} -> {}",
                choi.rows(),
                choi.cols(),
                dim,
                dim,
                in_dim,
                out_dim
            )));
        }
        let eig = eig_hermitian(&choi)?;
        let min_eigenvalue = eig.min_eigenvalue();
        if min_eigenvalue < -CHOI_PSD_EPS {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        let reduced = partial_trace(&choi, &[in_dim, out_dim], &[0])?;
        let target = ComplexMatrix::identity(in_dim).scale_re(1.0 / in_dim as f64);
        let tp_deviation = reduced.max_diff(&target);
        if tp_deviation > CHOI_TP_EPS {
            return Err(Error::NotTracePreserving {
                deviation: tp_deviation,
            });
        }
        let kraus = kraus_from_eig(&eig, in_dim, out_dim);
        // The spectral cutoff may have discarded a sliver of the channel;
        // make sure what is left is still trace preserving.
        let deviation = kraus_tp_deviation(&kraus, in_dim);
        if deviation > KRAUS_TP_EPS {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(QuantumChannel {
            in_dim,
            out_dim,
            choi: choi.hermitize(),
            kraus,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_kraus(vec![ComplexMatrix::identity(dim)])
            .expect("the identity matrix is a valid Kraus set")
    }

    pub fn from_unitary(u: ComplexMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::dims(format!(
                "unitary must be square, got {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        Self::from_kraus(vec![u])
    }

    /// The channel that discards its input and prepares `target`.
    pub fn constant(target: &DensityOperator, in_dim: usize) -> Self {
        let mut kraus = Vec::new();
        for i in target.eigen().support_indices() {
            let w = target.eigenvalues()[i].sqrt();
            let s: Vec<Complex64> = target
                .eigen()
                .eigenvectors
                .column(i)
                .iter()
                .map(|z| z * w)
                .collect();
            for n in 0..in_dim {
                kraus.push(ComplexMatrix::from_fn(target.dim(), in_dim, |r, c| {
                    if c == n {
                        s[r]
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }));
            }
        }
        Self::from_kraus(kraus).expect("spectral decomposition of a state is trace preserving")
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    /// The cached Kraus representation (as constructed, not re-extracted).
    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Environment dimension of the cached representation.
    pub fn env_dim(&self) -> usize {
        self.kraus.len()
    }

    /// Extracts a fresh minimal Kraus set from the Choi matrix's spectral
    /// decomposition, dropping kernel eigenvalues.
    pub fn extract_kraus(&self) -> Vec<ComplexMatrix> {
        let eig = eig_hermitian(&self.choi)
            .expect("stored Choi matrices are Hermitian by construction");
        kraus_from_eig(&eig, self.in_dim, self.out_dim)
    }

    /// Linear action of the channel on an arbitrary operator, by Choi
    /// contraction.
    pub fn apply_to_operator(&self, op: &ComplexMatrix) -> Result<ComplexMatrix> {
        if op.rows() != self.in_dim || op.cols() != self.in_dim {
            return Err(Error::dims(format!(
                "applying a {} -> {} channel to a {}x{} operator",
                self.in_dim,
                self.out_dim,
                op.rows(),
                op.cols()
            )));
        }
        let (d, m) = (self.in_dim, self.out_dim);
        let scale = d as f64;
        let mut out = ComplexMatrix::zeros(m, m);
        for l in 0..d {
            for j in 0..d {
                let w = op.get(l, j);
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for b in 0..m {
                    for bp in 0..m {
                        let add = w * self.choi.get(l * m + b, j * m + bp) * scale;
                        out.set(b, bp, out.get(b, bp) + add);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies the channel to a state.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        DensityOperator::new(self.apply_to_operator(rho.matrix())?)
    }

    /// Applies the channel to the system half of a purification, returning
    /// the joint reference-output state.
    pub fn apply_extended(&self, state: &PurifiedState) -> Result<DensityOperator> {
        if state.sys_dim() != self.in_dim {
            return Err(Error::dims(format!(
                "extending a {} -> {} channel over a purification with system dimension {}",
                self.in_dim,
                self.out_dim,
                state.sys_dim()
            )));
        }
        let (r, d, m) = (state.ref_dim(), self.in_dim, self.out_dim);
        let amp = state.amplitudes();
        let joint = r * m;
        let mut acc = ComplexMatrix::zeros(joint, joint);
        for e in &self.kraus {
            let mut w = vec![Complex64::new(0.0, 0.0); joint];
            for i in 0..r {
                for b in 0..m {
                    let mut s = Complex64::new(0.0, 0.0);
                    for j in 0..d {
                        s += e.get(b, j) * amp[i * d + j];
                    }
                    w[i * m + b] = s;
                }
            }
            for row in 0..joint {
                if w[row] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for col in 0..joint {
                    let add = w[row] * w[col].conj();
                    acc.set(row, col, acc.get(row, col) + add);
                }
            }
        }
        DensityOperator::new(acc)
    }

    /// Stinespring isometry V with V|a⟩ = Σ_l E_l|a⟩ ⊗ |l⟩, output factor
    /// first, environment labeled by the cached Kraus index.
    pub fn stinespring(&self) -> ComplexMatrix {
        let env = self.env_dim();
        ComplexMatrix::from_fn(self.out_dim * env, self.in_dim, |row, a| {
            let (b, l) = (row / env, row % env);
            self.kraus[l].get(b, a)
        })
    }

    /// The complementary channel to the environment of the cached
    /// representation: ρ ↦ Σ_{k,l} Tr[ρ E_k† E_l] |l⟩⟨k|.
    pub fn complement(&self) -> QuantumChannel {
        let env = self.env_dim();
        let kraus: Vec<ComplexMatrix> = (0..self.out_dim)
            .map(|b| {
                ComplexMatrix::from_fn(env, self.in_dim, |l, a| self.kraus[l].get(b, a))
            })
            .collect();
        Self::from_kraus(kraus)
            .expect("rows of a Stinespring isometry form a trace-preserving Kraus set")
    }

    /// The adjoint map on observables, Y ↦ Σ E† Y E.
    pub fn dual(&self) -> DualMap {
        DualMap {
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            kraus: self.kraus.clone(),
        }
    }

    /// Composition later ∘ earlier, with Kraus products of the cached sets.
    pub fn compose(later: &QuantumChannel, earlier: &QuantumChannel) -> Result<QuantumChannel> {
        if later.in_dim != earlier.out_dim {
            return Err(Error::dims(format!(
                "composing a {} -> {} channel after a {} -> {} channel",
                later.in_dim, later.out_dim, earlier.in_dim, earlier.out_dim
            )));
        }
        let mut kraus = Vec::with_capacity(later.kraus.len() * earlier.kraus.len());
        for l in &later.kraus {
            for e in &earlier.kraus {
                kraus.push(l * e);
            }
        }
        Self::from_kraus(kraus)
    }

    /// Post-composes a partial trace on a bipartite output, keeping one
    /// factor.
    pub fn marginal(&self, out_dims: (usize, usize), keep: Factor) -> Result<QuantumChannel> {
        let (db, dc) = out_dims;
        if db * dc != self.out_dim {
            return Err(Error::dims(format!(
                "splitting a dimension-{} output as {}x{}",
                self.out_dim, db, dc
            )));
        }
        let mut kraus = Vec::new();
        for e in &self.kraus {
            match keep {
                Factor::First => {
                    for cc in 0..dc {
                        kraus.push(ComplexMatrix::from_fn(db, self.in_dim, |b, a| {
                            e.get(b * dc + cc, a)
                        }));
                    }
                }
                Factor::Second => {
                    for b in 0..db {
                        kraus.push(ComplexMatrix::from_fn(dc, self.in_dim, |cc, a| {
                            e.get(b * dc + cc, a)
                        }));
                    }
                }
            }
        }
        Self::from_kraus(kraus)
    }

    /// The isometry channel into output ⊗ environment whose first-factor
    /// marginal is this channel and whose second-factor marginal is its
    /// complement.
    pub fn dilation(&self) -> QuantumChannel {
        Self::from_kraus(vec![self.stinespring()])
            .expect("a Stinespring isometry is a valid single Kraus operator")
    }
}

/// The dual (adjoint) of a channel, acting on observables.
#[derive(Debug, Clone)]
pub struct DualMap {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl DualMap {
    pub fn apply(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        if y.rows() != self.out_dim || y.cols() != self.out_dim {
            return Err(Error::dims(format!(
                "dual of a {} -> {} channel applied to a {}x{} observable",
                self.in_dim,
                self.out_dim,
                y.rows(),
                y.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.in_dim, self.in_dim);
        for e in &self.kraus {
            out = &out + &(&(&e.adjoint() * y) * e);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densemath::kron;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap()
    }

    fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap()
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ])
        .unwrap()
    }

    fn dephasing_half() -> QuantumChannel {
        let r = 1.0 / 2.0_f64.sqrt();
        QuantumChannel::from_kraus(vec![
            ComplexMatrix::identity(2).scale_re(r),
            pauli_z().scale_re(r),
        ])
        .unwrap()
    }

    /// Independent route to the channel action, for cross-checking `apply`.
    fn kraus_sum(kraus: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(kraus[0].rows(), kraus[0].rows());
        for e in kraus {
            out = &out + &(&(e * rho) * &e.adjoint());
        }
        out
    }

    #[test]
    fn identity_channel_choi_is_the_entangled_projector() {
        let ch = QuantumChannel::identity(2);
        let mut expect = ComplexMatrix::zeros(4, 4);
        for (r, cidx) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            expect.set(r, cidx, c(0.5, 0.0));
        }
        assert!(ch.choi().max_diff(&expect) < 1e-14);
    }

    #[test]
    fn reset_channel_choi_is_a_product() {
        // ρ ↦ |0⟩⟨0| via Kraus {|0⟩⟨0|, |0⟩⟨1|}.
        let mut k0 = ComplexMatrix::zeros(2, 2);
        k0.set(0, 0, c(1.0, 0.0));
        let mut k1 = ComplexMatrix::zeros(2, 2);
        k1.set(0, 1, c(1.0, 0.0));
        let ch = QuantumChannel::from_kraus(vec![k0, k1]).unwrap();
        let mut zero = ComplexMatrix::zeros(2, 2);
        zero.set(0, 0, c(1.0, 0.0));
        let expect = kron(&ComplexMatrix::identity(2).scale_re(0.5), &zero);
        assert!(ch.choi().max_diff(&expect) < 1e-14);
    }

    #[test]
    fn depolarizing_choi_is_maximally_mixed() {
        let ch = QuantumChannel::from_kraus(vec![
            ComplexMatrix::identity(2).scale_re(0.5),
            pauli_x().scale_re(0.5),
            pauli_y().scale_re(0.5),
            pauli_z().scale_re(0.5),
        ])
        .unwrap();
        let expect = ComplexMatrix::identity(4).scale_re(0.25);
        assert!(ch.choi().max_diff(&expect) < 1e-14);
        let rho = DensityOperator::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!(out
            .matrix()
            .max_diff(&ComplexMatrix::identity(2).scale_re(0.5))
            < 1e-12);
    }

    #[test]
    fn choi_construction_rebuilds_depolarizing_action() {
        let choi = ComplexMatrix::identity(4).scale_re(0.25);
        let ch = QuantumChannel::from_choi(2, 2, choi).unwrap();
        assert_eq!(ch.env_dim(), 4);
        let rho = DensityOperator::from_pure(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!(out
            .matrix()
            .max_diff(&ComplexMatrix::identity(2).scale_re(0.5))
            < 1e-12);
    }

    #[test]
    fn kraus_extraction_round_trips_the_choi_matrix() {
        let theta: f64 = 0.3;
        let k0 = ComplexMatrix::from_rows(vec![
            vec![c(theta.cos(), 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let k1 = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(theta.sin(), 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let ch = QuantumChannel::from_kraus(vec![k0, k1]).unwrap();
        let extracted = ch.extract_kraus();
        assert_eq!(extracted.len(), 2);
        let rebuilt = QuantumChannel::from_kraus(extracted).unwrap();
        assert!(rebuilt.choi().max_diff(ch.choi()) < 1e-8);
    }

    #[test]
    fn identity_extraction_is_the_identity_kraus() {
        let ch = QuantumChannel::identity(2);
        let extracted = ch.extract_kraus();
        assert_eq!(extracted.len(), 1);
        assert!(extracted[0].max_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn apply_agrees_with_kraus_sum() {
        let ch = dephasing_half();
        let rho = DensityOperator::new(
            ComplexMatrix::from_rows(vec![
                vec![c(0.7, 0.0), c(0.2, 0.1)],
                vec![c(0.2, -0.1), c(0.3, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let via_choi = ch.apply(&rho).unwrap();
        let via_kraus = kraus_sum(ch.kraus(), rho.matrix());
        assert!(via_choi.matrix().max_diff(&via_kraus) < 1e-12);
        // Dephasing kills the off-diagonal entries.
        assert!(via_choi.matrix().get(0, 1).norm() < 1e-12);
        assert!((via_choi.matrix().get(0, 0) - c(0.7, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn unitary_channel_conjugates() {
        let ch = QuantumChannel::from_unitary(pauli_x()).unwrap();
        let rho = DensityOperator::from_pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!((out.matrix().get(1, 1) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn extended_identity_yields_the_purification_itself() {
        let rho = DensityOperator::maximally_mixed(2);
        let phi = crate::qstate::purify(&rho);
        let joint = QuantumChannel::identity(2).apply_extended(&phi).unwrap();
        assert!(joint.matrix().max_diff(phi.joint_density().matrix()) < 1e-12);
    }

    #[test]
    fn stinespring_dilation_reproduces_the_channel() {
        let ch = dephasing_half();
        let v = ch.stinespring();
        assert_eq!(ch.env_dim(), 2);
        let gram = &v.adjoint() * &v;
        assert!(gram.max_diff(&ComplexMatrix::identity(2)) < 1e-8);
        let rho = DensityOperator::new(
            ComplexMatrix::from_rows(vec![
                vec![c(0.6, 0.0), c(0.3, -0.2)],
                vec![c(0.3, 0.2), c(0.4, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let lifted = &(&v * rho.matrix()) * &v.adjoint();
        let traced = partial_trace(&lifted, &[2, 2], &[0]).unwrap();
        assert!(traced.max_diff(ch.apply(&rho).unwrap().matrix()) < 1e-12);
    }

    #[test]
    fn complement_of_unitary_is_constant_scalar() {
        let ch = QuantumChannel::from_unitary(pauli_y()).unwrap();
        let comp = ch.complement();
        assert_eq!(comp.out_dim(), 1);
        let rho = DensityOperator::from_pure(&[c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let out = comp.apply(&rho).unwrap();
        assert!((out.matrix().get(0, 0) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn complement_of_dephasing_reads_out_the_z_expectation() {
        let ch = dephasing_half();
        let comp = ch.complement();
        let rho = DensityOperator::new(
            ComplexMatrix::from_rows(vec![
                vec![c(0.8, 0.0), c(0.1, 0.1)],
                vec![c(0.1, -0.1), c(0.2, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let out = comp.apply(&rho).unwrap();
        // Environment state [[1/2, z/2], [z/2, 1/2]] with z = Tr(ρZ).
        let z = 0.8 - 0.2;
        assert!((out.matrix().get(0, 0) - c(0.5, 0.0)).norm() < 1e-12);
        assert!((out.matrix().get(0, 1) - c(z / 2.0, 0.0)).norm() < 1e-12);
        assert!((out.matrix().get(1, 0) - c(z / 2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dual_is_unital_and_adjoint_to_the_channel() {
        let ch = dephasing_half();
        let dual = ch.dual();
        let unital = dual.apply(&ComplexMatrix::identity(2)).unwrap();
        assert!(unital.max_diff(&ComplexMatrix::identity(2)) < 1e-12);

        let rho = DensityOperator::new(
            ComplexMatrix::from_rows(vec![
                vec![c(0.55, 0.0), c(0.2, 0.15)],
                vec![c(0.2, -0.15), c(0.45, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let y = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.3, 0.4)],
            vec![c(0.3, -0.4), c(-2.0, 0.0)],
        ])
        .unwrap();
        let lhs = (&ch.apply(&rho).unwrap().matrix().clone() * &y).trace();
        let rhs = (rho.matrix() * &dual.apply(&y).unwrap()).trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn composing_dephasing_with_itself_is_idempotent() {
        let ch = dephasing_half();
        let twice = QuantumChannel::compose(&ch, &ch).unwrap();
        assert!(twice.choi().max_diff(ch.choi()) < 1e-12);
    }

    #[test]
    fn compose_checks_dimensions() {
        let a = QuantumChannel::identity(2);
        let b = QuantumChannel::identity(3);
        assert!(QuantumChannel::compose(&a, &b).is_err());
    }

    #[test]
    fn marginals_of_a_product_channel_split_cleanly() {
        // ρ ↦ ρ ⊗ |0⟩⟨0| on a qubit.
        let mut attach = ComplexMatrix::zeros(4, 2);
        attach.set(0, 0, c(1.0, 0.0));
        attach.set(2, 1, c(1.0, 0.0));
        let ch = QuantumChannel::from_kraus(vec![attach]).unwrap();
        let keep_first = ch.marginal((2, 2), Factor::First).unwrap();
        let keep_second = ch.marginal((2, 2), Factor::Second).unwrap();
        assert!(keep_first
            .choi()
            .max_diff(QuantumChannel::identity(2).choi())
            < 1e-12);
        let rho = DensityOperator::maximally_mixed(2);
        let out = keep_second.apply(&rho).unwrap();
        assert!((out.matrix().get(0, 0) - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dilation_marginal_recovers_channel_and_complement() {
        let ch = dephasing_half();
        let dil = ch.dilation();
        assert_eq!(dil.out_dim(), 4);
        let back = dil.marginal((2, 2), Factor::First).unwrap();
        assert!(back.choi().max_diff(ch.choi()) < 1e-12);
        let env = dil.marginal((2, 2), Factor::Second).unwrap();
        assert!(env.choi().max_diff(ch.complement().choi()) < 1e-12);
    }

    #[test]
    fn non_trace_preserving_kraus_is_rejected() {
        let bad = QuantumChannel::from_kraus(vec![ComplexMatrix::identity(2).scale_re(0.9)]);
        assert!(matches!(bad, Err(Error::NotTracePreserving { .. })));
    }

    #[test]
    fn invalid_choi_matrices_are_rejected() {
        // Right trace profile but indefinite.
        let mut m = ComplexMatrix::zeros(4, 4);
        m.set(0, 0, c(0.75, 0.0));
        m.set(3, 3, c(-0.25, 0.0));
        m.set(1, 1, c(0.25, 0.0));
        m.set(2, 2, c(0.25, 0.0));
        assert!(matches!(
            QuantumChannel::from_choi(2, 2, m),
            Err(Error::NotPsd { .. })
        ));
        // Positive but wrong partial trace: the entangled projector scaled
        // onto one corner.
        let mut n = ComplexMatrix::zeros(4, 4);
        n.set(0, 0, c(1.0, 0.0));
        assert!(matches!(
            QuantumChannel::from_choi(2, 2, n),
            Err(Error::NotTracePreserving { .. })
        ));
    }

    #[test]
    fn mismatched_kraus_shapes_are_rejected() {
        let bad = QuantumChannel::from_kraus(vec![
            ComplexMatrix::identity(2),
            ComplexMatrix::identity(3),
        ]);
        assert!(bad.is_err());
    }
}
