//! Entropic functionals, all in bits: von Neumann entropy, relative entropy
//! with an explicit infinity for support violations, bipartite mutual
//! information, channel mutual information through a purification, coherent
//! information, and entanglement fidelity.

use std::fmt;

use crate::channel::QuantumChannel;
use crate::densemath::{inner, matfun_on_support};
use crate::error::{Error, Result};
use crate::qstate::{purify, support_cut, DensityOperator};

/// Tolerance on the support-containment test inside the relative entropy.
pub const SUPPORT_CHECK_EPS: f64 = 1e-9;

/// An entropy in bits, or an explicit positive infinity. The infinite case
/// is a sentinel variant rather than a floating-point infinity, so it cannot
/// silently flow into arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyValue {
    Finite(f64),
    Infinite,
}

impl EntropyValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, EntropyValue::Finite(_))
    }

    pub fn bits(&self) -> Option<f64> {
        match self {
            EntropyValue::Finite(x) => Some(*x),
            EntropyValue::Infinite => None,
        }
    }

    /// Unwraps a value that the caller has established is finite.
    pub fn expect_bits(&self, context: &str) -> f64 {
        match self {
            EntropyValue::Finite(x) => *x,
            EntropyValue::Infinite => panic!("entropy value is infinite: {context}"),
        }
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyValue::Finite(x) => write!(f, "{x}"),
            EntropyValue::Infinite => write!(f, "+inf"),
        }
    }
}

fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    let cut = support_cut(eigenvalues);
    -eigenvalues
        .iter()
        .filter(|&&p| p > cut)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

/// Von Neumann entropy H(ρ) in bits, computed from the eigenvalues alone.
pub fn vn_entropy(rho: &DensityOperator) -> EntropyValue {
    EntropyValue::Finite(entropy_of_spectrum(rho.eigenvalues()))
}

/// Relative entropy D(ρ‖σ) in bits, infinite when the support of ρ leaks
/// outside the support of σ.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<EntropyValue> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dims(format!(
            "relative entropy between dimension {} and dimension {} states",
            rho.dim(),
            sigma.dim()
        )));
    }
    if !crate::qstate::support_contained(rho, sigma, SUPPORT_CHECK_EPS) {
        return Ok(EntropyValue::Infinite);
    }
    let cut = support_cut(rho.eigenvalues());
    let rho_term: f64 = rho
        .eigenvalues()
        .iter()
        .filter(|&&p| p > cut)
        .map(|&p| p * p.log2())
        .sum();
    let log_sigma = matfun_on_support(sigma.matrix(), f64::log2)?;
    let cross_term = (rho.matrix() * &log_sigma).trace().re;
    Ok(EntropyValue::Finite(rho_term - cross_term))
}

/// Mutual information I(X;Y) of a bipartite state, from the three entropies
/// of the joint state and its marginals.
pub fn mutual_information(
    rho_xy: &DensityOperator,
    dims: (usize, usize),
) -> Result<EntropyValue> {
    let (dx, dy) = dims;
    if dx * dy != rho_xy.dim() {
        return Err(Error::dims(format!(
            "bipartite split {}x{} of a dimension-{} state",
            dx,
            dy,
            rho_xy.dim()
        )));
    }
    let rx = rho_xy.reduce(&[dx, dy], &[0])?;
    let ry = rho_xy.reduce(&[dx, dy], &[1])?;
    let hx = entropy_of_spectrum(rx.eigenvalues());
    let hy = entropy_of_spectrum(ry.eigenvalues());
    let hxy = entropy_of_spectrum(rho_xy.eigenvalues());
    Ok(EntropyValue::Finite(hx + hy - hxy))
}

/// Builds the joint reference-output state of a channel acting on the
/// standard purification of ρ.
fn reference_output_state(
    rho: &DensityOperator,
    ch: &QuantumChannel,
) -> Result<DensityOperator> {
    if ch.in_dim() != rho.dim() {
        return Err(Error::dims(format!(
            "a {} -> {} channel cannot act on a dimension-{} state",
            ch.in_dim(),
            ch.out_dim(),
            rho.dim()
        )));
    }
    ch.apply_extended(&purify(rho))
}

/// Channel mutual information I(ρ, E): the mutual information between the
/// purifying reference and the channel output.
pub fn channel_mutual_information(
    rho: &DensityOperator,
    ch: &QuantumChannel,
) -> Result<EntropyValue> {
    let joint = reference_output_state(rho, ch)?;
    mutual_information(&joint, (rho.dim(), ch.out_dim()))
}

/// Coherent information I_c(ρ, E) = H(output) - H(reference, output).
pub fn coherent_information(rho: &DensityOperator, ch: &QuantumChannel) -> Result<EntropyValue> {
    let joint = reference_output_state(rho, ch)?;
    let out = joint.reduce(&[rho.dim(), ch.out_dim()], &[1])?;
    let hb = entropy_of_spectrum(out.eigenvalues());
    let hrb = entropy_of_spectrum(joint.eigenvalues());
    Ok(EntropyValue::Finite(hb - hrb))
}

/// Entanglement fidelity of a channel on a state: the overlap of the
/// channel-extended purification with the original purification.
pub fn entanglement_fidelity(rho: &DensityOperator, ch: &QuantumChannel) -> Result<f64> {
    if ch.in_dim() != rho.dim() || ch.out_dim() != rho.dim() {
        return Err(Error::dims(format!(
            "entanglement fidelity needs a {0} -> {0} channel, got {1} -> {2}",
            rho.dim(),
            ch.in_dim(),
            ch.out_dim()
        )));
    }
    let phi = purify(rho);
    let joint = ch.apply_extended(&phi)?;
    let image = joint.matrix().matvec(phi.amplitudes());
    Ok(inner(phi.amplitudes(), &image).re)
}
