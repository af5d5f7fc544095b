//! Reversibility verdicts: Petz recovery construction, the
//! mutual-information criterion, the vanishing (constant-output) criterion,
//! the Knill-Laflamme condition on Kraus operators, and the no-cloning
//! tradeoff between the two output factors of a bipartite channel.
//!
//! Every checker returns a [`CheckReport`] whose verdict is pass exactly
//! when all quantities with the `_deviation` suffix are within the report's
//! tolerance, so serialized reports can be re-judged from their numbers.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::channel::{Factor, QuantumChannel};
use crate::densemath::{matfun_on_support, ComplexMatrix};
use crate::entropy::{channel_mutual_information, entanglement_fidelity};
use crate::error::{Error, Result};
use crate::qstate::{faithful_code_state, CodeSubspace, DensityOperator};

/// Default verdict tolerance on entropic deviations and residuals.
pub const DEFAULT_TOL: f64 = 1e-7;

/// Suffix that marks a report quantity as verdict-driving.
pub const DEVIATION_SUFFIX: &str = "_deviation";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// Outcome of one check: a verdict, the tolerance it was judged against,
/// and the named quantities that went into it.
#[derive(Debug, Clone)]
pub struct CheckReport {
    verdict: Verdict,
    method: String,
    tolerance: f64,
    quantities: BTreeMap<String, f64>,
}

impl CheckReport {
    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn method(&self) -> &str {
        &self.method
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn quantities(&self) -> &BTreeMap<String, f64> {
        &self.quantities
    }

    pub fn quantity(&self, name: &str) -> Option<f64> {
        self.quantities.get(name).copied()
    }

    /// Reassembles a report from its parts, recomputing the verdict from
    /// the deviation-suffixed quantities.
    pub fn from_parts(method: String, tolerance: f64, quantities: BTreeMap<String, f64>) -> Self {
        let verdict = if quantities
            .iter()
            .filter(|(name, _)| name.ends_with(DEVIATION_SUFFIX))
            .all(|(_, &value)| value <= tolerance)
        {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        CheckReport {
            verdict,
            method,
            tolerance,
            quantities,
        }
    }
}

struct ReportBuilder {
    method: &'static str,
    tolerance: f64,
    quantities: BTreeMap<String, f64>,
}

impl ReportBuilder {
    fn new(method: &'static str, tolerance: f64) -> Self {
        ReportBuilder {
            method,
            tolerance,
            quantities: BTreeMap::new(),
        }
    }

    fn quantity(mut self, name: impl Into<String>, value: f64) -> Self {
        let name = name.into();
        debug_assert!(!name.ends_with(DEVIATION_SUFFIX));
        self.quantities.insert(name, value);
        self
    }

    fn deviation(mut self, name: &str, value: f64) -> Self {
        debug_assert!(name.ends_with(DEVIATION_SUFFIX));
        self.quantities.insert(name.to_string(), value);
        self
    }

    fn finish(self) -> CheckReport {
        CheckReport::from_parts(self.method.to_string(), self.tolerance, self.quantities)
    }
}

/// The entries c_kl and residuals of the Knill-Laflamme compression
/// P E_k† E_l P = c_kl P, indexed by Kraus pairs.
#[derive(Debug, Clone)]
pub struct KlMatrix {
    entries: ComplexMatrix,
    residuals: Vec<f64>,
}

impl KlMatrix {
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entry(&self, k: usize, l: usize) -> Complex64 {
        self.entries.get(k, l)
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn residual(&self, k: usize, l: usize) -> f64 {
        self.residuals[k * self.dim() + l]
    }

    pub fn residual_max(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.entries.hermitian_deviation()
    }

    pub fn trace_re(&self) -> f64 {
        self.entries.trace().re
    }
}

/// Transpose channel of `ch` with respect to the prior σ: conjugation by
/// σ^{1/2} after the dual after whitening by E(σ)^{-1/2}. On the support of
/// E(σ) this is the unique map that undoes `ch` whenever that is possible;
/// the orthocomplement of the support is routed back to σ itself so the
/// result is trace preserving everywhere.
pub fn petz_recovery(ch: &QuantumChannel, sigma: &DensityOperator) -> Result<QuantumChannel> {
    if sigma.dim() != ch.in_dim() {
        return Err(Error::dims(format!(
            "Petz recovery of a {} -> {} channel with a prior of dimension {}",
            ch.in_dim(),
            ch.out_dim(),
            sigma.dim()
        )));
    }
    let image = ch.apply(sigma)?;
    let whiten = matfun_on_support(image.matrix(), |x| x.powf(-0.5))?;
    let sqrt_sigma = matfun_on_support(sigma.matrix(), f64::sqrt)?;

    let mut kraus: Vec<ComplexMatrix> = ch
        .kraus()
        .iter()
        .map(|e| &(&sqrt_sigma * &e.adjoint()) * &whiten)
        .collect();

    let support = image.eigen().support_indices();
    if support.len() < ch.out_dim() {
        let sigma_eig = sigma.eigen();
        let weights: Vec<(f64, Vec<Complex64>)> = sigma_eig
            .support_indices()
            .into_iter()
            .map(|i| {
                (
                    sigma.eigenvalues()[i].sqrt(),
                    sigma_eig.eigenvectors.column(i),
                )
            })
            .collect();
        for i in 0..ch.out_dim() {
            if support.contains(&i) {
                continue;
            }
            let q = image.eigen().eigenvectors.column(i);
            for (w, s) in &weights {
                let scaled: Vec<Complex64> = s.iter().map(|z| z * *w).collect();
                kraus.push(ComplexMatrix::outer(&scaled, &q));
            }
        }
    }
    QuantumChannel::from_kraus(kraus)
}

/// Decides reversibility of `ch` on `code` by comparing the channel mutual
/// information of the faithful code state against its identity-channel
/// value, then corroborates a posteriori with the Petz recovery fidelity.
pub fn check_reversible(
    ch: &QuantumChannel,
    code: &CodeSubspace,
    tol: f64,
) -> Result<CheckReport> {
    if code.ambient_dim() != ch.in_dim() {
        return Err(Error::dims(format!(
            "code lives in dimension {}, channel input is {}",
            code.ambient_dim(),
            ch.in_dim()
        )));
    }
    let rho_star = faithful_code_state(code);
    let i_identity = channel_mutual_information(&rho_star, &QuantumChannel::identity(ch.in_dim()))?
        .expect_bits("identity-channel mutual information is finite");
    let i_channel = channel_mutual_information(&rho_star, ch)?
        .expect_bits("channel mutual information is finite");
    let delta = i_identity - i_channel;

    let recovery = petz_recovery(ch, &rho_star)?;
    let round_trip = QuantumChannel::compose(&recovery, ch)?;
    let fidelity = entanglement_fidelity(&rho_star, &round_trip)?;
    let offsupport = ch.out_dim() - ch.apply(&rho_star)?.rank();

    Ok(ReportBuilder::new("reversible", tol)
        .quantity("mutual_info_identity", i_identity)
        .quantity("mutual_info_channel", i_channel)
        .quantity("fidelity", fidelity)
        .quantity("petz_offsupport_dim", offsupport as f64)
        .deviation("reversibility_deviation", delta.abs())
        .deviation("fidelity_deviation", (1.0 - fidelity).max(0.0))
        .finish())
}

/// Decides whether `ch` is vanishing on `code`, meaning the faithful code
/// state shares no mutual information with the reference; corroborated by
/// checking the output is constant across code basis states.
pub fn check_vanishing(
    ch: &QuantumChannel,
    code: &CodeSubspace,
    tol: f64,
) -> Result<CheckReport> {
    if code.ambient_dim() != ch.in_dim() {
        return Err(Error::dims(format!(
            "code lives in dimension {}, channel input is {}",
            code.ambient_dim(),
            ch.in_dim()
        )));
    }
    let rho_star = faithful_code_state(code);
    let i_channel = channel_mutual_information(&rho_star, ch)?
        .expect_bits("channel mutual information is finite");

    let reference_output = ch.apply(&rho_star)?;
    let mut constant_output_max: f64 = 0.0;
    for j in 0..code.logical_dim() {
        let psi = DensityOperator::from_pure(&code.basis_vector(j))?;
        let out = ch.apply(&psi)?;
        constant_output_max =
            constant_output_max.max(out.matrix().max_diff(reference_output.matrix()));
    }

    Ok(ReportBuilder::new("vanishing", tol)
        .quantity("mutual_info_channel", i_channel)
        .quantity("constant_output_max", constant_output_max)
        .deviation("mutual_info_deviation", i_channel)
        .deviation(
            "constant_output_squared_deviation",
            constant_output_max * constant_output_max,
        )
        .finish())
}

/// Checks the Knill-Laflamme condition: every compression P E_k† E_l P must
/// be a scalar multiple of the code projector. Uses the cached Kraus set;
/// the verdict is representation independent even though the scalars are
/// not.
pub fn check_kl(
    ch: &QuantumChannel,
    code: &CodeSubspace,
    tol: f64,
) -> Result<(CheckReport, KlMatrix)> {
    if code.ambient_dim() != ch.in_dim() {
        return Err(Error::dims(format!(
            "code lives in dimension {}, channel input is {}",
            code.ambient_dim(),
            ch.in_dim()
        )));
    }
    let projector = code.projector();
    let k_dim = code.logical_dim() as f64;
    let kraus = ch.kraus();
    let r = kraus.len();

    let mut entries = ComplexMatrix::zeros(r, r);
    let mut residuals = vec![0.0; r * r];
    for a in 0..r {
        for b in 0..r {
            let compressed = &(&projector * &(&kraus[a].adjoint() * &kraus[b])) * &projector;
            let c_ab = compressed.trace() / k_dim;
            let residual = compressed.max_diff(&projector.scale(c_ab));
            entries.set(a, b, c_ab);
            residuals[a * r + b] = residual;
        }
    }
    let kl = KlMatrix { entries, residuals };

    let mut report = ReportBuilder::new("knill-laflamme", tol)
        .quantity("kraus_count", r as f64)
        .deviation("residual_max_deviation", kl.residual_max())
        .deviation("hermiticity_deviation", kl.hermiticity_deviation())
        .deviation("trace_deviation", (kl.trace_re() - 1.0).abs());
    for a in 0..r {
        for b in 0..r {
            let c_ab = kl.entry(a, b);
            report = report
                .quantity(format!("c_{a}_{b}_re"), c_ab.re)
                .quantity(format!("c_{a}_{b}_im"), c_ab.im)
                .quantity(format!("residual_{a}_{b}"), kl.residual(a, b));
        }
    }
    Ok((report.finish(), kl))
}

/// Purity probes for deciding (heuristically, from finitely many inputs)
/// whether a channel sends every code state to a pure state.
fn minimum_output_purity(ch: &QuantumChannel, code: &CodeSubspace) -> Result<f64> {
    let k = code.logical_dim();
    let mut probes: Vec<Vec<Complex64>> = (0..k).map(|j| code.basis_vector(j)).collect();
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..k {
        for j in (i + 1)..k {
            let vi = code.basis_vector(i);
            let vj = code.basis_vector(j);
            probes.push(
                vi.iter()
                    .zip(&vj)
                    .map(|(a, b)| (a + b) * half)
                    .collect(),
            );
        }
    }
    let mut min_purity = f64::INFINITY;
    for probe in &probes {
        let out = ch.apply(&DensityOperator::from_pure(probe)?)?;
        min_purity = min_purity.min(out.purity());
    }
    Ok(min_purity)
}

/// Verifies the information tradeoff between the two output factors of a
/// bipartite-output channel on a code: the two factor mutual informations
/// can never exceed the identity-channel value, reversibility on one factor
/// forces the other to vanish, and when the channel is detected as
/// pure-state-valued (a finite-probe heuristic) and reversible the
/// inequality is saturated and the forcing becomes an equivalence.
pub fn check_tradeoff(
    ch: &QuantumChannel,
    out_dims: (usize, usize),
    code: &CodeSubspace,
    tol: f64,
) -> Result<CheckReport> {
    if code.ambient_dim() != ch.in_dim() {
        return Err(Error::dims(format!(
            "code lives in dimension {}, channel input is {}",
            code.ambient_dim(),
            ch.in_dim()
        )));
    }
    let e_b = ch.marginal(out_dims, Factor::First)?;
    let e_c = ch.marginal(out_dims, Factor::Second)?;
    let rho_star = faithful_code_state(code);

    let i_identity = channel_mutual_information(&rho_star, &QuantumChannel::identity(ch.in_dim()))?
        .expect_bits("identity-channel mutual information is finite");
    let i_b = channel_mutual_information(&rho_star, &e_b)?
        .expect_bits("first-factor mutual information is finite");
    let i_c = channel_mutual_information(&rho_star, &e_c)?
        .expect_bits("second-factor mutual information is finite");
    let slack = i_identity - i_b - i_c;

    let b_reversible = check_reversible(&e_b, code, tol)?.pass();
    let c_vanishing = check_vanishing(&e_c, code, tol)?.pass();
    let bc_reversible = check_reversible(ch, code, tol)?.pass();
    let purity_min = minimum_output_purity(ch, code)?;
    let pure_state_channel = purity_min >= 1.0 - tol;

    let no_cloning_deviation = if b_reversible { i_c.max(0.0) } else { 0.0 };
    let equality_deviation = if pure_state_channel && bc_reversible {
        slack.abs()
    } else {
        0.0
    };
    let converse_deviation = if pure_state_channel && bc_reversible && c_vanishing {
        (i_identity - i_b).abs()
    } else {
        0.0
    };

    Ok(ReportBuilder::new("tradeoff", tol)
        .quantity("mutual_info_identity", i_identity)
        .quantity("mutual_info_b", i_b)
        .quantity("mutual_info_c", i_c)
        .quantity("slack", slack)
        .quantity("b_reversible", b_reversible.into())
        .quantity("c_vanishing", c_vanishing.into())
        .quantity("bc_reversible", bc_reversible.into())
        .quantity("purity_min", purity_min)
        .quantity("pure_state_channel", pure_state_channel.into())
        .deviation("inequality_deviation", (-slack).max(0.0))
        .deviation("no_cloning_deviation", no_cloning_deviation)
        .deviation("equality_deviation", equality_deviation)
        .deviation("converse_deviation", converse_deviation)
        .finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{vn_entropy, EntropyValue};
    use crate::qstate::encode;
    use crate::random::{
        random_channel, random_code, random_correctable_channel, remix_kraus,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn repetition_code() -> CodeSubspace {
        let mut v = ComplexMatrix::zeros(8, 2);
        v.set(0, 0, c(1.0, 0.0));
        v.set(7, 1, c(1.0, 0.0));
        CodeSubspace::new(v).unwrap()
    }

    /// The code spanned by |000⟩ and |100⟩, which a first-qubit flip maps
    /// into itself and therefore cannot be protected.
    fn confusable_code() -> CodeSubspace {
        let mut v = ComplexMatrix::zeros(8, 2);
        v.set(0, 0, c(1.0, 0.0));
        v.set(4, 1, c(1.0, 0.0));
        CodeSubspace::new(v).unwrap()
    }

    fn single_flip_channel(p: f64) -> QuantumChannel {
        let x = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let id = ComplexMatrix::identity(2);
        let kron3 = |a: &ComplexMatrix, b: &ComplexMatrix, d: &ComplexMatrix| {
            crate::densemath::kron(&crate::densemath::kron(a, b), d)
        };
        QuantumChannel::from_kraus(vec![
            kron3(&id, &id, &id).scale_re((1.0 - p).sqrt()),
            kron3(&x, &id, &id).scale_re((p / 3.0).sqrt()),
            kron3(&id, &x, &id).scale_re((p / 3.0).sqrt()),
            kron3(&id, &id, &x).scale_re((p / 3.0).sqrt()),
        ])
        .unwrap()
    }

    #[test]
    fn petz_recovery_of_a_unitary_is_its_inverse() {
        let u = ComplexMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let ch = QuantumChannel::from_unitary(u).unwrap();
        let rec = petz_recovery(&ch, &DensityOperator::maximally_mixed(2)).unwrap();
        let round = QuantumChannel::compose(&rec, &ch).unwrap();
        assert!(round.choi().max_diff(QuantumChannel::identity(2).choi()) < 1e-10);
    }

    #[test]
    fn petz_recovery_of_a_reset_casts_back_to_the_prior() {
        let mut k0 = ComplexMatrix::zeros(2, 2);
        k0.set(0, 0, c(1.0, 0.0));
        let mut k1 = ComplexMatrix::zeros(2, 2);
        k1.set(0, 1, c(1.0, 0.0));
        let ch = QuantumChannel::from_kraus(vec![k0, k1]).unwrap();
        let prior = DensityOperator::maximally_mixed(2);
        let rec = petz_recovery(&ch, &prior).unwrap();
        // Everything the reset produces is recovered as the prior itself.
        let round = QuantumChannel::compose(&rec, &ch).unwrap();
        let out = round
            .apply(&DensityOperator::from_pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap())
            .unwrap();
        assert!(out.matrix().max_diff(prior.matrix()) < 1e-10);
    }

    #[test]
    fn petz_recovery_corrects_single_flips_on_the_repetition_code() {
        let code = repetition_code();
        let ch = single_flip_channel(0.3);
        let sigma = faithful_code_state(&code);
        let rec = petz_recovery(&ch, &sigma).unwrap();
        let round = QuantumChannel::compose(&rec, &ch).unwrap();
        let f = entanglement_fidelity(&sigma, &round).unwrap();
        assert!(f > 1.0 - 1e-9, "fidelity {f}");
    }

    #[test]
    fn petz_round_trip_is_idempotent_on_code_states() {
        let code = repetition_code();
        let ch = single_flip_channel(0.25);
        let sigma = faithful_code_state(&code);
        let rec = petz_recovery(&ch, &sigma).unwrap();
        let round = QuantumChannel::compose(&rec, &ch).unwrap();
        let twice = QuantumChannel::compose(&round, &round).unwrap();
        let logical = DensityOperator::from_pure(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let encoded = encode(&code, &logical).unwrap();
        let once = round.apply(&encoded).unwrap();
        let again = twice.apply(&encoded).unwrap();
        assert!(once.matrix().max_diff(again.matrix()) < 1e-7);
    }

    #[test]
    fn repetition_code_is_reversible_under_single_flips() {
        let report = check_reversible(&single_flip_channel(0.3), &repetition_code(), DEFAULT_TOL)
            .unwrap();
        assert!(report.pass(), "{report:?}");
        assert!((report.quantity("mutual_info_identity").unwrap() - 2.0).abs() < 1e-9);
        assert!(report.quantity("fidelity").unwrap() > 1.0 - 1e-9);
    }

    #[test]
    fn confusable_code_is_not_reversible_under_single_flips() {
        let report = check_reversible(&single_flip_channel(0.3), &confusable_code(), DEFAULT_TOL)
            .unwrap();
        assert!(!report.pass());
        assert!(report.quantity("reversibility_deviation").unwrap() > 0.1);
    }

    #[test]
    fn reset_channel_erases_a_full_qubit_code() {
        let mut k0 = ComplexMatrix::zeros(2, 2);
        k0.set(0, 0, c(1.0, 0.0));
        let mut k1 = ComplexMatrix::zeros(2, 2);
        k1.set(0, 1, c(1.0, 0.0));
        let ch = QuantumChannel::from_kraus(vec![k0, k1]).unwrap();
        let code = CodeSubspace::standard(2, 2).unwrap();
        let report = check_reversible(&ch, &code, DEFAULT_TOL).unwrap();
        assert!(!report.pass());
        assert!(report.quantity("mutual_info_channel").unwrap().abs() < 1e-9);
        // The same erasure is exactly a vanishing channel on that code.
        let vanish = check_vanishing(&ch, &code, DEFAULT_TOL).unwrap();
        assert!(vanish.pass());
    }

    #[test]
    fn complement_of_a_correctable_channel_vanishes_on_the_code() {
        let ch = single_flip_channel(0.3);
        let report =
            check_vanishing(&ch.complement(), &repetition_code(), DEFAULT_TOL).unwrap();
        assert!(report.pass(), "{report:?}");
        // And the identity channel is as far from vanishing as possible.
        let not_vanishing =
            check_vanishing(&QuantumChannel::identity(8), &repetition_code(), DEFAULT_TOL)
                .unwrap();
        assert!(!not_vanishing.pass());
    }

    #[test]
    fn kl_matrix_of_single_flips_on_the_repetition_code() {
        let (report, kl) =
            check_kl(&single_flip_channel(0.3), &repetition_code(), DEFAULT_TOL).unwrap();
        assert!(report.pass(), "{report:?}");
        let expect = [0.7, 0.1, 0.1, 0.1];
        for (a, &diag) in expect.iter().enumerate() {
            for b in 0..4 {
                let want = if a == b { diag } else { 0.0 };
                assert!(
                    (kl.entry(a, b) - c(want, 0.0)).norm() < 1e-9,
                    "entry {a},{b}"
                );
                assert!(kl.residual(a, b) < 1e-10);
            }
        }
        assert!((kl.trace_re() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kl_fails_on_the_confusable_code() {
        let (report, kl) =
            check_kl(&single_flip_channel(0.3), &confusable_code(), DEFAULT_TOL).unwrap();
        assert!(!report.pass());
        assert!(kl.residual_max() > 0.2);
    }

    #[test]
    fn kl_verdict_survives_kraus_remixing() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let good = single_flip_channel(0.3);
        let remixed = remix_kraus(&mut rng, &good);
        let (before, kl_before) = check_kl(&good, &repetition_code(), DEFAULT_TOL).unwrap();
        let (after, kl_after) = check_kl(&remixed, &repetition_code(), DEFAULT_TOL).unwrap();
        assert!(before.pass() && after.pass());
        // The scalars move, the verdict does not.
        assert!((kl_before.entries().max_diff(kl_after.entries())) > 1e-3);
    }

    #[test]
    fn kl_matrix_of_a_correctable_channel_is_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let code = random_code(&mut rng, 5, 2);
        let ch = random_correctable_channel(&mut rng, &code, 6, 2);
        let remixed = remix_kraus(&mut rng, &ch);
        let (report, kl) = check_kl(&remixed, &code, DEFAULT_TOL).unwrap();
        assert!(report.pass(), "{report:?}");
        let eig = crate::densemath::eig_hermitian(kl.entries()).unwrap();
        assert!(eig.min_eigenvalue() > -1e-8);
        assert!((kl.trace_re() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn three_routes_agree_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for trial in 0..8 {
            let (ambient, logical, out) = if trial < 6 { (4, 2, 4) } else { (6, 3, 7) };
            let code = random_code(&mut rng, ambient, logical);
            let (ch, expect_pass) = if trial % 2 == 0 {
                (random_correctable_channel(&mut rng, &code, out, 2), true)
            } else {
                (random_channel(&mut rng, ambient, out, 3), false)
            };
            let rev = check_reversible(&ch, &code, DEFAULT_TOL).unwrap();
            let (kl, _) = check_kl(&ch, &code, DEFAULT_TOL).unwrap();
            assert_eq!(rev.pass(), expect_pass, "trial {trial}: {rev:?}");
            assert_eq!(kl.pass(), expect_pass, "trial {trial}");
            let fid_pass = rev.quantity("fidelity").unwrap() >= 1.0 - DEFAULT_TOL;
            assert_eq!(fid_pass, expect_pass, "trial {trial}");
        }
    }

    #[test]
    fn attaching_a_fixed_environment_satisfies_the_tradeoff_with_equality() {
        // ψ ↦ ψ ⊗ |0⟩: the first factor keeps everything, the second learns
        // nothing.
        let mut attach = ComplexMatrix::zeros(4, 2);
        attach.set(0, 0, c(1.0, 0.0));
        attach.set(2, 1, c(1.0, 0.0));
        let ch = QuantumChannel::from_kraus(vec![attach]).unwrap();
        let code = CodeSubspace::standard(2, 2).unwrap();
        let report = check_tradeoff(&ch, (2, 2), &code, DEFAULT_TOL).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.quantity("b_reversible").unwrap(), 1.0);
        assert_eq!(report.quantity("c_vanishing").unwrap(), 1.0);
        assert_eq!(report.quantity("pure_state_channel").unwrap(), 1.0);
        assert!(report.quantity("slack").unwrap().abs() < 1e-9);
        assert!((report.quantity("mutual_info_b").unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn swapping_into_the_second_factor_flips_the_roles() {
        // ψ ↦ |0⟩ ⊗ ψ.
        let mut swap = ComplexMatrix::zeros(4, 2);
        swap.set(0, 0, c(1.0, 0.0));
        swap.set(1, 1, c(1.0, 0.0));
        let ch = QuantumChannel::from_kraus(vec![swap]).unwrap();
        let code = CodeSubspace::standard(2, 2).unwrap();
        let report = check_tradeoff(&ch, (2, 2), &code, DEFAULT_TOL).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.quantity("b_reversible").unwrap(), 0.0);
        assert_eq!(report.quantity("c_vanishing").unwrap(), 0.0);
        assert!((report.quantity("mutual_info_c").unwrap() - 2.0).abs() < 1e-9);
        assert!(report.quantity("slack").unwrap().abs() < 1e-9);
    }

    #[test]
    fn dilation_of_a_correctable_channel_passes_the_tradeoff() {
        let ch = single_flip_channel(0.3);
        let dil = ch.dilation();
        let code = repetition_code();
        let report = check_tradeoff(&dil, (8, 4), &code, DEFAULT_TOL).unwrap();
        assert!(report.pass(), "{report:?}");
        assert_eq!(report.quantity("b_reversible").unwrap(), 1.0);
        assert_eq!(report.quantity("c_vanishing").unwrap(), 1.0);
        assert!(report.quantity("no_cloning_deviation").unwrap() <= DEFAULT_TOL);
    }

    #[test]
    fn noisy_channels_still_respect_the_information_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let ch = random_channel(&mut rng, 4, 6, 2);
        let code = random_code(&mut rng, 4, 2);
        let report = check_tradeoff(&ch, (2, 3), &code, DEFAULT_TOL).unwrap();
        assert!(report.pass(), "{report:?}");
        assert!(report.quantity("inequality_deviation").unwrap() <= DEFAULT_TOL);
    }

    #[test]
    fn report_verdict_matches_its_deviations_after_reassembly() {
        let report = check_reversible(&single_flip_channel(0.3), &repetition_code(), DEFAULT_TOL)
            .unwrap();
        let rebuilt = CheckReport::from_parts(
            report.method().to_string(),
            report.tolerance(),
            report.quantities().clone(),
        );
        assert_eq!(rebuilt.verdict(), report.verdict());
    }

    #[test]
    fn faithful_state_entropy_matches_the_code_size() {
        let code = repetition_code();
        let rho = faithful_code_state(&code);
        assert_eq!(vn_entropy(&rho), EntropyValue::Finite(1.0));
    }
}
