//! Decides whether a quantum channel can be perfectly reversed on a code
//! subspace, by three independent routes: a mutual-information criterion on
//! a faithful code state, explicit Petz recovery, and the Knill-Laflamme
//! condition on Kraus operators. Also evaluates the entropic quantities the
//! criterion is built from (von Neumann and relative entropy, channel mutual
//! information, coherent information, entanglement fidelity) and the
//! no-cloning tradeoff between the two output factors of a bipartite channel.
//!
//! Channels are stored through their Choi matrix, normalized to unit trace,
//! with a Kraus representation cached at construction. All entropies are in
//! bits. Dimensions are expected to stay at desk scale (products up to 64).

pub mod channel;
pub mod densemath;
pub mod entropy;
pub mod error;
pub mod json;
pub mod qstate;
pub mod random;
pub mod verify;

pub use channel::{DualMap, Factor, QuantumChannel};
pub use densemath::{ComplexMatrix, HermitianEigen};
pub use entropy::EntropyValue;
pub use error::{Error, Result};
pub use qstate::{CodeSubspace, DensityOperator, PurifiedState};
pub use verify::{CheckReport, KlMatrix, Verdict, DEFAULT_TOL};
