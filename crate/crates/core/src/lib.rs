//! Certification of LOCC indistinguishability for sets of orthogonal
//! multipartite pure states.
//!
//! The method superposes the hypotheses with entangled *detector* states,
//!
//! ```text
//! ψ = Σ_i √p_i |ψ_i⟩ ⊗ |φ_i⟩,
//! ```
//!
//! and asks whether ψ can be converted by LOCC into the ensemble
//! `{p_i, φ_i}` across the cut that pairs every original party with its
//! detector parties. If perfect local discrimination of the `ψ_i` were
//! possible, that conversion would be too; the Jonathan–Plenio majorization
//! criterion decides it exactly for bipartite pure states, so a violated
//! criterion certifies that the set is locally indistinguishable.
//!
//! Conventions used throughout:
//!
//! * amplitudes are stored row-major with party 0 as the most significant
//!   index (`index = Σ_j i_j · Π_{k>j} d_k`);
//! * a [`SchmidtVector`] holds *squared* Schmidt coefficients, sorted
//!   descending;
//! * ω is `exp(2πi/3)` wherever the qutrit families need a cube root of unity.

pub mod cuts;
pub mod error;
pub mod linalg;
pub mod majorization;
#[cfg(any(test, feature = "oracles"))]
pub mod oracle;
pub mod proposition;
pub mod random;
pub mod search;
pub mod statekit;
pub mod witness;

pub use cuts::{Cut, SchmidtVector};
pub use error::{Error, Result};
pub use majorization::{Ensemble, MajorizationReport};
pub use proposition::{BasisSpec, PropositionKind, PropositionVerdict};
pub use search::{SearchConfig, SearchResult};
pub use statekit::{Amplitude, FamilySpec, PureState, StateSet};
pub use witness::{PairedCut, Verdict, WitnessProblem, WitnessReport};

use serde::{Deserialize, Serialize};

/// Largest total Hilbert-space dimension a dense [`PureState`] may have.
pub const MAX_TOTAL_DIM: usize = 1 << 20;

/// Numerical tolerances shared by every check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Allowed deviation of a state norm from 1.
    pub norm: f64,
    /// Allowed deviation of a Gram matrix from the identity.
    pub orth: f64,
    /// Squared Schmidt coefficients (and residual norms) at or below this
    /// count as zero.
    pub rank: f64,
    /// Slack in prefix-sum comparisons; verdicts within ten times this are
    /// reported as boundary cases.
    pub major: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            norm: 1e-9,
            orth: 1e-9,
            rank: 1e-8,
            major: 1e-9,
        }
    }
}
