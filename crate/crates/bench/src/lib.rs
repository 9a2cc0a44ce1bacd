//! Shared fixtures for the criterion benches.

use loccgate::statekit::{build_family, FamilySpec};
use loccgate::{PairedCut, Tolerances, WitnessProblem};

/// The A-family problem at parameter `a` with Bell detectors and weights
/// `probs`.
pub fn a_family_problem(a: f64, probs: Vec<f64>) -> WitnessProblem {
    let fam = build_family(FamilySpec::AFamily { a }).expect("a in (0, 1)");
    WitnessProblem::new(
        fam.states,
        fam.detectors.expect("a-family ships detectors"),
        probs,
        &Tolerances::default(),
    )
    .expect("valid problem")
}

pub fn bipartite_cut() -> PairedCut {
    PairedCut::default_for(2, 2).expect("two-party pairing")
}
