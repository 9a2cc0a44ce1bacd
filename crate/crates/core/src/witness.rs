//! The superposition witness: hypotheses entangled with detectors, tested
//! with the Jonathan–Plenio criterion across the cut that keeps each party
//! with its detector.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cuts::{schmidt_vector, Cut, SchmidtVector};
use crate::error::{Error, Result};
use crate::majorization::{jonathan_plenio_spectra, validate_distribution, MajorizationReport};
use crate::statekit::{PureState, StateSet};
use crate::Tolerances;

/// Hypotheses `ψ_i`, detectors `φ_i` and weights `p_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessProblem {
    states: StateSet,
    detectors: Vec<PureState>,
    probs: Vec<f64>,
}

impl WitnessProblem {
    pub fn new(states: StateSet, detectors: Vec<PureState>, probs: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        let k = states.len();
        if detectors.len() != k || probs.len() != k {
            return Err(Error::InvalidParameter(format!(
                "{k} states need {k} detectors and {k} probabilities, got {} and {}",
                detectors.len(),
                probs.len()
            )));
        }
        let ddims = detectors[0].dims().to_vec();
        if let Some(d) = detectors.iter().find(|d| d.dims() != ddims.as_slice()) {
            return Err(Error::DimsMismatch {
                left: ddims,
                right: d.dims().to_vec(),
            });
        }
        validate_distribution(&probs, tol.norm)?;
        Ok(WitnessProblem {
            states,
            detectors,
            probs,
        })
    }

    pub fn states(&self) -> &StateSet {
        &self.states
    }

    pub fn detectors(&self) -> &[PureState] {
        &self.detectors
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn state_parties(&self) -> usize {
        self.states.dims().len()
    }

    pub fn detector_parties(&self) -> usize {
        self.detectors[0].parties()
    }

    /// Same states and detectors, new weights.
    pub fn with_probs(&self, probs: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        validate_distribution(&probs, tol.norm)?;
        if probs.len() != self.probs.len() {
            return Err(Error::InvalidProbabilities(format!(
                "expected {} probabilities, got {}",
                self.probs.len(),
                probs.len()
            )));
        }
        Ok(WitnessProblem {
            states: self.states.clone(),
            detectors: self.detectors.clone(),
            probs,
        })
    }

    /// Same hypotheses and weights, new detectors.
    pub fn with_detectors(&self, detectors: Vec<PureState>, tol: &Tolerances) -> Result<Self> {
        WitnessProblem::new(self.states.clone(), detectors, self.probs.clone(), tol)
    }
}

/// One location in the evaluation: some original parties together with
/// some detector parties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartyGroup {
    pub state_parties: Vec<usize>,
    pub detector_parties: Vec<usize>,
}

/// Assignment of original and detector parties to locations.
///
/// Every bipartition of the groups is a coarse-graining on which the
/// bipartite criterion applies; all of them are evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairedCut {
    groups: Vec<PartyGroup>,
}

impl PairedCut {
    pub fn new(groups: Vec<PartyGroup>, state_parties: usize, detector_parties: usize) -> Result<Self> {
        if groups.len() < 2 {
            return Err(Error::InvalidCut("need at least two locations".into()));
        }
        let mut seen_s = vec![false; state_parties];
        let mut seen_d = vec![false; detector_parties];
        for g in &groups {
            if g.state_parties.is_empty() && g.detector_parties.is_empty() {
                return Err(Error::InvalidCut("empty location".into()));
            }
            for (list, seen, kind) in [
                (&g.state_parties, &mut seen_s, "state"),
                (&g.detector_parties, &mut seen_d, "detector"),
            ] {
                for &p in list {
                    match seen.get_mut(p) {
                        None => {
                            return Err(Error::InvalidCut(format!("{kind} party {p} out of range")))
                        }
                        Some(slot) if *slot => {
                            return Err(Error::InvalidCut(format!("{kind} party {p} assigned twice")))
                        }
                        Some(slot) => *slot = true,
                    }
                }
            }
        }
        if seen_s.iter().chain(&seen_d).any(|s| !s) {
            return Err(Error::InvalidCut("every party must be assigned".into()));
        }
        Ok(PairedCut { groups })
    }

    /// Party `j` of the hypotheses with party `j` of the detectors. Requires
    /// equal party counts.
    pub fn default_for(state_parties: usize, detector_parties: usize) -> Result<Self> {
        if state_parties != detector_parties {
            return Err(Error::InvalidCut(format!(
                "no default pairing for {state_parties} state parties and {detector_parties} detector parties"
            )));
        }
        let groups = (0..state_parties)
            .map(|j| PartyGroup {
                state_parties: vec![j],
                detector_parties: vec![j],
            })
            .collect();
        PairedCut::new(groups, state_parties, detector_parties)
    }

    pub fn groups(&self) -> &[PartyGroup] {
        &self.groups
    }

    /// Unordered bipartitions of the groups, the last group always on the
    /// right. Yields `(joint cut, detector cut)` where the detector cut is
    /// `None` when all detector parties fall on one side.
    fn coarse_grainings(&self, n_state: usize, n_det: usize) -> Vec<(Cut, Option<Cut>)> {
        let g = self.groups.len();
        (1u64..(1 << (g - 1)))
            .map(|mask| {
                let (mut jl, mut jr, mut dl, mut dr) = (vec![], vec![], vec![], vec![]);
                for (i, grp) in self.groups.iter().enumerate() {
                    let (j, d) = if mask >> i & 1 == 1 {
                        (&mut jl, &mut dl)
                    } else {
                        (&mut jr, &mut dr)
                    };
                    j.extend(grp.state_parties.iter().copied());
                    j.extend(grp.detector_parties.iter().map(|p| n_state + p));
                    d.extend(grp.detector_parties.iter().copied());
                }
                let joint = Cut::new(jl, jr).expect("groups partition the joint parties");
                let det = if dl.is_empty() || dr.is_empty() {
                    None
                } else {
                    Some(Cut::new(dl, dr).expect("groups partition the detector parties"))
                };
                debug_assert!(det.as_ref().is_none_or(|c| c.parties() == n_det));
                (joint, det)
            })
            .collect()
    }
}

/// Three-valued outcome of the witness test. The method is one-sided: a
/// satisfied criterion proves nothing about distinguishability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Indistinguishable,
    Inconclusive,
    Boundary,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Indistinguishable => "INDISTINGUISHABLE",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Boundary => "BOUNDARY",
        }
    }

    /// Violations deeper than `10·tol` certify; anything within `10·tol` of
    /// the edge is a boundary case.
    pub fn classify(report: &MajorizationReport) -> Verdict {
        let band = 10.0 * report.tol;
        if report.min_margin < -band {
            Verdict::Indistinguishable
        } else if report.critical_margin.is_some_and(|c| c < band) {
            Verdict::Boundary
        } else {
            Verdict::Inconclusive
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The criterion evaluated on one coarse-graining.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutEvaluation {
    pub joint_cut: Cut,
    pub detector_cut: Option<Cut>,
    pub source_spectrum: Vec<f64>,
    pub target_average: Vec<f64>,
    pub majorization: MajorizationReport,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct WitnessOptions {
    /// Use `ψ_i ⊗ φ_i` rather than `φ_i` as the ensemble members.
    pub stronger_target: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub joint_state_norm: f64,
    pub evaluations: Vec<CutEvaluation>,
    /// Index into `evaluations` of the smallest `min_margin`.
    pub decisive: usize,
    pub verdict: Verdict,
    pub problem: WitnessProblem,
    pub cut: PairedCut,
    pub tolerances: Tolerances,
    pub options: WitnessOptions,
}

impl WitnessReport {
    pub fn decisive_evaluation(&self) -> &CutEvaluation {
        &self.evaluations[self.decisive]
    }

    pub fn source_spectrum(&self) -> &[f64] {
        &self.decisive_evaluation().source_spectrum
    }

    pub fn target_average(&self) -> &[f64] {
        &self.decisive_evaluation().target_average
    }

    pub fn majorization(&self) -> &MajorizationReport {
        &self.decisive_evaluation().majorization
    }

    /// `-min_margin` of the decisive coarse-graining; positive means the
    /// conversion is forbidden.
    pub fn violation(&self) -> f64 {
        -self.majorization().min_margin
    }

    /// Smallest informative margin across all coarse-grainings. Changes
    /// sign exactly where the verdict flips.
    pub fn critical_margin(&self) -> f64 {
        self.evaluations
            .iter()
            .filter_map(|e| e.majorization.critical_margin)
            .fold(f64::INFINITY, f64::min)
    }
}

/// `Σ_i √p_i ψ_i ⊗ φ_i` without any validation of its arguments.
pub(crate) fn superpose(states: &[PureState], detectors: &[PureState], probs: &[f64]) -> Result<Vec<Complex64>> {
    let mut amps: Option<Vec<Complex64>> = None;
    for ((s, d), p) in states.iter().zip(detectors).zip(probs) {
        let term = s.tensor(d)?;
        let w = p.sqrt();
        match amps.as_mut() {
            None => amps = Some(term.amps().iter().map(|a| a * w).collect()),
            Some(acc) => acc.iter_mut().zip(term.amps()).for_each(|(x, a)| *x += a * w),
        }
    }
    amps.ok_or(Error::Empty("superposition terms"))
}

/// The witness state, parties ordered as hypotheses then detectors.
pub fn build_superposition(problem: &WitnessProblem, tol: &Tolerances) -> Result<PureState> {
    let amps = superpose(problem.states.states(), &problem.detectors, &problem.probs)?;
    let dims: Vec<usize> = problem
        .states
        .dims()
        .iter()
        .chain(problem.detectors[0].dims())
        .copied()
        .collect();
    PureState::with_tolerance(dims, amps, tol.norm)
}

fn trivial_spectrum() -> SchmidtVector {
    SchmidtVector::from_probs(vec![1.0])
}

pub fn check_indistinguishable(
    problem: &WitnessProblem,
    cut: &PairedCut,
    tol: &Tolerances,
    options: WitnessOptions,
) -> Result<WitnessReport> {
    let (n_state, n_det) = (problem.state_parties(), problem.detector_parties());
    // Re-validate the cut against this problem's party counts.
    let cut = PairedCut::new(cut.groups.clone(), n_state, n_det)?;
    let joint = build_superposition(problem, tol)?;

    let stronger_members = if options.stronger_target {
        Some(
            problem
                .states
                .states()
                .iter()
                .zip(&problem.detectors)
                .map(|(s, d)| s.tensor(d))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    let mut evaluations = Vec::new();
    for (joint_cut, det_cut) in cut.coarse_grainings(n_state, n_det) {
        let source = schmidt_vector(&joint, &joint_cut)?;
        let targets = match (&stronger_members, &det_cut) {
            (Some(members), _) => members
                .iter()
                .zip(&problem.probs)
                .map(|(m, &p)| Ok((p, schmidt_vector(m, &joint_cut)?)))
                .collect::<Result<Vec<_>>>()?,
            (None, Some(dc)) => problem
                .detectors
                .iter()
                .zip(&problem.probs)
                .map(|(d, &p)| Ok((p, schmidt_vector(d, dc)?)))
                .collect::<Result<Vec<_>>>()?,
            (None, None) => problem.probs.iter().map(|&p| (p, trivial_spectrum())).collect(),
        };
        let majorization = jonathan_plenio_spectra(&source, &targets, tol.major)?;
        evaluations.push(CutEvaluation {
            joint_cut,
            detector_cut: det_cut,
            source_spectrum: majorization.source.clone(),
            target_average: majorization.target.clone(),
            verdict: Verdict::classify(&majorization),
            majorization,
        });
    }

    let decisive = evaluations
        .iter()
        .enumerate()
        .fold(0, |best, (i, e)| {
            if e.majorization.min_margin < evaluations[best].majorization.min_margin {
                i
            } else {
                best
            }
        });
    let verdict = if evaluations.iter().any(|e| e.verdict == Verdict::Indistinguishable) {
        Verdict::Indistinguishable
    } else if evaluations.iter().any(|e| e.verdict == Verdict::Boundary) {
        Verdict::Boundary
    } else {
        Verdict::Inconclusive
    };

    Ok(WitnessReport {
        joint_state_norm: joint.norm(),
        evaluations,
        decisive,
        verdict,
        problem: problem.clone(),
        cut,
        tolerances: *tol,
        options,
    })
}

/// One grid point of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub parameter: f64,
    pub report: WitnessReport,
}

/// A verdict flip located between two adjacent grid points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryEstimate {
    /// Midpoint of the final bracket.
    pub estimate: f64,
    /// Final bracket; `inside` has negative critical margin, `outside` not.
    pub inside: f64,
    pub outside: f64,
    /// The adjacent points that straddle the flip.
    pub grid_lo: f64,
    pub grid_hi: f64,
    /// True when one of `grid_lo`/`grid_hi` is an edge probe rather than a
    /// grid point.
    pub edge: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub boundaries: Vec<BoundaryEstimate>,
}

/// Inputs shared by every point of a sweep.
pub struct SweepSetup<'a> {
    pub detectors: &'a [PureState],
    pub probs: &'a [f64],
    pub cut: &'a PairedCut,
    pub tol: &'a Tolerances,
    pub options: WitnessOptions,
    /// Bracket width at which bisection stops.
    pub bisect_tol: f64,
    /// Parameters just inside the ends of the family's domain. A flip
    /// between an outermost grid point and its probe is bisected as well.
    pub edge_probes: Option<(f64, f64)>,
}

fn evaluate_at<F>(family: &F, a: f64, setup: &SweepSetup<'_>) -> Result<WitnessReport>
where
    F: Fn(f64) -> Result<Vec<PureState>> + Sync,
{
    let states = StateSet::new(family(a)?, setup.tol.orth)?;
    let problem = WitnessProblem::new(states, setup.detectors.to_vec(), setup.probs.to_vec(), setup.tol)?;
    check_indistinguishable(&problem, setup.cut, setup.tol, setup.options)
}

/// Evaluates `family(a)` over `grid` (sorted ascending) and bisects every
/// sign change of the critical margin between adjacent grid points, and
/// between the grid ends and the edge probes if any.
pub fn sweep_parameter<F>(family: F, grid: &[f64], setup: &SweepSetup<'_>) -> Result<SweepResult>
where
    F: Fn(f64) -> Result<Vec<PureState>> + Sync,
{
    if grid.is_empty() {
        return Err(Error::Empty("sweep grid"));
    }
    if let Some(a) = grid.iter().find(|a| !a.is_finite()) {
        return Err(Error::InvalidParameter(format!("grid value {a} is not finite")));
    }
    if setup.bisect_tol.is_nan() || setup.bisect_tol <= 0.0 {
        return Err(Error::InvalidParameter("bisection tolerance must be positive".into()));
    }
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);

    let reports = grid
        .par_iter()
        .map(|&a| evaluate_at(&family, a, setup))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<SweepRow> = grid
        .iter()
        .zip(reports)
        .map(|(&parameter, report)| SweepRow { parameter, report })
        .collect();

    let bisect = |lo: (f64, f64), hi: (f64, f64), edge: bool| -> Result<Option<BoundaryEstimate>> {
        let (lo_in, hi_in) = (lo.1 < 0.0, hi.1 < 0.0);
        if lo_in == hi_in {
            return Ok(None);
        }
        let (mut inside, mut outside) = if lo_in { (lo.0, hi.0) } else { (hi.0, lo.0) };
        while (outside - inside).abs() > setup.bisect_tol {
            let mid = 0.5 * (inside + outside);
            if evaluate_at(&family, mid, setup)?.critical_margin() < 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok(Some(BoundaryEstimate {
            estimate: 0.5 * (inside + outside),
            inside,
            outside,
            grid_lo: lo.0,
            grid_hi: hi.0,
            edge,
        }))
    };
    let point = |row: &SweepRow| (row.parameter, row.report.critical_margin());

    let mut boundaries = Vec::new();
    let (first, last) = (point(&rows[0]), point(&rows[rows.len() - 1]));
    let probes = match setup.edge_probes {
        Some((lo, hi)) => {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidParameter("edge probes must be finite".into()));
            }
            let lo = (lo < first.0).then(|| evaluate_at(&family, lo, setup).map(|r| (lo, r.critical_margin())));
            let hi = (hi > last.0).then(|| evaluate_at(&family, hi, setup).map(|r| (hi, r.critical_margin())));
            (lo.transpose()?, hi.transpose()?)
        }
        None => (None, None),
    };
    if let Some(lo) = probes.0 {
        boundaries.extend(bisect(lo, first, true)?);
    }
    for pair in rows.windows(2) {
        boundaries.extend(bisect(point(&pair[0]), point(&pair[1]), false)?);
    }
    if let Some(hi) = probes.1 {
        boundaries.extend(bisect(last, hi, true)?);
    }
    Ok(SweepResult { rows, boundaries })
}

/// Outcome-by-outcome account of a one-way protocol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeReport {
    pub outcome: usize,
    /// Hypotheses whose residual norm exceeds the rank tolerance.
    pub surviving: Vec<usize>,
    /// Largest normalized overlap between surviving residuals.
    pub max_overlap: f64,
    pub resolved: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OneWayReport {
    pub distinguishable: bool,
    pub measuring_party: usize,
    pub outcomes: Vec<OutcomeReport>,
}

/// Checks whether a projective measurement of `measuring_party` in `basis`,
/// followed by communicating the outcome, leaves mutually orthogonal
/// residual states on the remaining parties for every outcome.
pub fn verify_one_way_protocol(
    states: &StateSet,
    measuring_party: usize,
    basis: &[Vec<Complex64>],
    tol: &Tolerances,
) -> Result<OneWayReport> {
    let dims = states.dims();
    let d = *dims
        .get(measuring_party)
        .ok_or_else(|| Error::InvalidParameter(format!("no party {measuring_party}")))?;
    if dims.len() < 2 {
        return Err(Error::InvalidParameter("one-way protocols need at least two parties".into()));
    }
    if basis.len() != d || basis.iter().any(|v| v.len() != d) {
        return Err(Error::InvalidParameter(format!(
            "local basis must hold {d} vectors of length {d}"
        )));
    }
    let local: Vec<PureState> = basis
        .iter()
        .map(|v| PureState::with_tolerance(vec![d], v.clone(), tol.orth))
        .collect::<Result<_>>()?;
    let ortho = crate::statekit::is_orthonormal_set(&local, tol.orth)?;
    if !ortho.orthonormal {
        return Err(Error::NotOrthonormal {
            i: ortho.worst_pair.0,
            j: ortho.worst_pair.1,
            violation: ortho.max_violation,
            tol: tol.orth,
        });
    }

    let mut outcomes = Vec::with_capacity(d);
    for (o, bra) in basis.iter().enumerate() {
        let residuals: Vec<(usize, Vec<Complex64>, f64)> = states
            .states()
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let r = s.project_party(measuring_party, bra);
                let n = r.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                (i, r, n)
            })
            .filter(|(_, _, n)| *n > tol.rank)
            .collect();
        let mut max_overlap: f64 = 0.0;
        for (x, (_, rx, nx)) in residuals.iter().enumerate() {
            for (_, ry, ny) in &residuals[x + 1..] {
                let ip: Complex64 = rx.iter().zip(ry).map(|(a, b)| a.conj() * b).sum();
                max_overlap = max_overlap.max(ip.norm() / (nx * ny));
            }
        }
        outcomes.push(OutcomeReport {
            outcome: o,
            surviving: residuals.iter().map(|(i, _, _)| *i).collect(),
            max_overlap,
            resolved: max_overlap <= tol.orth,
        });
    }
    Ok(OneWayReport {
        distinguishable: outcomes.iter().all(|o| o.resolved),
        measuring_party,
        outcomes,
    })
}
