//! Majorization order and the pure-state LOCC conversion criteria built on
//! it (Nielsen for a single target, Jonathan–Plenio for an ensemble).

use serde::Serialize;

use crate::cuts::{schmidt_vector, Cut, SchmidtVector};
use crate::error::{Error, Result};
use crate::statekit::PureState;

/// Outcome of comparing two probability vectors by prefix sums.
///
/// `target` is the candidate majorizing vector and `source` the candidate
/// majorized one; both are zero-padded to a common length and sorted
/// descending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationReport {
    pub source: Vec<f64>,
    pub target: Vec<f64>,
    /// `Σ_{i≤k} target_i − Σ_{i≤k} source_i` for `k = 1..=len`.
    pub prefix_margins: Vec<f64>,
    pub holds: bool,
    pub min_margin: f64,
    /// Smallest margin over prefixes where at least one side has not yet
    /// accumulated its full mass. Margins at saturated prefixes are zero up
    /// to rounding and carry no information. `None` when every prefix is
    /// saturated (both vectors are `(1, 0, …)`).
    pub critical_margin: Option<f64>,
    /// First 1-based prefix index with margin below `-tol`.
    pub failing_prefix: Option<usize>,
    pub tol: f64,
}

fn sorted_padded(v: &[f64], len: usize) -> Vec<f64> {
    let mut out = v.to_vec();
    out.resize(len, 0.0);
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

fn validate_probability_like(v: &[f64], tol: f64, what: &str) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::InvalidProbabilities(format!("{what} is empty")));
    }
    if let Some(x) = v.iter().find(|x| !x.is_finite() || **x < -tol) {
        return Err(Error::InvalidProbabilities(format!(
            "{what} has entry {x} below -{tol:e}"
        )));
    }
    Ok(v.iter().sum())
}

/// Does `x` majorize `y`? Both must be entrywise nonnegative (within `tol`)
/// with equal totals (within `tol`).
pub fn majorizes(x: &[f64], y: &[f64], tol: f64) -> Result<MajorizationReport> {
    let sx = validate_probability_like(x, tol, "majorizing vector")?;
    let sy = validate_probability_like(y, tol, "majorized vector")?;
    if (sx - sy).abs() > tol {
        return Err(Error::InvalidProbabilities(format!(
            "totals differ: {sx} vs {sy}"
        )));
    }
    let len = x.len().max(y.len());
    let target = sorted_padded(x, len);
    let source = sorted_padded(y, len);

    let mut prefix_margins = Vec::with_capacity(len);
    let mut critical_margin: Option<f64> = None;
    let (mut tx, mut sy_acc) = (0.0, 0.0);
    for (t, s) in target.iter().zip(&source) {
        tx += t;
        sy_acc += s;
        let margin = tx - sy_acc;
        prefix_margins.push(margin);
        let saturated = tx >= sx - tol && sy_acc >= sy - tol;
        if !saturated {
            critical_margin = Some(critical_margin.map_or(margin, |c: f64| c.min(margin)));
        }
    }
    let min_margin = prefix_margins.iter().copied().fold(f64::INFINITY, f64::min);
    let failing_prefix = prefix_margins.iter().position(|&m| m < -tol).map(|k| k + 1);
    Ok(MajorizationReport {
        source,
        target,
        prefix_margins,
        holds: failing_prefix.is_none(),
        min_margin,
        critical_margin,
        failing_prefix,
        tol,
    })
}

/// Prefix sums of the descending vector (Ky Fan sums). These are the
/// complements of the Vidal tail sums and are non-decreasing under LOCC.
pub fn prefix_sums(v: &SchmidtVector) -> Vec<f64> {
    v.probs()
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect()
}

/// Can `source` be turned into `target` by LOCC across `cut`?
pub fn nielsen_possible(
    source: &PureState,
    target: &PureState,
    cut: &Cut,
    tol: f64,
) -> Result<MajorizationReport> {
    let src = schmidt_vector(source, cut)?;
    let dst = schmidt_vector(target, cut)?;
    majorizes(dst.probs(), src.probs(), tol)
}

/// Probability-weighted pure states sharing one set of dims.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    entries: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(entries: Vec<(f64, PureState)>, tol_norm: f64) -> Result<Self> {
        let first = entries.first().ok_or(Error::Empty("ensemble"))?;
        let dims = first.1.dims().to_vec();
        let probs: Vec<f64> = entries.iter().map(|(p, _)| *p).collect();
        validate_distribution(&probs, tol_norm)?;
        if let Some((_, s)) = entries.iter().find(|(_, s)| s.dims() != dims.as_slice()) {
            return Err(Error::DimsMismatch {
                left: dims,
                right: s.dims().to_vec(),
            });
        }
        Ok(Ensemble { entries })
    }

    pub fn entries(&self) -> &[(f64, PureState)] {
        &self.entries
    }
}

/// Strictly positive, finite entries summing to one within `tol`.
pub fn validate_distribution(probs: &[f64], tol: f64) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidProbabilities("no probabilities".into()));
    }
    if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::InvalidProbabilities(format!(
            "probability {p} is not strictly positive"
        )));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::InvalidProbabilities(format!(
            "probabilities sum to {total}"
        )));
    }
    Ok(())
}

/// `Σ_i p_i λ_i` with every `λ_i` sorted descending and zero-padded to the
/// longest length.
pub fn average_spectrum(weighted: &[(f64, SchmidtVector)]) -> Vec<f64> {
    let len = weighted.iter().map(|(_, s)| s.len()).max().unwrap_or(0);
    let mut avg = vec![0.0; len];
    for (p, s) in weighted {
        for (slot, x) in avg.iter_mut().zip(s.probs()) {
            *slot += p * x;
        }
    }
    avg
}

/// The ensemble criterion on precomputed spectra.
pub fn jonathan_plenio_spectra(
    source: &SchmidtVector,
    targets: &[(f64, SchmidtVector)],
    tol: f64,
) -> Result<MajorizationReport> {
    if targets.is_empty() {
        return Err(Error::Empty("ensemble"));
    }
    majorizes(&average_spectrum(targets), source.probs(), tol)
}

/// Can `source` (across `cut`) be turned into the ensemble (each member
/// across `ensemble_cut`) by LOCC?
pub fn jonathan_plenio_possible(
    source: &PureState,
    cut: &Cut,
    ensemble: &Ensemble,
    ensemble_cut: &Cut,
    tol: f64,
) -> Result<MajorizationReport> {
    let src = schmidt_vector(source, cut)?;
    let targets = ensemble
        .entries()
        .iter()
        .map(|(p, s)| Ok((*p, schmidt_vector(s, ensemble_cut)?)))
        .collect::<Result<Vec<_>>>()?;
    jonathan_plenio_spectra(&src, &targets, tol)
}
