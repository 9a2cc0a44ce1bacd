//! Derivative-free search over the probability simplex (and over detector
//! Schmidt spectra) for the weights that most violate the ensemble
//! criterion.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::random::rng_from_seed;
use crate::statekit::{schmidt_frame_state, PureState};
use crate::witness::{check_indistinguishable, PairedCut, WitnessOptions, WitnessProblem};
use crate::Tolerances;

/// Grid points beyond this are refused rather than enumerated.
pub const MAX_GRID_POINTS: u128 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Simplex step is `1 / grid_resolution`.
    pub grid_resolution: usize,
    pub refine_iters: usize,
    pub refine_shrink: f64,
    /// Orders candidate moves during refinement; only affects tie-breaks.
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_resolution: 50,
            refine_iters: 40,
            refine_shrink: 0.5,
            seed: 0,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.grid_resolution < 2 {
            return Err(Error::InvalidParameter("grid resolution must be at least 2".into()));
        }
        if !(self.refine_shrink > 0.0 && self.refine_shrink < 1.0) {
            return Err(Error::InvalidParameter("refine_shrink must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TracePoint {
    pub probs: Vec<f64>,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_probs: Vec<f64>,
    /// `-min_margin` of the ensemble criterion at `best_probs`.
    pub best_violation: f64,
    pub evaluations: usize,
    /// Successive improvements, grid phase first.
    pub trace: Vec<TracePoint>,
    pub config: SearchConfig,
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Compositions of `total` into `parts` positive integers, in lexicographic
/// order.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=remaining - (parts - 1) {
            prefix.push(first);
            rec(remaining - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Interior points of the simplex grid with step `1/resolution`.
pub fn simplex_grid(parts: usize, resolution: usize) -> Result<Vec<Vec<f64>>> {
    if parts == 0 {
        return Err(Error::Empty("probability vector"));
    }
    if resolution < parts {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} has no interior points for {parts} probabilities"
        )));
    }
    let count = binomial(resolution as u128 - 1, parts as u128 - 1);
    if count > MAX_GRID_POINTS {
        return Err(Error::InvalidParameter(format!(
            "simplex grid would have {count} points (limit {MAX_GRID_POINTS})"
        )));
    }
    Ok(compositions(resolution, parts)
        .into_iter()
        .map(|c| c.into_iter().map(|n| n as f64 / resolution as f64).collect())
        .collect())
}

struct Objective<'a> {
    problem: &'a WitnessProblem,
    cut: &'a PairedCut,
    tol: &'a Tolerances,
    options: WitnessOptions,
}

impl Objective<'_> {
    fn violation(&self, probs: &[f64]) -> Result<f64> {
        let problem = self.problem.with_probs(probs.to_vec(), self.tol)?;
        Ok(check_indistinguishable(&problem, self.cut, self.tol, self.options)?.violation())
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Maximizes the violation over the weights of `problem` (its own weights
/// are ignored). Full grid first, then pairwise-transfer local refinement
/// with a shrinking step.
pub fn search_probabilities(
    problem: &WitnessProblem,
    cut: &PairedCut,
    config: &SearchConfig,
    tol: &Tolerances,
    options: WitnessOptions,
) -> Result<SearchResult> {
    config.validate()?;
    let k = problem.probs().len();
    let objective = Objective {
        problem,
        cut,
        tol,
        options,
    };

    let grid = simplex_grid(k, config.grid_resolution)?;
    let values = grid
        .par_iter()
        .map(|p| objective.violation(p))
        .collect::<Result<Vec<_>>>()?;
    let mut evaluations = grid.len();

    // Grid is already lexicographically ascending, so the first maximum
    // wins ties.
    let mut trace = Vec::new();
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if i == 0 || v > values[best] {
            best = i;
            trace.push(TracePoint {
                probs: grid[i].clone(),
                violation: v,
            });
        }
    }
    let mut best_probs = grid[best].clone();
    let mut best_violation = values[best];

    let mut rng = rng_from_seed(config.seed);
    let mut pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut step = 1.0 / config.grid_resolution as f64;
    for _ in 0..config.refine_iters {
        if pairs.is_empty() {
            break;
        }
        pairs.shuffle(&mut rng);
        let candidates: Vec<Vec<f64>> = pairs
            .iter()
            .filter(|&&(_, j)| best_probs[j] - step > 1e-12)
            .map(|&(i, j)| {
                let mut p = best_probs.clone();
                p[i] += step;
                p[j] -= step;
                let total: f64 = p.iter().sum();
                p.iter_mut().for_each(|x| *x /= total);
                p
            })
            .collect();
        let scored = candidates
            .par_iter()
            .map(|p| objective.violation(p))
            .collect::<Result<Vec<_>>>()?;
        evaluations += candidates.len();

        let mut pick: Option<usize> = None;
        for (i, &v) in scored.iter().enumerate() {
            let better = match pick {
                None => v > best_violation,
                Some(b) => v > scored[b] || (v == scored[b] && lex_less(&candidates[i], &candidates[b])),
            };
            if better {
                pick = Some(i);
            }
        }
        match pick {
            Some(i) => {
                best_probs = candidates[i].clone();
                best_violation = scored[i];
                trace.push(TracePoint {
                    probs: best_probs.clone(),
                    violation: best_violation,
                });
            }
            None => step *= config.refine_shrink,
        }
    }

    Ok(SearchResult {
        best_probs,
        best_violation,
        evaluations,
        trace,
        config: *config,
    })
}

/// Detectors `Σ_k c_k ω^{t k} |k⟩|k+s⟩` on `d⊗d` with `c_0 = √μ` and the
/// remaining weight spread evenly; detector `i` uses `(s, t) = (i / d, i % d)`.
/// At `μ = 1/d` these are the generalized Bell states.
pub fn spectrum_detectors(count: usize, d: usize, mu: f64) -> Result<Vec<PureState>> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::InvalidParameter(format!("detector weight {mu} outside [0, 1]")));
    }
    if count > d * d {
        return Err(Error::InvalidParameter(format!(
            "only {} distinct detectors exist on {d}x{d}",
            d * d
        )));
    }
    let mut coeffs = vec![((1.0 - mu) / (d - 1) as f64).sqrt(); d];
    coeffs[0] = mu.sqrt();
    (0..count)
        .map(|i| schmidt_frame_state(d, i / d, i % d, &coeffs))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorSweepRow {
    pub mu: f64,
    pub result: SearchResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorSweep {
    pub rows: Vec<DetectorSweepRow>,
    /// Best violation with maximally entangled detectors (`μ = 1/d`).
    pub maximally_entangled_violation: f64,
    /// Whether some `μ ≠ 1/d` beats the maximally entangled detectors by
    /// more than `10·tol_major`.
    pub non_maximal_wins: bool,
}

/// Runs [`search_probabilities`] for each detector weight `μ` in `mus`.
pub fn sweep_detector_spectrum(
    problem: &WitnessProblem,
    cut: &PairedCut,
    detector_dim: usize,
    mus: &[f64],
    config: &SearchConfig,
    tol: &Tolerances,
    options: WitnessOptions,
) -> Result<DetectorSweep> {
    if detector_dim < 2 {
        return Err(Error::InvalidParameter("detector dimension must be at least 2".into()));
    }
    let k = problem.probs().len();
    let run = |mu: f64| -> Result<SearchResult> {
        let detectors = spectrum_detectors(k, detector_dim, mu)?;
        let p = problem.with_detectors(detectors, tol)?;
        search_probabilities(&p, cut, config, tol, options)
    };
    let rows = mus
        .iter()
        .map(|&mu| Ok(DetectorSweepRow { mu, result: run(mu)? }))
        .collect::<Result<Vec<_>>>()?;
    let maximal_mu = 1.0 / detector_dim as f64;
    let baseline = match rows.iter().find(|r| r.mu == maximal_mu) {
        Some(r) => r.result.best_violation,
        None => run(maximal_mu)?.best_violation,
    };
    let non_maximal_wins = rows
        .iter()
        .any(|r| r.mu != maximal_mu && r.result.best_violation > baseline + 10.0 * tol.major);
    Ok(DetectorSweep {
        rows,
        maximally_entangled_violation: baseline,
        non_maximal_wins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statekit::{bell_states, build_family, FamilySpec};

    #[test]
    fn grid_enumeration() {
        let g = simplex_grid(3, 4).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[0], vec![0.25, 0.25, 0.5]);
        assert_eq!(g[2], vec![0.5, 0.25, 0.25]);
        assert_eq!(simplex_grid(4, 50).unwrap().len(), 18424);
        assert_eq!(simplex_grid(1, 7).unwrap(), vec![vec![1.0]]);
        assert!(simplex_grid(4, 3).is_err());
        assert!(simplex_grid(8, 400).is_err());
        for w in g.windows(2) {
            assert!(lex_less(&w[0], &w[1]));
        }
    }

    #[test]
    fn spectrum_detectors_reduce_to_bell_states() {
        assert_eq!(spectrum_detectors(4, 2, 0.5).unwrap(), bell_states());
        assert!(spectrum_detectors(5, 2, 0.5).is_err());
        assert!(spectrum_detectors(2, 2, 1.5).is_err());
    }

    #[test]
    fn config_validation() {
        let fam = build_family(FamilySpec::Bell4).unwrap();
        let tol = Tolerances::default();
        let problem = WitnessProblem::new(fam.states, fam.detectors.unwrap(), vec![0.25; 4], &tol).unwrap();
        let cut = PairedCut::default_for(2, 2).unwrap();
        for bad in [
            SearchConfig { grid_resolution: 1, ..Default::default() },
            SearchConfig { refine_shrink: 1.0, ..Default::default() },
            SearchConfig { refine_shrink: 0.0, ..Default::default() },
        ] {
            assert!(search_probabilities(&problem, &cut, &bad, &tol, WitnessOptions::default()).is_err());
        }
    }
}
