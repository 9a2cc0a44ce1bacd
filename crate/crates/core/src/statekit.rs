//! Dense multipartite pure states and the named state families.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::{Tolerances, MAX_TOTAL_DIM};

/// A complex amplitude.
pub type Amplitude = Complex64;

/// Normalized amplitude vector over a list of local dimensions.
///
/// Amplitudes are row-major with party 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<Amplitude>,
}

fn total_dim(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidDims(dims.to_vec()));
    }
    let total = dims.iter().map(|&d| d as u128).product::<u128>();
    if total > MAX_TOTAL_DIM as u128 {
        return Err(Error::DimensionOverflow {
            total,
            max: MAX_TOTAL_DIM,
        });
    }
    Ok(total as usize)
}

impl PureState {
    /// Validates finiteness, length and normalization (default `tol_norm`).
    pub fn new(dims: Vec<usize>, amps: Vec<Amplitude>) -> Result<Self> {
        Self::with_tolerance(dims, amps, Tolerances::default().norm)
    }

    pub fn with_tolerance(dims: Vec<usize>, amps: Vec<Amplitude>, tol_norm: f64) -> Result<Self> {
        let state = Self::unnormalized(dims, amps)?;
        let norm = state.norm();
        if (norm - 1.0).abs() > tol_norm {
            return Err(Error::NotNormalized { norm, tol: tol_norm });
        }
        Ok(state)
    }

    /// Rescales `amps` to unit norm. Fails on the zero vector.
    pub fn normalized(dims: Vec<usize>, amps: Vec<Amplitude>) -> Result<Self> {
        let mut state = Self::unnormalized(dims, amps)?;
        let norm = state.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm,
                tol: Tolerances::default().norm,
            });
        }
        state.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(state)
    }

    fn unnormalized(dims: Vec<usize>, amps: Vec<Amplitude>) -> Result<Self> {
        let expected = total_dim(&dims)?;
        if amps.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: amps.len(),
            });
        }
        if let Some(index) = amps.iter().position(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(PureState { dims, amps })
    }

    /// Real-amplitude convenience constructor.
    pub fn from_real(dims: Vec<usize>, amps: &[f64]) -> Result<Self> {
        Self::new(dims, amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The computational basis state `|digits⟩`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        let total = total_dim(&dims)?;
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(i, d)| i >= d) {
            return Err(Error::InvalidParameter(format!(
                "digits {digits:?} do not index dims {dims:?}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); total];
        amps[flat_index(&dims, digits)] = Complex64::new(1.0, 0.0);
        Ok(PureState { dims, amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|self⟩ ⊗ |other⟩`; party lists are concatenated.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let dims: Vec<usize> = self.dims.iter().chain(&other.dims).copied().collect();
        total_dim(&dims)?;
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(PureState { dims, amps })
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &PureState) -> Result<Amplitude> {
        if self.dims != other.dims {
            return Err(Error::DimsMismatch {
                left: self.dims.clone(),
                right: other.dims.clone(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Complex conjugate in the computational basis.
    pub fn conjugate(&self) -> PureState {
        PureState {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| a.conj()).collect(),
        }
    }

    pub fn scaled_phase(&self, phase: Amplitude) -> PureState {
        PureState {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }

    /// Applies the square matrix `op` to a single party.
    pub fn apply_local(&self, party: usize, op: &CMatrix) -> Result<PureState> {
        let d = *self
            .dims
            .get(party)
            .ok_or_else(|| Error::InvalidParameter(format!("no party {party}")))?;
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::InvalidParameter(format!(
                "operator is {}x{}, party {party} has dimension {d}",
                op.nrows(),
                op.ncols()
            )));
        }
        let inner: usize = self.dims[party + 1..].iter().product();
        let outer = self.amps.len() / (d * inner);
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for o in 0..outer {
            for r in 0..inner {
                let base = o * d * inner + r;
                for i in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..d {
                        acc += op[(i, j)] * self.amps[base + j * inner];
                    }
                    amps[base + i * inner] = acc;
                }
            }
        }
        Ok(PureState {
            dims: self.dims.clone(),
            amps,
        })
    }

    /// Removes one party by contracting it with `⟨bra|`. The result is
    /// unnormalized; the returned vector is over the remaining parties in
    /// their original order.
    pub(crate) fn project_party(&self, party: usize, bra: &[Amplitude]) -> Vec<Amplitude> {
        let d = self.dims[party];
        let inner: usize = self.dims[party + 1..].iter().product();
        let outer = self.amps.len() / (d * inner);
        let mut out = vec![Complex64::new(0.0, 0.0); outer * inner];
        for o in 0..outer {
            for r in 0..inner {
                let base = o * d * inner + r;
                out[o * inner + r] = (0..d)
                    .map(|j| bra[j].conj() * self.amps[base + j * inner])
                    .sum();
            }
        }
        out
    }
}

/// Flat amplitude index of a multi-index.
pub fn flat_index(dims: &[usize], digits: &[usize]) -> usize {
    digits
        .iter()
        .zip(dims)
        .fold(0, |acc, (&i, &d)| acc * d + i)
}

/// Inverse of [`flat_index`].
pub fn multi_index(dims: &[usize], mut flat: usize) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = flat % d;
        flat /= d;
    }
    digits
}

/// Result of an orthonormality scan.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalityReport {
    pub orthonormal: bool,
    /// Largest `|⟨ψ_i|ψ_j⟩ − δ_ij|` over all pairs.
    pub max_violation: f64,
    /// The pair attaining `max_violation`.
    pub worst_pair: (usize, usize),
}

pub fn is_orthonormal_set(states: &[PureState], tol: f64) -> Result<OrthonormalityReport> {
    let first = states.first().ok_or(Error::Empty("state list"))?;
    let mut max_violation = 0.0;
    let mut worst_pair = (0, 0);
    for (i, a) in states.iter().enumerate() {
        if a.dims != first.dims {
            return Err(Error::DimsMismatch {
                left: first.dims.clone(),
                right: a.dims.clone(),
            });
        }
        for (j, b) in states.iter().enumerate().skip(i) {
            let delta = if i == j { 1.0 } else { 0.0 };
            let violation = (a.inner(b)? - delta).norm();
            if violation > max_violation {
                max_violation = violation;
                worst_pair = (i, j);
            }
        }
    }
    Ok(OrthonormalityReport {
        orthonormal: max_violation <= tol,
        max_violation,
        worst_pair,
    })
}

/// A nonempty list of pairwise orthonormal states on the same dims.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSet {
    states: Vec<PureState>,
}

impl StateSet {
    pub fn new(states: Vec<PureState>, tol_orth: f64) -> Result<Self> {
        let report = is_orthonormal_set(&states, tol_orth)?;
        if !report.orthonormal {
            let (i, j) = report.worst_pair;
            return Err(Error::NotOrthonormal {
                i,
                j,
                violation: report.max_violation,
                tol: tol_orth,
            });
        }
        Ok(StateSet { states })
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn into_states(self) -> Vec<PureState> {
        self.states
    }

    pub fn dims(&self) -> &[usize] {
        self.states[0].dims()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// `exp(2πi·m/d)`, exact on quarter turns and conjugate-symmetric
/// (`root(d, d−m) == conj(root(d, m))` bit for bit).
pub fn root_of_unity(d: usize, m: usize) -> Amplitude {
    let m = m % d;
    if m * 2 > d {
        return root_of_unity(d, d - m).conj();
    }
    if (4 * m).is_multiple_of(d) {
        return match 4 * m / d {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            _ => Complex64::new(-1.0, 0.0),
        };
    }
    let theta = 2.0 * PI * m as f64 / d as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// `Σ_k c_k ω_d^{phase·k} |k⟩|k+shift⟩` for a `d⊗d` pair.
///
/// With uniform `c_k = √(1/d)` this is the generalized Bell state indexed by
/// `(shift, phase)`.
pub fn schmidt_frame_state(
    d: usize,
    shift: usize,
    phase: usize,
    coeffs: &[f64],
) -> Result<PureState> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("dimension {d} < 2")));
    }
    if coeffs.len() != d {
        return Err(Error::InvalidParameter(format!(
            "need {d} Schmidt coefficients, got {}",
            coeffs.len()
        )));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for (k, &c) in coeffs.iter().enumerate() {
        amps[k * d + (k + shift) % d] = root_of_unity(d, phase * k) * c;
    }
    PureState::new(vec![d, d], amps)
}

/// The maximally entangled `d⊗d` state with the given shift and phase.
pub fn gen_max_entangled(d: usize, shift: usize, phase: usize) -> Result<PureState> {
    let c = (1.0 / d as f64).sqrt();
    schmidt_frame_state(d, shift, phase, &vec![c; d])
}

/// The four Bell states `B_1..B_4` in order:
/// `|00⟩+|11⟩`, `|00⟩−|11⟩`, `|01⟩+|10⟩`, `|01⟩−|10⟩` (each over √2).
pub fn bell_states() -> Vec<PureState> {
    (0..4)
        .map(|i| gen_max_entangled(2, i / 2, i % 2).expect("valid Bell parameters"))
        .collect()
}

/// The eight GHZ-type states `G_1..G_8`.
pub fn ghz_states() -> Vec<PureState> {
    let c = 0.5f64.sqrt();
    let mut out = Vec::with_capacity(8);
    for x in [0b000, 0b010, 0b100, 0b001] {
        let flipped = x ^ 0b111;
        for sign in [1.0, -1.0] {
            let mut amps = vec![Complex64::new(0.0, 0.0); 8];
            amps[x] = Complex64::new(c, 0.0);
            amps[flipped] = Complex64::new(sign * c, 0.0);
            out.push(PureState::new(vec![2, 2, 2], amps).expect("normalized"));
        }
    }
    out
}

/// The named families of worked examples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilySpec {
    Bell4,
    Ghz8,
    GenMaxEntangled { d: usize, shift: usize, phase: usize },
    /// Three maximally entangled qutrit pairs, locally distinguishable.
    SSet,
    /// `SSet` with its third state replaced by `|01⟩`.
    SPrimeSet,
    /// `a|00⟩+b|11⟩`, `b|00⟩−a|11⟩`, `(|01⟩+|10⟩)/√2` with `b = +√(1−a²)`.
    AFamily { a: f64 },
}

/// Output of [`build_family`].
#[derive(Debug, Clone)]
pub struct Family {
    pub states: StateSet,
    /// The detector set used with this family in the worked examples.
    pub detectors: Option<Vec<PureState>>,
}

pub fn a_family_states(a: f64) -> Result<Vec<PureState>> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "a-family parameter must lie in (0, 1), got {a}"
        )));
    }
    let b = (1.0 - a * a).sqrt();
    Ok(vec![
        PureState::from_real(vec![2, 2], &[a, 0.0, 0.0, b])?,
        PureState::from_real(vec![2, 2], &[b, 0.0, 0.0, -a])?,
        gen_max_entangled(2, 1, 0)?,
    ])
}

pub fn build_family(spec: FamilySpec) -> Result<Family> {
    let tol = Tolerances::default().orth;
    let bell3 = || bell_states().into_iter().take(3).collect::<Vec<_>>();
    let (states, detectors) = match spec {
        FamilySpec::Bell4 => (bell_states(), Some(bell_states())),
        FamilySpec::Ghz8 => (ghz_states(), Some(ghz_states())),
        FamilySpec::GenMaxEntangled { d, shift, phase } => {
            (vec![gen_max_entangled(d, shift, phase)?], None)
        }
        FamilySpec::SSet => (
            vec![
                gen_max_entangled(3, 0, 1)?,
                gen_max_entangled(3, 0, 2)?,
                gen_max_entangled(3, 1, 0)?,
            ],
            Some(bell3()),
        ),
        FamilySpec::SPrimeSet => (
            vec![
                gen_max_entangled(3, 0, 1)?,
                gen_max_entangled(3, 0, 2)?,
                PureState::basis(vec![3, 3], &[0, 1])?,
            ],
            Some(bell3()),
        ),
        FamilySpec::AFamily { a } => (a_family_states(a)?, Some(bell3())),
    };
    Ok(Family {
        states: StateSet::new(states, tol)?,
        detectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn c(re: f64) -> Amplitude {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn tensor_of_basis_vectors() {
        let zero = PureState::basis(vec![2], &[0]).unwrap();
        let t = zero.tensor(&zero).unwrap();
        assert_eq!(t.dims(), &[2, 2]);
        assert_eq!(t.amps(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
    }

    #[test]
    fn tensor_of_two_bell_pairs() {
        let b = &bell_states()[0];
        let t = b.tensor(b).unwrap();
        for (i, a) in t.amps().iter().enumerate() {
            let expected = if [0, 3, 12, 15].contains(&i) { 0.5 } else { 0.0 };
            assert!((a - c(expected)).norm() < 1e-15, "index {i}");
        }
    }

    #[test]
    fn tensor_rejects_oversized_product() {
        let big = PureState::basis(vec![1 << 11], &[0]).unwrap();
        assert!(matches!(
            big.tensor(&big),
            Err(Error::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn new_rejects_bad_input() {
        assert!(matches!(
            PureState::from_real(vec![2], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            PureState::from_real(vec![2], &[1.0, 1.0]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            PureState::from_real(vec![2], &[f64::NAN, 0.0]),
            Err(Error::NonFinite { index: 0 })
        ));
        assert!(matches!(
            PureState::from_real(vec![], &[]),
            Err(Error::InvalidDims(_))
        ));
    }

    #[test]
    fn inner_products_of_named_states() {
        let z = PureState::basis(vec![2, 2], &[0, 0]).unwrap();
        let o = PureState::basis(vec![2, 2], &[1, 1]).unwrap();
        assert_eq!(z.inner(&o).unwrap(), c(0.0));
        let bell = bell_states();
        assert!(bell[0].inner(&bell[1]).unwrap().norm() < 1e-15);
        let s = build_family(FamilySpec::SSet).unwrap().states;
        assert!(s.states()[0].inner(&s.states()[1]).unwrap().norm() < 1e-15);
        assert!(matches!(
            z.inner(&PureState::basis(vec![4], &[0]).unwrap()),
            Err(Error::DimsMismatch { .. })
        ));
    }

    #[test]
    fn conjugation_swaps_the_omega_states() {
        let s = build_family(FamilySpec::SSet).unwrap().states;
        let conj = s.states()[0].conjugate();
        assert_eq!(conj, s.states()[1]);
        let real = &bell_states()[2];
        assert_eq!(&real.conjugate(), real);
    }

    #[test]
    fn orthonormality_scan() {
        assert!(is_orthonormal_set(&bell_states(), 1e-9).unwrap().orthonormal);
        let zero = PureState::basis(vec![2], &[0]).unwrap();
        let plus = PureState::from_real(vec![2], &[0.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        let report = is_orthonormal_set(&[zero, plus], 1e-9).unwrap();
        assert!(!report.orthonormal);
        assert!((report.max_violation - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(report.worst_pair, (0, 1));
        let sp = build_family(FamilySpec::SPrimeSet).unwrap().states;
        assert!(is_orthonormal_set(sp.states(), 1e-9).unwrap().orthonormal);
        assert!(matches!(
            is_orthonormal_set(&[], 1e-9),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn families_match_their_displayed_forms() {
        let h = 0.5f64.sqrt();
        let bell = bell_states();
        let expected = [
            [h, 0.0, 0.0, h],
            [h, 0.0, 0.0, -h],
            [0.0, h, h, 0.0],
            [0.0, h, -h, 0.0],
        ];
        for (state, amps) in bell.iter().zip(expected) {
            let target: Vec<_> = amps.iter().map(|&x| c(x)).collect();
            assert!(max_abs_diff(state.amps(), &target) < 1e-15);
        }

        let ghz = ghz_states();
        assert_eq!(ghz.len(), 8);
        assert!((ghz[0].amps()[0] - c(h)).norm() < 1e-15);
        assert!((ghz[1].amps()[7] - c(-h)).norm() < 1e-15);
        assert!((ghz[2].amps()[0b010] - c(h)).norm() < 1e-15);
        assert!((ghz[2].amps()[0b101] - c(h)).norm() < 1e-15);
        assert!((ghz[7].amps()[0b110] - c(-h)).norm() < 1e-15);

        let s = build_family(FamilySpec::SSet).unwrap().states;
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let r = 1.0 / 3f64.sqrt();
        let psi1 = s.states()[0].amps();
        assert!((psi1[0] - c(r)).norm() < 1e-15);
        assert!((psi1[4] - w * r).norm() < 1e-15);
        assert!((psi1[8] - w * w * r).norm() < 1e-15);
        let psi3 = s.states()[2].amps();
        for idx in [1, 5, 6] {
            assert!((psi3[idx] - c(r)).norm() < 1e-15);
        }
    }

    #[test]
    fn a_family_at_symmetry_point_is_bell() {
        let fam = build_family(FamilySpec::AFamily { a: 0.5f64.sqrt() }).unwrap();
        let bell = bell_states();
        for (a, b) in fam.states.states().iter().zip(&bell) {
            assert!(max_abs_diff(a.amps(), b.amps()) < 1e-12);
        }
        assert_eq!(fam.detectors.unwrap(), bell[..3].to_vec());
        for bad in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(build_family(FamilySpec::AFamily { a: bad }).is_err());
        }
        assert!(build_family(FamilySpec::GenMaxEntangled { d: 1, shift: 0, phase: 0 }).is_err());
    }

    #[test]
    fn roots_of_unity_are_conjugate_symmetric() {
        for d in 2..9 {
            for m in 0..d {
                let z = root_of_unity(d, m);
                assert!((z.norm() - 1.0).abs() < 1e-15);
                assert_eq!(root_of_unity(d, (d - m) % d), z.conj());
                let exact = Complex64::from_polar(1.0, 2.0 * PI * m as f64 / d as f64);
                assert!((z - exact).norm() < 1e-15);
            }
        }
        assert_eq!(root_of_unity(2, 1), c(-1.0));
    }

    #[test]
    fn index_helpers_round_trip() {
        let dims = [3, 2, 4];
        for flat in 0..24 {
            assert_eq!(flat_index(&dims, &multi_index(&dims, flat)), flat);
        }
        assert_eq!(flat_index(&dims, &[1, 0, 2]), 8 + 2);
    }
}
