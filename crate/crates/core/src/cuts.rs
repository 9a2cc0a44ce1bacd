//! Bipartitions of a multipartite state, Schmidt spectra and the
//! monotones built from them.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{squared_singular_values, CMatrix};
use crate::statekit::{multi_index, PureState};

/// An ordered bipartition of parties `0..N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cut {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Cut {
    /// Both sides must be nonempty, disjoint, and cover `0..N` exactly, where
    /// `N = left.len() + right.len()`.
    pub fn new(left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidCut("both sides must be nonempty".into()));
        }
        let n = left.len() + right.len();
        let mut seen = vec![false; n];
        for &p in left.iter().chain(&right) {
            if p >= n {
                return Err(Error::InvalidCut(format!("party {p} out of range 0..{n}")));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidCut(format!("party {p} appears twice")));
            }
        }
        Ok(Cut { left, right })
    }

    /// `left` against its complement in `0..n`, both in ascending order.
    pub fn split(left: &[usize], n: usize) -> Result<Self> {
        let mut l = left.to_vec();
        l.sort_unstable();
        l.dedup();
        if l.len() != left.len() {
            return Err(Error::InvalidCut(format!("duplicate party in {left:?}")));
        }
        let right = (0..n).filter(|p| !l.contains(p)).collect();
        Cut::new(l, right)
    }

    /// Party `party` against the rest.
    pub fn single(party: usize, n: usize) -> Result<Self> {
        Cut::split(&[party], n)
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn parties(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn flipped(&self) -> Cut {
        Cut {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    fn check_against(&self, dims: &[usize]) -> Result<()> {
        if self.parties() != dims.len() {
            return Err(Error::InvalidCut(format!(
                "cut covers {} parties, state has {}",
                self.parties(),
                dims.len()
            )));
        }
        Ok(())
    }

    /// Local dimensions of the two sides for a state with `dims`.
    pub fn side_dims(&self, dims: &[usize]) -> Result<(usize, usize)> {
        self.check_against(dims)?;
        let l = self.left.iter().map(|&p| dims[p]).product();
        let r = self.right.iter().map(|&p| dims[p]).product();
        Ok((l, r))
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{{{}}}:{{{}}}", join(&self.left), join(&self.right))
    }
}

/// Every cut of one party against the rest, in party order.
pub fn single_party_cuts(n: usize) -> Vec<Cut> {
    if n < 2 {
        return Vec::new();
    }
    (0..n)
        .map(|p| Cut::single(p, n).expect("valid single-party cut"))
        .collect()
}

/// Squared Schmidt coefficients, non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtVector {
    probs: Vec<f64>,
}

impl SchmidtVector {
    /// Sorts `probs` descending. No normalization is applied.
    pub fn from_probs(mut probs: Vec<f64>) -> Self {
        probs.sort_by(|a, b| b.total_cmp(a));
        SchmidtVector { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn largest(&self) -> f64 {
        self.probs[0]
    }

    /// Number of entries above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.probs.iter().filter(|&&p| p > tol).count()
    }

    /// Tail sum `E_k = Σ_{i ≥ k} λ_i` (1-based `k`).
    pub fn tail_sum(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.probs.len() {
            return Err(Error::InvalidParameter(format!(
                "monotone index {k} outside 1..={}",
                self.probs.len()
            )));
        }
        if k == 1 {
            return Ok(1.0);
        }
        Ok(self.probs[k - 1..].iter().sum())
    }
}

/// Reshapes `s` into a matrix with rows over the left parties and columns
/// over the right parties, each side in the order listed by the cut.
pub fn regroup(s: &PureState, cut: &Cut) -> Result<CMatrix> {
    let dims = s.dims();
    let (rows, cols) = cut.side_dims(dims)?;
    let mut m = CMatrix::from_element(rows, cols, Complex64::new(0.0, 0.0));
    for (flat, amp) in s.amps().iter().enumerate() {
        if *amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let digits = multi_index(dims, flat);
        let row = cut.left().iter().fold(0, |acc, &p| acc * dims[p] + digits[p]);
        let col = cut.right().iter().fold(0, |acc, &p| acc * dims[p] + digits[p]);
        m[(row, col)] = *amp;
    }
    Ok(m)
}

pub fn schmidt_vector(s: &PureState, cut: &Cut) -> Result<SchmidtVector> {
    let m = regroup(s, cut)?;
    Ok(SchmidtVector::from_probs(squared_singular_values(&m)?))
}

/// The LOCC-non-increasing tail sum `E_k` of the Schmidt vector across `cut`.
pub fn vidal_monotone(s: &PureState, cut: &Cut, k: usize) -> Result<f64> {
    schmidt_vector(s, cut)?.tail_sum(k)
}

pub fn schmidt_rank(s: &PureState, cut: &Cut, tol: f64) -> Result<usize> {
    Ok(schmidt_vector(s, cut)?.rank(tol))
}

/// First single-party cut across which `s` has Schmidt rank above one.
pub fn is_entangled_some_cut(s: &PureState, tol: f64) -> Result<Option<Cut>> {
    for cut in single_party_cuts(s.parties()) {
        if schmidt_rank(s, &cut, tol)? > 1 {
            return Ok(Some(cut));
        }
    }
    Ok(None)
}

/// True iff `s = |η_1⟩ ⊗ … ⊗ |η_N⟩`.
pub fn is_fully_product(s: &PureState, tol: f64) -> Result<bool> {
    Ok(is_entangled_some_cut(s, tol)?.is_none())
}
