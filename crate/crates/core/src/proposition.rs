//! Complete orthonormal bases: the witness `(1/√D) Σ_k ψ_k ⊗ ψ_k*`, which
//! is the same state for every basis and is product across each
//! party-with-its-copy cut, and the verdicts that follow from it.

use serde::Serialize;

use crate::cuts::{is_entangled_some_cut, schmidt_vector, Cut};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::random::{haar_unitary, rng_from_seed};
use crate::statekit::{gen_max_entangled, PureState, StateSet};
use crate::witness::superpose;
use crate::Tolerances;

/// A complete orthonormal basis of `d_1 ⊗ … ⊗ d_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec {
    set: StateSet,
}

impl BasisSpec {
    pub fn new(dims: Vec<usize>, vectors: Vec<PureState>, tol_orth: f64) -> Result<Self> {
        let expected: usize = dims.iter().product();
        if vectors.len() != expected {
            return Err(Error::IncompleteBasis {
                expected,
                got: vectors.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.dims() != dims.as_slice()) {
            return Err(Error::DimsMismatch {
                left: dims,
                right: v.dims().to_vec(),
            });
        }
        Ok(BasisSpec {
            set: StateSet::new(vectors, tol_orth)?,
        })
    }

    pub fn dims(&self) -> &[usize] {
        self.set.dims()
    }

    pub fn vectors(&self) -> &[PureState] {
        self.set.states()
    }

    /// The computational basis in row-major order.
    pub fn computational(dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        let vectors = (0..total)
            .map(|i| PureState::basis(dims.clone(), &crate::statekit::multi_index(&dims, i)))
            .collect::<Result<Vec<_>>>()?;
        BasisSpec::new(dims, vectors, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PropositionKind {
    /// Some vector is entangled: neither deterministic nor probabilistic
    /// LOCC discrimination is possible.
    LoccIndistinguishableDetAndProb,
    /// Every vector is fully product: probabilistic discrimination is
    /// possible.
    ProbDistinguishableProductBasis,
}

impl PropositionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PropositionKind::LoccIndistinguishableDetAndProb => "LOCC_INDISTINGUISHABLE_DET_AND_PROB",
            PropositionKind::ProbDistinguishableProductBasis => "PROB_DISTINGUISHABLE_PRODUCT_BASIS",
        }
    }
}

/// `1 − λ_max` of the witness across one party-with-copy cut.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductResidual {
    pub cut: Cut,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionVerdict {
    pub any_entangled: bool,
    pub witnessing_vector: Option<usize>,
    pub witnessing_cut: Option<Cut>,
    pub verdict: PropositionKind,
    pub product_check: Vec<ProductResidual>,
}

/// `(1/√D) Σ_k ψ_k ⊗ conj(ψ_k)` over `2N` parties (originals, then copies).
pub fn build_full_basis_witness(basis: &BasisSpec) -> Result<PureState> {
    let vectors = basis.vectors();
    let copies: Vec<PureState> = vectors.iter().map(PureState::conjugate).collect();
    let weights = vec![1.0 / vectors.len() as f64; vectors.len()];
    let amps = superpose(vectors, &copies, &weights)?;
    let dims: Vec<usize> = basis.dims().iter().chain(basis.dims()).copied().collect();
    PureState::new(dims, amps)
}

/// Cuts `{j, N+j}` against the rest, one per party. Empty for one party.
pub fn pairwise_cuts(n: usize) -> Vec<Cut> {
    if n < 2 {
        return Vec::new();
    }
    (0..n)
        .map(|j| Cut::split(&[j, n + j], 2 * n).expect("valid pairwise cut"))
        .collect()
}

pub fn check_full_basis(basis: &BasisSpec, tol: &Tolerances) -> Result<PropositionVerdict> {
    let witness = build_full_basis_witness(basis)?;
    let mut product_check = Vec::new();
    for cut in pairwise_cuts(basis.dims().len()) {
        let residual = 1.0 - schmidt_vector(&witness, &cut)?.largest();
        if residual > tol.rank {
            return Err(Error::Numeric(format!(
                "full-basis witness is not product across {cut} (residual {residual:e})"
            )));
        }
        product_check.push(ProductResidual { cut, residual });
    }

    let mut witnessing = None;
    for (i, v) in basis.vectors().iter().enumerate() {
        if let Some(cut) = is_entangled_some_cut(v, tol.rank)? {
            witnessing = Some((i, cut));
            break;
        }
    }
    let any_entangled = witnessing.is_some();
    let (witnessing_vector, witnessing_cut) = match witnessing {
        Some((i, c)) => (Some(i), Some(c)),
        None => (None, None),
    };
    Ok(PropositionVerdict {
        any_entangled,
        witnessing_vector,
        witnessing_cut,
        verdict: if any_entangled {
            PropositionKind::LoccIndistinguishableDetAndProb
        } else {
            PropositionKind::ProbDistinguishableProductBasis
        },
        product_check,
    })
}

/// `‖(U ⊗ U*) Φ+_d − Φ+_d‖`.
pub fn uu_star_deviation(u: &CMatrix) -> Result<f64> {
    let d = u.nrows();
    let phi = gen_max_entangled(d, 0, 0)?;
    let rotated = phi.apply_local(0, u)?.apply_local(1, &u.map(|z| z.conj()))?;
    Ok(rotated
        .amps()
        .iter()
        .zip(phi.amps())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Largest [`uu_star_deviation`] over `trials` Haar-random unitaries.
pub fn uu_star_invariance_check(d: usize, trials: usize, seed: u64) -> Result<f64> {
    if d < 2 || trials == 0 {
        return Err(Error::InvalidParameter(format!(
            "need d >= 2 and trials >= 1, got d={d}, trials={trials}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        worst = worst.max(uu_star_deviation(&haar_unitary(d, &mut rng))?);
    }
    Ok(worst)
}
