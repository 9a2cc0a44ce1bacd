//! Seeded generators for random states, Haar unitaries and bases.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::CMatrix;
use crate::statekit::PureState;

/// The generator used everywhere a seed is accepted.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// A state drawn uniformly from the unit sphere of the joint space.
pub fn random_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<PureState> {
    let total: usize = dims.iter().product();
    let amps = (0..total).map(|_| gaussian(rng)).collect();
    PureState::normalized(dims.to_vec(), amps)
}

/// Haar-distributed `d×d` unitary: QR of a complex Ginibre matrix with the
/// phases of `R`'s diagonal pushed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let ginibre = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = ginibre.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// The columns of a Haar unitary as a complete orthonormal basis of
/// `d_1 ⊗ … ⊗ d_N`.
pub fn random_basis<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<Vec<PureState>> {
    let total: usize = dims.iter().product();
    let u = haar_unitary(total, rng);
    (0..total)
        .map(|j| PureState::new(dims.to_vec(), u.column(j).iter().copied().collect()))
        .collect()
}
