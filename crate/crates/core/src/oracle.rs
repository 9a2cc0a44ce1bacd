//! Reference computations that share no code path with the library:
//! reduced density matrices by explicit partial trace with a Jacobi
//! eigensolver, and majorization by exhaustive T-transform search.
//!
//! Compiled only for tests or with the `oracles` feature.

use std::collections::HashSet;

use crate::statekit::PureState;

/// Eigenvalues (descending) of the reduced density matrix on `keep`,
/// computed by tracing out every other party explicitly.
pub fn reduced_spectrum(state: &PureState, keep: &[usize]) -> Vec<f64> {
    let dims = state.dims();
    let n = dims.len();
    let traced: Vec<usize> = (0..n).filter(|p| !keep.contains(p)).collect();
    let dk: usize = keep.iter().map(|&p| dims[p]).product();
    let dt: usize = traced.iter().map(|&p| dims[p]).product();

    // Strides of each party in the flat amplitude index.
    let mut stride = vec![1usize; n];
    for p in (0..n.saturating_sub(1)).rev() {
        stride[p] = stride[p + 1] * dims[p + 1];
    }
    let offset = |parties: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &p in parties.iter().rev() {
            off += (idx % dims[p]) * stride[p];
            idx /= dims[p];
        }
        off
    };

    let amps = state.amps();
    let mut re = vec![vec![0.0; dk]; dk];
    let mut im = vec![vec![0.0; dk]; dk];
    for a in 0..dk {
        let oa = offset(keep, a);
        for b in 0..dk {
            let ob = offset(keep, b);
            let (mut sr, mut si) = (0.0, 0.0);
            for t in 0..dt {
                let ot = offset(&traced, t);
                let x = amps[oa + ot];
                let y = amps[ob + ot].conj();
                sr += x.re * y.re - x.im * y.im;
                si += x.re * y.im + x.im * y.re;
            }
            re[a][b] = sr;
            im[a][b] = si;
        }
    }
    hermitian_eigenvalues(&re, &im)
}

/// Eigenvalues of the Hermitian matrix `re + i·im`, descending, via the
/// real symmetric embedding `[[re, −im], [im, re]]` (every eigenvalue
/// appears twice there).
pub fn hermitian_eigenvalues(re: &[Vec<f64>], im: &[Vec<f64>]) -> Vec<f64> {
    let n = re.len();
    let mut m = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = re[i][j];
            m[i + n][j + n] = re[i][j];
            m[i][j + n] = -im[i][j];
            m[i + n][j] = im[i][j];
        }
    }
    let mut eig = jacobi_eigenvalues(m);
    eig.sort_by(|a, b| b.total_cmp(a));
    eig.into_iter().step_by(2).collect()
}

/// Cyclic Jacobi rotations until the off-diagonal mass vanishes.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (rp, rq) = (a[p].clone(), a[q].clone());
                for k in 0..n {
                    a[p][k] = c * rp[k] - s * rq[k];
                    a[q][k] = s * rp[k] + c * rq[k];
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Vectors are integer multiples of a unit, zero-padded to a fixed length
/// and sorted descending.
pub type UnitVector = Vec<u32>;

fn canonical(mut v: UnitVector) -> UnitVector {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Every vector reachable from `x` by at most `steps` T-transforms, where a
/// T-transform moves `δ ≥ 1` units from a larger entry to a smaller one
/// (`δ` at most their difference).
pub fn t_transform_closure(x: &[u32], steps: usize) -> HashSet<UnitVector> {
    let start = canonical(x.to_vec());
    let mut seen: HashSet<UnitVector> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    for _ in 0..steps {
        let mut next = Vec::new();
        for v in &frontier {
            for i in 0..v.len() {
                for j in 0..v.len() {
                    if v[i] <= v[j] {
                        continue;
                    }
                    for delta in 1..=(v[i] - v[j]) {
                        let mut w = v.clone();
                        w[i] -= delta;
                        w[j] += delta;
                        let w = canonical(w);
                        if seen.insert(w.clone()) {
                            next.push(w);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    seen
}

/// `x` majorizes `y` iff `y` is reachable from `x` by T-transforms.
pub fn majorizes_by_t_transforms(x: &[u32], y: &[u32], steps: usize) -> bool {
    let len = x.len().max(y.len());
    let pad = |v: &[u32]| {
        let mut w = v.to_vec();
        w.resize(len, 0);
        canonical(w)
    };
    t_transform_closure(&pad(x), steps).contains(&pad(y))
}
