//! Independent oracles and random generators shared by the integration
//! tests. Nothing here calls the library's numerical routines; only
//! accessors and constructors are used.

#![allow(dead_code)]

use histent_core::history::{MeasurementEvent, Outcome, Schedule};
use histent_core::linalg::{ComplexMatrix, StateVector, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn random_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| random_complex(rng)).collect();
        if v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3 {
            return StateVector::normalized(v).unwrap();
        }
    }
}

/// Columns of a random unitary, by modified Gram-Schmidt.
pub fn random_orthonormal_basis(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v: Vec<C64> = (0..dim).map(|_| random_complex(rng)).collect();
        for b in &basis {
            let proj: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= proj * bi;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-3 {
            basis.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    basis
}

pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let cols = random_orthonormal_basis(rng, dim);
    ComplexMatrix::from_fn(dim, dim, |r, c| cols[c][r])
}

/// Random Hermitian matrix with entries in the unit square.
pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = c(rng.gen_range(-1.0..1.0));
        for j in i + 1..dim {
            let z = random_complex(rng);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Complete rank-one family from a random orthonormal basis.
pub fn random_event(rng: &mut ChaCha8Rng, time: usize, dim: usize) -> MeasurementEvent {
    let kets = random_orthonormal_basis(rng, dim)
        .into_iter()
        .enumerate()
        .map(|(i, k)| (format!("o{i}"), k))
        .collect();
    MeasurementEvent::from_kets(time, kets).unwrap()
}

/// Random schedule with `dim ≤ 4` and `n ≤ 3` events.
pub fn random_schedule(rng: &mut ChaCha8Rng) -> Schedule {
    let dim = rng.gen_range(2..=4);
    let n = rng.gen_range(1..=3);
    let steps = (1..=n)
        .map(|t| (random_unitary(rng, dim), random_event(rng, t, dim)))
        .collect();
    Schedule::new(random_state(rng, dim), steps).unwrap()
}

fn matvec(m: &ComplexMatrix, v: &[C64]) -> Vec<C64> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m[(r, c)] * v[c]).sum())
        .collect()
}

/// Sequential collapse: evolve, project, keep the unnormalized branch;
/// its squared norm is the joint probability.
pub fn collapse_probability(s: &Schedule, positions: &[usize]) -> f64 {
    let mut psi = s.initial().amplitudes().to_vec();
    for ((u, e), &k) in s.steps().zip(positions) {
        psi = matvec(u, &psi);
        psi = matvec(e.outcomes()[k].projector(), &psi);
    }
    psi.iter().map(|z| z.norm_sqr()).sum()
}

/// `⟨k_n|U_n|k_{n-1}⟩ ⋯ ⟨k_1|U_1|ψ⟩` for rank-one outcomes with stored kets.
pub fn ket_chain_amplitude(s: &Schedule, positions: &[usize]) -> C64 {
    let mut amp = c(1.0);
    let mut prev = s.initial().amplitudes().to_vec();
    for ((u, e), &k) in s.steps().zip(positions) {
        let ket = e.outcomes()[k].stored_ket().expect("stored ket").to_vec();
        let moved = matvec(u, &prev);
        amp *= ket.iter().zip(&moved).map(|(a, b)| a.conj() * b).sum::<C64>();
        prev = ket;
    }
    amp
}

/// Every outcome index sequence of a schedule.
pub fn all_positions(s: &Schedule) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for e in s.events() {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..e.outcomes().len()).map(move |k| {
                    let mut q = p.clone();
                    q.push(k);
                    q
                })
            })
            .collect();
    }
    out
}

/// `(A ⊗ B)[(i·p + k, j·q + l)] = A[i,j] B[k,l]` by four nested loops.
pub fn naive_kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (m, n, p, q) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(m * p, n * q);
    for i in 0..m {
        for j in 0..n {
            for k in 0..p {
                for l in 0..q {
                    out[(i * p + k, j * q + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Partial trace by enumerating digit tuples of every factor.
pub fn naive_partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> ComplexMatrix {
    let total: usize = dims.iter().product();
    let digits = |mut idx: usize| -> Vec<usize> {
        let mut d = vec![0; dims.len()];
        for f in (0..dims.len()).rev() {
            d[f] = idx % dims[f];
            idx /= dims[f];
        }
        d
    };
    let kept_dim: usize = keep.iter().map(|&f| dims[f]).product();
    let kept_index = |d: &[usize]| keep.iter().fold(0, |acc, &f| acc * dims[f] + d[f]);
    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for r in 0..total {
        let dr = digits(r);
        for c2 in 0..total {
            let dc = digits(c2);
            let traced_equal = (0..dims.len()).filter(|f| !keep.contains(f)).all(|f| dr[f] == dc[f]);
            if traced_equal {
                out[(kept_index(&dr), kept_index(&dc))] += m[(r, c2)];
            }
        }
    }
    out
}

/// Number of eigenvalues of Hermitian `m` below `x`, from the inertia of
/// `m − xI` (negative pivots of an LDL† elimination).
#[allow(clippy::needless_range_loop)]
fn count_below(m: &ComplexMatrix, x: f64) -> usize {
    let n = m.rows();
    let mut a: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)] - if i == j { c(x) } else { c(0.0) }).collect())
        .collect();
    let mut negatives = 0;
    for k in 0..n {
        let mut d = a[k][k].re;
        if d.abs() < 1e-300 {
            d = -1e-300;
        }
        if d < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let f = a[i][k] / d;
            for j in k + 1..n {
                let t = f * a[k][j];
                a[i][j] -= t;
            }
        }
    }
    negatives
}

/// Eigenvalues (descending) by bisection on inertia counts.
pub fn bisection_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let bound: f64 = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    let mut values: Vec<f64> = (0..n)
        .map(|k| {
            // k-th smallest: smallest x with count_below(x) > k
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(m, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect();
    values.reverse();
    values
}

/// `−Σ λ log₂ λ` over `λ > 1e-12`.
pub fn entropy_bits(values: &[f64]) -> f64 {
    values.iter().filter(|&&l| l > 1e-12).map(|&l| -l * l.log2()).sum()
}

/// Entropy of the binary distribution `(p, 1 − p)` plus one bit.
pub fn teleportation_curve(p: f64) -> f64 {
    1.0 + entropy_bits(&[p, 1.0 - p])
}

pub fn projector_outcome(label: &str, ket: Vec<C64>) -> Outcome {
    Outcome::from_ket(label, ket).unwrap()
}
