//! Hermitian eigen-decomposition by cyclic complex Jacobi rotations, and the
//! von Neumann entropy built on it.

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64};

/// Structural tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// (scaled by the matrix norm when that exceeds one).
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues below this contribute nothing to the entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            context: "eigen-decomposition of a non-square matrix; columns".into(),
            expected: m.rows(),
            found: m.cols(),
        });
    }
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            what: "eigen-decomposition input".into(),
            deviation,
        });
    }
    let n = m.rows();
    // symmetrize so the rotations act on an exactly Hermitian matrix
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    });
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let threshold = OFF_DIAGONAL_TOL * m.frobenius_norm().max(1.0);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off < threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, v.as_mut(), p, q);
            }
        }
    }

    let values: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    Ok((values, v))
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
///
/// With `a_pq = g·e` (`g ≥ 0`, `|e| = 1`) the unitary
/// `W = [[c, s], [-s·ē, c·ē]]` on rows/columns `(p, q)` gives `W† A W` with a
/// zero `(p, q)` entry.
fn rotate(a: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let e = apq / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let ec = e.conj();
    let w_pp = C64::new(c, 0.0);
    let w_pq = C64::new(s, 0.0);
    let w_qp = -ec * s;
    let w_qq = ec * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * w_pp + akq * w_qp;
        a[(k, q)] = akp * w_pq + akq * w_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = w_pp.conj() * apk + w_qp.conj() * aqk;
        a[(q, k)] = w_pq.conj() * apk + w_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * w_pp + vkq * w_qp;
            v[(k, q)] = vkp * w_pq + vkq * w_qq;
        }
    }
}

/// Real eigenvalues of a Hermitian matrix, in descending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (mut values, _) = jacobi(m, false)?;
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Eigenvalues (descending) with matching eigenvector columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let (values, vectors) = jacobi(m, true)?;
    let vectors = vectors.expect("requested");
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let n = values.len();
    Ok(HermitianEigen {
        values: order.iter().map(|&k| values[k]).collect(),
        vectors: ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]),
    })
}

/// Von Neumann entropy `-Σ λ log₂ λ` of a density matrix, in bits.
pub fn von_neumann_entropy(m: &ComplexMatrix) -> Result<f64> {
    let trace = m.trace().re;
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceMismatch { trace });
    }
    let values = hermitian_eigenvalues(m)?;
    entropy_of_spectrum(&values)
}

/// Entropy of an already-computed spectrum; rejects negative eigenvalues.
pub fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    if let Some(&min) = values.iter().min_by(|a, b| a.total_cmp(b)) {
        if min < -POSITIVITY_TOL {
            return Err(Error::NegativeEigenvalue { value: min });
        }
    }
    Ok(values
        .iter()
        .filter(|&&l| l > ENTROPY_CUTOFF)
        .map(|&l| -l * l.log2())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        let m = ComplexMatrix::diagonal(&[C64::new(0.5, 0.0), C64::new(0.5, 0.0)]);
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), vec![0.5, 0.5]);
        assert!((von_neumann_entropy(&m).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1
        let m = ComplexMatrix::from_rows(&[
            [C64::new(2.0, 0.0), C64::new(0.0, 1.0)],
            [C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        ])
        .unwrap();
        let eig = hermitian_eigen(&m).unwrap();
        assert!((eig.values[0] - 3.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        for k in 0..2 {
            let v = eig.vectors.column(k);
            let mv = m.apply(&v).unwrap();
            for i in 0..2 {
                assert!((mv[i] - v[i] * eig.values[k]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        let v = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let rho = ComplexMatrix::outer(&v, &v);
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let skew = ComplexMatrix::from_rows(&[
            [C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(hermitian_eigenvalues(&skew), Err(Error::NotHermitian { .. })));

        let unnormalized = ComplexMatrix::identity(2);
        assert!(matches!(von_neumann_entropy(&unnormalized), Err(Error::TraceMismatch { .. })));

        let negative = ComplexMatrix::diagonal(&[C64::new(1.5, 0.0), C64::new(-0.5, 0.0)]);
        assert!(matches!(von_neumann_entropy(&negative), Err(Error::NegativeEigenvalue { .. })));
    }

    #[test]
    fn empty_matrix() {
        assert!(hermitian_eigenvalues(&ComplexMatrix::zeros(0, 0)).unwrap().is_empty());
    }
}
