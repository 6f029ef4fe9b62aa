//! One-sided (Hestenes) Jacobi SVD for small dense complex matrices.
//!
//! Singular values come out with absolute error near machine epsilon times
//! the largest one, which is what a rank-one test at `σ₂/σ₁ ≤ 1e-10` needs;
//! going through the eigenvalues of `M M†` would square that error.

use crate::error::{Error, Result};
use crate::linalg::matrix::{inner, ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug)]
pub struct Svd {
    /// Descending.
    pub singular_values: Vec<f64>,
    /// Column `k` is the left singular vector for `singular_values[k]`
    /// (zero column when the singular value is zero).
    pub u: ComplexMatrix,
    /// Column `k` is the right singular vector: `M = U Σ V†`.
    pub v: ComplexMatrix,
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..cols)
        .map(|j| {
            let mut e = vec![ZERO; cols];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let negligible = (f64::EPSILON * m.frobenius_norm()).powi(2);
    let mut converged = cols < 2;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: f64::NAN,
            });
        }
        sweeps += 1;
        converged = true;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = inner(&a[p], &a[q]);
                let g = gamma.norm();
                if alpha <= negligible || beta <= negligible || g <= 4.0 * f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                converged = false;
                let e = gamma / g;
                let theta = (beta - alpha) / (2.0 * g);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let w_qp = -e.conj() * s;
                let w_qq = e.conj() * c;
                rotate_pair(&mut a, p, q, c, s, w_qp, w_qq);
                rotate_pair(&mut v, p, q, c, s, w_qp, w_qq);
            }
        }
    }

    let sigmas: Vec<f64> = a.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| sigmas[y].total_cmp(&sigmas[x]));

    let mut u = ComplexMatrix::zeros(rows, cols);
    let mut vm = ComplexMatrix::zeros(cols, cols);
    for (k, &src) in order.iter().enumerate() {
        let sigma = sigmas[src];
        for i in 0..rows {
            u[(i, k)] = if sigma > 0.0 { a[src][i] / sigma } else { ZERO };
        }
        for i in 0..cols {
            vm[(i, k)] = v[src][i];
        }
    }
    Ok(Svd {
        singular_values: order.iter().map(|&k| sigmas[k]).collect(),
        u,
        v: vm,
    })
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, w_qp: C64, w_qq: C64) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = xp * c + xq * w_qp;
        *y = xp * s + xq * w_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(s: &Svd) -> ComplexMatrix {
        let k = s.singular_values.len();
        let sigma = ComplexMatrix::diagonal(&s.singular_values.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>());
        assert_eq!(sigma.rows(), k);
        s.u.matmul(&sigma).unwrap().matmul(&s.v.adjoint()).unwrap()
    }

    #[test]
    fn rank_one_outer_product() {
        let x = [C64::new(1.0, 1.0), C64::new(0.0, -2.0), C64::new(0.5, 0.0)];
        let y = [C64::new(0.3, 0.0), C64::new(-1.0, 0.7)];
        let m = ComplexMatrix::outer(&x, &y);
        let s = svd(&m).unwrap();
        let expected = crate::linalg::matrix::norm(&x) * crate::linalg::matrix::norm(&y);
        assert!((s.singular_values[0] - expected).abs() < 1e-14);
        assert!(s.singular_values[1] < 1e-15);
        assert!(reconstruct(&s).max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let s = svd(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(s.singular_values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn general_reconstruction() {
        let m = ComplexMatrix::from_fn(3, 4, |i, j| C64::new((i * 4 + j) as f64 * 0.37 - 1.0, (i as f64 - j as f64) * 0.21));
        let s = svd(&m).unwrap();
        assert!(reconstruct(&s).max_abs_diff(&m) < 1e-13);
        for w in s.singular_values.windows(2) {
            assert!(w[0] >= w[1]);
        }
    }
}
