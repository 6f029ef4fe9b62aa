//! Kronecker products and partial traces over factorized spaces.

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64, ZERO};

/// Local dimensions of the tensor factors of a space, factor 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceFactorization {
    dims: Vec<usize>,
}

impl SpaceFactorization {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "factor dimensions must be non-empty and positive, got {dims:?}"
            )));
        }
        Ok(Self { dims })
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Row-major strides: the flat index is `Σ digit_f · stride_f`.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for f in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[f] = strides[f + 1] * self.dims[f + 1];
        }
        strides
    }

    /// Flat offsets of every multi-index over `factors` (in the given order,
    /// first factor most significant).
    fn offsets(&self, factors: &[usize]) -> Vec<usize> {
        let strides = self.strides();
        let mut offsets = vec![0usize];
        for &f in factors {
            let mut next = Vec::with_capacity(offsets.len() * self.dims[f]);
            for &o in &offsets {
                for digit in 0..self.dims[f] {
                    next.push(o + digit * strides[f]);
                }
            }
            offsets = next;
        }
        offsets
    }

    fn check_matrix(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                context: "factorized operator must be square; columns".into(),
                expected: m.rows(),
                found: m.cols(),
            });
        }
        if m.rows() != self.total_dim() {
            return Err(Error::DimensionMismatch {
                context: format!("operator on factors {:?}", self.dims),
                expected: self.total_dim(),
                found: m.rows(),
            });
        }
        Ok(())
    }

    fn check_factor_set(&self, set: &[usize], what: &str) -> Result<Vec<usize>> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != set.len() {
            return Err(Error::InvalidArgument(format!("{what} has repeated factors: {set:?}")));
        }
        if let Some(&bad) = sorted.iter().find(|&&f| f >= self.dims.len()) {
            return Err(Error::InvalidArgument(format!(
                "{what} names factor {bad}, but only {} factors exist",
                self.dims.len()
            )));
        }
        Ok(sorted)
    }
}

/// Standard Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, m| kron(&acc, m))
}

/// Traces out every factor not in `keep`. Kept factors appear in ascending
/// factor order in the result.
pub fn partial_trace(m: &ComplexMatrix, f: &SpaceFactorization, keep: &[usize]) -> Result<ComplexMatrix> {
    f.check_matrix(m)?;
    if keep.is_empty() {
        return Err(Error::InvalidArgument("partial trace needs a non-empty keep set".into()));
    }
    let keep = f.check_factor_set(keep, "keep set")?;
    let traced: Vec<usize> = (0..f.len()).filter(|i| !keep.contains(i)).collect();

    let keep_offsets = f.offsets(&keep);
    let traced_offsets = f.offsets(&traced);
    let n = keep_offsets.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (r, &ro) in keep_offsets.iter().enumerate() {
        for (c, &co) in keep_offsets.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_offsets {
                acc += m[(ro + t, co + t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Reorders tensor factors: factor `i` of the result is factor `order[i]` of `m`.
pub fn permute_factors(m: &ComplexMatrix, f: &SpaceFactorization, order: &[usize]) -> Result<ComplexMatrix> {
    f.check_matrix(m)?;
    let sorted = f.check_factor_set(order, "factor order")?;
    if sorted.len() != f.len() {
        return Err(Error::InvalidArgument(format!(
            "factor order {order:?} is not a permutation of {} factors",
            f.len()
        )));
    }
    let offsets = f.offsets(order);
    let n = offsets.len();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| m[(offsets[i], offsets[j])]))
}

/// Flat index of a multi-index over `f`.
pub fn flat_index(f: &SpaceFactorization, digits: &[usize]) -> usize {
    digits
        .iter()
        .zip(f.strides())
        .map(|(d, s)| d * s)
        .sum()
}

/// Ket of a product of local basis states.
pub fn product_basis_ket(f: &SpaceFactorization, digits: &[usize]) -> Vec<C64> {
    let mut v = vec![ZERO; f.total_dim()];
    v[flat_index(f, digits)] = C64::new(1.0, 0.0);
    v
}
