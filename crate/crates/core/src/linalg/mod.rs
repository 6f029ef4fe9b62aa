//! Dense complex linear algebra for history spaces.

pub mod eigen;
pub mod matrix;
pub mod svd;
pub mod tensor;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, von_neumann_entropy, HermitianEigen};
pub use matrix::{inner, norm, ComplexMatrix, StateVector, C64, ONE, ZERO};
pub use svd::{svd, Svd};
pub use tensor::{kron, kron_all, partial_trace, permute_factors, SpaceFactorization};
