//! Isometric decompositions of positive matrices partitioned in Hermitian
//! blocks, and numerical certificates for the partial-trace inequalities
//! they imply.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex matrices, a cyclic Jacobi Hermitian
//!   eigensolver, one-sided Jacobi SVD and polar factors, Schatten / Ky Fan
//!   norms and concave matrix functions.
//! - [`block`]: the partitioned-matrix model (blocks, partial trace, dyadic
//!   padding, direct sums, Kronecker products, the copy shuffle).
//! - [`decompose`]: the pinch decomposition, the two-block complex-isometry
//!   average and the Clifford construction on direct-sum copies, including a
//!   lazily applied operator path for large block counts.
//! - [`certify`]: inequality checkers producing [`certify::CertificateReport`]s.
//! - [`generate`]: seeded instance generators and a counterexample search.

pub mod block;
pub mod certify;
pub mod decompose;
pub mod error;
pub mod generate;
pub mod linalg;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianMatrix, Isometry, Spectrum};
pub use num_complex::Complex64;
