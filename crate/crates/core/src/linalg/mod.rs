//! Dense complex linear algebra: matrices, spectral kernels and norms.

mod eig;
mod functions;
mod hermitian;
mod matrix;
mod norms;
mod svd;
mod weyl;

pub use eig::{hermitian_eig, hermitian_eigenvalues};
pub use functions::{matrix_function, psd_sqrt, trace_function, ConcaveFunctionSpec};
pub use hermitian::{HermitianMatrix, Isometry, Spectrum};
pub use matrix::{inner, vec_norm, ComplexMatrix};
pub use norms::{ky_fan_norm, schatten_from_singular_values, schatten_norm};
pub use svd::{polar_isometry_factor, singular_values, thin_svd, ThinSvd};
pub use weyl::weyl_bound;

