//! Dense linear-algebra kernels, generic over the scalar type.
//!
//! Everything here is eigenvalue/decomposition plumbing for the rest of the
//! crate: one-sided Jacobi SVD for Cartan data, Householder tridiagonalization
//! plus implicit QL for symmetric spectra, a Hessenberg-QR solver for the
//! directed-edge operator, QR for Iwasawa coordinates and Haar sampling, and
//! LU with partial pivoting for log-determinants.

mod hqr;
mod lu;
mod mat;
mod qr;
mod svd;
mod symeig;

pub use hqr::eigenvalues;
pub use lu::{lu_logdet, LogDet};
pub use mat::DMat;
pub use qr::{qr_decompose, qr_r_diag};
pub use svd::singular_values;
pub use symeig::symmetric_eigenvalues;
