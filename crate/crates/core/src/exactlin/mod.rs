//! Exact linear algebra: rationals, dense matrices, PSD certificates,
//! characteristic polynomials, eigenvalue isolation and an exact simplex.

pub mod eigen;
pub mod matrix;
pub mod poly;
pub mod psd;
pub mod rational;
pub mod simplex;

pub use eigen::{approx_eigenvector, min_eigenvalue_approx};
pub use matrix::{dot, norm_sq, RatMatrix};
pub use poly::{char_poly, Polynomial, SturmChain};
pub use psd::{psd_certificate, PsdCertificate};
pub use rational::Rational;
pub use simplex::{lp_optimize, LpOutcome};
