//! Exact rational substrate: scalars, polynomials, matrices, PSD
//! certificates, Vandermonde solves and real-root isolation.

pub mod matrix;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod vandermonde;

pub use matrix::{psd_test, PsdVerdict, SymMatrix};
pub use poly::{poly_eval, RationalPolynomial};
pub use roots::{is_nonnegative_on, isolate_real_roots, rational_roots, RootInterval};
pub use scalar::{binomial, factorial, q, Scalar};
pub use vandermonde::vandermonde_solve;
