//! Exact computer algebra for quantum affine sl(2) at finite truncation.
//!
//! The crate builds, in exact arithmetic over the field of rational
//! functions in `q` with Gaussian-rational coefficients:
//!
//! * truncated defining and adjoint loop modules with their generator
//!   action matrices and relation-verification suites ([`uq`]),
//! * braiding operators on zero-mode tensor squares, their Hecke-type
//!   minimal polynomials, shift-operator rewrite rules and the
//!   normal-ordering rewriter ([`braiding`]),
//! * the q-Clifford algebra with its invariant bilinear form and
//!   fermionic Fock spaces ([`clifford`]),
//! * classical and deformed Dirac operator families with covariance and
//!   cocycle verification suites and numeric spectra ([`dirac`]).
//!
//! Everything is checked to *zero residual*: a relation either holds
//! exactly or its residual is reported. The `qaffine` binary drives the
//! suites from the command line; see the book under `book/` for a guided
//! tour.

pub mod scalar;
pub mod linalg;
pub mod uq;
pub mod braiding;

pub use scalar::{qbinom, qint, Gauss, QRat, ScalarError};
