//! Exact symbolic workbench for R-matrices of quantized enveloping algebras.
//!
//! The crate builds R-matrices from explicit finite-dimensional module data,
//! verifies the Yang-Baxter equation and the FRT identity battery, computes
//! minimal polynomials of braidings, normalizes (R, R') pairs, and runs the
//! double-bosonization pipeline that adjoins a new simple root and extracts
//! the enlarged Cartan matrix.  All arithmetic is exact: Laurent polynomials
//! in v = q^{1/4} over the rationals, extended by the square roots of the
//! q-integers [2]_q and [3]_q.

pub mod qfield;
pub mod tensor;
pub mod repmod;
pub mod rmatrix;
pub mod minpoly;
pub mod frt;
pub mod dbos;
pub mod serial;
