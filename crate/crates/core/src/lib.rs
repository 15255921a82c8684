//! Numerical toolkit for moment computations attached to degree-3 L-functions:
//! exponential sums over residue classes, Hecke eigenvalues via symmetric
//! functions of Satake parameters, local Euler factors, oldform Gram matrices,
//! and archimedean integral transforms, together with a verification harness
//! that replays every identity against brute-force or closed-form references.

pub mod arith;
pub mod archimedean;
pub mod cache;
pub mod config;
pub mod geometric;
pub mod hecke;
pub mod kloosterman;
pub mod oldform;
pub mod report;
pub mod resonator;
pub mod scalar;
pub mod suites;
pub mod symsq;

pub use scalar::{Real, C, F};
