//! Spectral analysis of non-self-adjoint whole-line Jacobi operators that are
//! finitely supported perturbations of the discrete Laplacian.
//!
//! The pipeline runs from the Green and transition kernels of the free
//! recurrence ([`kernels`]), through exact solution of the discrete Volterra
//! equations for the Jost solutions ([`jost`]), to the perturbation
//! determinant assembled from their Wronskian ([`determinant`]). Its zeros in
//! the unit disk are the discrete eigenvalues ([`spectrum`]), which feed the
//! eigenvalue sums and spectral enclosures in [`inequality`].
//!
//! Every computed quantity has an independent cross-check: the determinant is
//! compared with a dense resolvent determinant, and eigenvalues with a
//! finite-section eigensolver ([`eigen`]).

pub mod determinant;
pub mod eigen;
pub mod error;
pub mod inequality;
pub mod jost;
pub mod kernels;
pub mod operator;
pub mod spectrum;

pub use error::{Result, SpectralError};
pub use operator::{JacobiOperator, PerturbationGauge, SpectralParameter};
