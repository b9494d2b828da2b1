use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the spectral routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("spectral parameter z = {0} must satisfy 0 < |z| < 1")]
    OutsideDisk(Complex64),

    #[error("spectral parameter z = {z} lies within {tol:e} of the band edge +-1")]
    NearBandEdge { z: Complex64, tol: f64 },

    #[error("lambda = {lambda} lies within {tol:e} of the segment [-2, 2]")]
    NearBand { lambda: Complex64, tol: f64 },

    #[error("kernel argument z = {0} is zero, +-1 or outside the closed unit disk")]
    KernelDomain(Complex64),

    #[error("lattice window holds {0} points, at least 3 are required")]
    WindowTooSmall(usize),

    #[error("index {index} is outside the stored window [{lo}, {hi}]")]
    OutsideWindow { index: i64, lo: i64, hi: i64 },

    #[error("epsilon = {0} must lie in (0, 1)")]
    InvalidEpsilon(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = SpectralError> = std::result::Result<T, E>;
