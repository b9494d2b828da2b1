//! Green kernels of the free recurrence and the transition kernels built from them.
//!
//! `G_r(n, m; z) = (z^(m-n) - z^(n-m)) / (z - 1/z)` for `m >= n` and zero otherwise;
//! `G_l(n, m; z) = G_r(m, n; z)`. Writing `k = m - n`, the ratio equals the finite
//! sum `sum_{j<k} z^(k-1-2j)`, which is what we evaluate near the unit circle.
//! The scaled forms `G_r(n, n+k) z^k = z (1 + z^2 + ... + z^(2k-2))` are plain
//! polynomials and never divide.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::operator::{JacobiOperator, TOL_EDGE};

/// Below this modulus the closed ratio form is used for `G_r`, `G_l`.
const RATIO_FORM_RADIUS: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEvaluation {
    pub side: Side,
    pub n: i64,
    pub m: i64,
    pub z: Complex64,
    pub value: Complex64,
}

pub(crate) fn check_kernel_domain(z: Complex64) -> Result<()> {
    let r = z.norm();
    let ok = z.is_finite()
        && r > 0.0
        && r <= 1.0 + 1e-12
        && (z - 1.0).norm() > TOL_EDGE
        && (z + 1.0).norm() > TOL_EDGE;
    if ok {
        Ok(())
    } else {
        Err(SpectralError::KernelDomain(z))
    }
}

/// `G(k) = (z^k - z^-k) / (z - 1/z)` for `k >= 1`, else 0.
fn green_offset(k: i64, z: Complex64) -> Complex64 {
    if k <= 0 {
        return Complex64::new(0.0, 0.0);
    }
    if z.norm() <= RATIO_FORM_RADIUS {
        let zk = z.powi(k as i32);
        (zk - zk.inv()) / (z - z.inv())
    } else {
        // z^(k-1) + z^(k-3) + ... + z^(1-k), accumulated from the smallest power
        let z2 = z * z;
        let mut term = z.powi(1 - k as i32);
        let mut sum = Complex64::new(0.0, 0.0);
        for _ in 0..k {
            sum += term;
            term *= z2;
        }
        sum
    }
}

/// `G_r(n, n+k; z) z^k = z (1 + z^2 + ... + z^(2k-2))`, zero for `k <= 0`.
pub(crate) fn scaled_green(k: i64, z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = Complex64::new(0.0, 0.0);
    for _ in 0..k.max(0) {
        sum += term;
        term *= z2;
    }
    sum
}

/// Table of `scaled_green(k, z)` for `k = 0 ..= k_max`.
#[derive(Debug, Clone)]
pub(crate) struct ScaledGreenTable {
    values: Vec<Complex64>,
    z: Complex64,
}

impl ScaledGreenTable {
    pub(crate) fn new(z: Complex64, k_max: usize) -> Self {
        let z2 = z * z;
        let mut values = Vec::with_capacity(k_max + 1);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = z;
        values.push(sum);
        for _ in 0..k_max {
            sum += term;
            term *= z2;
            values.push(sum);
        }
        ScaledGreenTable { values, z }
    }

    pub(crate) fn get(&self, k: i64) -> Complex64 {
        if k <= 0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.values
                .get(k as usize)
                .copied()
                .unwrap_or_else(|| scaled_green(k, self.z))
        }
    }

    /// `T~_r(n, m)` with `k = m - n`.
    pub(crate) fn right(&self, op: &JacobiOperator, m: i64, k: i64) -> Complex64 {
        -op.b(m) * self.get(k) + (1.0 - op.ac(m - 1)) * self.z * self.get(k - 1)
    }

    /// `T~_l(n, m)` with `k = n - m`.
    pub(crate) fn left(&self, op: &JacobiOperator, m: i64, k: i64) -> Complex64 {
        -op.b(m) * self.get(k) + (1.0 - op.ac(m)) * self.z * self.get(k - 1)
    }
}

pub fn green_r(n: i64, m: i64, z: Complex64) -> Result<Complex64> {
    check_kernel_domain(z)?;
    Ok(green_offset(m - n, z))
}

pub fn green_l(n: i64, m: i64, z: Complex64) -> Result<Complex64> {
    check_kernel_domain(z)?;
    Ok(green_offset(n - m, z))
}

pub fn green(side: Side, n: i64, m: i64, z: Complex64) -> Result<KernelEvaluation> {
    let value = match side {
        Side::Right => green_r(n, m, z)?,
        Side::Left => green_l(n, m, z)?,
    };
    Ok(KernelEvaluation {
        side,
        n,
        m,
        z,
        value,
    })
}

/// Transition kernels
/// `T_r(n,m) = -b_m G_r(n,m) + (1 - a_{m-1}c_{m-1}) G_r(n,m-1)` and
/// `T_l(n,m) = -b_m G_l(n,m) + (1 - a_m c_m) G_l(n,m+1)`.
pub fn transition_kernel(
    op: &JacobiOperator,
    side: Side,
    n: i64,
    m: i64,
    z: Complex64,
) -> Result<Complex64> {
    check_kernel_domain(z)?;
    Ok(match side {
        Side::Right => {
            -op.b(m) * green_offset(m - n, z) + (1.0 - op.ac(m - 1)) * green_offset(m - 1 - n, z)
        }
        Side::Left => {
            -op.b(m) * green_offset(n - m, z) + (1.0 - op.ac(m)) * green_offset(n - m - 1, z)
        }
    })
}

/// `T~_r(n,m) = T_r(n,m) z^(m-n)` and `T~_l(n,m) = T_l(n,m) z^(n-m)`, both
/// evaluated as polynomials in `z`.
pub fn scaled_kernel(
    op: &JacobiOperator,
    side: Side,
    n: i64,
    m: i64,
    z: Complex64,
) -> Result<Complex64> {
    check_kernel_domain(z)?;
    Ok(match side {
        Side::Right => {
            -op.b(m) * scaled_green(m - n, z)
                + (1.0 - op.ac(m - 1)) * z * scaled_green(m - n - 1, z)
        }
        Side::Left => {
            -op.b(m) * scaled_green(n - m, z) + (1.0 - op.ac(m)) * z * scaled_green(n - m - 1, z)
        }
    })
}

/// Which argument of the kernel the second difference acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityVariable {
    First,
    Second,
}

/// Residual of `G(n,m-1) + G(n,m+1) - (z+1/z) G(n,m) - delta_{nm}` (or the same
/// with the shift acting on `n`), divided by `1 + max |term|`.
pub fn green_identity_residual(
    side: Side,
    variable: IdentityVariable,
    n: i64,
    m: i64,
    z: Complex64,
) -> Result<f64> {
    let g = |n: i64, m: i64| green(side, n, m, z).map(|e| e.value);
    let (lower, upper) = match variable {
        IdentityVariable::Second => (g(n, m - 1)?, g(n, m + 1)?),
        IdentityVariable::First => (g(n - 1, m)?, g(n + 1, m)?),
    };
    let middle = (z + z.inv()) * g(n, m)?;
    let delta = if n == m { 1.0 } else { 0.0 };
    let residual = (lower + upper - middle - delta).norm();
    let scale = 1.0 + lower.norm().max(upper.norm()).max(middle.norm());
    Ok(residual / scale)
}
