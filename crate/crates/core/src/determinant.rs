//! The perturbation determinant, computed two independent ways.
//!
//! The Wronskian route assembles
//! `U(z) = omega(z)/2 * (v+_0 w-_1 - v+_1 w-_0 + (1 - a_0 c_0) v+_1 w-_0)`
//! from the Jost solutions. The oracle route forms the finite matrix
//! `I + V R0(lambda)` on the window where `V = J - J0` acts and takes its
//! determinant by partially pivoted LU.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::jost::{
    reconstruct_u, solve_volterra_left_on, solve_volterra_right_on, TransitionFactors,
};
use crate::operator::{compute_gauge, zhukovsky_inverse, JacobiOperator, PerturbationGauge};

/// `beta_n (u+_n u-_{n+1} - u+_{n+1} u-_n)` evaluated at lattice site `n`.
pub fn wronskian_at(op: &JacobiOperator, z: Complex64, n: i64) -> Result<Complex64> {
    let window = (n, n + 1);
    let plus = reconstruct_u(op, &solve_volterra_right_on(op, z, window)?);
    let minus = reconstruct_u(op, &solve_volterra_left_on(op, z, window)?);
    let beta = TransitionFactors::new(op).beta(n);
    let (p0, p1) = (plus.values[0], plus.values[1]);
    let (m0, m1) = (minus.values[0], minus.values[1]);
    Ok(beta * (p0 * m1 - p1 * m0))
}

pub fn wronskian(op: &JacobiOperator, z: Complex64) -> Result<Complex64> {
    wronskian_at(op, z, 0)
}

/// `U(z)`, with `U(0) = 1`.
///
/// With `p_j = v+_j - z^j` and `q_j = w-_j - z^-j` the displayed combination
/// equals `1 + omega/2 (d1 - d2 + d3)`, where
/// `d1 = q_1 + p_0/z + p_0 q_1`, `d2 = p_1 + z q_0 + p_1 q_0` and
/// `d3 = (1 - a_0 c_0) v+_1 w-_0`. Summing the deviations keeps `U` exact for
/// the free operator and free of cancellation when `U` is close to 1.
pub fn determinant_u(op: &JacobiOperator, z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let plus = solve_volterra_right_on(op, z, (0, 1))?;
    let minus = solve_volterra_left_on(op, z, (0, 1))?;
    let p0 = plus.remainders[0];
    let p1 = z * plus.remainders[1];
    let q0 = minus.remainders[0];
    let q1 = minus.remainders[1] / z;
    let d1 = q1 + p0 / z + p0 * q1;
    let d2 = p1 + z * q0 + p1 * q0;
    let d3 = (1.0 - op.ac(0)) * plus.values[1] * minus.values[0];
    let omega = plus.param.omega();
    Ok(1.0 + omega / 2.0 * (d1 - d2 + d3))
}

/// The displayed product-free combination
/// `omega/2 (v+_0 w-_1 - v+_1 w-_0 + (1 - a_0 c_0) v+_1 w-_0)`, evaluated as written.
pub fn determinant_u_direct(op: &JacobiOperator, z: Complex64) -> Result<Complex64> {
    let plus = solve_volterra_right_on(op, z, (0, 1))?;
    let minus = solve_volterra_left_on(op, z, (0, 1))?;
    let (v0, v1) = (plus.values[0], plus.values[1]);
    let (w0, w1) = (minus.values[0], minus.values[1]);
    let omega = plus.param.omega();
    Ok(omega / 2.0 * (v0 * w1 - v1 * w0 + (1.0 - op.ac(0)) * v1 * w0))
}

/// `det(I + (J - J0)(J0 - lambda)^-1)` on the support window padded by one.
pub fn determinant_oracle(op: &JacobiOperator, lambda: Complex64) -> Result<Complex64> {
    let z = zhukovsky_inverse(lambda)?;
    let Some((lo, hi)) = op.support() else {
        return Ok(Complex64::new(1.0, 0.0));
    };
    let (w_lo, w_hi) = (lo - 1, hi + 1);
    let dim = (w_hi - w_lo + 1) as usize;
    let site = |i: usize| w_lo + i as i64;

    // V(k, k-1) = a_{k-1} - 1, V(k, k) = b_k, V(k, k+1) = c_k - 1
    let perturbation = DMatrix::from_fn(dim, dim, |i, j| {
        let (k, l) = (site(i), site(j));
        match l - k {
            -1 => op.a(l) - 1.0,
            0 => op.b(k),
            1 => op.c(k) - 1.0,
            _ => Complex64::new(0.0, 0.0),
        }
    });
    // free resolvent (J0 - lambda)^-1 (k, l) = z^|k-l| / (z - 1/z)
    let denom = (z - z.inv()).inv();
    let powers: Vec<Complex64> = (0..dim).map(|p| z.powi(p as i32) * denom).collect();
    let resolvent = DMatrix::from_fn(dim, dim, |i, j| powers[i.abs_diff(j)]);
    let matrix = DMatrix::identity(dim, dim) + perturbation * resolvent;
    Ok(matrix.determinant())
}

/// Signed slack (right side minus left side) of every determinant bound at one `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundMargins {
    /// `(4x + 5x^2) e^{4x} - |U - 1|`
    pub deviation: f64,
    /// `(1 + 4x + 5x^2) e^{4x} - |U|`
    pub modulus: f64,
    /// `e^{8x} - |U|`
    pub modulus_exp: f64,
    /// `16|z|/|1 - z^2| (Delta^1/2 + Delta) - log|U|`
    pub log_modulus: f64,
    /// `2(1 + |omega|) - |omega / z|`
    pub omega_ratio: f64,
}

impl BoundMargins {
    pub fn min(&self) -> f64 {
        [
            self.deviation,
            self.modulus,
            self.modulus_exp,
            self.log_modulus,
            self.omega_ratio,
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeterminantEvaluation {
    pub z: Complex64,
    pub u_value: Complex64,
    pub oracle_value: Option<Complex64>,
    /// `x = |omega(z)| (Delta^1/2 + Delta)`
    pub bound_x: f64,
    pub margins: BoundMargins,
}

impl DeterminantEvaluation {
    /// `|U - L| / (1 + |L|)` when the oracle was evaluated.
    pub fn route_discrepancy(&self) -> Option<f64> {
        self.oracle_value
            .map(|o| (self.u_value - o).norm() / (1.0 + o.norm()))
    }
}

fn margins(z: Complex64, u: Complex64, gauge: &PerturbationGauge) -> (f64, BoundMargins) {
    let size = gauge.root_plus_delta();
    let omega = crate::operator::omega(z).norm();
    let x = omega * size;
    let e4 = (4.0 * x).exp();
    let poly = 4.0 * x + 5.0 * x * x;
    let margins = BoundMargins {
        deviation: poly * e4 - (u - 1.0).norm(),
        modulus: (1.0 + poly) * e4 - u.norm(),
        modulus_exp: (8.0 * x).exp() - u.norm(),
        log_modulus: 16.0 * z.norm() / (1.0 - z * z).norm() * size - u.norm().ln(),
        omega_ratio: 2.0 * (1.0 + omega) - omega / z.norm(),
    };
    (x, margins)
}

pub fn evaluate_determinant(
    op: &JacobiOperator,
    z: Complex64,
    with_oracle: bool,
) -> Result<DeterminantEvaluation> {
    let gauge = compute_gauge(op);
    evaluate_with_gauge(op, &gauge, z, with_oracle)
}

fn evaluate_with_gauge(
    op: &JacobiOperator,
    gauge: &PerturbationGauge,
    z: Complex64,
    with_oracle: bool,
) -> Result<DeterminantEvaluation> {
    let u_value = determinant_u(op, z)?;
    let oracle_value = if with_oracle {
        Some(determinant_oracle(op, z + z.inv())?)
    } else {
        None
    };
    let (bound_x, margins) = margins(z, u_value, gauge);
    Ok(DeterminantEvaluation {
        z,
        u_value,
        oracle_value,
        bound_x,
        margins,
    })
}

/// Points `r_i e^{i theta_j}` with `r_i` evenly spaced in `[r_min, r_max]` and
/// `theta_j = 2 pi j / n_theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarGrid {
    pub n_r: usize,
    pub n_theta: usize,
    pub r_min: f64,
    pub r_max: f64,
}

impl PolarGrid {
    pub fn new(n_r: usize, n_theta: usize, r_min: f64, r_max: f64) -> Result<Self> {
        if n_r == 0 || n_theta == 0 {
            return Err(SpectralError::InvalidConfig(
                "grid needs at least one radius and one angle".into(),
            ));
        }
        if !(r_min > 0.0 && r_min <= r_max && r_max < 1.0) {
            return Err(SpectralError::InvalidConfig(format!(
                "grid radii must satisfy 0 < r_min <= r_max < 1 (got {r_min}, {r_max})"
            )));
        }
        Ok(PolarGrid {
            n_r,
            n_theta,
            r_min,
            r_max,
        })
    }

    pub fn points(&self) -> Vec<Complex64> {
        let step = if self.n_r > 1 {
            (self.r_max - self.r_min) / (self.n_r - 1) as f64
        } else {
            0.0
        };
        let mut out = Vec::with_capacity(self.n_r * self.n_theta);
        for i in 0..self.n_r {
            let r = self.r_min + step * i as f64;
            for j in 0..self.n_theta {
                let theta = std::f64::consts::TAU * j as f64 / self.n_theta as f64;
                out.push(Complex64::from_polar(r, theta));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RejectedPoint {
    pub z: Complex64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundAudit {
    pub evaluations: Vec<DeterminantEvaluation>,
    pub rejected: Vec<RejectedPoint>,
}

impl BoundAudit {
    pub fn min_margin(&self) -> f64 {
        self.evaluations
            .iter()
            .map(|e| e.margins.min())
            .fold(f64::INFINITY, f64::min)
    }

    /// Evaluations whose smallest margin is below `-slack`.
    pub fn violations(&self, slack: f64) -> impl Iterator<Item = &DeterminantEvaluation> {
        self.evaluations
            .iter()
            .filter(move |e| e.margins.min() < -slack)
    }
}

/// Evaluates `U` and every bound margin on `grid`, optionally with the oracle.
/// Points the solvers reject are listed rather than failing the audit.
pub fn audit_bounds(op: &JacobiOperator, grid: &[Complex64], with_oracle: bool) -> BoundAudit {
    let gauge = compute_gauge(op);
    let results: Vec<_> = grid
        .par_iter()
        .map(|&z| (z, evaluate_with_gauge(op, &gauge, z, with_oracle)))
        .collect();
    let mut evaluations = Vec::with_capacity(results.len());
    let mut rejected = Vec::new();
    for (z, r) in results {
        match r {
            Ok(e) => evaluations.push(e),
            Err(e) => rejected.push(RejectedPoint {
                z,
                reason: e.to_string(),
            }),
        }
    }
    BoundAudit {
        evaluations,
        rejected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_wronskian() {
        let w = wronskian(&JacobiOperator::free(), c(0.5, 0.0)).unwrap();
        assert!((w - 1.5).norm() < 1e-15);
    }

    #[test]
    fn single_site_wronskian_vanishes_at_eigenvalue() {
        // v+_0 = 1, v+_1 = z, w-_0 = 1, w-_1 = 1/z - b: W = 1/z - z - b = 0 at z = 1/2, b = 3/2
        let op = JacobiOperator::single_site(c(1.5, 0.0));
        let w = wronskian(&op, c(0.5, 0.0)).unwrap();
        assert!(w.norm() < 1e-15, "{w}");
        let z = c(0.3, 0.2);
        let w = wronskian(&op, z).unwrap();
        assert!((w - (z.inv() - z - 1.5)).norm() < 1e-14);
    }

    #[test]
    fn wronskian_is_independent_of_site() {
        let op = JacobiOperator::new(
            -2,
            vec![c(1.3, 0.2), c(0.7, -0.1), c(1.0, 0.4)],
            vec![c(0.2, 0.1), c(-0.5, 0.0), c(0.1, 0.3)],
            vec![c(0.8, 0.0), c(1.1, 0.2), c(0.9, -0.3)],
        )
        .unwrap();
        let z = c(0.4, -0.35);
        let w0 = wronskian_at(&op, z, 0).unwrap();
        for n in [-6, -3, -1, 1, 3, 7] {
            let wn = wronskian_at(&op, z, n).unwrap();
            assert!((wn - w0).norm() < 1e-12 * (1.0 + w0.norm()), "n = {n}");
        }
        // U = omega/2 * prod a_j * W
        let total_a = TransitionFactors::new(&op).total_a();
        let u = determinant_u(&op, z).unwrap();
        let omega = crate::operator::omega(z);
        assert!((u - omega / 2.0 * total_a * w0).norm() < 1e-12 * (1.0 + u.norm()));
    }

    #[test]
    fn deviation_form_matches_direct_form() {
        let op = JacobiOperator::new(
            -1,
            vec![c(1.3, 0.2), c(0.7, -0.1), c(1.0, 0.4)],
            vec![c(0.2, 0.1), c(-0.5, 0.0), c(0.1, 0.3)],
            vec![c(0.8, 0.0), c(1.1, 0.2), c(0.9, -0.3)],
        )
        .unwrap();
        for z in [c(0.5, 0.1), c(-0.3, -0.8), c(0.05, 0.02)] {
            let a = determinant_u(&op, z).unwrap();
            let b = determinant_u_direct(&op, z).unwrap();
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn free_determinant_is_one() {
        let op = JacobiOperator::free();
        for z in [c(0.5, 0.0), c(-0.2, 0.9), c(0.0, 0.0)] {
            assert_eq!(determinant_u(&op, z).unwrap(), c(1.0, 0.0));
        }
        assert_eq!(determinant_oracle(&op, c(3.0, 1.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn single_site_determinant() {
        let op = JacobiOperator::single_site(c(1.5, 0.0));
        assert!(determinant_u(&op, c(0.5, 0.0)).unwrap().norm() < 1e-15);
        let b = c(0.6, -0.8);
        let op = JacobiOperator::single_site(b);
        for z in [c(0.3, 0.1), c(-0.7, 0.5), c(0.05, -0.9)] {
            let expected = 1.0 + b * z / (z * z - 1.0);
            let u = determinant_u(&op, z).unwrap();
            let o = determinant_oracle(&op, z + z.inv()).unwrap();
            assert!((u - expected).norm() < 1e-14);
            assert!((o - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn gauge_class_of_free_operator_has_unit_determinant() {
        let op = JacobiOperator::new(0, vec![c(2.0, 0.0)], vec![c(0.0, 0.0)], vec![c(0.5, 0.0)])
            .unwrap();
        let z = c(0.45, 0.3);
        assert!((determinant_u(&op, z).unwrap() - 1.0).norm() < 1e-15);
        assert!((determinant_oracle(&op, z + z.inv()).unwrap() - 1.0).norm() < 1e-13);
    }

    #[test]
    fn oracle_rejects_band() {
        let op = JacobiOperator::single_site(c(1.0, 0.0));
        assert!(matches!(
            determinant_oracle(&op, c(1.0, 0.0)),
            Err(SpectralError::NearBand { .. })
        ));
    }

    #[test]
    fn free_operator_margins_equal_right_sides() {
        let audit = audit_bounds(&JacobiOperator::free(), &[c(0.3, 0.4)], false);
        let m = audit.evaluations[0].margins;
        assert_eq!(m.deviation, 0.0);
        assert_eq!(m.modulus, 0.0);
        assert_eq!(m.log_modulus, 0.0);
    }

    #[test]
    fn single_site_polar_grid_audit() {
        let op = JacobiOperator::single_site(c(1.5, 0.0));
        let grid = PolarGrid::new(64, 64, 0.01, 0.99).unwrap().points();
        let audit = audit_bounds(&op, &grid, false);
        assert!(audit.rejected.is_empty());
        assert_eq!(audit.evaluations.len(), 64 * 64);
        assert!(audit.min_margin() >= 0.0);
    }

    #[test]
    fn grid_validation() {
        assert!(PolarGrid::new(0, 3, 0.1, 0.5).is_err());
        assert!(PolarGrid::new(3, 3, 0.0, 0.5).is_err());
        assert!(PolarGrid::new(3, 3, 0.6, 0.5).is_err());
        assert!(PolarGrid::new(3, 3, 0.1, 1.0).is_err());
        let pts = PolarGrid::new(1, 4, 0.5, 0.5).unwrap().points();
        assert_eq!(pts.len(), 4);
        assert!((pts[1] - c(0.0, 0.5)).norm() < 1e-15);
    }
}
