//! Jost solutions through the discrete Volterra equations.
//!
//! With `f_n = v+_n z^-n - 1` the right equation reads
//! `f_n = sum_{m>n} T~_r(n,m) (1 + f_m)`. For a finitely supported perturbation
//! the scaled kernel is strictly triangular and vanishes once `m` leaves the
//! support, so a single backward sweep solves it exactly. The left equation
//! is swept forward in the same way.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::kernels::ScaledGreenTable;
use crate::operator::{compute_gauge, JacobiOperator, SpectralParameter};

/// Solvers reject `z` closer than this to `+-1`.
pub const EDGE_EXCLUSION: f64 = 1e-6;

/// Margin added around the support (and around `{0, 1}`) by the default window.
pub const WINDOW_MARGIN: i64 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JostSide {
    /// `v+`, normalised at `+infinity`.
    Plus,
    /// `w-`, normalised at `-infinity`.
    Minus,
}

/// A complex sequence on a contiguous block of lattice sites.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeSequence {
    pub start: i64,
    pub values: Vec<Complex64>,
}

impl LatticeSequence {
    pub fn new(start: i64, values: Vec<Complex64>) -> Self {
        LatticeSequence { start, values }
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Option<Complex64> {
        let i = n - self.start;
        (i >= 0)
            .then(|| self.values.get(i as usize).copied())
            .flatten()
    }

    pub fn indexed(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start + i as i64, v))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JostSolution {
    pub side: JostSide,
    pub n_min: i64,
    pub n_max: i64,
    /// `v+_n` or `w-_n` on `n_min ..= n_max`.
    pub values: Vec<Complex64>,
    /// `f^r_n = v+_n z^-n - 1` or `f^l_n = w-_n z^n - 1`.
    pub remainders: Vec<Complex64>,
    pub param: SpectralParameter,
}

impl JostSolution {
    fn slot(&self, n: i64) -> Result<usize> {
        if n < self.n_min || n > self.n_max {
            return Err(SpectralError::OutsideWindow {
                index: n,
                lo: self.n_min,
                hi: self.n_max,
            });
        }
        Ok((n - self.n_min) as usize)
    }

    pub fn value(&self, n: i64) -> Result<Complex64> {
        self.slot(n).map(|i| self.values[i])
    }

    pub fn remainder(&self, n: i64) -> Result<Complex64> {
        self.slot(n).map(|i| self.remainders[i])
    }

    pub fn z(&self) -> Complex64 {
        self.param.z()
    }

    pub fn sequence(&self) -> LatticeSequence {
        LatticeSequence::new(self.n_min, self.values.clone())
    }
}

/// Validates `z` for the solvers: inside the open disk and away from `+-1`.
pub fn solver_parameter(z: Complex64) -> Result<SpectralParameter> {
    let param = SpectralParameter::new(z)?;
    if (z - 1.0).norm() < EDGE_EXCLUSION || (z + 1.0).norm() < EDGE_EXCLUSION {
        return Err(SpectralError::NearBandEdge {
            z,
            tol: EDGE_EXCLUSION,
        });
    }
    Ok(param)
}

/// Default evaluation window: the support together with `{0, 1}`, widened by
/// [`WINDOW_MARGIN`] on both sides.
pub fn default_window(op: &JacobiOperator) -> (i64, i64) {
    let (lo, hi) = op.support().unwrap_or((0, 1));
    (lo.min(0) - WINDOW_MARGIN, hi.max(1) + WINDOW_MARGIN)
}

fn check_window(window: (i64, i64)) -> Result<()> {
    if window.1 < window.0 {
        return Err(SpectralError::InvalidConfig(format!(
            "empty window [{}, {}]",
            window.0, window.1
        )));
    }
    Ok(())
}

pub fn solve_volterra_right(op: &JacobiOperator, z: Complex64) -> Result<JostSolution> {
    solve_volterra_right_on(op, z, default_window(op))
}

pub fn solve_volterra_left(op: &JacobiOperator, z: Complex64) -> Result<JostSolution> {
    solve_volterra_left_on(op, z, default_window(op))
}

/// Backward substitution for `f^r` on `window`.
pub fn solve_volterra_right_on(
    op: &JacobiOperator,
    z: Complex64,
    window: (i64, i64),
) -> Result<JostSolution> {
    let param = solver_parameter(z)?;
    check_window(window)?;
    let (n_min, n_max) = window;
    let len = (n_max - n_min + 1) as usize;
    let mut remainders = vec![Complex64::new(0.0, 0.0); len];

    if let Some((lo, hi)) = op.support() {
        // f vanishes for n >= hi; below that the kernel reaches up to m = hi + 1
        let bottom = n_min.min(hi);
        let top = hi + 1;
        let table = ScaledGreenTable::new(z, (top - bottom) as usize);
        let mut f = vec![Complex64::new(0.0, 0.0); (top - bottom + 1) as usize];
        for n in (bottom..hi).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in (n + 1).max(lo)..=top {
                acc += table.right(op, m, m - n) * (1.0 + f[(m - bottom) as usize]);
            }
            f[(n - bottom) as usize] = acc;
        }
        for n in n_min..=n_max.min(top) {
            remainders[(n - n_min) as usize] = f[(n - bottom) as usize];
        }
    }

    let values = (n_min..=n_max)
        .zip(&remainders)
        .map(|(n, f)| z.powi(n as i32) * (1.0 + f))
        .collect();
    Ok(JostSolution {
        side: JostSide::Plus,
        n_min,
        n_max,
        values,
        remainders,
        param,
    })
}

/// Forward substitution for `f^l` on `window`.
pub fn solve_volterra_left_on(
    op: &JacobiOperator,
    z: Complex64,
    window: (i64, i64),
) -> Result<JostSolution> {
    let param = solver_parameter(z)?;
    check_window(window)?;
    let (n_min, n_max) = window;
    let len = (n_max - n_min + 1) as usize;
    let mut remainders = vec![Complex64::new(0.0, 0.0); len];

    if let Some((lo, hi)) = op.support() {
        // f vanishes for n <= lo; the kernel only sees m in [lo, hi]
        let top = n_max.max(lo);
        let table = ScaledGreenTable::new(z, (top - lo) as usize);
        let mut f = vec![Complex64::new(0.0, 0.0); (top - lo + 1) as usize];
        for n in lo + 1..=top {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in lo..=(n - 1).min(hi) {
                acc += table.left(op, m, n - m) * (1.0 + f[(m - lo) as usize]);
            }
            f[(n - lo) as usize] = acc;
        }
        for n in lo.max(n_min)..=n_max {
            remainders[(n - n_min) as usize] = f[(n - lo) as usize];
        }
    }

    let values = (n_min..=n_max)
        .zip(&remainders)
        .map(|(n, f)| z.powi(-(n as i32)) * (1.0 + f))
        .collect();
    Ok(JostSolution {
        side: JostSide::Minus,
        n_min,
        n_max,
        values,
        remainders,
        param,
    })
}

/// One residual-correction pass: recomputes every remainder from the
/// Volterra equation using the current remainders on the right-hand side.
/// Remainders beyond the stored window are taken from the free tail (zero)
/// on the normalised side and must otherwise lie inside the window.
pub fn volterra_correction(op: &JacobiOperator, sol: &JostSolution) -> Result<JostSolution> {
    let z = sol.z();
    let mut out = sol.clone();
    let Some((lo, hi)) = op.support() else {
        return Ok(out);
    };
    let table = ScaledGreenTable::new(z, (sol.n_max - sol.n_min + hi - lo + 4) as usize);
    let remainder = |m: i64| -> Result<Complex64> {
        match sol.side {
            JostSide::Plus if m >= hi => Ok(Complex64::new(0.0, 0.0)),
            JostSide::Minus if m <= lo => Ok(Complex64::new(0.0, 0.0)),
            _ => sol.remainder(m),
        }
    };
    for n in sol.n_min..=sol.n_max {
        let mut acc = Complex64::new(0.0, 0.0);
        match sol.side {
            JostSide::Plus => {
                for m in (n + 1).max(lo)..=hi + 1 {
                    acc += table.right(op, m, m - n) * (1.0 + remainder(m)?);
                }
            }
            JostSide::Minus => {
                for m in lo..=(n - 1).min(hi) {
                    acc += table.left(op, m, n - m) * (1.0 + remainder(m)?);
                }
            }
        }
        let i = (n - sol.n_min) as usize;
        out.remainders[i] = acc;
        let power = match sol.side {
            JostSide::Plus => z.powi(n as i32),
            JostSide::Minus => z.powi(-(n as i32)),
        };
        out.values[i] = power * (1.0 + acc);
    }
    Ok(out)
}

/// Products that convert between solutions of the three companion recurrences.
///
/// `alpha_n = prod_{j<n} a_j`, `gamma_n = prod_{j<n} 1/c_j` and
/// `beta_n = a_n prod_{j<=n} c_j / a_j`, all truncated to the stored window.
#[derive(Debug, Clone)]
pub struct TransitionFactors<'a> {
    op: &'a JacobiOperator,
}

impl<'a> TransitionFactors<'a> {
    pub fn new(op: &'a JacobiOperator) -> Self {
        TransitionFactors { op }
    }

    fn product(&self, from: i64, to: i64, f: impl Fn(i64) -> Complex64) -> Complex64 {
        let Some((lo, hi)) = self.op.support() else {
            return Complex64::new(1.0, 0.0);
        };
        (from.max(lo)..=to.min(hi)).map(f).product()
    }

    pub fn alpha(&self, n: i64) -> Complex64 {
        self.product(i64::MIN, n - 1, |j| self.op.a(j))
    }

    pub fn gamma(&self, n: i64) -> Complex64 {
        self.product(i64::MIN, n - 1, |j| self.op.c(j).inv())
    }

    pub fn beta(&self, n: i64) -> Complex64 {
        self.op.a(n) * self.product(i64::MIN, n, |j| self.op.c(j) / self.op.a(j))
    }

    /// `prod_{j>=n} 1/a_j`, the factor taking `v+` to `u+`.
    pub fn upper_inverse_a(&self, n: i64) -> Complex64 {
        self.product(n, i64::MAX, |j| self.op.a(j).inv())
    }

    /// `prod_j a_j` over the whole lattice.
    pub fn total_a(&self) -> Complex64 {
        self.product(i64::MIN, i64::MAX, |j| self.op.a(j))
    }
}

/// Jost solutions `u+-` of the original recurrence:
/// `u+_n = prod_{j>=n} a_j^-1 v+_n` and `u-_n = prod_{j<n} c_j^-1 w-_n`.
pub fn reconstruct_u(op: &JacobiOperator, jost: &JostSolution) -> LatticeSequence {
    let factors = TransitionFactors::new(op);
    let values = (jost.n_min..=jost.n_max)
        .zip(&jost.values)
        .map(|(n, v)| match jost.side {
            JostSide::Plus => factors.upper_inverse_a(n) * v,
            JostSide::Minus => factors.gamma(n) * v,
        })
        .collect();
    LatticeSequence::new(jost.n_min, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `a_{k-1} u_{k-1} + b_k u_k + c_k u_{k+1} = lambda u_k`
    Main,
    /// `v_{k-1} + b_k v_k + a_k c_k v_{k+1} = lambda v_k`
    Der,
    /// `a_{k-1} c_{k-1} w_{k-1} + b_k w_k + w_{k+1} = lambda w_k`
    Del,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecurrenceResidual {
    /// `max_k |lhs_k - lambda u_k|`.
    pub absolute: f64,
    /// Same, each row divided by the sum of the moduli of its four terms.
    pub relative: f64,
}

pub fn recurrence_residual(
    op: &JacobiOperator,
    seq: &LatticeSequence,
    z: Complex64,
    relation: Relation,
) -> Result<RecurrenceResidual> {
    if seq.values.len() < 3 {
        return Err(SpectralError::WindowTooSmall(seq.values.len()));
    }
    let lambda = z + z.inv();
    let mut absolute = 0.0f64;
    let mut relative = 0.0f64;
    for (i, w) in seq.values.windows(3).enumerate() {
        let k = seq.start + i as i64 + 1;
        let (prev, mid, next) = (w[0], w[1], w[2]);
        let terms = match relation {
            Relation::Main => [op.a(k - 1) * prev, op.b(k) * mid, op.c(k) * next],
            Relation::Der => [prev, op.b(k) * mid, op.ac(k) * next],
            Relation::Del => [op.ac(k - 1) * prev, op.b(k) * mid, next],
        };
        let rhs = lambda * mid;
        let res = (terms[0] + terms[1] + terms[2] - rhs).norm();
        let scale: f64 = terms.iter().map(|t| t.norm()).sum::<f64>() + rhs.norm();
        absolute = absolute.max(res);
        if scale > 0.0 {
            relative = relative.max(res / scale);
        }
    }
    Ok(RecurrenceResidual { absolute, relative })
}

/// One lattice site of a [`JostProfile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JostRow {
    pub n: i64,
    pub v_plus: Complex64,
    pub w_minus: Complex64,
    pub u_plus: Complex64,
    pub u_minus: Complex64,
    /// `|z|^n t e^t - |v+_n - z^n|` with `t = |omega| Delta^r_n`, divided by `|z|^n`.
    pub bound_margin_plus: f64,
    /// Mirror margin for `w-_n`, divided by `|z|^-n`.
    pub bound_margin_minus: f64,
}

/// Both Jost solutions on the default window, with recurrence residuals and
/// the margins of the a-priori bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JostProfile {
    pub z: Complex64,
    pub lambda: Complex64,
    pub rows: Vec<JostRow>,
    pub residual_der: RecurrenceResidual,
    pub residual_del: RecurrenceResidual,
    pub residual_main_plus: RecurrenceResidual,
    pub residual_main_minus: RecurrenceResidual,
}

impl JostProfile {
    pub fn min_margin(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.bound_margin_plus.min(r.bound_margin_minus))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn jost_profile(op: &JacobiOperator, z: Complex64) -> Result<JostProfile> {
    let plus = solve_volterra_right(op, z)?;
    let minus = solve_volterra_left(op, z)?;
    let u_plus = reconstruct_u(op, &plus);
    let u_minus = reconstruct_u(op, &minus);
    let gauge = compute_gauge(op);
    let w = plus.param.omega().norm();
    let margin = |dev: f64, scale: f64, tail: f64| {
        let t = w * tail;
        (scale * t * t.exp() - dev) / scale
    };
    let rows = (plus.n_min..=plus.n_max)
        .enumerate()
        .map(|(i, n)| {
            let (v, wm) = (plus.values[i], minus.values[i]);
            JostRow {
                n,
                v_plus: v,
                w_minus: wm,
                u_plus: u_plus.values[i],
                u_minus: u_minus.values[i],
                bound_margin_plus: margin(
                    (v - z.powi(n as i32)).norm(),
                    z.norm().powi(n as i32),
                    gauge.tail_r(n),
                ),
                bound_margin_minus: margin(
                    (wm - z.powi(-n as i32)).norm(),
                    z.norm().powi(-n as i32),
                    gauge.tail_l(n),
                ),
            }
        })
        .collect();
    Ok(JostProfile {
        z,
        lambda: plus.param.lambda(),
        rows,
        residual_der: recurrence_residual(op, &plus.sequence(), z, Relation::Der)?,
        residual_del: recurrence_residual(op, &minus.sequence(), z, Relation::Del)?,
        residual_main_plus: recurrence_residual(op, &u_plus, z, Relation::Main)?,
        residual_main_minus: recurrence_residual(op, &u_minus, z, Relation::Main)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn profile_margins_are_nonnegative() {
        let op = JacobiOperator::new(
            -2,
            vec![c(1.2, 0.1), c(0.8, 0.0), c(1.0, -0.3)],
            vec![c(0.4, -0.2), c(-1.0, 0.5), c(0.3, 0.0)],
            vec![c(0.7, 0.2), c(1.1, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        let p = jost_profile(&op, c(0.4, 0.5)).unwrap();
        assert_eq!(p.rows.first().unwrap().n, -7);
        assert_eq!(p.rows.last().unwrap().n, 6);
        assert!(p.min_margin() >= -1e-12, "{}", p.min_margin());
        assert!(p.residual_main_plus.relative < 1e-13);
        assert!(p.residual_main_minus.relative < 1e-13);
    }

    #[test]
    fn free_operator_gives_pure_powers() {
        let z = c(0.3, -0.5);
        let op = JacobiOperator::free();
        let plus = solve_volterra_right(&op, z).unwrap();
        let minus = solve_volterra_left(&op, z).unwrap();
        for n in plus.n_min..=plus.n_max {
            assert_eq!(plus.value(n).unwrap(), z.powi(n as i32));
            assert_eq!(minus.value(n).unwrap(), z.powi(-(n as i32)));
        }
        let u = reconstruct_u(&op, &plus);
        assert_eq!(u.values, plus.values);
    }

    #[test]
    fn single_site_closed_forms() {
        let b = c(0.7, 0.4);
        let z = c(0.45, 0.2);
        let op = JacobiOperator::single_site(b);
        let plus = solve_volterra_right(&op, z).unwrap();
        assert_eq!(plus.value(0).unwrap(), c(1.0, 0.0));
        assert!((plus.remainder(-1).unwrap() + b * z).norm() < 1e-15);
        assert!((plus.value(-1).unwrap() - (z.inv() - b)).norm() < 1e-14);
        let minus = solve_volterra_left(&op, z).unwrap();
        assert_eq!(minus.value(0).unwrap(), c(1.0, 0.0));
        assert!((minus.remainder(1).unwrap() + b * z).norm() < 1e-15);
        assert!((minus.value(1).unwrap() - (z.inv() - b)).norm() < 1e-14);
    }

    #[test]
    fn hand_checked_recurrence_row() {
        let b = 1.5;
        let z = c(0.5, 0.0);
        let op = JacobiOperator::single_site(c(b, 0.0));
        let plus = solve_volterra_right(&op, z).unwrap();
        // row k = 0 of the der relation: (1/z - b) + b * 1 + z = z + 1/z
        let row = plus.value(-1).unwrap() + b * plus.value(0).unwrap() + plus.value(1).unwrap();
        assert!((row - (z + z.inv())).norm() < 1e-15);
        let res = recurrence_residual(&op, &plus.sequence(), z, Relation::Der).unwrap();
        assert!(res.absolute < 1e-12);
    }

    #[test]
    fn remainders_vanish_on_the_normalised_side() {
        let op = JacobiOperator::new(
            2,
            vec![c(1.2, 0.0), c(0.8, 0.3), c(1.0, -0.2)],
            vec![c(0.5, 0.0), c(-0.2, 0.1), c(0.0, 0.3)],
            vec![c(0.9, 0.1), c(1.0, 0.0), c(1.4, 0.0)],
        )
        .unwrap();
        let z = c(-0.6, 0.3);
        let plus = solve_volterra_right(&op, z).unwrap();
        for n in 4..=plus.n_max {
            assert_eq!(plus.remainder(n).unwrap(), c(0.0, 0.0));
        }
        assert!(plus.remainder(3).unwrap().norm() > 0.0);
        let minus = solve_volterra_left(&op, z).unwrap();
        for n in minus.n_min..=2 {
            assert_eq!(minus.remainder(n).unwrap(), c(0.0, 0.0));
        }
        assert!(minus.remainder(3).unwrap().norm() > 0.0);
        for (seq, rel) in [
            (plus.sequence(), Relation::Der),
            (minus.sequence(), Relation::Del),
        ] {
            let r = recurrence_residual(&op, &seq, z, rel).unwrap();
            assert!(r.relative < 1e-13, "{rel:?}: {r:?}");
        }
    }

    #[test]
    fn solvers_reject_edge_points() {
        let op = JacobiOperator::single_site(c(1.0, 0.0));
        assert!(matches!(
            solve_volterra_right(&op, c(1.0 - 1e-7, 0.0)),
            Err(SpectralError::NearBandEdge { .. })
        ));
        assert!(matches!(
            solve_volterra_left(&op, c(0.0, 0.0)),
            Err(SpectralError::OutsideDisk(_))
        ));
        assert!(solve_volterra_left(&op, c(0.0, 0.9999999)).is_ok());
    }

    #[test]
    fn correction_pass_is_idempotent() {
        let op = JacobiOperator::new(
            -1,
            vec![c(1.1, 0.3), c(0.7, 0.0)],
            vec![c(0.5, -0.5), c(0.2, 0.0)],
            vec![c(1.0, 0.0), c(0.6, 0.6)],
        )
        .unwrap();
        let z = c(0.2, 0.7);
        for sol in [
            solve_volterra_right(&op, z).unwrap(),
            solve_volterra_left(&op, z).unwrap(),
        ] {
            let again = volterra_correction(&op, &sol).unwrap();
            for (x, y) in sol.values.iter().zip(&again.values) {
                assert!((x - y).norm() <= 1e-15 * x.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn reconstructed_u_solves_main_relation() {
        let op = JacobiOperator::new(
            0,
            vec![c(2.0, 0.0), c(0.9, 0.1)],
            vec![c(0.0, 0.0), c(0.4, 0.0)],
            vec![c(0.5, 0.0), c(1.2, -0.3)],
        )
        .unwrap();
        let z = c(0.35, -0.4);
        for sol in [
            solve_volterra_right(&op, z).unwrap(),
            solve_volterra_left(&op, z).unwrap(),
        ] {
            let u = reconstruct_u(&op, &sol);
            let r = recurrence_residual(&op, &u, z, Relation::Main).unwrap();
            assert!(r.relative < 1e-13, "{r:?}");
        }
    }

    #[test]
    fn gauge_of_free_operator_changes_u_but_not_v() {
        let op = JacobiOperator::new(0, vec![c(2.0, 0.0)], vec![c(0.0, 0.0)], vec![c(0.5, 0.0)])
            .unwrap();
        let z = c(0.5, 0.1);
        let plus = solve_volterra_right(&op, z).unwrap();
        for n in plus.n_min..=plus.n_max {
            assert_eq!(plus.value(n).unwrap(), z.powi(n as i32));
        }
        let u = reconstruct_u(&op, &plus);
        // u+_n = prod_{j>=n} a_j^-1 v+_n: halved for n <= 0, untouched above
        assert!((u.get(0).unwrap() - 0.5).norm() < 1e-15);
        assert!((u.get(-2).unwrap() - 0.5 * z.powi(-2)).norm() < 1e-14);
        assert_eq!(u.get(1).unwrap(), z);
    }

    #[test]
    fn transition_factors() {
        let op = JacobiOperator::new(
            -1,
            vec![c(2.0, 0.0), c(3.0, 0.0)],
            vec![c(0.0, 0.0); 2],
            vec![c(0.5, 0.0), c(4.0, 0.0)],
        )
        .unwrap();
        let f = TransitionFactors::new(&op);
        assert_eq!(f.alpha(-1), c(1.0, 0.0));
        assert_eq!(f.alpha(1), c(6.0, 0.0));
        assert_eq!(f.gamma(1), c(0.5, 0.0));
        assert_eq!(f.total_a(), c(6.0, 0.0));
        assert_eq!(f.upper_inverse_a(0), c(1.0 / 3.0, 0.0));
        // constant outside the window
        assert_eq!(f.beta(5), f.beta(9));
        assert_eq!(f.beta(-5), f.beta(-9));
    }

    #[test]
    fn residual_requires_three_points() {
        let op = JacobiOperator::free();
        let seq = LatticeSequence::new(0, vec![c(1.0, 0.0); 2]);
        assert_eq!(
            recurrence_residual(&op, &seq, c(0.5, 0.0), Relation::Main),
            Err(SpectralError::WindowTooSmall(2))
        );
    }
}
