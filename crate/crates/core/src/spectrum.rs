//! Zeros of the perturbation determinant in the punctured unit disk.
//!
//! The annulus `r_min <= |z| <= r_max` is tiled by polar boxes
//! `[r0, r1] x [theta0, theta1]`. For each box the argument principle counts
//! the zeros inside from the accumulated phase of `U` along its boundary; the
//! phase is integrated by adaptive bisection until every step is small and
//! agrees with its two halves. Boxes holding no zero are dropped, the others
//! are split until they hold a single zero, which is then polished by Newton
//! iteration with a central-difference derivative.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::determinant::{
    audit_bounds, determinant_oracle, determinant_u, DeterminantEvaluation, RejectedPoint,
};
use crate::eigen::{finite_section_eigenvalues, FiniteSectionResult};
use crate::error::{Result, SpectralError};
use crate::operator::{dist_to_band, zhukovsky, JacobiOperator};

/// Angular offset of the first box edge, chosen so that no edge lies on the
/// real or imaginary axis where zeros of symmetric operators sit.
const THETA_OFFSET: f64 = 0.137_035_999;

/// Split fractions tried in turn when a child box boundary runs through a zero.
const SPLIT_FRACTIONS: [(f64, f64); 4] = [
    (0.5, 0.5),
    (0.4381966, 0.5618034),
    (0.5739, 0.4173),
    (0.3312, 0.6245),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FinderConfig {
    pub r_min: f64,
    pub r_max: f64,
    /// Boxes are not split below this diameter.
    pub min_diameter: f64,
    pub initial_sectors: usize,
    pub max_depth: usize,
    /// Uniform samples per box edge before adaptive refinement.
    pub edge_samples: usize,
    /// Maximum bisection depth of one boundary segment.
    pub max_bisections: usize,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Also count zeros in the shell `r_max < |z| < 1 - 2e-6` and report them
    /// as unresolved.
    pub probe_boundary: bool,
}

impl Default for FinderConfig {
    fn default() -> Self {
        FinderConfig {
            r_min: 1e-3,
            r_max: 1.0 - 1e-4,
            min_diameter: 1e-8,
            initial_sectors: 8,
            max_depth: 64,
            edge_samples: 16,
            max_bisections: 40,
            newton_tol: 1e-14,
            newton_max_iter: 60,
            probe_boundary: true,
        }
    }
}

impl FinderConfig {
    fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max < 1.0) {
            return Err(SpectralError::InvalidConfig(format!(
                "annulus must satisfy 0 < r_min < r_max < 1 (got {}, {})",
                self.r_min, self.r_max
            )));
        }
        if self.initial_sectors == 0 || self.edge_samples < 2 {
            return Err(SpectralError::InvalidConfig(
                "need at least one sector and two samples per edge".into(),
            ));
        }
        Ok(())
    }
}

/// A zero of `U` (an eigenvalue `lambda = z + 1/z` of the operator).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub z: Complex64,
    pub multiplicity: u32,
    pub lambda: Complex64,
    /// `|U(z)|` at the refined point.
    pub residual: f64,
    /// `|U'(z)|` from the central difference, the local scale of `U`.
    pub derivative: f64,
}

/// Polar box `[r0, r1] x [theta0, theta1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarBox {
    pub r0: f64,
    pub r1: f64,
    pub theta0: f64,
    pub theta1: f64,
}

impl PolarBox {
    fn is_full_turn(&self) -> bool {
        self.theta1 - self.theta0 >= TAU - 1e-12
    }

    pub fn diameter(&self) -> f64 {
        let dr = self.r1 - self.r0;
        let arc = self.r1 * (self.theta1 - self.theta0).min(PI);
        dr.hypot(arc)
    }

    pub fn center(&self) -> Complex64 {
        Complex64::from_polar(0.5 * (self.r0 + self.r1), 0.5 * (self.theta0 + self.theta1))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        if r < self.r0 || r > self.r1 {
            return false;
        }
        if self.is_full_turn() {
            return true;
        }
        let theta = (z.arg() - self.theta0).rem_euclid(TAU);
        theta <= self.theta1 - self.theta0
    }

    fn split(&self, fr: f64, ft: f64) -> [PolarBox; 4] {
        let rm = self.r0 + fr * (self.r1 - self.r0);
        let tm = self.theta0 + ft * (self.theta1 - self.theta0);
        [
            PolarBox {
                r0: self.r0,
                r1: rm,
                theta0: self.theta0,
                theta1: tm,
            },
            PolarBox {
                r0: self.r0,
                r1: rm,
                theta0: tm,
                theta1: self.theta1,
            },
            PolarBox {
                r0: rm,
                r1: self.r1,
                theta0: self.theta0,
                theta1: tm,
            },
            PolarBox {
                r0: rm,
                r1: self.r1,
                theta0: tm,
                theta1: self.theta1,
            },
        ]
    }

    fn sectors(&self, count: usize) -> Vec<PolarBox> {
        let width = (self.theta1 - self.theta0) / count as f64;
        (0..count)
            .map(|i| PolarBox {
                r0: self.r0,
                r1: self.r1,
                theta0: self.theta0 + width * i as f64,
                theta1: self.theta0 + width * (i + 1) as f64,
            })
            .collect()
    }
}

/// A region where the finder could not certify the zeros.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnresolvedRegion {
    pub region: PolarBox,
    /// Net zero count from the boundary phase, when it could be computed.
    pub winding: Option<i64>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroSearch {
    /// Zeros sorted by `Re lambda`, then `Im lambda`.
    pub zeros: Vec<SpectralPoint>,
    pub unresolved: Vec<UnresolvedRegion>,
    /// Winding of `U` around the whole annulus.
    pub total_winding: i64,
}

impl ZeroSearch {
    pub fn multiplicity_total(&self) -> i64 {
        self.zeros.iter().map(|p| p.multiplicity as i64).sum()
    }

    /// Winding carried by unresolved boxes inside the annulus.
    pub fn unresolved_winding(&self) -> i64 {
        self.unresolved
            .iter()
            .filter(|u| u.reason != NEAR_BOUNDARY && u.reason != INSIDE_INNER)
            .filter_map(|u| u.winding)
            .sum()
    }
}

const NEAR_BOUNDARY: &str = "near-boundary zeros beyond r_max";
const INSIDE_INNER: &str = "zeros inside r_min";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WindingFailure {
    Evaluation,
    Unstable,
}

struct Finder<'a, F> {
    f: &'a F,
    cfg: FinderConfig,
}

impl<'a, F> Finder<'a, F>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    fn eval(&self, z: Complex64) -> std::result::Result<Complex64, WindingFailure> {
        match (self.f)(z) {
            Ok(v) if v.is_finite() && v.norm() > 0.0 => Ok(v),
            _ => Err(WindingFailure::Evaluation),
        }
    }

    /// Phase accumulated along `path(t)`, `t` in `[0, 1]`.
    fn edge_phase(
        &self,
        path: &dyn Fn(f64) -> Complex64,
    ) -> std::result::Result<f64, WindingFailure> {
        let n = self.cfg.edge_samples;
        let mut total = 0.0;
        let mut t_prev = 0.0;
        let mut f_prev = self.eval(path(0.0))?;
        for i in 1..=n {
            let t = i as f64 / n as f64;
            let f_next = self.eval(path(t))?;
            total += self.segment_phase(path, t_prev, f_prev, t, f_next, 0)?;
            t_prev = t;
            f_prev = f_next;
        }
        Ok(total)
    }

    fn segment_phase(
        &self,
        path: &dyn Fn(f64) -> Complex64,
        t0: f64,
        f0: Complex64,
        t1: f64,
        f1: Complex64,
        depth: usize,
    ) -> std::result::Result<f64, WindingFailure> {
        let whole = (f1 / f0).arg();
        let tm = 0.5 * (t0 + t1);
        let fm = self.eval(path(tm))?;
        let left = (fm / f0).arg();
        let right = (f1 / fm).arg();
        let settled =
            left.abs() < PI / 4.0 && right.abs() < PI / 4.0 && (left + right - whole).abs() < 1e-9;
        if settled {
            return Ok(left + right);
        }
        if depth >= self.cfg.max_bisections {
            return Err(WindingFailure::Unstable);
        }
        Ok(self.segment_phase(path, t0, f0, tm, fm, depth + 1)?
            + self.segment_phase(path, tm, fm, t1, f1, depth + 1)?)
    }

    fn circle_winding(&self, r: f64) -> std::result::Result<i64, WindingFailure> {
        let path = move |t: f64| Complex64::from_polar(r, THETA_OFFSET + TAU * t);
        to_integer(self.edge_phase(&path)?)
    }

    fn box_winding(&self, b: &PolarBox) -> std::result::Result<i64, WindingFailure> {
        let PolarBox {
            r0,
            r1,
            theta0,
            theta1,
        } = *b;
        let mut phase = 0.0;
        let full = b.is_full_turn();
        if !full {
            phase += self.edge_phase(&|t| Complex64::from_polar(r0 + (r1 - r0) * t, theta0))?;
        }
        phase += self.edge_phase(&|t| Complex64::from_polar(r1, theta0 + (theta1 - theta0) * t))?;
        if !full {
            phase += self.edge_phase(&|t| Complex64::from_polar(r1 + (r0 - r1) * t, theta1))?;
        }
        phase += self.edge_phase(&|t| Complex64::from_polar(r0, theta1 + (theta0 - theta1) * t))?;
        to_integer(phase)
    }

    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        let h = 1e-6 * (1.0 + z.norm());
        Ok(((self.f)(z + h)? - (self.f)(z - h)?) / (2.0 * h))
    }

    fn newton(&self, start: Complex64) -> Option<(Complex64, f64, f64)> {
        let mut z = start;
        for _ in 0..self.cfg.newton_max_iter {
            let value = (self.f)(z).ok()?;
            let slope = self.derivative(z).ok()?;
            if slope.norm() == 0.0 || !slope.is_finite() {
                return None;
            }
            let step = value / slope;
            z -= step;
            if !z.is_finite() || z.norm() >= 1.0 {
                return None;
            }
            if step.norm() <= self.cfg.newton_tol {
                let residual = (self.f)(z).ok()?.norm();
                let slope = self.derivative(z).ok()?.norm();
                return Some((z, residual, slope));
            }
        }
        None
    }

    fn point(
        &self,
        z: Complex64,
        multiplicity: u32,
        residual: f64,
        derivative: f64,
    ) -> SpectralPoint {
        SpectralPoint {
            z,
            multiplicity,
            lambda: zhukovsky(z),
            residual,
            derivative,
        }
    }

    fn resolve(
        &self,
        region: PolarBox,
        winding: i64,
        depth: usize,
        zeros: &mut Vec<SpectralPoint>,
        unresolved: &mut Vec<UnresolvedRegion>,
    ) {
        if winding == 0 {
            return;
        }
        if winding < 0 {
            unresolved.push(UnresolvedRegion {
                region,
                winding: Some(winding),
                reason: "negative winding".into(),
            });
            return;
        }
        if winding == 1 {
            if let Some((z, residual, slope)) = self.newton(region.center()) {
                if region.contains(z) {
                    zeros.push(self.point(z, 1, residual, slope));
                    return;
                }
            }
        }
        if region.diameter() <= self.cfg.min_diameter {
            let z = region.center();
            let residual = (self.f)(z).map(|v| v.norm()).unwrap_or(f64::NAN);
            let slope = self.derivative(z).map(|d| d.norm()).unwrap_or(f64::NAN);
            zeros.push(self.point(z, winding as u32, residual, slope));
            return;
        }
        if depth >= self.cfg.max_depth {
            unresolved.push(UnresolvedRegion {
                region,
                winding: Some(winding),
                reason: "maximum subdivision depth reached".into(),
            });
            return;
        }
        for &(fr, ft) in &SPLIT_FRACTIONS {
            let children = region.split(fr, ft);
            let windings: Vec<_> = children.par_iter().map(|c| self.box_winding(c)).collect();
            let Ok(windings) = windings
                .into_iter()
                .collect::<std::result::Result<Vec<_>, _>>()
            else {
                continue;
            };
            if windings.iter().sum::<i64>() != winding {
                continue;
            }
            for (child, w) in children.into_iter().zip(windings) {
                self.resolve(child, w, depth + 1, zeros, unresolved);
            }
            return;
        }
        unresolved.push(UnresolvedRegion {
            region,
            winding: Some(winding),
            reason: "boundary phase did not stabilise after re-splitting".into(),
        });
    }

    fn run(&self) -> ZeroSearch {
        let cfg = self.cfg;
        let annulus = PolarBox {
            r0: cfg.r_min,
            r1: cfg.r_max,
            theta0: THETA_OFFSET,
            theta1: THETA_OFFSET + TAU,
        };
        let mut zeros = Vec::new();
        let mut unresolved = Vec::new();

        match self.circle_winding(cfg.r_min) {
            Ok(0) => {}
            inner => unresolved.push(UnresolvedRegion {
                region: PolarBox {
                    r0: 0.0,
                    r1: cfg.r_min,
                    theta0: THETA_OFFSET,
                    theta1: THETA_OFFSET + TAU,
                },
                winding: inner.ok(),
                reason: INSIDE_INNER.into(),
            }),
        }
        if cfg.probe_boundary {
            let outer = 1.0 - 2e-6;
            if outer > cfg.r_max {
                let shell = self
                    .circle_winding(outer)
                    .and_then(|o| Ok(o - self.circle_winding(cfg.r_max)?));
                if shell != Ok(0) {
                    unresolved.push(UnresolvedRegion {
                        region: PolarBox {
                            r0: cfg.r_max,
                            r1: outer,
                            theta0: THETA_OFFSET,
                            theta1: THETA_OFFSET + TAU,
                        },
                        winding: shell.ok(),
                        reason: NEAR_BOUNDARY.into(),
                    });
                }
            }
        }

        let total = match self.box_winding(&annulus) {
            Ok(w) => w,
            Err(_) => {
                unresolved.push(UnresolvedRegion {
                    region: annulus,
                    winding: None,
                    reason: "boundary phase of the annulus did not stabilise".into(),
                });
                return ZeroSearch {
                    zeros,
                    unresolved,
                    total_winding: 0,
                };
            }
        };
        if total != 0 {
            let sectors = annulus.sectors(cfg.initial_sectors);
            let windings: Vec<_> = sectors.par_iter().map(|s| self.box_winding(s)).collect();
            let consistent = windings.iter().all(|w| w.is_ok())
                && windings.iter().map(|w| w.unwrap_or(0)).sum::<i64>() == total;
            if consistent {
                for (sector, w) in sectors.into_iter().zip(windings) {
                    self.resolve(sector, w.unwrap_or(0), 1, &mut zeros, &mut unresolved);
                }
            } else {
                self.resolve(annulus, total, 0, &mut zeros, &mut unresolved);
            }
        }
        zeros.sort_by(|a, b| {
            a.lambda
                .re
                .total_cmp(&b.lambda.re)
                .then(a.lambda.im.total_cmp(&b.lambda.im))
        });
        ZeroSearch {
            zeros,
            unresolved,
            total_winding: total,
        }
    }
}

fn to_integer(phase: f64) -> std::result::Result<i64, WindingFailure> {
    let turns = phase / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.1 {
        return Err(WindingFailure::Unstable);
    }
    Ok(rounded as i64)
}

/// Zeros of an arbitrary function analytic on the closed annulus.
pub fn find_zeros_of<F>(f: F, config: &FinderConfig) -> Result<ZeroSearch>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    config.validate()?;
    Ok(Finder {
        f: &f,
        cfg: *config,
    }
    .run())
}

/// Discrete spectrum of `op` as zeros of `U` in the unit disk.
pub fn find_zeros(op: &JacobiOperator, config: &FinderConfig) -> Result<ZeroSearch> {
    find_zeros_of(|z| determinant_u(op, z), config)
}

/// The same search run on the resolvent determinant composed with the
/// Zhukovsky map.
pub fn find_zeros_oracle(op: &JacobiOperator, config: &FinderConfig) -> Result<ZeroSearch> {
    find_zeros_of(|z| determinant_oracle(op, zhukovsky(z)), config)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityReport {
    pub original: ZeroSearch,
    pub transformed: ZeroSearch,
    /// Largest distance between paired zeros; infinite when counts differ.
    pub max_distance: f64,
    pub matched: bool,
}

/// Largest distance between zeros of two searches paired in sorted order,
/// or infinity when the multisets differ in size.
pub fn zero_set_distance(a: &[SpectralPoint], b: &[SpectralPoint]) -> f64 {
    if a.len() != b.len()
        || a.iter()
            .zip(b)
            .any(|(x, y)| x.multiplicity != y.multiplicity)
    {
        return f64::INFINITY;
    }
    let mut unused: Vec<&SpectralPoint> = b.iter().collect();
    let mut worst: f64 = 0.0;
    for p in a {
        let (idx, d) = unused
            .iter()
            .enumerate()
            .map(|(i, q)| (i, (q.z - p.z).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("equal lengths");
        worst = worst.max(d);
        unused.swap_remove(idx);
    }
    worst
}

/// Runs the finder on `op` and on its diagonal similarity by `r` (supported
/// from `start`) and compares the zero sets.
pub fn similarity_check(
    op: &JacobiOperator,
    start: i64,
    r: &[Complex64],
    config: &FinderConfig,
    tol: f64,
) -> Result<SimilarityReport> {
    let transformed_op = op.gauge_transform(start, r)?;
    let original = find_zeros(op, config)?;
    let transformed = find_zeros(&transformed_op, config)?;
    let max_distance = zero_set_distance(&original.zeros, &transformed.zeros);
    Ok(SimilarityReport {
        matched: max_distance <= tol,
        original,
        transformed,
        max_distance,
    })
}

/// Relative tolerance between `U` and the Fredholm determinant.
pub const ROUTE_TOL: f64 = 1e-8;
/// Largest distance allowed between the zeros found through either route.
pub const ZERO_TOL: f64 = 1e-8;
/// Largest distance allowed between a zero and its finite-section eigenvalue.
pub const SECTION_TOL: f64 = 1e-4;
/// Section eigenvalues closer than this to `[-2, 2]` are not compared.
pub const SECTION_BAND_GAP: f64 = 0.1;

/// The Wronskian and Fredholm routes, and the finite section, side by side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteComparison {
    pub grid: Vec<DeterminantEvaluation>,
    pub rejected: Vec<RejectedPoint>,
    /// Largest `|U - L| / (1 + |L|)` over the grid.
    pub max_discrepancy: f64,
    pub wronskian: ZeroSearch,
    pub oracle: ZeroSearch,
    pub zero_distance: f64,
    pub section: FiniteSectionResult,
    /// Section eigenvalues at least [`SECTION_BAND_GAP`] from the band that
    /// lie farther than [`SECTION_TOL`] from every zero.
    pub section_unmatched: Vec<Complex64>,
    pub violations: Vec<String>,
}

pub fn compare_routes(
    op: &JacobiOperator,
    grid: &[Complex64],
    section_half_width: usize,
    config: &FinderConfig,
) -> Result<RouteComparison> {
    let audit = audit_bounds(op, grid, true);
    let max_discrepancy = audit
        .evaluations
        .iter()
        .filter_map(|e| e.route_discrepancy())
        .fold(0.0, f64::max);
    let wronskian = find_zeros(op, config)?;
    let oracle = find_zeros_oracle(op, config)?;
    let zero_distance = zero_set_distance(&wronskian.zeros, &oracle.zeros);
    let mut section = finite_section_eigenvalues(op, section_half_width)?;
    section.match_points(&wronskian.zeros);
    let section_unmatched: Vec<Complex64> = section
        .off_band(SECTION_BAND_GAP)
        .into_iter()
        .filter(|l| {
            wronskian
                .zeros
                .iter()
                .all(|p| (p.lambda - l).norm() > SECTION_TOL)
        })
        .collect();

    let mut violations = Vec::new();
    if max_discrepancy > ROUTE_TOL {
        violations.push(format!(
            "route discrepancy {max_discrepancy:e} exceeds {ROUTE_TOL:e}"
        ));
    }
    if zero_distance > ZERO_TOL {
        violations.push(format!("zero sets differ by {zero_distance:e}"));
    }
    for m in &section.matched {
        let p = &wronskian.zeros[m.point];
        if dist_to_band(p.lambda) >= SECTION_BAND_GAP && m.distance > SECTION_TOL {
            violations.push(format!(
                "lambda = {} is {:e} from the finite section",
                p.lambda, m.distance
            ));
        }
    }
    for l in &section_unmatched {
        violations.push(format!(
            "finite-section eigenvalue {l} has no matching zero"
        ));
    }
    Ok(RouteComparison {
        grid: audit.evaluations,
        rejected: audit.rejected,
        max_discrepancy,
        wronskian,
        oracle,
        zero_distance,
        section,
        section_unmatched,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_operator_has_no_zeros() {
        let s = find_zeros(&JacobiOperator::free(), &FinderConfig::default()).unwrap();
        assert!(s.zeros.is_empty());
        assert!(s.unresolved.is_empty());
        assert_eq!(s.total_winding, 0);
    }

    #[test]
    fn single_site_real_potential() {
        let s = find_zeros(
            &JacobiOperator::single_site(c(1.5, 0.0)),
            &FinderConfig::default(),
        )
        .unwrap();
        assert_eq!(s.zeros.len(), 1, "{s:?}");
        let p = s.zeros[0];
        assert_eq!(p.multiplicity, 1);
        assert!((p.z - 0.5).norm() < 1e-12);
        assert!((p.lambda - 2.5).norm() < 1e-11);
        assert!(p.residual <= 1e-9 * p.derivative);
        assert_eq!(s.total_winding, 1);
    }

    #[test]
    fn single_site_complex_potential() {
        let b = c(1.0, 1.0);
        let s = find_zeros(&JacobiOperator::single_site(b), &FinderConfig::default()).unwrap();
        assert_eq!(s.zeros.len(), 1);
        // z^2 + b z - 1 = 0, root inside the disk
        let disc = (b * b + 4.0).sqrt();
        let roots = [(-b + disc) / 2.0, (-b - disc) / 2.0];
        let inner = if roots[0].norm() < 1.0 {
            roots[0]
        } else {
            roots[1]
        };
        assert!((s.zeros[0].z - inner).norm() < 1e-12);
        assert!((s.zeros[0].lambda - c(2.05817, 0.48587)).norm() < 1e-5);
        assert!((s.zeros[0].lambda - (2.0 * inner + b)).norm() < 1e-11);
    }

    #[test]
    fn polynomial_with_double_zero() {
        // (z - 0.3i)^2 (z + 0.6): double zero and a simple one
        let f = |z: Complex64| Ok((z - c(0.0, 0.3)) * (z - c(0.0, 0.3)) * (z + 0.6));
        let s = find_zeros_of(f, &FinderConfig::default()).unwrap();
        assert_eq!(s.total_winding, 3);
        assert_eq!(s.multiplicity_total() + s.unresolved_winding(), 3);
        let double = s
            .zeros
            .iter()
            .find(|p| p.multiplicity == 2)
            .expect("double zero");
        assert!((double.z - c(0.0, 0.3)).norm() < 1e-6);
        assert!(s
            .zeros
            .iter()
            .any(|p| p.multiplicity == 1 && (p.z + 0.6).norm() < 1e-12));
    }

    #[test]
    fn zeros_near_the_circle_are_reported_unresolved() {
        let f = |z: Complex64| Ok(z - c(0.0, 1.0 - 1e-5));
        let s = find_zeros_of(f, &FinderConfig::default()).unwrap();
        assert!(s.zeros.is_empty());
        assert_eq!(s.unresolved.len(), 1);
        assert_eq!(s.unresolved[0].winding, Some(1));
        assert_eq!(s.unresolved[0].reason, NEAR_BOUNDARY);
    }

    #[test]
    fn zeros_inside_inner_radius_are_reported() {
        let f = |z: Complex64| Ok(z - c(1e-4, 0.0));
        let s = find_zeros_of(f, &FinderConfig::default()).unwrap();
        assert!(s.zeros.is_empty());
        assert_eq!(s.unresolved[0].reason, INSIDE_INNER);
    }

    #[test]
    fn oracle_route_agrees() {
        let op = JacobiOperator::new(
            -1,
            vec![c(1.2, 0.1), c(0.8, -0.2)],
            vec![c(0.9, 0.4), c(-0.3, 0.2)],
            vec![c(1.0, 0.3), c(1.1, 0.0)],
        )
        .unwrap();
        let cfg = FinderConfig::default();
        let a = find_zeros(&op, &cfg).unwrap();
        let b = find_zeros_oracle(&op, &cfg).unwrap();
        assert!(!a.zeros.is_empty());
        assert!(zero_set_distance(&a.zeros, &b.zeros) < 1e-8);
    }

    #[test]
    fn similarity_keeps_zeros() {
        let cfg = FinderConfig::default();
        let rep = similarity_check(&JacobiOperator::free(), 0, &[c(7.0, 0.0)], &cfg, 1e-8).unwrap();
        assert!(rep.matched && rep.original.zeros.is_empty());
        let op = JacobiOperator::single_site(c(1.5, 0.0));
        let rep = similarity_check(&op, 0, &[c(2.0, 0.0)], &cfg, 1e-8).unwrap();
        assert!(rep.matched);
        assert!((rep.transformed.zeros[0].z - 0.5).norm() < 1e-12);
    }

    #[test]
    fn box_geometry() {
        let b = PolarBox {
            r0: 0.2,
            r1: 0.4,
            theta0: 3.0,
            theta1: 3.5,
        };
        assert!(b.contains(Complex64::from_polar(0.3, 3.2)));
        assert!(b.contains(Complex64::from_polar(0.3, -3.0)));
        assert!(!b.contains(Complex64::from_polar(0.3, 2.9)));
        assert!(!b.contains(Complex64::from_polar(0.45, 3.2)));
        let kids = b.split(0.5, 0.5);
        assert!(kids.iter().all(|k| k.diameter() < b.diameter()));
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = FinderConfig {
            r_min: 0.5,
            r_max: 0.4,
            ..FinderConfig::default()
        };
        assert!(find_zeros(&JacobiOperator::free(), &cfg).is_err());
    }
}
