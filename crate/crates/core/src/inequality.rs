//! Eigenvalue sums, spectral-enclosure ovals and family sweeps.
//!
//! For eigenvalues `lambda` (with multiplicity) the two sums are
//!
//! ```text
//! lt_main = sum dist(lambda, [-2,2]) / |lambda^2 - 4|^((1-eps)/2)
//! lt_hk   = sum dist(lambda, [-2,2])^(1+eps) / |lambda^2 - 4|^(1/2 + eps/4)
//! ```
//!
//! Both are bounded by an unknown constant times a perturbation size; the lab
//! only reports the ratios. The ovals `|lambda^2 - 4| <= r` are checked
//! directly.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::operator::{compute_gauge, dist_to_band, JacobiOperator, PerturbationGauge, TOL_EDGE};
use crate::spectrum::{find_zeros, FinderConfig, SpectralPoint, ZeroSearch};

/// Slack allowed on oval membership.
pub const OVAL_SLACK: f64 = 1e-9;

pub const DEFAULT_EPSILONS: [f64; 6] = [0.05, 0.1, 0.25, 0.5, 0.75, 0.9];

fn kappa_lhs(x: f64) -> f64 {
    (4.0 * x + 5.0 * x * x) * (4.0 * x).exp()
}

/// Positive root of `(4x + 5x^2) e^{4x} = 1`, by bisection on `[0, 1]`.
pub fn kappa() -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    debug_assert!(kappa_lhs(lo) < 1.0 && kappa_lhs(hi) > 1.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if kappa_lhs(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LtSums {
    pub lt_main: f64,
    pub lt_hk: f64,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(SpectralError::InvalidEpsilon(epsilon))
    }
}

pub fn lt_sums(points: &[SpectralPoint], epsilon: f64) -> Result<LtSums> {
    check_epsilon(epsilon)?;
    let mut sums = LtSums {
        lt_main: 0.0,
        lt_hk: 0.0,
    };
    for p in points {
        let dist = dist_to_band(p.lambda);
        if dist <= TOL_EDGE {
            return Err(SpectralError::NearBand {
                lambda: p.lambda,
                tol: TOL_EDGE,
            });
        }
        let edge = (p.lambda * p.lambda - 4.0).norm();
        let mult = p.multiplicity as f64;
        sums.lt_main += mult * dist / edge.powf(0.5 * (1.0 - epsilon));
        sums.lt_hk += mult * dist.powf(1.0 + epsilon) / edge.powf(0.5 + 0.25 * epsilon);
    }
    Ok(sums)
}

/// Radii `r` of the three ovals `|lambda^2 - 4| <= r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnclosureRadii {
    /// `(2 (Delta^1/2 + Delta) / kappa)^2`
    pub cassini: f64,
    /// `324 * proxy^2`
    pub birman_schwinger: f64,
    /// `proxy^2`, Schrödinger operators only.
    pub sharp: Option<f64>,
}

pub fn enclosure_radii(gauge: &PerturbationGauge, schrodinger: bool) -> EnclosureRadii {
    let proxy = gauge.trace_norm_proxy;
    let cassini = (2.0 * gauge.root_plus_delta() / kappa()).powi(2);
    EnclosureRadii {
        cassini,
        birman_schwinger: 324.0 * proxy * proxy,
        sharp: schrodinger.then_some(proxy * proxy),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OvalMembership {
    pub lambda: Complex64,
    /// `|lambda^2 - 4|`
    pub edge_modulus: f64,
    pub in_cassini: bool,
    pub in_birman_schwinger: bool,
    pub in_sharp: Option<bool>,
}

pub fn oval_membership(lambda: Complex64, radii: &EnclosureRadii) -> OvalMembership {
    let edge_modulus = (lambda * lambda - 4.0).norm();
    OvalMembership {
        lambda,
        edge_modulus,
        in_cassini: edge_modulus <= radii.cassini + OVAL_SLACK,
        in_birman_schwinger: edge_modulus <= radii.birman_schwinger + OVAL_SLACK,
        in_sharp: radii.sharp.map(|r| edge_modulus <= r + OVAL_SLACK),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub label: String,
    pub epsilon: f64,
    pub lt_main: f64,
    pub lt_hk: f64,
    pub delta: f64,
    pub trace_norm_proxy: f64,
    /// `lt_main / Delta`; infinite when `Delta = 0 < lt_main`, zero when both vanish.
    pub ratio_main: f64,
    /// `lt_hk / proxy`, with the same conventions.
    pub ratio_hk: f64,
    pub schrodinger: bool,
    pub radii: EnclosureRadii,
    pub memberships: Vec<OvalMembership>,
    pub eigenvalue_count: u32,
    pub unresolved_regions: usize,
    /// See [`EnclosureCheck::violations`].
    pub violations: Vec<String>,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Oval memberships of a set of eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnclosureCheck {
    pub delta: f64,
    pub trace_norm_proxy: f64,
    pub schrodinger: bool,
    pub radii: EnclosureRadii,
    pub memberships: Vec<OvalMembership>,
    /// Hard failures: Cassini oval always; Birman-Schwinger and sharp ovals
    /// only for Schrödinger operators, where the proxy is the exact trace norm.
    pub violations: Vec<String>,
}

pub fn enclosure_check(op: &JacobiOperator, points: &[SpectralPoint]) -> EnclosureCheck {
    let gauge = compute_gauge(op);
    let schrodinger = op.is_schrodinger();
    let radii = enclosure_radii(&gauge, schrodinger);
    let memberships: Vec<_> = points
        .iter()
        .map(|p| oval_membership(p.lambda, &radii))
        .collect();
    let mut violations = Vec::new();
    for m in &memberships {
        if !m.in_cassini {
            violations.push(format!("lambda = {} outside the Cassini oval", m.lambda));
        }
        if schrodinger && !m.in_birman_schwinger {
            violations.push(format!(
                "lambda = {} outside the Birman-Schwinger oval",
                m.lambda
            ));
        }
        if m.in_sharp == Some(false) {
            violations.push(format!("lambda = {} outside the sharp oval", m.lambda));
        }
    }
    EnclosureCheck {
        delta: gauge.delta_total,
        trace_norm_proxy: gauge.trace_norm_proxy,
        schrodinger,
        radii,
        memberships,
        violations,
    }
}

/// Assembles the report for one operator and one `epsilon` from a finished search.
pub fn build_report(
    label: &str,
    op: &JacobiOperator,
    search: &ZeroSearch,
    epsilon: f64,
) -> Result<InequalityReport> {
    let sums = lt_sums(&search.zeros, epsilon)?;
    let check = enclosure_check(op, &search.zeros);
    Ok(InequalityReport {
        label: label.to_string(),
        epsilon,
        lt_main: sums.lt_main,
        lt_hk: sums.lt_hk,
        delta: check.delta,
        trace_norm_proxy: check.trace_norm_proxy,
        ratio_main: ratio(sums.lt_main, check.delta),
        ratio_hk: ratio(sums.lt_hk, check.trace_norm_proxy),
        schrodinger: check.schrodinger,
        radii: check.radii,
        memberships: check.memberships,
        eigenvalue_count: search.zeros.iter().map(|p| p.multiplicity).sum(),
        unresolved_regions: search.unresolved.len(),
        violations: check.violations,
    })
}

/// Description of a finite family of operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    /// Single-site potentials `b = t * direction / |direction|`.
    SingleSiteRay {
        direction: [f64; 2],
        magnitudes: Vec<f64>,
    },
    /// Random diagonal similarities of one operator.
    GaugeOrbit {
        base: JacobiOperator,
        count: usize,
        /// Gauge factors have modulus in `[1/spread, spread]`.
        #[serde(default = "default_gauge_spread")]
        spread: f64,
    },
    /// Random finitely supported perturbations.
    Random {
        count: usize,
        max_support: usize,
        /// Each entry lies within this distance of its free value.
        spread: f64,
        #[serde(default)]
        schrodinger: bool,
        #[serde(default)]
        max_delta: Option<f64>,
    },
    /// Explicit list.
    List { operators: Vec<JacobiOperator> },
}

fn default_gauge_spread() -> f64 {
    4.0
}

fn random_in_disk<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, theta)
}

/// Random operator with support length in `1..=max_support` starting in
/// `[-3, 3]`, every entry within `spread` of its free value. When `max_delta`
/// is given the deviations are shrunk geometrically until `Delta <= max_delta`.
pub fn random_operator<R: Rng>(
    rng: &mut R,
    max_support: usize,
    spread: f64,
    schrodinger: bool,
    max_delta: Option<f64>,
) -> JacobiOperator {
    let len = rng.gen_range(1..=max_support.max(1));
    let lo = rng.gen_range(-3..=3);
    let one = Complex64::new(1.0, 0.0);
    let mut da = Vec::with_capacity(len);
    let mut db = Vec::with_capacity(len);
    let mut dc = Vec::with_capacity(len);
    for _ in 0..len {
        let (a, c) = if schrodinger {
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            loop {
                let a = random_in_disk(rng, spread);
                let c = random_in_disk(rng, spread);
                if ((one + a) * (one + c)).norm() > 1e-3 {
                    break (a, c);
                }
            }
        };
        da.push(a);
        db.push(random_in_disk(rng, spread));
        dc.push(c);
    }
    let mut scale = 1.0;
    loop {
        let op = JacobiOperator::new(
            lo,
            da.iter().map(|x| one + scale * x).collect(),
            db.iter().map(|x| scale * x).collect(),
            dc.iter().map(|x| one + scale * x).collect(),
        );
        if let Ok(op) = op {
            match max_delta {
                Some(m) if compute_gauge(&op).delta_total > m => {}
                _ => return op,
            }
        }
        scale *= 0.8;
    }
}

/// Random gauge factors on the support of `op` padded by one site.
pub fn random_gauge<R: Rng>(
    rng: &mut R,
    op: &JacobiOperator,
    spread: f64,
) -> (i64, Vec<Complex64>) {
    let (lo, hi) = op.support().unwrap_or((0, 0));
    let log_spread = spread.max(1.0).ln();
    let r = (lo - 1..=hi + 1)
        .map(|_| {
            let modulus = rng.gen_range(-log_spread..=log_spread).exp();
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(modulus, phase)
        })
        .collect();
    (lo - 1, r)
}

impl FamilySpec {
    pub fn generate(&self, seed: u64) -> Result<Vec<(String, JacobiOperator)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self {
            FamilySpec::SingleSiteRay {
                direction,
                magnitudes,
            } => {
                let d = Complex64::new(direction[0], direction[1]);
                if d.norm() == 0.0 {
                    return Err(SpectralError::InvalidConfig(
                        "direction must be nonzero".into(),
                    ));
                }
                let unit = d / d.norm();
                Ok(magnitudes
                    .iter()
                    .map(|&t| {
                        (
                            format!("single-site t={t}"),
                            JacobiOperator::single_site(unit * t),
                        )
                    })
                    .collect())
            }
            FamilySpec::GaugeOrbit {
                base,
                count,
                spread,
            } => (0..*count)
                .map(|i| {
                    let (start, r) = random_gauge(&mut rng, base, *spread);
                    Ok((format!("gauge #{i}"), base.gauge_transform(start, &r)?))
                })
                .collect(),
            FamilySpec::Random {
                count,
                max_support,
                spread,
                schrodinger,
                max_delta,
            } => {
                if *spread <= 0.0 || *max_support == 0 {
                    return Err(SpectralError::InvalidConfig(
                        "random family needs spread > 0 and max_support >= 1".into(),
                    ));
                }
                Ok((0..*count)
                    .map(|i| {
                        let op = random_operator(
                            &mut rng,
                            *max_support,
                            *spread,
                            *schrodinger,
                            *max_delta,
                        );
                        (format!("random #{i}"), op)
                    })
                    .collect())
            }
            FamilySpec::List { operators } => Ok(operators
                .iter()
                .enumerate()
                .map(|(i, op)| (format!("operator #{i}"), op.clone()))
                .collect()),
        }
    }
}

/// Outcome of the pipeline for one family member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEntry {
    pub label: String,
    pub operator: JacobiOperator,
    /// One report per epsilon, or the error that stopped this member.
    pub reports: std::result::Result<Vec<InequalityReport>, String>,
}

impl SweepEntry {
    pub fn violations(&self) -> usize {
        self.reports
            .as_ref()
            .map(|r| r.iter().map(|x| x.violations.len()).sum())
            .unwrap_or(0)
    }
}

/// Runs search and reports for every member, in parallel, keeping family order.
pub fn family_sweep(
    members: &[(String, JacobiOperator)],
    epsilons: &[f64],
    config: &FinderConfig,
) -> Vec<SweepEntry> {
    members
        .par_iter()
        .map(|(label, op)| {
            let reports = find_zeros(op, config).and_then(|search| {
                epsilons
                    .iter()
                    .map(|&e| build_report(label, op, &search, e))
                    .collect::<Result<Vec<_>>>()
            });
            SweepEntry {
                label: label.clone(),
                operator: op.clone(),
                reports: reports.map_err(|e| e.to_string()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(lambda: Complex64) -> SpectralPoint {
        SpectralPoint {
            z: crate::operator::zhukovsky_inverse(lambda).unwrap(),
            multiplicity: 1,
            lambda,
            residual: 0.0,
            derivative: 1.0,
        }
    }

    #[test]
    fn kappa_root() {
        let k = kappa();
        assert!((k - 0.129).abs() < 1e-3);
        assert!((kappa_lhs(k) - 1.0).abs() < 1e-10);
        assert_eq!(kappa_lhs(0.0), 0.0);
        assert!((kappa_lhs(1.0) - 9.0 * 4f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn lt_sum_anchor() {
        assert_eq!(
            lt_sums(&[], 0.5).unwrap(),
            LtSums {
                lt_main: 0.0,
                lt_hk: 0.0
            }
        );
        let s = lt_sums(&[point(Complex64::new(2.5, 0.0))], 0.5).unwrap();
        // dist = 0.5, |lambda^2 - 4| = 2.25
        assert!((s.lt_main - 0.5 / 2.25f64.powf(0.25)).abs() < 1e-15);
        assert!((s.lt_main - 0.40825).abs() < 1e-5);
        assert!((s.lt_hk - 0.5f64.powf(1.5) / 2.25f64.powf(0.625)).abs() < 1e-15);
        assert!((s.lt_hk - 0.212981).abs() < 1e-6);
    }

    #[test]
    fn multiplicity_counts() {
        let mut p = point(Complex64::new(0.0, 3.0));
        let single = lt_sums(&[p], 0.3).unwrap();
        p.multiplicity = 3;
        let triple = lt_sums(&[p], 0.3).unwrap();
        assert!((triple.lt_main - 3.0 * single.lt_main).abs() < 1e-15);
    }

    #[test]
    fn epsilon_domain() {
        for e in [0.0, 1.0, -0.2, f64::NAN] {
            assert!(lt_sums(&[], e).is_err());
        }
    }

    #[test]
    fn epsilon_monotonicity_follows_edge_modulus() {
        // |lambda^2 - 4| < 1 grows with epsilon decreasing? x^{-(1-eps)/2} decreases as eps drops when x < 1
        let near = point(Complex64::new(2.1, 0.0)); // |lambda^2-4| = 0.41
        let far = point(Complex64::new(3.0, 0.0)); // 5
        let eps = [0.9, 0.5, 0.25, 0.1, 0.05];
        let near_vals: Vec<f64> = eps
            .iter()
            .map(|&e| lt_sums(&[near], e).unwrap().lt_main)
            .collect();
        let far_vals: Vec<f64> = eps
            .iter()
            .map(|&e| lt_sums(&[far], e).unwrap().lt_main)
            .collect();
        assert!(near_vals.windows(2).all(|w| w[1] > w[0]));
        assert!(far_vals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn single_site_radii() {
        let op = JacobiOperator::single_site(Complex64::new(1.5, 0.0));
        let radii = enclosure_radii(&compute_gauge(&op), true);
        assert_eq!(radii.sharp, Some(2.25));
        assert_eq!(radii.birman_schwinger, 324.0 * 2.25);
        let expected = (2.0 * (1.5f64.sqrt() + 1.5) / kappa()).powi(2);
        assert!((radii.cassini - expected).abs() < 1e-9);
        assert!((radii.cassini - 1784.0).abs() < 15.0);
        let m = oval_membership(Complex64::new(2.5, 0.0), &radii);
        assert!((m.edge_modulus - 2.25).abs() < 1e-15);
        assert_eq!(m.in_sharp, Some(true));
        let free = enclosure_radii(&compute_gauge(&JacobiOperator::free()), true);
        assert_eq!((free.cassini, free.birman_schwinger), (0.0, 0.0));
    }

    #[test]
    fn single_site_ray_sweep() {
        let spec = FamilySpec::SingleSiteRay {
            direction: [1.0, 1.0],
            magnitudes: vec![0.5, 1.0, 2.0, 4.0],
        };
        let members = spec.generate(0).unwrap();
        let entries = family_sweep(&members, &[0.5], &FinderConfig::default());
        assert_eq!(entries.len(), 4);
        for e in &entries {
            let reports = e.reports.as_ref().unwrap();
            assert_eq!(reports.len(), 1);
            assert_eq!(reports[0].eigenvalue_count, 1);
            assert!(reports[0].violations.is_empty());
            let m = reports[0].memberships[0];
            let r3 = reports[0].radii.sharp.unwrap();
            assert!((m.edge_modulus - r3).abs() < 1e-9 * r3.max(1.0));
        }
    }

    #[test]
    fn gauge_orbit_has_identical_sums() {
        let base = JacobiOperator::new(
            0,
            vec![Complex64::new(1.3, 0.2), Complex64::new(0.9, 0.0)],
            vec![Complex64::new(1.1, 0.4), Complex64::new(-0.6, 0.1)],
            vec![Complex64::new(0.8, -0.1), Complex64::new(1.0, 0.5)],
        )
        .unwrap();
        let spec = FamilySpec::GaugeOrbit {
            base: base.clone(),
            count: 5,
            spread: 4.0,
        };
        let mut members = spec.generate(7).unwrap();
        members.insert(0, ("base".into(), base));
        let entries = family_sweep(&members, &[0.25], &FinderConfig::default());
        let first = &entries[0].reports.as_ref().unwrap()[0];
        assert!(first.eigenvalue_count > 0);
        for e in &entries[1..] {
            let r = &e.reports.as_ref().unwrap()[0];
            assert!((r.lt_main - first.lt_main).abs() < 1e-8);
            assert!((r.lt_hk - first.lt_hk).abs() < 1e-8);
            assert!((r.delta - first.delta).abs() < 1e-12);
        }
    }

    #[test]
    fn family_json() {
        let spec: FamilySpec = serde_json::from_str(
            r#"{"kind": "random", "count": 3, "max_support": 4, "spread": 0.5, "max_delta": 2.0}"#,
        )
        .unwrap();
        let a = spec.generate(11).unwrap();
        let b = spec.generate(11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert!(a.iter().all(|(_, op)| compute_gauge(op).delta_total <= 2.0));
    }
}
