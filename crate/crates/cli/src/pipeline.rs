//! One function per command, each a composition of library calls.

use jacobi_spectra::determinant::{
    audit_bounds, BoundAudit, DeterminantEvaluation, PolarGrid, RejectedPoint,
};
use jacobi_spectra::eigen::{finite_section_eigenvalues, FiniteSectionResult};
use jacobi_spectra::inequality::{
    build_report, enclosure_check, family_sweep, EnclosureCheck, InequalityReport, SweepEntry,
};
use jacobi_spectra::jost::{jost_profile, JostProfile};
use jacobi_spectra::operator::compute_gauge;
use jacobi_spectra::spectrum::{
    compare_routes, find_zeros, FinderConfig, RouteComparison, SpectralPoint, UnresolvedRegion,
};
use jacobi_spectra::JacobiOperator;
use serde::Serialize;

use crate::config::{load_operator, load_sweep, Command, RunConfig};
use crate::error::CliError;
use crate::output::{complex, float, Table};

/// Bound margins below `-MARGIN_SLACK` count as violations.
pub const MARGIN_SLACK: f64 = 1e-12;

/// Finite-section half width used by `oracle-compare` when none is given.
pub const DEFAULT_SECTION_N: usize = 200;

#[derive(Debug, Serialize)]
pub struct JostReport {
    pub operator: JacobiOperator,
    pub profile: JostProfile,
    pub min_bound_margin: f64,
}

#[derive(Debug, Serialize)]
pub struct DetScanReport {
    pub operator: JacobiOperator,
    pub grid: PolarGrid,
    pub delta: f64,
    pub evaluations: Vec<DeterminantEvaluation>,
    pub rejected: Vec<RejectedPoint>,
    pub min_margin: f64,
}

#[derive(Debug, Serialize)]
pub struct SpectrumReport {
    pub operator: JacobiOperator,
    pub finder: FinderConfig,
    pub eigenvalues: Vec<SpectralPoint>,
    pub unresolved: Vec<UnresolvedRegion>,
    pub total_winding: i64,
    pub finite_section: Option<FiniteSectionResult>,
}

#[derive(Debug, Serialize)]
pub struct LtCheckReport {
    pub operator: JacobiOperator,
    pub eigenvalues: Vec<SpectralPoint>,
    pub unresolved: Vec<UnresolvedRegion>,
    pub reports: Vec<InequalityReport>,
}

#[derive(Debug, Serialize)]
pub struct EnclosureReport {
    pub operator: JacobiOperator,
    pub eigenvalues: Vec<SpectralPoint>,
    pub unresolved: Vec<UnresolvedRegion>,
    pub enclosure: EnclosureCheck,
}

#[derive(Debug, Serialize)]
pub struct OracleCompareReport {
    pub operator: JacobiOperator,
    pub comparison: RouteComparison,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub epsilons: Vec<f64>,
    pub entries: Vec<SweepEntry>,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Body {
    Jost(JostReport),
    DetScan(DetScanReport),
    Spectrum(SpectrumReport),
    LtCheck(LtCheckReport),
    Enclosure(EnclosureReport),
    OracleCompare(OracleCompareReport),
    Sweep(SweepReport),
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub violations: Vec<String>,
    #[serde(flatten)]
    pub body: Body,
}

fn audit_violations(audit: &BoundAudit) -> Vec<String> {
    audit
        .violations(MARGIN_SLACK)
        .map(|e| format!("bound margin {:e} at z = {}", e.margins.min(), e.z))
        .collect()
}

fn label(cfg: &RunConfig) -> String {
    cfg.config_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let finder = FinderConfig::default();
    let (violations, body) = match cfg.command {
        Command::Jost => {
            let operator = load_operator(&cfg.config_path)?;
            let profile = jost_profile(&operator, cfg.z)?;
            let min_bound_margin = profile.min_margin();
            let violations = profile
                .rows
                .iter()
                .filter(|r| r.bound_margin_plus.min(r.bound_margin_minus) < -MARGIN_SLACK)
                .map(|r| format!("a-priori bound fails at n = {}", r.n))
                .collect();
            (
                violations,
                Body::Jost(JostReport {
                    operator,
                    profile,
                    min_bound_margin,
                }),
            )
        }
        Command::DetScan => {
            let operator = load_operator(&cfg.config_path)?;
            let grid = cfg.grid.polar()?;
            let audit = audit_bounds(&operator, &grid.points(), false);
            let violations = audit_violations(&audit);
            let min_margin = audit.min_margin();
            let delta = compute_gauge(&operator).delta_total;
            let body = Body::DetScan(DetScanReport {
                operator,
                grid,
                delta,
                evaluations: audit.evaluations,
                rejected: audit.rejected,
                min_margin,
            });
            (violations, body)
        }
        Command::Spectrum => {
            let operator = load_operator(&cfg.config_path)?;
            let search = find_zeros(&operator, &finder)?;
            let finite_section = match cfg.section_n {
                Some(n) => {
                    let mut section = finite_section_eigenvalues(&operator, n)?;
                    section.match_points(&search.zeros);
                    Some(section)
                }
                None => None,
            };
            let body = Body::Spectrum(SpectrumReport {
                operator,
                finder,
                eigenvalues: search.zeros,
                unresolved: search.unresolved,
                total_winding: search.total_winding,
                finite_section,
            });
            (Vec::new(), body)
        }
        Command::LtCheck => {
            let operator = load_operator(&cfg.config_path)?;
            let search = find_zeros(&operator, &finder)?;
            let reports = cfg
                .epsilons
                .iter()
                .map(|&e| build_report(&label(cfg), &operator, &search, e))
                .collect::<Result<Vec<_>, _>>()?;
            let violations = reports
                .first()
                .map(|r| r.violations.clone())
                .unwrap_or_default();
            let body = Body::LtCheck(LtCheckReport {
                operator,
                eigenvalues: search.zeros,
                unresolved: search.unresolved,
                reports,
            });
            (violations, body)
        }
        Command::Enclosure => {
            let operator = load_operator(&cfg.config_path)?;
            let search = find_zeros(&operator, &finder)?;
            let enclosure = enclosure_check(&operator, &search.zeros);
            let violations = enclosure.violations.clone();
            let body = Body::Enclosure(EnclosureReport {
                operator,
                eigenvalues: search.zeros,
                unresolved: search.unresolved,
                enclosure,
            });
            (violations, body)
        }
        Command::OracleCompare => {
            let operator = load_operator(&cfg.config_path)?;
            let grid = cfg.grid.polar()?;
            let n = cfg.section_n.unwrap_or(DEFAULT_SECTION_N);
            let comparison = compare_routes(&operator, &grid.points(), n, &finder)?;
            let violations = comparison.violations.clone();
            (
                violations,
                Body::OracleCompare(OracleCompareReport {
                    operator,
                    comparison,
                }),
            )
        }
        Command::Sweep => {
            let file = load_sweep(&cfg.config_path)?;
            let mut members = Vec::new();
            for (i, family) in file.families.iter().enumerate() {
                let seed = cfg.seed.wrapping_add(i as u64);
                for (label, op) in family.generate(seed)? {
                    members.push((format!("family {i}: {label}"), op));
                }
            }
            let entries = family_sweep(&members, &cfg.epsilons, &finder);
            let mut violations = Vec::new();
            for entry in &entries {
                match &entry.reports {
                    Ok(reports) => {
                        if let Some(r) = reports.first() {
                            violations.extend(
                                r.violations.iter().map(|v| format!("{}: {v}", entry.label)),
                            );
                        }
                    }
                    Err(e) => violations.push(format!("{}: {e}", entry.label)),
                }
            }
            let body = Body::Sweep(SweepReport {
                seed: cfg.seed,
                epsilons: cfg.epsilons.clone(),
                entries,
            });
            (violations, body)
        }
    };
    Ok(Report {
        command: cfg.command.name(),
        violations,
        body,
    })
}

fn flag(b: bool) -> String {
    b.to_string()
}

fn ratio_rows(table: &mut Table, label: &str, reports: &[InequalityReport]) {
    for r in reports {
        table.push(vec![
            label.to_string(),
            float(r.epsilon),
            r.eigenvalue_count.to_string(),
            float(r.lt_main),
            float(r.lt_hk),
            float(r.delta),
            float(r.trace_norm_proxy),
            float(r.ratio_main),
            float(r.ratio_hk),
            r.violations.len().to_string(),
            String::new(),
        ]);
    }
}

const RATIO_HEADER: [&str; 11] = [
    "label",
    "epsilon",
    "eigenvalue_count",
    "lt_main",
    "lt_hk",
    "delta",
    "trace_norm_proxy",
    "ratio_main",
    "ratio_hk",
    "violations",
    "error",
];

fn point_table(points: &[SpectralPoint]) -> Table {
    let mut t = Table::new(vec![
        "lambda_re",
        "lambda_im",
        "multiplicity",
        "z_re",
        "z_im",
        "residual",
        "derivative",
    ]);
    for p in points {
        let [lr, li] = complex(p.lambda);
        let [zr, zi] = complex(p.z);
        t.push(vec![
            lr,
            li,
            p.multiplicity.to_string(),
            zr,
            zi,
            float(p.residual),
            float(p.derivative),
        ]);
    }
    t
}

impl Report {
    /// Flat table of the main records of the report.
    pub fn table(&self) -> Table {
        match &self.body {
            Body::Jost(r) => {
                let mut t = Table::new(vec![
                    "n",
                    "v_plus_re",
                    "v_plus_im",
                    "w_minus_re",
                    "w_minus_im",
                    "u_plus_re",
                    "u_plus_im",
                    "u_minus_re",
                    "u_minus_im",
                    "bound_margin_plus",
                    "bound_margin_minus",
                ]);
                for row in &r.profile.rows {
                    let mut cells = vec![row.n.to_string()];
                    for v in [row.v_plus, row.w_minus, row.u_plus, row.u_minus] {
                        cells.extend(complex(v));
                    }
                    cells.push(float(row.bound_margin_plus));
                    cells.push(float(row.bound_margin_minus));
                    t.push(cells);
                }
                t
            }
            Body::DetScan(r) => {
                let mut t = Table::new(vec![
                    "z_re",
                    "z_im",
                    "u_re",
                    "u_im",
                    "bound_x",
                    "margin_deviation",
                    "margin_modulus",
                    "margin_modulus_exp",
                    "margin_log_modulus",
                    "margin_omega_ratio",
                    "status",
                ]);
                for e in &r.evaluations {
                    let m = &e.margins;
                    let mut cells = Vec::from(complex(e.z));
                    cells.extend(complex(e.u_value));
                    cells.extend(
                        [
                            e.bound_x,
                            m.deviation,
                            m.modulus,
                            m.modulus_exp,
                            m.log_modulus,
                            m.omega_ratio,
                        ]
                        .map(float),
                    );
                    cells.push("ok".into());
                    t.push(cells);
                }
                for p in &r.rejected {
                    let mut cells = Vec::from(complex(p.z));
                    cells.extend(std::iter::repeat_n(String::new(), 8));
                    cells.push(p.reason.clone());
                    t.push(cells);
                }
                t
            }
            Body::Spectrum(r) => point_table(&r.eigenvalues),
            Body::LtCheck(r) => {
                let mut t = Table::new(RATIO_HEADER.to_vec());
                for rep in &r.reports {
                    ratio_rows(&mut t, &rep.label, std::slice::from_ref(rep));
                }
                t
            }
            Body::Enclosure(r) => {
                let mut t = Table::new(vec![
                    "lambda_re",
                    "lambda_im",
                    "edge_modulus",
                    "cassini_radius",
                    "in_cassini",
                    "birman_schwinger_radius",
                    "in_birman_schwinger",
                    "sharp_radius",
                    "in_sharp",
                ]);
                let radii = &r.enclosure.radii;
                for m in &r.enclosure.memberships {
                    let [lr, li] = complex(m.lambda);
                    t.push(vec![
                        lr,
                        li,
                        float(m.edge_modulus),
                        float(radii.cassini),
                        flag(m.in_cassini),
                        float(radii.birman_schwinger),
                        flag(m.in_birman_schwinger),
                        radii.sharp.map(float).unwrap_or_default(),
                        m.in_sharp.map(flag).unwrap_or_default(),
                    ]);
                }
                t
            }
            Body::OracleCompare(r) => {
                let mut t = Table::new(vec![
                    "z_re",
                    "z_im",
                    "u_re",
                    "u_im",
                    "oracle_re",
                    "oracle_im",
                    "discrepancy",
                ]);
                for e in &r.comparison.grid {
                    let mut cells = Vec::from(complex(e.z));
                    cells.extend(complex(e.u_value));
                    match e.oracle_value {
                        Some(o) => cells.extend(complex(o)),
                        None => cells.extend([String::new(), String::new()]),
                    }
                    cells.push(e.route_discrepancy().map(float).unwrap_or_default());
                    t.push(cells);
                }
                t
            }
            Body::Sweep(r) => {
                let mut t = Table::new(RATIO_HEADER.to_vec());
                for entry in &r.entries {
                    match &entry.reports {
                        Ok(reports) => ratio_rows(&mut t, &entry.label, reports),
                        Err(e) => {
                            let mut cells = vec![entry.label.clone()];
                            cells.extend(std::iter::repeat_n(String::new(), 9));
                            cells.push(e.clone());
                            t.push(cells);
                        }
                    }
                }
                t
            }
        }
    }
}
