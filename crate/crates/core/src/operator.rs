//! The Jacobi operator model, its perturbation-size functionals and the
//! conformal geometry of the Zhukovsky map.
//!
//! A [`JacobiOperator`] is a finitely supported perturbation of the discrete
//! Laplacian: row `k` acts as `a[k-1] u[k-1] + b[k] u[k] + c[k] u[k+1]`, and
//! outside the stored window `a = c = 1`, `b = 0`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};

/// Exclusion radius around `[-2, 2]` in the lambda plane and around `+-1` in the
/// z plane.
pub const TOL_EDGE: f64 = 1e-12;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Whole-line Jacobi matrix with a compactly supported complex perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorJson", into = "OperatorJson")]
pub struct JacobiOperator {
    support_lo: i64,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    c: Vec<Complex64>,
}

impl JacobiOperator {
    /// The discrete Laplacian `J0`.
    pub fn free() -> Self {
        JacobiOperator {
            support_lo: 0,
            a: Vec::new(),
            b: Vec::new(),
            c: Vec::new(),
        }
    }

    /// Builds an operator from its window `support_lo ..= support_lo + len - 1`.
    ///
    /// The lists must have equal length and every product `a_j c_j` must be
    /// nonzero. Leading and trailing free entries are trimmed.
    pub fn new(
        support_lo: i64,
        a: Vec<Complex64>,
        b: Vec<Complex64>,
        c: Vec<Complex64>,
    ) -> Result<Self> {
        if a.len() != b.len() || b.len() != c.len() {
            return Err(SpectralError::InvalidOperator(format!(
                "a, b, c must have equal length (got {}, {}, {})",
                a.len(),
                b.len(),
                c.len()
            )));
        }
        for (i, ((aj, bj), cj)) in a.iter().zip(&b).zip(&c).enumerate() {
            let j = support_lo + i as i64;
            if !(aj.is_finite() && bj.is_finite() && cj.is_finite()) {
                return Err(SpectralError::InvalidOperator(format!(
                    "non-finite entry at index {j}"
                )));
            }
            if (aj * cj).norm() == 0.0 {
                return Err(SpectralError::InvalidOperator(format!(
                    "a_j c_j vanishes at index {j}"
                )));
            }
        }
        let mut op = JacobiOperator {
            support_lo,
            a,
            b,
            c,
        };
        op.trim();
        Ok(op)
    }

    /// Discrete Schrödinger operator (`a = c = 1`) with potential `b` starting at `support_lo`.
    pub fn schrodinger(support_lo: i64, b: Vec<Complex64>) -> Self {
        let n = b.len();
        Self::new(support_lo, vec![ONE; n], b, vec![ONE; n])
            .expect("schrodinger entries are always admissible when finite")
    }

    /// Single-site potential `b` at index 0.
    pub fn single_site(b: Complex64) -> Self {
        Self::schrodinger(0, vec![b])
    }

    fn trim(&mut self) {
        let free = |i: usize, op: &Self| op.a[i] == ONE && op.b[i] == ZERO && op.c[i] == ONE;
        let mut start = 0;
        while start < self.b.len() && free(start, self) {
            start += 1;
        }
        if start == self.b.len() {
            *self = Self::free();
            return;
        }
        let mut end = self.b.len();
        while free(end - 1, self) {
            end -= 1;
        }
        self.a = self.a[start..end].to_vec();
        self.b = self.b[start..end].to_vec();
        self.c = self.c[start..end].to_vec();
        self.support_lo += start as i64;
    }

    /// Stored window `(lo, hi)`, or `None` for the free operator.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.b.is_empty() {
            None
        } else {
            Some((self.support_lo, self.support_lo + self.b.len() as i64 - 1))
        }
    }

    pub fn is_free(&self) -> bool {
        self.b.is_empty()
    }

    pub fn is_schrodinger(&self) -> bool {
        self.a.iter().chain(&self.c).all(|&x| x == ONE)
    }

    fn slot(&self, j: i64) -> Option<usize> {
        let i = j - self.support_lo;
        (i >= 0 && (i as usize) < self.b.len()).then_some(i as usize)
    }

    pub fn a(&self, j: i64) -> Complex64 {
        self.slot(j).map_or(ONE, |i| self.a[i])
    }

    pub fn b(&self, j: i64) -> Complex64 {
        self.slot(j).map_or(ZERO, |i| self.b[i])
    }

    pub fn c(&self, j: i64) -> Complex64 {
        self.slot(j).map_or(ONE, |i| self.c[i])
    }

    /// The product `a_j c_j`, the only combination of the off-diagonals that
    /// survives a diagonal similarity.
    pub fn ac(&self, j: i64) -> Complex64 {
        self.a(j) * self.c(j)
    }

    /// Diagonal similarity `a_j -> a_j r_j`, `c_j -> c_j / r_j` with `r_j`
    /// given on `start .. start + r.len()` and equal to 1 elsewhere.
    pub fn gauge_transform(&self, start: i64, r: &[Complex64]) -> Result<Self> {
        if let Some(j) = r.iter().position(|x| x.norm() == 0.0 || !x.is_finite()) {
            return Err(SpectralError::InvalidOperator(format!(
                "gauge factor r_{} must be finite and nonzero",
                start + j as i64
            )));
        }
        let (mut lo, mut hi) = self.support().unwrap_or((start, start));
        if !r.is_empty() {
            lo = lo.min(start);
            hi = hi.max(start + r.len() as i64 - 1);
        }
        let factor = |j: i64| {
            let i = j - start;
            if i >= 0 && (i as usize) < r.len() {
                r[i as usize]
            } else {
                ONE
            }
        };
        let idx = lo..=hi;
        Self::new(
            lo,
            idx.clone().map(|j| self.a(j) * factor(j)).collect(),
            idx.clone().map(|j| self.b(j)).collect(),
            idx.map(|j| self.c(j) / factor(j)).collect(),
        )
    }

    /// Parses the operator JSON schema.
    pub fn from_json_str(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Wire format: `{"support_lo": int, "a": [[re,im],..], "b": [[re,im],..], "c": [[re,im],..]}`.
/// Omitted `a` or `c` default to all ones.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorJson {
    pub support_lo: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<[f64; 2]>>,
    pub b: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<[f64; 2]>>,
}

fn to_complex(list: &[[f64; 2]]) -> Vec<Complex64> {
    list.iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect()
}

fn to_pairs(list: &[Complex64]) -> Vec<[f64; 2]> {
    list.iter().map(|z| [z.re, z.im]).collect()
}

impl TryFrom<OperatorJson> for JacobiOperator {
    type Error = SpectralError;

    fn try_from(raw: OperatorJson) -> Result<Self> {
        let n = raw.b.len();
        let a = raw.a.as_deref().map_or(vec![ONE; n], to_complex);
        let c = raw.c.as_deref().map_or(vec![ONE; n], to_complex);
        JacobiOperator::new(raw.support_lo, a, to_complex(&raw.b), c)
    }
}

impl From<JacobiOperator> for OperatorJson {
    fn from(op: JacobiOperator) -> Self {
        OperatorJson {
            support_lo: op.support_lo,
            a: Some(to_pairs(&op.a)),
            b: to_pairs(&op.b),
            c: Some(to_pairs(&op.c)),
        }
    }
}

/// Perturbation-size functionals of an operator.
///
/// `delta_r[m] = |b_m| + |1 - a_{m-1} c_{m-1}|` and
/// `delta_l[m] = |b_m| + |1 - a_m c_m|`; only nonzero-capable indices are stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationGauge {
    pub delta_total: f64,
    pub delta_r: BTreeMap<i64, f64>,
    pub delta_l: BTreeMap<i64, f64>,
    pub trace_norm_proxy: f64,
}

impl PerturbationGauge {
    /// Right tail `sum_{m > n} delta_r[m]`.
    pub fn tail_r(&self, n: i64) -> f64 {
        self.delta_r.range(n + 1..).map(|(_, d)| d).sum()
    }

    /// Left tail `sum_{m < n} delta_l[m]`.
    pub fn tail_l(&self, n: i64) -> f64 {
        self.delta_l.range(..n).map(|(_, d)| d).sum()
    }

    /// `sqrt(Delta) + Delta`, the size that enters the determinant bounds.
    pub fn root_plus_delta(&self) -> f64 {
        self.delta_total.sqrt() + self.delta_total
    }
}

pub fn compute_gauge(op: &JacobiOperator) -> PerturbationGauge {
    let mut delta_r = BTreeMap::new();
    let mut delta_l = BTreeMap::new();
    let mut delta_total = 0.0;
    let mut proxy = 0.0;
    if let Some((lo, hi)) = op.support() {
        for j in lo..=hi {
            let db = op.b(j).norm();
            let dac = (ONE - op.ac(j)).norm();
            delta_total += db + dac;
            proxy += (ONE - op.a(j)).norm() + db + (ONE - op.c(j)).norm();
            delta_l.insert(j, db + dac);
        }
        for m in lo..=hi + 1 {
            delta_r.insert(m, op.b(m).norm() + (ONE - op.ac(m - 1)).norm());
        }
    }
    PerturbationGauge {
        delta_total,
        delta_r,
        delta_l,
        trace_norm_proxy: proxy,
    }
}

/// A point `z` of the punctured unit disk together with `lambda = z + 1/z` and
/// `omega = 2z / (1 - z^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralParameter {
    z: Complex64,
    lambda: Complex64,
    omega: Complex64,
}

impl SpectralParameter {
    pub fn new(z: Complex64) -> Result<Self> {
        let r = z.norm();
        if !(r > 0.0 && r < 1.0) || !z.is_finite() {
            return Err(SpectralError::OutsideDisk(z));
        }
        Ok(SpectralParameter {
            z,
            lambda: zhukovsky(z),
            omega: omega(z),
        })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }
}

pub fn zhukovsky(z: Complex64) -> Complex64 {
    z + z.inv()
}

pub fn omega(z: Complex64) -> Complex64 {
    2.0 * z / (ONE - z * z)
}

/// Root of `z^2 - lambda z + 1 = 0` inside the unit disk.
///
/// The larger root is formed without cancellation and inverted, since the two
/// roots multiply to one.
pub fn zhukovsky_inverse(lambda: Complex64) -> Result<Complex64> {
    if !lambda.is_finite() || dist_to_band(lambda) <= TOL_EDGE {
        return Err(SpectralError::NearBand {
            lambda,
            tol: TOL_EDGE,
        });
    }
    let s = (lambda * lambda - 4.0).sqrt();
    let plus = lambda + s;
    let minus = lambda - s;
    let big = if plus.norm() >= minus.norm() {
        plus
    } else {
        minus
    };
    Ok(2.0 / big)
}

/// Euclidean distance from `lambda` to the segment `[-2, 2]`.
pub fn dist_to_band(lambda: Complex64) -> f64 {
    let dx = (lambda.re.abs() - 2.0).max(0.0);
    dx.hypot(lambda.im)
}
