//! Finite-section eigenvalues: the `(2N+1) x (2N+1)` cut-off of the Jacobi
//! matrix on `[-N, N]`, diagonalised by a complex single-shift QR iteration.
//!
//! The truncation is tridiagonal, hence already upper Hessenberg, so the QR
//! sweeps start directly. Only the active block is updated since Schur
//! vectors are never formed.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, SpectralError};
use crate::operator::{dist_to_band, JacobiOperator};
use crate::spectrum::SpectralPoint;

const MAX_ITERATIONS_PER_EIGENVALUE: usize = 120;

/// Result of the dense eigensolver on an upper Hessenberg matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HessenbergEigenvalues {
    pub values: Vec<Complex64>,
    /// Positions in `values` that were deflated without meeting the
    /// convergence test.
    pub unconverged: Vec<usize>,
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    fn norm1(&self) -> f64 {
        self.data.iter().map(|x| x.l1_norm()).sum()
    }
}

/// Unitary rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (e1, e2) = (mean + disc, mean - disc);
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// All eigenvalues of an upper Hessenberg matrix (entries below the first
/// subdiagonal are ignored).
pub fn hessenberg_eigenvalues(mut h: DenseMatrix) -> HessenbergEigenvalues {
    let n = h.dim();
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let mut unconverged = Vec::new();
    if n == 0 {
        return HessenbergEigenvalues {
            values,
            unconverged,
        };
    }
    let eps = f64::EPSILON;
    let small = f64::MIN_POSITIVE / eps;
    let scale = h.norm1().max(small);
    let mut hi = n - 1;
    let mut iterations = 0usize;
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(n);

    loop {
        // locate the start of the active unreduced block ending at `hi`
        let mut lo = 0;
        for k in (1..=hi).rev() {
            let sub = h.get(k, k - 1).norm();
            let mut tst = h.get(k - 1, k - 1).norm() + h.get(k, k).norm();
            if tst == 0.0 {
                tst = scale;
            }
            if sub <= eps * tst || sub < small {
                h.set(k, k - 1, Complex64::new(0.0, 0.0));
                lo = k;
                break;
            }
        }
        if lo == hi {
            values[hi] = h.get(hi, hi);
            if hi == 0 {
                break;
            }
            hi -= 1;
            iterations = 0;
            continue;
        }
        iterations += 1;
        if iterations > MAX_ITERATIONS_PER_EIGENVALUE {
            values[hi] = h.get(hi, hi);
            unconverged.push(hi);
            h.set(hi, hi - 1, Complex64::new(0.0, 0.0));
            hi -= 1;
            iterations = 0;
            continue;
        }

        let shift = if iterations.is_multiple_of(10) {
            // exceptional shift to break cycles
            h.get(hi, hi) + 0.75 * h.get(hi, hi - 1).norm()
        } else {
            wilkinson_shift(
                h.get(hi - 1, hi - 1),
                h.get(hi - 1, hi),
                h.get(hi, hi - 1),
                h.get(hi, hi),
            )
        };

        for k in lo..=hi {
            h.set(k, k, h.get(k, k) - shift);
        }
        rotations.clear();
        for k in lo..hi {
            let (c, s) = givens(h.get(k, k), h.get(k + 1, k));
            for j in k..=hi {
                let (x, y) = (h.get(k, j), h.get(k + 1, j));
                h.set(k, j, c * x + s * y);
                h.set(k + 1, j, -s.conj() * x + c * y);
            }
            h.set(k + 1, k, Complex64::new(0.0, 0.0));
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for i in lo..=(k + 1).min(hi) {
                let (x, y) = (h.get(i, k), h.get(i, k + 1));
                h.set(i, k, x * c + y * s.conj());
                h.set(i, k + 1, -x * s + y * c);
            }
        }
        for k in lo..=hi {
            h.set(k, k, h.get(k, k) + shift);
        }
    }
    unconverged.sort_unstable();
    HessenbergEigenvalues {
        values,
        unconverged,
    }
}

/// Pairing of a spectral point with its nearest finite-section eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionMatch {
    pub point: usize,
    pub eigenvalue: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteSectionResult {
    pub half_width: usize,
    pub eigenvalues: Vec<Complex64>,
    pub unconverged: Vec<usize>,
    pub matched: Vec<SectionMatch>,
}

impl FiniteSectionResult {
    /// Eigenvalues at distance at least `min_dist` from `[-2, 2]`.
    pub fn off_band(&self, min_dist: f64) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|&l| dist_to_band(l) >= min_dist)
            .collect()
    }

    /// Matches every point to its nearest eigenvalue.
    pub fn match_points(&mut self, points: &[SpectralPoint]) {
        self.matched = points
            .iter()
            .enumerate()
            .filter_map(|(p, sp)| {
                self.eigenvalues
                    .iter()
                    .enumerate()
                    .map(|(e, &l)| (e, (l - sp.lambda).norm()))
                    .min_by(|x, y| x.1.total_cmp(&y.1))
                    .map(|(e, d)| SectionMatch {
                        point: p,
                        eigenvalue: e,
                        distance: d,
                    })
            })
            .collect();
    }
}

/// Plain cut-off of `J` to the sites `[-N, N]`.
pub fn finite_section_matrix(op: &JacobiOperator, half_width: usize) -> DenseMatrix {
    let n = 2 * half_width + 1;
    let lo = -(half_width as i64);
    let mut m = DenseMatrix::zeros(n);
    for i in 0..n {
        let k = lo + i as i64;
        m.set(i, i, op.b(k));
        if i > 0 {
            m.set(i, i - 1, op.a(k - 1));
        }
        if i + 1 < n {
            m.set(i, i + 1, op.c(k));
        }
    }
    m
}

pub fn finite_section_eigenvalues(
    op: &JacobiOperator,
    half_width: usize,
) -> Result<FiniteSectionResult> {
    if half_width == 0 {
        return Err(SpectralError::InvalidConfig(
            "finite-section half width must be at least 1".into(),
        ));
    }
    if let Some((lo, hi)) = op.support() {
        let radius = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
        if half_width < radius + 10 {
            return Err(SpectralError::InvalidConfig(format!(
                "half width {half_width} must be at least support radius {radius} + 10"
            )));
        }
    }
    let eig = hessenberg_eigenvalues(finite_section_matrix(op, half_width));
    Ok(FiniteSectionResult {
        half_width,
        eigenvalues: eig.values,
        unconverged: eig.unconverged,
        matched: Vec::new(),
    })
}
