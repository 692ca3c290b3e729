//! Spectra of the linearized operators `L₁ = −∂² + ω − 3φ² − 5φ⁴` and
//! `L₂ = −∂² + ω − φ² − φ⁴` around a dnoidal wave, and the constant `θ`
//! deciding where the zero eigenvalue of `L₁` sits.

use serde::Serialize;

use crate::eigen::{sym_eig, SymmetricMatrix};
use crate::error::{Result, WaveError};
use crate::spectral::second_derivative_matrix;
use crate::wavecons::{Profile, WaveParams};

/// Largest parity defect `‖v ∓ Pv‖` still classified as even or odd.
pub const PARITY_TOL: f64 = 1e-6;

/// Eigenvalues closer than this (relative to the spectral radius) share a parity rotation.
pub const CLUSTER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OperatorKind {
    L1,
    L2,
}

impl OperatorKind {
    pub fn potential(self, omega: f64, phi: f64) -> f64 {
        let p2 = phi * phi;
        match self {
            OperatorKind::L1 => omega - 3.0 * p2 - 5.0 * p2 * p2,
            OperatorKind::L2 => omega - p2 - p2 * p2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// An operator together with the wave it linearizes around.
#[derive(Debug, Clone, Copy)]
pub struct HillOperatorSpec<'a> {
    pub kind: OperatorKind,
    pub wp: &'a WaveParams,
    pub prof: &'a Profile,
}

impl<'a> HillOperatorSpec<'a> {
    pub fn new(kind: OperatorKind, wp: &'a WaveParams, prof: &'a Profile) -> Self {
        Self { kind, wp, prof }
    }

    pub fn potential(&self) -> Vec<f64> {
        self.prof
            .phi
            .iter()
            .map(|&p| self.kind.potential(self.wp.omega, p))
            .collect()
    }

    /// Analytic kernel element: `φ'` for `L₁`, `φ` for `L₂`.
    pub fn kernel(&self) -> &'a [f64] {
        match self.kind {
            OperatorKind::L1 => &self.prof.dphi,
            OperatorKind::L2 => &self.prof.phi,
        }
    }
}

/// Fourier collocation matrix of `−∂² + V` on the profile grid.
pub fn collocation_matrix(spec: &HillOperatorSpec) -> Result<SymmetricMatrix> {
    potential_matrix(spec.prof.l, &spec.potential())
}

/// Collocation matrix for an arbitrary potential sampled on `N` uniform points.
pub fn potential_matrix(l: f64, potential: &[f64]) -> Result<SymmetricMatrix> {
    let n = potential.len();
    if n < 4 || !n.is_multiple_of(2) {
        return Err(WaveError::Config(format!("grid size N = {n} must be even and >= 4")));
    }
    let mut data = second_derivative_matrix(l, n);
    for (i, v) in potential.iter().enumerate() {
        data[i * n + i] += v;
    }
    SymmetricMatrix::new(n, data)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub l: f64,
    pub omega: f64,
    pub n: usize,
    pub kind: OperatorKind,
    pub tol_zero: f64,
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
    pub parity: Vec<Parity>,
    pub parity_defect: Vec<f64>,
    pub sign_changes: Vec<usize>,
    pub n_negative: usize,
    pub zero_index: Option<usize>,
    /// `min ‖v ∓ u/‖u‖‖` between the zero eigenvector and the analytic kernel element.
    pub zero_match_error: Option<f64>,
    pub max_residual: f64,
    pub orthonormality_defect: f64,
}

impl SpectrumReport {
    /// Eigenvalues with `|λ| ≤ tol_zero`.
    pub fn zero_multiplicity(&self) -> usize {
        self.eigenvalues.iter().filter(|l| l.abs() <= self.tol_zero).count()
    }

    /// Smallest eigenvalue above `tol_zero`.
    pub fn first_positive(&self) -> Option<f64> {
        self.eigenvalues.iter().copied().find(|&l| l > self.tol_zero)
    }
}

pub fn default_tol_zero(omega: f64) -> f64 {
    1e-6 * omega.max(1.0)
}

fn reflect(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n).map(|j| v[(n - j) % n]).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `(parity, defect)` for a unit vector under `j ↦ (N − j) mod N`.
pub fn classify_parity(v: &[f64]) -> (Parity, f64) {
    let r = reflect(v);
    let scale = norm(v).max(f64::MIN_POSITIVE);
    let even: f64 = v.iter().zip(&r).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt() / scale;
    let odd: f64 = v.iter().zip(&r).map(|(a, b)| (a + b).powi(2)).sum::<f64>().sqrt() / scale;
    if even <= PARITY_TOL {
        (Parity::Even, even)
    } else if odd <= PARITY_TOL {
        (Parity::Odd, odd)
    } else {
        (Parity::Mixed, even.min(odd))
    }
}

/// Sign changes of a periodic grid function, counted cyclically; entries below
/// `1e−8 · max|v|` are treated as zeros and skipped.
pub fn sign_changes(v: &[f64]) -> usize {
    let cutoff = 1e-8 * v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let signs: Vec<bool> = v.iter().filter(|x| x.abs() > cutoff).map(|&x| x > 0.0).collect();
    if signs.len() < 2 {
        return 0;
    }
    (0..signs.len())
        .filter(|&i| signs[i] != signs[(i + 1) % signs.len()])
        .count()
}

/// Rotates each cluster of (nearly) equal eigenvalues onto eigenvectors of the reflection.
fn rotate_clusters(values: &[f64], vectors: &mut [Vec<f64>]) -> Result<()> {
    let radius = values.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
    let gap = CLUSTER_TOL * radius;
    let mut start = 0;
    while start < values.len() {
        let mut end = start + 1;
        while end < values.len() && values[end] - values[end - 1] < gap {
            end += 1;
        }
        if end - start > 1 {
            let members = &vectors[start..end];
            let reflected: Vec<Vec<f64>> = members.iter().map(|v| reflect(v)).collect();
            let k = end - start;
            let mut data = vec![0.0; k * k];
            for i in 0..k {
                for j in 0..k {
                    data[i * k + j] = dot(&members[i], &reflected[j]);
                }
            }
            let small = sym_eig(&SymmetricMatrix::new(k, data)?)?;
            let rotated: Vec<Vec<f64>> = small
                .vectors
                .iter()
                .map(|c| {
                    let mut out = vec![0.0; members[0].len()];
                    for (coef, v) in c.iter().zip(members) {
                        out.iter_mut().zip(v).for_each(|(o, x)| *o += coef * x);
                    }
                    out
                })
                .collect();
            vectors[start..end].clone_from_slice(&rotated);
        }
        start = end;
    }
    Ok(())
}

/// Full spectrum with counts, parity labels and kernel alignment.
///
/// `tol_zero` defaults to `1e−6 · max(1, ω)`.
pub fn spectrum_report(spec: &HillOperatorSpec, tol_zero: Option<f64>) -> Result<SpectrumReport> {
    let tol_zero = tol_zero.unwrap_or_else(|| default_tol_zero(spec.wp.omega));
    let matrix = collocation_matrix(spec)?;
    let eig = sym_eig(&matrix)?;
    let max_residual = eig.max_residual(&matrix);
    if max_residual > 1e-9 * matrix.frobenius_norm() {
        return Err(WaveError::Numeric(format!(
            "eigenpair residual {max_residual:e} exceeds 1e-9 of the matrix norm"
        )));
    }
    let orthonormality_defect = eig.orthonormality_defect();
    let mut vectors = eig.vectors;
    rotate_clusters(&eig.values, &mut vectors)?;
    // Fix the sign convention: largest-magnitude entry positive.
    for v in vectors.iter_mut() {
        let pivot = v.iter().copied().fold(0.0_f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        if pivot < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let (parity, parity_defect): (Vec<_>, Vec<_>) = vectors.iter().map(|v| classify_parity(v)).unzip();
    let sign_changes = vectors.iter().map(|v| sign_changes(v)).collect();
    let n_negative = eig.values.iter().filter(|&&l| l < -tol_zero).count();
    let zero_index = eig.values.iter().position(|l| l.abs() <= tol_zero);
    let zero_match_error = zero_index.map(|i| {
        let kernel = spec.kernel();
        let scale = norm(kernel);
        let v = &vectors[i];
        let plus: f64 = v.iter().zip(kernel).map(|(a, b)| (a - b / scale).powi(2)).sum::<f64>();
        let minus: f64 = v.iter().zip(kernel).map(|(a, b)| (a + b / scale).powi(2)).sum::<f64>();
        plus.min(minus).sqrt()
    });
    Ok(SpectrumReport {
        l: spec.prof.l,
        omega: spec.wp.omega,
        n: spec.prof.n,
        kind: spec.kind,
        tol_zero,
        eigenvalues: eig.values,
        eigenvectors: vectors,
        parity,
        parity_defect,
        sign_changes,
        n_negative,
        zero_index,
        zero_match_error,
        max_residual,
        orthonormality_defect,
    })
}

/// Non-positive spectrum of `diag(L₁, L₂)`, on the full space and restricted to even functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombinedCounts {
    pub full_negative: usize,
    pub full_zero: usize,
    pub even_negative: usize,
    pub even_zero: usize,
    /// Whether each even zero mode comes from `L₂` (i.e. is `(0, φ)`).
    pub even_zero_from_l2: Vec<bool>,
}

pub fn combined_counts(r1: &SpectrumReport, r2: &SpectrumReport) -> Result<CombinedCounts> {
    if r1.kind != OperatorKind::L1 || r2.kind != OperatorKind::L2 {
        return Err(WaveError::Contract("combined counts need an L1 report and an L2 report".into()));
    }
    if r1.l != r2.l || r1.omega != r2.omega || r1.n != r2.n {
        return Err(WaveError::Contract(format!(
            "reports come from different waves: (L, omega, N) = ({}, {}, {}) vs ({}, {}, {})",
            r1.l, r1.omega, r1.n, r2.l, r2.omega, r2.n
        )));
    }
    let mut counts = CombinedCounts {
        full_negative: 0,
        full_zero: 0,
        even_negative: 0,
        even_zero: 0,
        even_zero_from_l2: Vec::new(),
    };
    for (report, from_l2) in [(r1, false), (r2, true)] {
        for (i, &lambda) in report.eigenvalues.iter().enumerate() {
            let even = report.parity[i] == Parity::Even;
            if lambda < -report.tol_zero {
                counts.full_negative += 1;
                counts.even_negative += usize::from(even);
            } else if lambda.abs() <= report.tol_zero {
                counts.full_zero += 1;
                if even {
                    counts.even_zero += 1;
                    counts.even_zero_from_l2.push(from_l2);
                }
            }
        }
    }
    Ok(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaReport {
    pub theta: f64,
    /// `φ''(0) = ωφ(0) − φ(0)³ − φ(0)⁵`
    pub phi_xx0: f64,
    pub y_end: f64,
    pub dy_end: f64,
    /// `max |W(φ', y) − 1|` over the integration.
    pub wronskian_drift: f64,
    pub steps: usize,
}

/// `θ` from the second solution `y` of `L₁ y = 0` with `y(0) = −1/φ''(0)`, `y'(0) = 0`.
///
/// Over one period `y(x + L) = y(x) + θ φ'(x)`; differentiating at `x = 0`
/// gives `θ = y'(L)/φ''(0)`. The potential uses the closed-form profile at
/// every RK4 stage.
pub fn theta_constant(wp: &WaveParams, dt: f64) -> Result<ThetaReport> {
    let l = wp.l;
    if !(dt > 0.0 && dt <= l / 1e5) {
        return Err(WaveError::Config(format!(
            "theta integration step {dt} must lie in (0, L/1e5] = (0, {}]",
            l / 1e5
        )));
    }
    let phi_xx0 = wp.phi_xx_at_origin();
    if phi_xx0.abs() < 1e-12 {
        return Err(WaveError::Degenerate(format!(
            "phi''(0) = {phi_xx0:e}: the wave is at the constant equilibrium"
        )));
    }
    let steps = (l / dt).ceil() as usize;
    let h = l / steps as f64;
    let w = wp.omega;
    let pot = |x: f64| OperatorKind::L1.potential(w, wp.phi_at(x));
    let wronskian = |x: f64, y: f64, dy: f64| {
        let p = wp.phi_at(x);
        wp.dphi_at(x) * dy - (w * p - p.powi(3) - p.powi(5)) * y
    };
    let (mut y, mut dy) = (-1.0 / phi_xx0, 0.0);
    let mut drift = 0.0_f64;
    let mut v0 = pot(0.0);
    for i in 0..steps {
        let x = i as f64 * h;
        let vm = pot(x + 0.5 * h);
        let v1 = pot(x + h);
        let (k1y, k1d) = (dy, v0 * y);
        let (k2y, k2d) = (dy + 0.5 * h * k1d, vm * (y + 0.5 * h * k1y));
        let (k3y, k3d) = (dy + 0.5 * h * k2d, vm * (y + 0.5 * h * k2y));
        let (k4y, k4d) = (dy + h * k3d, v1 * (y + h * k3y));
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        dy += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
        v0 = v1;
        if i % 64 == 63 || i + 1 == steps {
            drift = drift.max((wronskian(x + h, y, dy) - 1.0).abs());
        }
    }
    Ok(ThetaReport {
        theta: dy / phi_xx0,
        phi_xx0,
        y_end: y,
        dy_end: dy,
        wronskian_drift: drift,
        steps,
    })
}
