//! Fourier differentiation and quadrature on a uniform periodic grid.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, WaveError};

/// Uniform grid `x_j = j L / N`, `j = 0..N`, with cached FFT plans.
#[derive(Clone)]
pub struct SpectralGrid {
    l: f64,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    wavenumbers: Vec<f64>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("l", &self.l)
            .field("n", &self.n)
            .finish()
    }
}

impl SpectralGrid {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(WaveError::Domain(format!("period L = {l} must be positive")));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(WaveError::Config(format!("grid size N = {n} must be even and >= 4")));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let wavenumbers = (0..n).map(|j| wavenumber(j, n, l)).collect();
        Ok(Self {
            l,
            n,
            forward,
            inverse,
            wavenumbers,
        })
    }

    pub fn period(&self) -> f64 {
        self.l
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        self.l / self.n as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| j as f64 * self.spacing()).collect()
    }

    /// Signed angular wavenumbers `2πj/L`; the Nyquist entry is `+πN/L`.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Unnormalized forward transform in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
    }

    /// Inverse transform in place, including the `1/N` factor.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        let scale = 1.0 / self.n as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }

    /// First derivative of a complex grid function; the Nyquist mode is dropped.
    pub fn derivative_complex(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward(&mut buf);
        let nyquist = self.n / 2;
        for (j, z) in buf.iter_mut().enumerate() {
            *z = if j == nyquist {
                Complex64::new(0.0, 0.0)
            } else {
                *z * Complex64::new(0.0, self.wavenumbers[j])
            };
        }
        self.inverse(&mut buf);
        buf
    }

    /// First derivative of a real grid function.
    pub fn derivative(&self, values: &[f64]) -> Vec<f64> {
        let complex: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.derivative_complex(&complex).iter().map(|z| z.re).collect()
    }

    /// Second derivative of a real grid function; the Nyquist mode is kept
    /// with symbol `−(πN/L)²`, matching [`second_derivative_matrix`].
    pub fn second_derivative(&self, values: &[f64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        for (z, xi) in buf.iter_mut().zip(&self.wavenumbers) {
            *z *= -xi * xi;
        }
        self.inverse(&mut buf);
        buf.iter().map(|z| z.re).collect()
    }

    /// Trapezoid rule over one period (spectrally accurate for smooth periodic data).
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().sum::<f64>() * self.spacing()
    }
}

fn wavenumber(j: usize, n: usize, l: f64) -> f64 {
    let signed = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
    2.0 * PI * signed / l
}

/// Dense matrix of `−∂²ₓ` for the Fourier collocation on `N` points of period `L`.
///
/// Row-major. Entries: diagonal `(π²/(3h²) + 1/6)`, off-diagonal
/// `(−1)^{i−j} / (2 sin²((i−j)h/2))` on the `2π` grid `h = 2π/N`, scaled by `(2π/L)²`.
pub fn second_derivative_matrix(l: f64, n: usize) -> Vec<f64> {
    let h = 2.0 * PI / n as f64;
    let scale = (2.0 * PI / l).powi(2);
    let diag = PI * PI / (3.0 * h * h) + 1.0 / 6.0;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = if i == j {
                diag * scale
            } else {
                let d = i as isize - j as isize;
                let sign = if d.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let s = (0.5 * d as f64 * h).sin();
                sign * scale / (2.0 * s * s)
            };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentiates_trigonometric_polynomials_exactly() {
        let l = 3.0;
        let grid = SpectralGrid::new(l, 32).unwrap();
        let kappa = 2.0 * PI / l;
        let f: Vec<f64> = grid
            .points()
            .iter()
            .map(|x| (3.0 * kappa * x).sin() + 0.5 * (kappa * x).cos())
            .collect();
        let df = grid.derivative(&f);
        let d2f = grid.second_derivative(&f);
        for (j, x) in grid.points().iter().enumerate() {
            let exact = 3.0 * kappa * (3.0 * kappa * x).cos() - 0.5 * kappa * (kappa * x).sin();
            let exact2 =
                -9.0 * kappa * kappa * (3.0 * kappa * x).sin() - 0.5 * kappa * kappa * (kappa * x).cos();
            assert!((df[j] - exact).abs() < 1e-12);
            assert!((d2f[j] - exact2).abs() < 1e-11);
        }
    }

    #[test]
    fn matrix_agrees_with_fft_second_derivative() {
        let l = 5.0;
        let n = 16;
        let grid = SpectralGrid::new(l, n).unwrap();
        let mat = second_derivative_matrix(l, n);
        let f: Vec<f64> = grid.points().iter().map(|x| (x * 1.3).sin().exp()).collect();
        let via_fft = grid.second_derivative(&f);
        for i in 0..n {
            let row: f64 = (0..n).map(|j| mat[i * n + j] * f[j]).sum();
            assert!((row + via_fft[i]).abs() < 1e-10, "row {i}");
        }
    }

    #[test]
    fn integrates_constant_and_mean_free_modes() {
        let grid = SpectralGrid::new(2.0, 8).unwrap();
        assert!((grid.integrate(&[1.0; 8]) - 2.0).abs() < 1e-15);
        let cosine: Vec<f64> = grid.points().iter().map(|x| (PI * x).cos()).collect();
        assert!(grid.integrate(&cosine).abs() < 1e-15);
    }

    #[test]
    fn rejects_odd_grids() {
        assert!(SpectralGrid::new(1.0, 7).is_err());
        assert!(SpectralGrid::new(0.0, 8).is_err());
    }
}
