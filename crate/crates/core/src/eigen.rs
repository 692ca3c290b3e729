//! Dense symmetric eigensolver by cyclic Jacobi rotations.

use crate::error::{Result, WaveError};

/// Largest tolerated asymmetry `|a_ij − a_ji|`, relative to `max(1, max |a|)`.
pub const SYMMETRY_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Square symmetric matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Validates symmetry and stores the symmetrized matrix.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(WaveError::Contract(format!(
                "matrix storage has {} entries, expected {n}x{n}",
                data.len()
            )));
        }
        let scale = data.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
        let mut out = data;
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (out[i * n + j], out[j * n + i]);
                if (a - b).abs() > SYMMETRY_TOL * scale || !a.is_finite() || !b.is_finite() {
                    return Err(WaveError::Contract(format!(
                        "matrix not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
                let mean = 0.5 * (a + b);
                out[i * n + j] = mean;
                out[j * n + i] = mean;
            }
        }
        Ok(Self { n, data: out })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(WaveError::Contract("matrix rows must all have length n".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i]).abs());
            }
        }
        worst
    }
}

/// Eigenvalues in ascending order with unit eigenvectors; `vectors[i]` belongs to `values[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl Eigen {
    /// `max_i ‖M v_i − λ_i v_i‖₂`
    pub fn max_residual(&self, m: &SymmetricMatrix) -> f64 {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(lambda, v)| {
                m.apply(v)
                    .iter()
                    .zip(v)
                    .map(|(mv, vi)| (mv - lambda * vi).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max_{ij} |⟨v_i, v_j⟩ − δ_ij|`
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate().skip(i) {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

/// Full eigendecomposition, sweeping until the off-diagonal Frobenius norm
/// drops below `1e−13` of the total.
pub fn sym_eig(m: &SymmetricMatrix) -> Result<Eigen> {
    let n = m.n;
    let mut a = m.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total = m.frobenius_norm();
    let target = 1e-13 * total;
    let mut converged = n <= 1 || total == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(WaveError::Numeric(format!(
            "Jacobi iteration did not converge in {MAX_SWEEPS} sweeps"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    Ok(Eigen {
        values: order.iter().map(|&i| a[i * n + i]).collect(),
        vectors: order
            .iter()
            .map(|&i| (0..n).map(|k| v[k * n + i]).collect())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_by_two() {
        let m = SymmetricMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = sym_eig(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!((e.values[1] - 3.0).abs() < 1e-15);
        assert!(e.max_residual(&m) < 1e-14);
    }

    #[test]
    fn diagonal_is_sorted() {
        let mut data = vec![0.0; 9];
        data[0] = 5.0;
        data[4] = -1.0;
        data[8] = 2.0;
        let e = sym_eig(&SymmetricMatrix::new(3, data).unwrap()).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 5.0]);
    }

    #[test]
    fn random_symmetric_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 50;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let x: f64 = rng.random_range(-1.0..1.0);
                data[i * n + j] = x;
                data[j * n + i] = x;
            }
        }
        let m = SymmetricMatrix::new(n, data).unwrap();
        let e = sym_eig(&m).unwrap();
        assert!(e.max_residual(&m) <= 1e-9 * m.frobenius_norm());
        assert!(e.orthonormality_defect() <= 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = (0..n).map(|i| m.get(i, i)).sum();
        assert!((trace - e.values.iter().sum::<f64>()).abs() < 1e-11);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let err = SymmetricMatrix::from_rows(&[vec![1.0, 0.0], vec![1e-6, 1.0]]).unwrap_err();
        assert!(matches!(err, WaveError::Contract(_)));
        assert!(SymmetricMatrix::from_rows(&[vec![1.0, 1e-12], vec![0.0, 1.0]]).is_ok());
    }
}
