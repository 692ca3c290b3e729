//! Complete elliptic integrals and Jacobi elliptic functions.
//!
//! Everything is parameterized by `m = k²`. The complement `m₁ = 1 − m` is
//! carried alongside `m` so that moduli extremely close to one (long-wave
//! limit) keep full relative precision in `k' = √m₁`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Result, WaveError};

const AGM_TOL: f64 = 1e-15;
const AGM_MAX_ITER: usize = 64;

/// Below this complement the Jacobi functions switch to the hyperbolic expansion.
const NEAR_ONE: f64 = 1e-10;

/// Elliptic parameter `m = k²` together with its complement `1 − m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticModulus {
    m: f64,
    m1: f64,
}

impl EllipticModulus {
    pub fn new(m: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(WaveError::Domain(format!(
                "elliptic parameter m = {m} outside [0, 1]"
            )));
        }
        Ok(Self { m, m1: 1.0 - m })
    }

    /// Builds the parameter from `m₁ = 1 − m`, exact for tiny complements.
    pub fn from_complement(m1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m1) {
            return Err(WaveError::Domain(format!(
                "complementary parameter 1 - m = {m1} outside [0, 1]"
            )));
        }
        Ok(Self { m: 1.0 - m1, m1 })
    }

    /// Both halves computed independently; they must sum to one up to rounding.
    pub(crate) fn from_pair(m: f64, m1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) || !(0.0..=1.0).contains(&m1) || (m + m1 - 1.0).abs() > 1e-12
        {
            return Err(WaveError::Domain(format!(
                "inconsistent elliptic parameter pair m = {m}, 1 - m = {m1}"
            )));
        }
        Ok(Self { m, m1 })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn complement(&self) -> f64 {
        self.m1
    }

    pub fn k(&self) -> f64 {
        self.m.sqrt()
    }

    pub fn k_prime(&self) -> f64 {
        self.m1.sqrt()
    }
}

/// Arithmetic-geometric mean sequence started at `(1, k')`.
///
/// `a[n]` are the arithmetic means and `c[n] = (a[n-1] − b[n-1]) / 2`, with
/// `c[0] = k`.
struct AgmSequence {
    a: Vec<f64>,
    c: Vec<f64>,
}

impl AgmSequence {
    fn new(m: EllipticModulus) -> Self {
        let mut a = vec![1.0];
        let mut c = vec![m.k()];
        let mut an = 1.0_f64;
        let mut bn = m.k_prime();
        for _ in 0..AGM_MAX_ITER {
            if (an - bn).abs() <= AGM_TOL * an {
                break;
            }
            let next_a = 0.5 * (an + bn);
            let next_b = (an * bn).sqrt();
            c.push(0.5 * (an - bn));
            a.push(next_a);
            an = next_a;
            bn = next_b;
        }
        Self { a, c }
    }

    fn limit(&self) -> f64 {
        *self.a.last().expect("sequence is never empty")
    }

    fn quarter_period(&self) -> f64 {
        FRAC_PI_2 / self.limit()
    }
}

/// Complete elliptic integral of the first kind, `K(m) = ∫₀^{π/2} dθ / √(1 − m sin²θ)`.
pub fn complete_k(m: EllipticModulus) -> Result<f64> {
    if m.complement() == 0.0 {
        return Err(WaveError::Domain("K(m) diverges at m = 1".into()));
    }
    if m.m() == 0.0 {
        return Ok(FRAC_PI_2);
    }
    Ok(AgmSequence::new(m).quarter_period())
}

/// Complete elliptic integral of the second kind, `E(m) = ∫₀^{π/2} √(1 − m sin²θ) dθ`.
pub fn complete_e(m: EllipticModulus) -> Result<f64> {
    if m.complement() == 0.0 {
        return Ok(1.0);
    }
    Ok(complete_ke(m)?.1)
}

/// `(K(m), E(m))` from a single AGM pass.
pub fn complete_ke(m: EllipticModulus) -> Result<(f64, f64)> {
    if m.complement() == 0.0 {
        return Err(WaveError::Domain("K(m) diverges at m = 1".into()));
    }
    if m.m() == 0.0 {
        return Ok((FRAC_PI_2, FRAC_PI_2));
    }
    let seq = AgmSequence::new(m);
    let k = seq.quarter_period();
    // E = K (1 − Σ 2^{n−1} c_n²)
    let mut weight = 0.5;
    let mut sum = 0.0;
    for cn in &seq.c {
        sum += weight * cn * cn;
        weight *= 2.0;
    }
    Ok((k, k * (1.0 - sum)))
}

/// `dK/dk = (E − k'² K) / (k k'²)`.
pub fn dk_dmodulus(m: EllipticModulus) -> Result<f64> {
    if m.m() == 0.0 {
        // K ≈ π/2 (1 + m/4): the derivative in k vanishes at k = 0.
        return Ok(0.0);
    }
    let (k_int, e_int) = complete_ke(m)?;
    Ok((e_int - m.complement() * k_int) / (m.k() * m.complement()))
}

/// `dE/dk = (E − K) / k`.
pub fn de_dmodulus(m: EllipticModulus) -> Result<f64> {
    if m.m() == 0.0 {
        return Ok(0.0);
    }
    let (k_int, e_int) = complete_ke(m)?;
    Ok((e_int - k_int) / m.k())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Jacobi elliptic functions `sn`, `cn`, `dn` at real argument `u`.
pub fn jacobi_sn_cn_dn(u: f64, m: EllipticModulus) -> JacobiTriple {
    if m.m() == 0.0 {
        return JacobiTriple {
            sn: u.sin(),
            cn: u.cos(),
            dn: 1.0,
        };
    }
    if m.complement() == 0.0 {
        let sech = 1.0 / u.cosh();
        return JacobiTriple {
            sn: u.tanh(),
            cn: sech,
            dn: sech,
        };
    }
    if m.complement() < NEAR_ONE {
        return near_one(u, m);
    }
    descending_landen(u, m)
}

/// Descending Landen / AGM scheme: `φ_N = 2^N a_N u`, then
/// `φ_{n−1} = (φ_n + asin(c_n sin φ_n / a_n)) / 2` down to `φ_0 = am(u)`.
fn descending_landen(u: f64, m: EllipticModulus) -> JacobiTriple {
    let seq = AgmSequence::new(m);
    let period = 4.0 * seq.quarter_period();
    let reduced = u - period * (u / period).round();

    let levels = seq.a.len() - 1;
    let mut phi = (levels as f64).exp2() * seq.limit() * reduced;
    for n in (1..=levels).rev() {
        phi = 0.5 * (phi + (seq.c[n] / seq.a[n] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    // dn² = k'² + k² cn² has no cancellation, unlike 1 − m sn².
    let dn = (m.complement() + m.m() * cn * cn).sqrt();
    JacobiTriple { sn, cn, dn }
}

/// First-order expansion in `m₁` around the hyperbolic limit, valid for `|u| ≤ K/2`.
fn hyperbolic_first_order(u: f64, m1: f64) -> JacobiTriple {
    let t = u.tanh();
    let s = 1.0 / u.cosh();
    let sc = u.sinh() * u.cosh();
    let lower = 0.25 * m1 * (sc - u);
    let upper = 0.25 * m1 * (sc + u);
    JacobiTriple {
        sn: t + lower * s * s,
        cn: s - lower * t * s,
        dn: s + upper * t * s,
    }
}

/// Moduli with `m₁ < 1e−10`: reduce to `|v| ≤ K/2` with the quarter-period
/// shift `u = v + K` and use the hyperbolic expansion there.
fn near_one(u: f64, m: EllipticModulus) -> JacobiTriple {
    let quarter = AgmSequence::new(m).quarter_period();
    let kp = m.k_prime();
    let m1 = m.complement();
    let period = 4.0 * quarter;
    let reduced = u - period * (u / period).round();
    let (abs_u, sign) = if reduced < 0.0 {
        (-reduced, -1.0)
    } else {
        (reduced, 1.0)
    };

    let triple = if abs_u <= 0.5 * quarter {
        hyperbolic_first_order(abs_u, m1)
    } else if abs_u <= 1.5 * quarter {
        let v = hyperbolic_first_order(abs_u - quarter, m1);
        JacobiTriple {
            sn: v.cn / v.dn,
            cn: -kp * v.sn / v.dn,
            dn: kp / v.dn,
        }
    } else {
        let w = hyperbolic_first_order(abs_u - 2.0 * quarter, m1);
        JacobiTriple {
            sn: -w.sn,
            cn: -w.cn,
            dn: w.dn,
        }
    };
    JacobiTriple {
        sn: sign * triple.sn,
        ..triple
    }
}

/// `E(m)/K(m)`, used by the closed form of `∫ 1/φ²`.
pub fn e_over_k(m: EllipticModulus) -> Result<f64> {
    let (k_int, e_int) = complete_ke(m)?;
    Ok(e_int / k_int)
}

/// Period `2K(m)` of `dn`.
pub fn dn_period(m: EllipticModulus) -> Result<f64> {
    Ok(2.0 * complete_k(m)?)
}
