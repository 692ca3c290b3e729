//! Construction of the dnoidal wave with prescribed period and frequency.
//!
//! With `ψ = φ²` the profile equation `−φ'' + ωφ − φ³ − φ⁵ = 0` integrates to
//! `(ψ')² = (4/3) ψ (ψ − α₁)(ψ − α₂)(α₃ − ψ)`, where `α₁ < 0 < α₂ < α₃` are the
//! nonzero roots of `P(s) = −s⁴ − 3s³/2 + 3ωs² + 3Bs`. Fixing `ω`, the wave is
//! determined by `α₃ = φ(0)²`, which ranges over
//! `((√(1+4ω) − 1)/2, (√(48ω+9) − 3)/4)`. The period is strictly increasing in
//! `α₃` there, so a prescribed `L` pins `α₃` down uniquely.
//!
//! Internally the amplitude is stored through its distances to both ends of
//! that interval ([`BranchPoint`]); `α₂`, `k'²` and `B` all vanish linearly at
//! the upper end and are computed from the gap directly, which keeps long
//! waves (modulus within `1e−12` of one) at full relative precision.

use std::f64::consts::PI;

use serde::Serialize;

use crate::elliptic::{self, jacobi_sn_cn_dn, EllipticModulus};
use crate::error::{Result, WaveError};
use crate::spectral::SpectralGrid;

/// Distance from the small-amplitude end below which the modulus counts as zero.
pub const DEGENERATE_GAP: f64 = 1e-9;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn check_period(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(WaveError::Domain(format!("period L = {l} must be positive and finite")))
    }
}

fn check_frequency(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(WaveError::Domain(format!("frequency omega = {omega} must be positive and finite")))
    }
}

/// Infimum of the dnoidal periods at frequency `ω`, reached in the
/// small-amplitude limit around the constant solution.
pub fn min_period(omega: f64) -> Result<f64> {
    check_frequency(omega)?;
    let s = (4.0 * omega + 1.0).sqrt();
    // s − 1 = 4ω / (s + 1)
    Ok(2.0 * PI / (s.sqrt() * (4.0 * omega / (s + 1.0)).sqrt()))
}

/// Lower end `ω_min(L)` of the frequencies admitting an `L`-periodic dnoidal wave.
///
/// Solves `min_period(ω) = L`:
/// `ω_min = (√(L² + 16π²)/L + 8π²/L² − 1) / 8`.
pub fn omega_threshold(l: f64) -> Result<f64> {
    check_period(l)?;
    let ratio = 16.0 * PI * PI / (l * l);
    let root = (1.0 + ratio).sqrt();
    Ok((ratio / (root + 1.0) + 0.5 * ratio) / 8.0)
}

/// Open interval of admissible `α₃` at frequency `ω`.
pub fn alpha_bounds(omega: f64) -> Result<(f64, f64)> {
    check_frequency(omega)?;
    let lo = 2.0 * omega / ((1.0 + 4.0 * omega).sqrt() + 1.0);
    let hi = 12.0 * omega / ((48.0 * omega + 9.0).sqrt() + 3.0);
    Ok((lo, hi))
}

/// `q(α) = 16ω − 4α² − 4α + 3`.
pub fn q_poly(alpha: f64, omega: f64) -> f64 {
    16.0 * omega - 4.0 * alpha * alpha - 4.0 * alpha + 3.0
}

/// `r(α) = 6α³ + 9α² − 18ωα + 48ω² + 9ω`.
pub fn r_poly(alpha: f64, omega: f64) -> f64 {
    6.0 * alpha.powi(3) + 9.0 * alpha * alpha - 18.0 * omega * alpha + 48.0 * omega * omega
        + 9.0 * omega
}

/// Lower end `B_ω = (1 − (4ω+1)^{3/2} + 6ω)/12` of the integration constants of dnoidal waves.
pub fn b_lower_limit(omega: f64) -> Result<f64> {
    check_frequency(omega)?;
    Ok((1.0 - (4.0 * omega + 1.0).powf(1.5) + 6.0 * omega) / 12.0)
}

/// A point `(α₃, ω)` of the admissible set, stored with both gaps to the
/// interval ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPoint {
    omega: f64,
    alpha3: f64,
    gap_lo: f64,
    gap_hi: f64,
}

impl BranchPoint {
    pub fn new(alpha3: f64, omega: f64) -> Result<Self> {
        let (lo, hi) = alpha_bounds(omega)?;
        let gap_lo = alpha3 - lo;
        let gap_hi = hi - alpha3;
        if !(gap_lo > 0.0 && gap_hi > 0.0) {
            return Err(WaveError::Domain(format!(
                "alpha3 = {alpha3} outside the admissible interval ({lo}, {hi}) for omega = {omega}"
            )));
        }
        Ok(Self {
            omega,
            alpha3,
            gap_lo,
            gap_hi,
        })
    }

    /// Point at distance `gap_hi` below the upper end of the admissible interval.
    pub fn from_upper_gap(gap_hi: f64, omega: f64) -> Result<Self> {
        let (lo, hi) = alpha_bounds(omega)?;
        let width = hi - lo;
        if !(gap_hi > 0.0 && gap_hi < width) {
            return Err(WaveError::Domain(format!(
                "gap {gap_hi} to the upper amplitude bound outside (0, {width})"
            )));
        }
        Ok(Self {
            omega,
            alpha3: hi - gap_hi,
            gap_lo: width - gap_hi,
            gap_hi,
        })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn alpha3(&self) -> f64 {
        self.alpha3
    }

    pub fn gap_lo(&self) -> f64 {
        self.gap_lo
    }

    pub fn gap_hi(&self) -> f64 {
        self.gap_hi
    }

    pub fn q(&self) -> f64 {
        q_poly(self.alpha3, self.omega)
    }

    pub fn r(&self) -> f64 {
        r_poly(self.alpha3, self.omega)
    }

    fn sqrt3q(&self) -> f64 {
        (3.0 * self.q()).sqrt()
    }

    /// Negative root of `2α² + 3α − 6ω`; the positive one is the upper amplitude bound.
    fn conjugate_upper_root(&self) -> f64 {
        -(3.0 + (48.0 * self.omega + 9.0).sqrt()) / 4.0
    }

    pub fn alpha1(&self) -> f64 {
        -(self.sqrt3q() + 2.0 * self.alpha3 + 3.0) / 4.0
    }

    /// `α₂ = (√(3q) − 2α₃ − 3)/4`, rewritten without cancellation as
    /// `gap_hi (α₃ − α̃) / |α₁|`.
    pub fn alpha2(&self) -> f64 {
        self.gap_hi * (self.alpha3 - self.conjugate_upper_root()) / (-self.alpha1())
    }

    /// `α₃ − α₂ = 12 (α₃ − α_lo)(α₃ + α_lo + 1) / (6α₃ + 3 + √(3q))`.
    pub fn alpha3_minus_alpha2(&self) -> f64 {
        let lo = self.alpha3 - self.gap_lo;
        12.0 * self.gap_lo * (self.alpha3 + lo + 1.0)
            / (6.0 * self.alpha3 + 3.0 + self.sqrt3q())
    }

    /// `k² = −α₁(α₃ − α₂) / (α₃(α₂ − α₁))` and its complement
    /// `k'² = α₂(α₃ − α₁) / (α₃(α₂ − α₁))`.
    pub fn modulus(&self) -> Result<EllipticModulus> {
        let (a1, a2, a3) = (self.alpha1(), self.alpha2(), self.alpha3);
        let denom = a3 * (a2 - a1);
        let m = -a1 * self.alpha3_minus_alpha2() / denom;
        let m1 = a2 * (a3 - a1) / denom;
        if self.gap_lo < DEGENERATE_GAP || !(m > 0.0) {
            return Err(WaveError::Degenerate(format!(
                "alpha3 = {a3} is within {DEGENERATE_GAP:e} of the small-amplitude end (k -> 0) at omega = {}",
                self.omega
            )));
        }
        if !(m1 > 0.0) || !m1.is_finite() {
            return Err(WaveError::Degenerate(format!(
                "elliptic modulus indistinguishable from 1 at alpha3 = {a3}, omega = {}",
                self.omega
            )));
        }
        // The smaller of the pair carries the precision; the other follows from it.
        if m1 < m {
            EllipticModulus::from_pair(1.0 - m1, m1)
        } else {
            EllipticModulus::from_pair(m, 1.0 - m)
        }
    }

    /// `B = −α₃ω + α₃³/3 + α₃²/2`, evaluated as `−(α₃/3) gap_hi (α₃ − α̃)`.
    pub fn b(&self) -> f64 {
        -(self.alpha3 / 3.0) * self.gap_hi * (self.alpha3 - self.conjugate_upper_root())
    }

    /// Period map `Ψ(α, ω) = √8 · 3^{1/4} K(k) / (√α q^{1/4})`.
    pub fn period(&self) -> Result<f64> {
        let k_int = elliptic::complete_k(self.modulus()?)?;
        Ok(8f64.sqrt() * 3f64.powf(0.25) * k_int / (self.alpha3.sqrt() * self.q().powf(0.25)))
    }

    /// Same period through the roots: `2√3 K / √(α₃(α₂ − α₁))`.
    pub fn period_from_roots(&self) -> Result<f64> {
        let k_int = elliptic::complete_k(self.modulus()?)?;
        Ok(2.0 * SQRT3 * k_int / (self.alpha3 * (self.alpha2() - self.alpha1())).sqrt())
    }

    /// `dk/dα = r(α) / (k √3 q^{3/2} α²)` at fixed `ω`.
    pub fn dk_dalpha(&self) -> Result<f64> {
        let k = self.modulus()?.k();
        Ok(self.r() / (k * SQRT3 * self.q().powf(1.5) * self.alpha3 * self.alpha3))
    }

    /// `∂k/∂ω = −√3 (2α + 8ω + 3) / (k α q^{3/2})` at fixed `α`.
    pub fn dk_domega_fixed_alpha(&self) -> Result<f64> {
        let k = self.modulus()?.k();
        Ok(-SQRT3 * (2.0 * self.alpha3 + 8.0 * self.omega + 3.0)
            / (k * self.alpha3 * self.q().powf(1.5)))
    }

    fn period_prefactor(&self) -> f64 {
        8f64.sqrt() * 3f64.powf(0.25) / (self.alpha3 * self.alpha3 * self.q()).powf(1.25)
    }

    /// `∂Ψ/∂α = √8·3^{1/4} (α²q)^{−5/4} [α² q K'(k) dk/dα − α K (16ω − 8α² − 6α + 3)/2]`.
    pub fn dperiod_dalpha(&self) -> Result<f64> {
        let modulus = self.modulus()?;
        let k_int = elliptic::complete_k(modulus)?;
        let dk_int = elliptic::dk_dmodulus(modulus)?;
        let (a, w, q) = (self.alpha3, self.omega, self.q());
        let bracket = a * a * q * dk_int * self.dk_dalpha()?
            - a * k_int * (16.0 * w - 8.0 * a * a - 6.0 * a + 3.0) / 2.0;
        Ok(self.period_prefactor() * bracket)
    }

    /// `∂Ψ/∂ω = √8·3^{1/4} (α²q)^{−5/4} [α² q K'(k) ∂k/∂ω − 4α² K]` at fixed `α`.
    pub fn dperiod_domega(&self) -> Result<f64> {
        let modulus = self.modulus()?;
        let k_int = elliptic::complete_k(modulus)?;
        let dk_int = elliptic::dk_dmodulus(modulus)?;
        let (a, q) = (self.alpha3, self.q());
        let bracket = a * a * q * dk_int * self.dk_domega_fixed_alpha()? - 4.0 * a * a * k_int;
        Ok(self.period_prefactor() * bracket)
    }

    /// `α √(3q) (16ω − 8α² − 6α + 3) / (2 r(α))`; strictly below one on the admissible set.
    pub fn monotonicity_ratio(&self) -> f64 {
        let (a, w) = (self.alpha3, self.omega);
        a * self.sqrt3q() * (16.0 * w - 8.0 * a * a - 6.0 * a + 3.0) / (2.0 * self.r())
    }
}

/// `(α₁, α₂)` for a given `α₃` at frequency `ω`.
pub fn roots_from_alpha3(alpha3: f64, omega: f64) -> Result<(f64, f64)> {
    let point = BranchPoint::new(alpha3, omega)?;
    Ok((point.alpha1(), point.alpha2()))
}

/// `k²` from the amplitude directly:
/// `(√3 α √q − 12ω + 6α² + 9α) / (2√3 α √q)`.
pub fn modulus_from(alpha3: f64, omega: f64) -> Result<f64> {
    let point = BranchPoint::new(alpha3, omega)?;
    let a = alpha3;
    let root = SQRT3 * a * point.q().sqrt();
    let m = (root - 12.0 * omega + 6.0 * a * a + 9.0 * a) / (2.0 * root);
    if point.gap_lo < DEGENERATE_GAP || !(m > 0.0 && m < 1.0) {
        return Err(WaveError::Degenerate(format!(
            "k^2 = {m} at the boundary of (0, 1) for alpha3 = {a}, omega = {omega}"
        )));
    }
    Ok(m)
}

pub fn period_map(alpha3: f64, omega: f64) -> Result<f64> {
    BranchPoint::new(alpha3, omega)?.period()
}

pub fn period_map_dalpha(alpha3: f64, omega: f64) -> Result<f64> {
    BranchPoint::new(alpha3, omega)?.dperiod_dalpha()
}

/// Bisection midpoint that switches to the geometric mean when the bracket
/// spans orders of magnitude.
fn bracket_midpoint(lo: f64, hi: f64) -> f64 {
    if hi > 4.0 * lo {
        (lo * hi).sqrt()
    } else {
        0.5 * (lo + hi)
    }
}

/// Unique admissible amplitude whose wave has period `L` at frequency `ω`.
pub fn solve_branch(l: f64, omega: f64) -> Result<BranchPoint> {
    check_period(l)?;
    check_frequency(omega)?;
    let threshold = omega_threshold(l)?;
    if omega <= threshold {
        return Err(WaveError::NoSolution(format!(
            "omega = {omega} is not above the admissibility threshold omega_min(L) = {threshold:.6} \
             for L = {l}; the shortest dnoidal period at this frequency is {:.6}",
            min_period(omega)?
        )));
    }
    let (lo, hi) = alpha_bounds(omega)?;
    let width = hi - lo;
    if width <= 2.0 * DEGENERATE_GAP {
        return Err(WaveError::Degenerate(format!("amplitude interval too narrow at omega = {omega}")));
    }
    let period_at = |gap: f64| BranchPoint::from_upper_gap(gap, omega)?.period();

    // Work in s = α_hi − α₃; the period decreases in s.
    let mut s_long = width - 2.0 * DEGENERATE_GAP;
    if period_at(s_long)? >= l {
        return Err(WaveError::Degenerate(format!(
            "L = {l} is within the degenerate small-amplitude band above the minimal period {:.12}",
            min_period(omega)?
        )));
    }
    let mut s_short = 0.5 * width;
    while period_at(s_short)? <= l {
        s_long = s_short;
        s_short *= 1e-4;
        if s_short < 1e-290 {
            return Err(WaveError::Degenerate(format!(
                "period L = {l} too long to resolve at omega = {omega}"
            )));
        }
    }
    // Now period(s_short) > L >= period(s_long) with s_short < s_long.
    for _ in 0..2000 {
        if s_long - s_short <= 4.0 * f64::EPSILON * s_long {
            break;
        }
        let mid = bracket_midpoint(s_short, s_long);
        if period_at(mid)? > l {
            s_short = mid;
        } else {
            s_long = mid;
        }
    }

    let mut s = 0.5 * (s_short + s_long);
    for _ in 0..2 {
        let point = BranchPoint::from_upper_gap(s, omega)?;
        let residual = point.period()? - l;
        if residual == 0.0 {
            break;
        }
        // dΨ/ds = −∂Ψ/∂α
        let next = s + residual / point.dperiod_dalpha()?;
        if next.is_finite() && next >= s_short && next <= s_long {
            s = next;
        }
    }
    let point = BranchPoint::from_upper_gap(s, omega)?;
    let residual = (point.period()? - l).abs();
    if residual > 1e-10 * l {
        return Err(WaveError::Numeric(format!(
            "period solve stalled: |Psi - L| = {residual:e} at L = {l}, omega = {omega}"
        )));
    }
    Ok(point)
}

pub fn solve_alpha3(l: f64, omega: f64) -> Result<f64> {
    Ok(solve_branch(l, omega)?.alpha3())
}

/// Full parameter set of one dnoidal wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveParams {
    pub l: f64,
    pub omega: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    /// `k²`
    pub m: f64,
    /// `1 − k²`, kept separately for moduli near one.
    pub m_complement: f64,
    pub g: f64,
    pub beta_sq: f64,
    pub b: f64,
    /// `K(k)`; the period is `L = 2K / c` with `c = 2/(√3 g)`.
    pub quarter_period: f64,
}

impl WaveParams {
    pub fn from_branch(l: f64, point: &BranchPoint) -> Result<Self> {
        let modulus = point.modulus()?;
        let (alpha1, alpha2, alpha3) = (point.alpha1(), point.alpha2(), point.alpha3());
        Ok(Self {
            l,
            omega: point.omega(),
            alpha1,
            alpha2,
            alpha3,
            m: modulus.m(),
            m_complement: modulus.complement(),
            g: 2.0 / (alpha3 * (alpha2 - alpha1)).sqrt(),
            beta_sq: -(alpha3 / alpha1) * modulus.m(),
            b: point.b(),
            quarter_period: elliptic::complete_k(modulus)?,
        })
    }

    pub fn modulus(&self) -> EllipticModulus {
        EllipticModulus::from_pair(self.m, self.m_complement)
            .expect("WaveParams always carries a valid modulus")
    }

    /// Spatial rate `2/(√3 g)` multiplying `x` inside the Jacobi functions.
    pub fn rate(&self) -> f64 {
        2.0 / (SQRT3 * self.g)
    }

    fn reduce(&self, x: f64) -> f64 {
        x - self.l * (x / self.l).round()
    }

    /// Closed-form profile `φ(x) = √α₃ dn(cx) / √(1 + β² sn²(cx))`.
    pub fn phi_at(&self, x: f64) -> f64 {
        let u = self.rate() * self.reduce(x).abs();
        let j = jacobi_sn_cn_dn(u, self.modulus());
        self.alpha3.sqrt() * j.dn / (1.0 + self.beta_sq * j.sn * j.sn).sqrt()
    }

    /// Analytic derivative of [`WaveParams::phi_at`].
    pub fn dphi_at(&self, x: f64) -> f64 {
        let c = self.rate();
        let j = jacobi_sn_cn_dn(c * self.reduce(x), self.modulus());
        let denom = 1.0 + self.beta_sq * j.sn * j.sn;
        -c * self.alpha3.sqrt() * j.sn * j.cn * (self.m * denom + self.beta_sq * j.dn * j.dn)
            / denom.powf(1.5)
    }

    /// `φ''(0) = ωφ(0) − φ(0)³ − φ(0)⁵`.
    pub fn phi_xx_at_origin(&self) -> f64 {
        let p = self.alpha3.sqrt();
        self.omega * p - p.powi(3) - p.powi(5)
    }

    /// `B` recomputed from the plain cubic in `α₃`.
    pub fn b_from_alpha3(&self) -> f64 {
        let a = self.alpha3;
        -a * self.omega + a.powi(3) / 3.0 + a * a / 2.0
    }

    /// `B = −α₁ω + α₁³/3 + α₁²/2`.
    pub fn b_from_alpha1(&self) -> f64 {
        let a = self.alpha1;
        -a * self.omega + a.powi(3) / 3.0 + a * a / 2.0
    }

    /// Residuals of the three Vieta relations of `P`:
    /// `Σα = −3/2`, `Σαα = −3ω`, `Πα = 3B`.
    pub fn vieta_residuals(&self) -> [f64; 3] {
        let (a1, a2, a3) = (self.alpha1, self.alpha2, self.alpha3);
        [
            a1 + a2 + a3 + 1.5,
            a1 * a2 + a1 * a3 + a2 * a3 + 3.0 * self.omega,
            a1 * a2 * a3 - 3.0 * self.b,
        ]
    }
}

/// Grid samples of the wave and its spectral derivative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub l: f64,
    pub n: usize,
    pub x: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
}

impl Profile {
    pub fn grid(&self) -> Result<SpectralGrid> {
        SpectralGrid::new(self.l, self.n)
    }

    /// `max_j |φ_j − φ_{(N−j) mod N}|`.
    pub fn evenness_defect(&self) -> f64 {
        (0..self.n)
            .map(|j| (self.phi[j] - self.phi[(self.n - j) % self.n]).abs())
            .fold(0.0, f64::max)
    }
}

/// Builds the wave with period `L` and frequency `ω` sampled on `N` points.
pub fn build_wave(l: f64, omega: f64, n: usize) -> Result<(WaveParams, Profile)> {
    if n < 64 || !n.is_power_of_two() {
        return Err(WaveError::Config(format!(
            "grid size N = {n} must be a power of two and at least 64"
        )));
    }
    let point = solve_branch(l, omega)?;
    let params = WaveParams::from_branch(l, &point)?;
    let grid = SpectralGrid::new(l, n)?;
    let x = grid.points();
    let phi: Vec<f64> = x.iter().map(|&xj| params.phi_at(xj)).collect();
    let dphi = grid.derivative(&phi);
    Ok((params, Profile { l, n, x, phi, dphi }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResiduals {
    /// `max |(φ')² + φ⁶/3 + φ⁴/2 − ωφ² − B|`
    pub r_quad: f64,
    /// `max |−φ'' + ωφ − φ³ − φ⁵|`
    pub r_ode: f64,
}

pub fn quadrature_residual(prof: &Profile, wp: &WaveParams) -> Result<QuadratureResiduals> {
    let grid = prof.grid()?;
    let phi_xx = grid.second_derivative(&prof.phi);
    let w = wp.omega;
    let mut r_quad = 0.0_f64;
    let mut r_ode = 0.0_f64;
    for j in 0..prof.n {
        let p = prof.phi[j];
        let p2 = p * p;
        let quad = prof.dphi[j].powi(2) + p2.powi(3) / 3.0 + p2 * p2 / 2.0 - w * p2 - wp.b;
        let ode = -phi_xx[j] + w * p - p * p2 - p * p2 * p2;
        r_quad = r_quad.max(quad.abs());
        r_ode = r_ode.max(ode.abs());
    }
    Ok(QuadratureResiduals { r_quad, r_ode })
}

/// Solitary wave `√(12ω / (3 + √(48ω+9) cosh(2√ω x)))`, the `L → ∞` limit.
pub fn solitary_profile(omega: f64, x: f64) -> Result<f64> {
    check_frequency(omega)?;
    let c = (2.0 * omega.sqrt() * x).cosh();
    Ok((12.0 * omega / (3.0 + (48.0 * omega + 9.0).sqrt() * c)).sqrt())
}

/// Amplitude `α` solving `−α³/3 − α²/2 + ω₀α + B = 0` inside the admissible interval.
pub fn alpha_of_b(b: f64, omega0: f64) -> Result<BranchPoint> {
    let lower = b_lower_limit(omega0)?;
    if !(b > lower && b < 0.0) {
        return Err(WaveError::Domain(format!(
            "B = {b} outside ({lower}, 0) for omega = {omega0}"
        )));
    }
    let (lo, hi) = alpha_bounds(omega0)?;
    let width = hi - lo;
    let b_at = |gap: f64| BranchPoint::from_upper_gap(gap, omega0).map(|p| p.b());
    // B decreases from 0 to B_ω as the upper gap grows from 0 to the full width.
    let mut s_small = 0.5 * width;
    let mut s_large = width;
    while b_at(s_small)? <= b {
        s_large = s_small;
        s_small *= 1e-4;
        if s_small < 1e-300 {
            return Err(WaveError::Degenerate(format!("B = {b} too close to 0")));
        }
    }
    for _ in 0..2000 {
        if s_large - s_small <= 4.0 * f64::EPSILON * s_large {
            break;
        }
        let mid = bracket_midpoint(s_small, s_large);
        if b_at(mid)? > b {
            s_small = mid;
        } else {
            s_large = mid;
        }
    }
    let s = 0.5 * (s_small + s_large);
    BranchPoint::from_upper_gap(s.min(width * (1.0 - f64::EPSILON)), omega0)
}

/// Period of the wave at frequency `ω₀` labelled by its integration constant `B`.
pub fn period_of_b(b: f64, omega0: f64) -> Result<f64> {
    alpha_of_b(b, omega0)?.period()
}
