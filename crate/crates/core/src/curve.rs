//! The fixed-period curve `ω ↦ φ_ω` and the quantities differentiated along it.
//!
//! Every `ω`-derivative here is a centered difference along the curve, i.e.
//! with `α₃ = Λ(ω)` re-solved at each abscissa. Closed forms are used as
//! cross-checks where they exist.

use rayon::prelude::*;
use serde::Serialize;

use crate::elliptic;
use crate::error::{Result, WaveError};
use crate::wavecons::{self, omega_threshold, solve_branch, BranchPoint, WaveParams};

/// Default finite-difference step `1e−4 · max(1, ω)`.
pub fn default_step(omega: f64) -> f64 {
    1e-4 * omega.max(1.0)
}

/// Algebraic data of the wave on the curve; no grid involved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub omega: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub k: f64,
    pub b: f64,
    pub e_over_k: f64,
    /// `∫₀ᴸ φ⁻² dx` from the elliptic closed form.
    pub inv2: f64,
}

impl CurvePoint {
    pub fn at(l: f64, omega: f64) -> Result<Self> {
        let point = solve_branch(l, omega)?;
        Self::from_branch(l, &point)
    }

    fn from_branch(l: f64, point: &BranchPoint) -> Result<Self> {
        let modulus = point.modulus()?;
        let ratio = elliptic::e_over_k(modulus)?;
        let (a1, a2) = (point.alpha1(), point.alpha2());
        Ok(Self {
            omega: point.omega(),
            alpha1: a1,
            alpha2: a2,
            alpha3: point.alpha3(),
            k: modulus.k(),
            b: point.b(),
            e_over_k: ratio,
            inv2: inverse_square_integral(l, a1, a2, ratio),
        })
    }
}

/// `∫₀ᴸ φ⁻² = L/α₁ − (E/K) L/α₁ + (E/K) L/α₂`.
pub fn inverse_square_integral(l: f64, alpha1: f64, alpha2: f64, e_over_k: f64) -> f64 {
    l * (1.0 - e_over_k) / alpha1 + e_over_k * l / alpha2
}

/// One point of the fixed-`L` curve with its grid integrals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSample {
    pub l: f64,
    pub n: usize,
    pub omega: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub b: f64,
    /// `k²`
    pub m: f64,
    /// `∫φ²`
    pub mass: f64,
    /// `∫φ⁴`
    pub p4: f64,
    /// `∫φ⁶`
    pub p6: f64,
    /// `∫φ⁻²`, elliptic closed form.
    pub inv2: f64,
    /// `∫φ⁻²`, trapezoid rule.
    pub inv2_quad: f64,
    /// `∫(φ')²`
    pub dphi2: f64,
    /// `∫(φ'/φ)²`
    pub dphi2_over_phi2: f64,
    pub min_phi_sq: f64,
    pub dmass_domega: Option<f64>,
    /// `d''(ω) = ½ d/dω ∫φ²`
    pub d2_dd: Option<f64>,
}

fn moments(l: f64, omega: f64, n: usize) -> Result<CurveSample> {
    let (wp, prof) = wavecons::build_wave(l, omega, n)?;
    let grid = prof.grid()?;
    let sq: Vec<f64> = prof.phi.iter().map(|p| p * p).collect();
    let integral = |f: &dyn Fn(usize) -> f64| grid.integrate(&(0..n).map(f).collect::<Vec<_>>());
    let point = CurvePoint::from_branch(l, &solve_branch(l, omega)?)?;
    Ok(CurveSample {
        l,
        n,
        omega,
        alpha1: wp.alpha1,
        alpha2: wp.alpha2,
        alpha3: wp.alpha3,
        b: wp.b,
        m: wp.m,
        mass: grid.integrate(&sq),
        p4: integral(&|j| sq[j] * sq[j]),
        p6: integral(&|j| sq[j].powi(3)),
        inv2: point.inv2,
        inv2_quad: integral(&|j| 1.0 / sq[j]),
        dphi2: integral(&|j| prof.dphi[j].powi(2)),
        dphi2_over_phi2: integral(&|j| prof.dphi[j].powi(2) / sq[j]),
        min_phi_sq: sq.iter().copied().fold(f64::INFINITY, f64::min),
        dmass_domega: None,
        d2_dd: None,
    })
}

/// Samples the curve at each `ω`; failures are reported per entry and do not stop the sweep.
///
/// Mass derivatives use centered differences over neighbouring successful
/// samples, one-sided at the ends of the list.
pub fn sample_curve(l: f64, omegas: &[f64], n: usize) -> Vec<Result<CurveSample>> {
    let mut out: Vec<Result<CurveSample>> =
        omegas.par_iter().map(|&w| moments(l, w, n)).collect();
    let ok = |i: usize, out: &[Result<CurveSample>]| out[i].as_ref().ok().map(|s| (s.omega, s.mass));
    let derivs: Vec<Option<f64>> = (0..out.len())
        .map(|i| {
            ok(i, &out)?;
            let left = if i > 0 { ok(i - 1, &out) } else { None };
            let right = if i + 1 < out.len() { ok(i + 1, &out) } else { None };
            let here = ok(i, &out);
            let (a, b) = match (left, right) {
                (Some(a), Some(b)) => (a, b),
                (None, Some(b)) => (here?, b),
                (Some(a), None) => (a, here?),
                (None, None) => return None,
            };
            Some((b.1 - a.1) / (b.0 - a.0))
        })
        .collect();
    for (entry, d) in out.iter_mut().zip(derivs) {
        if let Ok(sample) = entry {
            sample.dmass_domega = d;
            sample.d2_dd = d.map(|v| 0.5 * v);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn of(value: f64) -> Option<Self> {
        if value > 0.0 {
            Some(Sign::Positive)
        } else if value < 0.0 {
            Some(Sign::Negative)
        } else {
            None
        }
    }
}

/// A sign asserted for a derivative and what was actually measured.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignCheck {
    pub quantity: String,
    pub value: f64,
    pub expected: Sign,
    pub holds: bool,
}

impl SignCheck {
    fn new(quantity: &str, value: f64, expected: Sign) -> Self {
        Self {
            quantity: quantity.to_string(),
            value,
            expected,
            holds: Sign::of(value) == Some(expected),
        }
    }
}

/// Derivatives along the curve at one `ω`, with the asserted signs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeAudit {
    pub l: f64,
    pub omega: f64,
    pub h: f64,
    pub dalpha3: f64,
    /// Total `dk/dω` along the curve.
    pub dk: f64,
    pub db: f64,
    pub dalpha1: f64,
    pub dalpha2: f64,
    /// Closed-form `∂k/∂ω` at fixed amplitude.
    pub dk_partial_closed: f64,
    /// Centered difference of `k` at fixed amplitude.
    pub dk_partial_fd: f64,
    pub dk_partial_rel_error: f64,
    /// `∂k/∂ω + (dk/dα) Λ'` with `Λ' = −Ψ_ω/Ψ_α`, all closed forms.
    pub dk_total_closed: f64,
    pub dk_total_rel_error: f64,
    /// `dT/dB` at fixed `ω`.
    pub dt_db: f64,
    /// `ω − Λ² − Λ`
    pub omega_minus_lambda_terms: f64,
    /// `α₁⁻¹ (d/dk)[(K − E)/K] dk/dω`
    pub alpha1_ratio_term: f64,
    /// `d/dω [α₂⁻¹ E/K]`
    pub d_alpha2_ratio: f64,
    pub checks: Vec<SignCheck>,
}

impl DerivativeAudit {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SignCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

fn check_window(l: f64, omega: f64, h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(WaveError::Config(format!("difference step h = {h} must be positive")));
    }
    let threshold = omega_threshold(l)?;
    if omega - h <= threshold {
        return Err(WaveError::Domain(format!(
            "window [{}, {}] crosses the admissibility threshold omega_min(L) = {threshold:.6}",
            omega - h,
            omega + h
        )));
    }
    Ok(())
}

/// Fixed-`ω` derivative of the period with respect to `B`, step `1e−4 |B|`.
pub fn dperiod_db(b: f64, omega: f64) -> Result<f64> {
    let hb = 1e-4 * b.abs();
    Ok((wavecons::period_of_b(b + hb, omega)? - wavecons::period_of_b(b - hb, omega)?) / (2.0 * hb))
}

pub fn derivative_audit(l: f64, omega: f64, h: f64) -> Result<DerivativeAudit> {
    check_window(l, omega, h)?;
    let mid = solve_branch(l, omega)?;
    let lo = CurvePoint::at(l, omega - h)?;
    let hi = CurvePoint::at(l, omega + h)?;
    let here = CurvePoint::from_branch(l, &mid)?;
    let d = |f: fn(&CurvePoint) -> f64| (f(&hi) - f(&lo)) / (2.0 * h);

    let dk_partial_closed = mid.dk_domega_fixed_alpha()?;
    let k_fixed = |w: f64| -> Result<f64> { Ok(BranchPoint::new(mid.alpha3(), w)?.modulus()?.k()) };
    // At fixed α the admissible interval moves with ω; keep the stencil inside it.
    let h_fixed = h
        .min(0.25 * mid.gap_hi() * (48.0 * omega + 9.0).sqrt() / 6.0)
        .min(0.25 * mid.gap_lo() * (1.0 + 4.0 * omega).sqrt());
    let dk_partial_fd = (k_fixed(omega + h_fixed)? - k_fixed(omega - h_fixed)?) / (2.0 * h_fixed);
    let dlambda_closed = -mid.dperiod_domega()? / mid.dperiod_dalpha()?;
    let dk_total_closed = dk_partial_closed + mid.dk_dalpha()? * dlambda_closed;

    let dk = d(|p| p.k);
    let alpha = mid.alpha3();
    // (d/dk)[(K − E)/K] = −(d/dk)(E/K)
    let modulus = mid.modulus()?;
    let (k_int, e_int) = elliptic::complete_ke(modulus)?;
    let d_ratio_dk =
        (elliptic::de_dmodulus(modulus)? * k_int - e_int * elliptic::dk_dmodulus(modulus)?) / (k_int * k_int);

    let dalpha3 = d(|p| p.alpha3);
    let db = d(|p| p.b);
    let dalpha1 = d(|p| p.alpha1);
    let dalpha2 = d(|p| p.alpha2);
    let dt_db = dperiod_db(here.b, omega)?;
    let gap = omega - alpha * alpha - alpha;
    let alpha1_ratio_term = -d_ratio_dk * dk / here.alpha1;
    let d_alpha2_ratio = d(|p| p.e_over_k / p.alpha2);

    let checks = vec![
        SignCheck::new("dLambda/domega", dalpha3, Sign::Positive),
        SignCheck::new("dk/domega at fixed alpha (closed form)", dk_partial_closed, Sign::Negative),
        SignCheck::new("dB/domega", db, Sign::Negative),
        SignCheck::new("dalpha1/domega", dalpha1, Sign::Positive),
        SignCheck::new("dalpha2/domega", dalpha2, Sign::Negative),
        SignCheck::new("dT/dB", dt_db, Sign::Positive),
        SignCheck::new("omega - Lambda^2 - Lambda", gap, Sign::Positive),
        SignCheck::new("alpha1^-1 (d/dk)[(K-E)/K] dk/domega", alpha1_ratio_term, Sign::Positive),
        SignCheck::new("d/domega[E/(K alpha2)]", d_alpha2_ratio, Sign::Positive),
    ];
    Ok(DerivativeAudit {
        l,
        omega,
        h,
        dalpha3,
        dk,
        db,
        dalpha1,
        dalpha2,
        dk_partial_closed,
        dk_partial_fd,
        dk_partial_rel_error: ((dk_partial_fd - dk_partial_closed) / dk_partial_closed).abs(),
        dk_total_closed,
        dk_total_rel_error: ((dk - dk_total_closed) / dk_total_closed).abs(),
        dt_db,
        omega_minus_lambda_terms: gap,
        alpha1_ratio_term,
        d_alpha2_ratio,
        checks,
    })
}

/// `d''(ω) ≈ (∫φ²(ω+h) − ∫φ²(ω−h)) / (4h)` on the default grid.
pub fn d2d_direct(l: f64, omega: f64, h: f64) -> Result<f64> {
    check_window(l, omega, h)?;
    let mass = |w: f64| -> Result<f64> { Ok(moments(l, w, crate::DEFAULT_GRID)?.mass) };
    Ok((mass(omega + h)? - mass(omega - h)?) / (4.0 * h))
}

/// Route to `d''(ω)` through the integrated profile identities:
/// `(2ω + 3/8) M' = −(3/4) B' I − B' L − (3B/4) I'` with `I = ∫φ⁻²` in closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct D2Identity {
    pub omega: f64,
    pub d2: f64,
    /// `−(3/4) B' I`
    pub term_db_inv2: f64,
    /// `−B' L`
    pub term_db_period: f64,
    /// `−(3B/4) I'`
    pub term_dinv2: f64,
    /// `R = −B' + 3/4 − α₁'(α₁/2 + 3/8)`
    pub r_combination: f64,
    pub checks: Vec<SignCheck>,
}

pub fn d2d_identity(l: f64, omega: f64, h: f64) -> Result<D2Identity> {
    check_window(l, omega, h)?;
    let here = CurvePoint::at(l, omega)?;
    let lo = CurvePoint::at(l, omega - h)?;
    let hi = CurvePoint::at(l, omega + h)?;
    let db = (hi.b - lo.b) / (2.0 * h);
    let dinv2 = (hi.inv2 - lo.inv2) / (2.0 * h);
    let dalpha1 = (hi.alpha1 - lo.alpha1) / (2.0 * h);
    let term_db_inv2 = -0.75 * db * here.inv2;
    let term_db_period = -db * l;
    let term_dinv2 = -0.75 * here.b * dinv2;
    let rhs = term_db_inv2 + term_db_period + term_dinv2;
    let r_combination = -db + 0.75 - dalpha1 * (here.alpha1 / 2.0 + 0.375);
    let d2 = rhs / (2.0 * (2.0 * omega + 0.375));
    Ok(D2Identity {
        omega,
        d2,
        term_db_inv2,
        term_db_period,
        term_dinv2,
        r_combination,
        checks: vec![
            SignCheck::new("-(3/4) B' int phi^-2", term_db_inv2, Sign::Positive),
            SignCheck::new("-B' L", term_db_period, Sign::Positive),
            SignCheck::new("R", r_combination, Sign::Positive),
            SignCheck::new("d''(omega)", d2, Sign::Positive),
        ],
    })
}

/// Residual of one integral identity, relative to its largest term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub name: String,
    pub residual: f64,
    pub scale: f64,
    pub relative: f64,
}

impl IdentityResidual {
    fn new(name: &str, terms: &[f64]) -> Self {
        let residual: f64 = terms.iter().sum();
        let scale = terms.iter().fold(0.0_f64, |acc, t| acc.max(t.abs()));
        Self {
            name: name.to_string(),
            residual,
            scale,
            relative: if scale > 0.0 { residual.abs() / scale } else { residual.abs() },
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.relative <= tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityAudit {
    pub omega: f64,
    pub h: f64,
    pub residuals: Vec<IdentityResidual>,
}

impl IdentityAudit {
    pub fn max_relative(&self) -> f64 {
        self.residuals.iter().map(|r| r.relative).fold(0.0, f64::max)
    }
}

/// Algebraic identities that hold on a single sample.
pub fn sample_identities(s: &CurveSample) -> Vec<IdentityResidual> {
    vec![
        // ∫φ·(profile equation)
        IdentityResidual::new("virial", &[0.5 * s.dphi2, 0.5 * s.omega * s.mass, -0.5 * s.p4, -0.5 * s.p6]),
        // ∫(profile equation)/φ
        IdentityResidual::new(
            "logarithmic",
            &[-s.dphi2_over_phi2, s.omega * s.l, -s.mass, -s.p4],
        ),
        IdentityResidual::new(
            "first-integral balance",
            &[2.0 * s.omega * s.mass, -1.5 * s.p4, -4.0 / 3.0 * s.p6, s.b * s.l],
        ),
        IdentityResidual::new("inverse-square balance", &[0.5 * s.mass, 2.0 / 3.0 * s.p4, s.b * s.inv2]),
    ]
}

/// Checks the integral identities on three consecutive samples.
///
/// Derivative terms are centered differences over the triple; the
/// non-derivative term each is paired with is averaged over the window with
/// Simpson weights `(1, 4, 1)/6`, which matches the difference quotient to
/// `O(h⁴)` instead of `O(h²)`.
pub fn identity_audit(sample: &CurveSample, prev: &CurveSample, next: &CurveSample) -> Result<IdentityAudit> {
    let h = sample.omega - prev.omega;
    let h_next = next.omega - sample.omega;
    if !(h > 0.0) || (h - h_next).abs() > 1e-9 * h.max(h_next) {
        return Err(WaveError::Config(format!(
            "identity audit needs uniform increasing omega spacing, got {} , {} , {}",
            prev.omega, sample.omega, next.omega
        )));
    }
    if prev.l != sample.l || next.l != sample.l {
        return Err(WaveError::Config("identity audit samples differ in period".into()));
    }
    let diff = |f: fn(&CurveSample) -> f64| (f(next) - f(prev)) / (2.0 * h);
    let window = |f: fn(&CurveSample) -> f64| (f(prev) + 4.0 * f(sample) + f(next)) / 6.0;
    let l = sample.l;

    let mut residuals = Vec::with_capacity(6);
    residuals.push(IdentityResidual::new(
        "moment derivatives",
        &[0.5 * diff(|s| s.p4), 2.0 / 3.0 * diff(|s| s.p6), -window(|s| s.mass)],
    ));
    // 2ω M' = (2ωM)' − 2M
    residuals.push(IdentityResidual::new(
        "mass derivative balance",
        &[
            diff(|s| 2.0 * s.omega * s.mass),
            -window(|s| 2.0 * s.mass),
            -0.5 * diff(|s| s.p4),
            diff(|s| s.b) * l,
        ],
    ));
    residuals.extend(sample_identities(sample));
    Ok(IdentityAudit {
        omega: sample.omega,
        h,
        residuals,
    })
}

/// Uniform grid `start, …, stop` with `count` points.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Builds a [`WaveParams`] on the curve, a convenience for callers that only hold `(L, ω)`.
pub fn params_at(l: f64, omega: f64) -> Result<WaveParams> {
    WaveParams::from_branch(l, &solve_branch(l, omega)?)
}
