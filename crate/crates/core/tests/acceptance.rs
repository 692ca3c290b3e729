//! Acceptance suite: one line per criterion, failing sub-checks listed below it.
//! Exits nonzero when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use cqnls_core::curve::{self, default_step, derivative_audit, d2d_direct, d2d_identity, identity_audit, sample_curve};
use cqnls_core::elliptic::{complete_e, complete_k, jacobi_sn_cn_dn, EllipticModulus};
use cqnls_core::evolve::{run_stability, run_standing_wave, Perturbation, StabilityConfig};
use cqnls_core::hill::{
    combined_counts, spectrum_report, theta_constant, HillOperatorSpec, OperatorKind, Parity,
};
use cqnls_core::wavecons::{
    alpha_bounds, build_wave, min_period, period_map, period_of_b, solitary_profile, solve_branch,
    BranchPoint, WaveParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TWO_PI: f64 = 2.0 * PI;
const SWEEP: [f64; 5] = [0.5, 1.0, 2.0, 5.0, 10.0];

#[derive(Default)]
struct Criterion {
    checks: Vec<(String, bool)>,
}

impl Criterion {
    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks.push((label.into(), ok));
    }

    fn fail(&mut self, label: impl Into<String>) {
        self.check(label, false);
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Trapezoid rule over a full period of the even integrand, `n` panels on `[0, π]`.
fn periodic_quadrature(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = PI / n as f64;
    (0..n).map(|j| f(j as f64 * h)).sum::<f64>() * h / 2.0
}

fn elliptic_correctness(c: &mut Criterion) {
    for m in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
        let modulus = EllipticModulus::new(m).unwrap();
        let k_ref = periodic_quadrature(|t| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(), 8192);
        let e_ref = periodic_quadrature(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 8192);
        let k_err = ((complete_k(modulus).unwrap() - k_ref) / k_ref).abs();
        let e_err = ((complete_e(modulus).unwrap() - e_ref) / e_ref).abs();
        c.check(format!("K({m}) relative error {k_err:.2e} <= 1e-12"), k_err <= 1e-12);
        c.check(format!("E({m}) relative error {e_err:.2e} <= 1e-12"), e_err <= 1e-12);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0_f64;
    let mut worst_period = 0.0_f64;
    for _ in 0..1000 {
        let m = rng.random_range(0.0..0.999);
        let u = rng.random_range(-20.0..20.0);
        let modulus = EllipticModulus::new(m).unwrap();
        let j = jacobi_sn_cn_dn(u, modulus);
        worst = worst
            .max((j.sn * j.sn + j.cn * j.cn - 1.0).abs())
            .max((j.dn * j.dn + m * j.sn * j.sn - 1.0).abs());
        let shifted = jacobi_sn_cn_dn(u + 2.0 * complete_k(modulus).unwrap(), modulus);
        worst_period = worst_period.max((shifted.dn - j.dn).abs());
    }
    c.check(format!("1000-point Jacobi identities, worst {worst:.2e} <= 1e-12"), worst <= 1e-12);
    c.check(format!("dn(u + 2K) = dn(u), worst {worst_period:.2e} <= 1e-10"), worst_period <= 1e-10);
    let near_one = EllipticModulus::from_complement(1e-8).unwrap();
    let mut limit = 0.0_f64;
    for i in 0..=60 {
        let u = -3.0 + 0.1 * i as f64;
        let j = jacobi_sn_cn_dn(u, near_one);
        limit = limit.max((j.dn - 1.0 / u.cosh()).abs()).max((j.sn - u.tanh()).abs());
    }
    c.check(format!("hyperbolic limit at m = 1 - 1e-8, worst {limit:.2e} <= 1e-3"), limit <= 1e-3);
}

fn wave_construction(c: &mut Criterion) {
    for w in SWEEP {
        match build_wave(TWO_PI, w, 256) {
            Ok((wp, prof)) => {
                let res = cqnls_core::wavecons::quadrature_residual(&prof, &wp).unwrap();
                c.check(format!("omega = {w}: r_quad {:.2e} <= 1e-8", res.r_quad), res.r_quad <= 1e-8);
                c.check(format!("omega = {w}: r_ode {:.2e} <= 1e-6", res.r_ode), res.r_ode <= 1e-6);
                let [s1, s2, s3] = wp.vieta_residuals();
                c.check(format!("omega = {w}: root sum residual {s1:.2e} <= 1e-12"), s1.abs() <= 1e-12);
                c.check(
                    format!("omega = {w}: pair/product residuals {s2:.2e}, {s3:.2e} <= 1e-10"),
                    s2.abs() <= 1e-10 && s3.abs() <= 1e-10,
                );
                let db = (wp.b - wp.b_from_alpha1()).abs().max((wp.b - wp.b_from_alpha3()).abs());
                c.check(format!("omega = {w}: B via both roots agrees to {db:.2e} <= 1e-10"), db <= 1e-10);
                let pos = prof.phi.iter().all(|&p| p > 0.0);
                let even = prof.evenness_defect();
                c.check(format!("omega = {w}: positive and even (defect {even:.1e})"), pos && even <= 1e-10);
            }
            Err(e) => c.fail(format!("omega = {w}: construction failed: {e}")),
        }
    }
}

fn monotonicity(c: &mut Criterion) {
    let mut bad_derivative = 0;
    let mut bad_ratio = 0;
    let mut bad_slice = 0;
    let mut bad_bound = 0;
    let mut worst_dk = 0.0_f64;
    let mut dk_sign = true;
    for i in 0..20 {
        let w = 0.5 + 9.5 * i as f64 / 19.0;
        let (lo, hi) = alpha_bounds(w).unwrap();
        let mut last = 0.0;
        for j in 0..20 {
            let a = lo + (hi - lo) * (j as f64 + 0.5) / 20.0;
            let p = BranchPoint::new(a, w).unwrap();
            let psi = p.period().unwrap();
            bad_derivative += usize::from(!(p.dperiod_dalpha().unwrap() > 0.0));
            bad_ratio += usize::from(!(p.monotonicity_ratio() < 1.0));
            bad_slice += usize::from(!(psi > last));
            bad_bound += usize::from(!(psi > min_period(w).unwrap()));
            last = psi;
            let h = 1e-6 * w.max(1.0);
            let k_at = |omega: f64| BranchPoint::new(a, omega).unwrap().modulus().unwrap().k();
            let fd = (k_at(w + h) - k_at(w - h)) / (2.0 * h);
            let closed = p.dk_domega_fixed_alpha().unwrap();
            worst_dk = worst_dk.max(((fd - closed) / closed).abs());
            dk_sign &= closed < 0.0;
        }
    }
    c.check(format!("dPsi/dalpha > 0 on 20x20 grid ({bad_derivative} violations)"), bad_derivative == 0);
    c.check(format!("monotonicity ratio < 1 on 20x20 grid ({bad_ratio} violations)"), bad_ratio == 0);
    c.check(format!("Psi increasing along each slice ({bad_slice} violations)"), bad_slice == 0);
    c.check(format!("Psi above the minimal period ({bad_bound} violations)"), bad_bound == 0);
    c.check(format!("closed-form dk/domega vs fixed-alpha FD, worst {worst_dk:.2e} <= 1e-5"), worst_dk <= 1e-5);
    c.check("closed-form dk/domega negative on the grid", dk_sign);
    for w in SWEEP {
        match derivative_audit(TWO_PI, w, default_step(w)) {
            Ok(a) => {
                let expected = [
                    ("dLambda/domega", a.dalpha3, 1.0),
                    ("dB/domega", a.db, -1.0),
                    ("dT/dB", a.dt_db, 1.0),
                    ("dalpha1/domega", a.dalpha1, 1.0),
                    ("dalpha2/domega", a.dalpha2, -1.0),
                ];
                for (name, value, sign) in expected {
                    let want = if sign > 0.0 { "> 0" } else { "< 0" };
                    c.check(format!("omega = {w}: {name} = {value:.6e} {want}"), value * sign > 0.0);
                }
            }
            Err(e) => c.fail(format!("omega = {w}: audit failed: {e}")),
        }
    }
}

fn spectral_structure(c: &mut Criterion) {
    let reports = |n: usize| {
        let (wp, prof) = build_wave(TWO_PI, 2.0, n).unwrap();
        let r1 = spectrum_report(&HillOperatorSpec::new(OperatorKind::L1, &wp, &prof), None).unwrap();
        let r2 = spectrum_report(&HillOperatorSpec::new(OperatorKind::L2, &wp, &prof), None).unwrap();
        (r1, r2)
    };
    let (r1, r2) = reports(256);
    let tol = 1e-6 * 2.0;
    c.check(format!("L1 has {} negative eigenvalue(s), expected 1", r1.n_negative), r1.n_negative == 1);
    let zero1 = r1.zero_index;
    c.check(
        format!("L1 zero eigenvalue at index {zero1:?} with |lambda| <= {tol:e}"),
        zero1 == Some(1) && r1.eigenvalues[1].abs() <= tol,
    );
    if let Some(i) = zero1 {
        c.check(format!("L1 zero eigenvector parity {:?}", r1.parity[i]), r1.parity[i] == Parity::Odd);
        let err = r1.zero_match_error.unwrap();
        c.check(format!("L1 zero eigenvector vs phi' error {err:.2e} <= 1e-4"), err <= 1e-4);
    }
    c.check(
        format!("L2 lambda_0 = {:.2e} with |lambda_0| <= {tol:e}, none negative", r2.eigenvalues[0]),
        r2.zero_index == Some(0) && r2.n_negative == 0,
    );
    if let Some(err) = r2.zero_match_error {
        c.check(format!("L2 ground state vs phi error {err:.2e} <= 1e-4"), err <= 1e-4);
    }
    match combined_counts(&r1, &r2) {
        Ok(k) => {
            c.check(
                format!("full space: {} negative, zero multiplicity {}", k.full_negative, k.full_zero),
                k.full_negative == 1 && k.full_zero == 2,
            );
            c.check(
                format!("even subspace: {} negative, zero multiplicity {}", k.even_negative, k.even_zero),
                k.even_negative == 1 && k.even_zero == 1 && k.even_zero_from_l2 == [true],
            );
        }
        Err(e) => c.fail(format!("combined counts: {e}")),
    }
    for r in [&r1, &r2] {
        let mixed = r.parity.iter().filter(|p| **p == Parity::Mixed).count();
        c.check(format!("{:?}: every eigenvector even or odd ({mixed} mixed)", r.kind), mixed == 0);
        let mut osc = true;
        for n in 1..=3 {
            osc &= r.sign_changes[2 * n - 1] == 2 * n && r.sign_changes[2 * n] == 2 * n;
        }
        osc &= r.sign_changes[0] == 0;
        c.check(format!("{:?}: oscillation counts {:?}", r.kind, &r.sign_changes[..7]), osc);
        let gap = r.first_positive().unwrap_or(0.0);
        c.check(format!("{:?}: first positive eigenvalue {gap:.4} > 1e-3 omega", r.kind), gap > 2e-3);
    }
    let (c1, c2) = reports(128);
    for (fine, coarse) in [(&r1, &c1), (&r2, &c2)] {
        let worst = (0..5)
            .map(|i| {
                let (a, b) = (fine.eigenvalues[i], coarse.eigenvalues[i]);
                (a - b).abs() / a.abs().max(1.0)
            })
            .fold(0.0, f64::max);
        c.check(
            format!("{:?}: five smallest eigenvalues N=128 vs 256 differ by {worst:.2e} <= 1e-8", fine.kind),
            worst <= 1e-8,
        );
    }
}

fn theta_criterion(c: &mut Criterion) {
    for w in [1.0, 2.0, 5.0] {
        let point = solve_branch(TWO_PI, w).unwrap();
        let wp = WaveParams::from_branch(TWO_PI, &point).unwrap();
        let theta = match theta_constant(&wp, TWO_PI / 1e5) {
            Ok(t) => t,
            Err(e) => {
                c.fail(format!("omega = {w}: theta failed: {e}"));
                continue;
            }
        };
        let dt_db = curve::dperiod_db(wp.b, w).unwrap();
        let mismatch = (dt_db + theta.theta / 2.0).abs() / theta.theta.abs();
        c.check(format!("omega = {w}: theta = {:.6e} < 0", theta.theta), theta.theta < 0.0);
        c.check(
            format!("omega = {w}: |dT/dB + theta/2| = {mismatch:.2e} |theta| <= 1e-4"),
            mismatch <= 1e-4,
        );
        c.check(
            format!("omega = {w}: Wronskian drift {:.2e}", theta.wronskian_drift),
            theta.wronskian_drift <= 1e-6,
        );
        let _ = period_of_b(wp.b, w);
    }
}

fn stability_quantity(c: &mut Criterion) {
    for w in SWEEP {
        let h = default_step(w);
        let direct = match d2d_direct(TWO_PI, w, h) {
            Ok(v) => v,
            Err(e) => {
                c.fail(format!("omega = {w}: d'' failed: {e}"));
                continue;
            }
        };
        c.check(format!("omega = {w}: d''(omega) = {direct:.6e} > 0"), direct > 0.0);
        match d2d_identity(TWO_PI, w, h) {
            Ok(id) => {
                let rel = ((id.d2 - direct) / direct).abs();
                c.check(format!("omega = {w}: identity route agrees to {rel:.2e} <= 1e-4"), rel <= 1e-4);
            }
            Err(e) => c.fail(format!("omega = {w}: identity route failed: {e}")),
        }
    }
    let samples: Vec<_> = sample_curve(TWO_PI, &SWEEP, 256);
    for s in samples {
        match s {
            Ok(s) => {
                let rel = ((s.inv2 - s.inv2_quad) / s.inv2).abs();
                c.check(
                    format!("omega = {}: closed-form int phi^-2 vs quadrature {rel:.2e} <= 1e-8", s.omega),
                    rel <= 1e-8,
                );
            }
            Err(e) => c.fail(format!("sample failed: {e}")),
        }
    }
    let triple: Vec<_> = sample_curve(TWO_PI, &[1.9, 2.0, 2.1], 256).into_iter().collect();
    match (&triple[0], &triple[1], &triple[2]) {
        (Ok(a), Ok(b), Ok(n)) => match identity_audit(b, a, n) {
            Ok(audit) => {
                for r in audit.residuals {
                    c.check(format!("identity '{}' relative residual {:.2e} <= 1e-5", r.name, r.relative), r.passes(1e-5));
                }
            }
            Err(e) => c.fail(format!("identity audit: {e}")),
        },
        _ => c.fail("curve samples at 1.9, 2.0, 2.1 failed"),
    }
}

fn solitary_limit(c: &mut Criterion) {
    let point = match solve_branch(30.0, 1.0) {
        Ok(p) => p,
        Err(e) => return c.fail(format!("L = 30, omega = 1: {e}")),
    };
    let wp = WaveParams::from_branch(30.0, &point).unwrap();
    let worst = (0..=2000)
        .map(|i| {
            let x = -10.0 + 0.01 * i as f64;
            (wp.phi_at(x) - solitary_profile(1.0, x).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    c.check(format!("sup |phi - solitary| on |x| <= 10 is {worst:.2e} <= 1e-3"), worst <= 1e-3);
}

fn evolution(c: &mut Criterion) {
    match run_standing_wave(TWO_PI, 2.0, 256, 1e-4, 10.0) {
        Ok(r) => {
            c.check(format!("standing wave sup error {:.2e} <= 1e-6", r.sup_error), r.sup_error <= 1e-6);
            c.check(format!("mass drift {:.2e} <= 1e-10", r.relative_mass_drift), r.relative_mass_drift <= 1e-10);
            c.check(
                format!("energy drift {:.2e} <= 1e-8", r.relative_energy_drift),
                r.relative_energy_drift <= 1e-8,
            );
            let rate = ((r.rotation_rate - 2.0) / 2.0).abs();
            c.check(format!("rotation rate relative error {rate:.2e} <= 1e-6"), rate <= 1e-6);
        }
        Err(e) => c.fail(format!("standing-wave run: {e}")),
    }
    let cfg = StabilityConfig {
        l: TWO_PI,
        omega: 2.0,
        delta: 1e-3,
        perturbation: Perturbation::ModeCos1,
        t_end: 50.0,
        dt: 1e-4,
        n: 256,
        seed: 0,
    };
    match run_stability(&cfg) {
        Ok(r) => {
            c.check(format!("perturbed run max orbital distance {:.2e} <= 1e-2", r.max_dist), r.max_dist <= 1e-2);
            c.check(format!("parity defect {:.2e} <= 1e-8", r.max_parity_defect), r.max_parity_defect <= 1e-8);
            c.check(
                format!("perturbed run mass drift {:.2e} <= 1e-10", r.relative_mass_drift()),
                r.relative_mass_drift() <= 1e-10,
            );
            c.check(
                format!("perturbed run energy drift {:.2e} <= 1e-8", r.relative_energy_drift()),
                r.relative_energy_drift() <= 1e-8,
            );
        }
        Err(e) => c.fail(format!("perturbed run: {e}")),
    }
}

/// RK4 for `φ'' = ωφ − φ³ − φ⁵` from `(√α₃, 0)`; returns samples every `h` and the
/// first time `φ'` returns to zero from above (half the period).
fn shoot(alpha3: f64, omega: f64, h: f64, t_max: f64) -> (Vec<f64>, Option<f64>) {
    let f = |p: f64| omega * p - p.powi(3) - p.powi(5);
    let (mut p, mut q) = (alpha3.sqrt(), 0.0);
    let mut out = vec![p];
    let mut half = None;
    let steps = (t_max / h).ceil() as usize;
    for i in 0..steps {
        let (k1p, k1q) = (q, f(p));
        let (k2p, k2q) = (q + 0.5 * h * k1q, f(p + 0.5 * h * k1p));
        let (k3p, k3q) = (q + 0.5 * h * k2q, f(p + 0.5 * h * k2p));
        let (k4p, k4q) = (q + h * k3q, f(p + h * k3p));
        let (p_new, q_new) = (
            p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
            q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
        );
        if half.is_none() && i > 0 && q < 0.0 && q_new >= 0.0 {
            // Cubic Hermite root of φ' on the step, using φ'' = f(φ).
            let t0 = i as f64 * h;
            let (g0, g1, s0, s1) = (q, q_new, f(p), f(p_new));
            let mut s = g0 / (g0 - g1);
            for _ in 0..50 {
                let h00 = 2.0 * s.powi(3) - 3.0 * s * s + 1.0;
                let h10 = s.powi(3) - 2.0 * s * s + s;
                let h01 = -2.0 * s.powi(3) + 3.0 * s * s;
                let h11 = s.powi(3) - s * s;
                let val = h00 * g0 + h10 * h * s0 + h01 * g1 + h11 * h * s1;
                let d00 = 6.0 * s * s - 6.0 * s;
                let d10 = 3.0 * s * s - 4.0 * s + 1.0;
                let d11 = 3.0 * s * s - 2.0 * s;
                let der = d00 * g0 + d10 * h * s0 - d00 * g1 + d11 * h * s1;
                s -= val / der;
            }
            half = Some(t0 + s * h);
        }
        p = p_new;
        q = q_new;
        out.push(p);
    }
    (out, half)
}

fn shooting_oracle(c: &mut Criterion) {
    for w in [1.0, 2.0, 5.0] {
        let point = solve_branch(TWO_PI, w).unwrap();
        let wp = WaveParams::from_branch(TWO_PI, &point).unwrap();
        let psi = period_map(point.alpha3(), w).unwrap();
        let h = 1e-4;
        let (orbit, half) = shoot(point.alpha3(), w, h, psi);
        let worst = orbit
            .iter()
            .enumerate()
            .map(|(i, p)| (p - wp.phi_at(i as f64 * h)).abs())
            .fold(0.0, f64::max);
        c.check(format!("omega = {w}: shooting orbit vs closed form {worst:.2e} <= 1e-6"), worst <= 1e-6);
        match half {
            Some(t) => {
                let rel = ((2.0 * t - psi) / psi).abs();
                c.check(format!("omega = {w}: measured period vs Psi {rel:.2e} <= 1e-6"), rel <= 1e-6);
            }
            None => c.fail(format!("omega = {w}: shooting orbit never turned")),
        }
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(&mut Criterion)); 9] = [
        ("C1 elliptic correctness", elliptic_correctness),
        ("C2 wave construction", wave_construction),
        ("C3 monotonicity and derivative signs", monotonicity),
        ("C4 spectral structure", spectral_structure),
        ("C5 theta criterion", theta_criterion),
        ("C6 stability quantity d''", stability_quantity),
        ("C7 solitary limit", solitary_limit),
        ("C8 evolution", evolution),
        ("C9 shooting oracle", shooting_oracle),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let mut c = Criterion::default();
        run(&mut c);
        let status = if c.passed() { "PASS" } else { "FAIL" };
        println!("{status} {name} ({:.2} s)", start.elapsed().as_secs_f64());
        for (label, ok) in &c.checks {
            if !ok {
                println!("     failed: {label}");
            }
        }
        if std::env::var_os("ACCEPTANCE_VERBOSE").is_some() {
            for (label, ok) in &c.checks {
                if *ok {
                    println!("     ok: {label}");
                }
            }
        }
        failed += usize::from(!c.passed());
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
