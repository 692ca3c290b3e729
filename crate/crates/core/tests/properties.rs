use std::f64::consts::PI;

use cqnls_core::curve::{d2d_direct, derivative_audit};
use cqnls_core::elliptic::{complete_k, jacobi_sn_cn_dn, EllipticModulus};
use cqnls_core::evolve::{run_stability, Perturbation, StabilityConfig};
use cqnls_core::wavecons::{alpha_bounds, build_wave, q_poly, solve_branch, BranchPoint};
use proptest::prelude::*;

proptest! {
    #[test]
    fn jacobi_identities_hold(u in -50.0f64..50.0, m in 0.0f64..0.999) {
        let modulus = EllipticModulus::new(m).unwrap();
        let j = jacobi_sn_cn_dn(u, modulus);
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() <= 1e-12);
        prop_assert!((j.dn * j.dn + m * j.sn * j.sn - 1.0).abs() <= 1e-12);
        let back = jacobi_sn_cn_dn(-u, modulus);
        prop_assert!((back.sn + j.sn).abs() <= 1e-12);
        prop_assert!((back.cn - j.cn).abs() <= 1e-12);
    }

    #[test]
    fn q_is_positive_on_admissible_amplitudes(omega in 1e-3f64..50.0, t in 0.0f64..1.0) {
        let (lo, hi) = alpha_bounds(omega).unwrap();
        prop_assert!(lo < hi);
        let a = lo + t * (hi - lo);
        prop_assert!(q_poly(a, omega) > 0.0);
    }

    #[test]
    fn roots_are_ordered(omega in 0.05f64..20.0, t in 0.01f64..0.99) {
        let (lo, hi) = alpha_bounds(omega).unwrap();
        let p = BranchPoint::new(lo + t * (hi - lo), omega).unwrap();
        prop_assert!(p.alpha1() < 0.0);
        prop_assert!(p.alpha2() > 0.0 && p.alpha2() < p.alpha3());
        prop_assert!(p.b() < 0.0);
        let m = p.modulus().unwrap();
        prop_assert!(m.m() > 0.0 && m.m() < 1.0);
    }
}

#[test]
fn dn_has_period_two_k() {
    for m in [0.1, 0.5, 0.9, 0.999] {
        let modulus = EllipticModulus::new(m).unwrap();
        let k = complete_k(modulus).unwrap();
        for i in 0..20 {
            let u = -5.0 + 0.5 * i as f64;
            let a = jacobi_sn_cn_dn(u, modulus).dn;
            let b = jacobi_sn_cn_dn(u + 2.0 * k, modulus).dn;
            assert!((a - b).abs() <= 1e-10);
        }
    }
}

#[test]
fn period_map_is_monotone_on_grid() {
    for i in 0..20 {
        let w = 0.5 + 9.5 * i as f64 / 19.0;
        let (lo, hi) = alpha_bounds(w).unwrap();
        let mut last = 0.0;
        for j in 0..20 {
            let p = BranchPoint::new(lo + (hi - lo) * (j as f64 + 0.5) / 20.0, w).unwrap();
            let psi = p.period().unwrap();
            assert!(psi > last);
            assert!(p.dperiod_dalpha().unwrap() > 0.0);
            assert!(p.monotonicity_ratio() < 1.0);
            last = psi;
        }
    }
}

#[test]
fn shooting_matches_closed_form() {
    let l = 2.0 * PI;
    let point = solve_branch(l, 2.0).unwrap();
    let (wp, _) = build_wave(l, 2.0, 64).unwrap();
    let f = |p: f64| 2.0 * p - p.powi(3) - p.powi(5);
    let h = 1e-3;
    let (mut p, mut q) = (point.alpha3().sqrt(), 0.0);
    let mut worst = 0.0_f64;
    for i in 0..((l / h) as usize) {
        let (k1p, k1q) = (q, f(p));
        let (k2p, k2q) = (q + 0.5 * h * k1q, f(p + 0.5 * h * k1p));
        let (k3p, k3q) = (q + 0.5 * h * k2q, f(p + 0.5 * h * k2p));
        let (k4p, k4q) = (q + h * k3q, f(p + h * k3p));
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        q += h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
        worst = worst.max((p - wp.phi_at((i + 1) as f64 * h)).abs());
    }
    assert!(worst < 1e-6, "worst = {worst}");
}

#[test]
fn second_derivative_of_d_is_positive_across_sweep() {
    for w in [0.5, 1.0, 2.0, 5.0, 10.0] {
        assert!(d2d_direct(2.0 * PI, w, 1e-4 * w.max(1.0)).unwrap() > 0.0);
    }
}

#[test]
fn curve_signs_that_hold() {
    for w in [0.5, 2.0, 10.0] {
        let a = derivative_audit(2.0 * PI, w, 1e-4 * w.max(1.0)).unwrap();
        assert!(a.dalpha3 > 0.0);
        assert!(a.dalpha2 < 0.0);
        assert!(a.dt_db > 0.0);
        assert!(a.dk_partial_closed < 0.0);
        assert!(a.dk_partial_rel_error < 1e-5);
    }
}

#[test]
fn orbital_response_is_linear_in_delta() {
    let base = StabilityConfig {
        l: 2.0 * PI,
        omega: 2.0,
        delta: 1e-3,
        perturbation: Perturbation::Bump,
        t_end: 5.0,
        dt: 1e-3,
        n: 128,
        seed: 3,
    };
    let a = run_stability(&base).unwrap();
    let b = run_stability(&StabilityConfig { delta: 2e-3, ..base.clone() }).unwrap();
    let ratio = b.max_dist / a.max_dist;
    assert!((ratio - 2.0).abs() < 0.1, "ratio = {ratio}");
    assert!(a.orbital_dist.iter().all(|&d| d >= 0.0));
}

#[test]
fn random_even_runs_are_reproducible() {
    let cfg = StabilityConfig {
        l: 2.0 * PI,
        omega: 1.5,
        delta: 1e-3,
        perturbation: Perturbation::RandomEven,
        t_end: 0.5,
        dt: 1e-3,
        n: 64,
        seed: 11,
    };
    assert_eq!(run_stability(&cfg).unwrap(), run_stability(&cfg).unwrap());
}
