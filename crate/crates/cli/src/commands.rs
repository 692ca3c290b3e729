use cqnls_core::curve::{
    d2d_direct, d2d_identity, default_step, derivative_audit, dperiod_db, identity_audit, params_at, sample_curve,
    Sign, SignCheck,
};
use cqnls_core::evolve::{run_stability, run_standing_wave, StabilityConfig};
use cqnls_core::hill::{combined_counts, spectrum_report, theta_constant, HillOperatorSpec, OperatorKind, Parity};
use cqnls_core::wavecons::{build_wave, quadrature_residual};
use cqnls_core::{Result, WaveError};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::report::{Cell, Report};

pub fn run(cfg: &RunConfig) -> Result<Report> {
    match cfg.subcommand {
        "construct" => construct(cfg),
        "curve" => curve(cfg),
        "spectrum" => spectrum(cfg),
        "theta" => theta(cfg),
        "evolve" => evolve(cfg),
        "stability" => stability(cfg),
        "audit" => audit(cfg),
        other => Err(WaveError::Config(format!("unknown subcommand {other}"))),
    }
}

/// Runs `f` on every frequency in parallel and returns the results in input order.
fn sweep<T: Send>(cfg: &RunConfig, f: impl Fn(f64) -> Result<T> + Sync) -> Result<Vec<(f64, T)>> {
    cfg.omegas.par_iter().map(|&w| f(w).map(|v| (w, v))).collect()
}

fn sign_name(s: Sign) -> &'static str {
    match s {
        Sign::Positive => "positive",
        Sign::Negative => "negative",
    }
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
        Parity::Mixed => "mixed",
    }
}

const CONSTRUCT_COLUMNS: &[&str] = &[
    "omega",
    "alpha1",
    "alpha2",
    "alpha3",
    "m",
    "m_complement",
    "g",
    "beta_sq",
    "b",
    "quarter_period",
    "r_quad",
    "r_ode",
    "evenness_defect",
    "vieta_sum",
    "vieta_pair",
    "vieta_product",
    "b_via_alpha1",
];

fn construct(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new("construct", cfg.echo(), CONSTRUCT_COLUMNS);
    let waves = sweep(cfg, |w| {
        let (wp, prof) = build_wave(cfg.l, w, cfg.n)?;
        let res = quadrature_residual(&prof, &wp)?;
        Ok((wp, res, prof.evenness_defect()))
    })?;
    for (w, (wp, res, even)) in waves {
        let [s1, s2, s3] = wp.vieta_residuals();
        let b1 = wp.b_from_alpha1();
        report.check(format!("omega = {w}: r_quad {:.2e} <= 1e-8", res.r_quad), res.r_quad <= 1e-8);
        report.check(format!("omega = {w}: r_ode {:.2e} <= 1e-6", res.r_ode), res.r_ode <= 1e-6);
        report.check(
            format!("omega = {w}: Vieta residuals {:.2e} <= 1e-10", s1.abs().max(s2.abs()).max(s3.abs())),
            s1.abs().max(s2.abs()).max(s3.abs()) <= 1e-10,
        );
        let db = (b1 - wp.b).abs() / wp.b.abs().max(1e-300);
        report.check(format!("omega = {w}: B via alpha1 agrees to {db:.2e} <= 1e-10"), db <= 1e-10);
        report.row(vec![
            w.into(),
            wp.alpha1.into(),
            wp.alpha2.into(),
            wp.alpha3.into(),
            wp.m.into(),
            wp.m_complement.into(),
            wp.g.into(),
            wp.beta_sq.into(),
            wp.b.into(),
            wp.quarter_period.into(),
            res.r_quad.into(),
            res.r_ode.into(),
            even.into(),
            s1.into(),
            s2.into(),
            s3.into(),
            b1.into(),
        ]);
    }
    Ok(report)
}

const CURVE_COLUMNS: &[&str] = &[
    "omega",
    "status",
    "alpha1",
    "alpha2",
    "alpha3",
    "b",
    "m",
    "mass",
    "p4",
    "p6",
    "inv2",
    "inv2_quad",
    "dmass_domega",
    "d2_dd",
];

fn curve(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new("curve", cfg.echo(), CURVE_COLUMNS);
    for (w, entry) in cfg.omegas.iter().zip(sample_curve(cfg.l, &cfg.omegas, cfg.n)) {
        match entry {
            Ok(s) => {
                if let Some(d2) = s.d2_dd {
                    report.check(format!("omega = {w}: d''(omega) = {d2:.6e} > 0"), d2 > 0.0);
                }
                report.row(vec![
                    s.omega.into(),
                    "ok".into(),
                    s.alpha1.into(),
                    s.alpha2.into(),
                    s.alpha3.into(),
                    s.b.into(),
                    s.m.into(),
                    s.mass.into(),
                    s.p4.into(),
                    s.p6.into(),
                    s.inv2.into(),
                    s.inv2_quad.into(),
                    s.dmass_domega.into(),
                    s.d2_dd.into(),
                ]);
            }
            Err(e) => {
                if e.is_input_error() {
                    report.input_errors += 1;
                } else {
                    report.check(format!("omega = {w}: {e}"), false);
                }
                let mut row = vec![(*w).into(), e.to_string().into()];
                row.resize(CURVE_COLUMNS.len(), Cell::Missing);
                report.row(row);
            }
        }
    }
    Ok(report)
}

const SPECTRUM_COLUMNS: &[&str] = &["omega", "operator", "index", "eigenvalue", "parity", "parity_defect", "sign_changes"];

fn spectrum(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new("spectrum", cfg.echo(), SPECTRUM_COLUMNS);
    let results = sweep(cfg, |w| {
        let (wp, prof) = build_wave(cfg.l, w, cfg.n)?;
        let r1 = spectrum_report(&HillOperatorSpec::new(OperatorKind::L1, &wp, &prof), None)?;
        let r2 = spectrum_report(&HillOperatorSpec::new(OperatorKind::L2, &wp, &prof), None)?;
        let counts = combined_counts(&r1, &r2)?;
        Ok((r1, r2, counts))
    })?;
    for (w, (r1, r2, k)) in results {
        report.check(format!("omega = {w}: L1 has {} negative eigenvalue(s), expected 1", r1.n_negative), r1.n_negative == 1);
        report.check(
            format!("omega = {w}: L1 zero eigenvalue at index {:?}, expected 1", r1.zero_index),
            r1.zero_index == Some(1) && r1.zero_multiplicity() == 1,
        );
        report.check(
            format!("omega = {w}: L2 zero eigenvalue at index {:?} with {} negative", r2.zero_index, r2.n_negative),
            r2.zero_index == Some(0) && r2.n_negative == 0 && r2.zero_multiplicity() == 1,
        );
        for r in [&r1, &r2] {
            if let Some(err) = r.zero_match_error {
                report.check(format!("omega = {w}: {:?} kernel match {err:.2e} <= 1e-4", r.kind), err <= 1e-4);
            }
        }
        report.check(
            format!("omega = {w}: full space {} negative, zero multiplicity {}", k.full_negative, k.full_zero),
            k.full_negative == 1 && k.full_zero == 2,
        );
        report.check(
            format!("omega = {w}: even subspace {} negative, zero multiplicity {}", k.even_negative, k.even_zero),
            k.even_negative == 1 && k.even_zero == 1 && k.even_zero_from_l2 == [true],
        );
        for r in [&r1, &r2] {
            let op = match r.kind {
                OperatorKind::L1 => "L1",
                OperatorKind::L2 => "L2",
            };
            for i in 0..r.eigenvalues.len() {
                report.row(vec![
                    w.into(),
                    op.into(),
                    i.into(),
                    r.eigenvalues[i].into(),
                    parity_name(r.parity[i]).into(),
                    r.parity_defect[i].into(),
                    r.sign_changes[i].into(),
                ]);
            }
        }
    }
    Ok(report)
}

const THETA_COLUMNS: &[&str] = &["omega", "theta", "phi_xx0", "dt_db", "mismatch", "wronskian_drift", "steps"];

fn theta(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new("theta", cfg.echo(), THETA_COLUMNS);
    let results = sweep(cfg, |w| {
        let wp = params_at(cfg.l, w)?;
        Ok((theta_constant(&wp, cfg.dt)?, dperiod_db(wp.b, w)?))
    })?;
    for (w, (t, dt_db)) in results {
        let mismatch = (dt_db + t.theta / 2.0).abs() / t.theta.abs();
        report.check(format!("omega = {w}: theta = {:.6e} < 0", t.theta), t.theta < 0.0);
        report.check(format!("omega = {w}: |dT/dB + theta/2| = {mismatch:.2e} |theta| <= 1e-4"), mismatch <= 1e-4);
        report.check(
            format!("omega = {w}: Wronskian drift {:.2e} <= 1e-6", t.wronskian_drift),
            t.wronskian_drift <= 1e-6,
        );
        report.row(vec![
            w.into(),
            t.theta.into(),
            t.phi_xx0.into(),
            dt_db.into(),
            mismatch.into(),
            t.wronskian_drift.into(),
            t.steps.into(),
        ]);
    }
    Ok(report)
}

const EVOLVE_COLUMNS: &[&str] = &[
    "omega",
    "t_end",
    "steps",
    "sup_error",
    "relative_mass_drift",
    "relative_energy_drift",
    "rotation_rate",
    "rotation_rate_error",
];

fn evolve(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new("evolve", cfg.echo(), EVOLVE_COLUMNS);
    let results = sweep(cfg, |w| run_standing_wave(cfg.l, w, cfg.n, cfg.dt, cfg.t_end))?;
    for (w, r) in results {
        let rate = (r.rotation_rate - w).abs() / w.abs();
        report.check(format!("omega = {w}: sup error {:.2e} <= 1e-6", r.sup_error), r.sup_error <= 1e-6);
        report.check(
            format!("omega = {w}: mass drift {:.2e} <= 1e-10", r.relative_mass_drift),
            r.relative_mass_drift <= 1e-10,
        );
        report.check(
            format!("omega = {w}: energy drift {:.2e} <= 1e-8", r.relative_energy_drift),
            r.relative_energy_drift <= 1e-8,
        );
        report.check(format!("omega = {w}: rotation rate error {rate:.2e} <= 1e-6"), rate <= 1e-6);
        report.row(vec![
            w.into(),
            r.t_end.into(),
            r.steps.into(),
            r.sup_error.into(),
            r.relative_mass_drift.into(),
            r.relative_energy_drift.into(),
            r.rotation_rate.into(),
            rate.into(),
        ]);
    }
    Ok(report)
}

fn stability(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new("stability", cfg.echo(), &["t", "orbital_dist"]);
    let r = run_stability(&StabilityConfig {
        l: cfg.l,
        omega: cfg.omegas[0],
        delta: cfg.delta,
        perturbation: cfg.perturbation,
        t_end: cfg.t_end,
        dt: cfg.dt,
        n: cfg.n,
        seed: cfg.seed,
    })?;
    report.summary.push("max_dist", r.max_dist);
    report.summary.push("relative_mass_drift", r.relative_mass_drift());
    report.summary.push("relative_energy_drift", r.relative_energy_drift());
    report.summary.push("max_parity_defect", r.max_parity_defect);
    report.summary.push("horizon", r.horizon);
    report.summary.push("steps", r.steps);
    report.check(format!("parity defect {:.2e} <= 1e-8", r.max_parity_defect), r.max_parity_defect <= 1e-8);
    report.check(
        format!("mass drift {:.2e} <= 1e-10", r.relative_mass_drift()),
        r.relative_mass_drift() <= 1e-10,
    );
    report.check(
        format!("energy drift {:.2e} <= 1e-8", r.relative_energy_drift()),
        r.relative_energy_drift() <= 1e-8,
    );
    for (t, d) in r.times.iter().zip(&r.orbital_dist) {
        report.row(vec![(*t).into(), (*d).into()]);
    }
    Ok(report)
}

const AUDIT_COLUMNS: &[&str] = &["omega", "group", "quantity", "value", "expected", "holds"];

struct AuditPoint {
    signs: Vec<SignCheck>,
    dk_error: f64,
    d2_checks: Vec<SignCheck>,
    d2_direct: f64,
    d2_identity: f64,
    identities: Vec<(String, f64)>,
}

fn audit_point(cfg: &RunConfig, w: f64) -> Result<AuditPoint> {
    let h = default_step(w);
    let d = derivative_audit(cfg.l, w, h)?;
    let id = d2d_identity(cfg.l, w, h)?;
    let samples: Vec<_> = sample_curve(cfg.l, &[w - h, w, w + h], cfg.n).into_iter().collect::<Result<_>>()?;
    let ia = identity_audit(&samples[1], &samples[0], &samples[2])?;
    Ok(AuditPoint {
        signs: d.checks,
        dk_error: d.dk_partial_rel_error,
        d2_checks: id.checks,
        d2_direct: d2d_direct(cfg.l, w, h)?,
        d2_identity: id.d2,
        identities: ia.residuals.into_iter().map(|r| (r.name, r.relative)).collect(),
    })
}

fn audit(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::new("audit", cfg.echo(), AUDIT_COLUMNS);
    let points = sweep(cfg, |w| audit_point(cfg, w))?;
    for (w, p) in points {
        let add = |report: &mut Report, group: &str, quantity: &str, value: f64, expected: &str, holds: bool| {
            report.check(format!("omega = {w}: {quantity} = {value:.6e} ({expected})"), holds);
            report.row(vec![w.into(), group.into(), quantity.into(), value.into(), expected.into(), holds.into()]);
        };
        for c in &p.signs {
            add(&mut report, "curve sign", &c.quantity, c.value, sign_name(c.expected), c.holds);
        }
        add(&mut report, "closed form", "dk/domega fixed-alpha relative error", p.dk_error, "<= 1e-5", p.dk_error <= 1e-5);
        for c in &p.d2_checks {
            add(&mut report, "d'' identity", &c.quantity, c.value, sign_name(c.expected), c.holds);
        }
        let rel = (p.d2_direct - p.d2_identity).abs() / p.d2_direct.abs();
        add(&mut report, "d'' routes", "direct vs identity relative difference", rel, "<= 1e-4", rel <= 1e-4);
        for (name, relative) in &p.identities {
            add(&mut report, "integral identity", name, *relative, "<= 1e-5", *relative <= 1e-5);
        }
    }
    Ok(report)
}
