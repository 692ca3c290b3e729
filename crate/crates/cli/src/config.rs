use std::f64::consts::PI;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cqnls_core::curve::linspace;
use cqnls_core::evolve::Perturbation;
use cqnls_core::{Result, WaveError};

use crate::report::Fields;

#[derive(Debug, Parser)]
#[command(name = "cqnls", version, about = "Periodic dnoidal standing waves of the cubic-quintic NLS")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one wave and report its parameters and residuals.
    #[command(after_help = "CSV columns: omega,alpha1,alpha2,alpha3,m,m_complement,g,beta_sq,b,quarter_period,\
r_quad,r_ode,evenness_defect,vieta_sum,vieta_pair,vieta_product,b_via_alpha1")]
    Construct(RunArgs),
    /// Sample the fixed-period curve: moments and d''(omega).
    #[command(after_help = "CSV columns: omega,status,alpha1,alpha2,alpha3,b,m,mass,p4,p6,inv2,inv2_quad,\
dmass_domega,d2_dd")]
    Curve(RunArgs),
    /// Spectra of the linearized operators L1 and L2.
    #[command(after_help = "CSV columns: omega,operator,index,eigenvalue,parity,parity_defect,sign_changes")]
    Spectrum(RunArgs),
    /// Floquet constant theta and the dT/dB cross-check.
    #[command(after_help = "CSV columns: omega,theta,phi_xx0,dt_db,mismatch,wronskian_drift,steps")]
    Theta(RunArgs),
    /// Unperturbed evolution: fidelity to the phase rotation and conservation.
    #[command(after_help = "CSV columns: omega,t_end,steps,sup_error,relative_mass_drift,\
relative_energy_drift,rotation_rate,rotation_rate_error")]
    Evolve(RunArgs),
    /// Perturbed evolution: orbital distance time series.
    #[command(after_help = "CSV columns: t,orbital_dist")]
    Stability(RunArgs),
    /// Derivative signs, d''(omega) routes and integral identities along the curve.
    #[command(after_help = "CSV columns: omega,group,quantity,value,expected,holds")]
    Audit(RunArgs),
}

impl Command {
    pub fn parts(&self) -> (&'static str, &RunArgs) {
        match self {
            Command::Construct(a) => ("construct", a),
            Command::Curve(a) => ("curve", a),
            Command::Spectrum(a) => ("spectrum", a),
            Command::Theta(a) => ("theta", a),
            Command::Evolve(a) => ("evolve", a),
            Command::Stability(a) => ("stability", a),
            Command::Audit(a) => ("audit", a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Period L.
    #[arg(long = "L", default_value_t = 2.0 * PI)]
    pub l: f64,
    /// Frequency, either a value or start:stop:count.
    #[arg(long, value_parser = OmegaSpec::from_str)]
    pub omega: OmegaSpec,
    /// Grid size (power of two, at least 64).
    #[arg(long = "N", default_value_t = cqnls_core::DEFAULT_GRID)]
    pub n: usize,
    /// Time step [default: L/1e5 for theta, 1e-4 for evolve and stability].
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time [default: 10 for evolve, 50 for stability].
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    /// Perturbation size.
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    /// mode_cos1, bump or random_even.
    #[arg(long, default_value = "mode_cos1", value_parser = parse_perturbation)]
    pub perturbation: Perturbation,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for sweeps (does not change the output).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Report path [default: stdout].
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Report format [default: json for construct, spectrum, theta, audit; csv otherwise].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

fn parse_perturbation(s: &str) -> std::result::Result<Perturbation, String> {
    s.parse().map_err(|e: WaveError| e.to_string())
}

/// A single frequency or a uniform range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaSpec {
    Value(f64),
    Range { start: f64, stop: f64, count: usize },
}

impl FromStr for OmegaSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("'{t}' is not a number"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(OmegaSpec::Value(num(v)?)),
            [a, b, c] => {
                let count = c.trim().parse::<usize>().map_err(|_| format!("'{c}' is not a point count"))?;
                let (start, stop) = (num(a)?, num(b)?);
                if count == 0 {
                    return Err("range needs at least one point".into());
                }
                if count > 1 && !(stop > start) {
                    return Err(format!("range {start}:{stop} must be increasing"));
                }
                Ok(OmegaSpec::Range { start, stop, count })
            }
            _ => Err(format!("'{s}' is neither a value nor start:stop:count")),
        }
    }
}

impl OmegaSpec {
    pub fn values(self) -> Vec<f64> {
        match self {
            OmegaSpec::Value(v) => vec![v],
            OmegaSpec::Range { start, stop, count } => linspace(start, stop, count),
        }
    }

    fn echo(self) -> String {
        match self {
            OmegaSpec::Value(v) => crate::report::sci(v),
            OmegaSpec::Range { start, stop, count } => {
                format!("{}:{}:{count}", crate::report::sci(start), crate::report::sci(stop))
            }
        }
    }
}

/// Parameters after per-subcommand defaults are filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub l: f64,
    pub omega: OmegaSpec,
    pub omegas: Vec<f64>,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub delta: f64,
    pub perturbation: Perturbation,
    pub seed: u64,
    pub format: Format,
}

impl RunConfig {
    pub fn resolve(subcommand: &'static str, a: &RunArgs) -> Result<Self> {
        let (dt, t_end) = match subcommand {
            "theta" => (a.dt.unwrap_or(a.l / 1e5), a.t_end.unwrap_or(0.0)),
            "stability" => (a.dt.unwrap_or(1e-4), a.t_end.unwrap_or(50.0)),
            _ => (a.dt.unwrap_or(1e-4), a.t_end.unwrap_or(10.0)),
        };
        let format = a.format.unwrap_or(match subcommand {
            "curve" | "evolve" | "stability" => Format::Csv,
            _ => Format::Json,
        });
        let cfg = Self {
            subcommand,
            l: a.l,
            omega: a.omega,
            omegas: a.omega.values(),
            n: a.n,
            dt,
            t_end,
            delta: a.delta,
            perturbation: a.perturbation,
            seed: a.seed,
            format,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(WaveError::Config(msg));
        if !(self.l > 0.0 && self.l.is_finite()) {
            return bad(format!("period L = {} must be positive and finite", self.l));
        }
        if self.omegas.iter().any(|w| !w.is_finite()) {
            return bad("omega must be finite".into());
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("time step dt = {} must be positive", self.dt));
        }
        if matches!(self.subcommand, "evolve" | "stability") && !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("final time t_end = {} must be positive", self.t_end));
        }
        if self.subcommand == "stability" {
            if self.omegas.len() != 1 {
                return bad("stability runs one frequency; pass a single --omega value".into());
            }
            if !(self.delta.is_finite() && self.delta >= 0.0) {
                return bad(format!("perturbation size delta = {} must be non-negative", self.delta));
            }
        }
        if self.subcommand == "audit" {
            if let OmegaSpec::Range { count, .. } = self.omega {
                if count < 3 {
                    return bad(format!("derivative audits need ranges with count >= 3, got {count}"));
                }
            }
        }
        Ok(())
    }

    /// Config echo; `--jobs` and `--output` are left out because they do not affect results.
    pub fn echo(&self) -> Fields {
        let mut f = Fields::default();
        f.push("L", self.l);
        f.push("omega", self.omega.echo());
        f.push("N", self.n);
        match self.subcommand {
            "theta" => f.push("dt", self.dt),
            "evolve" => {
                f.push("dt", self.dt);
                f.push("t_end", self.t_end);
            }
            "stability" => {
                f.push("dt", self.dt);
                f.push("t_end", self.t_end);
                f.push("delta", self.delta);
                f.push("perturbation", self.perturbation.name());
                f.push("seed", self.seed);
            }
            _ => {}
        }
        f.push("format", self.format.name());
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_specs_parse() {
        assert_eq!("2".parse::<OmegaSpec>().unwrap(), OmegaSpec::Value(2.0));
        assert_eq!(
            "0.5:10:20".parse::<OmegaSpec>().unwrap(),
            OmegaSpec::Range { start: 0.5, stop: 10.0, count: 20 }
        );
        assert_eq!("1:3:3".parse::<OmegaSpec>().unwrap().values(), vec![1.0, 2.0, 3.0]);
        for bad in ["x", "1:2", "1:2:0", "3:1:4", "1:2:x"] {
            assert!(bad.parse::<OmegaSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn defaults_depend_on_subcommand() {
        let cli = Cli::try_parse_from(["cqnls", "stability", "--omega", "2"]).unwrap();
        let (name, args) = cli.command.parts();
        let cfg = RunConfig::resolve(name, args).unwrap();
        assert_eq!((cfg.dt, cfg.t_end, cfg.format), (1e-4, 50.0, Format::Csv));
        let cli = Cli::try_parse_from(["cqnls", "theta", "--omega", "2", "--L", "10"]).unwrap();
        let (name, args) = cli.command.parts();
        let cfg = RunConfig::resolve(name, args).unwrap();
        assert_eq!((cfg.dt, cfg.format), (1e-4, Format::Json));
    }

    #[test]
    fn audit_rejects_short_ranges() {
        let cli = Cli::try_parse_from(["cqnls", "audit", "--omega", "1:2:2"]).unwrap();
        let (name, args) = cli.command.parts();
        assert!(matches!(RunConfig::resolve(name, args), Err(WaveError::Config(_))));
    }
}
