//! Split-step Fourier integration of `i u_t + u_xx + |u|²u + |u|⁴u = 0` on a
//! periodic interval, conserved quantities and the orbital distance to
//! `{e^{iθ}φ}`.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, WaveError};
use crate::spectral::SpectralGrid;
use crate::wavecons::{build_wave, Profile};

/// Samples of a complex field at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldState {
    pub l: f64,
    pub n: usize,
    #[serde(skip)]
    pub u: Vec<Complex64>,
    pub t: f64,
}

impl FieldState {
    pub fn new(l: f64, u: Vec<Complex64>, t: f64) -> Result<Self> {
        let n = u.len();
        if n < 4 || !n.is_power_of_two() {
            return Err(WaveError::Config(format!("grid size N = {n} must be a power of two")));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(WaveError::Domain(format!("period L = {l} must be positive")));
        }
        if u.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(WaveError::Numeric("field contains non-finite samples".into()));
        }
        Ok(Self { l, n, u, t })
    }

    /// Real field `φ` at `t = 0`.
    pub fn from_profile(prof: &Profile) -> Result<Self> {
        Self::new(prof.l, prof.phi.iter().map(|&p| Complex64::new(p, 0.0)).collect(), 0.0)
    }

    pub fn grid(&self) -> Result<SpectralGrid> {
        SpectralGrid::new(self.l, self.n)
    }

    pub fn sup_norm(&self) -> f64 {
        self.u.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max_j |u_j − u_{(N−j) mod N}|`
    pub fn parity_defect(&self) -> f64 {
        (0..self.n)
            .map(|j| (self.u[j] - self.u[(self.n - j) % self.n]).norm())
            .fold(0.0, f64::max)
    }
}

/// `F(u) = ½ ∫|u|²`
pub fn mass(state: &FieldState) -> f64 {
    0.5 * state.u.iter().map(|z| z.norm_sqr()).sum::<f64>() * state.l / state.n as f64
}

/// `E(u) = ½ ∫ (|u_x|² − |u|⁴/2 − |u|⁶/3)`
pub fn energy(state: &FieldState) -> Result<f64> {
    let grid = state.grid()?;
    let ux = grid.derivative_complex(&state.u);
    let density: f64 = state
        .u
        .iter()
        .zip(&ux)
        .map(|(z, dz)| {
            let r2 = z.norm_sqr();
            dz.norm_sqr() - r2 * r2 / 2.0 - r2 * r2 * r2 / 3.0
        })
        .sum();
    Ok(0.5 * density * grid.spacing())
}

/// Strang splitting with precomputed linear propagator for a fixed step.
#[derive(Debug, Clone)]
pub struct SplitStepSolver {
    grid: SpectralGrid,
    dt: f64,
    propagator: Vec<Complex64>,
}

impl SplitStepSolver {
    pub fn new(l: f64, n: usize, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(WaveError::Config(format!("time step dt = {dt} must be positive")));
        }
        let grid = SpectralGrid::new(l, n)?;
        let propagator = grid
            .wavenumbers()
            .iter()
            .map(|xi| Complex64::from_polar(1.0, -xi * xi * dt))
            .collect();
        Ok(Self { grid, dt, propagator })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn nonlinear(&self, u: &mut [Complex64], tau: f64) {
        for z in u.iter_mut() {
            let r2 = z.norm_sqr();
            *z *= Complex64::from_polar(1.0, tau * (r2 + r2 * r2));
        }
    }

    /// Advances `state` by one step `dt`.
    pub fn step(&self, state: &mut FieldState) {
        let half = 0.5 * self.dt;
        self.nonlinear(&mut state.u, half);
        self.grid.forward(&mut state.u);
        state.u.iter_mut().zip(&self.propagator).for_each(|(z, p)| *z *= p);
        self.grid.inverse(&mut state.u);
        self.nonlinear(&mut state.u, half);
        state.t += self.dt;
    }
}

/// One Strang step of size `dt`.
pub fn step_strang(state: &FieldState, dt: f64) -> Result<FieldState> {
    let solver = SplitStepSolver::new(state.l, state.n, dt)?;
    let mut next = state.clone();
    solver.step(&mut next);
    Ok(next)
}

/// Discrete `H¹` pairing `Σ (a b̄ + a' b̄') L/N`.
fn h1_inner(grid: &SpectralGrid, a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let da = grid.derivative_complex(a);
    let db = grid.derivative_complex(b);
    let sum: Complex64 = a
        .iter()
        .zip(b)
        .zip(da.iter().zip(&db))
        .map(|((x, y), (dx, dy))| x * y.conj() + dx * dy.conj())
        .sum();
    sum * grid.spacing()
}

/// Discrete `H¹` norm.
pub fn h1_norm(l: f64, v: &[Complex64]) -> Result<f64> {
    let grid = SpectralGrid::new(l, v.len())?;
    Ok(h1_inner(&grid, v, v).re.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitalDistance {
    pub distance: f64,
    /// Minimizing rotation `θ*` in `(−π, π]`.
    pub phase: f64,
}

/// `min_θ ‖u − e^{iθ}φ‖_{H¹}`; the minimizer is `θ* = arg⟨u, φ⟩_{H¹}`.
///
/// The distance is evaluated directly at `θ*` rather than through
/// `‖u‖² + ‖φ‖² − 2|⟨u,φ⟩|`, which cancels catastrophically near the orbit.
pub fn orbital_distance(state: &FieldState, prof: &Profile) -> Result<OrbitalDistance> {
    if state.n != prof.n || state.l != prof.l {
        return Err(WaveError::Contract(format!(
            "field grid (L = {}, N = {}) differs from profile grid (L = {}, N = {})",
            state.l, state.n, prof.l, prof.n
        )));
    }
    let grid = state.grid()?;
    let phi: Vec<Complex64> = prof.phi.iter().map(|&p| Complex64::new(p, 0.0)).collect();
    let phase = h1_inner(&grid, &state.u, &phi).arg();
    let rot = Complex64::from_polar(1.0, phase);
    let diff: Vec<Complex64> = state.u.iter().zip(&phi).map(|(u, p)| u - rot * p).collect();
    Ok(OrbitalDistance {
        distance: h1_inner(&grid, &diff, &diff).re.max(0.0).sqrt(),
        phase,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Perturbation {
    ModeCos1,
    Bump,
    RandomEven,
}

impl FromStr for Perturbation {
    type Err = WaveError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mode_cos1" => Ok(Perturbation::ModeCos1),
            "bump" => Ok(Perturbation::Bump),
            "random_even" => Ok(Perturbation::RandomEven),
            other => Err(WaveError::Config(format!(
                "unknown perturbation '{other}' (expected mode_cos1, bump or random_even)"
            ))),
        }
    }
}

impl Perturbation {
    pub fn name(self) -> &'static str {
        match self {
            Perturbation::ModeCos1 => "mode_cos1",
            Perturbation::Bump => "bump",
            Perturbation::RandomEven => "random_even",
        }
    }

    /// Real even perturbation with unit `H¹` norm.
    ///
    /// Samples are computed from the folded index `min(j, N − j)` so that
    /// evenness holds bit for bit.
    pub fn shape(self, l: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
        let grid = SpectralGrid::new(l, n)?;
        let fold = |j: usize| j.min(n - j) as f64;
        let raw: Vec<f64> = match self {
            Perturbation::ModeCos1 => (0..n).map(|j| (2.0 * PI * fold(j) / n as f64).cos()).collect(),
            Perturbation::Bump => {
                let width = l / 10.0;
                (0..n)
                    .map(|j| {
                        let d = (n as f64 / 2.0 - fold(j)) * grid.spacing();
                        (-(d / width).powi(2)).exp()
                    })
                    .collect()
            }
            Perturbation::RandomEven => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let coefs: Vec<f64> = (0..10).map(|_| rng.random_range(-1.0..1.0)).collect();
                (0..n)
                    .map(|j| {
                        coefs
                            .iter()
                            .enumerate()
                            .map(|(k, c)| c * (2.0 * PI * (k + 1) as f64 * fold(j) / n as f64).cos())
                            .sum()
                    })
                    .collect()
            }
        };
        let complex: Vec<Complex64> = raw.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let norm = h1_inner(&grid, &complex, &complex).re.sqrt();
        Ok(raw.iter().map(|v| v / norm).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityConfig {
    pub l: f64,
    pub omega: f64,
    pub delta: f64,
    pub perturbation: Perturbation,
    pub t_end: f64,
    pub dt: f64,
    pub n: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub times: Vec<f64>,
    pub orbital_dist: Vec<f64>,
    /// `|F(u(t_end)) − F(u(0))|`
    pub mass_drift: f64,
    /// `|E(u(t_end)) − E(u(0))|`
    pub energy_drift: f64,
    pub initial_mass: f64,
    pub initial_energy: f64,
    pub max_dist: f64,
    pub max_parity_defect: f64,
    /// Final time reached; stability is only observed up to here.
    pub horizon: f64,
    pub steps: usize,
}

impl StabilityReport {
    pub fn relative_mass_drift(&self) -> f64 {
        self.mass_drift / self.initial_mass.abs()
    }

    pub fn relative_energy_drift(&self) -> f64 {
        self.energy_drift / self.initial_energy.abs()
    }
}

/// Blow-up sentinel: fails once `‖u‖_∞` exceeds `ceiling` or stops being finite.
pub fn check_amplitude(state: &FieldState, ceiling: f64) -> Result<()> {
    let amp = state.sup_norm();
    if amp <= ceiling {
        Ok(())
    } else {
        Err(WaveError::BlowUp { t: state.t, amplitude: amp })
    }
}

fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(WaveError::Config(format!("final time t_end = {t_end} must be positive")));
    }
    if !(dt > 0.0 && dt <= t_end) {
        return Err(WaveError::Config(format!("time step dt = {dt} must lie in (0, t_end]")));
    }
    Ok((t_end / dt).round().max(1.0) as usize)
}

/// Evolves `φ + δp` and records the orbital distance `200` times over `[0, t_end]`.
pub fn run_stability(cfg: &StabilityConfig) -> Result<StabilityReport> {
    if !(cfg.delta >= 0.0 && cfg.delta.is_finite()) {
        return Err(WaveError::Config(format!("perturbation size delta = {} must be >= 0", cfg.delta)));
    }
    let steps = step_count(cfg.t_end, cfg.dt)?;
    let (_, prof) = build_wave(cfg.l, cfg.omega, cfg.n)?;
    let shape = cfg.perturbation.shape(cfg.l, cfg.n, cfg.seed)?;
    let u0 = prof
        .phi
        .iter()
        .zip(&shape)
        .map(|(p, s)| Complex64::new(p + cfg.delta * s, 0.0))
        .collect();
    let mut state = FieldState::new(cfg.l, u0, 0.0)?;
    let solver = SplitStepSolver::new(cfg.l, cfg.n, cfg.dt)?;
    let ceiling = 1e3 * prof.phi.iter().copied().fold(0.0, f64::max);

    let initial_mass = mass(&state);
    let initial_energy = energy(&state)?;
    let records = 200usize.min(steps);
    let mut times = vec![0.0];
    let mut orbital_dist = vec![orbital_distance(&state, &prof)?.distance];
    let mut max_parity_defect = state.parity_defect();
    let mut next_record = 1;
    for i in 1..=steps {
        solver.step(&mut state);
        state.t = i as f64 * cfg.dt;
        let record = i * records >= next_record * steps;
        if record || i % 128 == 0 {
            check_amplitude(&state, ceiling)?;
        }
        if record {
            next_record += 1;
            times.push(state.t);
            orbital_dist.push(orbital_distance(&state, &prof)?.distance);
            max_parity_defect = max_parity_defect.max(state.parity_defect());
        }
    }
    if max_parity_defect > 1e-8 {
        return Err(WaveError::Numeric(format!(
            "even initial data lost evenness: parity defect {max_parity_defect:e} > 1e-8"
        )));
    }
    Ok(StabilityReport {
        mass_drift: (mass(&state) - initial_mass).abs(),
        energy_drift: (energy(&state)? - initial_energy).abs(),
        initial_mass,
        initial_energy,
        max_dist: orbital_dist.iter().copied().fold(0.0, f64::max),
        times,
        orbital_dist,
        max_parity_defect,
        horizon: state.t,
        steps,
    })
}

/// Fidelity of the unperturbed wave as a pure phase rotation `e^{iωt}φ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandingWaveReport {
    pub omega: f64,
    pub t_end: f64,
    pub steps: usize,
    /// `max_j |u_j(t_end) − e^{iωt_end} φ_j|`
    pub sup_error: f64,
    pub relative_mass_drift: f64,
    pub relative_energy_drift: f64,
    /// `arg⟨u(t+dt), u(t)⟩ / dt` over the last step.
    pub rotation_rate: f64,
}

pub fn run_standing_wave(l: f64, omega: f64, n: usize, dt: f64, t_end: f64) -> Result<StandingWaveReport> {
    let steps = step_count(t_end, dt)?;
    let (_, prof) = build_wave(l, omega, n)?;
    let mut state = FieldState::from_profile(&prof)?;
    let solver = SplitStepSolver::new(l, n, dt)?;
    let (m0, e0) = (mass(&state), energy(&state)?);
    let mut previous = state.u.clone();
    for i in 1..=steps {
        if i == steps {
            previous.clone_from(&state.u);
        }
        solver.step(&mut state);
    }
    let t = steps as f64 * dt;
    let rot = Complex64::from_polar(1.0, omega * t);
    let sup_error = state
        .u
        .iter()
        .zip(&prof.phi)
        .map(|(u, p)| (u - rot * p).norm())
        .fold(0.0, f64::max);
    let pairing: Complex64 = state.u.iter().zip(&previous).map(|(a, b)| a * b.conj()).sum();
    Ok(StandingWaveReport {
        omega,
        t_end: t,
        steps,
        sup_error,
        relative_mass_drift: ((mass(&state) - m0) / m0).abs(),
        relative_energy_drift: ((energy(&state)? - e0) / e0).abs(),
        rotation_rate: pairing.arg() / dt,
    })
}
