use thiserror::Error;

/// Failure modes shared by every stage of the pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WaveError {
    /// An argument lies outside the domain of the formula being evaluated.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested period/frequency pair admits no dnoidal wave.
    #[error("no admissible wave: {0}")]
    NoSolution(String),
    /// The elliptic modulus is numerically indistinguishable from 0 or 1.
    #[error("degenerate modulus: {0}")]
    Degenerate(String),
    #[error("configuration error: {0}")]
    Config(String),
    /// Two inputs that must describe the same object do not.
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("blow-up detected at t = {t}: max |u| = {amplitude}")]
    BlowUp { t: f64, amplitude: f64 },
}

impl WaveError {
    /// True for errors caused by the caller's parameters rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            WaveError::Domain(_)
                | WaveError::NoSolution(_)
                | WaveError::Degenerate(_)
                | WaveError::Config(_)
                | WaveError::Contract(_)
        )
    }
}

pub type Result<T, E = WaveError> = std::result::Result<T, E>;
