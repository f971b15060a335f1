use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
///
/// Variants carry enough context to tell a caller which assumption broke;
/// "fail" outcomes of checks (expansion, critical orbits, ...) are reported as
/// values, not as errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate critical point at {point}: |phi''| = {second_derivative:e}")]
    DegenerateCritical { point: f64, second_derivative: f64 },

    #[error("parameter Jacobian is degenerate: |J| = {value:e}")]
    DegenerateJacobian { value: f64 },

    #[error("orbit of {x} does not separate from the critical orbit within {horizon} steps")]
    NoEscape { x: f64, horizon: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("transition matrix is not eventually positive (checked powers up to {max_power})")]
    NotEventuallyPositive { max_power: usize },

    #[error("relaxation impossible: z_tilde = {z_tilde} <= 1 at mu = {mu:e}")]
    NotRelaxable { mu: f64, z_tilde: f64 },

    #[error("xi is not monotone on [{lo:e}, {hi:e}]")]
    NonMonotone { lo: f64, hi: f64 },

    #[error("integrator step size underflow at t = {t} (h = {h:e})")]
    StepFailure { t: f64, h: f64 },

    #[error("image z = {z} left the annulus [{lo}, {hi}]")]
    LeftAnnulus { z: f64, lo: f64, hi: f64 },

    #[error("orbit escaped the annulus at iterate {iterate}")]
    Escaped { iterate: usize },

    #[error("observable has zero variance along the orbit")]
    DegenerateObservable,

    #[error("limiting variance estimate {estimate:e} is indistinguishable from zero")]
    ZeroVariance { estimate: f64 },

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("root not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
