use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong between parameter validation and the
/// correlation measures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("resonant oscillators: |omega1 - omega2| = {detuning:e} is within the resonance tolerance {tolerance:e}")]
    ResonantParams { detuning: f64, tolerance: f64 },
    #[error("{name} must be a finite positive frequency, got {value}")]
    NonPositiveFrequency { name: &'static str, value: f64 },
    #[error("{name} must be finite and non-negative, got {value}")]
    NegativeRate { name: &'static str, value: f64 },
    #[error("dissipative kernel pole at omega = {omega}")]
    KernelPole { omega: Complex64 },
    #[error("susceptibility is singular at omega = {omega} (|det| = {det:e})")]
    SingularAtFrequency { omega: Complex64, det: f64 },
    #[error("root finding failed: worst residual {residual:e} exceeds {tolerance:e}")]
    RootFindingFailure { residual: f64, tolerance: f64 },
    #[error("root {root} lies within {tolerance:e} of the real axis (undamped mode)")]
    NearRealAxisRoot { root: Complex64, tolerance: f64 },
    #[error("digamma pole at z = {z}")]
    DigammaPole { z: Complex64 },
    #[error("coth pole at u = {u}")]
    CothPole { u: Complex64 },
    #[error("poles {a} and {b} are closer than the merge tolerance {tolerance:e}")]
    DegeneratePoles { a: Complex64, b: Complex64, tolerance: f64 },
    #[error("quadrature did not converge: estimated error {achieved:e}, requested {requested:e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },
    #[error("unphysical state: lowest symplectic eigenvalue {nu_minus} < 1 (sigma convention)")]
    UnphysicalState { nu_minus: f64 },
    #[error("effective potential is not positive definite (normal-mode frequency squared {omega_sq})")]
    UnstablePotential { omega_sq: f64 },
}

impl Error {
    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::ResonantParams { .. }
                | Error::NonPositiveFrequency { .. }
                | Error::NegativeRate { .. }
                | Error::UnstablePotential { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
