//! Rigorous computation of Floquet normal forms `Φ(t) = Q(t)·e^{Rt}` for
//! linear systems `ẏ = A(t)y` with periodic coefficients.
//!
//! The crate solves simultaneously for the constant matrix `R` and the Fourier
//! coefficients of the periodic factor `Q(t)` by a Newton-like fixed point
//! argument in a Banach space of algebraically decaying coefficient sequences.
//! A finite set of quadratic inequalities (the radii polynomials) is checked
//! with outward-rounded interval arithmetic; their joint negativity proves
//! that the exact `(R, Q)` lies inside an explicit ball around the numerical
//! candidate. From a verified normal form the crate derives Lyapunov
//! exponents, Floquet multiplier moduli and stable/unstable tangent bundles
//! of periodic orbits.
//!
//! Module map:
//! * [`interval`]: outward-rounded scalar/complex/matrix intervals,
//! * [`sequence`]: matrix Fourier sequences with decay tails (the space Ω^s),
//! * [`system`]: vector fields, orbit enclosures, Jacobian coefficients,
//! * [`solver`]: the zero-finding map, Newton refinement, block operators,
//! * [`verifier`]: radii polynomial bounds and the existence proof,
//! * [`eigen`]: verified eigenpairs of the interval matrix `R`,
//! * [`bundle`]: Lyapunov exponents, multiplier signs, bundle frames.

pub mod bundle;
pub mod eigen;
pub mod interval;
pub mod linalg;
pub mod ode;
pub mod sequence;
pub mod solver;
pub mod system;
pub mod verifier;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("interval division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("requested decay rate s={requested} exceeds stored tail decay s={available}")]
    DecayTooWeak { requested: f64, available: f64 },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("malformed orbit file: {0}")]
    MalformedOrbitFile(String),
    #[error("malformed input file: {0}")]
    MalformedInput(String),
    #[error("vector field unsupported: {0}")]
    UnsupportedField(String),
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("singular Jacobian in Newton step")]
    SingularJacobian,
    #[error("matrix logarithm branch failure: eigenvalue {0} too close to the closed negative real axis")]
    LogBranchFailure(String),
    #[error("matrix not certifiably invertible (defect norm {0} >= 1)")]
    NotCertifiablyInvertible(f64),
    #[error("no diagonal dominance below cutoff k = {0}")]
    NoDominanceBelowCutoff(usize),
    #[error("spectrum too clustered to separate: {0}")]
    DegenerateSpectrum(String),
    #[error("eigenpair enclosure not certified: {0}")]
    NotCertified(String),
    #[error("trivial Floquet direction ambiguous: {0}")]
    AmbiguousTrivial(String),
    #[error("multiplier sign ratios inconsistent across components: {0}")]
    InconsistentRatios(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
