//! Asymptotic expansions of Schrödinger-type oscillatory integrals
//!
//! This crate computes explicit large-time / large-radius asymptotics of the
//! half-line oscillatory integrals
//!
//! ```text
//!     I±[φ](t, r) = 2 ∫₀^∞ exp(i σ² t ± i σ r) φ(σ, r) σ dσ
//! ```
//!
//! in every joint regime of the compactified `(t, r)` quarter-plane, and
//! cross-validates every expansion coefficient and decay rate against
//! independent brute-force quadrature oracles.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`] — complex Γ, its derivatives, the half-line Fourier
//!   expansion coefficients, and Gaussian–Fresnel moments.
//! * [`indexsets`] — the algebra of index sets ⊂ ℂ×ℕ that record which
//!   `x^j log^k x` terms an expansion may contain.
//! * [`phg`] — polyhomogeneous series values: terms, truncation, evaluation,
//!   and amplitude profiles with their boundary expansions.
//! * [`halfline`] — exact large-τ expansion of half-line Fourier transforms
//!   of polyhomogeneous densities, plus ε-regularised numeric oracles.
//! * [`oscquad`] — adaptive oscillation-aware Gauss–Kronrod quadrature and
//!   steepest-descent contour quadrature for the integrals themselves.
//! * [`compact`] — chart coordinates, boundary-defining functions, regime
//!   classification and the spectral partition of unity.
//! * [`expansions`] — the per-regime expansion evaluators (large time,
//!   large radius, dilation-invariant stationary phase, corner) and the
//!   moment-scaling checks.
//! * [`harness`] — end-to-end scenario drivers, CSV emission, and the
//!   validation suite shared by the CLI and the acceptance tests.
//!
//! All complex powers of complex bases route through the single branch-cut
//! policy in [`special::branch`].

pub mod compact;
pub mod expansions;
pub mod harness;
pub mod halfline;
pub mod indexsets;
pub mod oscquad;
pub mod phg;
pub mod special;

pub use num_complex::Complex64;

/// Errors shared across the crate.
#[derive(Debug, Clone)]
pub enum OscError {
    /// An argument violated a documented precondition.
    Domain(String),
    /// A quadrature budget was exhausted before the target tolerance was
    /// met; carries the best value obtained and its error estimate.
    Accuracy {
        message: String,
        best: Complex64,
        err_estimate: f64,
    },
    /// A contour passed too close to a pole of the integrand.
    IllConditioned(String),
    /// An evaluation hit a pole of Γ.
    Pole(String),
    /// A requested feature is outside the supported parameter range.
    Unsupported(String),
    /// A file operation failed; the message includes the path.
    Io(String),
}

impl std::fmt::Display for OscError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OscError::Domain(m) => write!(f, "domain error: {m}"),
            OscError::Accuracy {
                message,
                best,
                err_estimate,
            } => write!(
                f,
                "accuracy error: {message} (best value {best}, error estimate {err_estimate:.3e})"
            ),
            OscError::IllConditioned(m) => write!(f, "ill-conditioned: {m}"),
            OscError::Pole(m) => write!(f, "pole: {m}"),
            OscError::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

impl std::error::Error for OscError {}

/// Formats a float with 15 significant digits in scientific notation.
///
/// This is the single formatter used for all machine-readable numeric
/// output (CLI lines and CSV cells).  Fifteen significant decimal digits
/// parse back to a `f64` whose re-formatting reproduces the same text, so
/// emitted files round-trip byte-identically through a read/write cycle.
pub fn fmt_g15(x: f64) -> String {
    format!("{x:.14e}")
}
