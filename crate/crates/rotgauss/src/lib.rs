//! Numerical engine for the extrinsic geometry of rotational surfaces in the
//! pseudo-Euclidean 4-spaces `E^4_t`, and for deciding whether such a surface
//! has a pointwise 1-type Gauss map (`Δν = f(ν + C)`) of the first kind
//! (`C = 0`) or of the second kind (`C ≠ 0`).
//!
//! The crate is organised in layers:
//!
//! * [`pseudo`] — indefinite linear and exterior algebra on `E^4_t` and
//!   `Λ²E^4_t ≅ E^6` (Plücker coordinates),
//! * [`jets`] — analytic derivatives of profile curves and immersions up to
//!   order 3, plus finite-difference oracles,
//! * [`families`] — the catalog of rotational surfaces and their closed-form
//!   coefficient tables, including an RK4 generator for zero-mean-curvature
//!   profiles,
//! * [`geometry`] — frames, second fundamental form, connection forms, mean
//!   curvature, normal curvature, Codazzi residuals, and the Laplacian of the
//!   Gauss map by two independent routes,
//! * [`classify`] — the pointwise 1-type decision procedure,
//! * [`checks`] — the executable verification suite, one check per result,
//! * [`report`] — JSON/CSV serialisation of runs.

// Index-style loops mirror the tensor formulas; the NaN-rejecting negated
// comparisons in parameter validation are deliberate.
#![allow(
    clippy::needless_range_loop,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::manual_is_multiple_of
)]

pub mod checks;
pub mod classify;
pub mod families;
pub mod geometry;
pub mod jets;
pub mod pseudo;
pub mod report;

/// Null-cone tolerance used by causal classification.
pub const TAU_NULL: f64 = 1e-12;
/// Degeneracy tolerance for frames and regularity scalars `q`, `A`.
pub const TAU_REG: f64 = 1e-8;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter violates its documented range (`b ≤ 0`, `λ₀ = 0`, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Geometrically degenerate input (lightlike plane, near-null bivector,
    /// masked grid point).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Evaluation outside the declared regular domain.
    #[error("outside domain: {0}")]
    Domain(String),
    /// A finite-difference stencil left the sampled range.
    #[error("stencil out of range: {0}")]
    Stencil(String),
    /// The zero-mean-curvature ODE hit a vanishing denominator; the partial
    /// trajectory up to the halt point is preserved as `(s, x, w, φ)` rows.
    #[error("integration halted at s = {s}: {reason}")]
    IntegrationHalt { s: f64, reason: String, partial: Vec<(f64, f64, f64, f64)> },
    /// Classifier input too small.
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    /// Unknown check id passed to the verification registry.
    #[error("unknown check id: {0}")]
    UnknownCheck(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
