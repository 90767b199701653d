//! Numerical tolerances used throughout the crate, in one place.
//!
//! All are double-precision working tolerances: validation thresholds sit at
//! 1e-10, spectral-support decisions at 1e-12, and reconstruction checks at
//! 1e-12 so roundoff never masquerades as a physical effect.

/// Relative Frobenius deviation allowed by hermiticity pre-checks.
pub const HERMITICITY: f64 = 1e-10;

/// Eigenvalues in [-PSD_CLAMP, 0) are treated as roundoff and clamped to 0;
/// anything below -PSD_CLAMP is a genuine positivity violation.
pub const PSD_CLAMP: f64 = 1e-10;

/// Unit-trace validation tolerance for density matrices and map columns.
pub const TRACE: f64 = 1e-10;

/// Spectral support threshold: eigenvalues above this belong to the support
/// of a state when taking logarithms.
pub const SUPPORT: f64 = 1e-12;

/// Weight of a state outside the support of the reference state above which
/// the relative entropy diverges.
pub const SUPPORT_WEIGHT: f64 = 1e-10;

/// Eigendecomposition reconstruction accuracy (relative Frobenius).
pub const RECONSTRUCTION: f64 = 1e-12;

/// Eigenvalues closer than this are treated as degenerate when ordering
/// eigenpairs (ties broken lexicographically on the eigenvectors).
pub const EIGEN_TIE: f64 = 1e-10;

/// Minimum component magnitude used to fix the global phase of an
/// eigenvector.
pub const PHASE: f64 = 1e-12;

/// Canonical eigenvalues below -NEGATIVITY classify a map as NCP;
/// magnitudes up to NEGATIVITY are treated as zero.
pub const NEGATIVITY: f64 = 1e-10;

/// Fidelity baseline below this makes the fidelity difference undefined.
pub const BASELINE: f64 = 1e-12;

/// Closed-form witness expressions fall back to the numerical path when a
/// denominator magnitude drops below this.
pub const CLOSED_FORM_FALLBACK: f64 = 1e-9;
