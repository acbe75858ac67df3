//! Numerical tolerances shared by every module.
//!
//! All thresholds live in one record so callers can see, and tests can pin,
//! exactly which slack each check allows.

/// Tolerance configuration record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Structural validation: Hermiticity, unitarity, unit trace, positivity.
    pub validation: f64,
    /// Identities that hold up to floating-point rounding only.
    pub identity: f64,
    /// Simplex constraint on probability vectors.
    pub probability: f64,
    /// Outcome probabilities below this are treated as impossible.
    pub zero_probability: f64,
    /// Unit-length check on measurement directions.
    pub direction: f64,
    /// Rotation-axis length below which no precession is defined.
    pub zero_field: f64,
    /// Margin above the classical bound before a Bell violation is reported.
    pub bell_boundary: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        validation: 1e-10,
        identity: 1e-12,
        probability: 1e-12,
        zero_probability: 1e-12,
        direction: 1e-12,
        zero_field: 1e-14,
        bell_boundary: 1e-10,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Default tolerances used by the library.
pub const TOL: Tolerances = Tolerances::DEFAULT;

/// Largest matrix dimension handled by the dense kernel.
pub const MAX_DIM: usize = 16;
