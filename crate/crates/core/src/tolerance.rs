use serde::Serialize;

/// Numerical thresholds shared by every verification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Rank `r` requires `sigma_r / sigma_1 >= rank`.
    pub rank: f64,
    /// Never-vanishing checks require `value >= nonvanishing * max value`.
    pub nonvanishing: f64,
    /// Identically-zero checks require `value <= zero * scale`.
    pub zero: f64,
    /// Squared-norm floor for non-vanishing fields and coefficient pairs.
    pub nonzero_sq: f64,
    /// Relative residual allowed when projecting onto a contact frame.
    pub projection: f64,
    /// Relative residual allowed for `beta(v) = 0` on an annihilated frame
    /// and for the contraction equation of the characteristic field.
    pub annihilation: f64,
    /// Step of the finite-difference bracket oracle.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank: 1e-7,
            nonvanishing: 1e-6,
            zero: 1e-9,
            nonzero_sq: 1e-8,
            projection: 1e-8,
            annihilation: 1e-10,
            fd_step: 1e-3,
        }
    }
}
