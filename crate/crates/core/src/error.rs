use thiserror::Error;

/// Errors for construction and operations on spin-space objects.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("polar angle out of range: {0} (expected [0, pi])")]
    ThetaOutOfRange(f64),

    #[error("not Hermitian: max |A - A^dagger| = {0:e}")]
    NotHermitian(f64),

    #[error("not unit trace: trace = {0}")]
    NotUnitTrace(f64),

    #[error("not positive semi-definite: min eigenvalue = {0:e}")]
    NotPositive(f64),

    #[error("twice-M value {tm} invalid for twice-spin {tj} (parity or range)")]
    InvalidProjection { tj: u32, tm: i32 },

    #[error("partial inner product requires the second spin >= the first ({0} vs {1})")]
    SpinOrder(u32, u32),

    #[error("channel target dimension would be empty: 2J = {two_j}, k = {k}")]
    EmptyTarget { two_j: u32, k: i32 },

    #[error("index {0} out of range (max {1})")]
    IndexOutOfRange(usize, usize),

    #[error("function is not concave on [0, 1] (violated near t = {0})")]
    NotConcave(f64),

    #[error("spectra have different totals: {0} vs {1}")]
    TotalMismatch(f64, f64),

    #[error("f(0) = {0}, but this integral requires f(0) = 0")]
    NonzeroAtOrigin(f64),

    #[error("truncation too large: 2J = {two_j} but the band limit requires 2J >= {min_two_j}")]
    TruncationTooLarge { two_j: u32, min_two_j: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
