//! Centralized numerical tolerances.
//!
//! Every threshold a verdict depends on lives here, so the contracts of the
//! library are pinned in one place rather than scattered as magic numbers.

/// Hermiticity residual allowed in density-matrix validation.
pub const HERMITICITY: f64 = 1e-12;

/// Trace deviation from 1 allowed in density-matrix validation.
pub const UNIT_TRACE: f64 = 1e-12;

/// Most negative eigenvalue a valid density matrix may carry; anything in
/// `[-EIGENVALUE_FLOOR.abs(), 0)` is eigenvalue-solver dirt and gets clamped
/// to zero before entropies are taken.
pub const EIGENVALUE_FLOOR: f64 = -1e-12;

/// Normalization residual for state vectors flagged as normalized.
pub const STATE_NORM: f64 = 1e-12;

/// Slack allowed on each descending partial sum in a majorization verdict.
pub const PARTIAL_SUM_SLACK: f64 = 1e-10;

/// Allowed disagreement of spectrum totals before comparison is refused.
pub const TOTAL_SUM: f64 = 1e-10;

/// Slack for concave-sum (Karamata-side) comparisons.
pub const KARAMATA_SLACK: f64 = 1e-9;

/// Slack allowed on the Berezin-Lieb gap (quadrature noise).
pub const BEREZIN_LIEB_SLACK: f64 = 1e-9;

/// Convergence target for automatic quadrature-level doubling.
pub const QUADRATURE_CONVERGENCE: f64 = 1e-9;

/// Relative error target of the adaptive 1-D integrator.
pub const ADAPTIVE_1D_REL: f64 = 1e-10;

/// Weight-sum residual allowed for a sphere quadrature (vs 4*pi).
pub const QUADRATURE_WEIGHT_SUM: f64 = 1e-10;
