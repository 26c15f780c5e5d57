//! Numerical tolerances shared across the crate.

/// Structural checks: hermiticity, unitarity, trace.
pub const STRUCTURAL: f64 = 1e-10;

/// Spectral checks: eigenvalue residuals, coalescence.
pub const SPECTRAL: f64 = 1e-8;

/// Hermiticity bound for operators used as predicates (`Operator::is_hermitian`).
pub const HERMITIAN_PREDICATE: f64 = 1e-12;

/// Default target for the coalescence measure in EP searches.
pub const EP_SEARCH: f64 = 1e-8;

/// Above this `dt * sum(rate * |J|^2)` a trajectory grid triggers a warning.
pub const JUMP_LOAD_WARN: f64 = 0.05;

/// Above this the first-order jump probabilities are meaningless.
pub const JUMP_LOAD_MAX: f64 = 0.5;
