//! Deterministic no-jump evolution under an effective Hamiltonian.

use crate::error::{Error, Result};
use crate::linalg::{matrix_exponential, Ket, C64};
use crate::model::EffectiveHamiltonian;
use crate::tol;

use super::TimeGrid;

#[derive(Clone, Debug, PartialEq)]
pub struct NoJumpEvolution {
    pub times: Vec<f64>,
    /// Unnormalized `exp(-i H_eff (t - t0)) psi0`.
    pub states: Vec<Ket>,
    /// `||psi(t)||^2`.
    pub survival: Vec<f64>,
}

impl NoJumpEvolution {
    /// Normalized conditional state at grid index `k`.
    pub fn conditional(&self, k: usize) -> Result<Ket> {
        self.states[k].normalized()
    }
}

pub(crate) fn check_normalized(psi: &Ket) -> Result<()> {
    let dev = (psi.norm() - 1.0).abs();
    if dev > tol::STRUCTURAL {
        return Err(Error::InvalidParameter(format!("initial state is not normalized (|psi| - 1 = {dev:.3e})")));
    }
    Ok(())
}

/// Exact propagation; the one-step propagator is computed once and reused.
pub fn propagate_nhh(heff: &EffectiveHamiltonian, psi0: &Ket, grid: &TimeGrid) -> Result<NoJumpEvolution> {
    grid.validate()?;
    let h = heff.operator();
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: psi0.dim() });
    }
    check_normalized(psi0)?;
    let step = matrix_exponential(&h.scale(C64::new(0.0, -1.0)), grid.dt())?;
    let mut states = Vec::with_capacity(grid.len());
    states.push(psi0.clone());
    for k in 0..grid.steps {
        let next = step.apply(&states[k])?;
        states.push(next);
    }
    let survival = states.iter().map(Ket::norm_sqr).collect();
    Ok(NoJumpEvolution { times: grid.times(), states, survival })
}
