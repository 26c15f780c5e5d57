//! Unconditional (master-equation) evolution.

use crate::error::{Error, Result};
use crate::linalg::{devectorize, matrix_exponential, vectorize, DensityMatrix, Operator, C64};
use crate::model::{lindblad_rhs, liouvillian_matrix, LindbladModel};

use super::TimeGrid;

/// Classical RK4 on the Lindblad right-hand side; one state per grid point.
pub fn integrate_master(model: &LindbladModel, rho0: &DensityMatrix, grid: &TimeGrid) -> Result<Vec<DensityMatrix>> {
    grid.validate()?;
    if rho0.operator().dim() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: rho0.operator().dim() });
    }
    let mut rho = rho0.operator().clone();
    let h = grid.dt();
    let mut out = Vec::with_capacity(grid.len());
    out.push(rho0.clone());
    for _ in 0..grid.steps {
        let k1 = lindblad_rhs(model, &rho)?;
        let k2 = lindblad_rhs(model, &rho.plus_scaled(C64::new(0.5 * h, 0.0), &k1))?;
        let k3 = lindblad_rhs(model, &rho.plus_scaled(C64::new(0.5 * h, 0.0), &k2))?;
        let k4 = lindblad_rhs(model, &rho.plus_scaled(C64::new(h, 0.0), &k3))?;
        let incr = k1
            .plus_scaled(C64::new(2.0, 0.0), &k2)
            .plus_scaled(C64::new(2.0, 0.0), &k3)
            .plus_scaled(C64::new(1.0, 0.0), &k4);
        rho = rho.plus_scaled(C64::new(h / 6.0, 0.0), &incr);
        out.push(DensityMatrix::new_unchecked(rho.clone()));
    }
    Ok(out)
}

/// `rho(t) = exp(L t) rho0` through the vectorized Liouvillian.
pub fn evolve_exact(model: &LindbladModel, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    let l = liouvillian_matrix(model);
    let propagator = matrix_exponential(l.matrix(), t)?;
    let v = vectorize(rho0.operator());
    let out: Vec<C64> = (0..v.len()).map(|i| (0..v.len()).map(|j| propagator[(i, j)] * v[j]).sum()).collect();
    Ok(DensityMatrix::new_unchecked(devectorize(&out)?))
}

/// Largest entrywise Hermiticity and trace defects over a trajectory of states.
pub fn max_physicality_defect(states: &[DensityMatrix]) -> f64 {
    states
        .iter()
        .map(|r| {
            let op: &Operator = r.operator();
            op.hermiticity_defect().max((op.trace() - C64::new(1.0, 0.0)).norm())
        })
        .fold(0.0, f64::max)
}
