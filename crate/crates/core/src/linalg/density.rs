use std::ops::Deref;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::hermitian::hermitian_eigenvalues;
use crate::linalg::{Ket, Operator};
use crate::tol;

/// Operator in the state role: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    /// Validates the state invariants at the structural tolerance.
    pub fn new(op: Operator) -> Result<Self> {
        Self::with_tolerance(op, tol::STRUCTURAL)
    }

    pub fn with_tolerance(op: Operator, tol: f64) -> Result<Self> {
        let defect = op.hermiticity_defect();
        if defect > tol {
            return Err(Error::NonHermitian { deviation: defect });
        }
        let tr = op.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidParameter(format!("density matrix trace {tr} != 1")));
        }
        let min = hermitian_eigenvalues(&op)?.first().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::InvalidParameter(format!("density matrix has eigenvalue {min:.3e} < 0")));
        }
        Ok(Self(op))
    }

    /// Wraps without validation. Used for ensemble averages, which satisfy
    /// the invariants only up to sampling noise and accumulated rounding.
    pub fn new_unchecked(op: Operator) -> Self {
        Self(op)
    }

    pub fn pure(ket: &Ket) -> Result<Self> {
        Ok(Self(ket.normalized()?.projector()))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(Operator::identity(dim).scale_re(1.0 / dim as f64))
    }

    pub fn operator(&self) -> &Operator {
        &self.0
    }

    pub fn into_operator(self) -> Operator {
        self.0
    }

    pub fn population(&self, i: usize) -> f64 {
        self.0[(i, i)].re
    }
}

impl Deref for DensityMatrix {
    type Target = Operator;
    fn deref(&self) -> &Operator {
        &self.0
    }
}

/// Column-stacking vectorization: `vec(rho)[i + d * j] = rho[i, j]`.
pub fn vectorize(rho: &Operator) -> Vec<C64> {
    let d = rho.dim();
    let mut v = Vec::with_capacity(d * d);
    for j in 0..d {
        for i in 0..d {
            v.push(rho[(i, j)]);
        }
    }
    v
}

pub fn devectorize(v: &[C64]) -> Result<Operator> {
    let d = (v.len() as f64).sqrt().round() as usize;
    if d == 0 || d * d != v.len() {
        return Err(Error::InvalidDimension(format!("vector length {} is not a perfect square", v.len())));
    }
    Ok(Operator::from_fn(d, |i, j| v[i + d * j]))
}

/// `(1/2) sum |eig(rho - sigma)|`.
pub fn trace_distance(rho: &Operator, sigma: &Operator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    let diff = rho - sigma;
    Ok(0.5 * hermitian_eigenvalues(&diff)?.iter().map(|x| x.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::standard::{EXCITED, GROUND};

    fn basis_state(i: usize) -> DensityMatrix {
        DensityMatrix::pure(&Ket::basis(2, i).unwrap()).unwrap()
    }

    #[test]
    fn vectorize_excited_projector() {
        let v = vectorize(&basis_state(EXCITED));
        assert_eq!(v.iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert_eq!(v[0], C64::new(1.0, 0.0));
    }

    #[test]
    fn devectorize_rejects_non_square_lengths() {
        assert!(devectorize(&[C64::new(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let e = basis_state(EXCITED);
        let g = basis_state(GROUND);
        assert_eq!(trace_distance(&e, &e).unwrap(), 0.0);
        assert!((trace_distance(&e, &g).unwrap() - 1.0).abs() < 1e-14);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((trace_distance(&e, &mixed).unwrap() - 0.5).abs() < 1e-14);
        assert!(trace_distance(&e, &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn validation() {
        assert!(DensityMatrix::new(Operator::identity(2)).is_err());
        let mut bad = Operator::diagonal(&[C64::new(1.5, 0.0), C64::new(-0.5, 0.0)]);
        assert!(DensityMatrix::new(bad.clone()).is_err());
        bad[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(bad), Err(Error::NonHermitian { .. })));
        assert!(DensityMatrix::new(DensityMatrix::maximally_mixed(4).into_operator()).is_ok());
    }
}
