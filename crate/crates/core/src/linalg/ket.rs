use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::Operator;

/// State vector on a `dim`-dimensional Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amps: Vec<C64>,
}

impl Ket {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension("ket must have at least one amplitude".into()));
        }
        if !amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("ket amplitudes"));
        }
        Ok(Self { amps: amplitudes })
    }

    pub(crate) fn from_amplitudes_unchecked(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidDimension(format!("basis index {index} out of range for dim {dim}")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Unit-norm copy; errors on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidParameter("cannot normalize a zero or non-finite ket".into()));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { amps: self.amps.iter().map(|&a| c * a).collect() }
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Ket) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|self><self|`.
    pub fn projector(&self) -> Operator {
        Operator::from_fn(self.dim(), |i, j| self.amps[i] * self.amps[j].conj())
    }

    pub fn expectation(&self, op: &Operator) -> Result<C64> {
        self.inner(&op.apply(self)?)
    }
}

impl std::ops::Index<usize> for Ket {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.amps[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let k = Ket::new(vec![C64::new(3.0, 0.0), C64::new(0.0, 4.0)]).unwrap();
        assert_eq!(k.norm(), 5.0);
        let n = k.normalized().unwrap();
        assert!((n.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(Ket::new(vec![C64::new(0.0, 0.0); 2]).unwrap().normalized().is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Ket::new(vec![]).is_err());
        assert!(Ket::new(vec![C64::new(f64::NAN, 0.0)]).is_err());
        assert!(Ket::basis(2, 2).is_err());
    }

    #[test]
    fn projector_of_basis_state() {
        let p = Ket::basis(3, 1).unwrap().projector();
        assert_eq!(p[(1, 1)], C64::new(1.0, 0.0));
        assert_eq!(p.trace(), C64::new(1.0, 0.0));
    }
}
