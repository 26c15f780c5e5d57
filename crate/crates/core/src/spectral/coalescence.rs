use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Ket, Operator};
use crate::spectral::eigen::{eigendecompose, EigenSystem};

/// Pairwise eigenvalue gap and eigenvector overlap summary.
///
/// `measure = min over pairs (i < j) of |E_i - E_j| / s + (1 - |<i|j>|)`
/// where `s = max(1, spectral radius)`; both terms come from the same pair,
/// so the measure vanishes only where eigenvalues *and* eigenvectors
/// coalesce (an exceptional point), not at an ordinary degeneracy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoalescenceReport {
    pub min_gap: f64,
    pub max_overlap: f64,
    pub measure: f64,
    pub pair: (usize, usize),
}

/// `|<u|v>| / (|u| |v|)`.
pub fn overlap(u: &Ket, v: &Ket) -> Result<f64> {
    let nu = u.norm();
    let nv = v.norm();
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::InvalidParameter("overlap of a zero vector".into()));
    }
    Ok((u.inner(v)?.norm() / (nu * nv)).min(1.0))
}

pub fn coalescence_of(system: &EigenSystem) -> Result<CoalescenceReport> {
    let n = system.dim();
    if n < 2 {
        return Err(Error::InvalidDimension("coalescence needs at least two eigenvalues".into()));
    }
    let radius = system.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = radius.max(1.0);
    let mut report =
        CoalescenceReport { min_gap: f64::INFINITY, max_overlap: 0.0, measure: f64::INFINITY, pair: (0, 1) };
    for i in 0..n {
        for j in i + 1..n {
            let gap = (system.eigenvalues[i] - system.eigenvalues[j]).norm();
            let ov = overlap(&system.vectors[i], &system.vectors[j])?;
            report.min_gap = report.min_gap.min(gap);
            report.max_overlap = report.max_overlap.max(ov);
            let m = gap / scale + (1.0 - ov);
            if m < report.measure {
                report.measure = m;
                report.pair = (i, j);
            }
        }
    }
    Ok(report)
}

pub fn coalescence(a: &Operator) -> Result<CoalescenceReport> {
    coalescence_of(&eigendecompose(a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C64;

    #[test]
    fn overlap_examples() {
        let e0 = Ket::basis(2, 0).unwrap();
        let e1 = Ket::basis(2, 1).unwrap();
        assert_eq!(overlap(&e0, &e1).unwrap(), 0.0);
        assert_eq!(overlap(&e0, &e0.scale(C64::new(0.0, 3.0))).unwrap(), 1.0);
        let zero = Ket::new(vec![C64::new(0.0, 0.0); 2]).unwrap();
        assert!(overlap(&e0, &zero).is_err());
    }

    #[test]
    fn jordan_block_is_an_ep() {
        let a = Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(coalescence(&a).unwrap().measure <= 1e-6);
    }

    #[test]
    fn diagonal_is_not() {
        let a = Operator::diagonal(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        let r = coalescence(&a).unwrap();
        assert_eq!(r.min_gap, 1.0);
        assert_eq!(r.max_overlap, 0.0);
        assert_eq!(r.pair, (0, 1));
    }

    #[test]
    fn degenerate_but_diagonalizable_is_not() {
        let r = coalescence(&Operator::identity(2)).unwrap();
        assert_eq!(r.min_gap, 0.0);
        assert!(r.measure >= 1.0 - 1e-12);
    }

    #[test]
    fn one_dimensional_is_error() {
        assert!(coalescence(&Operator::identity(1)).is_err());
    }
}
