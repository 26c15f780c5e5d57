use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::Operator;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// sorted ascending. Only the upper triangle's Hermitian part is trusted.
pub fn hermitian_eigenvalues(a: &Operator) -> Result<Vec<f64>> {
    let n = a.dim();
    // Symmetrize so tiny non-Hermitian noise cannot stall the sweeps.
    let mut m = Operator::from_fn(n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            let mut eig: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
            eig.sort_by(f64::total_cmp);
            return Ok(eig);
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, p, q);
            }
        }
    }
    Err(Error::NoConvergence { iterations: MAX_SWEEPS })
}

fn rotate(m: &mut Operator, p: usize, q: usize) {
    let apq = m[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let phase = apq / b;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (2.0 * b);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // J = diag-phase * real rotation; A <- J^H A J.
    let eph = phase.conj();
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -eph * s;
    let jqq = eph * c;
    let n = m.dim();
    for i in 0..n {
        let (xp, xq) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = xp * jpp + xq * jqp;
        m[(i, q)] = xp * jpq + xq * jqq;
    }
    for j in 0..n {
        let (xp, xq) = (m[(p, j)], m[(q, j)]);
        m[(p, j)] = jpp.conj() * xp + jqp.conj() * xq;
        m[(q, j)] = jpq.conj() * xp + jqq.conj() * xq;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        let a = Operator::diagonal(&[C64::new(3.0, 0.0), C64::new(-1.0, 0.0)]);
        assert_eq!(hermitian_eigenvalues(&a).unwrap(), vec![-1.0, 3.0]);
    }

    #[test]
    fn complex_two_by_two() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let mut a = Operator::identity(2);
        a[(0, 1)] = C64::new(0.0, 1.0);
        a[(1, 0)] = C64::new(0.0, -1.0);
        let e = hermitian_eigenvalues(&a).unwrap();
        assert!(e[0].abs() < 1e-14 && (e[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        let h = Operator::from_fn(5, |i, j| {
            let x = ((i * 7 + j * 3) % 11) as f64 / 11.0;
            let y = ((i * 5 + j * 2) % 7) as f64 / 7.0;
            C64::new(x, y)
        });
        let h = &h + &h.adjoint();
        let e = hermitian_eigenvalues(&h).unwrap();
        let tr: f64 = e.iter().sum();
        assert!((tr - h.trace().re).abs() < 1e-12);
        let f2: f64 = e.iter().map(|x| x * x).sum();
        assert!((f2 - h.frobenius_norm().powi(2)).abs() < 1e-11);
    }
}
