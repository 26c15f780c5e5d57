//! General dense eigensolver for small complex matrices.
//!
//! Householder reduction to Hessenberg form, shifted QR sweeps (Wilkinson
//! shift, Givens rotations) to a complex Schur form `A = Z T Z^dag`, then
//! eigenvectors of `T` by back substitution. Near a defective matrix the
//! eigenvalues are only accurate to about `sqrt(eps) |A|`, and the two
//! eigenvectors of a coalescing pair come out nearly parallel; coalescence
//! detection is built on that behaviour rather than on residual quality.

use std::cmp::Ordering;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{Ket, Operator};

const ITERATIONS_PER_EIGENVALUE: usize = 60;

#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    pub eigenvalues: Vec<C64>,
    /// Unit-norm right eigenvectors, paired with `eigenvalues` by index.
    pub vectors: Vec<Ket>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `max_j |A v_j - E_j v_j|`.
    pub fn max_residual(&self, a: &Operator) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.vectors)
            .map(|(&e, v)| {
                let av = a.apply_unchecked(v);
                av.amplitudes().iter().zip(v.amplitudes()).map(|(x, y)| (x - e * y).norm_sqr()).sum::<f64>().sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Reorders to descending real part, then descending imaginary part.
    pub fn sorted(self) -> Self {
        let mut pairs: Vec<(C64, Ket)> = self.eigenvalues.into_iter().zip(self.vectors).collect();
        pairs.sort_by(|a, b| eigenvalue_order(&a.0, &b.0));
        let (eigenvalues, vectors) = pairs.into_iter().unzip();
        Self { eigenvalues, vectors }
    }
}

/// Reporting order: descending real part, then descending imaginary part.
pub fn eigenvalue_order(a: &C64, b: &C64) -> Ordering {
    b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
}

pub fn eigendecompose(a: &Operator) -> Result<EigenSystem> {
    if !a.is_finite() {
        return Err(Error::NonFinite("eigensolver input"));
    }
    let n = a.dim();
    if n == 1 {
        return Ok(EigenSystem { eigenvalues: vec![a[(0, 0)]], vectors: vec![Ket::basis(1, 0)?] });
    }
    let (mut t, mut z) = hessenberg(a);
    schur_qr(&mut t, &mut z)?;
    let eigenvalues: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let vectors = triangular_eigenvectors(&t)
        .into_iter()
        .map(|x| z.apply_unchecked(&x).normalized())
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenSystem { eigenvalues, vectors }.sorted())
}

fn hessenberg(a: &Operator) -> (Operator, Operator) {
    let n = a.dim();
    let mut h = a.clone();
    let mut q = Operator::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let xnorm = (x[0].norm_sqr() + tail).sqrt();
        let phase = if x[0].norm() == 0.0 { C64::new(1.0, 0.0) } else { x[0] / x[0].norm() };
        let mut v = x;
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- P H P with P = I - 2 v v^dag acting on rows/cols k+1..n.
        for j in 0..n {
            let dot: C64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= 2.0 * v[i] * dot;
            }
        }
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let dot: C64 = (0..v.len()).map(|j| m[(i, k + 1 + j)] * v[j]).sum();
                for j in 0..v.len() {
                    m[(i, k + 1 + j)] -= 2.0 * dot * v[j].conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
    (h, q)
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, C64::new(1.0, 0.0));
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = 0.5 * (a - d);
    let root = (half * half + b * c).sqrt();
    let mu1 = d - b * c / (half + root);
    let mu2 = d - b * c / (half - root);
    let pick = |m: C64| if m.re.is_finite() && m.im.is_finite() { Some(m) } else { None };
    match (pick(mu1), pick(mu2)) {
        (Some(x), Some(y)) => {
            if (x - d).norm() <= (y - d).norm() {
                x
            } else {
                y
            }
        }
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => d,
    }
}

fn schur_qr(h: &mut Operator, z: &mut Operator) -> Result<()> {
    let n = h.dim();
    let eps = f64::EPSILON;
    let scale = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let max_iter = ITERATIONS_PER_EIGENVALUE * n;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        // Find the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if diag == 0.0 {
                diag = scale;
            }
            if sub <= eps * diag {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(Error::NoConvergence { iterations: total });
        }
        let mu = if since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.3 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_step(h, z, lo, hi, mu);
    }
    Ok(())
}

fn qr_step(h: &mut Operator, z: &mut Operator, lo: usize, hi: usize, mu: C64) {
    let n = h.dim();
    for i in lo..=hi {
        h[(i, i)] -= mu;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..n {
            let (x, y) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = c * x + s * y;
            h[(k + 1, j)] = -s.conj() * x + c * y;
        }
        h[(k + 1, k)] = C64::new(0.0, 0.0);
        rotations.push((k, c, s));
    }
    for &(k, c, s) in &rotations {
        let rows = (k + 2).min(hi);
        for i in 0..=rows {
            let (x, y) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = c * x + s.conj() * y;
            h[(i, k + 1)] = -s * x + c * y;
        }
        for i in 0..n {
            let (x, y) = (z[(i, k)], z[(i, k + 1)]);
            z[(i, k)] = c * x + s.conj() * y;
            z[(i, k + 1)] = -s * x + c * y;
        }
    }
    for i in lo..=hi {
        h[(i, i)] += mu;
    }
}

fn triangular_eigenvectors(t: &Operator) -> Vec<Ket> {
    let n = t.dim();
    // floor keeps |denom|^2 clear of underflow inside complex division
    let smin = (f64::EPSILON * t.frobenius_norm()).max(1e-140);
    (0..n)
        .map(|k| {
            let lambda = t[(k, k)];
            let mut x = vec![C64::new(0.0, 0.0); n];
            x[k] = C64::new(1.0, 0.0);
            for i in (0..k).rev() {
                let s: C64 = (i + 1..=k).map(|j| t[(i, j)] * x[j]).sum();
                let mut denom = t[(i, i)] - lambda;
                if denom.norm() < smin {
                    denom = C64::new(smin, 0.0);
                }
                x[i] = -s / denom;
                let big = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
                if big > 1e100 {
                    for z in x.iter_mut() {
                        *z /= big;
                    }
                }
            }
            Ket::from_amplitudes_unchecked(x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_matrix_has_basis_eigenvectors() {
        let e = eigendecompose(&Operator::zeros(3)).unwrap();
        assert!(e.eigenvalues.iter().all(|z| z.norm() == 0.0));
        assert!(e.vectors.iter().all(|v| (v.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let e = eigendecompose(&Operator::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![c(1.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn jordan_block_coalesces() {
        let a = Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let e = eigendecompose(&a).unwrap();
        assert!(e.eigenvalues.iter().all(|z| z.norm() < 1e-12));
        let ov = e.vectors[0].inner(&e.vectors[1]).unwrap().norm();
        assert!(ov > 1.0 - 1e-12);
    }

    #[test]
    fn gain_loss_diagonal() {
        let a = Operator::diagonal(&[c(0.5, -0.5), c(-0.5, -0.25)]);
        let e = eigendecompose(&a).unwrap();
        assert!((e.eigenvalues[0] - c(0.5, -0.5)).norm() < 1e-15);
        assert!((e.eigenvalues[1] - c(-0.5, -0.25)).norm() < 1e-15);
    }

    #[test]
    fn residuals_on_dense_matrix() {
        let a = Operator::from_fn(6, |i, j| {
            c(((i * 7 + j * 13) % 17) as f64 / 17.0 - 0.5, ((i * 3 + j * 5) % 11) as f64 / 11.0 - 0.5)
        });
        let e = eigendecompose(&a).unwrap();
        assert!(e.max_residual(&a) < 1e-12 * a.frobenius_norm());
        for v in &e.vectors {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        let tr: C64 = e.eigenvalues.iter().sum();
        assert!((tr - a.trace()).norm() < 1e-12);
    }

    #[test]
    fn sort_order_is_descending() {
        let a = Operator::diagonal(&[c(-1.0, 0.0), c(2.0, -1.0), c(2.0, 3.0)]);
        let e = eigendecompose(&a).unwrap();
        assert_eq!(e.eigenvalues, vec![c(2.0, 3.0), c(2.0, -1.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn rejects_non_finite() {
        let mut a = Operator::zeros(2);
        a[(1, 1)] = c(f64::INFINITY, 0.0);
        assert!(eigendecompose(&a).is_err());
    }
}
