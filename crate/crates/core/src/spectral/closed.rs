//! Closed-form eigensystems for 2x2 and 3x3 matrices, used as oracles for
//! the general solver, and the cubic discriminant.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{Ket, Operator};
use crate::spectral::eigen::EigenSystem;

fn require_dim(a: &Operator, d: usize) -> Result<()> {
    if a.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: a.dim() });
    }
    Ok(())
}

fn unit(v: [C64; 2]) -> Option<Ket> {
    let k = Ket::from_amplitudes_unchecked(v.to_vec());
    (k.norm() > 0.0).then(|| k.normalized().ok()).flatten()
}

/// Quadratic-formula eigensystem of `[[a, b], [c, d]]`.
///
/// Writing `a~ = a - d`, the eigenvalues are `d + (a~ +- sqrt(a~^2 + 4bc)) / 2`
/// with unnormalized eigenvectors `(a~ +- sqrt(..), 2c)`; when that vector
/// vanishes the equivalent `(2b, -a~ +- sqrt(..))` is used instead.
pub fn eig2_closed(a: &Operator) -> Result<EigenSystem> {
    require_dim(a, 2)?;
    let (p, b, c, d) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    let at = p - d;
    let root = (at * at + 4.0 * b * c).sqrt();
    let mut eigenvalues = Vec::with_capacity(2);
    let mut vectors = Vec::with_capacity(2);
    for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
        let s = sign * root;
        eigenvalues.push(d + 0.5 * (at + s));
        let v1 = [at + s, 2.0 * c];
        let v2 = [2.0 * b, -at + s];
        let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
        let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
        let v = if n1 >= n2 { unit(v1) } else { unit(v2) };
        vectors.push(match v {
            Some(v) => v,
            // Scalar matrix: any basis diagonalizes it.
            None => Ket::basis(2, k)?,
        });
    }
    Ok(EigenSystem { eigenvalues, vectors }.sorted())
}

/// Coefficients `(a, b, c)` of the monic characteristic polynomial
/// `det(lambda - A) = lambda^3 + a lambda^2 + b lambda + c`.
pub fn char_poly3(m: &Operator) -> Result<(C64, C64, C64)> {
    require_dim(m, 3)?;
    let e = |i: usize, j: usize| m[(i, j)];
    let tr = e(0, 0) + e(1, 1) + e(2, 2);
    let minors = e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0) + e(0, 0) * e(2, 2) - e(0, 2) * e(2, 0) + e(1, 1) * e(2, 2)
        - e(1, 2) * e(2, 1);
    let det = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
    Ok((-tr, minors, -det))
}

/// Discriminant of `x^3 + a x^2 + b x + c`; zero iff two roots coincide.
pub fn cubic_discriminant(a: C64, b: C64, c: C64) -> C64 {
    18.0 * a * b * c - 4.0 * a * a * a * c + a * a * b * b - 4.0 * b * b * b - 27.0 * c * c
}

/// Roots of the monic cubic by Cardano's formula, each refined by Newton steps.
pub fn cubic_roots(a: C64, b: C64, c: C64) -> [C64; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    // Take the larger-magnitude branch to avoid cancellation.
    let u3 = if (-q / 2.0 + disc).norm() >= (-q / 2.0 - disc).norm() { -q / 2.0 + disc } else { -q / 2.0 - disc };
    let u = u3.powf(1.0 / 3.0);
    let omega = C64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut roots = [C64::new(0.0, 0.0); 3];
    let mut w = C64::new(1.0, 0.0);
    for r in roots.iter_mut() {
        let uk = u * w;
        *r = if uk.norm() == 0.0 { -shift } else { uk - p / (3.0 * uk) - shift };
        w *= omega;
    }
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let f = ((*r + a) * *r + b) * *r + c;
            let df = (3.0 * *r + 2.0 * a) * *r + b;
            if df.norm() == 0.0 || f.norm() == 0.0 {
                break;
            }
            let step = f / df;
            let next = *r - step;
            let fnext = ((next + a) * next + b) * next + c;
            if fnext.norm() < f.norm() {
                *r = next;
            } else {
                break;
            }
        }
    }
    // A double root is only resolved to ~sqrt(eps) by the cubic itself; it is
    // a simple root of the derivative, which pins it down to full precision.
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    for i in 0..3 {
        for j in i + 1..3 {
            if (roots[i] - roots[j]).norm() <= 1e-7 * scale {
                let mut r = 0.5 * (roots[i] + roots[j]);
                for _ in 0..8 {
                    let df = (3.0 * r + 2.0 * a) * r + b;
                    let ddf = 6.0 * r + 2.0 * a;
                    if ddf.norm() == 0.0 || df.norm() == 0.0 {
                        break;
                    }
                    r -= df / ddf;
                }
                roots[i] = r;
                roots[j] = r;
            }
        }
    }
    roots
}

fn cross(u: [C64; 3], v: [C64; 3]) -> [C64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

fn norm3(v: &[C64; 3]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Null vectors of a (numerically) singular 3x3 matrix, best first.
fn null_vectors(m: &Operator) -> Vec<[C64; 3]> {
    let rows: Vec<[C64; 3]> = (0..3).map(|i| [m[(i, 0)], m[(i, 1)], m[(i, 2)]]).collect();
    let scale = m.frobenius_norm();
    let mut best = [C64::new(0.0, 0.0); 3];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let x = cross(rows[i], rows[j]);
        if norm3(&x) > norm3(&best) {
            best = x;
        }
    }
    if norm3(&best) > 1e-10 * scale * scale {
        return vec![best];
    }
    // Rank <= 1: span the plane orthogonal (bilinearly) to the dominant row.
    let r = *rows.iter().max_by(|a, b| norm3(a).total_cmp(&norm3(b))).expect("three rows");
    if norm3(&r) <= 1e-14 * scale.max(1.0) || scale == 0.0 {
        let e = |k: usize| {
            let mut v = [C64::new(0.0, 0.0); 3];
            v[k] = C64::new(1.0, 0.0);
            v
        };
        return vec![e(0), e(1), e(2)];
    }
    let mut first = [C64::new(0.0, 0.0); 3];
    for k in 0..3 {
        let mut e = [C64::new(0.0, 0.0); 3];
        e[k] = C64::new(1.0, 0.0);
        let x = cross(r, e);
        if norm3(&x) > norm3(&first) {
            first = x;
        }
    }
    let second = cross(r, first.map(|z| z.conj()));
    vec![first, second]
}

/// Cardano eigensystem of a 3x3 matrix. Eigenvectors come from cross
/// products of rows of `A - lambda`.
pub fn eig3_closed(a: &Operator) -> Result<EigenSystem> {
    require_dim(a, 3)?;
    let (pa, pb, pc) = char_poly3(a)?;
    let roots = cubic_roots(pa, pb, pc);
    let scale = a.frobenius_norm().max(1.0);
    let mut eigenvalues = Vec::with_capacity(3);
    let mut vectors = Vec::with_capacity(3);
    for (k, &lambda) in roots.iter().enumerate() {
        let shifted = a.plus_scaled(-lambda, &Operator::identity(3));
        let candidates = null_vectors(&shifted);
        // Repeated roots of a diagonalizable matrix take successive null vectors.
        let repeat = roots[..k].iter().filter(|&&r| (r - lambda).norm() <= 1e-9 * scale).count();
        let v = candidates[repeat.min(candidates.len() - 1)];
        eigenvalues.push(lambda);
        vectors.push(Ket::from_amplitudes_unchecked(v.to_vec()).normalized()?);
    }
    Ok(EigenSystem { eigenvalues, vectors }.sorted())
}
