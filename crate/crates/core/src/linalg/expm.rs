use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::lu::Lu;
use crate::linalg::Operator;

const PADE_DEGREE: usize = 6;
const SCALED_NORM: f64 = 0.5;

/// `exp(A t)` by scaling and squaring with a diagonal `[6/6]` Padé approximant.
///
/// The argument is scaled until `|A t|_1 <= 1/2`, where the truncation error of
/// the approximant is below double precision.
pub fn matrix_exponential(a: &Operator, t: f64) -> Result<Operator> {
    if !a.is_finite() || !t.is_finite() {
        return Err(Error::NonFinite("matrix exponential argument"));
    }
    let n = a.dim();
    let x = a.scale_re(t);
    let norm = x.norm_1();
    if norm == 0.0 {
        return Ok(Operator::identity(n));
    }
    let squarings = if norm > SCALED_NORM { (norm / SCALED_NORM).log2().ceil() as i32 } else { 0 };
    let x = x.scale_re(2f64.powi(-squarings));

    let mut coeff = 1.0;
    let mut num = Operator::identity(n);
    let mut den = Operator::identity(n);
    let mut power = Operator::identity(n);
    for k in 1..=PADE_DEGREE {
        coeff *= (PADE_DEGREE - k + 1) as f64 / (k * (2 * PADE_DEGREE - k + 1)) as f64;
        power = power.matmul(&x);
        num = num.plus_scaled(C64::new(coeff, 0.0), &power);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        den = den.plus_scaled(C64::new(sign * coeff, 0.0), &power);
    }
    let mut out = Lu::new(&den)?.solve(&num);
    for _ in 0..squarings {
        out = out.matmul(&out);
    }
    if !out.is_finite() {
        return Err(Error::NonFinite("matrix exponential result"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::standard::sigma_x;

    #[test]
    fn zero_gives_identity() {
        assert_eq!(matrix_exponential(&Operator::zeros(3), 2.0).unwrap(), Operator::identity(3));
    }

    #[test]
    fn diagonal_case() {
        let a = Operator::diagonal(&[C64::new(-1.0, 0.0), C64::new(-2.0, 0.0)]);
        let e = matrix_exponential(&a, 1.0).unwrap();
        assert!((e[(0, 0)].re - (-1f64).exp()).abs() < 1e-12);
        assert!((e[(1, 1)].re - (-2f64).exp()).abs() < 1e-12);
        assert!(e[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn half_rotation_about_x() {
        let omega = 1.7;
        let a = sigma_x().scale(C64::new(0.0, -omega / 2.0));
        let e = matrix_exponential(&a, std::f64::consts::PI / omega).unwrap();
        let want = sigma_x().scale(C64::new(0.0, -1.0));
        assert!(e.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn non_finite_rejected() {
        let mut a = Operator::zeros(2);
        a[(0, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matrix_exponential(&a, 1.0).is_err());
        assert!(matrix_exponential(&Operator::zeros(2), f64::INFINITY).is_err());
    }
}
