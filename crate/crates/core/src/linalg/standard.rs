//! Standard operators. Qubit operators use the basis order `(|e>, |g>)`:
//! `sigma_z = diag(+1, -1)`, `sigma_minus = |g><e|`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Operator;

/// Index of the excited state in the qubit basis.
pub const EXCITED: usize = 0;
/// Index of the ground state in the qubit basis.
pub const GROUND: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StandardOp {
    PauliX,
    PauliY,
    PauliZ,
    SigmaPlus,
    SigmaMinus,
    Identity,
    Annihilation,
    Number,
    Projector(usize, usize),
}

pub fn standard_operator(kind: StandardOp, dim: usize) -> Result<Operator> {
    if dim < 2 {
        return Err(Error::InvalidDimension(format!("{kind:?} requires dim >= 2, got {dim}")));
    }
    let qubit = |name: &str| -> Result<()> {
        if dim != 2 {
            return Err(Error::InvalidDimension(format!("{name} is a qubit operator, got dim {dim}")));
        }
        Ok(())
    };
    let one = C64::new(1.0, 0.0);
    let op = match kind {
        StandardOp::PauliX => {
            qubit("pauli_x")?;
            Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])?
        }
        StandardOp::PauliY => {
            qubit("pauli_y")?;
            let mut m = Operator::zeros(2);
            m[(0, 1)] = C64::new(0.0, -1.0);
            m[(1, 0)] = C64::new(0.0, 1.0);
            m
        }
        StandardOp::PauliZ => {
            qubit("pauli_z")?;
            Operator::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]])?
        }
        StandardOp::SigmaPlus => {
            qubit("sigma_plus")?;
            let mut m = Operator::zeros(2);
            m[(EXCITED, GROUND)] = one;
            m
        }
        StandardOp::SigmaMinus => {
            qubit("sigma_minus")?;
            let mut m = Operator::zeros(2);
            m[(GROUND, EXCITED)] = one;
            m
        }
        StandardOp::Identity => Operator::identity(dim),
        StandardOp::Annihilation => {
            let mut m = Operator::zeros(dim);
            for n in 1..dim {
                m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
            }
            m
        }
        StandardOp::Number => Operator::diagonal(&(0..dim).map(|n| C64::new(n as f64, 0.0)).collect::<Vec<_>>()),
        StandardOp::Projector(i, j) => {
            if i >= dim || j >= dim {
                return Err(Error::InvalidDimension(format!("projector ({i},{j}) out of range for dim {dim}")));
            }
            let mut m = Operator::zeros(dim);
            m[(i, j)] = one;
            m
        }
    };
    Ok(op)
}

pub fn sigma_minus() -> Operator {
    standard_operator(StandardOp::SigmaMinus, 2).expect("qubit operator")
}

pub fn sigma_plus() -> Operator {
    standard_operator(StandardOp::SigmaPlus, 2).expect("qubit operator")
}

pub fn sigma_x() -> Operator {
    standard_operator(StandardOp::PauliX, 2).expect("qubit operator")
}

pub fn sigma_z() -> Operator {
    standard_operator(StandardOp::PauliZ, 2).expect("qubit operator")
}

pub fn annihilation(dim: usize) -> Result<Operator> {
    standard_operator(StandardOp::Annihilation, dim)
}

/// `|i><j|` on a `dim`-level system.
pub fn ket_bra(dim: usize, i: usize, j: usize) -> Result<Operator> {
    standard_operator(StandardOp::Projector(i, j), dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn pauli_z_is_diag_plus_minus() {
        let z = standard_operator(StandardOp::PauliZ, 2).unwrap();
        assert_eq!(z, Operator::diagonal(&[c(1.0), c(-1.0)]));
    }

    #[test]
    fn annihilation_dim3() {
        let a = annihilation(3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = match (i, j) {
                    (0, 1) => 1.0,
                    (1, 2) => 2f64.sqrt(),
                    _ => 0.0,
                };
                assert_eq!(a[(i, j)], c(want));
            }
        }
    }

    #[test]
    fn sigma_minus_lowers() {
        let m = sigma_minus();
        assert_eq!(m[(GROUND, EXCITED)], c(1.0));
        assert_eq!(m.frobenius_norm(), 1.0);
    }

    #[test]
    fn adjoint_of_sigma_minus_is_sigma_plus() {
        assert_eq!(sigma_minus().adjoint(), sigma_plus());
    }

    #[test]
    fn raising_then_lowering_projects_on_excited() {
        let p = &sigma_plus() * &sigma_minus();
        assert_eq!(p, ket_bra(2, EXCITED, EXCITED).unwrap());
    }

    #[test]
    fn pauli_algebra() {
        let x = sigma_x();
        let y = standard_operator(StandardOp::PauliY, 2).unwrap();
        let z = sigma_z();
        let xy = &x * &y;
        assert!(xy.max_abs_diff(&z.scale(C64::new(0.0, 1.0))) < 1e-15);
    }

    #[test]
    fn number_is_adag_a() {
        let a = annihilation(4).unwrap();
        let n = standard_operator(StandardOp::Number, 4).unwrap();
        assert!((&a.adjoint() * &a).max_abs_diff(&n) < 1e-14);
    }

    #[test]
    fn invalid_dims() {
        assert!(standard_operator(StandardOp::PauliX, 3).is_err());
        assert!(standard_operator(StandardOp::Annihilation, 1).is_err());
        assert!(standard_operator(StandardOp::Projector(0, 2), 2).is_err());
    }
}
