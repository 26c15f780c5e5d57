//! Dense complex linear algebra on small Hilbert spaces.

pub mod density;
pub mod expm;
pub mod hermitian;
pub mod ket;
pub mod lu;
pub mod operator;
pub mod standard;
pub mod superop;

pub use density::{devectorize, trace_distance, vectorize, DensityMatrix};
pub use expm::matrix_exponential;
pub use ket::Ket;
pub use operator::{kron, Operator};
pub use standard::{standard_operator, StandardOp};
pub use superop::SuperOperator;

pub use num_complex::Complex64 as C64;

pub fn adjoint(a: &Operator) -> Operator {
    a.adjoint()
}

pub fn multiply(a: &Operator, b: &Operator) -> crate::Result<Operator> {
    a.multiply(b)
}

pub fn add_scaled(a: &Operator, c: C64, b: &Operator) -> crate::Result<Operator> {
    a.add_scaled(c, b)
}
