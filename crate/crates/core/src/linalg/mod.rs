//! Dense complex linear algebra: operators, the Hermitian eigensolver, the
//! matrix exponential, Gram–Schmidt and quadrature.

mod eigen;
mod expm;
mod gram_schmidt;
mod operator;
mod quadrature;

pub use eigen::{hermitian_eigendecomposition, HermitianEigen, JACOBI_TOL};
pub use expm::{expm, expm_mul, expm_mul_hermitian, expm_mul_pade, propagator_pade, Propagator};
pub use gram_schmidt::{gram_schmidt_step, Orthogonalized};
pub use operator::{ComplexOperator, StateVector, HERMITIAN_TOL};
pub use quadrature::{integrate, integrate_trace, MAX_EVALUATIONS};
