//! Time evolution `exp(-i H t) |ψ⟩`.
//!
//! Two independent routes: spectral (Hermitian `H`, through the Jacobi
//! eigendecomposition) and a diagonal Padé(6, 6) approximant with scaling and
//! squaring that works for any square `H`, including the non-Hermitian
//! effective Hamiltonians used for trapping.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::eigen::{hermitian_eigendecomposition, HermitianEigen};
use super::operator::{check_dim, ComplexOperator, StateVector, HERMITIAN_TOL};
use crate::error::{CtqwError, Result};

const PADE_ORDER: usize = 6;
/// Scaled matrices have 1-norm at most this before the Padé approximant is applied.
const PADE_NORM_BOUND: f64 = 0.5;

fn pade_coefficients() -> [f64; PADE_ORDER + 1] {
    // c_k = (2q - k)! q! / ((2q)! k! (q - k)!)
    let q = PADE_ORDER;
    let mut c = [0.0; PADE_ORDER + 1];
    c[0] = 1.0;
    for k in 1..=q {
        c[k] = c[k - 1] * (q + 1 - k) as f64 / (k * (2 * q + 1 - k)) as f64;
    }
    c
}

/// Matrix exponential `exp(A)` of an arbitrary square operator.
pub fn expm(a: &ComplexOperator) -> Result<ComplexOperator> {
    let n = a.dim();
    if n == 0 {
        return Ok(ComplexOperator::zeros(0));
    }
    let norm = a.one_norm();
    let squarings = if norm > PADE_NORM_BOUND {
        (norm / PADE_NORM_BOUND).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.matrix() * Complex64::new(0.5_f64.powi(squarings), 0.0);

    let coeffs = pade_coefficients();
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut numer = &id * Complex64::new(coeffs[0], 0.0);
    let mut denom = numer.clone();
    let mut power = id;
    for (k, &ck) in coeffs.iter().enumerate().skip(1) {
        power = &power * &scaled;
        let term = &power * Complex64::new(ck, 0.0);
        numer += &term;
        if k % 2 == 0 {
            denom += &term;
        } else {
            denom -= &term;
        }
    }
    let mut result = denom.lu().solve(&numer).ok_or(CtqwError::SingularPade)?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    ComplexOperator::from_matrix(result)
}

/// The propagator `U(t) = exp(-i H t)` through the Padé route.
pub fn propagator_pade(op: &ComplexOperator, t: f64) -> Result<ComplexOperator> {
    expm(&op.scale(Complex64::new(0.0, -t)))
}

/// `exp(-i H t) |ψ⟩` through the Padé route.
pub fn expm_mul_pade(op: &ComplexOperator, state: &StateVector, t: f64) -> Result<StateVector> {
    check_dim(op.dim(), state.dim())?;
    propagator_pade(op, t)?.apply(state)
}

/// `exp(-i H t) |ψ⟩` through the eigendecomposition of a Hermitian `H`.
pub fn expm_mul_hermitian(op: &ComplexOperator, state: &StateVector, t: f64) -> Result<StateVector> {
    check_dim(op.dim(), state.dim())?;
    let eig = hermitian_eigendecomposition(op)?;
    Ok(spectral_apply(&eig, state, t))
}

/// `exp(-i H t) |ψ⟩`, choosing the spectral route when `H` is Hermitian
/// within [`HERMITIAN_TOL`] and the Padé route otherwise.
pub fn expm_mul(op: &ComplexOperator, state: &StateVector, t: f64) -> Result<StateVector> {
    check_dim(op.dim(), state.dim())?;
    if op.is_hermitian(HERMITIAN_TOL) {
        expm_mul_hermitian(op, state, t)
    } else {
        expm_mul_pade(op, state, t)
    }
}

fn spectral_apply(eig: &HermitianEigen, state: &StateVector, t: f64) -> StateVector {
    let v = &eig.eigenvectors;
    let mut coords: DVector<Complex64> = v.adjoint() * state.vector();
    for (c, &lam) in coords.iter_mut().zip(&eig.eigenvalues) {
        *c *= Complex64::from_polar(1.0, -lam * t);
    }
    StateVector::from_vector(v * coords)
}

/// A reusable `exp(-i H t)` for one operator. Hermitian operators are
/// diagonalized once; other operators go through Padé on every call.
#[derive(Clone, Debug)]
pub enum Propagator {
    Spectral(HermitianEigen),
    Pade(ComplexOperator),
}

impl Propagator {
    pub fn new(op: &ComplexOperator) -> Result<Self> {
        if op.is_hermitian(HERMITIAN_TOL) {
            Ok(Self::Spectral(hermitian_eigendecomposition(op)?))
        } else {
            Ok(Self::Pade(op.clone()))
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Spectral(e) => e.dim(),
            Self::Pade(op) => op.dim(),
        }
    }

    pub fn is_unitary(&self) -> bool {
        matches!(self, Self::Spectral(_))
    }

    pub fn apply(&self, state: &StateVector, t: f64) -> Result<StateVector> {
        check_dim(self.dim(), state.dim())?;
        match self {
            Self::Spectral(e) => Ok(spectral_apply(e, state, t)),
            Self::Pade(op) => expm_mul_pade(op, state, t),
        }
    }

    /// The full matrix `exp(-i H t)`.
    pub fn matrix(&self, t: f64) -> Result<ComplexOperator> {
        match self {
            Self::Spectral(e) => {
                let mut scaled = e.eigenvectors.clone();
                for (k, &lam) in e.eigenvalues.iter().enumerate() {
                    let phase = Complex64::from_polar(1.0, -lam * t);
                    for z in scaled.column_mut(k).iter_mut() {
                        *z *= phase;
                    }
                }
                ComplexOperator::from_matrix(&scaled * e.eigenvectors.adjoint())
            }
            Self::Pade(op) => propagator_pade(op, t),
        }
    }
}
