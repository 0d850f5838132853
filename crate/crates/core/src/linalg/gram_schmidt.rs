//! One step of Gram–Schmidt orthonormalization against an orthonormal basis.

use num_complex::Complex64;

use super::operator::StateVector;

/// Outcome of orthonormalizing a candidate against a basis.
#[derive(Clone, Debug, PartialEq)]
pub enum Orthogonalized {
    /// Normalized residual `u / ‖u‖`.
    Independent(StateVector),
    /// The candidate lies in the span of the basis (or is zero).
    Dependent,
}

impl Orthogonalized {
    pub fn into_option(self) -> Option<StateVector> {
        match self {
            Self::Independent(v) => Some(v),
            Self::Dependent => None,
        }
    }
}

/// Removes the components of `candidate` along `basis` and normalizes what is
/// left. The residual is reported as [`Orthogonalized::Dependent`] when
/// `‖u‖ ≤ tol · ‖candidate‖`.
///
/// Projections are subtracted twice (classical Gram–Schmidt with one
/// re-orthogonalization pass), which keeps the output orthogonal to working
/// precision even when the candidate is nearly dependent.
pub fn gram_schmidt_step(candidate: &StateVector, basis: &[StateVector], tol: f64) -> Orthogonalized {
    let scale = candidate.norm();
    if scale == 0.0 {
        return Orthogonalized::Dependent;
    }
    let mut u = candidate.clone();
    for _ in 0..2 {
        for e in basis {
            let proj = e.inner(&u);
            u.axpy(-proj, e);
        }
    }
    let residual = u.norm();
    if residual <= tol * scale {
        return Orthogonalized::Dependent;
    }
    Orthogonalized::Independent(u.scale(Complex64::new(1.0 / residual, 0.0)))
}
