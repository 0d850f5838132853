//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `H_pq` with a diagonal
//! unitary and then applies the classical real Jacobi rotation, so the pair
//! `(p, q)` is annihilated exactly. Sweeps continue until the off-diagonal
//! Frobenius norm falls below `1e-12 · ‖H‖_F`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operator::{ComplexOperator, StateVector, HERMITIAN_TOL};
use crate::error::{CtqwError, Result};

/// Relative off-diagonal norm at which the sweeps stop.
pub const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors
/// stored as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> StateVector {
        StateVector::from_vector(self.eigenvectors.column(k).into_owned())
    }

    /// `V diag(λ) V†`
    pub fn reconstruct(&self) -> ComplexOperator {
        let mut scaled = self.eigenvectors.clone();
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(k).scale_mut(lam);
        }
        ComplexOperator::from_matrix(&scaled * self.eigenvectors.adjoint())
            .expect("square by construction")
    }

    /// `max |(V†V - I)_ij|`
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.eigenvectors.adjoint() * &self.eigenvectors;
        let n = self.dim();
        let mut d = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                d = d.max((g[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        d
    }
}

/// Diagonalizes a Hermitian operator. Inputs deviating from Hermitian by more
/// than [`HERMITIAN_TOL`] are rejected.
pub fn hermitian_eigendecomposition(op: &ComplexOperator) -> Result<HermitianEigen> {
    let deviation = op.hermiticity_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(CtqwError::NotHermitian { deviation });
    }
    let n = op.dim();
    let m = op.matrix();
    // Symmetrize so the rotations act on an exactly Hermitian matrix.
    let mut a = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    });
    let mut v = DMatrix::<Complex64>::identity(n, n);

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = JACOBI_TOL * scale;

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= threshold || scale == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(CtqwError::EigenNotConverged { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

fn off_norm(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[(p, q)]` with `a ← V† a V`, accumulating `v ← v V`.
fn rotate(a: &mut DMatrix<Complex64>, v: &mut DMatrix<Complex64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // V restricted to (p, q) = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
    let vpp = Complex64::new(c, 0.0);
    let vpq = Complex64::new(s, 0.0);
    let vqp = -phase.conj() * s;
    let vqq = phase.conj() * c;

    let n = a.nrows();
    for k in 0..n {
        let x = a[(k, p)];
        let y = a[(k, q)];
        a[(k, p)] = x * vpp + y * vqp;
        a[(k, q)] = x * vpq + y * vqq;
    }
    for k in 0..n {
        let x = a[(p, k)];
        let y = a[(q, k)];
        a[(p, k)] = vpp.conj() * x + vqp.conj() * y;
        a[(q, k)] = vpq.conj() * x + vqq.conj() * y;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * r, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * r, 0.0);

    for k in 0..n {
        let x = v[(k, p)];
        let y = v[(k, q)];
        v[(k, p)] = x * vpp + y * vqp;
        v[(k, q)] = x * vpq + y * vqq;
    }
}
