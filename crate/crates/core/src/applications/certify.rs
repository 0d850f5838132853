//! Graph-independence certificates for the walk started on a hub.

use num_complex::Complex64;
use serde::Serialize;

use crate::engine::{trajectory, validate_grid, Generator};
use crate::error::{CtqwError, Result};
use crate::graph::Graph;
use crate::krylov::{build_invariant_subspace, reduce_operator, DEPENDENCE_TOL};
use crate::linalg::{ComplexOperator, StateVector};

/// Amplitude agreement required for two walks to count as identical.
pub const UNIVERSALITY_TOL: f64 = 1e-8;
/// Entrywise agreement required for two reduced operators to count as equal.
pub const REDUCED_MATRIX_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    pub generator: Generator,
    pub order: usize,
    pub hubs: (usize, usize),
    pub edge_counts: (usize, usize),
    pub reduced_dims: (usize, usize),
    /// `max_t |⟨w₁|e^{-iH₁t}|w₁⟩ - ⟨w₂|e^{-iH₂t}|w₂⟩|`
    pub max_amplitude_discrepancy: f64,
    /// Largest distance between the reduced coordinates of the two states,
    /// when both subspaces have the same dimension.
    pub max_reduced_discrepancy: Option<f64>,
    pub reduced_operators_equal: bool,
    /// `(H_red)_{22}` of both graphs when both subspaces are two-dimensional.
    pub reduced_corner: Option<(f64, f64)>,
    pub tolerance: f64,
    /// Whether the two walks agree within `tolerance`.
    pub dynamics_match: bool,
}

struct Side {
    hub: usize,
    amplitudes: Vec<Complex64>,
    coords: Vec<StateVector>,
    reduced: ComplexOperator,
}

fn one_side(g: &Graph, generator: Generator, grid: &[f64]) -> Result<Side> {
    let hub = g.hub().ok_or(CtqwError::MissingHub)?;
    let h = match generator {
        Generator::Laplacian => g.laplacian_matrix(),
        Generator::Adjacency => g.adjacency_matrix(),
    };
    let psi0 = StateVector::basis(g.order(), hub)?;
    let sub = build_invariant_subspace(&h, &psi0, DEPENDENCE_TOL)?;
    let states = trajectory(&h, &psi0, grid)?;
    Ok(Side {
        hub,
        amplitudes: states.iter().map(|s| s.amplitude(hub)).collect(),
        coords: states.iter().map(|s| sub.project(s)).collect::<Result<_>>()?,
        reduced: reduce_operator(&h, &sub)?,
    })
}

fn certify(g1: &Graph, g2: &Graph, grid: &[f64], generator: Generator) -> Result<CertificationReport> {
    if g1.order() != g2.order() {
        return Err(CtqwError::OrderMismatch(g1.order(), g2.order()));
    }
    validate_grid(grid)?;
    let a = one_side(g1, generator, grid)?;
    let b = one_side(g2, generator, grid)?;

    let max_amplitude_discrepancy = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let same_dim = a.reduced.dim() == b.reduced.dim();
    let max_reduced_discrepancy = same_dim.then(|| {
        a.coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x.distance(y))
            .fold(0.0, f64::max)
    });
    let reduced_operators_equal = same_dim && a.reduced.max_abs_diff(&b.reduced)? <= REDUCED_MATRIX_TOL;
    let reduced_corner =
        (a.reduced.dim() == 2 && b.reduced.dim() == 2).then(|| (a.reduced[(1, 1)].re, b.reduced[(1, 1)].re));
    let dynamics_match = max_amplitude_discrepancy <= UNIVERSALITY_TOL
        && max_reduced_discrepancy.is_some_and(|d| d <= UNIVERSALITY_TOL);

    Ok(CertificationReport {
        generator,
        order: g1.order(),
        hubs: (a.hub, b.hub),
        edge_counts: (g1.edge_count(), g2.edge_count()),
        reduced_dims: (a.reduced.dim(), b.reduced.dim()),
        max_amplitude_discrepancy,
        max_reduced_discrepancy,
        reduced_operators_equal,
        reduced_corner,
        tolerance: UNIVERSALITY_TOL,
        dynamics_match,
    })
}

/// Compares the Laplacian walks from the hubs of two graphs of equal order.
/// The walks are expected to coincide for every pair.
pub fn certify_laplacian_universality(g1: &Graph, g2: &Graph, grid: &[f64]) -> Result<CertificationReport> {
    certify(g1, g2, grid, Generator::Laplacian)
}

/// Compares the adjacency walks from the hubs of two graphs of equal order.
/// They coincide only when the reduced adjacency operators do.
pub fn certify_adjacency_dependence(g1: &Graph, g2: &Graph, grid: &[f64]) -> Result<CertificationReport> {
    certify(g1, g2, grid, Generator::Adjacency)
}

impl CertificationReport {
    /// `2(M₁ - M₂)/(N - 1)`: the difference of the reduced adjacency corners
    /// predicted for graphs whose non-hub vertices share one degree.
    pub fn predicted_corner_difference(&self) -> f64 {
        2.0 * (self.edge_counts.0 as f64 - self.edge_counts.1 as f64) / (self.order as f64 - 1.0)
    }
}
