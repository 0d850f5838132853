//! Numerical checks of the eigenvector structure of `γL + Σ_w λ_w |w⟩⟨w|`
//! with fully connected marked vertices.
//!
//! Eigenvectors with no weight on the marked vertices must have components
//! summing to zero; the remaining ones must be flat outside the marked set,
//! with value `γ/(γμ - ε) Σ_{w ∈ W} ⟨w|ε⟩`. Degenerate eigenspaces are first
//! rotated so the weight on the marked vertices is packed into as few vectors
//! as possible.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{CtqwError, Result};
use crate::graph::{Graph, VertexSet};
use crate::linalg::{hermitian_eigendecomposition, ComplexOperator, StateVector};

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-8;
/// Overlap norm above which an eigenvector counts as touching a subspace.
pub const OVERLAP_TOL: f64 = 1e-8;
pub const LEMMA1_TOL: f64 = 1e-8;
/// Bound on the spread of the unmarked components.
pub const FLATNESS_TOL: f64 = 1e-9;
pub const LEMMA2_VALUE_TOL: f64 = 1e-8;
/// The flat value is not compared when `|γμ - ε|` is below this.
const POLE_GUARD: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub order: usize,
    pub marks: BTreeMap<usize, f64>,
    pub gamma: f64,
    /// Eigenvectors overlapping `span{|w⟩ : w ∈ W} + uniform state on the rest`.
    pub overlapping: usize,
    /// Eigenvectors overlapping the grouped basis (one uniform state per
    /// distinct `λ` plus the uniform state on the rest).
    pub overlapping_grouped: usize,
    pub non_overlapping: usize,
    pub max_component_sum: f64,
    pub max_unmarked_spread: f64,
    pub max_flat_value_deviation: f64,
    pub lemma1_pass: bool,
    pub lemma2_pass: bool,
}

/// Columns `basis` rotated by the eigenvectors of `B†B`, strongest overlap first,
/// where `B = P† basis` for the orthonormal columns `P`.
fn rotate_cluster(cluster: &DMatrix<Complex64>, p: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let b = p.adjoint() * cluster;
    let gram = ComplexOperator::from_matrix(b.adjoint() * &b)?;
    let eig = hermitian_eigendecomposition(&gram)?;
    let k = eig.dim();
    let reversed = DMatrix::from_fn(k, k, |i, j| eig.eigenvectors[(i, k - 1 - j)]);
    Ok(cluster * reversed)
}

fn columns(states: &[StateVector], n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, states.len(), |i, j| states[j][i])
}

fn overlap_count(
    clusters: &[DMatrix<Complex64>],
    p: &DMatrix<Complex64>,
) -> Result<(usize, Vec<(DMatrix<Complex64>, Vec<bool>)>)> {
    let mut total = 0;
    let mut out = Vec::new();
    for c in clusters {
        let rotated = rotate_cluster(c, p)?;
        let flags: Vec<bool> = (0..rotated.ncols())
            .map(|j| (p.adjoint() * rotated.column(j)).norm() > OVERLAP_TOL)
            .collect();
        total += flags.iter().filter(|&&f| f).count();
        out.push((rotated, flags));
    }
    Ok((total, out))
}

pub fn lemma_eigenvector_checks(g: &Graph, marks: &BTreeMap<usize, f64>, gamma: f64) -> Result<LemmaReport> {
    let n = g.order();
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(CtqwError::InvalidParameter(format!("γ must be positive, got {gamma}")));
    }
    let marked = VertexSet::new(marks.keys().copied(), n)?;
    if marked.is_empty() {
        return Err(CtqwError::EmptyVertexSet);
    }
    if marked.len() >= n {
        return Err(CtqwError::InvalidParameter(format!("need fewer marked vertices than N = {n}")));
    }
    for w in marked.iter() {
        if !g.is_fully_connected(w)? {
            return Err(CtqwError::NotFullyConnected { vertex: w });
        }
    }
    let mu = marked.len();
    let rest: Vec<usize> = (0..n).filter(|&v| !marked.contains(v)).collect();

    let mut h = g.laplacian_matrix().scale(Complex64::new(gamma, 0.0));
    for (&w, &l) in marks {
        h[(w, w)] += Complex64::new(l, 0.0);
    }
    let eig = hermitian_eigendecomposition(&h)?;

    let mut clusters = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || eig.eigenvalues[k] - eig.eigenvalues[k - 1] >= DEGENERACY_TOL {
            clusters.push(eig.eigenvectors.columns(start, k - start).into_owned());
            start = k;
        }
    }
    let eigenvalue_of = |col: &nalgebra::DVectorView<Complex64>| -> f64 {
        let v = StateVector::from_amplitudes(col.iter().copied().collect());
        h.apply(&v).map(|hv| v.inner(&hv).re).unwrap_or(f64::NAN)
    };

    // Full marked basis: each |w⟩ and the uniform state on the rest.
    let mut full = marked
        .iter()
        .map(|w| StateVector::basis(n, w))
        .collect::<Result<Vec<_>>>()?;
    full.push(StateVector::uniform_over(n, &rest)?);
    let (overlapping, rotated) = overlap_count(&clusters, &columns(&full, n))?;

    // Grouped basis: one uniform state per distinct λ.
    let mut by_lambda: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (&w, &l) in marks {
        by_lambda.entry(l.to_bits()).or_default().push(w);
    }
    let mut grouped = by_lambda
        .values()
        .map(|ws| StateVector::uniform_over(n, ws))
        .collect::<Result<Vec<_>>>()?;
    grouped.push(StateVector::uniform_over(n, &rest)?);
    let (overlapping_grouped, _) = overlap_count(&clusters, &columns(&grouped, n))?;

    let mut max_sum = 0.0_f64;
    let mut max_spread = 0.0_f64;
    let mut max_dev = 0.0_f64;
    for (vectors, flags) in &rotated {
        for (j, &overlaps) in flags.iter().enumerate() {
            let col = vectors.column(j);
            if !overlaps {
                max_sum = max_sum.max(col.iter().sum::<Complex64>().norm());
                continue;
            }
            let mean = rest.iter().map(|&v| col[v]).sum::<Complex64>() / rest.len() as f64;
            let spread = (rest.iter().map(|&v| (col[v] - mean).norm_sqr()).sum::<f64>() / rest.len() as f64).sqrt();
            max_spread = max_spread.max(spread);
            let eps = eigenvalue_of(&col);
            let pole = gamma * mu as f64 - eps;
            if pole.abs() > POLE_GUARD {
                let marked_sum: Complex64 = marked.iter().map(|w| col[w]).sum();
                let predicted = marked_sum * (gamma / pole);
                max_dev = max_dev.max((predicted - mean).norm());
            }
        }
    }

    Ok(LemmaReport {
        order: n,
        marks: marks.clone(),
        gamma,
        overlapping,
        overlapping_grouped,
        non_overlapping: n - overlapping,
        max_component_sum: max_sum,
        max_unmarked_spread: max_spread,
        max_flat_value_deviation: max_dev,
        lemma1_pass: max_sum <= LEMMA1_TOL,
        lemma2_pass: max_spread < FLATNESS_TOL && max_dev <= LEMMA2_VALUE_TOL,
    })
}
