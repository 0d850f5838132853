//! Dimensionality reduction through invariant (Krylov) subspaces.
//!
//! `I(H, |φ⟩) = span{Hⁿ|φ⟩}` is built by orthonormalizing `H|e_n⟩` against the
//! basis found so far, stopping at the first dependent vector. The reduced
//! operator `⟨e_j|H|e_k⟩` then generates the full dynamics of any state
//! inside the subspace.
//!
//! Sign convention: every basis vector after the seed is rotated so that its
//! first non-negligible coordinate (in vertex order) is real and positive.

use num_complex::Complex64;

use crate::error::{CtqwError, Result};
use crate::graph::{Graph, VertexSet};
use crate::linalg::{gram_schmidt_step, ComplexOperator, Orthogonalized, StateVector};

/// Relative norm below which a Krylov candidate counts as linearly dependent.
pub const DEPENDENCE_TOL: f64 = 1e-9;
/// Relative closure residual `‖(I - P) H e_k‖ / ‖H e_k‖` tolerated by the final check.
pub const CLOSURE_TOL: f64 = 1e-8;
/// Coordinates below this fraction of the largest one are ignored when fixing the phase.
const PHASE_CUTOFF: f64 = 1e-8;

/// An orthonormal basis of an invariant subspace of some operator.
#[derive(Clone, Debug)]
pub struct InvariantSubspace {
    ambient_dim: usize,
    basis: Vec<StateVector>,
    source: String,
}

impl InvariantSubspace {
    /// Wraps an explicit orthonormal basis. Orthonormality is checked to `1e-9`.
    pub fn from_basis(basis: Vec<StateVector>, source: impl Into<String>) -> Result<Self> {
        let ambient_dim = basis
            .first()
            .map(StateVector::dim)
            .ok_or_else(|| CtqwError::InvalidParameter("empty basis".into()))?;
        for b in &basis {
            if b.dim() != ambient_dim {
                return Err(CtqwError::DimensionMismatch {
                    expected: ambient_dim,
                    found: b.dim(),
                });
            }
        }
        let sub = Self {
            ambient_dim,
            basis,
            source: source.into(),
        };
        let defect = sub.orthonormality_defect();
        if defect > 1e-9 {
            return Err(CtqwError::InvalidParameter(format!(
                "basis is not orthonormal (defect {defect:.3e})"
            )));
        }
        Ok(sub)
    }

    /// Number of basis vectors `m`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[StateVector] {
        &self.basis
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// `max |⟨e_j|e_k⟩ - δ_jk|`
    pub fn orthonormality_defect(&self) -> f64 {
        let mut d = 0.0_f64;
        for (j, a) in self.basis.iter().enumerate() {
            for (k, b) in self.basis.iter().enumerate() {
                let target = if j == k { 1.0 } else { 0.0 };
                d = d.max((a.inner(b) - Complex64::new(target, 0.0)).norm());
            }
        }
        d
    }

    /// Projector `P = Σ |e_k⟩⟨e_k|` as a dense operator.
    pub fn projector(&self) -> ComplexOperator {
        let n = self.ambient_dim;
        ComplexOperator::from_fn(n, |i, j| {
            self.basis.iter().map(|e| e[i] * e[j].conj()).sum()
        })
    }

    /// Largest absolute residual `‖(I - P) H e_k‖` over the basis.
    pub fn closure_residual(&self, h: &ComplexOperator) -> Result<f64> {
        let mut worst = 0.0_f64;
        for e in &self.basis {
            let he = h.apply(e)?;
            worst = worst.max(self.residual(&he));
        }
        Ok(worst)
    }

    fn residual(&self, v: &StateVector) -> f64 {
        let mut u = v.clone();
        for _ in 0..2 {
            for e in &self.basis {
                let p = e.inner(&u);
                u.axpy(-p, e);
            }
        }
        u.norm()
    }

    /// Reduced coordinates `⟨e_k|state⟩`.
    pub fn project(&self, state: &StateVector) -> Result<StateVector> {
        check(self.ambient_dim, state.dim())?;
        Ok(StateVector::from_amplitudes(
            self.basis.iter().map(|e| e.inner(state)).collect(),
        ))
    }

    /// Maps reduced coordinates back to the ambient space: `Σ c_k |e_k⟩`.
    pub fn lift(&self, coords: &StateVector) -> Result<StateVector> {
        check(self.dim(), coords.dim())?;
        let mut out = StateVector::zeros(self.ambient_dim);
        for (e, &c) in self.basis.iter().zip(coords.amplitudes()) {
            out.axpy(c, e);
        }
        Ok(out)
    }
}

fn check(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(CtqwError::DimensionMismatch { expected, found })
    }
}

/// Rotates `v` so its first non-negligible coordinate is real and positive.
fn fix_phase(v: StateVector) -> StateVector {
    let largest = v.amplitudes().iter().map(|z| z.norm()).fold(0.0, f64::max);
    match v.amplitudes().iter().find(|z| z.norm() > PHASE_CUTOFF * largest) {
        Some(&z) => {
            let phase = z.conj() / z.norm();
            v.scale(phase)
        }
        None => v,
    }
}

/// Builds an orthonormal basis of `I(h, |seed⟩)`.
///
/// After the Krylov recursion stops, `H e_k` is re-checked against the final
/// basis for every `k`; any residual above [`CLOSURE_TOL`] (relative) is
/// appended and the recursion resumes from it.
pub fn build_invariant_subspace(
    h: &ComplexOperator,
    seed_state: &StateVector,
    tol: f64,
) -> Result<InvariantSubspace> {
    if !(tol > 0.0) {
        return Err(CtqwError::InvalidTolerance(tol));
    }
    check(h.dim(), seed_state.dim())?;
    let norm = seed_state.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(CtqwError::NotNormalized { norm });
    }
    let n = h.dim();
    let mut basis = vec![seed_state.clone()];
    let mut next = 0;
    loop {
        // Krylov recursion from every vector not yet expanded.
        while next < basis.len() && basis.len() < n {
            let candidate = h.apply(&basis[next])?;
            next += 1;
            match gram_schmidt_step(&candidate, &basis, tol) {
                Orthogonalized::Independent(v) => basis.push(fix_phase(v)),
                Orthogonalized::Dependent => break,
            }
        }
        // Closure over the whole basis.
        let mut appended = false;
        for k in 0..basis.len() {
            if basis.len() >= n {
                break;
            }
            let he = h.apply(&basis[k])?;
            let scale = he.norm();
            if scale == 0.0 {
                continue;
            }
            if let Orthogonalized::Independent(v) = gram_schmidt_step(&he, &basis, CLOSURE_TOL.max(tol)) {
                basis.push(fix_phase(v));
                appended = true;
            }
        }
        if !appended {
            break;
        }
        next = basis.len() - 1;
    }
    Ok(InvariantSubspace {
        ambient_dim: n,
        basis,
        source: format!("Krylov subspace of a {n}x{n} operator"),
    })
}

/// The `m × m` matrix `⟨e_j|H|e_k⟩`.
pub fn reduce_operator(h: &ComplexOperator, sub: &InvariantSubspace) -> Result<ComplexOperator> {
    check(sub.ambient_dim(), h.dim())?;
    let images = sub
        .basis()
        .iter()
        .map(|e| h.apply(e))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexOperator::from_fn(sub.dim(), |j, k| {
        sub.basis()[j].inner(&images[k])
    }))
}

/// Reduced coordinates of `state` in the basis of `sub`.
pub fn project_state(state: &StateVector, sub: &InvariantSubspace) -> Result<StateVector> {
    sub.project(state)
}

// ---------------------------------------------------------------------------
// Explicit bases for graphs with fully connected vertices

fn require_fully_connected(g: &Graph, w: usize) -> Result<()> {
    if g.is_fully_connected(w)? {
        Ok(())
    } else {
        Err(CtqwError::NotFullyConnected { vertex: w })
    }
}

/// `{|w⟩, Σ_{v≠w}|v⟩/√(N-1)}` for a fully connected `w`.
pub fn hub_subspace(g: &Graph, w: usize) -> Result<InvariantSubspace> {
    require_fully_connected(g, w)?;
    let n = g.order();
    if n < 2 {
        return Err(CtqwError::GraphTooSmall {
            family: "hub subspace",
            n,
            min: 2,
        });
    }
    let rest: Vec<usize> = (0..n).filter(|&v| v != w).collect();
    InvariantSubspace::from_basis(
        vec![StateVector::basis(n, w)?, StateVector::uniform_over(n, &rest)?],
        format!("hub basis for vertex {w}"),
    )
}

/// `{|w_1⟩, …, |w_μ⟩, Σ_{v∉W}|v⟩/√(N-μ)}` for fully connected marked vertices
/// in ascending order.
pub fn marked_subspace(g: &Graph, marked: &VertexSet) -> Result<InvariantSubspace> {
    let groups: Vec<VertexSet> = marked
        .iter()
        .map(|w| VertexSet::single(w, g.order()))
        .collect::<Result<_>>()?;
    grouped_marked_subspace(g, &groups)
}

/// One uniform state per group of marked vertices followed by the uniform
/// state on the unmarked rest. Groups must be disjoint.
pub fn grouped_marked_subspace(g: &Graph, groups: &[VertexSet]) -> Result<InvariantSubspace> {
    let n = g.order();
    let mut all = Vec::new();
    for group in groups {
        if group.is_empty() {
            return Err(CtqwError::EmptyVertexSet);
        }
        for w in group.iter() {
            require_fully_connected(g, w)?;
            all.push(w);
        }
    }
    let marked = VertexSet::new(all, n)?;
    if marked.is_empty() {
        return Err(CtqwError::EmptyVertexSet);
    }
    if marked.len() >= n {
        return Err(CtqwError::InvalidParameter(format!(
            "need fewer marked vertices than N = {n}, got {}",
            marked.len()
        )));
    }
    let rest: Vec<usize> = (0..n).filter(|&v| !marked.contains(v)).collect();
    let mut basis = groups
        .iter()
        .map(|grp| StateVector::uniform_over(n, grp.as_slice()))
        .collect::<Result<Vec<_>>>()?;
    basis.push(StateVector::uniform_over(n, &rest)?);
    InvariantSubspace::from_basis(basis, format!("marked basis for {:?}", marked.as_slice()))
}

// ---------------------------------------------------------------------------
// Closed-form reduced operators

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `[[N-1, -√(N-1)], [-√(N-1), 1]]`
pub fn closed_form_reduced_laplacian(n: usize) -> Result<ComplexOperator> {
    if n < 2 {
        return Err(CtqwError::InvalidParameter(format!("need N ≥ 2, got {n}")));
    }
    let d = (n - 1) as f64;
    ComplexOperator::from_real_rows(&[vec![d, -d.sqrt()], vec![-d.sqrt(), 1.0]])
}

/// `[[0, √(N-1)], [√(N-1), 2M/(N-1) - 2]]` for a graph of order `n` with
/// `m` edges whose non-hub vertices share one degree.
pub fn closed_form_reduced_adjacency(n: usize, m: usize) -> Result<ComplexOperator> {
    if n < 2 {
        return Err(CtqwError::InvalidParameter(format!("need N ≥ 2, got {n}")));
    }
    let d = (n - 1) as f64;
    ComplexOperator::from_real_rows(&[
        vec![0.0, d.sqrt()],
        vec![d.sqrt(), 2.0 * m as f64 / d - 2.0],
    ])
}

fn check_marks(n: usize, mu: usize, gamma: f64) -> Result<()> {
    if mu == 0 || mu >= n {
        return Err(CtqwError::InvalidParameter(format!(
            "number of marked vertices must satisfy 1 ≤ μ < N = {n}, got {mu}"
        )));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(CtqwError::InvalidParameter(format!("γ must be positive, got {gamma}")));
    }
    Ok(())
}

/// The `(μ+1) × (μ+1)` reduced Grover-like Hamiltonian for `μ = lambdas.len()`
/// fully connected marked vertices.
pub fn closed_form_reduced_grover(n: usize, gamma: f64, lambdas: &[Complex64]) -> Result<ComplexOperator> {
    let mu = lambdas.len();
    check_marks(n, mu, gamma)?;
    let coupling = -gamma * ((n - mu) as f64).sqrt();
    Ok(ComplexOperator::from_fn(mu + 1, |j, k| match (j < mu, k < mu) {
        (true, true) if j == k => real(gamma * (n - 1) as f64) + lambdas[j],
        (true, true) => real(-gamma),
        (true, false) | (false, true) => real(coupling),
        (false, false) => real(gamma * mu as f64),
    }))
}

/// `γ [[N-μ-1/γ, -√(μ(N-μ))], [-√(μ(N-μ)), μ]]`: unbiased search with the
/// marked vertices grouped into one solution state.
pub fn closed_form_reduced_search_2d(n: usize, mu: usize, gamma: f64) -> Result<ComplexOperator> {
    check_marks(n, mu, gamma)?;
    let (nf, mf) = (n as f64, mu as f64);
    let off = -gamma * (mf * (nf - mf)).sqrt();
    ComplexOperator::from_real_rows(&[vec![gamma * (nf - mf) - 1.0, off], vec![off, gamma * mf]])
}

// ---------------------------------------------------------------------------
// Residual certificates

/// `‖(L - I)|e_2⟩ + √(N-1)|e_1⟩‖` with `e_1 = |w⟩`, `e_2` uniform on the rest.
/// Vanishes whenever `w` is fully connected.
pub fn theorem1_closure_residual(g: &Graph, w: usize) -> Result<f64> {
    let sub = hub_subspace(g, w)?;
    let (e1, e2) = (&sub.basis()[0], &sub.basis()[1]);
    let n = g.order() as f64;
    let mut lam = g.laplacian_matrix().apply(e2)?;
    lam.axpy(real(-1.0), e2);
    lam.axpy(real((n - 1.0).sqrt()), e1);
    Ok(lam.norm())
}

/// `‖[A - (2M/(N-1) - 2)]|e_2⟩ - √(N-1)|e_1⟩‖`; zero exactly when every
/// vertex other than `w` has the same degree.
pub fn adjacency_alpha_residual(g: &Graph, w: usize) -> Result<f64> {
    let sub = hub_subspace(g, w)?;
    let (e1, e2) = (&sub.basis()[0], &sub.basis()[1]);
    let n = g.order() as f64;
    let shift = 2.0 * g.edge_count() as f64 / (n - 1.0) - 2.0;
    let mut alpha = g.adjacency_matrix().apply(e2)?;
    alpha.axpy(real(-shift), e2);
    alpha.axpy(real(-(n - 1.0).sqrt()), e1);
    Ok(alpha.norm())
}
