//! Quantum transport to fully connected trap vertices.
//!
//! The walker starts on a vertex outside the traps and evolves under
//! `L - i Σ_w κ_w |w⟩⟨w|`. The efficiency `η` is evaluated three ways: as the
//! overlap of the initial state with the marked invariant subspace, as the
//! probability missing from the graph at `t_max`, and as the time integral of
//! the trapping current.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::engine::{
    assemble, cumulative_trapping, trajectory, uniform_grid, EvolutionTrace, Generator, HamiltonianSpec,
    Observable, ETA_LABEL, NORM_LABEL, TRAPPING_QUAD_TOL,
};
use crate::error::{CtqwError, Result};
use crate::graph::{Graph, VertexSet};
use crate::krylov::{marked_subspace, InvariantSubspace};
use crate::linalg::{ComplexOperator, StateVector};

/// Default bound on the trappable weight left at `t_max`.
pub const TRANSPORT_TOL: f64 = 1e-6;
/// First `t_max` tried by the doubling search.
pub const INITIAL_T_MAX: f64 = 16.0;
/// Upper limit of the doubling search.
pub const T_MAX_LIMIT: f64 = 1.0e6;
/// Intervals of the reported `η̃(t)` trace.
pub const TRANSPORT_GRID_STEPS: usize = 200;

#[derive(Clone, Debug, Serialize)]
pub struct TransportResult {
    pub eta_overlap: f64,
    pub eta_limit: f64,
    pub eta_integral: f64,
    /// `1 / (N - μ)`
    pub eta_expected: f64,
    pub t_max: f64,
    /// Trappable weight `‖P ψ(t_max)‖²` still inside the graph.
    pub tail: f64,
    pub traps: VertexSet,
    pub kappa: BTreeMap<usize, f64>,
    pub start: usize,
    pub trace: EvolutionTrace,
}

fn trappable_weight(sub: &InvariantSubspace, psi: &StateVector) -> Result<f64> {
    Ok(sub.project(psi)?.norm_sqr())
}

fn validate(g: &Graph, traps: &VertexSet, kappas: &BTreeMap<usize, f64>, start: usize) -> Result<()> {
    let n = g.order();
    if traps.is_empty() {
        return Err(CtqwError::EmptyVertexSet);
    }
    if start >= n {
        return Err(CtqwError::VertexOutOfRange { vertex: start, n });
    }
    if traps.contains(start) {
        return Err(CtqwError::StartInTraps(start));
    }
    for w in traps.iter() {
        if !g.is_fully_connected(w)? {
            return Err(CtqwError::NotFullyConnected { vertex: w });
        }
        match kappas.get(&w) {
            Some(&k) if k > 0.0 && k.is_finite() => {}
            Some(&k) => {
                return Err(CtqwError::InvalidParameter(format!(
                    "trapping rate at vertex {w} must be positive, got {k}"
                )))
            }
            None => {
                return Err(CtqwError::InvalidParameter(format!("missing trapping rate for vertex {w}")))
            }
        }
    }
    if let Some(&extra) = kappas.keys().find(|&&v| !traps.contains(v)) {
        return Err(CtqwError::InvalidParameter(format!("trapping rate given for non-trap vertex {extra}")));
    }
    Ok(())
}

/// Effective Hamiltonian `L - i Σ_w κ_w |w⟩⟨w|`.
pub fn transport_hamiltonian(g: &Graph, kappas: &BTreeMap<usize, f64>) -> Result<ComplexOperator> {
    let mut spec = HamiltonianSpec::new(Generator::Laplacian, 1.0)?;
    for (&w, &k) in kappas {
        spec = spec.with_mark(w, Complex64::new(0.0, -k));
    }
    assemble(&spec, g)
}

/// Runs the transport experiment. Without `t_max`, the horizon doubles from
/// [`INITIAL_T_MAX`] until the trappable weight left in the graph drops below
/// `tol`; with an explicit `t_max`, exceeding `tol` there is an error.
pub fn run_transport(
    g: &Graph,
    traps: &VertexSet,
    kappas: &BTreeMap<usize, f64>,
    start: usize,
    t_max: Option<f64>,
    tol: f64,
) -> Result<TransportResult> {
    if !(tol > 0.0) {
        return Err(CtqwError::InvalidTolerance(tol));
    }
    validate(g, traps, kappas, start)?;
    let n = g.order();
    let h = transport_hamiltonian(g, kappas)?;
    let sub = marked_subspace(g, traps)?;
    let psi0 = StateVector::basis(n, start)?;
    let eta_overlap = trappable_weight(&sub, &psi0)?;

    let (t_max, psi_end) = match t_max {
        Some(t) => {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CtqwError::InvalidParameter(format!("t_max must be positive, got {t}")));
            }
            (t, trajectory(&h, &psi0, &[0.0, t])?.pop().expect("two states"))
        }
        None => {
            let mut t = INITIAL_T_MAX;
            loop {
                let psi = trajectory(&h, &psi0, &[0.0, t])?.pop().expect("two states");
                if trappable_weight(&sub, &psi)? < tol || t >= T_MAX_LIMIT {
                    break (t, psi);
                }
                t *= 2.0;
            }
        }
    };
    let tail = trappable_weight(&sub, &psi_end)?;
    if tail >= tol {
        return Err(CtqwError::TransportNotConverged {
            t_max,
            remaining: tail,
            tol,
        });
    }

    let times = uniform_grid(t_max, TRANSPORT_GRID_STEPS)?;
    let states = trajectory(&h, &psi0, &times)?;
    let rates: Vec<(usize, f64)> = kappas.iter().map(|(&w, &k)| (w, k)).collect();
    let eta = cumulative_trapping(&h, &rates, &states, &times, TRAPPING_QUAD_TOL)?;
    let eta_integral = *eta.last().expect("non-empty grid");
    let eta_limit = 1.0 - psi_end.norm_sqr();

    let traps_label = Observable::Set(traps.clone());
    let rows = states
        .iter()
        .zip(&eta)
        .map(|(psi, &e)| vec![traps_label.value(psi), e, psi.norm_sqr()])
        .collect();
    let trace = EvolutionTrace {
        times,
        labels: vec![traps_label.label(), ETA_LABEL.into(), NORM_LABEL.into()],
        rows,
    };

    Ok(TransportResult {
        eta_overlap,
        eta_limit,
        eta_integral,
        eta_expected: 1.0 / (n - traps.len()) as f64,
        t_max,
        tail,
        traps: traps.clone(),
        kappa: kappas.clone(),
        start,
        trace,
    })
}

/// Uniform rate `κ` on every trap.
pub fn uniform_rates(traps: &VertexSet, kappa: f64) -> BTreeMap<usize, f64> {
    traps.iter().map(|w| (w, kappa)).collect()
}
