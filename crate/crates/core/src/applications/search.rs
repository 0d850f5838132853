//! Spatial search for fully connected marked vertices.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::engine::{evolve, uniform_grid, EvolutionTrace, Generator, HamiltonianSpec, Observable};
use crate::error::{CtqwError, Result};
use crate::graph::{Graph, VertexSet};
use crate::linalg::StateVector;

/// Allowed deviation between the simulated and the closed-form success probability.
pub const SEARCH_TOL: f64 = 1e-6;
/// Intervals of the default grid on `[0, 2 t*]`.
pub const SEARCH_GRID_STEPS: usize = 400;

/// `P_W(t) = (μ/N) cos²(√(μ/N) t) + sin²(√(μ/N) t)`.
pub fn search_success_closed_form(n: usize, mu: usize, t: f64) -> Result<f64> {
    if mu == 0 || mu >= n {
        return Err(CtqwError::InvalidParameter(format!(
            "number of targets must satisfy 1 ≤ μ < N = {n}, got {mu}"
        )));
    }
    if !(t >= 0.0) {
        return Err(CtqwError::InvalidParameter(format!("time must be non-negative, got {t}")));
    }
    let ratio = mu as f64 / n as f64;
    let phase = ratio.sqrt() * t;
    Ok(ratio * phase.cos().powi(2) + phase.sin().powi(2))
}

/// `t* = (π/2) √(N/μ)`
pub fn optimal_search_time(n: usize, mu: usize) -> f64 {
    FRAC_PI_2 * (n as f64 / mu as f64).sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub gamma: f64,
    pub t_star: f64,
    pub success_probability_at_t_star: f64,
    pub targets: VertexSet,
    /// Largest `|P_W(t) - closed form|` over the grid.
    pub max_closed_form_deviation: f64,
    pub trace: EvolutionTrace,
}

/// Search with `γ = 1/N`, `λ_w = -1` on every target, uniform start, on the
/// default grid.
pub fn run_spatial_search(g: &Graph, targets: &VertexSet) -> Result<SearchResult> {
    run_spatial_search_with_steps(g, targets, SEARCH_GRID_STEPS)
}

pub fn run_spatial_search_with_steps(g: &Graph, targets: &VertexSet, steps: usize) -> Result<SearchResult> {
    let n = g.order();
    if targets.is_empty() {
        return Err(CtqwError::EmptyVertexSet);
    }
    for w in targets.iter() {
        if !g.is_fully_connected(w)? {
            return Err(CtqwError::NotFullyConnected { vertex: w });
        }
    }
    let mu = targets.len();
    if mu >= n {
        return Err(CtqwError::InvalidParameter(format!("need fewer targets than N = {n}")));
    }
    let gamma = 1.0 / n as f64;
    let mut spec = HamiltonianSpec::new(Generator::Laplacian, gamma)?;
    for w in targets.iter() {
        spec = spec.with_mark(w, Complex64::new(-1.0, 0.0));
    }
    let t_star = optimal_search_time(n, mu);
    let mut times = uniform_grid(2.0 * t_star, steps)?;
    if !times.contains(&t_star) {
        times.push(t_star);
        times.sort_by(f64::total_cmp);
    }
    let psi0 = StateVector::uniform(n);
    let trace = evolve(&spec, g, &psi0, &times, &[Observable::Set(targets.clone())])?;

    let mut deviation = 0.0_f64;
    let mut at_t_star = f64::NAN;
    for (&t, row) in trace.times.iter().zip(&trace.rows) {
        deviation = deviation.max((row[0] - search_success_closed_form(n, mu, t)?).abs());
        if t == t_star {
            at_t_star = row[0];
        }
    }
    if deviation > SEARCH_TOL {
        return Err(CtqwError::ClosedFormMismatch {
            what: "search success probability",
            deviation,
            tolerance: SEARCH_TOL,
        });
    }
    Ok(SearchResult {
        gamma,
        t_star,
        success_probability_at_t_star: at_t_star,
        targets: targets.clone(),
        max_closed_form_deviation: deviation,
        trace,
    })
}
