//! Hamiltonian assembly and time-evolution traces.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CtqwError, Result};
use crate::graph::{Graph, VertexSet};
use crate::linalg::{integrate, propagator_pade, ComplexOperator, Propagator, StateVector, HERMITIAN_TOL};

/// Initial states must have unit norm to this precision.
pub const NORM_TOL: f64 = 1e-10;
/// Absolute quadrature tolerance for the whole cumulative trapping curve.
pub const TRAPPING_QUAD_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Laplacian,
    Adjacency,
}

/// `γ·G + Σ_w λ_w |w⟩⟨w|` with `G` the Laplacian or adjacency matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    pub generator: Generator,
    pub gamma: f64,
    pub marks: BTreeMap<usize, Complex64>,
}

impl HamiltonianSpec {
    pub fn new(generator: Generator, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(CtqwError::InvalidParameter(format!("γ must be positive, got {gamma}")));
        }
        Ok(Self {
            generator,
            gamma,
            marks: BTreeMap::new(),
        })
    }

    pub fn with_mark(mut self, vertex: usize, lambda: Complex64) -> Self {
        self.marks.insert(vertex, lambda);
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.marks.values().all(|l| l.im == 0.0)
    }

    /// Trapping rates `κ_w = -Im λ_w` of the marks with nonzero imaginary part.
    pub fn trapping_rates(&self) -> Vec<(usize, f64)> {
        self.marks
            .iter()
            .filter(|(_, l)| l.im != 0.0)
            .map(|(&w, l)| (w, -l.im))
            .collect()
    }
}

pub fn assemble(spec: &HamiltonianSpec, g: &Graph) -> Result<ComplexOperator> {
    if !(spec.gamma > 0.0 && spec.gamma.is_finite()) {
        return Err(CtqwError::InvalidParameter(format!("γ must be positive, got {}", spec.gamma)));
    }
    let n = g.order();
    let base = match spec.generator {
        Generator::Laplacian => g.laplacian_matrix(),
        Generator::Adjacency => g.adjacency_matrix(),
    };
    let mut h = base.scale(Complex64::new(spec.gamma, 0.0));
    for (&w, &lambda) in &spec.marks {
        if w >= n {
            return Err(CtqwError::VertexOutOfRange { vertex: w, n });
        }
        h[(w, w)] += lambda;
    }
    Ok(h)
}

/// A probability to record along a trajectory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observable {
    /// `|⟨v|ψ⟩|²`
    Vertex(usize),
    /// `Σ_{v ∈ S} |⟨v|ψ⟩|²`
    Set(VertexSet),
}

impl Observable {
    pub fn label(&self) -> String {
        match self {
            Self::Vertex(v) => format!("p{v}"),
            Self::Set(s) => {
                let ids: Vec<String> = s.iter().map(|v| v.to_string()).collect();
                format!("pset_{}", ids.join("_"))
            }
        }
    }

    pub fn value(&self, state: &StateVector) -> f64 {
        match self {
            Self::Vertex(v) => state.probability(*v),
            Self::Set(s) => s.iter().map(|v| state.probability(v)).sum(),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let max = match self {
            Self::Vertex(v) => Some(*v),
            Self::Set(s) => s.iter().last(),
        };
        match max {
            Some(v) if v >= n => Err(CtqwError::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

/// Column label of the cumulative trapping curve.
pub const ETA_LABEL: &str = "eta";
/// Column label of the squared norm.
pub const NORM_LABEL: &str = "norm2";

/// Observables sampled on a time grid. Columns follow `labels`; the last
/// column is always the squared norm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub labels: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl EvolutionTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn column(&self, label: &str) -> Option<Vec<f64>> {
        let k = self.column_index(label)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn norms(&self) -> Vec<f64> {
        self.rows.iter().map(|r| *r.last().expect("norm column")).collect()
    }
}

/// `steps + 1` equally spaced points on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(CtqwError::InvalidGrid(format!("t_max must be positive, got {t_max}")));
    }
    if steps == 0 {
        return Err(CtqwError::InvalidGrid("need at least one step".into()));
    }
    Ok((0..=steps).map(|k| t_max * k as f64 / steps as f64).collect())
}

pub fn validate_grid(times: &[f64]) -> Result<()> {
    match times.first() {
        None => return Err(CtqwError::InvalidGrid("empty grid".into())),
        Some(&t0) if t0 != 0.0 => {
            return Err(CtqwError::InvalidGrid(format!("grid must start at 0, got {t0}")))
        }
        _ => {}
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(CtqwError::InvalidGrid("non-finite time".into()));
    }
    if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
        return Err(CtqwError::InvalidGrid(format!(
            "times must be strictly ascending ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

fn check_normalized(psi: &StateVector) -> Result<()> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(CtqwError::NotNormalized { norm });
    }
    Ok(())
}

/// Non-Hermitian propagation by Padé steps. Grid steps are cached per
/// distinct length; quadrature nodes are not.
struct Stepper<'a> {
    h: &'a ComplexOperator,
    cache: HashMap<u64, ComplexOperator>,
}

impl<'a> Stepper<'a> {
    fn new(h: &'a ComplexOperator) -> Self {
        Self {
            h,
            cache: HashMap::new(),
        }
    }

    fn step(&mut self, psi: &StateVector, dt: f64) -> Result<StateVector> {
        if dt == 0.0 {
            return Ok(psi.clone());
        }
        let u = match self.cache.get(&dt.to_bits()) {
            Some(u) => u,
            None => {
                let u = propagator_pade(self.h, dt)?;
                self.cache.entry(dt.to_bits()).or_insert(u)
            }
        };
        u.apply(psi)
    }

    fn step_uncached(&self, psi: &StateVector, dt: f64) -> Result<StateVector> {
        match self.cache.get(&dt.to_bits()) {
            Some(u) => u.apply(psi),
            None if dt == 0.0 => Ok(psi.clone()),
            None => propagator_pade(self.h, dt)?.apply(psi),
        }
    }
}

/// States `ψ(t_k)` on a validated grid.
fn states_on_grid(h: &ComplexOperator, psi0: &StateVector, times: &[f64]) -> Result<Vec<StateVector>> {
    if h.is_hermitian(HERMITIAN_TOL) {
        let prop = Propagator::new(h)?;
        times
            .iter()
            .map(|&t| if t == 0.0 { Ok(psi0.clone()) } else { prop.apply(psi0, t) })
            .collect()
    } else {
        let mut stepper = Stepper::new(h);
        let mut out = Vec::with_capacity(times.len());
        let mut psi = psi0.clone();
        let mut prev = 0.0;
        for &t in times {
            psi = stepper.step(&psi, t - prev)?;
            prev = t;
            out.push(psi.clone());
        }
        Ok(out)
    }
}

/// Cumulative trapped probability `η̃(t_k) = 2 Σ_w κ_w ∫_0^{t_k} |⟨w|ψ(τ)⟩|² dτ`.
///
/// Each grid interval is integrated adaptively, re-evaluating the propagator
/// from the state at its left end. `states[k]` must equal `ψ(times[k])`.
pub fn cumulative_trapping(
    h: &ComplexOperator,
    rates: &[(usize, f64)],
    states: &[StateVector],
    times: &[f64],
    abs_tol: f64,
) -> Result<Vec<f64>> {
    validate_grid(times)?;
    if states.len() != times.len() {
        return Err(CtqwError::DimensionMismatch {
            expected: times.len(),
            found: states.len(),
        });
    }
    let n = h.dim();
    for &(w, kappa) in rates {
        if w >= n {
            return Err(CtqwError::VertexOutOfRange { vertex: w, n });
        }
        if !(kappa > 0.0) {
            return Err(CtqwError::InvalidParameter(format!(
                "trapping rate at vertex {w} must be positive, got {kappa}"
            )));
        }
    }
    let intervals = (times.len() - 1).max(1);
    let per_interval = abs_tol / intervals as f64;
    let stepper = Stepper::new(h);
    let mut eta = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    eta.push(0.0);
    for k in 1..times.len() {
        let (t0, t1) = (times[k - 1], times[k]);
        let anchor = &states[k - 1];
        let piece = integrate(
            |tau| {
                let psi = stepper.step_uncached(anchor, tau - t0)?;
                Ok(2.0 * rates.iter().map(|&(w, kappa)| kappa * psi.probability(w)).sum::<f64>())
            },
            t0,
            t1,
            per_interval,
        )?;
        acc += piece;
        eta.push(acc);
    }
    Ok(eta)
}

/// Evolves `psi0` under `assemble(spec, g)` and samples the observables.
/// Non-Hermitian specs also get the cumulative trapping column.
pub fn evolve(
    spec: &HamiltonianSpec,
    g: &Graph,
    psi0: &StateVector,
    times: &[f64],
    observables: &[Observable],
) -> Result<EvolutionTrace> {
    let h = assemble(spec, g)?;
    if psi0.dim() != h.dim() {
        return Err(CtqwError::DimensionMismatch {
            expected: h.dim(),
            found: psi0.dim(),
        });
    }
    check_normalized(psi0)?;
    validate_grid(times)?;
    for o in observables {
        o.check(h.dim())?;
    }
    let states = states_on_grid(&h, psi0, times)?;
    let eta = if spec.is_hermitian() {
        None
    } else {
        Some(cumulative_trapping(&h, &spec.trapping_rates(), &states, times, TRAPPING_QUAD_TOL)?)
    };

    let mut labels: Vec<String> = observables.iter().map(Observable::label).collect();
    if eta.is_some() {
        labels.push(ETA_LABEL.into());
    }
    labels.push(NORM_LABEL.into());
    let rows = states
        .iter()
        .enumerate()
        .map(|(k, psi)| {
            let mut row: Vec<f64> = observables.iter().map(|o| o.value(psi)).collect();
            if let Some(eta) = &eta {
                row.push(eta[k]);
            }
            row.push(psi.norm_sqr());
            row
        })
        .collect();
    Ok(EvolutionTrace {
        times: times.to_vec(),
        labels,
        rows,
    })
}

/// Evolution in reduced coordinates; column `c{k}` is `|⟨e_k|ψ(t)⟩|²`.
pub fn evolve_reduced(h_red: &ComplexOperator, psi0_red: &StateVector, times: &[f64]) -> Result<EvolutionTrace> {
    if psi0_red.dim() != h_red.dim() {
        return Err(CtqwError::DimensionMismatch {
            expected: h_red.dim(),
            found: psi0_red.dim(),
        });
    }
    validate_grid(times)?;
    let states = states_on_grid(h_red, psi0_red, times)?;
    let m = h_red.dim();
    let mut labels: Vec<String> = (0..m).map(|k| format!("c{k}")).collect();
    labels.push(NORM_LABEL.into());
    let rows = states
        .iter()
        .map(|psi| {
            let mut row: Vec<f64> = (0..m).map(|k| psi.probability(k)).collect();
            row.push(psi.norm_sqr());
            row
        })
        .collect();
    Ok(EvolutionTrace {
        times: times.to_vec(),
        labels,
        rows,
    })
}

/// Amplitudes `ψ(t_k)` for an arbitrary (possibly non-Hermitian) operator.
pub fn trajectory(h: &ComplexOperator, psi0: &StateVector, times: &[f64]) -> Result<Vec<StateVector>> {
    if psi0.dim() != h.dim() {
        return Err(CtqwError::DimensionMismatch {
            expected: h.dim(),
            found: psi0.dim(),
        });
    }
    validate_grid(times)?;
    states_on_grid(h, psi0, times)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;
    use crate::krylov::closed_form_reduced_laplacian;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn assemble_examples() {
        let k2 = make_complete(2).unwrap();
        let h = assemble(&HamiltonianSpec::new(Generator::Laplacian, 1.0).unwrap(), &k2).unwrap();
        let want = ComplexOperator::from_real_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        assert_eq!(h, want);

        let star = make_star(8).unwrap();
        let spec = HamiltonianSpec::new(Generator::Laplacian, 1.0 / 8.0).unwrap().with_mark(0, c(-1.0, 0.0));
        let h = assemble(&spec, &star).unwrap();
        assert!((h[(0, 0)].re - (7.0 / 8.0 - 1.0)).abs() < 1e-15);
        assert!((h[(3, 0)].re + 1.0 / 8.0).abs() < 1e-15);
        assert!(h.is_hermitian(HERMITIAN_TOL));

        let spec = HamiltonianSpec::new(Generator::Laplacian, 1.0).unwrap().with_mark(0, c(0.0, -0.5));
        assert!(!spec.is_hermitian());
        assert!(!assemble(&spec, &star).unwrap().is_hermitian(HERMITIAN_TOL));
        assert_eq!(spec.trapping_rates(), vec![(0, 0.5)]);

        let bad = HamiltonianSpec::new(Generator::Adjacency, 1.0).unwrap().with_mark(8, c(1.0, 0.0));
        assert!(matches!(assemble(&bad, &star), Err(CtqwError::VertexOutOfRange { vertex: 8, n: 8 })));
        assert!(HamiltonianSpec::new(Generator::Laplacian, 0.0).is_err());
    }

    #[test]
    fn k2_return_probability_is_cos_squared() {
        let g = make_complete(2).unwrap();
        let spec = HamiltonianSpec::new(Generator::Laplacian, 1.0).unwrap();
        let psi0 = StateVector::basis(2, 0).unwrap();
        let times = [0.0, 0.4, 1.0, PI / 2.0];
        let tr = evolve(&spec, &g, &psi0, &times, &[Observable::Vertex(0)]).unwrap();
        assert_eq!(tr.labels, vec!["p0", "norm2"]);
        assert_eq!(tr.rows[0][0], 1.0);
        for (row, &t) in tr.rows.iter().zip(&times) {
            assert!((row[0] - t.cos().powi(2)).abs() < 1e-12);
            assert!((row[1] - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn set_observable_sums() {
        let g = make_star(5).unwrap();
        let spec = HamiltonianSpec::new(Generator::Laplacian, 1.0).unwrap();
        let psi0 = StateVector::uniform(5);
        let set = VertexSet::new([1, 3], 5).unwrap();
        let tr = evolve(&spec, &g, &psi0, &[0.0], &[Observable::Set(set.clone())]).unwrap();
        assert_eq!(tr.labels[0], "pset_1_3");
        assert!((tr.rows[0][0] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn evolve_errors() {
        let g = make_star(4).unwrap();
        let spec = HamiltonianSpec::new(Generator::Laplacian, 1.0).unwrap();
        let psi = StateVector::basis(4, 0).unwrap();
        let bad = StateVector::from_real(&[1.0, 1.0, 0.0, 0.0]);
        assert!(matches!(evolve(&spec, &g, &bad, &[0.0], &[]), Err(CtqwError::NotNormalized { .. })));
        assert!(matches!(evolve(&spec, &g, &psi, &[0.1, 0.2], &[]), Err(CtqwError::InvalidGrid(_))));
        assert!(matches!(evolve(&spec, &g, &psi, &[0.0, 0.2, 0.2], &[]), Err(CtqwError::InvalidGrid(_))));
        assert!(matches!(evolve(&spec, &g, &psi, &[0.0], &[Observable::Vertex(9)]), Err(CtqwError::VertexOutOfRange { .. })));
        assert!(uniform_grid(0.0, 3).is_err());
        assert!(uniform_grid(1.0, 0).is_err());
    }

    #[test]
    fn uniform_grid_contract() {
        let g = uniform_grid(1.0, 3).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[3], 1.0);
        validate_grid(&g).unwrap();
    }

    #[test]
    fn reduced_matches_full_return_probability() {
        let times = uniform_grid(20.0, 50).unwrap();
        let red = evolve_reduced(
            &closed_form_reduced_laplacian(8).unwrap(),
            &StateVector::from_real(&[1.0, 0.0]),
            &times,
        )
        .unwrap();
        assert_eq!(red.rows[0][0], 1.0);
        let spec = HamiltonianSpec::new(Generator::Laplacian, 1.0).unwrap();
        for g in [make_star(8).unwrap(), make_wheel(8).unwrap(), make_random_with_hub(8, 0.5, 11).unwrap()] {
            let full = evolve(&spec, &g, &StateVector::basis(8, 0).unwrap(), &times, &[Observable::Vertex(0)]).unwrap();
            for (a, b) in full.rows.iter().zip(&red.rows) {
                assert!((a[0] - b[0]).abs() < 1e-8);
                assert!((b[2] - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn single_site_trapping() {
        // H = -iκ: norm² = e^{-2κt}, η̃(t) = 1 - e^{-2κt}
        let h = ComplexOperator::from_fn(1, |_, _| c(0.0, -0.3));
        let times = uniform_grid(5.0, 10).unwrap();
        let psi0 = StateVector::basis(1, 0).unwrap();
        let states = trajectory(&h, &psi0, &times).unwrap();
        let eta = cumulative_trapping(&h, &[(0, 0.3)], &states, &times, 1e-12).unwrap();
        for ((&t, e), s) in times.iter().zip(&eta).zip(&states) {
            let survive = (-0.6 * t).exp();
            assert!((s.norm_sqr() - survive).abs() < 1e-12);
            assert!((e - (1.0 - survive)).abs() < 1e-11);
        }
    }

    #[test]
    fn non_hermitian_trace_has_eta_column() {
        let g = make_star(6).unwrap();
        let spec = HamiltonianSpec::new(Generator::Laplacian, 1.0).unwrap().with_mark(0, c(0.0, -1.0));
        let tr = evolve(&spec, &g, &StateVector::basis(6, 2).unwrap(), &uniform_grid(30.0, 60).unwrap(), &[Observable::Vertex(0)]).unwrap();
        assert_eq!(tr.labels, vec!["p0", "eta", "norm2"]);
        let norms = tr.norms();
        assert!(norms.windows(2).all(|w| w[1] <= w[0] + 1e-14));
        let eta = tr.column("eta").unwrap();
        for (e, n) in eta.iter().zip(&norms) {
            // trapped + surviving = 1
            assert!((e + n - 1.0).abs() < 1e-9);
        }
    }
}
