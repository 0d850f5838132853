//! JSON experiment configuration.
//!
//! Complex numbers are written as `[re, im]`. Unknown fields are rejected so a
//! typo is reported with its line and column instead of being ignored.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use ctqw::engine::{Generator, HamiltonianSpec, Observable};
use ctqw::graph::*;
use ctqw::{Graph, StateVector, VertexSet};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Star,
    Wheel,
    Complete,
    NearComplete,
    Path,
    RandomHub,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Laplacian,
    Adjacency,
}

/// Either `{"file": ...}` or `{"family": ..., "n": ...}` with optional
/// `p`, `seed` and `hubs` for random graphs.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSource {
    pub file: Option<PathBuf>,
    pub family: Option<Family>,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub seed: Option<u64>,
    pub hubs: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkConfig {
    pub vertex: usize,
    pub lambda: [f64; 2],
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianConfig {
    #[serde(default = "laplacian")]
    pub generator: Generator,
    pub gamma: f64,
    #[serde(default)]
    pub marks: Vec<MarkConfig>,
}

fn laplacian() -> Generator {
    Generator::Laplacian
}

/// Exactly one of the three fields.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub vertex: Option<usize>,
    pub uniform: Option<bool>,
    pub amplitudes: Option<Vec<[f64; 2]>>,
}

/// A single vertex or a list of vertices.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ObservableConfig {
    Vertex(usize),
    Set(Vec<usize>),
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Output subdirectory inside a batch.
    pub name: Option<String>,
    /// Subcommand to run inside a batch.
    pub command: Option<String>,
    pub graph: Option<GraphSource>,
    pub graph2: Option<GraphSource>,
    pub hamiltonian: Option<HamiltonianConfig>,
    pub initial: Option<InitialConfig>,
    #[serde(default)]
    pub observables: Vec<ObservableConfig>,
    pub time: Option<TimeConfig>,
    pub targets: Option<Vec<usize>>,
    pub traps: Option<Vec<usize>>,
    pub kappa: Option<f64>,
    pub kappas: Option<BTreeMap<usize, f64>>,
    pub start_vertex: Option<usize>,
    pub mode: Option<Mode>,
    pub n_max: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchConfig {
    pub runs: Vec<ExperimentConfig>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        parse(&text, path)
    }
}

impl BatchConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        parse(&text, path)
    }
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("{field}: {msg}"))
}

impl GraphSource {
    /// Loads or generates the graph. `field` names the config entry in errors.
    pub fn build(&self, field: &str) -> Result<Graph, CliError> {
        match (&self.file, self.family) {
            (Some(_), Some(_)) => Err(invalid(field, "give either `file` or `family`, not both")),
            (None, None) => Err(invalid(field, "missing `file` or `family`")),
            (Some(path), None) => Graph::read_json(path).map_err(|e| match e {
                ctqw::CtqwError::Io(m) => CliError::Io(m),
                other => invalid(&format!("{field}.file"), other),
            }),
            (None, Some(family)) => {
                let n = self.n.ok_or_else(|| invalid(field, "missing `n`"))?;
                let g = match family {
                    Family::Star => make_star(n),
                    Family::Wheel => make_wheel(n),
                    Family::Complete => make_complete(n),
                    Family::NearComplete => make_near_complete(n),
                    Family::Path => make_path(n),
                    Family::RandomHub => make_random_with_hubs(
                        n,
                        self.hubs.unwrap_or(1),
                        self.p.ok_or_else(|| invalid(field, "random-hub needs `p`"))?,
                        self.seed.unwrap_or(0),
                    ),
                };
                g.map_err(|e| invalid(field, e))
            }
        }
    }
}

impl HamiltonianConfig {
    pub fn spec(&self, n: usize) -> Result<HamiltonianSpec, CliError> {
        let mut spec = HamiltonianSpec::new(self.generator, self.gamma).map_err(|e| invalid("hamiltonian.gamma", e))?;
        for (k, m) in self.marks.iter().enumerate() {
            if m.vertex >= n {
                return Err(invalid(
                    &format!("hamiltonian.marks[{k}].vertex"),
                    format!("vertex {} out of range for N = {n}", m.vertex),
                ));
            }
            spec = spec.with_mark(m.vertex, Complex64::new(m.lambda[0], m.lambda[1]));
        }
        Ok(spec)
    }
}

impl InitialConfig {
    pub fn state(&self, n: usize) -> Result<StateVector, CliError> {
        match (self.vertex, self.uniform, &self.amplitudes) {
            (Some(v), None, None) => StateVector::basis(n, v).map_err(|e| invalid("initial.vertex", e)),
            (None, Some(true), None) => Ok(StateVector::uniform(n)),
            (None, None, Some(amps)) => {
                if amps.len() != n {
                    return Err(invalid("initial.amplitudes", format!("expected {n} entries, got {}", amps.len())));
                }
                Ok(StateVector::from_amplitudes(amps.iter().map(|a| Complex64::new(a[0], a[1])).collect()))
            }
            _ => Err(invalid("initial", "give exactly one of `vertex`, `uniform: true`, `amplitudes`")),
        }
    }
}

impl ObservableConfig {
    pub fn observable(&self, n: usize, k: usize) -> Result<Observable, CliError> {
        let field = format!("observables[{k}]");
        match self {
            Self::Vertex(v) if *v < n => Ok(Observable::Vertex(*v)),
            Self::Vertex(v) => Err(invalid(&field, format!("vertex {v} out of range for N = {n}"))),
            Self::Set(vs) => VertexSet::new(vs.iter().copied(), n)
                .map(Observable::Set)
                .map_err(|e| invalid(&field, e)),
        }
    }
}

pub fn require<'a, T>(value: &'a Option<T>, field: &str, command: &str) -> Result<&'a T, CliError> {
    value
        .as_ref()
        .ok_or_else(|| CliError::Validation(format!("config: `{field}` is required by {command}")))
}

pub fn vertex_set(members: &[usize], n: usize, field: &str) -> Result<VertexSet, CliError> {
    VertexSet::new(members.iter().copied(), n).map_err(|e| invalid(field, e))
}
