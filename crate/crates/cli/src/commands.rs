use std::path::{Path, PathBuf};

use ctqw::applications::prop_ib::proposition_ib_table;
use ctqw::applications::search::{run_spatial_search_with_steps, SEARCH_GRID_STEPS, SEARCH_TOL};
use ctqw::applications::transport::TRANSPORT_TOL;
use ctqw::applications::*;
use ctqw::engine::{evolve, uniform_grid, Observable};
use ctqw::{Graph, VertexSet};
use serde_json::json;

use crate::config::{require, vertex_set, ExperimentConfig, GraphSource, Mode};
use crate::error::CliError;
use crate::output::{table_csv, trace_csv, write_file, write_report, Report};

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub default_tol: Option<f64>,
}

/// What a command produced. `pass` is `None` for commands without a check.
#[derive(Debug)]
pub struct Outcome {
    pub message: String,
    pub files: Vec<PathBuf>,
    pub pass: Option<bool>,
}

const EVOLVE_STEPS: usize = 100;
const CERTIFY_T_MAX: f64 = 20.0;
const CERTIFY_STEPS: usize = 200;
const ETA_TOL: f64 = 1e-4;
const PROP_IB_N_MAX: usize = 100;

fn graph(cfg: &ExperimentConfig, settings: &Settings, command: &str) -> Result<Graph, CliError> {
    let mut src = require(&cfg.graph, "graph", command)?.clone();
    if settings.seed.is_some() {
        src.seed = settings.seed;
    }
    src.build("graph")
}

fn tolerance(cfg: &ExperimentConfig, settings: &Settings, builtin: f64) -> Result<f64, CliError> {
    let tol = cfg.tol.or(settings.default_tol).unwrap_or(builtin);
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(CliError::Validation(format!("tol: must be a non-negative number, got {tol}")));
    }
    Ok(tol)
}

fn t_max(cfg: &ExperimentConfig, settings: &Settings) -> Option<f64> {
    settings.t_max.or(cfg.time.as_ref().and_then(|t| t.t_max))
}

fn steps(cfg: &ExperimentConfig, settings: &Settings) -> Option<usize> {
    settings.steps.or(cfg.time.as_ref().and_then(|t| t.steps))
}

fn grid(cfg: &ExperimentConfig, settings: &Settings, default_t: Option<f64>, default_steps: usize) -> Result<Vec<f64>, CliError> {
    let t = t_max(cfg, settings)
        .or(default_t)
        .ok_or_else(|| CliError::Validation("config: `time.t_max` (or --t-max) is required".into()))?;
    uniform_grid(t, steps(cfg, settings).unwrap_or(default_steps))
        .map_err(|e| CliError::Validation(format!("time: {e}")))
}

/// Vertex set from the config, falling back to the first fully connected vertex.
fn marked_or_hub(members: &Option<Vec<usize>>, g: &Graph, field: &str) -> Result<VertexSet, CliError> {
    match members {
        Some(m) => vertex_set(m, g.order(), field),
        None => {
            let hub = g
                .hub()
                .ok_or_else(|| CliError::Validation(format!("config: `{field}` not given and the graph has no hub")))?;
            vertex_set(&[hub], g.order(), field)
        }
    }
}

pub fn cmd_evolve(cfg: &ExperimentConfig, settings: &Settings) -> Result<Outcome, CliError> {
    let g = graph(cfg, settings, "evolve")?;
    let n = g.order();
    let spec = require(&cfg.hamiltonian, "hamiltonian", "evolve")?.spec(n)?;
    let psi0 = require(&cfg.initial, "initial", "evolve")?.state(n)?;
    let times = grid(cfg, settings, None, EVOLVE_STEPS)?;
    let observables: Vec<Observable> = if cfg.observables.is_empty() {
        (0..n).map(Observable::Vertex).collect()
    } else {
        cfg.observables
            .iter()
            .enumerate()
            .map(|(k, o)| o.observable(n, k))
            .collect::<Result<_, _>>()?
    };
    let trace = evolve(&spec, &g, &psi0, &times, &observables)?;
    let path = write_file(&settings.out, "trace.csv", &trace_csv(&trace))?;
    Ok(Outcome {
        message: format!("evolve: {} time points, {} observables", trace.len(), observables.len()),
        files: vec![path],
        pass: None,
    })
}

pub fn cmd_search(cfg: &ExperimentConfig, settings: &Settings) -> Result<Outcome, CliError> {
    let g = graph(cfg, settings, "search")?;
    let targets = marked_or_hub(&cfg.targets, &g, "targets")?;
    let tol = tolerance(cfg, settings, SEARCH_TOL)?;
    let r = run_spatial_search_with_steps(&g, &targets, steps(cfg, settings).unwrap_or(SEARCH_GRID_STEPS))?;
    let pass = (r.success_probability_at_t_star - 1.0).abs() <= tol && r.max_closed_form_deviation <= tol;
    let report = Report {
        claim: "uniform start reaches the fully connected targets with certainty at t* = (pi/2) sqrt(N/mu) for gamma = 1/N".into(),
        parameters: json!({
            "n": g.order(),
            "edges": g.edge_count(),
            "targets": r.targets,
            "gamma": r.gamma,
            "t_star": r.t_star,
        }),
        measured: json!({
            "success_probability_at_t_star": r.success_probability_at_t_star,
            "max_closed_form_deviation": r.max_closed_form_deviation,
        }),
        expected: json!(1.0),
        tolerance: tol,
        pass,
    };
    let files = vec![
        write_report(&settings.out, "search_report.json", &report)?,
        write_file(&settings.out, "search_trace.csv", &trace_csv(&r.trace))?,
    ];
    Ok(Outcome {
        message: format!(
            "search: P_W(t* = {:.6}) = {:.12} (expected 1, tol {tol:e})",
            r.t_star, r.success_probability_at_t_star
        ),
        files,
        pass: Some(pass),
    })
}

pub fn cmd_transport(cfg: &ExperimentConfig, settings: &Settings) -> Result<Outcome, CliError> {
    let g = graph(cfg, settings, "transport")?;
    let n = g.order();
    let traps = marked_or_hub(&cfg.traps, &g, "traps")?;
    let kappas = match (&cfg.kappas, cfg.kappa) {
        (Some(_), Some(_)) => return Err(CliError::Validation("config: give either `kappa` or `kappas`".into())),
        (Some(map), None) => map.clone(),
        (None, k) => traps.iter().map(|w| (w, k.unwrap_or(1.0))).collect(),
    };
    let start = match cfg.start_vertex {
        Some(v) => v,
        None => (0..n)
            .rev()
            .find(|&v| !traps.contains(v))
            .ok_or_else(|| CliError::Validation("config: every vertex is a trap".into()))?,
    };
    let tol = tolerance(cfg, settings, ETA_TOL)?;
    let r = run_transport(&g, &traps, &kappas, start, t_max(cfg, settings), TRANSPORT_TOL)?;
    let pass = [r.eta_overlap, r.eta_limit, r.eta_integral]
        .iter()
        .all(|eta| (eta - r.eta_expected).abs() <= tol);
    let report = Report {
        claim: "transport efficiency to fully connected traps is 1/(N - mu) for any start vertex and trapping rates".into(),
        parameters: json!({
            "n": n,
            "edges": g.edge_count(),
            "traps": r.traps,
            "kappa": r.kappa,
            "start_vertex": start,
            "t_max": r.t_max,
        }),
        measured: json!({
            "eta_overlap": r.eta_overlap,
            "eta_limit": r.eta_limit,
            "eta_integral": r.eta_integral,
            "trappable_weight_at_t_max": r.tail,
        }),
        expected: json!(r.eta_expected),
        tolerance: tol,
        pass,
    };
    let files = vec![
        write_report(&settings.out, "transport_report.json", &report)?,
        write_file(&settings.out, "transport_trace.csv", &trace_csv(&r.trace))?,
    ];
    Ok(Outcome {
        message: format!(
            "transport: eta = {:.9} / {:.9} / {:.9} (overlap / limit / integral), expected {:.9}",
            r.eta_overlap, r.eta_limit, r.eta_integral, r.eta_expected
        ),
        files,
        pass: Some(pass),
    })
}

pub fn cmd_certify(cfg: &ExperimentConfig, settings: &Settings, mode: Option<Mode>) -> Result<Outcome, CliError> {
    let g1 = graph(cfg, settings, "certify")?;
    let g2 = require(&cfg.graph2, "graph2", "certify")?.build("graph2")?;
    let mode = mode.or(cfg.mode).unwrap_or(Mode::Laplacian);
    let times = grid(cfg, settings, Some(CERTIFY_T_MAX), CERTIFY_STEPS)?;
    let tol = tolerance(cfg, settings, certify::UNIVERSALITY_TOL)?;
    let r = match mode {
        Mode::Laplacian => certify_laplacian_universality(&g1, &g2, &times)?,
        Mode::Adjacency => certify_adjacency_dependence(&g1, &g2, &times)?,
    };
    let observed_match =
        r.max_amplitude_discrepancy <= tol && r.max_reduced_discrepancy.is_some_and(|d| d <= tol);
    let (claim, expected, pass) = match mode {
        Mode::Laplacian => (
            "Laplacian walks from a fully connected vertex coincide on any two graphs of equal order",
            json!({ "dynamics_match": true }),
            observed_match,
        ),
        Mode::Adjacency => (
            "adjacency walks from a fully connected vertex coincide only when the reduced adjacency operators do",
            json!({ "dynamics_match": r.reduced_operators_equal }),
            observed_match == r.reduced_operators_equal,
        ),
    };
    let report = Report {
        claim: claim.into(),
        parameters: json!({
            "mode": format!("{mode:?}").to_lowercase(),
            "n": r.order,
            "hubs": [r.hubs.0, r.hubs.1],
            "edges": [r.edge_counts.0, r.edge_counts.1],
            "t_max": times.last(),
            "points": times.len(),
        }),
        measured: json!({
            "dynamics_match": observed_match,
            "max_amplitude_discrepancy": r.max_amplitude_discrepancy,
            "max_reduced_discrepancy": r.max_reduced_discrepancy,
            "reduced_dims": [r.reduced_dims.0, r.reduced_dims.1],
            "reduced_operators_equal": r.reduced_operators_equal,
            "reduced_corner": r.reduced_corner.map(|(a, b)| [a, b]),
            "predicted_corner_difference": r.predicted_corner_difference(),
        }),
        expected,
        tolerance: tol,
        pass,
    };
    let files = vec![write_report(&settings.out, "certify_report.json", &report)?];
    Ok(Outcome {
        message: format!(
            "certify ({}): max amplitude discrepancy {:.3e}, walks {}",
            format!("{mode:?}").to_lowercase(),
            r.max_amplitude_discrepancy,
            if observed_match { "match" } else { "differ" }
        ),
        files,
        pass: Some(pass),
    })
}

pub fn cmd_prop_ib(cfg: &ExperimentConfig, settings: &Settings, n_max: Option<usize>) -> Result<Outcome, CliError> {
    let n_max = n_max.or(cfg.n_max).unwrap_or(PROP_IB_N_MAX);
    let table = proposition_ib_table(n_max).map_err(|e| CliError::Validation(format!("n_max: {e}")))?;
    let scan = proposition_ib_scan(n_max)?;
    let csv = table_csv(
        &["n", "f", "g", "n_minus_f", "n_minus_g"],
        table.iter().map(|r| vec![r.n as f64, r.f, r.g, r.n_minus_f, r.n_minus_g]),
    );
    let report = Report {
        claim: "N - f(N) > 0 and N - g(N) > 0 for every N >= 4: the curves never meet h(N) = N".into(),
        parameters: json!({ "n_min": 4, "n_max": n_max }),
        measured: json!({
            "rows": table.len(),
            "min_n_minus_f": scan.min_n_minus_f,
            "min_n_minus_g": scan.min_n_minus_g,
            "n_minus_g_decreasing": scan.n_minus_g_decreasing,
        }),
        expected: json!({ "min_n_minus_f": "> 0", "min_n_minus_g": "> 0" }),
        tolerance: 0.0,
        pass: scan.all_positive,
    };
    let files = vec![
        write_report(&settings.out, "prop_ib_report.json", &report)?,
        write_file(&settings.out, "prop_ib_table.csv", &csv)?,
    ];
    Ok(Outcome {
        message: format!(
            "prop-ib: {} rows, min N-f {:.6e}, min N-g {:.6e}",
            table.len(),
            scan.min_n_minus_f,
            scan.min_n_minus_g
        ),
        files,
        pass: Some(scan.all_positive),
    })
}

pub fn cmd_gen_graph(cfg: &ExperimentConfig, settings: &Settings, flags: &GraphSource, file: &Path) -> Result<Outcome, CliError> {
    let mut src = cfg.graph.clone().unwrap_or_default();
    if flags.family.is_some() {
        src.family = flags.family;
        src.file = None;
    }
    src.n = flags.n.or(src.n);
    src.p = flags.p.or(src.p);
    src.hubs = flags.hubs.or(src.hubs);
    src.seed = settings.seed.or(src.seed);
    let g = src.build("graph")?;
    let path = write_file(&settings.out, &file.to_string_lossy(), &(g.to_json_string() + "\n"))?;
    Ok(Outcome {
        message: format!("gen-graph: N = {}, M = {}", g.order(), g.edge_count()),
        files: vec![path],
        pass: None,
    })
}
