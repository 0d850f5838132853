//! The curves `f(N)` and `g(N)` that `N` would have to equal for a graph with
//! two or more fully connected vertices (other than `K_N`) to keep the
//! adjacency subspace of a hub two-dimensional. Neither meets `N` for `N ≥ 4`.

use serde::Serialize;

use crate::error::{CtqwError, Result};

/// Smallest order covered by the scan.
pub const MIN_ORDER: usize = 4;

/// `f(N) = (1 + √(16N - 23)) / 2`
pub fn curve_f(n: f64) -> f64 {
    0.5 * (1.0 + (16.0 * n - 23.0).sqrt())
}

/// `g(N) = (1 + √(4N² - 4N - 7)) / 2`
pub fn curve_g(n: f64) -> f64 {
    0.5 * (1.0 + (4.0 * n * n - 4.0 * n - 7.0).sqrt())
}

/// `N - g(N)` without cancellation: `4 / (x + √(x² - 8))` with `x = 2N - 1`.
pub fn gap_g(n: f64) -> f64 {
    let x = 2.0 * n - 1.0;
    4.0 / (x + (x * x - 8.0).sqrt())
}

/// `N - f(N)`
pub fn gap_f(n: f64) -> f64 {
    n - curve_f(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PropIbRow {
    pub n: usize,
    pub f: f64,
    pub g: f64,
    pub n_minus_f: f64,
    pub n_minus_g: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PropIbReport {
    pub n_max: usize,
    pub rows_checked: usize,
    pub min_n_minus_f: f64,
    pub min_n_minus_g: f64,
    pub n_minus_g_decreasing: bool,
    pub all_positive: bool,
}

fn check_range(n_max: usize) -> Result<()> {
    if n_max < MIN_ORDER {
        return Err(CtqwError::InvalidParameter(format!("n_max must be at least {MIN_ORDER}, got {n_max}")));
    }
    Ok(())
}

fn row(n: usize) -> PropIbRow {
    let x = n as f64;
    PropIbRow {
        n,
        f: curve_f(x),
        g: curve_g(x),
        n_minus_f: gap_f(x),
        n_minus_g: gap_g(x),
    }
}

/// One row per `N` in `[4, n_max]`.
pub fn proposition_ib_table(n_max: usize) -> Result<Vec<PropIbRow>> {
    check_range(n_max)?;
    Ok((MIN_ORDER..=n_max).map(row).collect())
}

/// Scans `[4, n_max]` without storing rows.
pub fn proposition_ib_scan(n_max: usize) -> Result<PropIbReport> {
    check_range(n_max)?;
    let mut min_f = f64::INFINITY;
    let mut min_g = f64::INFINITY;
    let mut decreasing = true;
    let mut prev_g = f64::INFINITY;
    for n in MIN_ORDER..=n_max {
        let r = row(n);
        min_f = min_f.min(r.n_minus_f);
        min_g = min_g.min(r.n_minus_g);
        decreasing &= r.n_minus_g < prev_g;
        prev_g = r.n_minus_g;
    }
    Ok(PropIbReport {
        n_max,
        rows_checked: n_max - MIN_ORDER + 1,
        min_n_minus_f: min_f,
        min_n_minus_g: min_g,
        n_minus_g_decreasing: decreasing,
        all_positive: min_f > 0.0 && min_g > 0.0,
    })
}
