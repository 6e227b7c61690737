//! Discrete error norms and Runge-style convergence studies.

use anyhow::{bail, Result};
use pampa_swe::mesh::{Grid, SolutionState};

#[derive(Debug, Clone, Copy, Default)]
pub struct FieldNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Norms of a node-value error sequence: `L1 = dx * sum' |e|` with
/// trapezoid-weighted ends, `L2` analogous, `Linf = max`.
pub fn point_norms(errors: impl Iterator<Item = f64>, dx: f64) -> FieldNorms {
    let vals: Vec<f64> = errors.collect();
    let n = vals.len();
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    let mut linf = 0.0_f64;
    for (j, e) in vals.iter().enumerate() {
        let w = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
        l1 += w * e.abs() * dx;
        l2 += w * e * e * dx;
        linf = linf.max(e.abs());
    }
    FieldNorms {
        l1,
        l2: l2.sqrt(),
        linf,
    }
}

/// Norms of a cell-average error sequence: plain sums weighted by `dx`.
pub fn average_norms(errors: impl Iterator<Item = f64>, dx: f64) -> FieldNorms {
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    let mut linf = 0.0_f64;
    for e in errors {
        l1 += e.abs() * dx;
        l2 += e * e * dx;
        linf = linf.max(e.abs());
    }
    FieldNorms {
        l1,
        l2: l2.sqrt(),
        linf,
    }
}

/// Per-field error norms between two states on the same grid.
pub struct StateErrors {
    /// Indexed by component (0 = h, 1 = hu, 2 = hv).
    pub points: Vec<FieldNorms>,
    pub averages: Vec<FieldNorms>,
}

pub fn state_errors(
    a: &SolutionState,
    b: &SolutionState,
    grid: &Grid,
    n_components: usize,
) -> Result<StateErrors> {
    if a.points.len() != b.points.len() || a.averages.len() != b.averages.len() {
        bail!("state layouts differ");
    }
    let dx = grid.dx();
    let mut points = Vec::new();
    let mut averages = Vec::new();
    for comp in 0..n_components {
        points.push(point_norms(
            a.points
                .iter()
                .zip(&b.points)
                .map(move |(x, y)| x.comp(comp) - y.comp(comp)),
            dx,
        ));
        averages.push(average_norms(
            a.averages
                .iter()
                .zip(&b.averages)
                .map(move |(x, y)| x.comp(comp) - y.comp(comp)),
            dx,
        ));
    }
    Ok(StateErrors { points, averages })
}

/// Runge difference between a coarse solution and one on twice the cells:
/// coarse nodes against coincident fine nodes, coarse averages against the
/// exact aggregation (mean) of the two nested fine averages.
pub fn runge_errors(
    coarse: &SolutionState,
    fine: &SolutionState,
    coarse_grid: &Grid,
    n_components: usize,
) -> Result<StateErrors> {
    let n = coarse_grid.n_cells();
    if fine.averages.len() != 2 * n {
        bail!(
            "meshes not nested: coarse has {} cells, fine {}",
            n,
            fine.averages.len()
        );
    }
    let dx = coarse_grid.dx();
    let mut points = Vec::new();
    let mut averages = Vec::new();
    for comp in 0..n_components {
        points.push(point_norms(
            (0..=n).map(|j| coarse.points[j].comp(comp) - fine.points[2 * j].comp(comp)),
            dx,
        ));
        averages.push(average_norms(
            (0..n).map(|c| {
                let agg = 0.5
                    * (fine.averages[2 * c].comp(comp) + fine.averages[2 * c + 1].comp(comp));
                coarse.averages[c].comp(comp) - agg
            }),
            dx,
        ));
    }
    Ok(StateErrors { points, averages })
}

/// `log2(e_coarse / e_fine)` convergence rate.
pub fn rate(e_coarse: f64, e_fine: f64) -> f64 {
    (e_coarse / e_fine).log2()
}
