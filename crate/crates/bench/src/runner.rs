//! Drive one experiment to completion and emit its artifacts.

use crate::norms::{rate, runge_errors, state_errors, StateErrors};
use crate::output;
use crate::presets::{Reference, RunPlan};
use anyhow::{bail, Context, Result};
use pampa_swe::mesh::SolutionState;
use pampa_swe::state::State;
use pampa_swe::time_integration::run;
use serde_json::json;
use std::path::{Path, PathBuf};

/// Sample the analytic reference depth onto the plan's mesh: point values
/// at nodes, Simpson cell averages. Bathymetry heights come from the stored
/// DoFs (the midpoint through the quadratic representation).
fn reference_state(plan: &RunPlan, r: &Reference, t: f64) -> Result<SolutionState> {
    let grid = &plan.grid;
    let bp = &plan.state.bathy_points;
    let ba = &plan.state.bathy_averages;
    let n = grid.n_cells();
    let mut points = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let h = r.depth(grid.node_x(j), bp[j], t)?;
        points.push(State::new(h, 0.0, 0.0));
    }
    let mut averages = Vec::with_capacity(n);
    for c in 0..n {
        let b_mid = 1.5 * ba[c] - 0.25 * (bp[c] + bp[c + 1]);
        let h_mid = r.depth(grid.mid_x(c), b_mid, t)?;
        let h = (points[c].h + 4.0 * h_mid + points[c + 1].h) / 6.0;
        averages.push(State::new(h, 0.0, 0.0));
    }
    Ok(SolutionState {
        points,
        averages,
        bathy_points: bp.clone(),
        bathy_averages: ba.clone(),
    })
}

pub struct ExperimentResult {
    pub state: SolutionState,
    pub t_end: f64,
    pub steps: usize,
    pub min_h_over_run: f64,
    pub final_mass: f64,
    pub final_g2_spread: f64,
    pub files: Vec<PathBuf>,
    pub summary: PathBuf,
}

/// Run the plan, writing snapshot CSVs (and SVG when requested), the
/// diagnostics series, and a summary manifest into `dir`.
pub fn run_experiment(plan: &RunPlan, dir: &Path, svg: bool) -> Result<ExperimentResult> {
    let RunPlan {
        name,
        model,
        grid,
        state,
        bc,
        controls,
        snapshots,
        reference,
    } = plan;

    let mut files = Vec::new();
    let mut diag_rows: Vec<(f64, f64, f64, f64)> = Vec::new();
    let mut last_diag = (0.0, 0.0, 0.0, 0.0);
    let result = {
        let mut on_snapshot = |t: f64, s: &SolutionState, d: &pampa_swe::Diagnostics| {
            diag_rows.push((t, d.mass, d.min_h, d.g2_spread));
            last_diag = (t, d.mass, d.min_h, d.g2_spread);
            match output::write_snapshot(
                dir,
                name,
                t,
                s,
                model,
                grid,
                bc,
                controls.quadrature,
                svg,
            ) {
                Ok(fs) => {
                    files.push(fs.points);
                    files.push(fs.averages);
                    if let Some(p) = fs.svg {
                        files.push(p);
                    }
                }
                Err(e) => eprintln!("snapshot at t = {t} failed: {e}"),
            }
        };
        run(
            state.clone(),
            model,
            grid,
            bc,
            controls,
            snapshots,
            &mut on_snapshot,
        )
        .with_context(|| format!("running `{name}`"))?
    };

    files.push(output::write_diagnostics(dir, name, &diag_rows)?);

    // Error report against the analytic reference, when one exists.
    let reference_errors = match reference {
        Some(r) => {
            let refstate = reference_state(plan, r, result.t)?;
            let e = state_errors(&result.state, &refstate, grid, 1)?;
            Some(json!({
                "h_points": { "l1": e.points[0].l1, "l2": e.points[0].l2, "linf": e.points[0].linf },
                "h_averages": { "l1": e.averages[0].l1, "l2": e.averages[0].l2, "linf": e.averages[0].linf },
            }))
        }
        None => None,
    };

    let summary = json!({
        "name": name,
        "grid": { "x_min": grid.x_min(), "x_max": grid.x_max(), "n_cells": grid.n_cells(), "dx": grid.dx() },
        "t_end": result.t,
        "steps": result.steps,
        "stopped_on_steady_tolerance": result.stopped_steady,
        "min_h_over_run": result.min_h_over_run,
        "floored_heights": result.floored_total,
        "final": { "mass": last_diag.1, "min_h": last_diag.2, "g2_spread": last_diag.3 },
        "reference_errors": reference_errors,
        "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    let summary_path = dir.join(format!("{name}_summary.json"));
    std::fs::write(&summary_path, serde_json::to_string_pretty(&summary)?)?;

    Ok(ExperimentResult {
        t_end: result.t,
        steps: result.steps,
        min_h_over_run: result.min_h_over_run,
        final_mass: last_diag.1,
        final_g2_spread: last_diag.3,
        state: result.state,
        files,
        summary: summary_path,
    })
}

pub struct ConvergenceRow {
    pub n_cells: usize,
    pub errors: StateErrors,
    pub rates_points_h: Option<f64>,
    pub rates_avg_h: Option<f64>,
}

/// Run the same plan on a sequence of 2x-refined meshes. With an analytic
/// reference the errors are direct; otherwise consecutive solutions are
/// compared through the Runge restriction.
pub fn convergence_study(
    build: impl Fn(usize) -> Result<RunPlan>,
    meshes: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    if meshes.len() < 2 {
        bail!("need at least two meshes");
    }
    for pair in meshes.windows(2) {
        if pair[1] != 2 * pair[0] {
            bail!(
                "mesh sequence must refine by exactly 2x, got {} -> {}",
                pair[0],
                pair[1]
            );
        }
    }
    let mut plans = Vec::new();
    let mut states = Vec::new();
    for &n in meshes {
        let plan = build(n)?;
        let result = run(
            plan.state.clone(),
            &plan.model,
            &plan.grid,
            &plan.bc,
            &plan.controls,
            &[],
            |_, _, _| {},
        )?;
        states.push(result.state);
        plans.push(plan);
    }

    let has_reference = plans[0].reference.is_some();
    let n_comp = plans[0].model.n_components();
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    let upper = if has_reference {
        meshes.len()
    } else {
        meshes.len() - 1
    };
    for k in 0..upper {
        let errors = if has_reference {
            let plan = &plans[k];
            let r = plan.reference.as_ref().unwrap();
            let refstate = reference_state(plan, r, plan.controls.t_final)?;
            state_errors(&states[k], &refstate, &plan.grid, 1)?
        } else {
            runge_errors(&states[k], &states[k + 1], &plans[k].grid, n_comp)?
        };
        let (rp, ra) = match rows.last() {
            Some(prev) => (
                Some(rate(prev.errors.points[0].l1, errors.points[0].l1)),
                Some(rate(prev.errors.averages[0].l1, errors.averages[0].l1)),
            ),
            None => (None, None),
        };
        rows.push(ConvergenceRow {
            n_cells: meshes[k],
            errors,
            rates_points_h: rp,
            rates_avg_h: ra,
        });
    }
    Ok(rows)
}
