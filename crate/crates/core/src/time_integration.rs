//! Adaptive CFL stepping and the SSP-RK3 driver evolving cell averages and
//! point values together.
//!
//! One Euler stage assembles, from the same time-level data: ghost
//! extensions, positivity-limited midpoint and quarter values, source
//! increments and the global flux field, hydrostatic interface and quarter
//! reconstructions, low- and high-order fluxes and residuals, and the
//! blending coefficients. Averages and points are then updated Jacobi-style.

use crate::error::SolverError;
use crate::global_flux::{
    assemble_global_flux, cell_increments, limited_cell_values, sample_cell_source,
    GlobalFluxField, Quadrature, SourceIncrements,
};
use crate::high_order;
use crate::limiting::{
    combine_cell_theta, combine_node_theta, effective_oe, height_jumps, height_stats,
    steady_indicator, theta_flux, theta_oscillation, theta_residual_side, BlendFactors,
};
use crate::low_order::{
    hydrostatic_interface, llf_flux, low_order_cell_fluxes, low_order_point_residuals,
    quarter_interface, InterfaceStates, QuarterInterface,
};
use crate::mesh::{apply_boundary, BoundaryCondition, Grid, SolutionState};
use crate::models::Model;
use crate::state::State;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeOrder {
    /// High-order fluxes and residuals blended with the first-order scheme
    /// through the positivity and oscillation coefficients.
    HighBlended,
    /// Pure first-order scheme.
    LowOnly,
    /// Pure high-order scheme without any blending safeguard.
    HighUnlimited,
}

#[derive(Debug, Clone, Copy)]
pub struct StepControls {
    pub cfl: f64,
    pub t_final: f64,
    pub max_steps: usize,
    pub quadrature: Quadrature,
    pub order: SchemeOrder,
    /// Stop early once the G^(2) spread stagnates below this value.
    pub steady_g_tol: Option<f64>,
}

impl Default for StepControls {
    fn default() -> Self {
        StepControls {
            cfl: 0.2,
            t_final: 0.0,
            max_steps: 200_000_000,
            quadrature: Quadrature::ScLobattoIII,
            order: SchemeOrder::HighBlended,
            steady_g_tol: None,
        }
    }
}

impl StepControls {
    pub fn validate(&self) -> Result<(), SolverError> {
        let (ok, range, order) = match self.order {
            SchemeOrder::HighBlended => (
                self.cfl > 0.0 && self.cfl <= 0.25,
                "(0, 0.25]",
                "blended scheme",
            ),
            SchemeOrder::LowOnly => (
                self.cfl > 0.0 && self.cfl <= 0.25,
                "(0, 0.25]",
                "low-order scheme",
            ),
            SchemeOrder::HighUnlimited => (
                self.cfl > 0.0 && self.cfl < 1.0,
                "(0, 1)",
                "unlimited high-order scheme",
            ),
        };
        if !ok {
            return Err(SolverError::InvalidCfl {
                cfl: self.cfl,
                range,
                order,
            });
        }
        Ok(())
    }
}

/// Diagnostics of one Euler stage.
#[derive(Debug, Clone)]
pub struct StageOutput {
    pub state: SolutionState,
    pub blend: BlendFactors,
    pub g2_spread: f64,
    /// Minimum updated water height before the round-off floor.
    pub min_h_raw: f64,
    /// Number of heights floored from a tiny negative to zero.
    pub floored: usize,
}

/// CFL time step `cfl * dx / alpha_max` over all degrees of freedom, with a
/// unit-speed fallback when everything is dry or static.
pub fn compute_dt(
    state: &SolutionState,
    model: &Model,
    grid: &Grid,
    controls: &StepControls,
) -> f64 {
    let mut alpha = 0.0_f64;
    for u in state.points.iter().chain(state.averages.iter()) {
        alpha = alpha.max(model.max_wave_speed(u));
    }
    if alpha == 0.0 {
        controls.cfl * grid.dx()
    } else {
        controls.cfl * grid.dx() / alpha
    }
}

#[inline]
fn blend(lo: &State, hi: &State, theta: f64) -> State {
    if theta == 1.0 {
        *hi
    } else if theta == 0.0 {
        *lo
    } else {
        *lo + theta * (*hi - *lo)
    }
}

/// Round-off floor: updated heights in `[-tol, 0)` are clamped to zero,
/// anything more negative aborts the stage.
fn sanitize_h(
    h: &mut f64,
    tol: f64,
    location: &'static str,
    index: usize,
) -> Result<bool, SolverError> {
    if !h.is_finite() {
        return Err(SolverError::NonFinite {
            location,
            index,
            phase: "euler stage",
        });
    }
    if *h < 0.0 {
        if *h >= -tol {
            *h = 0.0;
            return Ok(true);
        }
        return Err(SolverError::NegativeHeight {
            h: *h,
            location,
            index,
            phase: "euler stage",
        });
    }
    Ok(false)
}

/// One forward Euler stage of the full scheme.
pub fn euler_stage(
    state: &SolutionState,
    model: &Model,
    grid: &Grid,
    bc: &BoundaryCondition,
    controls: &StepControls,
    dt: f64,
) -> Result<StageOutput, SolverError> {
    state.check_shape(grid)?;
    let n = grid.n_cells();
    let dx = grid.dx();
    let ext = apply_boundary(state, bc, model)?;

    // Representation values, source increments, and the global flux field.
    let (mids, quarters) = limited_cell_values(&ext);
    let incs: Vec<SourceIncrements> = (0..n)
        .map(|c| {
            let s = sample_cell_source(model, grid, &ext, c, &mids[c], &quarters[c]);
            cell_increments(controls.quadrature, &s, dx)
        })
        .collect();
    let gf = assemble_global_flux(model, &ext, &mids, &incs, bc);

    // Interface and quarter reconstructions.
    let ifaces: Vec<InterfaceStates> = (0..=n as isize)
        .map(|j| {
            hydrostatic_interface(
                model,
                &ext.avg(j - 1),
                &ext.avg(j),
                ext.bathy_avg(j - 1),
                ext.bathy_avg(j),
            )
        })
        .collect();
    let q_left: Vec<QuarterInterface> = (0..=n as isize)
        .map(|j| {
            quarter_interface(
                model,
                &ext.point(j),
                ext.bathy_point(j),
                &ext.avg(j - 1),
                ext.bathy_avg(j - 1),
            )
        })
        .collect();
    let q_right: Vec<QuarterInterface> = (0..=n as isize)
        .map(|j| {
            quarter_interface(
                model,
                &ext.point(j),
                ext.bathy_point(j),
                &ext.avg(j),
                ext.bathy_avg(j),
            )
        })
        .collect();

    // Low-order fluxes per cell and residuals per node.
    let low_fluxes: Vec<(State, State)> = (0..n)
        .map(|c| {
            low_order_cell_fluxes(
                model,
                &ifaces[c],
                &ifaces[c + 1],
                &ext.avg(c as isize),
                ext.bathy_avg(c as isize),
                grid.node_x(c),
                dx,
                &gf.r_mid[c],
            )
        })
        .collect();
    let phi_lo: Vec<(State, State)> = (0..=n)
        .map(|j| {
            low_order_point_residuals(
                model,
                &ext.point(j as isize),
                ext.bathy_point(j as isize),
                grid.node_x(j),
                &q_left[j],
                &q_right[j],
                dx,
            )
        })
        .collect();

    // High-order residuals with a per-node dry fallback to low order.
    let phi_hi: Vec<(State, State)> = (0..=n)
        .map(|j| {
            high_order::high_order_point_residuals(
                model,
                &ext.point(j as isize),
                &gf,
                j as isize,
                dx,
            )
            .unwrap_or(phi_lo[j])
        })
        .collect();

    let blend_factors = compute_blend_factors(
        model, grid, bc, &ext, &gf, &ifaces, &q_left, &q_right, &phi_lo, &phi_hi, controls, dt,
    );

    // Jacobi-style update of averages then points from time-level data.
    let mut new_averages = Vec::with_capacity(n);
    for c in 0..n {
        let (gl, gr) = low_fluxes[c];
        let hi_l = gf.node(c as isize);
        let hi_r = gf.node(c as isize + 1);
        let hat_l = match controls.order {
            SchemeOrder::LowOnly => gl,
            SchemeOrder::HighUnlimited => hi_l,
            SchemeOrder::HighBlended => {
                let th = blend_factors.theta_node[c];
                blend(&gl, &(hi_l), th)
            }
        };
        let hat_r = match controls.order {
            SchemeOrder::LowOnly => gr,
            SchemeOrder::HighUnlimited => hi_r,
            SchemeOrder::HighBlended => {
                let th = blend_factors.theta_node[c + 1];
                blend(&gr, &(hi_r), th)
            }
        };
        new_averages.push(ext.avg(c as isize) + (-dt / dx) * (hat_r - hat_l));
    }

    let point_range = if bc.is_periodic() { n } else { n + 1 };
    let mut new_points = Vec::with_capacity(n + 1);
    for j in 0..point_range {
        let (phi_fwd, phi_bwd) = match controls.order {
            SchemeOrder::LowOnly => phi_lo[j],
            SchemeOrder::HighUnlimited => phi_hi[j],
            SchemeOrder::HighBlended => {
                let th_l = blend_factors.cell(j as isize - 1);
                let th_r = blend_factors.cell(j as isize);
                (
                    blend(&phi_lo[j].0, &phi_hi[j].0, th_l),
                    blend(&phi_lo[j].1, &phi_hi[j].1, th_r),
                )
            }
        };
        new_points.push(ext.point(j as isize) + (-dt) * (phi_fwd + phi_bwd));
    }
    if bc.is_periodic() {
        new_points.push(new_points[0]);
    }

    // Round-off floor and admissibility check.
    let h_scale = state
        .points
        .iter()
        .chain(state.averages.iter())
        .map(|u| u.h)
        .fold(0.0_f64, f64::max);
    let tol = 1e-12 * (1.0 + h_scale);
    let mut min_h_raw = f64::INFINITY;
    let mut floored = 0usize;
    for (c, u) in new_averages.iter_mut().enumerate() {
        if !u.is_finite() {
            return Err(SolverError::NonFinite {
                location: "cell average",
                index: c,
                phase: "euler stage",
            });
        }
        min_h_raw = min_h_raw.min(u.h);
        if sanitize_h(&mut u.h, tol, "cell average", c)? {
            floored += 1;
        }
    }
    for (j, u) in new_points.iter_mut().enumerate() {
        if !u.is_finite() {
            return Err(SolverError::NonFinite {
                location: "point value",
                index: j,
                phase: "euler stage",
            });
        }
        min_h_raw = min_h_raw.min(u.h);
        if sanitize_h(&mut u.h, tol, "point value", j)? {
            floored += 1;
        }
    }

    let mut new_state = SolutionState {
        points: new_points,
        averages: new_averages,
        bathy_points: state.bathy_points.clone(),
        bathy_averages: state.bathy_averages.clone(),
    };
    bc.enforce_dirichlet(&mut new_state);

    Ok(StageOutput {
        state: new_state,
        blend: blend_factors,
        g2_spread: gf.g2_spread(),
        min_h_raw,
        floored,
    })
}

#[allow(clippy::too_many_arguments)]
fn compute_blend_factors(
    model: &Model,
    grid: &Grid,
    bc: &BoundaryCondition,
    ext: &crate::mesh::ExtendedState,
    gf: &GlobalFluxField,
    ifaces: &[InterfaceStates],
    q_left: &[QuarterInterface],
    q_right: &[QuarterInterface],
    phi_lo: &[(State, State)],
    phi_hi: &[(State, State)],
    controls: &StepControls,
    dt: f64,
) -> BlendFactors {
    let n = grid.n_cells();
    let dx = grid.dx();
    if controls.order != SchemeOrder::HighBlended {
        let t = if controls.order == SchemeOrder::HighUnlimited {
            1.0
        } else {
            0.0
        };
        return BlendFactors {
            theta_node: vec![t; n + 1],
            theta_cell: vec![t; n + 2],
            theta_oe: vec![1.0; n],
        };
    }

    // Positivity coefficient of the node fluxes. The first component of the
    // high-minus-low difference is single-valued at the node.
    let mut theta_node = Vec::with_capacity(n + 1);
    for (j, ifc) in ifaces.iter().enumerate() {
        let llf1 = llf_flux(model, &ifc.plus, &ifc.minus, ifc.alpha).h;
        let dg1 = ext.point(j as isize).hu - llf1;
        theta_node.push(theta_flux(
            dg1,
            gf.node(j as isize).h,
            ifc.plus.h,
            ifc.minus.h,
            ifc.u_right_avg,
            ifc.u_left_avg,
            ifc.alpha,
        ));
    }

    // Oscillation damping and steady-state cutoff per interior cell.
    let h_dofs = |c: isize| (ext.point(c).h, ext.avg(c).h, ext.point(c + 1).h);
    let stats = height_stats((0..n as isize).map(h_dofs));
    let jumps: Vec<[f64; 3]> = (0..=n as isize)
        .map(|j| height_jumps(h_dofs(j - 1), h_dofs(j), dx))
        .collect();
    let mut oe_eff = Vec::with_capacity(n);
    for c in 0..n {
        let alpha_cell = model
            .max_wave_speed(&ext.point(c as isize))
            .max(model.max_wave_speed(&ext.avg(c as isize)))
            .max(model.max_wave_speed(&ext.point(c as isize + 1)));
        let oe = theta_oscillation(&jumps[c], &jumps[c + 1], &stats, alpha_cell, dt, dx);
        let steady = steady_indicator(
            gf.node(c as isize).hu,
            gf.mid(c as isize).hu,
            gf.node(c as isize + 1).hu,
            dx,
            grid.length(),
        );
        oe_eff.push(effective_oe(oe, steady));
    }
    let oe_of = |c: isize| -> f64 {
        if (0..n as isize).contains(&c) {
            oe_eff[c as usize]
        } else if bc.is_periodic() {
            oe_eff[c.rem_euclid(n as isize) as usize]
        } else if c < 0 {
            oe_eff[0]
        } else {
            oe_eff[n - 1]
        }
    };

    // Residual constraints of a cell, in half-cell bracket normalization
    // (dx/2) * Phi. The left-going residual (to its left node j) uses the
    // cell-side quarter state at x_{j+1/4}; the right-going one (to node
    // j+1) uses the cell-side state at x_{j+3/4}.
    let half = 0.5 * dx;
    let constraint_left = |j: usize| {
        let dphi = half * (phi_hi[j].1.h - phi_lo[j].1.h);
        theta_residual_side(
            dphi,
            half * phi_hi[j].1.h,
            q_right[j].cell_side.h,
            q_right[j].u_cell_avg,
            -1.0,
            q_right[j].alpha,
        )
    };
    let constraint_right = |j: usize| {
        let dphi = half * (phi_hi[j].0.h - phi_lo[j].0.h);
        theta_residual_side(
            dphi,
            half * phi_hi[j].0.h,
            q_left[j].cell_side.h,
            q_left[j].u_cell_avg,
            1.0,
            q_left[j].alpha,
        )
    };

    let mut theta_cell = vec![1.0; n + 2];
    for c in 0..n {
        theta_cell[c + 1] =
            combine_cell_theta(constraint_left(c), constraint_right(c + 1), oe_eff[c]);
    }
    if bc.is_periodic() {
        theta_cell[0] = theta_cell[n];
        theta_cell[n + 1] = theta_cell[1];
    } else {
        // Ghost cells only feed one residual each; apply that one-sided
        // constraint with the nearest interior OE factor.
        theta_cell[0] = constraint_right(0).min(oe_eff[0]);
        theta_cell[n + 1] = constraint_left(n).min(oe_eff[n - 1]);
    }

    // Node fluxes additionally honor the OE factors of both adjacent cells.
    for (j, th) in theta_node.iter_mut().enumerate() {
        *th = combine_node_theta(*th, oe_of(j as isize - 1), oe_of(j as isize));
    }
    if bc.is_periodic() {
        let seam = theta_node[0].min(theta_node[n]);
        theta_node[0] = seam;
        theta_node[n] = seam;
    }

    BlendFactors {
        theta_node,
        theta_cell,
        theta_oe: oe_eff,
    }
}

/// Three-stage third-order SSP Runge-Kutta step with frozen `dt`:
/// `u1 = E(u0)`, `u2 = 3/4 u0 + 1/4 E(u1)`, `u' = 1/3 u0 + 2/3 E(u2)`.
pub fn ssp_rk3_step(
    state: &SolutionState,
    model: &Model,
    grid: &Grid,
    bc: &BoundaryCondition,
    controls: &StepControls,
    dt: f64,
) -> Result<StepOutput, SolverError> {
    let s1 = euler_stage(state, model, grid, bc, controls, dt)?;
    let s2 = euler_stage(&s1.state, model, grid, bc, controls, dt)?;
    let mut u2 = state.combine(0.75, &s2.state, 0.25);
    bc.enforce_dirichlet(&mut u2);
    let s3 = euler_stage(&u2, model, grid, bc, controls, dt)?;
    let mut out = state.combine(1.0 / 3.0, &s3.state, 2.0 / 3.0);
    bc.enforce_dirichlet(&mut out);

    let min_h_raw = s1.min_h_raw.min(s2.min_h_raw).min(s3.min_h_raw);
    let floored = s1.floored + s2.floored + s3.floored;
    Ok(StepOutput {
        state: out,
        first_stage_blend: s1.blend,
        g2_spread: s3.g2_spread,
        min_h_raw,
        floored,
    })
}

/// Output of one full RK step.
#[derive(Debug, Clone)]
pub struct StepOutput {
    pub state: SolutionState,
    /// Blend factors of the first stage, useful to verify steady states.
    pub first_stage_blend: BlendFactors,
    /// G^(2) spread seen by the last stage assembly.
    pub g2_spread: f64,
    pub min_h_raw: f64,
    pub floored: usize,
}

/// Snapshot diagnostics handed to observers.
#[derive(Debug, Clone, Copy)]
pub struct Diagnostics {
    pub t: f64,
    pub mass: f64,
    pub min_h: f64,
    pub g2_spread: f64,
}

/// Assemble the global flux field of a state and report diagnostics.
pub fn diagnostics(
    state: &SolutionState,
    model: &Model,
    grid: &Grid,
    bc: &BoundaryCondition,
    quadrature: Quadrature,
    t: f64,
) -> Result<Diagnostics, SolverError> {
    let ext = apply_boundary(state, bc, model)?;
    let n = grid.n_cells();
    let (mids, quarters) = limited_cell_values(&ext);
    let incs: Vec<SourceIncrements> = (0..n)
        .map(|c| {
            let s = sample_cell_source(model, grid, &ext, c, &mids[c], &quarters[c]);
            cell_increments(quadrature, &s, grid.dx())
        })
        .collect();
    let gf = assemble_global_flux(model, &ext, &mids, &incs, bc);
    Ok(Diagnostics {
        t,
        mass: state.mass(grid),
        min_h: state.min_h(),
        g2_spread: gf.g2_spread(),
    })
}

/// Result of a full time integration.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub state: SolutionState,
    pub t: f64,
    pub steps: usize,
    /// Minimum raw height seen in any stage over the whole run.
    pub min_h_over_run: f64,
    pub floored_total: usize,
    /// True when the run stopped early on the steady-state tolerance.
    pub stopped_steady: bool,
}

/// March `state` to `t_final`, invoking `observer` at each requested
/// snapshot time (and at `t_final`).
pub fn run(
    mut state: SolutionState,
    model: &Model,
    grid: &Grid,
    bc: &BoundaryCondition,
    controls: &StepControls,
    snapshot_times: &[f64],
    mut observer: impl FnMut(f64, &SolutionState, &Diagnostics),
) -> Result<RunResult, SolverError> {
    controls.validate()?;
    state.check_shape(grid)?;
    bc.enforce_dirichlet(&mut state);

    let mut snaps: Vec<f64> = snapshot_times.to_vec();
    snaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    snaps.retain(|&s| s >= 0.0 && s <= controls.t_final);
    let mut next_snap = 0usize;

    let mut t = 0.0;
    let time_eps = 1e-12 * (1.0 + controls.t_final.abs());
    let mut last_emit: Option<f64> = None;
    if let Some(&s0) = snaps.first() {
        if s0 <= time_eps {
            let d = diagnostics(&state, model, grid, bc, controls.quadrature, t)?;
            observer(t, &state, &d);
            next_snap = 1;
            last_emit = Some(t);
        }
    }

    let mut steps = 0usize;
    let mut min_h_over_run = state.min_h();
    let mut floored_total = 0usize;
    let mut stopped_steady = false;

    while t < controls.t_final - time_eps {
        if steps >= controls.max_steps {
            return Err(SolverError::MaxStepsExceeded {
                max_steps: controls.max_steps,
                t,
            });
        }
        let mut dt = compute_dt(&state, model, grid, controls);
        dt = dt.min(controls.t_final - t);
        if next_snap < snaps.len() {
            dt = dt.min(snaps[next_snap] - t).max(time_eps);
        }
        let out = ssp_rk3_step(&state, model, grid, bc, controls, dt)?;
        state = out.state;
        t += dt;
        steps += 1;
        min_h_over_run = min_h_over_run.min(out.min_h_raw);
        floored_total += out.floored;

        while next_snap < snaps.len() && snaps[next_snap] <= t + time_eps {
            let d = diagnostics(&state, model, grid, bc, controls.quadrature, t)?;
            observer(t, &state, &d);
            last_emit = Some(t);
            next_snap += 1;
        }

        if let Some(tol) = controls.steady_g_tol {
            if steps % 16 == 0 && out.g2_spread <= tol {
                stopped_steady = true;
                break;
            }
        }
    }

    // Make the final state observable even without an explicit request.
    if last_emit.map(|te| (te - t).abs() > time_eps).unwrap_or(true) {
        let d = diagnostics(&state, model, grid, bc, controls.quadrature, t)?;
        observer(t, &state, &d);
    }

    Ok(RunResult {
        state,
        t,
        steps,
        min_h_over_run,
        floored_total,
        stopped_steady,
    })
}
