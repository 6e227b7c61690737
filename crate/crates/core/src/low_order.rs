//! First-order positivity- and still-water-preserving building blocks:
//! hydrostatic interface reconstruction, local Lax-Friedrichs flux, and the
//! low-order global fluxes and point residuals.
//!
//! Interface states at a node reconcile the two adjacent cell averages with
//! the min/max topography reconstruction; quarter interfaces at `x_{j+-1/4}`
//! reconcile a node point value with the adjacent cell average the same way.
//! In-cell source contributions use trapezoid-style averages between the two
//! states of the corresponding sub-interval, with the hydrostatic part in
//! the `<h>[[B]]` form that cancels exactly on still water.

use crate::models::Model;
use crate::state::State;

/// Reconstructed states at a cell interface `x_j`.
///
/// `minus` comes from the left cell, `plus` from the right cell; both carry
/// the cell-average velocities on the reconstructed heights. `u_left_avg`
/// and `u_right_avg` are the dry-filtered average velocities of the two
/// cells, and `alpha` bounds every wave speed involved.
#[derive(Debug, Clone, Copy)]
pub struct InterfaceStates {
    pub minus: State,
    pub plus: State,
    pub b_minus: f64,
    pub b_plus: f64,
    pub u_left_avg: f64,
    pub u_right_avg: f64,
    pub alpha: f64,
}

/// Hydrostatic reconstruction at the interface between two cell averages.
pub fn hydrostatic_interface(
    model: &Model,
    left_avg: &State,
    right_avg: &State,
    b_left: f64,
    b_right: f64,
) -> InterfaceStates {
    let b_star = b_left.max(b_right);
    let b_plus = (right_avg.h + b_right).min(b_star);
    let b_minus = (left_avg.h + b_left).min(b_star);
    let h_plus = right_avg.h + b_right - b_plus;
    let h_minus = left_avg.h + b_left - b_minus;

    let (u_right, v_right) = model.velocities(right_avg);
    let (u_left, v_left) = model.velocities(left_avg);
    let plus = State::new(h_plus, h_plus * u_right, h_plus * v_right);
    let minus = State::new(h_minus, h_minus * u_left, h_minus * v_left);

    let alpha = model
        .max_wave_speed(&plus)
        .max(model.max_wave_speed(&minus))
        .max(model.max_wave_speed(left_avg))
        .max(model.max_wave_speed(right_avg));

    InterfaceStates {
        minus,
        plus,
        b_minus,
        b_plus,
        u_left_avg: u_left,
        u_right_avg: u_right,
        alpha,
    }
}

/// Reconstructed states at a quarter interface between a node point value
/// and the neighboring cell average.
#[derive(Debug, Clone, Copy)]
pub struct QuarterInterface {
    /// State on the node side, heights bounded by the point height.
    pub node_side: State,
    /// State on the cell side, heights bounded by the cell average height.
    pub cell_side: State,
    pub b_node_side: f64,
    pub b_cell_side: f64,
    /// Dry-filtered cell-average velocity.
    pub u_cell_avg: f64,
    pub alpha: f64,
}

pub fn quarter_interface(
    model: &Model,
    point: &State,
    b_point: f64,
    avg: &State,
    b_avg: f64,
) -> QuarterInterface {
    let b_star = b_avg.max(b_point);
    let b_cell_side = (avg.h + b_avg).min(b_star);
    let b_node_side = (point.h + b_point).min(b_star);
    let h_cell = avg.h + b_avg - b_cell_side;
    let h_node = point.h + b_point - b_node_side;

    let (u_avg, v_avg) = model.velocities(avg);
    let (u_pt, v_pt) = model.velocities(point);
    let cell_side = State::new(h_cell, h_cell * u_avg, h_cell * v_avg);
    let node_side = State::new(h_node, h_node * u_pt, h_node * v_pt);

    let alpha = model
        .max_wave_speed(&cell_side)
        .max(model.max_wave_speed(&node_side))
        .max(model.max_wave_speed(point))
        .max(model.max_wave_speed(avg));

    QuarterInterface {
        node_side,
        cell_side,
        b_node_side,
        b_cell_side,
        u_cell_avg: u_avg,
        alpha,
    }
}

/// Local Lax-Friedrichs flux
/// `0.5 (f(u_plus) + f(u_minus)) - 0.5 alpha (u_plus - u_minus)`.
pub fn llf_flux(model: &Model, u_plus: &State, u_minus: &State, alpha: f64) -> State {
    0.5 * (model.physical_flux(u_plus) + model.physical_flux(u_minus))
        + (-0.5 * alpha) * (*u_plus - *u_minus)
}

/// Trapezoid average of the Coriolis-weighted momenta between two states at
/// their respective coordinates. Returns `(avg f*hu, avg f*hv)`.
fn coriolis_avg(model: &Model, a: &State, x_a: f64, b: &State, x_b: f64) -> (f64, f64) {
    let fa = model.coriolis(x_a);
    let fb = model.coriolis(x_b);
    (
        0.5 * (fa * a.hu + fb * b.hu),
        0.5 * (fa * a.hv + fb * b.hv),
    )
}

/// In-cell source correction of one half-interval, written so that
/// `correction` is the approximation of `-int S dx` over the sub-interval
/// between `from` (state nearer the interface) and `to`.
///
/// For Saint-Venant this is `g <h> [[B]] + (g n^2 L / 2) <|hu|hu/h^{7/3}>`
/// in the second component with `[[B]] = B_to - B_from`; for the rotating
/// system the friction is replaced by the Coriolis momenta averages.
fn source_correction(
    model: &Model,
    from: &State,
    b_from: f64,
    x_from: f64,
    to: &State,
    b_to: f64,
    x_to: f64,
    interval: f64,
) -> State {
    let g = model.g();
    let h_avg = 0.5 * (from.h + to.h);
    let b_jump = b_to - b_from;
    match model {
        Model::SaintVenant(p) => {
            let fric = 0.5 * (model.manning_density(from) + model.manning_density(to));
            State::new(
                0.0,
                g * h_avg * b_jump + 0.5 * p.g * p.n_manning * p.n_manning * interval * fric,
                0.0,
            )
        }
        Model::Rotating(_) => {
            let (fhu, fhv) = coriolis_avg(model, from, x_from, to, x_to);
            State::new(
                0.0,
                g * h_avg * b_jump - 0.5 * interval * fhv,
                0.5 * interval * fhu,
            )
        }
    }
}

/// Both one-sided low-order global fluxes of cell `K_{j+1/2}`.
///
/// `iface_left`/`iface_right` are the interface reconstructions at nodes `j`
/// and `j+1`, `avg` the cell average, `x_left` the coordinate of node `j`.
/// Returns `(G_tilde_left, G_tilde_right)`.
#[allow(clippy::too_many_arguments)]
pub fn low_order_cell_fluxes(
    model: &Model,
    iface_left: &InterfaceStates,
    iface_right: &InterfaceStates,
    avg: &State,
    b_avg: f64,
    x_left: f64,
    dx: f64,
    r_mid: &State,
) -> (State, State) {
    let x_mid = x_left + 0.5 * dx;
    let llf_l = llf_flux(model, &iface_left.plus, &iface_left.minus, iface_left.alpha);
    let llf_r = llf_flux(
        model,
        &iface_right.plus,
        &iface_right.minus,
        iface_right.alpha,
    );
    // Left flux: minus the correction from the interface-plus state to the
    // cell average over [x_j, x_{j+1/2}].
    let corr_l = source_correction(
        model,
        &iface_left.plus,
        iface_left.b_plus,
        x_left,
        avg,
        b_avg,
        x_mid,
        dx,
    );
    // Right flux: plus the correction from the cell average to the
    // interface-minus state over [x_{j+1/2}, x_{j+1}].
    let corr_r = source_correction(
        model,
        avg,
        b_avg,
        x_mid,
        &iface_right.minus,
        iface_right.b_minus,
        x_left + dx,
        dx,
    );
    (llf_l - corr_l - *r_mid, llf_r + corr_r - *r_mid)
}

/// Low-order point residuals of node `j`, scaled by `2/dx` so that the point
/// update reads `du_j/dt = -(phi_fwd + phi_bwd)`.
///
/// `q_left` is the quarter interface at `x_{j-1/4}` (node on its right),
/// `q_right` the one at `x_{j+1/4}` (node on its left). Returns the pair
/// `(phi_fwd, phi_bwd)` for the residuals arriving from the left and right
/// cells respectively.
pub fn low_order_point_residuals(
    model: &Model,
    point: &State,
    b_point: f64,
    x_node: f64,
    q_left: &QuarterInterface,
    q_right: &QuarterInterface,
    dx: f64,
) -> (State, State) {
    let scale = 2.0 / dx;
    // At x_{j-1/4} the node is the right ("plus") side.
    let llf_l = llf_flux(model, &q_left.node_side, &q_left.cell_side, q_left.alpha);
    let corr_l = source_correction(
        model,
        &q_left.node_side,
        q_left.b_node_side,
        x_node - 0.25 * dx,
        point,
        b_point,
        x_node,
        0.5 * dx,
    );
    let fwd = scale * (model.physical_flux(point) - llf_l + corr_l);

    // At x_{j+1/4} the node is the left ("minus") side.
    let llf_r = llf_flux(model, &q_right.cell_side, &q_right.node_side, q_right.alpha);
    let corr_r = source_correction(
        model,
        point,
        b_point,
        x_node,
        &q_right.node_side,
        q_right.b_node_side,
        x_node + 0.25 * dx,
        0.5 * dx,
    );
    let bwd = scale * (llf_r - model.physical_flux(point) + corr_r);

    (fwd, bwd)
}
