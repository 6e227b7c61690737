//! Convex blending machinery: positivity coefficients for fluxes and
//! residuals, oscillation-elimination damping, the steady-state cutoff, and
//! the dry-velocity filter.


/// Height below which velocities are hard-zeroed.
pub const DRY_H_FLOOR: f64 = 1e-14;
/// Height below which the filtered division kicks in.
pub const DRY_H0: f64 = 1e-4;
/// Regularization constant of the filtered division.
pub const DRY_EPS: f64 = 5e-9;

/// Cutoff threshold on the steady-state indicator: cells with
/// `H(phi) <= 1e-3` count as near a local steady state.
pub const STEADY_H_CUTOFF: f64 = 1e-3;

/// Velocity from `(h, hu)` with the three-branch near-dry filter:
/// zero for `h <= 1e-14`, plain division above `h0 = 1e-4`, and the smooth
/// filtered division `hu * h / (h^2 + f(h) eps)` in between, where
/// `f(h) = 2 (h/h0)^3 - 3 (h/h0)^2 + 1`.
#[inline]
pub fn dry_velocity(h: f64, hu: f64) -> f64 {
    if h <= DRY_H_FLOOR {
        0.0
    } else if h > DRY_H0 {
        hu / h
    } else {
        let s = h / DRY_H0;
        let filter = 2.0 * s * s * s - 3.0 * s * s + 1.0;
        hu * h / (h * h + filter * DRY_EPS)
    }
}

/// Blending coefficients of one Euler stage: `theta_node[j]` blends the
/// fluxes at node `j`, `theta_cell[c]` blends both residuals of cell `c`
/// (ghost cells included at the ends: slot `c + 1`), `theta_oe[c]` is the
/// effective oscillation-elimination factor of interior cell `c`.
#[derive(Debug, Clone)]
pub struct BlendFactors {
    pub theta_node: Vec<f64>,
    pub theta_cell: Vec<f64>,
    pub theta_oe: Vec<f64>,
}

impl BlendFactors {
    /// Residual blending coefficient of cell `c = -1..=n_cells`.
    #[inline]
    pub fn cell(&self, c: isize) -> f64 {
        self.theta_cell[(c + 1) as usize]
    }

    pub fn all_unity(&self) -> bool {
        self.theta_node.iter().all(|&t| t == 1.0)
            && self.theta_cell.iter().all(|&t| t == 1.0)
    }
}

/// Guard scale under which a high-low flux difference counts as zero and no
/// positivity constraint is active.
#[inline]
fn delta_guard(scale: f64) -> f64 {
    1e-14 * (1.0 + scale.abs())
}

/// Positivity blending coefficient for the fluxes at one node.
///
/// `dg1` is the first component of the high-minus-low flux difference
/// (single-valued at the node), `g1_scale` the magnitude of the high-order
/// flux used in the zero guard. Water drains from the right cell through
/// its `h^+` reconstruction when the difference is positive and from the
/// left cell through `h^-` when negative; taking the minimum of both
/// bounds against `|dg1|` also damps the inactive direction, which keeps
/// fragile near-dry states close to the first-order scheme.
pub fn theta_flux(
    dg1: f64,
    g1_scale: f64,
    h_plus: f64,
    h_minus: f64,
    u_right_avg: f64,
    u_left_avg: f64,
    alpha: f64,
) -> f64 {
    let d = dg1.abs();
    if d <= delta_guard(g1_scale) {
        return 1.0;
    }
    let num_right = 0.5 * h_plus * (alpha - u_right_avg);
    let num_left = 0.5 * h_minus * (alpha + u_left_avg);
    (num_right.min(num_left) / d).clamp(0.0, 1.0)
}

/// Positivity constraint for one residual of a cell.
///
/// `dphi_half` is the half-cell bracket difference `(dx/2)(Phi_hi - Phi_lo)`
/// of the first component; a positive value drains the node, and the
/// magnitude is bounded in both directions so that large high-order
/// residual deviations near fronts stay suppressed. `h_quarter` is the
/// cell-side quarter reconstruction and `u_avg` the owning cell's average
/// velocity, with `sign = +1` for the right-going residual and `-1` for
/// the left-going one.
pub fn theta_residual_side(
    dphi_half: f64,
    phi_scale: f64,
    h_quarter: f64,
    u_avg: f64,
    sign: f64,
    alpha: f64,
) -> f64 {
    let d = dphi_half.abs();
    if d <= delta_guard(phi_scale) {
        return 1.0;
    }
    let num = 0.5 * h_quarter * (alpha + sign * u_avg);
    (num / d).clamp(0.0, 1.0)
}

/// Jump magnitudes of the piecewise-quadratic water height and its first two
/// derivatives at one node, given the height DoFs of the two adjacent cells.
/// The zeroth jump is identically zero because the representation is
/// continuous; it is computed anyway to mirror the damping formula.
pub fn height_jumps(
    left_cell: (f64, f64, f64),
    right_cell: (f64, f64, f64),
    dx: f64,
) -> [f64; 3] {
    let (ll, la, lr) = left_cell;
    let (rl, ra, rr) = right_cell;
    // Values at the shared node from both sides.
    let jump0 = rl - lr;
    // d/dx at xi=1 from the left cell, xi=0 from the right cell.
    let dleft = (2.0 * ll - 6.0 * la + 4.0 * lr) / dx;
    let dright = (-4.0 * rl + 6.0 * ra - 2.0 * rr) / dx;
    let jump1 = dright - dleft;
    // Second derivative is constant per cell.
    let d2left = (6.0 * ll - 12.0 * la + 6.0 * lr) / (dx * dx);
    let d2right = (6.0 * rl - 12.0 * ra + 6.0 * rr) / (dx * dx);
    let jump2 = d2right - d2left;
    [jump0.abs(), jump1.abs(), jump2.abs()]
}

/// Domain statistics entering the oscillation damping: the global average of
/// the height representation and the sup-norm of its deviation.
#[derive(Debug, Clone, Copy)]
pub struct HeightStats {
    pub mean: f64,
    pub dev_inf: f64,
}

/// Compute [`HeightStats`] from cell height DoFs `(left, avg, right)`.
/// The sup over each cell's quadratic is evaluated exactly (ends plus the
/// interior vertex when it lies inside the cell).
pub fn height_stats(cells: impl Iterator<Item = (f64, f64, f64)> + Clone) -> HeightStats {
    let mut sum = 0.0;
    let mut count = 0usize;
    for (_, avg, _) in cells.clone() {
        sum += avg;
        count += 1;
    }
    let mean = if count > 0 { sum / count as f64 } else { 0.0 };
    let mut dev = 0.0_f64;
    for (l, a, r) in cells {
        // h(xi) = l + b xi + c xi^2.
        let b = -4.0 * l + 6.0 * a - 2.0 * r;
        let c = 3.0 * l - 6.0 * a + 3.0 * r;
        dev = dev.max((l - mean).abs()).max((l + b + c - mean).abs());
        if c != 0.0 {
            let xi = -b / (2.0 * c);
            if xi > 0.0 && xi < 1.0 {
                dev = dev.max((l + b * xi + c * xi * xi - mean).abs());
            }
        }
    }
    HeightStats {
        mean,
        dev_inf: dev,
    }
}

/// Oscillation-elimination factor of one cell:
/// `exp(-alpha dt sigma / dx)` with `sigma = sum_m dx^m (|jump at left node|
/// + |jump at right node|) / (2 ||h - <h>||_inf)` over derivative orders
/// `m = 0, 1, 2`. A globally constant height gives `sigma = 0`.
pub fn theta_oscillation(
    jumps_left: &[f64; 3],
    jumps_right: &[f64; 3],
    stats: &HeightStats,
    alpha_cell: f64,
    dt: f64,
    dx: f64,
) -> f64 {
    if stats.dev_inf <= 1e-14 * (1.0 + stats.mean.abs()) {
        return 1.0;
    }
    let mut sigma = 0.0;
    let mut scale = 1.0;
    for m in 0..3 {
        sigma += scale * (jumps_left[m] + jumps_right[m]) / (2.0 * stats.dev_inf);
        scale *= dx;
    }
    (-(alpha_cell * dt * sigma) / dx).exp()
}

/// Steady-state indicator `H(phi) = (C phi)^kappa / (1 + (C phi)^kappa)`
/// with `C = 10`, `kappa = 20`, and
/// `phi = (G2_right - G2_left) / dx * |Omega| / max |G2|` over the cell's
/// three second-component global flux values.
pub fn steady_indicator(
    g2_left: f64,
    g2_mid: f64,
    g2_right: f64,
    dx: f64,
    domain_length: f64,
) -> f64 {
    let max_mag = g2_left.abs().max(g2_mid.abs()).max(g2_right.abs());
    if max_mag < 1e-14 {
        return 0.0;
    }
    let phi = ((g2_right - g2_left) / dx * domain_length / max_mag).abs();
    let c_phi = 10.0 * phi;
    if c_phi <= 0.0 {
        return 0.0;
    }
    // (C phi)^20 overflows quickly; evaluate through logarithms.
    let log_t = 20.0 * c_phi.ln();
    if log_t > 700.0 {
        1.0
    } else {
        let t = log_t.exp();
        t / (1.0 + t)
    }
}

/// Effective oscillation factor after the steady-state cutoff: damping is
/// only active away from local equilibria.
#[inline]
pub fn effective_oe(theta_oe: f64, steady_h: f64) -> f64 {
    if steady_h <= STEADY_H_CUTOFF {
        1.0
    } else {
        theta_oe
    }
}

/// Final flux coefficient of a node: the positivity bound combined with the
/// effective oscillation factors of both adjacent cells.
#[inline]
pub fn combine_node_theta(pp: f64, oe_left: f64, oe_right: f64) -> f64 {
    pp.min(oe_left).min(oe_right)
}

/// Final residual coefficient of a cell: both one-sided positivity bounds
/// combined with the cell's effective oscillation factor.
#[inline]
pub fn combine_cell_theta(pp_left: f64, pp_right: f64, oe_eff: f64) -> f64 {
    pp_left.min(pp_right).min(oe_eff)
}
