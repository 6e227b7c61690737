//! High-order point-value residuals: upwinding sign matrices applied to
//! one-sided second-order differences of the global flux.

use crate::error::ModelError;
use crate::global_flux::GlobalFluxField;
use crate::models::{Eigen, Model};
use crate::state::State;

/// Upwinding projectors `Jtilde^± = R diag(lambda_i^± / lambda_i) R^{-1}`
/// at one node state, stored as 3x3 row-major matrices. For the two-equation
/// system the third row and column act on the inert `hv` slot and are chosen
/// so that `plus + minus = I` still holds.
#[derive(Debug, Clone, Copy)]
pub struct SignMatrices {
    pub plus: [[f64; 3]; 3],
    pub minus: [[f64; 3]; 3],
}

impl SignMatrices {
    #[inline]
    pub fn apply_plus(&self, v: &State) -> State {
        mat_apply(&self.plus, v)
    }

    #[inline]
    pub fn apply_minus(&self, v: &State) -> State {
        mat_apply(&self.minus, v)
    }
}

#[inline]
fn mat_apply(m: &[[f64; 3]; 3], v: &State) -> State {
    State::new(
        m[0][0] * v.h + m[0][1] * v.hu + m[0][2] * v.hv,
        m[1][0] * v.h + m[1][1] * v.hu + m[1][2] * v.hv,
        m[2][0] * v.h + m[2][1] * v.hu + m[2][2] * v.hv,
    )
}

/// Regularized ratio `lambda^+ / lambda`: 1 on right-going modes, 0 on
/// left-going ones, 1/2 within `sonic_tol` of a sonic point (the symmetric
/// completion of the singular quotient).
#[inline]
fn plus_ratio(lambda: f64, sonic_tol: f64) -> f64 {
    if lambda > sonic_tol {
        1.0
    } else if lambda < -sonic_tol {
        0.0
    } else {
        0.5
    }
}

/// Build the sign matrices at a node state. Dry nodes report an error and
/// the caller falls back to the low-order residuals.
pub fn sign_matrices(model: &Model, u: &State) -> Result<SignMatrices, ModelError> {
    let eigen = model.eigenstructure(u)?;
    let mut plus = [[0.0; 3]; 3];
    let mut minus = [[0.0; 3]; 3];
    match eigen {
        Eigen::Two { lambda, r, rinv } => {
            let speed_scale = lambda[0].abs().max(lambda[1].abs());
            let tol = 1e-8 * speed_scale.max(1.0);
            for (i, row_p) in plus.iter_mut().enumerate().take(2) {
                for (j, entry) in row_p.iter_mut().enumerate().take(2) {
                    let mut acc = 0.0;
                    for (k, &lam) in lambda.iter().enumerate() {
                        acc += r[i][k] * plus_ratio(lam, tol) * rinv[k][j];
                    }
                    *entry = acc;
                }
            }
            for i in 0..2 {
                for j in 0..2 {
                    let id = if i == j { 1.0 } else { 0.0 };
                    minus[i][j] = id - plus[i][j];
                }
            }
            plus[2][2] = 0.5;
            minus[2][2] = 0.5;
        }
        Eigen::Three { lambda, r, rinv } => {
            let speed_scale = lambda[0].abs().max(lambda[2].abs());
            let tol = 1e-8 * speed_scale.max(1.0);
            for (i, row_p) in plus.iter_mut().enumerate() {
                for (j, entry) in row_p.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (k, &lam) in lambda.iter().enumerate() {
                        acc += r[i][k] * plus_ratio(lam, tol) * rinv[k][j];
                    }
                    *entry = acc;
                }
            }
            for i in 0..3 {
                for j in 0..3 {
                    let id = if i == j { 1.0 } else { 0.0 };
                    minus[i][j] = id - plus[i][j];
                }
            }
        }
    }
    Ok(SignMatrices { plus, minus })
}

/// One-sided second-order differences of the global flux at node `j`:
/// `d+ = (G_{j-1} - 4 G_{j-1/2} + 3 G_j) / dx`,
/// `d- = (-3 G_j + 4 G_{j+1/2} - G_{j+1}) / dx`.
pub fn biased_derivatives(gf: &GlobalFluxField, j: isize, dx: f64) -> (State, State) {
    let inv = 1.0 / dx;
    let d_plus = inv * (gf.node(j - 1) + (-4.0) * gf.mid(j - 1) + 3.0 * gf.node(j));
    let d_minus = inv * ((-3.0) * gf.node(j) + 4.0 * gf.mid(j) + (-1.0) * gf.node(j + 1));
    (d_plus, d_minus)
}

/// Upwinded high-order residual pair at node `j`:
/// `phi_fwd = Jtilde^+ d+`, `phi_bwd = Jtilde^- d-`.
pub fn high_order_point_residuals(
    model: &Model,
    u: &State,
    gf: &GlobalFluxField,
    j: isize,
    dx: f64,
) -> Result<(State, State), ModelError> {
    let signs = sign_matrices(model, u)?;
    let (d_plus, d_minus) = biased_derivatives(gf, j, dx);
    Ok((signs.apply_plus(&d_plus), signs.apply_minus(&d_minus)))
}

/// High-order node flux: the single-valued global flux itself.
#[inline]
pub fn high_order_node_flux(gf: &GlobalFluxField, j: isize) -> State {
    gf.node(j)
}
