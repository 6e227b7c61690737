//! Source-primitive quadrature and assembly of the global flux
//! `G = f(u) - R`, `R(x) = int S dx` accumulated from the left domain end.
//!
//! Two quadratures integrate the source over each cell and half cell:
//! the LobattoIIIA collocation weights (half interval exact for quadratics)
//! and the sub-cell LobattoIII rule (half and full intervals both exact for
//! cubics). Only differences of `R` ever enter the scheme, so the arbitrary
//! starting offset `R_0 = 0` cancels.

use crate::mesh::{BoundaryCondition, ExtendedState, Grid};
use crate::models::Model;
use crate::reconstruction::{self, CellRepresentation};
use crate::state::State;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    /// Sub-cell three-point Gauss-Lobatto on both the half and full interval.
    ScLobattoIII,
    /// LobattoIIIA collocation weights.
    LobattoIIIA,
}

/// Per-cell source integrals: `d_half = R_{j+1/2} - R_j`,
/// `d_full = R_{j+1} - R_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceIncrements {
    pub d_half: State,
    pub d_full: State,
}

/// Source evaluations of one cell at the collocation points
/// `x_j, x_{j+1/4}, x_{j+1/2}, x_{j+1}`.
#[derive(Debug, Clone, Copy)]
pub struct CellSourceSamples {
    pub at_left: State,
    pub at_quarter: State,
    pub at_mid: State,
    pub at_right: State,
}

/// Evaluate `S` at the collocation points of cell `c` from ghost-extended
/// data. `mid` and `quarter` are the positivity-limited representation
/// values; the bathymetry slope is the exact derivative of the quadratic
/// bathymetry representation.
pub fn sample_cell_source(
    model: &Model,
    grid: &Grid,
    ext: &ExtendedState,
    c: usize,
    mid: &State,
    quarter: &State,
) -> CellSourceSamples {
    let ci = c as isize;
    let dx = grid.dx();
    let x_left = grid.node_x(c);
    let (bl, ba, br) = (
        ext.bathy_point(ci),
        ext.bathy_avg(ci),
        ext.bathy_point(ci + 1),
    );
    let slope = |xi: f64| reconstruction::deriv_scalar(bl, ba, br, xi, dx);
    CellSourceSamples {
        at_left: model.pointwise_source(&ext.point(ci), x_left, slope(0.0)),
        at_quarter: model.pointwise_source(quarter, x_left + 0.25 * dx, slope(0.25)),
        at_mid: model.pointwise_source(mid, x_left + 0.5 * dx, slope(0.5)),
        at_right: model.pointwise_source(&ext.point(ci + 1), x_left + dx, slope(1.0)),
    }
}

/// LobattoIIIA increments:
/// `d_half = dx (5/24 S_j + 1/3 S_mid - 1/24 S_{j+1})`,
/// `d_full = dx (1/6 S_j + 2/3 S_mid + 1/6 S_{j+1})`.
pub fn increments_lobatto_iiia(s: &CellSourceSamples, dx: f64) -> SourceIncrements {
    let d_half = dx * ((5.0 / 24.0) * s.at_left + (1.0 / 3.0) * s.at_mid + (-1.0 / 24.0) * s.at_right);
    let d_full = dx * ((1.0 / 6.0) * s.at_left + (2.0 / 3.0) * s.at_mid + (1.0 / 6.0) * s.at_right);
    SourceIncrements { d_half, d_full }
}

/// Sub-cell LobattoIII increments:
/// `d_half = dx (1/12 S_j + 1/3 S_{j+1/4} + 1/12 S_mid)`,
/// `d_full = dx (1/6 S_j + 2/3 S_mid + 1/6 S_{j+1})`.
pub fn increments_sc_lobatto_iii(s: &CellSourceSamples, dx: f64) -> SourceIncrements {
    let d_half =
        dx * ((1.0 / 12.0) * s.at_left + (1.0 / 3.0) * s.at_quarter + (1.0 / 12.0) * s.at_mid);
    let d_full = dx * ((1.0 / 6.0) * s.at_left + (2.0 / 3.0) * s.at_mid + (1.0 / 6.0) * s.at_right);
    SourceIncrements { d_half, d_full }
}

pub fn cell_increments(quad: Quadrature, s: &CellSourceSamples, dx: f64) -> SourceIncrements {
    match quad {
        Quadrature::ScLobattoIII => increments_sc_lobatto_iii(s, dx),
        Quadrature::LobattoIIIA => increments_lobatto_iiia(s, dx),
    }
}

/// Global flux values at nodes and midpoints, with one ghost slot per side
/// for the biased derivative stencils.
#[derive(Debug, Clone)]
pub struct GlobalFluxField {
    n_cells: usize,
    /// Nodes `-1..=n+1`, slot `j + 1`.
    g_nodes: Vec<State>,
    /// Midpoints of cells `-1..=n`, slot `c + 1`.
    g_mid: Vec<State>,
    /// Source primitive at interior nodes `0..=n` (prefix sums, `R_0 = 0`).
    pub r_nodes: Vec<State>,
    /// Source primitive at interior midpoints.
    pub r_mid: Vec<State>,
}

impl GlobalFluxField {
    #[inline]
    pub fn node(&self, j: isize) -> State {
        self.g_nodes[(j + 1) as usize]
    }

    #[inline]
    pub fn mid(&self, c: isize) -> State {
        self.g_mid[(c + 1) as usize]
    }

    /// Max minus min of the second component over all interior nodes and
    /// midpoints; the discrete steadiness measure reported by diagnostics.
    pub fn g2_spread(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..=self.n_cells {
            let v = self.g_nodes[j + 1].hu;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        for c in 0..self.n_cells {
            let v = self.g_mid[c + 1].hu;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        hi - lo
    }
}

/// Assemble the global flux field from per-cell increments and the limited
/// midpoint values.
///
/// `R` is accumulated left to right with `R_0 = 0`. Ghost values follow the
/// boundary type: periodic ends wrap with the total-domain `R` increment so
/// that seam differences stay offset-free; otherwise the ghost slots copy
/// the nearest interior value, which zeroes the one-sided derivative
/// reaching out of the domain.
pub fn assemble_global_flux(
    model: &Model,
    ext: &ExtendedState,
    limited_mids: &[State],
    increments: &[SourceIncrements],
    bc: &BoundaryCondition,
) -> GlobalFluxField {
    let n = ext.n_cells();
    assert_eq!(increments.len(), n);
    assert_eq!(limited_mids.len(), n);

    let mut r_nodes = Vec::with_capacity(n + 1);
    let mut r_mid = Vec::with_capacity(n);
    let mut acc = State::ZERO;
    r_nodes.push(acc);
    for inc in increments {
        r_mid.push(acc + inc.d_half);
        acc += inc.d_full;
        r_nodes.push(acc);
    }
    let r_total = acc;

    let mut g_nodes = vec![State::ZERO; n + 3];
    let mut g_mid = vec![State::ZERO; n + 2];
    for j in 0..=n {
        g_nodes[j + 1] = model.physical_flux(&ext.point(j as isize)) - r_nodes[j];
    }
    for c in 0..n {
        g_mid[c + 1] = model.physical_flux(&limited_mids[c]) - r_mid[c];
    }

    match bc {
        BoundaryCondition::Periodic => {
            g_nodes[0] = g_nodes[n] + r_total;
            g_mid[0] = g_mid[n] + r_total;
            g_nodes[n + 2] = g_nodes[2] - r_total;
            g_mid[n + 1] = g_mid[1] - r_total;
        }
        BoundaryCondition::Ends { .. } => {
            g_nodes[0] = g_nodes[1];
            g_mid[0] = g_nodes[1];
            g_mid[n + 1] = g_nodes[n + 1];
            g_nodes[n + 2] = g_nodes[n + 1];
        }
    }

    GlobalFluxField {
        n_cells: n,
        g_nodes,
        g_mid,
        r_nodes,
        r_mid,
    }
}

/// Limited midpoint and quarter values of every interior cell.
pub fn limited_cell_values(ext: &ExtendedState) -> (Vec<State>, Vec<State>) {
    let n = ext.n_cells();
    let mut mids = Vec::with_capacity(n);
    let mut quarters = Vec::with_capacity(n);
    for c in 0..n as isize {
        let cell = CellRepresentation {
            left: ext.point(c),
            avg: ext.avg(c),
            right: ext.point(c + 1),
        };
        let (mid, _) = reconstruction::pp_scale_midpoint(&cell);
        mids.push(mid);
        quarters.push(reconstruction::quarter_point(&cell));
    }
    (mids, quarters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{apply_boundary, project_initial_data, BoundaryCondition};
    use crate::models::SaintVenantParams;

    fn unit_samples(f: impl Fn(f64) -> f64) -> CellSourceSamples {
        // Scalar source placed in the second component, sampled on [0, 1].
        let s = |x: f64| State::new(0.0, f(x), 0.0);
        CellSourceSamples {
            at_left: s(0.0),
            at_quarter: s(0.25),
            at_mid: s(0.5),
            at_right: s(1.0),
        }
    }

    #[test]
    fn weights_sum_to_interval_lengths() {
        let s = unit_samples(|_| 1.0);
        for quad in [Quadrature::ScLobattoIII, Quadrature::LobattoIIIA] {
            let inc = cell_increments(quad, &s, 1.0);
            assert!((inc.d_half.hu - 0.5).abs() < 1e-15);
            assert!((inc.d_full.hu - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_source_zero_increments() {
        let s = unit_samples(|_| 0.0);
        let inc = cell_increments(Quadrature::ScLobattoIII, &s, 0.3);
        assert_eq!(inc.d_half, State::ZERO);
        assert_eq!(inc.d_full, State::ZERO);
    }

    #[test]
    fn quadrature_exactness_degrees() {
        // Orientation: brute-force integrals of x^k on [0, 1] and [0, 1/2].
        let brute = |k: u32, upto: f64| upto.powi(k as i32 + 1) / (k as f64 + 1.0);

        // Quadratic: both rules exact on half and full interval.
        let s = unit_samples(|x| x * x);
        for quad in [Quadrature::ScLobattoIII, Quadrature::LobattoIIIA] {
            let inc = cell_increments(quad, &s, 1.0);
            assert!((inc.d_full.hu - brute(2, 1.0)).abs() < 1e-15);
            assert!((inc.d_half.hu - brute(2, 0.5)).abs() < 1e-15);
        }

        // Cubic: sc-LobattoIII exact on both, LobattoIIIA only on the full
        // interval.
        let s = unit_samples(|x| x * x * x);
        let inc = cell_increments(Quadrature::ScLobattoIII, &s, 1.0);
        assert!((inc.d_full.hu - brute(3, 1.0)).abs() < 1e-15);
        assert!((inc.d_half.hu - brute(3, 0.5)).abs() < 1e-15);
        let inc = cell_increments(Quadrature::LobattoIIIA, &s, 1.0);
        assert!((inc.d_full.hu - brute(3, 1.0)).abs() < 1e-15);
        assert!((inc.d_half.hu - brute(3, 0.5)).abs() > 1e-3);

        // Quartic: neither rule is exact on the full interval.
        let s = unit_samples(|x| x * x * x * x);
        let inc = cell_increments(Quadrature::ScLobattoIII, &s, 1.0);
        assert!((inc.d_full.hu - brute(4, 1.0)).abs() > 1e-4);
    }

    #[test]
    fn hydrostatic_half_cell_identity() {
        // Still water over a quadratic bottom inside one cell: with
        // h_x = -B_x the source is g h h_x, so the second component of
        // d_full must equal g (h_r^2 - h_l^2) / 2; this is exactly what
        // makes G^(2) = g h^2 / 2 - R^(2) constant.
        let g = 9.812;
        let model = Model::saint_venant(SaintVenantParams { g, n_manning: 0.0 });
        let grid = Grid::new(0.0, 1.0, 2).unwrap();
        let w0 = 3.0;
        let b = |x: f64| 0.5 + 0.3 * x + 0.4 * x * x;
        let state = project_initial_data(&grid, |x| w0 - b(x), |_| 0.0, |_| 0.0, b);
        let ext = apply_boundary(&state, &BoundaryCondition::extrapolation(), &model).unwrap();
        let (mids, quarters) = limited_cell_values(&ext);
        for c in 0..2usize {
            let s = sample_cell_source(&model, &grid, &ext, c, &mids[c], &quarters[c]);
            let inc = increments_sc_lobatto_iii(&s, grid.dx());
            let hl = state.points[c].h;
            let hr = state.points[c + 1].h;
            let expect_full = g * (hr * hr - hl * hl) / 2.0;
            assert!((inc.d_full.hu - expect_full).abs() < 1e-12);
            let hm = mids[c].h;
            let expect_half = g * (hm * hm - hl * hl) / 2.0;
            assert!((inc.d_half.hu - expect_half).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_source_field_is_physical_flux() {
        let model = Model::saint_venant(SaintVenantParams {
            g: 1.0,
            n_manning: 0.0,
        });
        let grid = Grid::new(0.0, 1.0, 4).unwrap();
        let state = project_initial_data(&grid, |x| 1.0 + 0.1 * x, |_| 0.2, |_| 0.0, |_| 0.0);
        let bc = BoundaryCondition::extrapolation();
        let ext = apply_boundary(&state, &bc, &model).unwrap();
        let (mids, quarters) = limited_cell_values(&ext);
        let incs: Vec<_> = (0..4)
            .map(|c| {
                let s = sample_cell_source(&model, &grid, &ext, c, &mids[c], &quarters[c]);
                increments_sc_lobatto_iii(&s, grid.dx())
            })
            .collect();
        let gf = assemble_global_flux(&model, &ext, &mids, &incs, &bc);
        for j in 0..=4 {
            let f = model.physical_flux(&state.points[j]);
            assert!(gf.node(j as isize).max_abs_diff(&f) < 1e-15);
        }
    }

    #[test]
    fn still_water_constant_g2() {
        // Still water over a smooth bump: G^(2) constant across all nodes
        // and midpoints with the sub-cell quadrature.
        let g = 9.812;
        let model = Model::saint_venant(SaintVenantParams { g, n_manning: 0.0 });
        let grid = Grid::new(-1.0, 1.0, 16).unwrap();
        let b = |x: f64| {
            if (0.2..=0.4).contains(&x) {
                0.5 * ((10.0 * std::f64::consts::PI * (x - 0.3)).cos() + 1.0)
            } else {
                0.0
            }
        };
        let w0 = 4.000001;
        let mut state = project_initial_data(&grid, |_| 0.0, |_| 0.0, |_| 0.0, b);
        for j in 0..state.points.len() {
            state.points[j].h = w0 - state.bathy_points[j];
        }
        for c in 0..state.averages.len() {
            state.averages[c].h = w0 - state.bathy_averages[c];
        }
        let bc = BoundaryCondition::extrapolation();
        let ext = apply_boundary(&state, &bc, &model).unwrap();
        let (mids, quarters) = limited_cell_values(&ext);
        let incs: Vec<_> = (0..grid.n_cells())
            .map(|c| {
                let s = sample_cell_source(&model, &grid, &ext, c, &mids[c], &quarters[c]);
                increments_sc_lobatto_iii(&s, grid.dx())
            })
            .collect();
        let gf = assemble_global_flux(&model, &ext, &mids, &incs, &bc);
        assert!(gf.g2_spread() < 1e-12);
    }

    #[test]
    fn offset_independence() {
        // Adding a constant to all R values must not change any difference
        // consumed by the scheme; check the seam handling keeps periodic
        // ghost differences consistent with per-cell increments.
        let model = Model::saint_venant(SaintVenantParams {
            g: 9.812,
            n_manning: 0.05,
        });
        let grid = Grid::new(0.0, 1.0, 8).unwrap();
        let tau = 2.0 * std::f64::consts::PI;
        let mut state = project_initial_data(
            &grid,
            |x| 1.0 + 0.2 * (tau * x).sin(),
            |x| 0.3 + 0.1 * (tau * x).cos(),
            |_| 0.0,
            |x| 0.1 * (tau * x).sin(),
        );
        let n = grid.n_cells();
        state.points[n] = state.points[0];
        let bc = BoundaryCondition::Periodic;
        let ext = apply_boundary(&state, &bc, &model).unwrap();
        let (mids, quarters) = limited_cell_values(&ext);
        let incs: Vec<_> = (0..n)
            .map(|c| {
                let s = sample_cell_source(&model, &grid, &ext, c, &mids[c], &quarters[c]);
                increments_sc_lobatto_iii(&s, grid.dx())
            })
            .collect();
        let gf = assemble_global_flux(&model, &ext, &mids, &incs, &bc);
        // Seam differences equal the wrapped interior differences.
        let left_diff = gf.node(0) - gf.node(-1);
        let wrapped = gf.node(n as isize) - gf.node(n as isize - 1);
        assert!(left_diff.max_abs_diff(&wrapped) < 1e-13);
        let right_diff = gf.node(n as isize + 1) - gf.node(n as isize);
        let wrapped = gf.node(1) - gf.node(0);
        assert!(right_diff.max_abs_diff(&wrapped) < 1e-13);
    }
}
