//! Uniform 1-D mesh, degree-of-freedom storage and boundary handling.
//!
//! The discretization stores two kinds of unknowns per conserved field:
//! point values at the `n_cells + 1` element boundaries and cell averages on
//! the `n_cells` elements `K_{j+1/2} = [x_j, x_{j+1}]`. Bathymetry carries
//! the same degrees of freedom so that reconstructions and quadratures read
//! discrete topography data consistently with the solution.

use crate::error::MeshError;
use crate::models::Model;
use crate::state::State;

/// Uniform grid on `[x_min, x_max]` with `n_cells` elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_cells: usize,
    dx: f64,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Grid, MeshError> {
        if n_cells < 2 {
            return Err(MeshError::TooFewCells(n_cells));
        }
        if !(x_max > x_min) {
            return Err(MeshError::NonIncreasingBounds { x_min, x_max });
        }
        let dx = (x_max - x_min) / n_cells as f64;
        Ok(Grid {
            x_min,
            x_max,
            n_cells,
            dx,
        })
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.dx
    }

    #[inline]
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    #[inline]
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Domain length `|Omega|`.
    #[inline]
    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// Coordinate of node `j`, `j = 0..=n_cells`.
    #[inline]
    pub fn node_x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    /// Coordinate of the midpoint of cell `K_{j+1/2}`, `j = 0..n_cells`.
    #[inline]
    pub fn mid_x(&self, j: usize) -> f64 {
        self.x_min + (j as f64 + 0.5) * self.dx
    }
}

/// All degrees of freedom of the numerical solution plus discrete bathymetry.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionState {
    /// Point values `u_j`, length `n_cells + 1`.
    pub points: Vec<State>,
    /// Cell averages, length `n_cells`.
    pub averages: Vec<State>,
    /// Bathymetry point values `B_j`, length `n_cells + 1`.
    pub bathy_points: Vec<f64>,
    /// Bathymetry cell averages, length `n_cells`.
    pub bathy_averages: Vec<f64>,
}

impl SolutionState {
    pub fn check_shape(&self, grid: &Grid) -> Result<(), MeshError> {
        let checks: [(&'static str, usize, usize); 4] = [
            ("point values", grid.n_nodes(), self.points.len()),
            ("cell averages", grid.n_cells(), self.averages.len()),
            ("bathymetry points", grid.n_nodes(), self.bathy_points.len()),
            (
                "bathymetry averages",
                grid.n_cells(),
                self.bathy_averages.len(),
            ),
        ];
        for (what, expected, got) in checks {
            if expected != got {
                return Err(MeshError::ShapeMismatch {
                    what,
                    expected,
                    got,
                });
            }
        }
        Ok(())
    }

    /// Total water mass `sum_j dx * h_avg`.
    pub fn mass(&self, grid: &Grid) -> f64 {
        grid.dx() * self.averages.iter().map(|u| u.h).sum::<f64>()
    }

    /// Minimum water height over all point and average degrees of freedom.
    pub fn min_h(&self) -> f64 {
        let p = self.points.iter().map(|u| u.h).fold(f64::INFINITY, f64::min);
        let a = self
            .averages
            .iter()
            .map(|u| u.h)
            .fold(f64::INFINITY, f64::min);
        p.min(a)
    }

    /// Linear combination `a * self + b * other` of the solution fields;
    /// bathymetry is taken from `self`. Used by the SSP-RK convex stages.
    pub fn combine(&self, a: f64, other: &SolutionState, b: f64) -> SolutionState {
        let points = self
            .points
            .iter()
            .zip(&other.points)
            .map(|(x, y)| a * *x + b * *y)
            .collect();
        let averages = self
            .averages
            .iter()
            .zip(&other.averages)
            .map(|(x, y)| a * *x + b * *y)
            .collect();
        SolutionState {
            points,
            averages,
            bathy_points: self.bathy_points.clone(),
            bathy_averages: self.bathy_averages.clone(),
        }
    }
}

/// Prescription for one non-periodic domain end. Dirichlet entries override
/// individual fields at the boundary node and its ghost degrees of freedom;
/// fields left as `None` behave like zero-order extrapolation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EndCondition {
    pub h: Option<f64>,
    pub hu: Option<f64>,
    pub hv: Option<f64>,
}

impl EndCondition {
    pub fn extrapolation() -> Self {
        EndCondition::default()
    }

    fn is_extrapolation(&self) -> bool {
        self.h.is_none() && self.hu.is_none() && self.hv.is_none()
    }

    fn apply(&self, u: &mut State) {
        if let Some(h) = self.h {
            u.h = h;
        }
        if let Some(hu) = self.hu {
            u.hu = hu;
        }
        if let Some(hv) = self.hv {
            u.hv = hv;
        }
    }
}

/// Boundary conditions. Periodicity is a property of the whole domain, so it
/// cannot be mixed with per-end prescriptions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Periodic,
    Ends {
        left: EndCondition,
        right: EndCondition,
    },
}

impl BoundaryCondition {
    pub fn extrapolation() -> Self {
        BoundaryCondition::Ends {
            left: EndCondition::extrapolation(),
            right: EndCondition::extrapolation(),
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, BoundaryCondition::Periodic)
    }

    pub fn validate(&self, model: &Model) -> Result<(), MeshError> {
        if let BoundaryCondition::Ends { left, right } = self {
            if model.n_components() < 3 && (left.hv.is_some() || right.hv.is_some()) {
                return Err(MeshError::DirichletFieldNotInModel);
            }
        }
        Ok(())
    }

    /// Force Dirichlet values onto the boundary nodes of `state`.
    pub fn enforce_dirichlet(&self, state: &mut SolutionState) {
        if let BoundaryCondition::Ends { left, right } = self {
            if !left.is_extrapolation() {
                left.apply(state.points.first_mut().expect("nonempty points"));
            }
            if !right.is_extrapolation() {
                right.apply(state.points.last_mut().expect("nonempty points"));
            }
        }
    }
}

/// Ghost-extended view of a [`SolutionState`]: one ghost node and one ghost
/// cell per side. Interior node `j = 0..=n` lives at slot `j + 1`, interior
/// cell `c = 0..n` at slot `c + 1`; signed accessors take the interior index.
#[derive(Debug, Clone)]
pub struct ExtendedState {
    n_cells: usize,
    points: Vec<State>,
    averages: Vec<State>,
    bathy_points: Vec<f64>,
    bathy_averages: Vec<f64>,
}

impl ExtendedState {
    #[inline]
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Point value at node `j`, `j = -1..=n_cells + 1`.
    #[inline]
    pub fn point(&self, j: isize) -> State {
        self.points[(j + 1) as usize]
    }

    /// Cell average of cell `K_{c+1/2}`, `c = -1..=n_cells`.
    #[inline]
    pub fn avg(&self, c: isize) -> State {
        self.averages[(c + 1) as usize]
    }

    #[inline]
    pub fn bathy_point(&self, j: isize) -> f64 {
        self.bathy_points[(j + 1) as usize]
    }

    #[inline]
    pub fn bathy_avg(&self, c: isize) -> f64 {
        self.bathy_averages[(c + 1) as usize]
    }
}

/// Populate one ghost node and one ghost cell per side.
///
/// Periodic ends copy the opposite side, zero-order extrapolation copies the
/// nearest interior degree of freedom, and Dirichlet entries override the
/// listed fields on the boundary node and both ghost slots. The operation is
/// a pure function of `(state, bc)`, hence idempotent.
pub fn apply_boundary(
    state: &SolutionState,
    bc: &BoundaryCondition,
    model: &Model,
) -> Result<ExtendedState, MeshError> {
    bc.validate(model)?;
    let n = state.averages.len();
    let mut points = Vec::with_capacity(n + 3);
    let mut averages = Vec::with_capacity(n + 2);
    let mut bathy_points = Vec::with_capacity(n + 3);
    let mut bathy_averages = Vec::with_capacity(n + 2);

    match bc {
        BoundaryCondition::Periodic => {
            // Nodes 0 and n are the same physical point; the ghost node on
            // the left is the interior node n-1, etc.
            points.push(state.points[n - 1]);
            points.extend_from_slice(&state.points);
            points.push(state.points[1]);
            averages.push(state.averages[n - 1]);
            averages.extend_from_slice(&state.averages);
            averages.push(state.averages[0]);
            bathy_points.push(state.bathy_points[n - 1]);
            bathy_points.extend_from_slice(&state.bathy_points);
            bathy_points.push(state.bathy_points[1]);
            bathy_averages.push(state.bathy_averages[n - 1]);
            bathy_averages.extend_from_slice(&state.bathy_averages);
            bathy_averages.push(state.bathy_averages[0]);
        }
        BoundaryCondition::Ends { left, right } => {
            let mut first = state.points[0];
            let mut last = state.points[n];
            left.apply(&mut first);
            right.apply(&mut last);

            points.push(first);
            points.extend_from_slice(&state.points);
            points[1] = first;
            points.push(last);
            let last_slot = points.len() - 2;
            points[last_slot] = last;

            let mut ghost_avg_left = state.averages[0];
            let mut ghost_avg_right = state.averages[n - 1];
            left.apply(&mut ghost_avg_left);
            right.apply(&mut ghost_avg_right);
            averages.push(ghost_avg_left);
            averages.extend_from_slice(&state.averages);
            averages.push(ghost_avg_right);

            bathy_points.push(state.bathy_points[0]);
            bathy_points.extend_from_slice(&state.bathy_points);
            bathy_points.push(state.bathy_points[n]);
            bathy_averages.push(state.bathy_averages[0]);
            bathy_averages.extend_from_slice(&state.bathy_averages);
            bathy_averages.push(state.bathy_averages[n - 1]);
        }
    }

    Ok(ExtendedState {
        n_cells: n,
        points,
        averages,
        bathy_points,
        bathy_averages,
    })
}

/// Sample initial data onto the mesh: exact point values at nodes, Simpson
/// cell averages (exact for the quadratic representation space).
pub fn project_initial_data(
    grid: &Grid,
    h_fn: impl Fn(f64) -> f64,
    hu_fn: impl Fn(f64) -> f64,
    hv_fn: impl Fn(f64) -> f64,
    b_fn: impl Fn(f64) -> f64,
) -> SolutionState {
    let n = grid.n_cells();
    let sample = |x: f64| State::new(h_fn(x), hu_fn(x), hv_fn(x));
    let points: Vec<State> = (0..=n).map(|j| sample(grid.node_x(j))).collect();
    let bathy_points: Vec<f64> = (0..=n).map(|j| b_fn(grid.node_x(j))).collect();
    let simpson = |a: f64, m: f64, b: f64| (a + 4.0 * m + b) / 6.0;
    let averages: Vec<State> = (0..n)
        .map(|c| {
            let m = sample(grid.mid_x(c));
            State::new(
                simpson(points[c].h, m.h, points[c + 1].h),
                simpson(points[c].hu, m.hu, points[c + 1].hu),
                simpson(points[c].hv, m.hv, points[c + 1].hv),
            )
        })
        .collect();
    let bathy_averages: Vec<f64> = (0..n)
        .map(|c| {
            simpson(
                bathy_points[c],
                b_fn(grid.mid_x(c)),
                bathy_points[c + 1],
            )
        })
        .collect();
    SolutionState {
        points,
        averages,
        bathy_points,
        bathy_averages,
    }
}
