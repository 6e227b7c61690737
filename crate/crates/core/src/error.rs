//! Error types shared across the solver.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("grid needs at least 2 cells, got {0}")]
    TooFewCells(usize),
    #[error("grid bounds must increase: x_min = {x_min}, x_max = {x_max}")]
    NonIncreasingBounds { x_min: f64, x_max: f64 },
    #[error("solution arrays inconsistent with grid: expected {expected} {what}, got {got}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("Dirichlet value prescribed for `hv` but the model has no transverse momentum")]
    DirichletFieldNotInModel,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("eigenstructure undefined for dry state (h = {h:e})")]
    DryEigenstructure { h: f64 },
    #[error("invalid flux state: momentum flux component f2 = {f2:e} must be positive")]
    InvalidFluxState { f2: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("negative water height {h:e} in {location} index {index} during {phase}")]
    NegativeHeight {
        h: f64,
        location: &'static str,
        index: usize,
        phase: &'static str,
    },
    #[error("non-finite value in {location} index {index} during {phase}")]
    NonFinite {
        location: &'static str,
        index: usize,
        phase: &'static str,
    },
    #[error("CFL number {cfl} outside the admissible range {range} for {order}")]
    InvalidCfl {
        cfl: f64,
        range: &'static str,
        order: &'static str,
    },
    #[error("time loop exceeded max_steps = {max_steps} at t = {t}")]
    MaxStepsExceeded { max_steps: usize, t: f64 },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquilibriumError {
    #[error("Newton iteration for h did not converge at x = {x} (residual {residual:e} after {iters} iterations)")]
    NewtonDiverged { x: f64, residual: f64, iters: usize },
    #[error("no positive root on the {branch} branch at x = {x}")]
    NoRootOnBranch { branch: &'static str, x: f64 },
    #[error("solution crossed the critical point kappa = 8/27 at x = {x} (Froude {froude})")]
    CrossedCritical { x: f64, froude: f64 },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}
