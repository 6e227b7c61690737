//! Built-in benchmark configurations: accuracy test, still-water and
//! moving-water equilibria with and without friction, Riemann problems,
//! the parabolic bowl, and the rotating-system equilibria.

use anyhow::{anyhow, bail, Result};
use pampa_swe::equilibria::{
    newton_recover_h, parabolic_bump, BernoulliCase, EquilibriumSpec, FlowBranch, ParabolicBowl,
};
use pampa_swe::mesh::{project_initial_data, BoundaryCondition, EndCondition, Grid, SolutionState};
use pampa_swe::models::{Model, RotatingSWParams, SaintVenantParams};
use pampa_swe::time_integration::{SchemeOrder, StepControls};
use pampa_swe::Quadrature;
use std::f64::consts::PI;

/// Default gravitational acceleration of the benchmark set.
pub const G_DEFAULT: f64 = 9.812;

/// Analytic reference solutions attached to some presets.
#[derive(Debug, Clone, Copy)]
pub enum Reference {
    /// Steady depth from the Bernoulli invariant (frictionless bump flow).
    Bernoulli(BernoulliCase),
    /// Time-dependent planar parabolic-bowl solution.
    Bowl(ParabolicBowl),
}

impl Reference {
    /// Reference depth at `(x, t)` given the local bathymetry height.
    pub fn depth(&self, x: f64, b: f64, t: f64) -> Result<f64> {
        match self {
            Reference::Bernoulli(case) => Ok(case.depth(b)?),
            Reference::Bowl(bowl) => {
                let _ = b;
                Ok(bowl.depth(x, t).0)
            }
        }
    }
}

/// A fully assembled experiment.
pub struct RunPlan {
    pub name: String,
    pub model: Model,
    pub grid: Grid,
    pub state: SolutionState,
    pub bc: BoundaryCondition,
    pub controls: StepControls,
    pub snapshots: Vec<f64>,
    pub reference: Option<Reference>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub cells: Option<usize>,
    pub t_final: Option<f64>,
    pub quadrature: Option<Quadrature>,
    pub order: Option<SchemeOrder>,
    pub cfl: Option<f64>,
    pub steady_g_tol: Option<f64>,
}

impl Overrides {
    fn controls(&self, t_final: f64) -> StepControls {
        StepControls {
            cfl: self.cfl.unwrap_or(0.2),
            t_final: self.t_final.unwrap_or(t_final),
            quadrature: self.quadrature.unwrap_or(Quadrature::ScLobattoIII),
            order: self.order.unwrap_or(SchemeOrder::HighBlended),
            steady_g_tol: self.steady_g_tol,
            ..StepControls::default()
        }
    }
}

/// Names and one-line descriptions of every preset.
pub fn list() -> Vec<(&'static str, &'static str)> {
    vec![
        ("example-1", "smooth accuracy test with friction, periodic, t = 0.03"),
        ("example-2", "still water over two bumps, 50 cells, t = 10"),
        ("example-2-perturbed", "tiny Gaussian pulse on the still surface, 100 cells"),
        ("example-3-supercritical", "moving equilibrium over a bump, inflow h = 2, hu = 24"),
        ("example-3-subcritical", "moving equilibrium, inflow hu = 4.42, outflow h = 2"),
        ("example-4-supercritical", "frictional version of example-3 case I"),
        ("example-4-subcritical", "frictional version of example-3 case II"),
        ("example-4-prepared-supercritical", "Newton-prepared frictional equilibrium, case I"),
        ("example-4-prepared-subcritical", "Newton-prepared frictional equilibrium, case II"),
        ("example-4-perturbed-supercritical", "pulse on the prepared case-I equilibrium, t = 1"),
        ("example-4-perturbed-subcritical", "pulse on the prepared case-II equilibrium, t = 1.5"),
        ("example-5-test1", "dam break onto a dry bed, 250 cells"),
        ("example-5-test2", "Riemann problem with strong outflow momentum"),
        ("example-6", "dam break over two bumps, g = 1, 300 cells"),
        ("example-7", "oscillating parabolic bowl with wet/dry fronts, t = 6000"),
        ("example-8", "rotating flow over a bump converging to equilibrium"),
        ("example-9", "geostrophic equilibrium over a flat bottom, t = 100"),
        ("example-10", "geostrophic equilibrium over a bump, t = 20"),
        ("example-10-perturbed", "pulse on the geostrophic equilibrium, 100 cells"),
        ("example-11", "Rossby adjustment of a transverse jet, 4000 cells"),
    ]
}

fn two_bump_topography(x: f64) -> f64 {
    if (-0.4..=-0.2).contains(&x) {
        2.0 * ((10.0 * PI * (x + 0.3)).cos() + 1.0)
    } else if (0.2..=0.4).contains(&x) {
        0.5 * ((10.0 * PI * (x - 0.3)).cos() + 1.0)
    } else {
        0.0
    }
}

/// Exact discrete lake at rest: surface `w0` imposed DoF-wise.
fn still_surface_state(grid: &Grid, w0: f64, b: impl Fn(f64) -> f64) -> SolutionState {
    let mut s = project_initial_data(grid, |_| 0.0, |_| 0.0, |_| 0.0, b);
    for j in 0..s.points.len() {
        s.points[j].h = w0 - s.bathy_points[j];
    }
    for c in 0..s.averages.len() {
        s.averages[c].h = w0 - s.bathy_averages[c];
    }
    s
}

fn add_average_pulse(state: &mut SolutionState, grid: &Grid, pulse: impl Fn(f64) -> f64) {
    for c in 0..state.averages.len() {
        state.averages[c].h += pulse(grid.mid_x(c));
    }
}

fn ex3_boundary(case: FlowBranch) -> BoundaryCondition {
    match case {
        FlowBranch::Supercritical => BoundaryCondition::Ends {
            left: EndCondition {
                h: Some(2.0),
                hu: Some(24.0),
                hv: None,
            },
            right: EndCondition::extrapolation(),
        },
        FlowBranch::Subcritical => BoundaryCondition::Ends {
            left: EndCondition {
                h: None,
                hu: Some(4.42),
                hv: None,
            },
            right: EndCondition {
                h: Some(2.0),
                hu: None,
                hv: None,
            },
        },
    }
}

fn bump_flow(
    name: &str,
    ov: &Overrides,
    manning: f64,
    case: FlowBranch,
    reference: bool,
) -> Result<RunPlan> {
    let model = Model::saint_venant(SaintVenantParams {
        g: G_DEFAULT,
        n_manning: manning,
    });
    let grid = Grid::new(0.0, 25.0, ov.cells.unwrap_or(100))?;
    let state = project_initial_data(
        &grid,
        |x| 2.0 - parabolic_bump(x),
        |_| 0.0,
        |_| 0.0,
        parabolic_bump,
    );
    let reference = if reference {
        Some(Reference::Bernoulli(match case {
            FlowBranch::Supercritical => BernoulliCase::supercritical(G_DEFAULT),
            FlowBranch::Subcritical => BernoulliCase::subcritical(G_DEFAULT),
        }))
    } else {
        None
    };
    Ok(RunPlan {
        name: name.to_string(),
        model,
        grid,
        state,
        bc: ex3_boundary(case),
        controls: ov.controls(500.0),
        snapshots: vec![],
        reference,
    })
}

fn prepared_frictional(name: &str, ov: &Overrides, case: FlowBranch) -> Result<RunPlan> {
    let model = Model::saint_venant(SaintVenantParams {
        g: G_DEFAULT,
        n_manning: 0.05,
    });
    let grid = Grid::new(0.0, 25.0, ov.cells.unwrap_or(100))?;
    let bathy = project_initial_data(&grid, |_| 0.0, |_| 0.0, |_| 0.0, parabolic_bump);
    let (g2, q) = match case {
        FlowBranch::Supercritical => (307.624, 24.0),
        FlowBranch::Subcritical => (31.7008, 4.42),
    };
    let spec = EquilibriumSpec {
        g2_target: g2,
        discharge: q,
        v_profile: None,
        branch: case,
    };
    let state = newton_recover_h(
        &model,
        &spec,
        &grid,
        &bathy.bathy_points,
        &bathy.bathy_averages,
        ov.quadrature.unwrap_or(Quadrature::ScLobattoIII),
    )?;
    let bc = match case {
        FlowBranch::Supercritical => BoundaryCondition::Ends {
            left: EndCondition {
                h: Some(state.points[0].h),
                hu: Some(q),
                hv: None,
            },
            right: EndCondition::extrapolation(),
        },
        FlowBranch::Subcritical => BoundaryCondition::Ends {
            left: EndCondition {
                h: None,
                hu: Some(q),
                hv: None,
            },
            right: EndCondition {
                h: Some(state.points[grid.n_cells()].h),
                hu: None,
                hv: None,
            },
        },
    };
    Ok(RunPlan {
        name: name.to_string(),
        model,
        grid,
        state,
        bc,
        controls: ov.controls(1000.0),
        snapshots: vec![],
        reference: None,
    })
}

fn geostrophic(name: &str, ov: &Overrides, bump: bool, cells: usize, t_final: f64) -> Result<RunPlan> {
    let g = 1.0;
    let f0 = 10.0;
    let model = Model::rotating(RotatingSWParams { g, f0, beta: 0.0 });
    let (grid, b_fn, v_fn): (Grid, fn(f64) -> f64, Box<dyn Fn(f64) -> f64>) = if bump {
        fn b10(x: f64) -> f64 {
            if (0.7..=0.9).contains(&x) {
                0.25 * ((10.0 * PI * (x - 0.8)).cos() + 1.0)
            } else {
                0.0
            }
        }
        (
            Grid::new(0.0, 1.0, ov.cells.unwrap_or(cells))?,
            b10,
            Box::new(|x: f64| 0.05 * (2.0 * PI * x).sin()),
        )
    } else {
        fn flat(_: f64) -> f64 {
            0.0
        }
        (
            Grid::new(-10.0, 10.0, ov.cells.unwrap_or(cells))?,
            flat,
            Box::new(move |x: f64| 2.0 * g / f0 * x * (-x * x).exp()),
        )
    };
    let bathy = project_initial_data(&grid, |_| 0.0, |_| 0.0, |_| 0.0, b_fn);
    let spec = EquilibriumSpec {
        g2_target: 2.0,
        discharge: 0.0,
        v_profile: Some(v_fn.as_ref()),
        branch: FlowBranch::Subcritical,
    };
    let state = newton_recover_h(
        &model,
        &spec,
        &grid,
        &bathy.bathy_points,
        &bathy.bathy_averages,
        ov.quadrature.unwrap_or(Quadrature::ScLobattoIII),
    )?;
    Ok(RunPlan {
        name: name.to_string(),
        model,
        grid,
        state,
        bc: BoundaryCondition::extrapolation(),
        controls: ov.controls(t_final),
        snapshots: vec![],
        reference: None,
    })
}

/// Build a preset by name, applying overrides.
pub fn build(name: &str, ov: &Overrides) -> Result<RunPlan> {
    match name {
        "example-1" => {
            let model = Model::saint_venant(SaintVenantParams {
                g: G_DEFAULT,
                n_manning: 0.05,
            });
            let grid = Grid::new(0.0, 1.0, ov.cells.unwrap_or(256))?;
            let mut state = project_initial_data(
                &grid,
                |x| {
                    0.3 * (1.0 + (-((x - 0.5) / 0.05) * ((x - 0.5) / 0.05)).exp())
                        - 0.2 * (6.0 * PI * x).cos()
                },
                |_| 0.0,
                |_| 0.0,
                |x| 0.2 * (1.0 + (6.0 * PI * x).cos()),
            );
            let n = grid.n_cells();
            state.points[n] = state.points[0];
            Ok(RunPlan {
                name: name.to_string(),
                model,
                grid,
                state,
                bc: BoundaryCondition::Periodic,
                controls: ov.controls(0.03),
                snapshots: vec![],
                reference: None,
            })
        }
        "example-2" => {
            let model = Model::saint_venant(SaintVenantParams {
                g: G_DEFAULT,
                n_manning: 0.0,
            });
            let grid = Grid::new(-1.0, 1.0, ov.cells.unwrap_or(50))?;
            let state = still_surface_state(&grid, 4.000001, two_bump_topography);
            Ok(RunPlan {
                name: name.to_string(),
                model,
                grid,
                state,
                bc: BoundaryCondition::extrapolation(),
                controls: ov.controls(10.0),
                snapshots: vec![],
                reference: None,
            })
        }
        "example-2-perturbed" => {
            let model = Model::saint_venant(SaintVenantParams {
                g: G_DEFAULT,
                n_manning: 0.0,
            });
            let grid = Grid::new(-1.0, 1.0, ov.cells.unwrap_or(100))?;
            let mut state = still_surface_state(&grid, 4.000001, two_bump_topography);
            add_average_pulse(&mut state, &grid, |x| 1e-6 * (-200.0 * x * x).exp());
            Ok(RunPlan {
                name: name.to_string(),
                model,
                grid,
                state,
                bc: BoundaryCondition::extrapolation(),
                controls: ov.controls(0.06),
                snapshots: vec![0.02, 0.04, 0.06],
                reference: None,
            })
        }
        "example-3-supercritical" => bump_flow(name, ov, 0.0, FlowBranch::Supercritical, true),
        "example-3-subcritical" => bump_flow(name, ov, 0.0, FlowBranch::Subcritical, true),
        "example-4-supercritical" => bump_flow(name, ov, 0.05, FlowBranch::Supercritical, false),
        "example-4-subcritical" => bump_flow(name, ov, 0.05, FlowBranch::Subcritical, false),
        "example-4-prepared-supercritical" => {
            prepared_frictional(name, ov, FlowBranch::Supercritical)
        }
        "example-4-prepared-subcritical" => prepared_frictional(name, ov, FlowBranch::Subcritical),
        "example-4-perturbed-supercritical" | "example-4-perturbed-subcritical" => {
            let case = if name.ends_with("supercritical") {
                FlowBranch::Supercritical
            } else {
                FlowBranch::Subcritical
            };
            let mut plan = prepared_frictional(name, ov, case)?;
            add_average_pulse(&mut plan.state, &plan.grid.clone(), |x| {
                1e-3 * (-80.0 * (x - 6.0) * (x - 6.0)).exp()
            });
            let t = if case == FlowBranch::Supercritical { 1.0 } else { 1.5 };
            plan.controls = ov.controls(t);
            plan.snapshots = vec![plan.controls.t_final];
            Ok(plan)
        }
        "example-5-test1" => {
            let model = Model::saint_venant(SaintVenantParams {
                g: G_DEFAULT,
                n_manning: 0.0,
            });
            let grid = Grid::new(-300.0, 300.0, ov.cells.unwrap_or(250))?;
            let state = project_initial_data(
                &grid,
                |x| if x <= 0.0 { 10.0 } else { 0.0 },
                |_| 0.0,
                |_| 0.0,
                |_| 0.0,
            );
            Ok(RunPlan {
                name: name.to_string(),
                model,
                grid,
                state,
                bc: BoundaryCondition::extrapolation(),
                controls: ov.controls(12.0),
                snapshots: vec![4.0, 8.0, 12.0],
                reference: None,
            })
        }
        "example-5-test2" => {
            let model = Model::saint_venant(SaintVenantParams {
                g: G_DEFAULT,
                n_manning: 0.0,
            });
            let grid = Grid::new(-200.0, 400.0, ov.cells.unwrap_or(250))?;
            let state = project_initial_data(
                &grid,
                |x| if x <= 0.0 { 5.0 } else { 10.0 },
                |x| if x <= 0.0 { 0.0 } else { 400.0 },
                |_| 0.0,
                |_| 0.0,
            );
            Ok(RunPlan {
                name: name.to_string(),
                model,
                grid,
                state,
                bc: BoundaryCondition::extrapolation(),
                controls: ov.controls(4.0),
                snapshots: vec![1.0, 2.0, 4.0],
                reference: None,
            })
        }
        "example-6" => {
            let model = Model::saint_venant(SaintVenantParams {
                g: 1.0,
                n_manning: 0.0,
            });
            let grid = Grid::new(-1.0, 1.0, ov.cells.unwrap_or(300))?;
            let state = project_initial_data(
                &grid,
                |x| {
                    if x < 0.0 {
                        5.0 - two_bump_topography(x)
                    } else {
                        1.0
                    }
                },
                |_| 0.0,
                |_| 0.0,
                two_bump_topography,
            );
            Ok(RunPlan {
                name: name.to_string(),
                model,
                grid,
                state,
                bc: BoundaryCondition::extrapolation(),
                controls: ov.controls(0.3),
                snapshots: vec![0.1, 0.2, 0.3],
                reference: None,
            })
        }
        "example-7" => {
            let bowl = ParabolicBowl::default();
            let model = Model::saint_venant(SaintVenantParams {
                g: bowl.g,
                n_manning: 0.0,
            });
            let grid = Grid::new(-5000.0, 5000.0, ov.cells.unwrap_or(250))?;
            let state = project_initial_data(
                &grid,
                |x| bowl.depth(x, 0.0).0,
                |_| 0.0,
                |_| 0.0,
                |x| bowl.bathymetry(x),
            );
            Ok(RunPlan {
                name: name.to_string(),
                model,
                grid,
                state,
                bc: BoundaryCondition::extrapolation(),
                controls: ov.controls(6000.0),
                snapshots: vec![1000.0, 2000.0, 3000.0, 4000.0, 5000.0, 6000.0],
                reference: Some(Reference::Bowl(bowl)),
            })
        }
        "example-8" => {
            let model = Model::rotating(RotatingSWParams {
                g: G_DEFAULT,
                f0: 2.0 * PI / 50.0,
                beta: 0.01,
            });
            let grid = Grid::new(0.0, 25.0, ov.cells.unwrap_or(100))?;
            let state = project_initial_data(
                &grid,
                |_| 0.33,
                |_| 0.0,
                |_| 0.0,
                parabolic_bump,
            );
            let bc = BoundaryCondition::Ends {
                left: EndCondition {
                    h: None,
                    hu: Some(0.18),
                    hv: Some(0.0),
                },
                right: EndCondition {
                    h: Some(0.33),
                    hu: None,
                    hv: None,
                },
            };
            Ok(RunPlan {
                name: name.to_string(),
                model,
                grid,
                state,
                bc,
                controls: ov.controls(1000.0),
                snapshots: vec![],
                reference: None,
            })
        }
        "example-9" => geostrophic(name, ov, false, 50, 100.0),
        "example-10" => geostrophic(name, ov, true, 20, 20.0),
        "example-10-perturbed" => {
            let mut plan = geostrophic(name, ov, true, 100, 0.2)?;
            add_average_pulse(&mut plan.state, &plan.grid.clone(), |x| {
                1e-3 * (-200.0 * (x - 0.55) * (x - 0.55)).exp()
            });
            plan.controls = ov.controls(0.2);
            plan.snapshots = vec![0.1, 0.2];
            Ok(plan)
        }
        "example-11" => {
            let model = Model::rotating(RotatingSWParams {
                g: 1.0,
                f0: 1.0,
                beta: 0.0,
            });
            let grid = Grid::new(-250.0, 250.0, ov.cells.unwrap_or(4000))?;
            let n2 = |x: f64| {
                (1.0 + (2.0 * x + 2.0).tanh()) * (1.0 - (2.0 * x - 2.0).tanh())
                    / (1.0 + 2.0_f64.tanh()).powi(2)
            };
            let state = project_initial_data(
                &grid,
                |_| 1.0,
                |_| 0.0,
                |x| 2.0 * n2(x),
                |_| 0.0,
            );
            let t_f = 2.0 * PI;
            Ok(RunPlan {
                name: name.to_string(),
                model,
                grid,
                state,
                bc: BoundaryCondition::extrapolation(),
                controls: ov.controls(t_f),
                snapshots: (1..=5).map(|k| 0.2 * k as f64 * t_f).collect(),
                reference: None,
            })
        }
        other => {
            if list().iter().any(|(n, _)| *n == other) {
                bail!("preset `{other}` listed but not constructible");
            }
            Err(anyhow!(
                "unknown preset `{other}`; run `list-examples` for the catalog"
            ))
        }
    }
}
