//! Declarative experiment configuration: a TOML file with the model,
//! grid, expression-based initial data, boundary prescriptions, solver
//! controls, and output requests.

use crate::expr;
use crate::presets::RunPlan;
use anyhow::{bail, Context, Result};
use pampa_swe::mesh::{project_initial_data, BoundaryCondition, EndCondition, Grid};
use pampa_swe::models::{Model, RotatingSWParams, SaintVenantParams};
use pampa_swe::time_integration::{SchemeOrder, StepControls};
use pampa_swe::Quadrature;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub name: String,
    pub model: ModelSection,
    pub grid: GridSection,
    pub initial: InitialSection,
    #[serde(default)]
    pub boundary: BoundarySection,
    #[serde(default)]
    pub controls: ControlsSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    /// "saint_venant" or "rotating".
    pub kind: String,
    #[serde(default = "default_g")]
    pub g: f64,
    #[serde(default)]
    pub n_manning: f64,
    #[serde(default)]
    pub f0: f64,
    #[serde(default)]
    pub beta: f64,
}

fn default_g() -> f64 {
    crate::presets::G_DEFAULT
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    /// Depth profile `h(x)`; alternatively give `surface` to set
    /// `h = surface - bathymetry`.
    pub h: Option<String>,
    pub surface: Option<String>,
    #[serde(default = "zero_expr")]
    pub hu: String,
    #[serde(default = "zero_expr")]
    pub hv: String,
    #[serde(default = "zero_expr")]
    pub bathymetry: String,
}

fn zero_expr() -> String {
    "0".to_string()
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct BoundarySection {
    /// "periodic", "extrapolation", or "dirichlet".
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub left: Option<DirichletSection>,
    #[serde(default)]
    pub right: Option<DirichletSection>,
}

#[derive(Debug, Deserialize, Default, Clone, Copy)]
#[serde(deny_unknown_fields)]
pub struct DirichletSection {
    pub h: Option<f64>,
    pub hu: Option<f64>,
    pub hv: Option<f64>,
}

impl From<DirichletSection> for EndCondition {
    fn from(d: DirichletSection) -> EndCondition {
        EndCondition {
            h: d.h,
            hu: d.hu,
            hv: d.hv,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlsSection {
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub t_final: f64,
    /// "scIII" (default) or "IIIA".
    #[serde(default)]
    pub quadrature: Option<String>,
    /// "high" (default blended), "low", or "high-unlimited".
    #[serde(default)]
    pub order: Option<String>,
    #[serde(default)]
    pub steady_g_tol: Option<f64>,
}

fn default_cfl() -> f64 {
    0.2
}

impl Default for ControlsSection {
    fn default() -> Self {
        ControlsSection {
            cfl: default_cfl(),
            t_final: 0.0,
            quadrature: None,
            order: None,
            steady_g_tol: None,
        }
    }
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub dir: Option<String>,
    #[serde(default)]
    pub snapshots: Vec<f64>,
    #[serde(default)]
    pub svg: bool,
}

pub fn parse_quadrature(s: &str) -> Result<Quadrature> {
    match s {
        "scIII" | "sc-lobatto3" | "sc_lobatto_iii" => Ok(Quadrature::ScLobattoIII),
        "IIIA" | "lobatto3a" | "lobatto_iiia" => Ok(Quadrature::LobattoIIIA),
        other => bail!("unknown quadrature `{other}` (use scIII or IIIA)"),
    }
}

pub fn parse_order(s: &str) -> Result<SchemeOrder> {
    match s {
        "high" | "high_blended" => Ok(SchemeOrder::HighBlended),
        "low" | "low_only" => Ok(SchemeOrder::LowOnly),
        "high-unlimited" | "high_unlimited" => Ok(SchemeOrder::HighUnlimited),
        other => bail!("unknown order `{other}` (use high, low, or high-unlimited)"),
    }
}

pub fn load(path: &std::path::Path) -> Result<(RunPlan, OutputSection)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let cfg: ConfigFile = toml::from_str(&text).context("parsing config")?;
    from_config(cfg)
}

pub fn from_config(cfg: ConfigFile) -> Result<(RunPlan, OutputSection)> {
    let model = match cfg.model.kind.as_str() {
        "saint_venant" => Model::saint_venant(SaintVenantParams {
            g: cfg.model.g,
            n_manning: cfg.model.n_manning,
        }),
        "rotating" => Model::rotating(RotatingSWParams {
            g: cfg.model.g,
            f0: cfg.model.f0,
            beta: cfg.model.beta,
        }),
        other => bail!("unknown model kind `{other}`"),
    };
    let grid = Grid::new(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n_cells)?;

    let bathy = expr::parse(&cfg.initial.bathymetry)?;
    let hu = expr::parse(&cfg.initial.hu)?;
    let hv = expr::parse(&cfg.initial.hv)?;
    let h_fn: Box<dyn Fn(f64) -> f64> = match (&cfg.initial.h, &cfg.initial.surface) {
        (Some(h), None) => {
            let e = expr::parse(h)?;
            Box::new(move |x| e.eval(x))
        }
        (None, Some(w)) => {
            let e = expr::parse(w)?;
            let b = expr::parse(&cfg.initial.bathymetry)?;
            Box::new(move |x| e.eval(x) - b.eval(x))
        }
        (Some(_), Some(_)) => bail!("give either initial.h or initial.surface, not both"),
        (None, None) => bail!("initial data needs h or surface"),
    };
    let mut state = project_initial_data(
        &grid,
        h_fn.as_ref(),
        |x| hu.eval(x),
        |x| hv.eval(x),
        |x| bathy.eval(x),
    );

    let bc = match cfg.boundary.kind.as_deref() {
        None | Some("extrapolation") => {
            if cfg.boundary.left.is_some() || cfg.boundary.right.is_some() {
                bail!("boundary.left/right need kind = \"dirichlet\"");
            }
            BoundaryCondition::extrapolation()
        }
        Some("periodic") => {
            let n = grid.n_cells();
            state.points[n] = state.points[0];
            BoundaryCondition::Periodic
        }
        Some("dirichlet") => BoundaryCondition::Ends {
            left: cfg.boundary.left.unwrap_or_default().into(),
            right: cfg.boundary.right.unwrap_or_default().into(),
        },
        Some(other) => bail!("unknown boundary kind `{other}`"),
    };
    bc.validate(&model)?;

    let controls = StepControls {
        cfl: cfg.controls.cfl,
        t_final: cfg.controls.t_final,
        quadrature: cfg
            .controls
            .quadrature
            .as_deref()
            .map(parse_quadrature)
            .transpose()?
            .unwrap_or(Quadrature::ScLobattoIII),
        order: cfg
            .controls
            .order
            .as_deref()
            .map(parse_order)
            .transpose()?
            .unwrap_or(SchemeOrder::HighBlended),
        steady_g_tol: cfg.controls.steady_g_tol,
        ..StepControls::default()
    };
    controls.validate()?;

    let snapshots = cfg.output.snapshots.clone();
    Ok((
        RunPlan {
            name: cfg.name,
            model,
            grid,
            state,
            bc,
            controls,
            snapshots,
            reference: None,
        },
        cfg.output,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
name = "pulse"

[model]
kind = "saint_venant"
g = 9.812
n_manning = 0.0

[grid]
x_min = -1.0
x_max = 1.0
n_cells = 64

[initial]
surface = "4.000001 + 1e-6*exp(-200*x^2)"
bathymetry = "0.5*(cos(10*pi*(x-0.3))+1) * max(sign(x-0.2)*sign(0.4-x), 0)"

[controls]
cfl = 0.2
t_final = 0.05

[output]
snapshots = [0.02, 0.05]
svg = true
"#;

    #[test]
    fn sample_config_builds() {
        let cfg: ConfigFile = toml::from_str(SAMPLE).unwrap();
        let (plan, out) = from_config(cfg).unwrap();
        assert_eq!(plan.grid.n_cells(), 64);
        assert_eq!(out.snapshots.len(), 2);
        assert!(out.svg);
        // Surface-based initialization.
        let j = 0;
        let w = plan.state.points[j].h + plan.state.bathy_points[j];
        assert!((w - 4.000001).abs() < 1e-6);
    }

    #[test]
    fn dirichlet_config() {
        let text = r#"
name = "inflow"
[model]
kind = "saint_venant"
[grid]
x_min = 0.0
x_max = 25.0
n_cells = 100
[initial]
h = "2"
[boundary]
kind = "dirichlet"
left = { h = 2.0, hu = 24.0 }
[controls]
t_final = 1.0
"#;
        let cfg: ConfigFile = toml::from_str(text).unwrap();
        let (plan, _) = from_config(cfg).unwrap();
        match plan.bc {
            BoundaryCondition::Ends { left, .. } => {
                assert_eq!(left.h, Some(2.0));
                assert_eq!(left.hu, Some(24.0));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn bad_model_rejected() {
        let text = r#"
name = "x"
[model]
kind = "mhd"
[grid]
x_min = 0.0
x_max = 1.0
n_cells = 8
[initial]
h = "1"
"#;
        let cfg: ConfigFile = toml::from_str(text).unwrap();
        assert!(from_config(cfg).is_err());
    }

    #[test]
    fn hv_dirichlet_rejected_for_saint_venant() {
        let text = r#"
name = "x"
[model]
kind = "saint_venant"
[grid]
x_min = 0.0
x_max = 1.0
n_cells = 8
[initial]
h = "1"
[boundary]
kind = "dirichlet"
left = { hv = 1.0 }
"#;
        let cfg: ConfigFile = toml::from_str(text).unwrap();
        assert!(from_config(cfg).is_err());
    }
}
