//! Physics definitions: Saint-Venant with Manning friction and rotating
//! shallow water with Coriolis forcing.
//!
//! Both systems share the flux `(hu, hu^2 + g h^2 / 2, huv)`; they differ in
//! the source term and in the number of active components. All velocity
//! divisions go through the dry filter of [`crate::limiting::dry_velocity`].

use crate::error::ModelError;
use crate::limiting::dry_velocity;
use crate::state::State;

/// Water heights at or below this are treated as dry when an eigenstructure
/// is requested; callers fall back to the first-order path.
pub const DRY_EIGEN_THRESHOLD: f64 = 1e-12;

/// Critical value of the flux invertibility ratio kappa at Froude = 1.
pub const KAPPA_CRITICAL: f64 = 8.0 / 27.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaintVenantParams {
    /// Gravitational acceleration, positive.
    pub g: f64,
    /// Manning friction coefficient, non-negative.
    pub n_manning: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatingSWParams {
    pub g: f64,
    /// Coriolis parameter f(x) = f0 + beta * x.
    pub f0: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    SaintVenant(SaintVenantParams),
    Rotating(RotatingSWParams),
}

/// Eigen-decomposition of the flux Jacobian at one state. Matrices are
/// row-major; column `i` of `r` is the right eigenvector of `lambda[i]`.
#[derive(Debug, Clone, Copy)]
pub enum Eigen {
    Two {
        lambda: [f64; 2],
        r: [[f64; 2]; 2],
        rinv: [[f64; 2]; 2],
    },
    Three {
        lambda: [f64; 3],
        r: [[f64; 3]; 3],
        rinv: [[f64; 3]; 3],
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowRegime {
    Subcritical,
    Critical,
    Supercritical,
}

impl Model {
    pub fn saint_venant(params: SaintVenantParams) -> Model {
        assert!(params.g > 0.0 && params.n_manning >= 0.0);
        Model::SaintVenant(params)
    }

    pub fn rotating(params: RotatingSWParams) -> Model {
        assert!(params.g > 0.0);
        Model::Rotating(params)
    }

    #[inline]
    pub fn g(&self) -> f64 {
        match self {
            Model::SaintVenant(p) => p.g,
            Model::Rotating(p) => p.g,
        }
    }

    #[inline]
    pub fn n_components(&self) -> usize {
        match self {
            Model::SaintVenant(_) => 2,
            Model::Rotating(_) => 3,
        }
    }

    /// Coriolis parameter at `x`; zero for the frictional system.
    #[inline]
    pub fn coriolis(&self, x: f64) -> f64 {
        match self {
            Model::SaintVenant(_) => 0.0,
            Model::Rotating(p) => p.f0 + p.beta * x,
        }
    }

    /// Dry-filtered primitive velocities `(u, v)`.
    #[inline]
    pub fn velocities(&self, u: &State) -> (f64, f64) {
        (dry_velocity(u.h, u.hu), dry_velocity(u.h, u.hv))
    }

    /// Physical flux `f(u) = (hu, hu^2 + g h^2 / 2, huv)`.
    pub fn physical_flux(&self, w: &State) -> State {
        let (u, v) = self.velocities(w);
        let pressure = 0.5 * self.g() * w.h * w.h;
        State::new(w.hu, w.h * u * u + pressure, w.h * u * v)
    }

    /// Manning friction density `|hu| hu / h^(7/3)` with the momentum taken
    /// as `h * u` after dry filtering; zero for dry states.
    pub fn manning_density(&self, w: &State) -> f64 {
        if w.h <= 1e-14 {
            return 0.0;
        }
        let hu = w.h * dry_velocity(w.h, w.hu);
        hu.abs() * hu * (-(7.0 / 3.0) * w.h.ln()).exp()
    }

    /// Pointwise source `S(u, x)` given the local bathymetry slope.
    pub fn pointwise_source(&self, w: &State, x: f64, b_x: f64) -> State {
        match self {
            Model::SaintVenant(p) => {
                let friction = p.g * p.n_manning * p.n_manning * self.manning_density(w);
                State::new(0.0, -p.g * w.h * b_x - friction, 0.0)
            }
            Model::Rotating(p) => {
                let f = p.f0 + p.beta * x;
                State::new(0.0, -p.g * w.h * b_x + f * w.hv, -f * w.hu)
            }
        }
    }

    /// `|u| + sqrt(g h)` with dry-filtered `u`; zero for a fully dry state.
    pub fn max_wave_speed(&self, w: &State) -> f64 {
        if w.h <= 0.0 {
            return 0.0;
        }
        dry_velocity(w.h, w.hu).abs() + (self.g() * w.h).sqrt()
    }

    /// Eigen-decomposition of the flux Jacobian. Fails on dry states; the
    /// caller must branch to the low-order scheme there.
    pub fn eigenstructure(&self, w: &State) -> Result<Eigen, ModelError> {
        if w.h <= DRY_EIGEN_THRESHOLD {
            return Err(ModelError::DryEigenstructure { h: w.h });
        }
        let g = self.g();
        let (u, v) = self.velocities(w);
        let c = (g * w.h).sqrt();
        match self {
            Model::SaintVenant(_) => {
                let lambda = [u - c, u + c];
                let r = [[1.0, 1.0], [u - c, u + c]];
                let inv2c = 0.5 / c;
                let rinv = [
                    [(u + c) * inv2c, -inv2c],
                    [-(u - c) * inv2c, inv2c],
                ];
                Ok(Eigen::Two { lambda, r, rinv })
            }
            Model::Rotating(_) => {
                let lambda = [u - c, u, u + c];
                let r = [[1.0, 0.0, 1.0], [u - c, 0.0, u + c], [v, 1.0, v]];
                let inv2c = 0.5 / c;
                let rinv = [
                    [(u + c) * inv2c, -inv2c, 0.0],
                    [-v, 0.0, 1.0],
                    [-(u - c) * inv2c, inv2c, 0.0],
                ];
                Ok(Eigen::Three { lambda, r, rinv })
            }
        }
    }

    /// Analytic flux Jacobian, used by verification tests.
    pub fn flux_jacobian(&self, w: &State) -> [[f64; 3]; 3] {
        let g = self.g();
        let (u, v) = self.velocities(w);
        [
            [0.0, 1.0, 0.0],
            [g * w.h - u * u, 2.0 * u, 0.0],
            [-u * v, v, u],
        ]
    }
}

/// Flow classification from the Froude number of a state.
pub fn flow_regime(w: &State, g: f64) -> FlowRegime {
    let u = dry_velocity(w.h, w.hu);
    let c = (g * w.h.max(0.0)).sqrt();
    if u.abs() > c {
        FlowRegime::Supercritical
    } else if u.abs() < c {
        FlowRegime::Subcritical
    } else {
        FlowRegime::Critical
    }
}

/// Critical-point ratio `kappa = g f1^4 / f2^3` of a flux value. Equals
/// `8/27` exactly at Froude = 1, below on the subcritical branch.
pub fn critical_ratio(flux: &State, g: f64) -> Result<f64, ModelError> {
    if flux.hu <= 0.0 {
        return Err(ModelError::InvalidFluxState { f2: flux.hu });
    }
    let f1 = flux.h;
    let f2 = flux.hu;
    Ok(g * f1 * f1 * f1 * f1 / (f2 * f2 * f2))
}
