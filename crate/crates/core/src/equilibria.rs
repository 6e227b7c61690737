//! Construction and verification of discrete steady states.
//!
//! `newton_recover_h` integrates the steady flux ODE cell by cell with the
//! same collocation quadrature the solver uses, so the prepared point and
//! average data lie in the scheme's discrete kernel. The module also carries
//! two analytic oracles: the Bernoulli depth of frictionless flow over the
//! parabolic-bump topography and the oscillating parabolic-bowl solution
//! with moving wet/dry fronts.

use crate::error::EquilibriumError;
use crate::global_flux::{cell_increments, CellSourceSamples, Quadrature};
use crate::mesh::{Grid, SolutionState};
use crate::models::Model;
use crate::reconstruction::deriv_scalar;
use crate::state::State;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowBranch {
    Subcritical,
    Supercritical,
}

impl FlowBranch {
    fn name(&self) -> &'static str {
        match self {
            FlowBranch::Subcritical => "subcritical",
            FlowBranch::Supercritical => "supercritical",
        }
    }
}

/// Steady-state data: a constant target `G^(2)`, a constant discharge, and
/// (for the rotating system at rest) a transverse velocity profile.
pub struct EquilibriumSpec<'a> {
    pub g2_target: f64,
    pub discharge: f64,
    pub v_profile: Option<&'a dyn Fn(f64) -> f64>,
    pub branch: FlowBranch,
}

/// Newton tolerance on the nonlinear residuals, relative to the target.
fn newton_tol(g2: f64) -> f64 {
    1e-13 * (1.0 + g2.abs())
}

/// Solve `q^2/h + g h^2/2 = rhs` for `h > 0` on the requested branch.
fn solve_momentum_flux(
    g: f64,
    q: f64,
    rhs: f64,
    branch: FlowBranch,
    x: f64,
) -> Result<f64, EquilibriumError> {
    if q == 0.0 {
        if rhs < 0.0 {
            return Err(EquilibriumError::NoRootOnBranch {
                branch: branch.name(),
                x,
            });
        }
        return Ok((2.0 * rhs / g).sqrt());
    }
    let f = |h: f64| q * q / h + 0.5 * g * h * h;
    let h_crit = (q * q / g).powf(1.0 / 3.0);
    if f(h_crit) > rhs + newton_tol(rhs) {
        return Err(EquilibriumError::NoRootOnBranch {
            branch: branch.name(),
            x,
        });
    }
    let (mut lo, mut hi) = match branch {
        FlowBranch::Supercritical => (1e-14 * h_crit, h_crit),
        FlowBranch::Subcritical => {
            let mut hi = h_crit.max(1.0);
            while f(hi) < rhs && hi < 1e12 {
                hi *= 2.0;
            }
            (h_crit, hi)
        }
    };
    // Bisection with Newton acceleration; f is monotone on each branch.
    let mut h = 0.5 * (lo + hi);
    for _ in 0..200 {
        let val = f(h) - rhs;
        let increasing = matches!(branch, FlowBranch::Subcritical);
        if (val > 0.0) == increasing {
            hi = h;
        } else {
            lo = h;
        }
        let d = -q * q / (h * h) + g * h;
        let mut next = if d != 0.0 { h - val / d } else { 0.5 * (lo + hi) };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - h).abs() <= 1e-16 * h.abs() {
            h = next;
            break;
        }
        h = next;
    }
    let res = (f(h) - rhs).abs();
    if res > newton_tol(rhs) {
        return Err(EquilibriumError::NewtonDiverged {
            x,
            residual: res,
            iters: 200,
        });
    }
    Ok(h)
}

struct CellGeometry {
    x_left: f64,
    dx: f64,
    b_left: f64,
    b_avg: f64,
    b_right: f64,
}

/// Second components of the half- and full-cell source increments produced
/// by the collocation points `(h_left, h_mid, h_right)` with constant
/// discharge and an optional transverse velocity profile.
fn increments_second(
    model: &Model,
    quad: Quadrature,
    geo: &CellGeometry,
    q: f64,
    v: &dyn Fn(f64) -> f64,
    h_left: f64,
    h_mid: f64,
    h_right: f64,
) -> (f64, f64) {
    let x_q = geo.x_left + 0.25 * geo.dx;
    let x_m = geo.x_left + 0.5 * geo.dx;
    let x_r = geo.x_left + geo.dx;
    let hv_l = h_left * v(geo.x_left);
    let hv_m = h_mid * v(x_m);
    let hv_r = h_right * v(x_r);
    let h_q = 0.375 * h_left + 0.75 * h_mid - 0.125 * h_right;
    let hv_q = 0.375 * hv_l + 0.75 * hv_m - 0.125 * hv_r;
    let slope = |xi: f64| deriv_scalar(geo.b_left, geo.b_avg, geo.b_right, xi, geo.dx);
    let samples = CellSourceSamples {
        at_left: model.pointwise_source(&State::new(h_left, q, hv_l), geo.x_left, slope(0.0)),
        at_quarter: model.pointwise_source(&State::new(h_q, q, hv_q), x_q, slope(0.25)),
        at_mid: model.pointwise_source(&State::new(h_mid, q, hv_m), x_m, slope(0.5)),
        at_right: model.pointwise_source(&State::new(h_right, q, hv_r), x_r, slope(1.0)),
    };
    let inc = cell_increments(quad, &samples, geo.dx);
    (inc.d_half.hu, inc.d_full.hu)
}

/// Recover the discrete steady state matching `spec` by a left-to-right
/// sweep: per cell, a 2x2 Newton solve for the midpoint and right-node
/// heights coupled through the source quadrature.
pub fn newton_recover_h(
    model: &Model,
    spec: &EquilibriumSpec,
    grid: &Grid,
    bathy_points: &[f64],
    bathy_averages: &[f64],
    quadrature: Quadrature,
) -> Result<SolutionState, EquilibriumError> {
    let n = grid.n_cells();
    let g = model.g();
    let q = spec.discharge;
    let g2 = spec.g2_target;
    let zero_v = |_: f64| 0.0;
    let v: &dyn Fn(f64) -> f64 = spec.v_profile.unwrap_or(&zero_v);
    let tol = newton_tol(g2);

    let check_regime = |h: f64, x: f64| -> Result<(), EquilibriumError> {
        if q == 0.0 {
            return Ok(());
        }
        let froude = (q / h).abs() / (g * h).sqrt();
        let ok = match spec.branch {
            FlowBranch::Supercritical => froude > 1.0,
            FlowBranch::Subcritical => froude < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(EquilibriumError::CrossedCritical { x, froude })
        }
    };

    let mut h_nodes = Vec::with_capacity(n + 1);
    let mut h_mids = Vec::with_capacity(n);
    let h0 = solve_momentum_flux(g, q, g2, spec.branch, grid.node_x(0))?;
    check_regime(h0, grid.node_x(0))?;
    h_nodes.push(h0);

    let mut r2 = 0.0_f64; // accumulated R^(2) at the current left node
    for c in 0..n {
        let geo = CellGeometry {
            x_left: grid.node_x(c),
            dx: grid.dx(),
            b_left: bathy_points[c],
            b_avg: bathy_averages[c],
            b_right: bathy_points[c + 1],
        };
        let h_left = h_nodes[c];
        let flux2 = |h: f64| q * q / h + 0.5 * g * h * h;
        let residuals = |hm: f64, hr: f64| -> (f64, f64) {
            let (d_half, d_full) =
                increments_second(model, quadrature, &geo, q, v, h_left, hm, hr);
            (
                flux2(hm) - (r2 + d_half) - g2,
                flux2(hr) - (r2 + d_full) - g2,
            )
        };

        // Newton with finite-difference Jacobian, iterated to stagnation so
        // the prepared data sit on the scheme's kernel as tightly as f64
        // cancellation allows; the stated tolerance is only the acceptance
        // bound.
        let mut hm = h_left;
        let mut hr = h_left;
        let mut best = (hm, hr, f64::INFINITY);
        let mut stale = 0usize;
        for _ in 0..50 {
            let (r_a, r_b) = residuals(hm, hr);
            let res = r_a.abs().max(r_b.abs());
            if res < best.2 {
                best = (hm, hr, res);
                stale = 0;
            } else {
                stale += 1;
                if stale >= 3 {
                    break;
                }
            }
            if res <= 1e-16 * (1.0 + g2.abs()) {
                break;
            }
            let em = 1e-7 * (1.0 + hm.abs());
            let er = 1e-7 * (1.0 + hr.abs());
            let (ra_m, rb_m) = residuals(hm + em, hr);
            let (ra_r, rb_r) = residuals(hm, hr + er);
            let j11 = (ra_m - r_a) / em;
            let j12 = (ra_r - r_a) / er;
            let j21 = (rb_m - r_b) / em;
            let j22 = (rb_r - r_b) / er;
            let det = j11 * j22 - j12 * j21;
            if det == 0.0 || !det.is_finite() {
                break;
            }
            let dm = (r_a * j22 - r_b * j12) / det;
            let dr = (r_b * j11 - r_a * j21) / det;
            hm = (hm - dm).max(0.05 * hm);
            hr = (hr - dr).max(0.05 * hr);
        }
        let (hm_best, hr_best, res) = best;
        hm = hm_best;
        hr = hr_best;
        if res > tol {
            return Err(EquilibriumError::NewtonDiverged {
                x: grid.mid_x(c),
                residual: res,
                iters: 50,
            });
        }
        check_regime(hr, grid.node_x(c + 1))?;

        let (_, d_full) = increments_second(model, quadrature, &geo, q, v, h_left, hm, hr);
        r2 += d_full;
        h_mids.push(hm);
        h_nodes.push(hr);
    }

    // Assemble point values and Simpson cell averages.
    let points: Vec<State> = (0..=n)
        .map(|j| {
            let h = h_nodes[j];
            State::new(h, q, h * v(grid.node_x(j)))
        })
        .collect();
    let averages: Vec<State> = (0..n)
        .map(|c| {
            let mid = State::new(h_mids[c], q, h_mids[c] * v(grid.mid_x(c)));
            let simpson = |a: f64, m: f64, b: f64| (a + 4.0 * m + b) / 6.0;
            State::new(
                simpson(points[c].h, mid.h, points[c + 1].h),
                simpson(points[c].hu, mid.hu, points[c + 1].hu),
                simpson(points[c].hv, mid.hv, points[c + 1].hv),
            )
        })
        .collect();

    Ok(SolutionState {
        points,
        averages,
        bathy_points: bathy_points.to_vec(),
        bathy_averages: bathy_averages.to_vec(),
    })
}

/// Frictionless moving-water steady state over the parabolic bump: depth
/// from the Bernoulli cubic `g h^3 + (g B - E) h^2 + q^2 / 2 = 0`.
#[derive(Debug, Clone, Copy)]
pub struct BernoulliCase {
    pub q: f64,
    pub energy: f64,
    pub branch: FlowBranch,
    pub g: f64,
}

impl BernoulliCase {
    /// Supercritical inflow data `h = 2`, `hu = 24` at `x = 0` where `B = 0`.
    pub fn supercritical(g: f64) -> Self {
        let q = 24.0;
        let h = 2.0;
        BernoulliCase {
            q,
            energy: q * q / (2.0 * h * h) + g * h,
            branch: FlowBranch::Supercritical,
            g,
        }
    }

    /// Subcritical data `hu = 4.42`, `h = 2` at the outflow where `B = 0`.
    pub fn subcritical(g: f64) -> Self {
        let q = 4.42;
        let h = 2.0;
        BernoulliCase {
            q,
            energy: q * q / (2.0 * h * h) + g * h,
            branch: FlowBranch::Subcritical,
            g,
        }
    }

    /// Depth at bathymetry height `b`, solved to machine stagnation.
    pub fn depth(&self, b: f64) -> Result<f64, EquilibriumError> {
        let (g, q, e) = (self.g, self.q, self.energy);
        let f = |h: f64| g * h * h * h + (g * b - e) * h * h + 0.5 * q * q;
        let df = |h: f64| 3.0 * g * h * h + 2.0 * (g * b - e) * h;
        let h_crit = (q * q / g).powf(1.0 / 3.0);
        if f(h_crit) > 1e-11 * (1.0 + e.abs()) {
            return Err(EquilibriumError::NoRootOnBranch {
                branch: self.branch.name(),
                x: b,
            });
        }
        let (mut lo, mut hi) = match self.branch {
            FlowBranch::Supercritical => (0.0, h_crit),
            FlowBranch::Subcritical => {
                let mut hi = h_crit.max(1.0);
                while f(hi) < 0.0 && hi < 1e9 {
                    hi *= 2.0;
                }
                (h_crit, hi)
            }
        };
        let mut h = 0.5 * (lo + hi);
        for _ in 0..200 {
            let val = f(h);
            // f < 0 between the two positive roots; supercritical root has
            // f decreasing through it from +q^2/2 at h = 0.
            let above = val > 0.0;
            match self.branch {
                FlowBranch::Supercritical => {
                    if above {
                        lo = h;
                    } else {
                        hi = h;
                    }
                }
                FlowBranch::Subcritical => {
                    if above {
                        hi = h;
                    } else {
                        lo = h;
                    }
                }
            }
            let d = df(h);
            let mut next = if d != 0.0 { h - val / d } else { 0.5 * (lo + hi) };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - h).abs() <= 1e-16 * h.abs() {
                h = next;
                break;
            }
            h = next;
        }
        if h <= 0.0 || !h.is_finite() {
            return Err(EquilibriumError::NoRootOnBranch {
                branch: self.branch.name(),
                x: b,
            });
        }
        Ok(h)
    }
}

/// The parabolic bump topography used by the moving-equilibrium benchmarks:
/// continuous, peaking at `B(10) = 0.2`, supported on `[8, 12]`.
pub fn parabolic_bump(x: f64) -> f64 {
    if (8.0..=12.0).contains(&x) {
        0.2 - 0.05 * (x - 10.0) * (x - 10.0)
    } else {
        0.0
    }
}

/// Oscillating planar solution in a parabolic bowl with moving wet/dry
/// fronts.
#[derive(Debug, Clone, Copy)]
pub struct ParabolicBowl {
    pub h0: f64,
    pub a: f64,
    pub b: f64,
    pub g: f64,
}

impl Default for ParabolicBowl {
    fn default() -> Self {
        ParabolicBowl {
            h0: 10.0,
            a: 3000.0,
            b: 5.0,
            g: 9.812,
        }
    }
}

impl ParabolicBowl {
    /// Oscillation frequency `sqrt(2 g h0) / a`.
    pub fn omega(&self) -> f64 {
        (2.0 * self.g * self.h0).sqrt() / self.a
    }

    pub fn bathymetry(&self, x: f64) -> f64 {
        self.h0 * (x / self.a) * (x / self.a)
    }

    /// Planar free surface (valid where it exceeds the bathymetry).
    pub fn surface(&self, x: f64, t: f64) -> f64 {
        let w = self.omega();
        let b2_4g = self.b * self.b / (4.0 * self.g);
        self.h0
            - b2_4g * (2.0 * w * t).cos()
            - b2_4g
            - (self.b * x / (2.0 * self.a)) * (8.0 * self.h0 / self.g).sqrt() * (w * t).cos()
    }

    /// Water depth `max(0, surface - B)` and the wet flag.
    pub fn depth(&self, x: f64, t: f64) -> (f64, bool) {
        let h = self.surface(x, t) - self.bathymetry(x);
        if h > 0.0 {
            (h, true)
        } else {
            (0.0, false)
        }
    }

    /// Wet/dry front positions `x0 = -(b w a^2 / (2 g h0)) cos(w t) +- a`.
    pub fn fronts(&self, t: f64) -> (f64, f64) {
        let w = self.omega();
        let shift = -(self.b * w * self.a * self.a) / (2.0 * self.g * self.h0) * (w * t).cos();
        (shift - self.a, shift + self.a)
    }
}
