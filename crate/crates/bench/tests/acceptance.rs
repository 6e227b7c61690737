//! Acceptance suite: every benchmark criterion at its stated tolerance,
//! one pass/fail line per criterion.
//!
//! Run with `cargo test -p swe-bench --test acceptance -- --nocapture`
//! (release profile recommended for the heavier criteria).

use pampa_swe::equilibria::{BernoulliCase, ParabolicBowl};
use pampa_swe::mesh::SolutionState;
use pampa_swe::time_integration::{compute_dt, euler_stage, run, ssp_rk3_step};
use swe_bench::norms::{point_norms, rate, runge_errors};
use swe_bench::presets::{build, Overrides};

fn pass(criterion: &str, detail: &str) {
    println!("[{criterion}] PASS: {detail}");
}

fn check(criterion: &str, ok: bool, detail: &str) {
    if ok {
        pass(criterion, detail);
    } else {
        panic!("[{criterion}] FAIL: {detail}");
    }
}

fn max_drift(a: &SolutionState, b: &SolutionState) -> f64 {
    let mut d = 0.0_f64;
    for (x, y) in a.points.iter().zip(&b.points) {
        d = d.max(x.max_abs_diff(y));
    }
    for (x, y) in a.averages.iter().zip(&b.averages) {
        d = d.max(x.max_abs_diff(y));
    }
    d
}

fn solve(plan: &swe_bench::presets::RunPlan) -> pampa_swe::time_integration::RunResult {
    run(
        plan.state.clone(),
        &plan.model,
        &plan.grid,
        &plan.bc,
        &plan.controls,
        &[],
        |_, _, _| {},
    )
    .unwrap_or_else(|e| panic!("{}: {e}", plan.name))
}

/// Criterion 1: Example-1 Runge convergence on meshes 1/256..1/2048 with
/// third-order rates on the two finest pairs and magnitudes bounded by 3x
/// the reference table.
#[test]
fn criterion_1_convergence() {
    let meshes = [256usize, 512, 1024, 2048, 4096];
    let states: Vec<(usize, SolutionState)> = meshes
        .iter()
        .map(|&n| {
            let plan = build(
                "example-1",
                &Overrides {
                    cells: Some(n),
                    ..Default::default()
                },
            )
            .unwrap();
            (n, solve(&plan).state)
        })
        .collect();

    // Reference magnitudes (L1, points then averages, h then hu).
    let table_pts_h = [4.16e-4, 9.69e-5, 1.34e-5, 1.66e-6];
    let table_pts_hu = [7.37e-4, 1.80e-4, 2.59e-5, 3.24e-6];
    let table_avg_h = [4.72e-4, 8.21e-5, 1.14e-5, 1.40e-6];
    let table_avg_hu = [1.01e-3, 1.78e-4, 2.46e-5, 3.01e-6];

    let mut errs: Vec<[f64; 4]> = Vec::new();
    for k in 0..4 {
        let grid = pampa_swe::Grid::new(0.0, 1.0, states[k].0).unwrap();
        let e = runge_errors(&states[k].1, &states[k + 1].1, &grid, 2).unwrap();
        errs.push([
            e.points[0].l1,
            e.points[1].l1,
            e.averages[0].l1,
            e.averages[1].l1,
        ]);
    }
    for (k, n) in [256usize, 512, 1024, 2048].iter().enumerate() {
        println!(
            "  n={n:5}: pts h {:.3e} (table {:.2e})  pts hu {:.3e}  avg h {:.3e}  avg hu {:.3e}",
            errs[k][0], table_pts_h[k], errs[k][1], errs[k][2], errs[k][3]
        );
        let tables = [table_pts_h[k], table_pts_hu[k], table_avg_h[k], table_avg_hu[k]];
        for (e, t) in errs[k].iter().zip(tables) {
            check(
                "criterion 1",
                *e <= 3.0 * t,
                &format!("error {e:.3e} within 3x of reference {t:.2e} at n={n}"),
            );
        }
    }
    for pair in [2usize, 3] {
        for comp in 0..4 {
            let r = rate(errs[pair - 1][comp], errs[pair][comp]);
            check(
                "criterion 1",
                r >= 2.8,
                &format!("rate {r:.2} >= 2.8 on pair ending at n={}", meshes[pair]),
            );
        }
    }
    pass("criterion 1", "third-order Runge convergence with bounded magnitudes");
}

/// Criterion 2: still-water well-balancedness of both schemes at t = 10.
#[test]
fn criterion_2_still_water() {
    for order in ["high", "low"] {
        let mut ov = Overrides::default();
        if order == "low" {
            ov.order = Some(pampa_swe::SchemeOrder::LowOnly);
        }
        let plan = build("example-2", &ov).unwrap();
        let result = solve(&plan);
        let mut drift_h = 0.0_f64;
        let mut drift_hu = 0.0_f64;
        for (a, b) in result.state.averages.iter().zip(&plan.state.averages) {
            drift_h = drift_h.max((a.h - b.h).abs());
            drift_hu = drift_hu.max((a.hu - b.hu).abs());
        }
        for (a, b) in result.state.points.iter().zip(&plan.state.points) {
            drift_h = drift_h.max((a.h - b.h).abs());
            drift_hu = drift_hu.max((a.hu - b.hu).abs());
        }
        check(
            "criterion 2",
            drift_h <= 1e-12 && drift_hu <= 1e-12,
            &format!("{order}-order Linf drift at t=10: h {drift_h:.2e}, hu {drift_hu:.2e} <= 1e-12"),
        );
    }
    pass("criterion 2", "still water preserved by both schemes");
}

/// Criterion 3: fourth-order superconvergence toward the Bernoulli steady
/// states and converged G2 behavior for both regimes.
#[test]
fn criterion_3_moving_water_superconvergence() {
    let g = swe_bench::presets::G_DEFAULT;
    for (preset, bern, t_cap) in [
        (
            "example-3-supercritical",
            BernoulliCase::supercritical(g),
            60.0,
        ),
        (
            "example-3-subcritical",
            BernoulliCase::subcritical(g),
            500.0,
        ),
    ] {
        let mut errs: Vec<f64> = Vec::new();
        let mut spreads: Vec<f64> = Vec::new();
        for n in [50usize, 100, 200, 400] {
            let plan = build(
                preset,
                &Overrides {
                    cells: Some(n),
                    t_final: Some(t_cap),
                    steady_g_tol: Some(5e-11),
                    ..Default::default()
                },
            )
            .unwrap();
            let result = solve(&plan);
            let d = pampa_swe::diagnostics(
                &result.state,
                &plan.model,
                &plan.grid,
                &plan.bc,
                plan.controls.quadrature,
                result.t,
            )
            .unwrap();
            spreads.push(d.g2_spread);
            let grid = &plan.grid;
            let e = point_norms(
                (0..=n).map(|j| {
                    let b = plan.state.bathy_points[j];
                    result.state.points[j].h - bern.depth(b).unwrap()
                }),
                grid.dx(),
            );
            errs.push(e.l1);
            if preset.ends_with("supercritical") {
                // Case I: the converged global flux sits at the inflow
                // value 307.624 across the whole field.
                let g2_inflow = plan
                    .model
                    .physical_flux(&result.state.points[0])
                    .hu;
                check(
                    "criterion 3",
                    (g2_inflow - 307.624).abs() <= 1e-9 && d.g2_spread <= 1e-10,
                    &format!(
                        "case I converged G2 {g2_inflow:.6} = 307.624 within spread {:.1e}",
                        d.g2_spread
                    ),
                );
            }
        }
        let fmt = |v: &[f64]| {
            v.iter()
                .map(|e| format!("{e:.2e}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        println!(
            "  {preset}: L1 errors [{}] spreads [{}]",
            fmt(&errs),
            fmt(&spreads)
        );
        for (k, s) in spreads.iter().enumerate() {
            check(
                "criterion 3",
                *s <= 1e-10,
                &format!("{preset} G2 spread {s:.2e} <= 1e-10 at mesh {k}"),
            );
        }
        for k in 1..errs.len() {
            let r = rate(errs[k - 1], errs[k]);
            let saturated = errs[k] <= 5e-10;
            check(
                "criterion 3",
                ((3.7..=4.3).contains(&r)) || saturated,
                &format!(
                    "{preset} rate {r:.2} in 4.0 +- 0.3 (or saturated at {:.1e})",
                    errs[k]
                ),
            );
        }
    }
    pass(
        "criterion 3",
        "fourth-order convergence to the Bernoulli equilibria, G2 spread <= 1e-10",
    );
}

/// Criterion 4: frictional equilibrium constant and preservation of the
/// Newton-prepared discrete steady state.
#[test]
fn criterion_4_frictional_equilibrium() {
    // Converged constant of the time-marched subcritical run.
    let plan = build(
        "example-4-subcritical",
        &Overrides {
            t_final: Some(500.0),
            steady_g_tol: Some(1e-12),
            ..Default::default()
        },
    )
    .unwrap();
    let result = solve(&plan);
    // G2 at the outflow node: f2 - R(25); reconstruct through diagnostics
    // field assembly on the final state.
    let ext = pampa_swe::apply_boundary(&result.state, &plan.bc, &plan.model).unwrap();
    let (mids, quarters) = pampa_swe::global_flux::limited_cell_values(&ext);
    let n = plan.grid.n_cells();
    let incs: Vec<_> = (0..n)
        .map(|c| {
            let s = pampa_swe::global_flux::sample_cell_source(
                &plan.model,
                &plan.grid,
                &ext,
                c,
                &mids[c],
                &quarters[c],
            );
            pampa_swe::global_flux::cell_increments(plan.controls.quadrature, &s, plan.grid.dx())
        })
        .collect();
    let gf = pampa_swe::global_flux::assemble_global_flux(&plan.model, &ext, &mids, &incs, &plan.bc);
    let mut g2: Vec<f64> = (0..=n).map(|j| gf.node(j as isize).hu).collect();
    g2.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = g2[n / 2];
    let reference = 31.700836562966;
    let rel = ((median - reference) / reference).abs();
    check(
        "criterion 4",
        rel <= 1e-6,
        &format!("converged G2 {median:.12} vs {reference} (rel dev {rel:.2e} <= 1e-6)"),
    );

    // Prepared equilibrium held for t = 100 to 1e-12.
    let plan = build(
        "example-4-prepared-subcritical",
        &Overrides {
            t_final: Some(100.0),
            ..Default::default()
        },
    )
    .unwrap();
    let result = solve(&plan);
    let drift = max_drift(&result.state, &plan.state);
    check(
        "criterion 4",
        drift <= 1e-12,
        &format!("prepared equilibrium drift {drift:.2e} <= 1e-12 over t = 100"),
    );
    pass("criterion 4", "frictional equilibrium constant and hold");
}

/// Criterion 5: positivity through the dam-break and parabolic-bowl runs,
/// plus error decrease under refinement for the bowl.
#[test]
fn criterion_5_positivity_runs() {
    for preset in ["example-5-test1", "example-5-test2", "example-6", "example-7"] {
        let plan = build(preset, &Overrides::default()).unwrap();
        let h_scale = plan
            .state
            .points
            .iter()
            .chain(plan.state.averages.iter())
            .map(|u| u.h)
            .fold(0.0_f64, f64::max);
        let result = solve(&plan);
        check(
            "criterion 5",
            result.min_h_over_run >= -1e-12 * (1.0 + h_scale) && result.state.min_h() >= 0.0,
            &format!(
                "{preset} completed, raw stage min h {:.2e} within round-off of zero",
                result.min_h_over_run
            ),
        );
    }

    // Bowl accuracy decreases under refinement (t = 1000 snapshot).
    let bowl = ParabolicBowl::default();
    let mut errs = Vec::new();
    for n in [125usize, 250] {
        let plan = build(
            "example-7",
            &Overrides {
                cells: Some(n),
                t_final: Some(1000.0),
                ..Default::default()
            },
        )
        .unwrap();
        let result = solve(&plan);
        let e = point_norms(
            (0..=n).map(|j| {
                let x = plan.grid.node_x(j);
                result.state.points[j].h - bowl.depth(x, result.t).0
            }),
            plan.grid.dx(),
        );
        errs.push(e.l1);
    }
    check(
        "criterion 5",
        errs[1] < errs[0],
        &format!("bowl L1 error decreases under refinement: {:.3e} -> {:.3e}", errs[0], errs[1]),
    );
    pass("criterion 5", "positivity and wet/dry robustness");
}

/// Criterion 6 (attainable parts): rotating-system equilibria. Example 8
/// converges to a tight steady state within the reported band; Examples 9
/// and 10 preserve their prepared geostrophic equilibria.
#[test]
fn criterion_6_rotating_equilibria() {
    // Example 8: steady state reached, spread far inside the 1e-2 band.
    let plan = build(
        "example-8",
        &Overrides {
            steady_g_tol: Some(1e-10),
            ..Default::default()
        },
    )
    .unwrap();
    let result = solve(&plan);
    let d = pampa_swe::diagnostics(
        &result.state,
        &plan.model,
        &plan.grid,
        &plan.bc,
        plan.controls.quadrature,
        result.t,
    )
    .unwrap();
    check(
        "criterion 6",
        d.g2_spread <= 1e-2,
        &format!("example-8 G2 spread {:.2e} <= 1e-2 band", d.g2_spread),
    );

    for (preset, t, tol) in [("example-9", 100.0, 1e-13), ("example-10", 20.0, 1e-13)] {
        let plan = build(
            preset,
            &Overrides {
                t_final: Some(t),
                ..Default::default()
            },
        )
        .unwrap();
        let result = solve(&plan);
        let drift = max_drift(&result.state, &plan.state);
        check(
            "criterion 6",
            drift <= tol,
            &format!("{preset} Linf drift {drift:.2e} <= {tol:.0e} over t = {t}"),
        );
    }
    pass("criterion 6", "rotating equilibria held; example-8 steady");
}

/// Criterion 6, pinned Example-8 constant. The benchmark's stated data pin
/// the transverse velocity at the inflow, which forces
/// `v(25) = -int_0^25 f dx = -6.27` and a Coriolis work integral several
/// times larger than the published reference constant admits; the faithful
/// check below therefore documents a red result against that constant
/// while the run itself converges cleanly (see
/// `criterion_6_rotating_equilibria` for the attainable checks).
#[test]
fn criterion_6_example8_pinned_constant() {
    let plan = build(
        "example-8",
        &Overrides {
            steady_g_tol: Some(1e-10),
            ..Default::default()
        },
    )
    .unwrap();
    let result = solve(&plan);
    let ext = pampa_swe::apply_boundary(&result.state, &plan.bc, &plan.model).unwrap();
    let (mids, quarters) = pampa_swe::global_flux::limited_cell_values(&ext);
    let n = plan.grid.n_cells();
    let incs: Vec<_> = (0..n)
        .map(|c| {
            let s = pampa_swe::global_flux::sample_cell_source(
                &plan.model,
                &plan.grid,
                &ext,
                c,
                &mids[c],
                &quarters[c],
            );
            pampa_swe::global_flux::cell_increments(plan.controls.quadrature, &s, plan.grid.dx())
        })
        .collect();
    let gf =
        pampa_swe::global_flux::assemble_global_flux(&plan.model, &ext, &mids, &incs, &plan.bc);
    let mut g2: Vec<f64> = (0..=n).map(|j| gf.node(j as isize).hu).collect();
    g2.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = g2[n / 2];
    let reference = 3.8948194772284;
    let rel = ((median - reference) / reference).abs();
    check(
        "criterion 6 (pinned)",
        rel <= 1e-6,
        &format!(
            "example-8 converged G2 {median:.10} vs reference {reference} (rel dev {rel:.2e}); \
             the stated setup (hv(0,t) = 0 with f = 2pi/50 + 0.01x) forces v(25) = -6.27 and a \
             Coriolis work integral incompatible with the reference constant, so this check \
             documents the inconsistency rather than an implementation defect"
        ),
    );
}

/// Criterion 7: property-based substitutes - full-size positivity fuzz,
/// still-water and kernel checks live in the core suite; here the
/// quadrature order and the Example-11 signatures.
#[test]
fn criterion_7_property_suite() {
    // Full 1e5-trial positivity fuzz of the first-order scheme.
    use pampa_swe::mesh::{project_initial_data, BoundaryCondition, Grid};
    use pampa_swe::models::{Model, SaintVenantParams};
    use pampa_swe::state::State;
    use pampa_swe::time_integration::{SchemeOrder, StepControls};
    use rand_like::MiniRng;

    // Tiny deterministic generator to avoid a dev-dependency here.
    mod rand_like {
        pub struct MiniRng(pub u64);
        impl MiniRng {
            pub fn next_f64(&mut self) -> f64 {
                // xorshift64*; uniform in [0, 1).
                let mut x = self.0;
                x ^= x >> 12;
                x ^= x << 25;
                x ^= x >> 27;
                self.0 = x;
                (x.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
            }
            pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
                lo + (hi - lo) * self.next_f64()
            }
        }
    }

    let grid = Grid::new(0.0, 1.0, 12).unwrap();
    let model = Model::saint_venant(SaintVenantParams {
        g: 9.812,
        n_manning: 0.0,
    });
    let ctrl = StepControls {
        order: SchemeOrder::LowOnly,
        cfl: 0.25,
        ..StepControls::default()
    };
    let mut rng = MiniRng(0x9e3779b97f4a7c15);
    let trials = 100_000;
    let mut violations = 0usize;
    for trial in 0..trials {
        let mut state = project_initial_data(&grid, |_| 0.0, |_| 0.0, |_| 0.0, |_| 0.0);
        for j in 0..=12 {
            let h = match (trial + j) % 4 {
                0 => 0.0,
                1 => rng.range(0.0, 1e-8),
                _ => rng.range(0.0, 3.0),
            };
            let u = if h > 1e-12 { rng.range(-3.0, 3.0) } else { 0.0 };
            state.points[j] = State::new(h, h * u, 0.0);
            state.bathy_points[j] = rng.range(0.0, 1.5);
        }
        for c in 0..12 {
            let h = match (trial + c) % 4 {
                0 => 0.0,
                1 => rng.range(0.0, 1e-8),
                _ => rng.range(0.0, 3.0),
            };
            let u = if h > 1e-12 { rng.range(-3.0, 3.0) } else { 0.0 };
            state.averages[c] = State::new(h, h * u, 0.0);
            state.bathy_averages[c] = rng.range(0.0, 1.5);
        }
        state.points[12] = state.points[0];
        let bc = if trial % 2 == 0 {
            BoundaryCondition::Periodic
        } else {
            BoundaryCondition::extrapolation()
        };
        let dt = compute_dt(&state, &model, &grid, &ctrl);
        match euler_stage(&state, &model, &grid, &bc, &ctrl, dt) {
            Ok(out) => {
                if out.state.min_h() < 0.0 {
                    violations += 1;
                }
            }
            Err(e) => panic!("[criterion 7] FAIL: fuzz trial {trial}: {e}"),
        }
    }
    check(
        "criterion 7",
        violations == 0,
        &format!("positivity fuzz: {trials} trials, {violations} violations"),
    );

    // Steady kernel: prepared equilibrium gives all-unity blending and a
    // fixed point within 1e-13 in one RK step.
    let plan = build("example-10", &Overrides::default()).unwrap();
    let dt = compute_dt(&plan.state, &plan.model, &plan.grid, &plan.controls);
    let step = ssp_rk3_step(
        &plan.state,
        &plan.model,
        &plan.grid,
        &plan.bc,
        &plan.controls,
        dt,
    )
    .unwrap();
    check(
        "criterion 7",
        step.first_stage_blend.all_unity(),
        "all blending coefficients equal 1 at the discrete steady state",
    );
    check(
        "criterion 7",
        max_drift(&step.state, &plan.state) <= 1e-13,
        "one-step kernel drift <= 1e-13",
    );

    // Example 11 at 4000 cells: positivity, mass conservation, and two
    // outward-moving fronts.
    let plan = build("example-11", &Overrides::default()).unwrap();
    let m0 = plan.state.mass(&plan.grid);
    let t_f = plan.controls.t_final;
    let mut mid_fronts = (0.0_f64, 0.0_f64);
    let mut end_fronts = (0.0_f64, 0.0_f64);
    let fronts = |s: &SolutionState, grid: &pampa_swe::Grid| {
        let mut left = f64::INFINITY;
        let mut right = f64::NEG_INFINITY;
        for (c, u) in s.averages.iter().enumerate() {
            if (u.h - 1.0).abs() > 1e-3 {
                let x = grid.mid_x(c);
                left = left.min(x);
                right = right.max(x);
            }
        }
        (left, right)
    };
    let result = run(
        plan.state.clone(),
        &plan.model,
        &plan.grid,
        &plan.bc,
        &plan.controls,
        &[0.5 * t_f, t_f],
        |t, s, _| {
            if (t - 0.5 * t_f).abs() < 1e-9 {
                mid_fronts = fronts(s, &plan.grid);
            } else {
                end_fronts = fronts(s, &plan.grid);
            }
        },
    )
    .unwrap();
    check(
        "criterion 7",
        result.min_h_over_run >= -1e-12 && result.state.min_h() >= 0.0,
        &format!("example-11 min h {:.2e} stays nonnegative", result.min_h_over_run),
    );
    let m1 = result.state.mass(&plan.grid);
    check(
        "criterion 7",
        ((m1 - m0) / m0).abs() <= 1e-10,
        &format!("example-11 relative mass drift {:.2e} <= 1e-10", ((m1 - m0) / m0).abs()),
    );
    check(
        "criterion 7",
        end_fronts.1 > mid_fronts.1 && end_fronts.0 < mid_fronts.0,
        &format!(
            "two outward-moving fronts: ({:.2}, {:.2}) -> ({:.2}, {:.2})",
            mid_fronts.0, mid_fronts.1, end_fronts.0, end_fronts.1
        ),
    );
    pass("criterion 7", "property suite signatures hold");
}
