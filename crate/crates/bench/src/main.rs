//! Benchmark CLI: run config files or built-in presets, produce convergence
//! tables, and list the available examples.

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use swe_bench::config;
use swe_bench::presets::{self, Overrides};
use swe_bench::runner;

#[derive(Parser)]
#[command(
    name = "swe-bench",
    about = "1-D shallow water benchmark runner (well-balanced PAMPA scheme)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config file.
    Run {
        /// Path to the config file.
        config: PathBuf,
        /// Output directory (overrides the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in example preset.
    Example {
        /// Preset name, e.g. example-2 (see list-examples).
        name: String,
        /// Override the cell count.
        #[arg(long)]
        cells: Option<usize>,
        /// Override the final time.
        #[arg(long)]
        tfinal: Option<f64>,
        /// Source quadrature: scIII (default) or IIIA.
        #[arg(long)]
        quadrature: Option<String>,
        /// Scheme order: high (default), low, or high-unlimited.
        #[arg(long)]
        order: Option<String>,
        /// Stop early once the G2 spread falls below this value.
        #[arg(long)]
        steady_tol: Option<f64>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Also write SVG surface plots per snapshot.
        #[arg(long)]
        svg: bool,
    },
    /// Convergence study of a preset or config over a 2x-refined mesh list.
    Converge {
        /// Preset name or path to a TOML config.
        target: String,
        /// Comma-separated mesh sizes, each twice the previous (e.g. 64,128,256).
        #[arg(long)]
        meshes: String,
        /// Override the final time for every mesh.
        #[arg(long)]
        tfinal: Option<f64>,
        /// Stop each run early below this G2 spread.
        #[arg(long)]
        steady_tol: Option<f64>,
    },
    /// List the built-in example presets.
    ListExamples,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out } => {
            let (plan, output) = config::load(&config)?;
            let dir = out
                .or_else(|| output.dir.as_ref().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("out"));
            let res = runner::run_experiment(&plan, &dir, output.svg)?;
            println!(
                "{}: t = {:.6}, {} steps, mass = {:.12e}, min h over run = {:.3e}, G2 spread = {:.3e}",
                plan.name, res.t_end, res.steps, res.final_mass, res.min_h_over_run, res.final_g2_spread
            );
            println!("summary: {}", res.summary.display());
            Ok(())
        }
        Command::Example {
            name,
            cells,
            tfinal,
            quadrature,
            order,
            steady_tol,
            out,
            svg,
        } => {
            let ov = Overrides {
                cells,
                t_final: tfinal,
                quadrature: quadrature
                    .as_deref()
                    .map(config::parse_quadrature)
                    .transpose()?,
                order: order.as_deref().map(config::parse_order).transpose()?,
                cfl: None,
                steady_g_tol: steady_tol,
            };
            let plan = presets::build(&name, &ov)?;
            let res = runner::run_experiment(&plan, &out, svg)?;
            println!(
                "{}: t = {:.6}, {} steps, mass = {:.12e}, min h over run = {:.3e}, G2 spread = {:.3e}",
                plan.name, res.t_end, res.steps, res.final_mass, res.min_h_over_run, res.final_g2_spread
            );
            println!("summary: {}", res.summary.display());
            Ok(())
        }
        Command::Converge {
            target,
            meshes,
            tfinal,
            steady_tol,
        } => {
            let meshes: Vec<usize> = meshes
                .split(',')
                .map(|s| s.trim().parse().context("parsing mesh list"))
                .collect::<Result<_>>()?;
            let build = |n: usize| -> Result<presets::RunPlan> {
                if target.ends_with(".toml") {
                    let (mut plan, _) = config::load(std::path::Path::new(&target))?;
                    let grid = pampa_swe::Grid::new(plan.grid.x_min(), plan.grid.x_max(), n)?;
                    // Re-sampling a config at a new resolution requires the
                    // expressions again; reload with an overridden grid.
                    let text = std::fs::read_to_string(&target)?;
                    let mut cfg: config::ConfigFile = toml::from_str(&text)?;
                    cfg.grid.n_cells = n;
                    let (p, _) = config::from_config(cfg)?;
                    plan = p;
                    let _ = grid;
                    if let Some(t) = tfinal {
                        plan.controls.t_final = t;
                    }
                    plan.controls.steady_g_tol = steady_tol.or(plan.controls.steady_g_tol);
                    Ok(plan)
                } else {
                    let ov = Overrides {
                        cells: Some(n),
                        t_final: tfinal,
                        steady_g_tol: steady_tol,
                        ..Default::default()
                    };
                    presets::build(&target, &ov)
                }
            };
            let rows = runner::convergence_study(build, &meshes)?;
            println!("{:>7} {:>13} {:>6} {:>13} {:>6}", "cells", "L1(h) points", "rate", "L1(h) avgs", "rate");
            for row in &rows {
                println!(
                    "{:>7} {:>13.4e} {:>6} {:>13.4e} {:>6}",
                    row.n_cells,
                    row.errors.points[0].l1,
                    row.rates_points_h
                        .map(|r| format!("{r:.2}"))
                        .unwrap_or_else(|| "-".into()),
                    row.errors.averages[0].l1,
                    row.rates_avg_h
                        .map(|r| format!("{r:.2}"))
                        .unwrap_or_else(|| "-".into()),
                );
            }
            Ok(())
        }
        Command::ListExamples => {
            for (name, desc) in presets::list() {
                println!("{name:36} {desc}");
            }
            Ok(())
        }
    }
}
