//! Experiment artifacts: snapshot CSVs, diagnostics time series, simple SVG
//! line plots, and a JSON summary manifest.

use anyhow::{Context, Result};
use pampa_swe::global_flux::{
    assemble_global_flux, cell_increments, limited_cell_values, sample_cell_source,
};
use pampa_swe::mesh::{apply_boundary, BoundaryCondition, Grid, SolutionState};
use pampa_swe::models::Model;
use pampa_swe::Quadrature;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Format a time for file names: `t` with `.` replaced to stay portable.
fn time_tag(t: f64) -> String {
    format!("{t}").replace('.', "p").replace('-', "m")
}

pub struct SnapshotFiles {
    pub points: PathBuf,
    pub averages: PathBuf,
    pub svg: Option<PathBuf>,
}

/// Write the point-value and cell-average CSVs of one snapshot, including
/// bathymetry, surface, and the global flux components.
pub fn write_snapshot(
    dir: &Path,
    name: &str,
    t: f64,
    state: &SolutionState,
    model: &Model,
    grid: &Grid,
    bc: &BoundaryCondition,
    quadrature: Quadrature,
    svg: bool,
) -> Result<SnapshotFiles> {
    fs::create_dir_all(dir)?;
    let n = grid.n_cells();
    let ext = apply_boundary(state, bc, model)?;
    let (mids, quarters) = limited_cell_values(&ext);
    let incs: Vec<_> = (0..n)
        .map(|c| {
            let s = sample_cell_source(model, grid, &ext, c, &mids[c], &quarters[c]);
            cell_increments(quadrature, &s, grid.dx())
        })
        .collect();
    let gf = assemble_global_flux(model, &ext, &mids, &incs, bc);
    let three = model.n_components() == 3;

    let tag = time_tag(t);
    let mut pts = String::new();
    if three {
        pts.push_str("x,h,hu,hv,B,surface,g1,g2,g3\n");
    } else {
        pts.push_str("x,h,hu,B,surface,g1,g2\n");
    }
    for j in 0..=n {
        let u = state.points[j];
        let b = state.bathy_points[j];
        let g = gf.node(j as isize);
        if three {
            writeln!(
                pts,
                "{},{},{},{},{},{},{},{},{}",
                grid.node_x(j),
                u.h,
                u.hu,
                u.hv,
                b,
                u.h + b,
                g.h,
                g.hu,
                g.hv
            )?;
        } else {
            writeln!(
                pts,
                "{},{},{},{},{},{},{}",
                grid.node_x(j),
                u.h,
                u.hu,
                b,
                u.h + b,
                g.h,
                g.hu
            )?;
        }
    }
    let points_path = dir.join(format!("{name}_t{tag}_points.csv"));
    fs::write(&points_path, pts).with_context(|| format!("writing {points_path:?}"))?;

    let mut avgs = String::new();
    if three {
        avgs.push_str("x,h,hu,hv,B,surface,g2_mid\n");
    } else {
        avgs.push_str("x,h,hu,B,surface,g2_mid\n");
    }
    for c in 0..n {
        let u = state.averages[c];
        let b = state.bathy_averages[c];
        let g = gf.mid(c as isize);
        if three {
            writeln!(
                avgs,
                "{},{},{},{},{},{},{}",
                grid.mid_x(c),
                u.h,
                u.hu,
                u.hv,
                b,
                u.h + b,
                g.hu
            )?;
        } else {
            writeln!(
                avgs,
                "{},{},{},{},{},{}",
                grid.mid_x(c),
                u.h,
                u.hu,
                b,
                u.h + b,
                g.hu
            )?;
        }
    }
    let averages_path = dir.join(format!("{name}_t{tag}_averages.csv"));
    fs::write(&averages_path, avgs)?;

    let svg_path = if svg {
        let surface: Vec<(f64, f64)> = (0..n)
            .map(|c| (grid.mid_x(c), state.averages[c].h + state.bathy_averages[c]))
            .collect();
        let bed: Vec<(f64, f64)> = (0..n)
            .map(|c| (grid.mid_x(c), state.bathy_averages[c]))
            .collect();
        let path = dir.join(format!("{name}_t{tag}_surface.svg"));
        fs::write(
            &path,
            line_plot(
                &format!("{name}: surface and bed at t = {t}"),
                &[("surface", &surface), ("bed", &bed)],
            ),
        )?;
        Some(path)
    } else {
        None
    };

    Ok(SnapshotFiles {
        points: points_path,
        averages: averages_path,
        svg: svg_path,
    })
}

/// Diagnostics time series CSV.
pub fn write_diagnostics(
    dir: &Path,
    name: &str,
    rows: &[(f64, f64, f64, f64)],
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut out = String::from("t,mass,min_h,g2_spread\n");
    for (t, mass, min_h, spread) in rows {
        writeln!(out, "{t},{mass},{min_h},{spread}")?;
    }
    let path = dir.join(format!("{name}_diagnostics.csv"));
    fs::write(&path, out)?;
    Ok(path)
}

/// Minimal static line plot: axes box, tick labels, one polyline per series.
pub fn line_plot(title: &str, series: &[(&str, &[(f64, f64)])]) -> String {
    const W: f64 = 720.0;
    const H: f64 = 420.0;
    const ML: f64 = 64.0;
    const MR: f64 = 20.0;
    const MT: f64 = 36.0;
    const MB: f64 = 44.0;
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in *pts {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !x_min.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
        y_min = 0.0;
        y_max = 1.0;
    }
    if (y_max - y_min).abs() < 1e-300 {
        y_max = y_min + 1.0;
    }
    let pad = 0.04 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    let sx = |x: f64| ML + (x - x_min) / (x_max - x_min) * (W - ML - MR);
    let sy = |y: f64| H - MB - (y - y_min) / (y_max - y_min) * (H - MT - MB);

    let mut svg = String::new();
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\
         <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\
         <text x=\"{}\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
        W / 2.0,
        title
    );
    let _ = write!(
        svg,
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        W - ML - MR,
        H - MT - MB
    );
    for k in 0..=4 {
        let xv = x_min + (x_max - x_min) * k as f64 / 4.0;
        let yv = y_min + (y_max - y_min) * k as f64 / 4.0;
        let _ = write!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{xv:.4}</text>",
            sx(xv),
            H - MB + 16.0
        );
        let _ = write!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{yv:.4}</text>",
            ML - 6.0,
            sy(yv) + 4.0
        );
    }
    for (k, (label, pts)) in series.iter().enumerate() {
        let color = colors[k % colors.len()];
        let mut d = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.3},{:.3} ", if i == 0 { "M" } else { "L" }, sx(x), sy(y));
        }
        let _ = write!(
            svg,
            "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            d.trim_end()
        );
        let _ = write!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">{label}</text>",
            W - MR - 110.0,
            MT + 18.0 + 16.0 * k as f64
        );
    }
    svg.push_str("</svg>");
    svg
}
