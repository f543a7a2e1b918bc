//! Data behind the published figures: the Lamé eigenvalue table with its
//! lattice and asymptotes, the Lamé convergence map, and the three Heun
//! sweeps with `γ = δ = ε ∈ {1/3, 2/3, 1}`, `α = β`.
//!
//! Everything is written as CSV/PPM plus small JSON sidecars; plotting is
//! left to external tools.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::elliptic::{
    asymptotic_sqrt_accessory, heun_to_darboux_params, lame_heun_accessory, periods_from_a, seed_lattice,
    EllipticData,
};
use crate::error::Result;
use crate::monodromy::HeunParams;
use crate::spectrum::{convergence_map, paper_seed_indices, sweep, to_csv_row, Region, SolverConfig, CSV_HEADER};
use crate::{c64, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Figure {
    /// Lamé eigenvalues, lattice and asymptotes.
    Fig2a,
    /// Lamé convergence map.
    Fig2b,
    /// Heun sweeps for `γ = δ = ε ∈ {1/3, 2/3, 1}`.
    Fig3,
}

impl Figure {
    pub const ALL: [Figure; 3] = [Figure::Fig2a, Figure::Fig2b, Figure::Fig3];
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureOptions {
    pub figures: Vec<Figure>,
    /// Third singular point; the figures use `a = −1`.
    pub a: C64,
    /// Map resolution (square).
    pub map_size: usize,
    /// Map covers `√B ∈ [−extent, extent]²`.
    pub map_extent: f64,
    pub solver: SolverConfig,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions {
            figures: Figure::ALL.to_vec(),
            a: c64(-1.0, 0.0),
            map_size: 64,
            map_extent: 7.0,
            solver: SolverConfig::default(),
        }
    }
}

/// Heun parameters with `γ = δ = ε = g` and `α = β` fixed by Fuchs.
pub fn symmetric_heun(g: f64, a: C64) -> Result<HeunParams> {
    let alpha = (3.0 * g - 1.0) / 2.0;
    HeunParams::real(g, g, g, alpha, alpha, a, c64(0.0, 0.0))
}

/// Lattice index window drawn around the eigenvalues.
fn lattice_window() -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for m in -1..=4 {
        for n in -2..=3 {
            v.push((m, n));
        }
    }
    v
}

fn spectrum_csv(base: &HeunParams, d: &EllipticData, cfg: &SolverConfig) -> String {
    let results = sweep(base, d, &paper_seed_indices(), cfg);
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &results {
        out.push_str(&to_csv_row(r));
        out.push('\n');
    }
    out
}

fn write(dir: &Path, name: &str, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, bytes)?;
    written.push(path);
    Ok(())
}

fn fig2a(dir: &Path, d: &EllipticData, opts: &FigureOptions, written: &mut Vec<PathBuf>) -> Result<()> {
    let base = HeunParams::lame(opts.a);
    write(dir, "fig2a_eigenvalues.csv", spectrum_csv(&base, d, &opts.solver).as_bytes(), written)?;

    let window = lattice_window();
    let mut lattice = String::from("m,n,re,im\n");
    for (&(m, n), l) in window.iter().zip(seed_lattice(d, &window)) {
        writeln!(lattice, "{m},{n},{:.12},{:.12}", l.re, l.im).unwrap();
    }
    write(dir, "fig2a_lattice.csv", lattice.as_bytes(), written)?;

    let dp = heun_to_darboux_params(&base);
    let mut asym = String::from("m,n,l0_re,l0_im,sqrtB1_re,sqrtB1_im,B_re,B_im\n");
    for (&(m, n), l) in window.iter().zip(seed_lattice(d, &window)) {
        if l.norm() == 0.0 {
            continue;
        }
        let w = asymptotic_sqrt_accessory(l, &dp, d)?;
        let b = lame_heun_accessory(w * w, &base, d);
        writeln!(asym, "{m},{n},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12}", l.re, l.im, w.re, w.im, b.re, b.im)
            .unwrap();
    }
    write(dir, "fig2a_asymptotes.csv", asym.as_bytes(), written)
}

fn fig2b(dir: &Path, opts: &FigureOptions, written: &mut Vec<PathBuf>) -> Result<()> {
    let base = HeunParams::lame(opts.a);
    let n = opts.map_size;
    let map = convergence_map(&base, Region::square(opts.map_extent), n, n, &opts.solver)?;
    write(dir, "fig2b_convmap.ppm", &map.to_ppm(), written)?;
    write(dir, "fig2b_convmap.json", map.sidecar_json().as_bytes(), written)
}

fn fig3(dir: &Path, d: &EllipticData, opts: &FigureOptions, written: &mut Vec<PathBuf>) -> Result<()> {
    for (num, den) in [(1, 3), (2, 3), (3, 3)] {
        let g = num as f64 / den as f64;
        let base = symmetric_heun(g, opts.a)?;
        let stem = format!("fig3_gamma_{num}-{den}");
        write(dir, &format!("{stem}.csv"), spectrum_csv(&base, d, &opts.solver).as_bytes(), written)?;
        let meta = serde_json::json!({
            "format": "unimon-sweep/1",
            "params": base,
            "seed_indices": paper_seed_indices(),
            "config": opts.solver,
        });
        write(dir, &format!("{stem}.json"), meta.to_string().as_bytes(), written)?;
    }
    Ok(())
}

/// Writes the requested figure data into `dir` (created if missing) and
/// returns the paths written, in order.
pub fn reproduce_figures(dir: &Path, opts: &FigureOptions) -> Result<Vec<PathBuf>> {
    opts.solver.validate()?;
    std::fs::create_dir_all(dir)?;
    let d = periods_from_a(opts.a)?;
    let mut written = Vec::new();
    for f in &opts.figures {
        match f {
            Figure::Fig2a => fig2a(dir, &d, opts, &mut written)?,
            Figure::Fig2b => fig2b(dir, opts, &mut written)?,
            Figure::Fig3 => fig3(dir, &d, opts, &mut written)?,
        }
    }
    Ok(written)
}
