//! Accessory parameters with unitary monodromy.
//!
//! For a candidate `B` the rescaled monodromy `P₀, Q₀, R₀` is computed and the
//! two conditions `Im tr(P₀Q₀) = Im tr(Q₀R₀) = 0` are driven to zero by a
//! Newton-type update in `B`, using one-sided finite differences for the
//! holomorphic derivatives. The third trace `tr(P₀R₀)` is only checked.

mod convmap;

pub use convmap::{convergence_map, domain_color, hsv_to_rgb, ConvergenceMap, Region, MAX_PIXELS};

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::elliptic::{lame_darboux_accessory, lame_heun_accessory, seed_lattice, EllipticData};
use crate::error::{Error, Result};
use crate::monodromy::{monodromy_triple, HeunParams, IntegratorConfig, MonodromyTriple, PreparedHeun};
use crate::unitarity::{beukers_inequality_with, heun_reducibility_guard};
use crate::{c64, C64};

/// Solver settings. Defaults follow the reference setup: `h = 1e-5`, 20
/// iterations, 3% acceptance on the third trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Real finite-difference step `h`.
    pub fd_step: f64,
    pub max_iters: usize,
    /// Convergence when `|ε| < newton_tol`.
    pub newton_tol: f64,
    /// `|Im t_PR| ≤ accept_rel_tol·max(1, |t_PR|)` for acceptance.
    pub accept_rel_tol: f64,
    /// `|Im t| ≤ trace_tol·max(1, |t|)` for the two driven traces.
    pub trace_tol: f64,
    /// Use central instead of forward differences (diagnostics only).
    pub central_diff: bool,
    pub integrator: IntegratorConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            fd_step: 1e-5,
            max_iters: 20,
            newton_tol: 1e-8,
            accept_rel_tol: 0.03,
            trace_tol: 1e-6,
            central_diff: false,
            integrator: IntegratorConfig::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = [self.fd_step, self.newton_tol, self.accept_rel_tol, self.trace_tol];
        if pos.iter().any(|x| !(x.is_finite() && *x > 0.0)) || self.max_iters == 0 {
            return Err(Error::InvalidParams("solver tolerances must be positive".into()));
        }
        if self.accept_rel_tol >= 1.0 {
            return Err(Error::InvalidParams("accept_rel_tol must be below 1".into()));
        }
        Ok(())
    }
}

/// Outcome of one Newton run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub seed: C64,
    #[serde(rename = "B")]
    pub b: C64,
    /// `(t_PQ, t_QR, t_PR)` at the final `B`.
    pub traces: (C64, C64, C64),
    pub iterations: usize,
    pub converged: bool,
    pub accepted: bool,
    /// `|Im t_PQ|, |Im t_QR|, |Im t_PR|` at the final `B`.
    pub residual_imag: [f64; 3],
    /// Beukers' inequality at the final `B`, recorded in the Lamé case only.
    pub beukers_ok: Option<bool>,
    /// `|ε|` of every update taken.
    pub steps: Vec<f64>,
    /// Integration or linear-algebra failure that stopped the run.
    pub error: Option<String>,
    #[serde(skip)]
    pub triple: Option<MonodromyTriple>,
}

/// `(tr P₀Q₀, tr Q₀R₀, tr P₀R₀)` at accessory parameter `b`.
pub fn traces_at(b: C64, base: &HeunParams, cfg: &IntegratorConfig) -> Result<(C64, C64, C64)> {
    let t = monodromy_triple(&base.with_accessory(b), cfg)?;
    Ok((t.t_pq(), t.t_qr(), t.t_pr()))
}

/// Solves `Im(t_PQ + νε) = Im(t_QR + με) = 0` for complex `ε`:
/// `ε = (μ̄·Im t_PQ − ν̄·Im t_QR)/Im(ν̄μ)`.
pub fn newton_epsilon(t_pq: C64, t_qr: C64, nu: C64, mu: C64) -> Result<C64> {
    let den = (nu.conj() * mu).im;
    if !(den.abs() > 1e-14) {
        return Err(Error::ParallelDerivatives(den));
    }
    Ok((mu.conj() * t_pq.im - nu.conj() * t_qr.im) / den)
}

fn is_lame(p: &HeunParams) -> bool {
    let h = c64(0.5, 0.0);
    [p.gamma, p.delta, p.epsilon].iter().all(|g| (*g - h).norm() < 1e-12)
}

/// Derivatives `(ν, μ)` of `(t_PQ, t_QR)` with respect to `B`.
fn derivatives(b: C64, t: (C64, C64, C64), prep: &PreparedHeun, cfg: &SolverConfig) -> Result<(C64, C64)> {
    let h = cfg.fd_step;
    let fwd = prepared_traces(b + h, prep)?;
    if cfg.central_diff {
        let bwd = prepared_traces(b - h, prep)?;
        Ok(((fwd.0 - bwd.0) / (2.0 * h), (fwd.1 - bwd.1) / (2.0 * h)))
    } else {
        Ok(((fwd.0 - t.0) / h, (fwd.1 - t.1) / h))
    }
}

fn prepared_traces(b: C64, prep: &PreparedHeun) -> Result<(C64, C64, C64)> {
    let t = prep.triple(b)?;
    Ok((t.t_pq(), t.t_qr(), t.t_pr()))
}

fn blank_result(seed: C64) -> SpectrumResult {
    SpectrumResult {
        seed,
        b: seed,
        traces: (c64(f64::NAN, 0.0), c64(f64::NAN, 0.0), c64(f64::NAN, 0.0)),
        iterations: 0,
        converged: false,
        accepted: false,
        residual_imag: [f64::NAN; 3],
        beukers_ok: None,
        steps: Vec::new(),
        error: None,
        triple: None,
    }
}

/// Newton iteration from `seed`; failures are reported in the result.
pub fn solve_from_seed(seed: C64, base: &HeunParams, cfg: &SolverConfig) -> SpectrumResult {
    match PreparedHeun::new(base, &cfg.integrator) {
        Ok(prep) => solve_prepared(seed, &prep, cfg),
        Err(e) => {
            let mut out = blank_result(seed);
            out.error = Some(e.to_string());
            out
        }
    }
}

/// [`solve_from_seed`] with the loop coefficients already tabulated; the
/// integrator settings of `prep` take precedence over `cfg.integrator`.
pub fn solve_prepared(seed: C64, prep: &PreparedHeun, cfg: &SolverConfig) -> SpectrumResult {
    let base = prep.params();
    let mut out = blank_result(seed);
    if let Err(e) = cfg.validate() {
        out.error = Some(e.to_string());
        return out;
    }
    let mut b = seed;
    let mut retried = false;
    while out.iterations < cfg.max_iters {
        let step = prepared_traces(b, prep)
            .and_then(|t| derivatives(b, t, prep, cfg).map(|d| (t, d)))
            .and_then(|(t, (nu, mu))| newton_epsilon(t.0, t.1, nu, mu));
        let eps = match step {
            Ok(e) => e,
            Err(Error::ParallelDerivatives(_)) if !retried => {
                retried = true;
                b += 1e-3 * (1.0 + b.norm());
                continue;
            }
            Err(e) => {
                out.error = Some(e.to_string());
                break;
            }
        };
        if !(eps.re.is_finite() && eps.im.is_finite()) {
            out.error = Some("non-finite Newton step".into());
            break;
        }
        b += eps;
        out.iterations += 1;
        out.steps.push(eps.norm());
        if eps.norm() < cfg.newton_tol {
            out.converged = true;
            break;
        }
    }
    out.b = b;
    match prep.triple(b) {
        Ok(t) => {
            let tr = (t.t_pq(), t.t_qr(), t.t_pr());
            out.traces = tr;
            out.residual_imag = [tr.0.im.abs(), tr.1.im.abs(), tr.2.im.abs()];
            let rel = |z: C64| z.im.abs() / z.norm().max(1.0);
            let driven_ok = rel(tr.0) <= cfg.trace_tol && rel(tr.1) <= cfg.trace_tol;
            out.accepted = out.converged && driven_ok && rel(tr.2) <= cfg.accept_rel_tol;
            if is_lame(base) {
                out.beukers_ok = Some(beukers_inequality_with(tr.0, tr.1, cfg.trace_tol, 1e-3));
            }
            out.triple = Some(t);
        }
        Err(e) => {
            out.converged = false;
            out.error.get_or_insert(e.to_string());
        }
    }
    out
}

/// The reference seed index set `{1,2,3} × {−1,0,1,2}`.
pub fn paper_seed_indices() -> Vec<(i64, i64)> {
    let mut v = Vec::with_capacity(12);
    for m in 1..=3 {
        for n in -1..=2 {
            v.push((m, n));
        }
    }
    v
}

/// Initial `B` for each lattice index: `ℓ²` read as the Darboux `B′`,
/// converted back to Heun's `B` in the Lamé family.
pub fn seeds_for(base: &HeunParams, d: &EllipticData, indices: &[(i64, i64)]) -> Vec<C64> {
    seed_lattice(d, indices)
        .into_iter()
        .map(|l| {
            let b1 = l * l;
            if lame_darboux_accessory(base, d).is_some() {
                lame_heun_accessory(b1, base, d)
            } else {
                b1
            }
        })
        .collect()
}

/// Solves from every lattice seed and removes converged duplicates (closer
/// than `1e-4` in `B`) and repeated seeds. Results follow seed order.
pub fn sweep(base: &HeunParams, d: &EllipticData, indices: &[(i64, i64)], cfg: &SolverConfig) -> Vec<SpectrumResult> {
    if heun_reducibility_guard(base) {
        warn!("exponents admit a reducible monodromy group; accepted results may be spurious");
    }
    let mut seeds: Vec<C64> = Vec::new();
    for s in seeds_for(base, d, indices) {
        if !seeds.iter().any(|t| (*t - s).norm() == 0.0) {
            seeds.push(s);
        }
    }
    let results: Vec<SpectrumResult> = match PreparedHeun::new(base, &cfg.integrator) {
        Ok(prep) => seeds.par_iter().map(|s| solve_prepared(*s, &prep, cfg)).collect(),
        Err(_) => seeds.iter().map(|s| solve_from_seed(*s, base, cfg)).collect(),
    };
    dedup_results(results, 1e-4)
}

/// Keeps the first of any converged results whose `B` agree within `radius`.
pub fn dedup_results(results: Vec<SpectrumResult>, radius: f64) -> Vec<SpectrumResult> {
    let mut kept: Vec<SpectrumResult> = Vec::with_capacity(results.len());
    for r in results {
        let dup = r.converged && kept.iter().any(|k| k.converged && (k.b - r.b).norm() < radius);
        if !dup {
            kept.push(r);
        }
    }
    kept
}

/// CSV header for [`to_csv_row`].
pub const CSV_HEADER: &str = "seed_re,seed_im,B_re,B_im,iters,converged,accepted,im_tPQ,im_tQR,im_tPR";

pub fn to_csv_row(r: &SpectrumResult) -> String {
    format!(
        "{:.12},{:.12},{:.12},{:.12},{},{},{},{:.6e},{:.6e},{:.6e}",
        r.seed.re,
        r.seed.im,
        r.b.re,
        r.b.im,
        r.iterations,
        r.converged,
        r.accepted,
        r.traces.0.im,
        r.traces.1.im,
        r.traces.2.im
    )
}
