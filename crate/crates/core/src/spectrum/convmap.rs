//! Convergence maps: each pixel is a seed `B = w²` for `w` in a rectangle
//! of the √B-plane, colored by where the iteration ends up.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::{solve_prepared, SolverConfig};
use crate::error::{Error, Result};
use crate::monodromy::{HeunParams, PreparedHeun};
use crate::{c64, C64};

/// Resource guard on `width·height`.
pub const MAX_PIXELS: usize = 4096 * 4096;

/// Axis-aligned rectangle in the √B-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn square(half_width: f64) -> Self {
        Region { re_min: -half_width, re_max: half_width, im_min: -half_width, im_max: half_width }
    }

    /// Center of pixel `(col, row)`; row 0 is the top edge (`im_max`).
    pub fn pixel_center(&self, col: usize, row: usize, width: usize, height: usize) -> C64 {
        let x = self.re_min + (col as f64 + 0.5) / width as f64 * (self.re_max - self.re_min);
        let y = self.im_max - (row as f64 + 0.5) / height as f64 * (self.im_max - self.im_min);
        c64(x, y)
    }
}

/// Final iterates and their colors, row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceMap {
    pub width: usize,
    pub height: usize,
    pub region: Region,
    pub config: SolverConfig,
    /// Final `B` per pixel, `None` where the run failed.
    pub finals: Vec<Option<C64>>,
    /// 8-bit RGB triples, row-major.
    #[serde(skip)]
    pub rgb: Vec<u8>,
}

/// HSV with all components in `[0, 1]` to 8-bit RGB.
pub fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let h6 = (h.rem_euclid(1.0)) * 6.0;
    let c = s * v;
    let x = c * (1.0 - ((h6 % 2.0) - 1.0).abs());
    let (r, g, b) = match h6 as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    let q = |t: f64| ((t + m).clamp(0.0, 1.0) * 255.0).round() as u8;
    [q(r), q(g), q(b)]
}

/// Hue from `arg B`, full saturation, value rising from 0.35 towards 1 with
/// `|B|`.
pub fn domain_color(b: C64) -> [u8; 3] {
    let hue = (b.arg() / (2.0 * std::f64::consts::PI)).rem_euclid(1.0);
    let value = 0.35 + 0.65 * (1.0 - (-b.norm() / 25.0).exp());
    hsv_to_rgb(hue, 1.0, value)
}

/// Runs the solver from every pixel seed. A pixel stops early once `|ε|`
/// drops below the Newton tolerance, otherwise after `cfg.max_iters` steps.
pub fn convergence_map(
    base: &HeunParams,
    region: Region,
    width: usize,
    height: usize,
    cfg: &SolverConfig,
) -> Result<ConvergenceMap> {
    if width == 0 || height == 0 || width.saturating_mul(height) > MAX_PIXELS {
        return Err(Error::InvalidParams(format!("resolution {width}x{height} out of range")));
    }
    cfg.validate()?;
    let prep = PreparedHeun::new(base, &cfg.integrator)?;
    let seeds: Vec<C64> = (0..height)
        .flat_map(|row| (0..width).map(move |col| (col, row)))
        .map(|(col, row)| {
            let w = region.pixel_center(col, row, width, height);
            w * w
        })
        .collect();
    let finals: Vec<Option<C64>> = seeds
        .par_iter()
        .map(|s| {
            let r = solve_prepared(*s, &prep, cfg);
            let finite = r.b.re.is_finite() && r.b.im.is_finite();
            (r.error.is_none() && finite).then_some(r.b)
        })
        .collect();
    let rgb = finals
        .iter()
        .flat_map(|f| f.map_or([0, 0, 0], domain_color))
        .collect();
    Ok(ConvergenceMap { width, height, region, config: *cfg, finals, rgb })
}

impl ConvergenceMap {
    /// Binary PPM (P6, maxval 255).
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.rgb);
        out
    }

    pub fn write_ppm(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_ppm())?;
        Ok(())
    }

    /// Region, resolution and solver settings as JSON.
    pub fn sidecar_json(&self) -> String {
        serde_json::json!({
            "format": "unimon-convmap/1",
            "width": self.width,
            "height": self.height,
            "region": self.region,
            "config": self.config,
            "failed_pixels": self.finals.iter().filter(|f| f.is_none()).count(),
        })
        .to_string()
    }

    /// Fraction of pixels whose final `B` lies within `radius` of one of
    /// `targets`.
    pub fn landing_fraction(&self, targets: &[C64], radius: f64) -> f64 {
        let hits = self
            .finals
            .iter()
            .filter(|f| f.is_some_and(|b| targets.iter().any(|t| (b - *t).norm() < radius)))
            .count();
        hits as f64 / self.finals.len() as f64
    }
}
