//! Closed integration paths in the complex plane.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::{c64, C64};

/// Minimum distance kept between any sample point and a singularity.
pub const CLEARANCE: f64 = 0.02;

/// One piece of a path, parameterized by arc length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Segment {
    Line { z0: C64, z1: C64 },
    /// Circle arc `center + radius·e^{iθ}` for θ from `start` to `start + sweep`.
    Arc { center: C64, radius: f64, start: f64, sweep: f64 },
}

impl Segment {
    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { z0, z1 } => (z1 - z0).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Point at fraction `t ∈ [0,1]` of the segment.
    pub fn point(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { z0, z1 } => z0 + (z1 - z0) * t,
            Segment::Arc { center, radius, start, sweep } => {
                center + C64::from_polar(radius, start + sweep * t)
            }
        }
    }

    /// `dz/dt` at fraction `t`.
    pub fn tangent(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { z0, z1 } => z1 - z0,
            Segment::Arc { radius, start, sweep, .. } => {
                C64::from_polar(radius, start + sweep * t) * c64(0.0, sweep)
            }
        }
    }

    pub fn start(&self) -> C64 {
        self.point(0.0)
    }

    pub fn end(&self) -> C64 {
        self.point(1.0)
    }

    /// Smallest distance from the segment to `p`.
    pub fn distance_to(&self, p: C64) -> f64 {
        match *self {
            Segment::Line { z0, z1 } => {
                let d = z1 - z0;
                let len2 = d.norm_sqr();
                let t = if len2 == 0.0 {
                    0.0
                } else {
                    ((p - z0) * d.conj()).re / len2
                };
                (p - (z0 + d * t.clamp(0.0, 1.0))).norm()
            }
            Segment::Arc { center, radius, sweep, .. } => {
                if sweep.abs() >= 2.0 * std::f64::consts::PI - 1e-12 {
                    return ((p - center).norm() - radius).abs();
                }
                (0..=1024)
                    .map(|k| (p - self.point(k as f64 / 1024.0)).norm())
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// A closed path made of consecutive segments, integrated with a target
/// step `step` in arc length.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Contour {
    pub base: C64,
    pub segments: Vec<Segment>,
    pub step: f64,
}

impl Contour {
    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn end(&self) -> C64 {
        self.segments.last().map_or(self.base, Segment::end)
    }

    /// Closure, continuity and clearance from `singularities`.
    pub fn validate(&self, singularities: &[C64]) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::StepUnderflow(self.step));
        }
        let mut at = self.base;
        for s in &self.segments {
            if (s.start() - at).norm() > 1e-12 {
                return Err(Error::InvalidContour("segments are not contiguous".into()));
            }
            at = s.end();
        }
        if (at - self.base).norm() > 1e-12 {
            return Err(Error::InvalidContour("path is not closed".into()));
        }
        for &p in singularities {
            let d = self
                .segments
                .iter()
                .map(|s| s.distance_to(p))
                .fold(f64::INFINITY, f64::min);
            if d < CLEARANCE {
                return Err(Error::InvalidContour(format!(
                    "path passes within {d:.3e} of singular point {p}"
                )));
            }
        }
        Ok(())
    }

    /// Winding number about `p`, from the accumulated argument change.
    pub fn winding_number(&self, p: C64) -> i64 {
        let mut total = 0.0;
        for s in &self.segments {
            let n = 512;
            let mut prev = s.point(0.0) - p;
            for k in 1..=n {
                let cur = s.point(k as f64 / n as f64) - p;
                total += (cur / prev).arg();
                prev = cur;
            }
        }
        (total / (2.0 * std::f64::consts::PI)).round() as i64
    }
}

/// Straight from `base` to the rightmost point of the circle of `radius`
/// about `pole`, once around counter-clockwise, then straight back.
///
/// `others` are the remaining singular points; the circle must keep
/// [`CLEARANCE`] from them and the whole path must avoid every singularity.
pub fn standard_contour(pole: C64, base: C64, radius: f64, step: f64, others: &[C64]) -> Result<Contour> {
    if !(radius.is_finite() && radius > CLEARANCE) {
        return Err(Error::InvalidContour(format!("radius {radius} must exceed {CLEARANCE}")));
    }
    if (pole - base).norm() <= radius + CLEARANCE {
        return Err(Error::InvalidContour("base point lies inside the loop".into()));
    }
    for &o in others {
        if (o - pole).norm() <= radius + CLEARANCE {
            return Err(Error::InvalidContour(format!(
                "radius {radius} encloses or grazes singular point {o}"
            )));
        }
    }
    let touch = pole + radius;
    let contour = Contour {
        base,
        segments: vec![
            Segment::Line { z0: base, z1: touch },
            Segment::Arc {
                center: pole,
                radius,
                start: 0.0,
                sweep: 2.0 * std::f64::consts::PI,
            },
            Segment::Line { z0: touch, z1: base },
        ],
        step,
    };
    let mut all = others.to_vec();
    all.push(pole);
    contour.validate(&all)?;
    Ok(contour)
}
