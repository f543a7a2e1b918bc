//! Weierstrass elliptic functions attached to the Heun singular point `a`.
//!
//! The curve is `(℘′)² = 4x(x−1)(x−a)` after the shift `℘ = x − (1+a)/3`,
//! which makes the three branch values sum to zero. Periods come from the
//! complex AGM; ℘, ℘′ and ζ from q-series on a reduced basis.
//!
//! The half-period basis is canonical rather than tied to the labels of the
//! singular points: `ω₁` is a shortest period vector (half of it) and `ω₂`
//! completes a positively oriented reduced basis. [`EllipticData::pole_index`]
//! records which half-period sits over each of `x = 0, 1, a`.

mod weierstrass;

pub use weierstrass::agm;

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::monodromy::HeunParams;
use crate::{c64, C64};
use weierstrass::Series;

/// Half-periods, branch values, quasi-periods and area of the lattice.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EllipticData {
    pub a: C64,
    pub omega1: C64,
    pub omega2: C64,
    pub omega3: C64,
    /// `eᵢ = ℘(ωᵢ)`.
    pub e1: C64,
    pub e2: C64,
    pub e3: C64,
    /// `ηᵢ = ζ(ωᵢ)`, so that `ζ(z + 2ωᵢ) = ζ(z) + 2ηᵢ`.
    pub eta1: C64,
    pub eta2: C64,
    /// `Δ = 4·Im(ω̄₁ω₂)`, the area of the period parallelogram.
    pub area: f64,
    pub g2: C64,
    pub g3: C64,
    /// `℘` values over `x = 0, 1, a`: `xₖ − (1+a)/3`.
    pub roots: [C64; 3],
    /// Half-period index (1, 2 or 3) over `x = 0, 1, a`.
    pub pole_index: [usize; 3],
    #[serde(skip)]
    series: Series,
}

impl EllipticData {
    pub fn omega(&self, i: usize) -> C64 {
        match i {
            0 => c64(0.0, 0.0),
            1 => self.omega1,
            2 => self.omega2,
            3 => self.omega3,
            _ => panic!("half-period index {i} out of range"),
        }
    }

    pub fn e(&self, i: usize) -> C64 {
        match i {
            1 => self.e1,
            2 => self.e2,
            3 => self.e3,
            _ => panic!("branch index {i} out of range"),
        }
    }

    /// Half-period over the singular point `k` (`0 ↦ x=0`, `1 ↦ x=1`, `2 ↦ x=a`).
    pub fn pole_half_period(&self, k: usize) -> C64 {
        self.omega(self.pole_index[k])
    }

    /// `η₁ω₂ − η₂ω₁ − πi/2`; vanishes for a consistent lattice.
    pub fn legendre_residual(&self) -> C64 {
        self.eta1 * self.omega2 - self.eta2 * self.omega1 - c64(0.0, PI / 2.0)
    }

    /// `(2π/Δ)·|ω₁|`, the spacing of the seed lattice along its first axis.
    pub fn lattice_spacing(&self) -> f64 {
        2.0 * PI / self.area * self.omega1.norm()
    }
}

/// Builds the lattice of `(℘′)² = 4x(x−1)(x−a)`.
pub fn periods_from_a(a: C64) -> Result<EllipticData> {
    if !(a.re.is_finite() && a.im.is_finite()) {
        return Err(Error::InvalidParams(format!("a = {a} is not finite")));
    }
    if a.norm() < 1e-12 || (a - 1.0).norm() < 1e-12 {
        return Err(Error::InvalidParams(format!("a = {a} collides with 0 or 1")));
    }
    let shift = (a + 1.0) / 3.0;
    let roots = [-shift, c64(1.0, 0.0) - shift, a - shift];
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);

    const ORDERS: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 0, 1], [1, 2, 0], [2, 1, 0]];
    let mut last_err = Error::AgmNonConvergence;
    for ord in ORDERS {
        let (e1, e2, e3) = (roots[ord[0]], roots[ord[1]], roots[ord[2]]);
        let (w1, w2) = match agm_periods(e1, e2, e3) {
            Ok(w) => w,
            Err(e) => {
                last_err = e;
                continue;
            }
        };
        if (w2 / w1).im.abs() < 1e-12 {
            continue;
        }
        let (w1, w2) = canonical_basis(w1, w2);
        match assemble(a, w1 * 0.5, w2 * 0.5, roots, scale) {
            Ok(d) => return Ok(d),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// Full periods `(π/M(A,B), πi/M(A,C))` with `A = √(e₁−e₃)`, `B = √(e₁−e₂)`,
/// `C = √(e₂−e₃)`, signs chosen so that `|A−B| ≤ |A+B|` and `|A−C| ≤ |A+C|`.
fn agm_periods(e1: C64, e2: C64, e3: C64) -> Result<(C64, C64)> {
    let a = (e1 - e3).sqrt();
    let mut b = (e1 - e2).sqrt();
    let mut c = (e2 - e3).sqrt();
    if (a - b).norm() > (a + b).norm() {
        b = -b;
    }
    if (a - c).norm() > (a + c).norm() {
        c = -c;
    }
    let mb = agm(a, b)?;
    let mc = agm(a, c)?;
    if mb.norm() == 0.0 || mc.norm() == 0.0 {
        return Err(Error::AgmNonConvergence);
    }
    Ok((c64(PI, 0.0) / mb, c64(0.0, PI) / mc))
}

/// Gauss-reduced, positively oriented basis with a canonical choice among
/// equally short vectors.
fn canonical_basis(mut w1: C64, mut w2: C64) -> (C64, C64) {
    if (w2 / w1).im < 0.0 {
        w2 = -w2;
    }
    for _ in 0..200 {
        let m = (w2 / w1).re.round();
        w2 -= w1 * m;
        if w2.norm() < w1.norm() * (1.0 - 1e-14) {
            let t = w1;
            w1 = w2;
            w2 = -t;
        } else {
            break;
        }
    }
    let mut pts = Vec::with_capacity(24);
    for m in -2i32..=2 {
        for n in -2i32..=2 {
            if m != 0 || n != 0 {
                pts.push(w1 * m as f64 + w2 * n as f64);
            }
        }
    }
    let tol = 1e-12;
    let shortest = pts.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
    let first = pts
        .iter()
        .copied()
        .filter(|p| p.norm() <= shortest * (1.0 + tol))
        .min_by(|p, q| {
            let (ap, aq) = (p.arg().abs(), q.arg().abs());
            if (ap - aq).abs() > tol {
                ap.total_cmp(&aq)
            } else {
                q.arg().total_cmp(&p.arg())
            }
        })
        .expect("lattice has nonzero points");
    let upper: Vec<C64> = pts.iter().copied().filter(|p| (p / first).im > tol).collect();
    let shortest_up = upper.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
    let second = upper
        .iter()
        .copied()
        .filter(|p| p.norm() <= shortest_up * (1.0 + tol))
        .max_by(|p, q| (p / first).re.total_cmp(&(q / first).re))
        .expect("lattice is two-dimensional");
    (first, second)
}

fn assemble(a: C64, omega1: C64, omega2: C64, roots: [C64; 3], scale: f64) -> Result<EllipticData> {
    let series = Series::new(omega1, omega2);
    let omega3 = omega1 + omega2;
    let eta1 = series.eta1;
    let eta2 = series.zeta_raw(omega2)?;
    let half = [omega1, omega2, omega3];
    let mut e = [c64(0.0, 0.0); 3];
    let mut pole_index = [0usize; 3];
    let mut used = [false; 3];
    for (i, w) in half.iter().enumerate() {
        let (zr, _, _) = series.reduce(*w);
        let v = series.wp_reduced(zr)?;
        let (k, dist) = roots
            .iter()
            .enumerate()
            .map(|(k, r)| (k, (v - r).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("three roots");
        if dist > 1e-7 * scale || used[k] {
            return Err(Error::InvalidParams(format!(
                "half-period values do not match the branch points (residual {dist:e})"
            )));
        }
        used[k] = true;
        e[i] = roots[k];
        pole_index[k] = i + 1;
    }
    let area = 4.0 * (omega1.conj() * omega2).im;
    let g2 = -(e[0] * e[1] + e[0] * e[2] + e[1] * e[2]) * 4.0;
    let g3 = e[0] * e[1] * e[2] * 4.0;
    let d = EllipticData {
        a,
        omega1,
        omega2,
        omega3,
        e1: e[0],
        e2: e[1],
        e3: e[2],
        eta1,
        eta2,
        area,
        g2,
        g3,
        roots,
        pole_index,
        series,
    };
    let leg = d.legendre_residual().norm();
    if leg > 1e-8 * (1.0 + eta1.norm() * omega2.norm()) {
        return Err(Error::InvalidParams(format!("Legendre relation off by {leg:e}")));
    }
    Ok(d)
}

/// Weierstrass ℘.
pub fn wp(z: C64, d: &EllipticData) -> Result<C64> {
    let (zr, _, _) = d.series.reduce(z);
    d.series.wp_reduced(zr)
}

/// Derivative ℘′.
pub fn wp_prime(z: C64, d: &EllipticData) -> Result<C64> {
    let (zr, _, _) = d.series.reduce(z);
    d.series.wp_prime_reduced(zr)
}

/// Weierstrass ζ, with `ζ(z + 2ωᵢ) = ζ(z) + 2ηᵢ`.
pub fn wzeta(z: C64, d: &EllipticData) -> Result<C64> {
    let (zr, m, n) = d.series.reduce(z);
    Ok(d.series.zeta_raw(zr)? + d.eta1 * (2.0 * m) + d.eta2 * (2.0 * n))
}

/// Exponents `m₀..m₃` of the Darboux potential and, once known, its
/// accessory parameter `B′`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DarbouxParams {
    pub m: [C64; 4],
    pub accessory: Option<C64>,
}

impl DarbouxParams {
    pub fn new(m: [C64; 4]) -> Self {
        DarbouxParams { m, accessory: None }
    }

    /// `Σ mᵢ(mᵢ+1)`.
    pub fn coupling_sum(&self) -> C64 {
        self.m.iter().map(|m| *m * (*m + 1.0)).sum()
    }

    /// Each `mᵢ` real, or `Re mᵢ ∈ ½ℤ`, within `1e-9`.
    pub fn unitarity_admissible(&self) -> bool {
        self.m.iter().all(|m| {
            let twice = 2.0 * m.re;
            m.im.abs() <= 1e-9 || (twice - twice.round()).abs() <= 2e-9
        })
    }
}

/// `m₀ = α − β − ½`, `mₖ = ½ − (γ, δ, ε)`.
pub fn heun_to_darboux_params(p: &HeunParams) -> DarbouxParams {
    DarbouxParams::new([
        p.alpha - p.beta - 0.5,
        c64(0.5, 0.0) - p.gamma,
        c64(0.5, 0.0) - p.delta,
        c64(0.5, 0.0) - p.epsilon,
    ])
}

/// For `γ = δ = ε = ½` (Lamé): `B′ = B + 4αβ·℘₀` where `℘₀ = −(1+a)/3` is
/// the branch value over `x = 0`. `None` outside the Lamé family.
pub fn lame_darboux_accessory(p: &HeunParams, d: &EllipticData) -> Option<C64> {
    let half = c64(0.5, 0.0);
    let lame = [p.gamma, p.delta, p.epsilon].iter().all(|g| (*g - half).norm() < 1e-12);
    lame.then(|| p.accessory + p.alpha * p.beta * 4.0 * d.roots[0])
}

/// Inverse of [`lame_darboux_accessory`]: Heun `B` from Darboux `B′`.
pub fn lame_heun_accessory(b1: C64, p: &HeunParams, d: &EllipticData) -> C64 {
    b1 - p.alpha * p.beta * 4.0 * d.roots[0]
}

/// The bracket `η₁ω̄₂ − η₂ω̄₁ + πi·ℓ₀/ℓ̄₀`.
fn correction_bracket(l0: C64, d: &EllipticData) -> C64 {
    d.eta1 * d.omega2.conj() - d.eta2 * d.omega1.conj() + c64(0.0, PI) * l0 / l0.conj()
}

/// `B′ ≈ ℓ₀² − (2/(iΔ))·Σmᵢ(mᵢ+1)·(η₁ω̄₂ − η₂ω̄₁ + πi·ℓ₀/ℓ̄₀)`.
pub fn asymptotic_accessory(l0: C64, m: &DarbouxParams, d: &EllipticData) -> Result<C64> {
    if l0.norm() == 0.0 {
        return Err(Error::ZeroLatticePoint);
    }
    let k = c64(2.0, 0.0) / c64(0.0, d.area);
    Ok(l0 * l0 - k * m.coupling_sum() * correction_bracket(l0, d))
}

/// `√B′ ≈ ℓ₀ − (1/(iΔℓ₀))·Σmᵢ(mᵢ+1)·(η₁ω̄₂ − η₂ω̄₁ + πi·ℓ₀/ℓ̄₀)`.
pub fn asymptotic_sqrt_accessory(l0: C64, m: &DarbouxParams, d: &EllipticData) -> Result<C64> {
    if l0.norm() == 0.0 {
        return Err(Error::ZeroLatticePoint);
    }
    let k = c64(1.0, 0.0) / (c64(0.0, d.area) * l0);
    Ok(l0 - k * m.coupling_sum() * correction_bracket(l0, d))
}

/// Points `(2π/Δ)·(m·ω̄₁ − n·ω̄₂)` of the conjugate lattice. The basis
/// `(ω̄₁, −ω̄₂)` is positively oriented, so at `a = −1` the point `(m, n)` is
/// `1.198·(m + n·i)`.
pub fn seed_lattice(d: &EllipticData, indices: &[(i64, i64)]) -> Vec<C64> {
    let k = 2.0 * PI / d.area;
    indices
        .iter()
        .map(|&(m, n)| (d.omega1.conj() * m as f64 - d.omega2.conj() * n as f64) * k)
        .collect()
}

/// Nearest seed-lattice point to `w` (searched over a window around it).
pub fn nearest_lattice_point(w: C64, d: &EllipticData) -> (i64, i64, C64) {
    let k = 2.0 * PI / d.area;
    let b1 = d.omega1.conj() * k;
    let b2 = -d.omega2.conj() * k;
    // coordinates of w in the (b1, b2) basis
    let det = (b1.conj() * b2).im;
    let x = (w.conj() * b2).im / det;
    let y = (b1.conj() * w).im / det;
    let (m0, n0) = (x.round() as i64, y.round() as i64);
    let mut best = (m0, n0, b1 * m0 as f64 + b2 * n0 as f64);
    for m in m0 - 2..=m0 + 2 {
        for n in n0 - 2..=n0 + 2 {
            let p = b1 * m as f64 + b2 * n as f64;
            if (p - w).norm() < (best.2 - w).norm() {
                best = (m, n, p);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lemniscatic() -> EllipticData {
        periods_from_a(c64(-1.0, 0.0)).unwrap()
    }

    #[test]
    fn agm_real_values() {
        let m = agm(c64(1.0, 0.0), c64(2f64.sqrt(), 0.0)).unwrap();
        // Gauss's constant is 1/M(1, √2)
        assert!((m.re - 1.198_140_234_735_592_2).abs() < 1e-14);
        assert!(m.im.abs() < 1e-15);
    }

    #[test]
    fn square_lattice_at_minus_one() {
        let d = lemniscatic();
        assert!((d.omega1.re - 1.311_028_777_146_059_9).abs() < 1e-12);
        assert!(d.omega1.im.abs() < 1e-14);
        assert!((d.omega2 - d.omega1 * c64(0.0, 1.0)).norm() < 1e-12);
        assert!((d.lattice_spacing() - 1.198).abs() < 1e-3);
        assert!(d.legendre_residual().norm() < 1e-12);
        assert!((d.e1 + d.e2 + d.e3).norm() < 1e-15);
    }

    #[test]
    fn branch_values_at_half_periods() {
        for a in [c64(-1.0, 0.0), c64(2.5, 0.7), c64(0.3, -0.4), c64(-4.0, 2.0)] {
            let d = periods_from_a(a).unwrap();
            for i in 1..=3 {
                assert!((wp(d.omega(i), &d).unwrap() - d.e(i)).norm() < 1e-9, "a={a} i={i}");
            }
            for k in 0..3 {
                let v = wp(d.pole_half_period(k), &d).unwrap();
                assert!((v - d.roots[k]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn laurent_leading_term() {
        let d = periods_from_a(c64(0.4, 1.1)).unwrap();
        let z = c64(1e-3, 0.0);
        let diff = wp(z, &d).unwrap() - (z * z).inv();
        assert!(diff.norm() < 1e-2);
        let zd = wzeta(z, &d).unwrap() - z.inv();
        assert!(zd.norm() < 1e-5);
    }

    #[test]
    fn zeta_quasi_periodicity() {
        let d = periods_from_a(c64(2.0, 1.0)).unwrap();
        let z = c64(0.31, 0.17);
        let s1 = wzeta(z + d.omega1 * 2.0, &d).unwrap() - wzeta(z, &d).unwrap();
        let s2 = wzeta(z + d.omega2 * 2.0, &d).unwrap() - wzeta(z, &d).unwrap();
        assert!((s1 - d.eta1 * 2.0).norm() < 1e-10);
        assert!((s2 - d.eta2 * 2.0).norm() < 1e-10);
    }

    #[test]
    fn lame_darboux_exponents() {
        let p = HeunParams::lame(c64(-1.0, 0.0));
        let m = heun_to_darboux_params(&p);
        assert_eq!(m.m, [c64(-0.5, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        assert_eq!(m.coupling_sum(), c64(-0.25, 0.0));
        assert!(m.unitarity_admissible());
        let d = lemniscatic();
        let b = c64(3.0, -1.0);
        assert_eq!(lame_darboux_accessory(&p.with_accessory(b), &d), Some(b));
    }

    #[test]
    fn admissibility() {
        let bad = DarbouxParams::new([c64(0.3, 0.2), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        assert!(!bad.unitarity_admissible());
        let ok = DarbouxParams::new([c64(0.5, 0.2), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        assert!(ok.unitarity_admissible());
    }

    #[test]
    fn asymptotics_trivial_coupling() {
        let d = lemniscatic();
        let m = DarbouxParams::new([c64(0.0, 0.0), c64(-1.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)]);
        let l0 = c64(2.0, 1.5);
        assert_eq!(asymptotic_accessory(l0, &m, &d).unwrap(), l0 * l0);
        assert_eq!(asymptotic_accessory(c64(0.0, 0.0), &m, &d), Err(Error::ZeroLatticePoint));
    }

    #[test]
    fn seed_lattice_layout() {
        let d = lemniscatic();
        let pts = seed_lattice(&d, &[(1, 0), (0, 0), (2, 0), (0, 1)]);
        assert!((pts[0].re - 1.198).abs() < 1e-3 && pts[0].im.abs() < 1e-12);
        assert_eq!(pts[1], c64(0.0, 0.0));
        assert!((pts[2] / pts[0] - 2.0).norm() < 1e-15);
        assert!((pts[3] - c64(0.0, pts[0].re)).norm() < 1e-12);
        let (m, n, _) = nearest_lattice_point(c64(2.3, -1.1), &d);
        assert_eq!((m, n), (2, -1));
    }
}
