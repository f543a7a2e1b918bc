//! Monodromy of Heun's equation by numerical analytic continuation.
//!
//! Solutions are carried along a closed path as a fundamental matrix `Φ`
//! whose columns are `(y, y')` of two basis solutions, starting from
//! `Φ(base) = I`. The monodromy of the loop is `M = Φ(end)`: it maps initial
//! data at the base point to the data of the continued solution. With this
//! convention, traversing loop `A` and then loop `B` gives `M_B·M_A`.
//! Downstream code only consumes traces, determinants and conjugation
//! invariants, which do not depend on this choice.

mod contour;

pub use contour::{standard_contour, Contour, Segment, CLEARANCE};

use serde::Serialize;

use crate::elliptic::{wp, EllipticData};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::{c64, C64};

/// `z` closer than this to a finite singularity is rejected by the rhs.
pub const POLE_GUARD: f64 = 1e-6;

/// Parameters of
/// `y'' + (γ/x + δ/(x−1) + ε/(x−a))y' + (αβx − B/4)/(x(x−1)(x−a))·y = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeunParams {
    pub gamma: C64,
    pub delta: C64,
    pub epsilon: C64,
    pub alpha: C64,
    pub beta: C64,
    pub a: C64,
    /// The accessory parameter `B`.
    pub accessory: C64,
}

impl HeunParams {
    pub fn new(
        gamma: C64,
        delta: C64,
        epsilon: C64,
        alpha: C64,
        beta: C64,
        a: C64,
        accessory: C64,
    ) -> Result<Self> {
        let p = HeunParams { gamma, delta, epsilon, alpha, beta, a, accessory };
        p.validate()?;
        Ok(p)
    }

    /// Real exponents with `a`, `B` given.
    pub fn real(gamma: f64, delta: f64, epsilon: f64, alpha: f64, beta: f64, a: C64, b: C64) -> Result<Self> {
        let r = |x: f64| c64(x, 0.0);
        HeunParams::new(r(gamma), r(delta), r(epsilon), r(alpha), r(beta), a, b)
    }

    /// Lamé case `γ = δ = ε = 1/2`, `α = β = 1/4`, with `B = 0`.
    pub fn lame(a: C64) -> Self {
        let h = c64(0.5, 0.0);
        let q = c64(0.25, 0.0);
        HeunParams { gamma: h, delta: h, epsilon: h, alpha: q, beta: q, a, accessory: c64(0.0, 0.0) }
    }

    /// `y'' + (γ/z)y' = 0` written as a Heun equation: `δ = ε = 0`,
    /// `α = γ − 1`, `β = 0`, `B = 0`.
    pub fn cauchy_euler(gamma: f64, a: C64) -> Self {
        let z = c64(0.0, 0.0);
        HeunParams {
            gamma: c64(gamma, 0.0),
            delta: z,
            epsilon: z,
            alpha: c64(gamma - 1.0, 0.0),
            beta: z,
            a,
            accessory: z,
        }
    }

    pub fn with_accessory(mut self, b: C64) -> Self {
        self.accessory = b;
        self
    }

    /// Fuchs relation, finiteness, and `a ∉ {0, 1}`.
    pub fn validate(&self) -> Result<()> {
        let all = [self.gamma, self.delta, self.epsilon, self.alpha, self.beta, self.a, self.accessory];
        if all.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        let fuchs = self.gamma + self.delta + self.epsilon - self.alpha - self.beta - 1.0;
        if fuchs.norm() >= 1e-10 {
            return Err(Error::InvalidParams(format!(
                "Fuchs relation violated: gamma+delta+epsilon-(1+alpha+beta) = {fuchs}"
            )));
        }
        if self.a.norm() < 1e-12 || (self.a - 1.0).norm() < 1e-12 {
            return Err(Error::InvalidParams(format!("a = {} collides with 0 or 1", self.a)));
        }
        Ok(())
    }

    /// The finite singular points `[0, 1, a]`.
    pub fn singularities(&self) -> [C64; 3] {
        [c64(0.0, 0.0), c64(1.0, 0.0), self.a]
    }
}

/// A linear equation `y'' + p(z)y' + q(z)y = 0`.
pub trait LinearOde {
    /// `(p(z), q(z))`.
    fn coefficients(&self, z: C64) -> Result<(C64, C64)>;
}

impl LinearOde for HeunParams {
    fn coefficients(&self, z: C64) -> Result<(C64, C64)> {
        for pole in self.singularities() {
            let distance = (z - pole).norm();
            if distance <= POLE_GUARD {
                return Err(Error::PoleProximity { z, pole, distance });
            }
        }
        let z1 = z - 1.0;
        let za = z - self.a;
        let p = self.gamma / z + self.delta / z1 + self.epsilon / za;
        let q = (self.alpha * self.beta * z - self.accessory * 0.25) / (z * z1 * za);
        Ok((p, q))
    }
}

/// `(y', y'')` for the Heun equation at `z`.
pub fn heun_rhs(z: C64, state: [C64; 2], params: &HeunParams) -> Result<[C64; 2]> {
    let (p, q) = params.coefficients(z)?;
    Ok([state[1], -p * state[1] - q * state[0]])
}

/// Integration settings shared by all three loops.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegratorConfig {
    /// Target `|dz|` per RK4 step.
    pub step: f64,
    /// Radius of the circle about each singular point.
    pub radius: f64,
    /// Common base point of the loops.
    pub base: C64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { step: 4e-4, radius: 0.2, base: c64(0.0, 1.0) }
    }
}

/// Largest number of RK4 steps a single segment may take.
const MAX_STEPS_PER_SEGMENT: f64 = 1e8;

/// Carries the fundamental matrix along `contour` with classical RK4 at a
/// fixed arc-length step and returns `Φ(end)`.
pub fn transport<O: LinearOde + ?Sized>(contour: &Contour, ode: &O) -> Result<Mat2> {
    let step = contour.step;
    if !(step.is_finite() && step > 1e-12) {
        return Err(Error::StepUnderflow(step));
    }
    let mut phi = Mat2::identity();
    for seg in &contour.segments {
        let len = seg.length();
        let n = (len / step).ceil().max(1.0);
        if n > MAX_STEPS_PER_SEGMENT {
            return Err(Error::StepUnderflow(step));
        }
        let n = n as usize;
        let dt = 1.0 / n as f64;
        let field = |t: f64, y: &Mat2| -> Result<Mat2> {
            let z = seg.point(t);
            let (p, q) = ode.coefficients(z)?;
            let dz = seg.tangent(t);
            // dΦ/dt = [[0, 1], [−q, −p]]·Φ·dz/dt
            let a = Mat2::new(c64(0.0, 0.0), dz, -q * dz, -p * dz);
            Ok(a * *y)
        };
        for k in 0..n {
            let t = k as f64 * dt;
            let k1 = field(t, &phi)?;
            let k2 = field(t + 0.5 * dt, &(phi + k1 * (0.5 * dt)))?;
            let k3 = field(t + 0.5 * dt, &(phi + k2 * (0.5 * dt)))?;
            let k4 = field(t + dt, &(phi + k3 * dt))?;
            phi = phi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        }
    }
    Ok(phi)
}

/// Monodromy about `0`, `1`, `a` and the unimodular rescalings
/// `P₀ = e^{πiγ}P`, `Q₀ = e^{πiδ}Q`, `R₀ = e^{πiε}R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonodromyTriple {
    pub p: Mat2,
    pub q: Mat2,
    pub r: Mat2,
    pub p0: Mat2,
    pub q0: Mat2,
    pub r0: Mat2,
    pub base: C64,
}

impl MonodromyTriple {
    /// Monodromy of the loop that goes around `0`, then `1`, then `a`.
    pub fn pqr(&self) -> Mat2 {
        self.r * self.q * self.p
    }

    /// `tr(PQR)/√det(PQR)`, taking the square root `e^{−πi(α+β)}·(±1)`
    /// nearest to `e^{−πi(α+β)}`; equals `2cos(π(α−β))` for exact monodromy.
    pub fn infinity_trace_ratio(&self, params: &HeunParams) -> C64 {
        let m = self.pqr();
        let mut s = m.det().sqrt();
        let reference = (-(params.alpha + params.beta) * c64(0.0, std::f64::consts::PI)).exp();
        if (s - reference).norm() > (s + reference).norm() {
            s = -s;
        }
        m.trace() / s
    }

    pub fn t_pq(&self) -> C64 {
        (self.p0 * self.q0).trace()
    }

    pub fn t_qr(&self) -> C64 {
        (self.q0 * self.r0).trace()
    }

    pub fn t_pr(&self) -> C64 {
        (self.p0 * self.r0).trace()
    }

    /// Distance of each loop's eigenvalues from `{1, e^{−2πiθ}}` for
    /// `θ = γ, δ, ε`.
    pub fn exponent_residuals(&self, params: &HeunParams) -> [f64; 3] {
        [
            eigen_residual(&self.p, params.gamma),
            eigen_residual(&self.q, params.delta),
            eigen_residual(&self.r, params.epsilon),
        ]
    }

    /// `|det P₀ − 1|`, `|det Q₀ − 1|`, `|det R₀ − 1|`.
    pub fn det_residuals(&self) -> [f64; 3] {
        [
            (self.p0.det() - 1.0).norm(),
            (self.q0.det() - 1.0).norm(),
            (self.r0.det() - 1.0).norm(),
        ]
    }
}

/// Best matching distance of the eigenvalues of `m` to `{1, e^{−2πiθ}}`.
pub fn eigen_residual(m: &Mat2, theta: C64) -> f64 {
    let e = m.eigen();
    let target = (-theta * c64(0.0, 2.0 * std::f64::consts::PI)).exp();
    let one = c64(1.0, 0.0);
    let straight = (e.lambda1 - one).norm().max((e.lambda2 - target).norm());
    let swapped = (e.lambda1 - target).norm().max((e.lambda2 - one).norm());
    straight.min(swapped)
}

/// Exponent-check tolerance on loop eigenvalues.
pub const EXPONENT_TOL: f64 = 1e-4;
/// Determinant tolerance on the rescaled matrices.
pub const DET_TOL: f64 = 1e-6;

/// The three standard loops for `params` under `cfg`.
pub fn standard_contours(params: &HeunParams, cfg: &IntegratorConfig) -> Result<[Contour; 3]> {
    let s = params.singularities();
    let make = |k: usize| {
        let others: Vec<C64> = (0..3).filter(|&j| j != k).map(|j| s[j]).collect();
        standard_contour(s[k], cfg.base, cfg.radius, cfg.step, &others)
    };
    Ok([make(0)?, make(1)?, make(2)?])
}

/// Integrates the three loops without checking local exponents.
pub fn compute_triple(params: &HeunParams, cfg: &IntegratorConfig) -> Result<MonodromyTriple> {
    params.validate()?;
    let [c0, c1, c2] = standard_contours(params, cfg)?;
    let p = transport(&c0, params)?;
    let q = transport(&c1, params)?;
    let r = transport(&c2, params)?;
    Ok(rescaled_triple(p, q, r, params, cfg.base))
}

fn rescaled_triple(p: Mat2, q: Mat2, r: Mat2, params: &HeunParams, base: C64) -> MonodromyTriple {
    let phase = |x: C64| (x * c64(0.0, std::f64::consts::PI)).exp();
    MonodromyTriple {
        p,
        q,
        r,
        p0: p.scale(phase(params.gamma)),
        q0: q.scale(phase(params.delta)),
        r0: r.scale(phase(params.epsilon)),
        base,
    }
}

fn validate_triple(t: &MonodromyTriple, params: &HeunParams) -> Result<()> {
    const NAMES: [&str; 3] = ["P", "Q", "R"];
    if [t.p, t.q, t.r].iter().any(|m| !m.is_finite()) {
        return Err(Error::ExponentValidation { loop_name: "PQR", residual: f64::INFINITY });
    }
    for (k, d) in t.det_residuals().into_iter().enumerate() {
        if !(d <= DET_TOL) {
            return Err(Error::ExponentValidation { loop_name: NAMES[k], residual: d });
        }
    }
    for (k, e) in t.exponent_residuals(params).into_iter().enumerate() {
        if !(e <= EXPONENT_TOL) {
            return Err(Error::ExponentValidation { loop_name: NAMES[k], residual: e });
        }
    }
    Ok(())
}

/// [`compute_triple`] followed by the determinant and local-exponent checks;
/// a failure signals inaccurate integration.
pub fn monodromy_triple(params: &HeunParams, cfg: &IntegratorConfig) -> Result<MonodromyTriple> {
    let t = compute_triple(params, cfg)?;
    validate_triple(&t, params)?;
    Ok(t)
}

/// Coefficients of one loop sampled at every RK4 stage, for fixed exponents
/// and `a`. Heun's `q` is affine in `B`, so `q·dz = q₀ + B·q₁` per node.
#[derive(Clone, Debug)]
struct LoopTable {
    /// Per segment: parameter step and nodes at `t_k` and `t_k + dt/2`.
    segments: Vec<(f64, Vec<Node>)>,
}

#[derive(Clone, Copy, Debug)]
struct Node {
    dz: C64,
    p_dz: C64,
    q0_dz: C64,
    q1_dz: C64,
}

impl LoopTable {
    fn new(contour: &Contour, params: &HeunParams) -> Result<Self> {
        let step = contour.step;
        if !(step.is_finite() && step > 1e-12) {
            return Err(Error::StepUnderflow(step));
        }
        let mut segments = Vec::with_capacity(contour.segments.len());
        for seg in &contour.segments {
            let n = (seg.length() / step).ceil().max(1.0);
            if n > MAX_STEPS_PER_SEGMENT {
                return Err(Error::StepUnderflow(step));
            }
            let n = n as usize;
            let dt = 1.0 / n as f64;
            let mut nodes = Vec::with_capacity(2 * n + 1);
            for j in 0..=2 * n {
                let t = j as f64 * 0.5 * dt;
                let z = seg.point(t);
                let dz = seg.tangent(t);
                // probe the pole guard through the generic coefficient path
                params.coefficients(z)?;
                let z1 = z - 1.0;
                let za = z - params.a;
                let p = params.gamma / z + params.delta / z1 + params.epsilon / za;
                let inv = (z * z1 * za).inv();
                nodes.push(Node {
                    dz,
                    p_dz: p * dz,
                    q0_dz: params.alpha * params.beta * z * inv * dz,
                    q1_dz: -inv * dz * 0.25,
                });
            }
            segments.push((dt, nodes));
        }
        Ok(LoopTable { segments })
    }

    fn transport(&self, b: C64) -> Mat2 {
        let field = |nd: &Node, y: &Mat2| -> Mat2 {
            let q_dz = nd.q0_dz + b * nd.q1_dz;
            Mat2::new(
                nd.dz * y.a21,
                nd.dz * y.a22,
                -q_dz * y.a11 - nd.p_dz * y.a21,
                -q_dz * y.a12 - nd.p_dz * y.a22,
            )
        };
        let mut phi = Mat2::identity();
        for (dt, nodes) in &self.segments {
            let dt = *dt;
            let n = (nodes.len() - 1) / 2;
            for k in 0..n {
                let (n0, nh, n1) = (&nodes[2 * k], &nodes[2 * k + 1], &nodes[2 * k + 2]);
                let k1 = field(n0, &phi);
                let k2 = field(nh, &(phi + k1 * (0.5 * dt)));
                let k3 = field(nh, &(phi + k2 * (0.5 * dt)));
                let k4 = field(n1, &(phi + k3 * dt));
                phi = phi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
            }
        }
        phi
    }
}

/// The three standard loops with their coefficients precomputed, so that
/// repeated evaluations at different `B` (Newton iterations, maps) skip
/// the rational-function work. Produces the same RK4 scheme as
/// [`compute_triple`].
#[derive(Clone, Debug)]
pub struct PreparedHeun {
    params: HeunParams,
    cfg: IntegratorConfig,
    loops: [LoopTable; 3],
}

impl PreparedHeun {
    pub fn new(params: &HeunParams, cfg: &IntegratorConfig) -> Result<Self> {
        params.validate()?;
        let [c0, c1, c2] = standard_contours(params, cfg)?;
        Ok(PreparedHeun {
            params: *params,
            cfg: *cfg,
            loops: [
                LoopTable::new(&c0, params)?,
                LoopTable::new(&c1, params)?,
                LoopTable::new(&c2, params)?,
            ],
        })
    }

    pub fn params(&self) -> &HeunParams {
        &self.params
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.cfg
    }

    /// Unchecked triple at accessory parameter `b`.
    pub fn compute(&self, b: C64) -> Result<MonodromyTriple> {
        if !(b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::InvalidParams(format!("accessory parameter {b} is not finite")));
        }
        let p = self.loops[0].transport(b);
        let q = self.loops[1].transport(b);
        let r = self.loops[2].transport(b);
        Ok(rescaled_triple(p, q, r, &self.params, self.cfg.base))
    }

    /// Triple at `b` with the determinant and local-exponent checks.
    pub fn triple(&self, b: C64) -> Result<MonodromyTriple> {
        let t = self.compute(b)?;
        validate_triple(&t, &self.params.with_accessory(b))?;
        Ok(t)
    }
}

/// Closest approach to the poles of the Darboux potential accepted by
/// [`darboux_rhs`].
pub const LATTICE_GUARD: f64 = 1e-8;

/// `(u', u'')` for `u'' = (Σ mᵢ(mᵢ+1)℘(z − ωᵢ) + B′)u` with `ω₀ = 0` and
/// `ω₁, ω₂, ω₃` the half-periods attached to the singular points `0, 1, a`.
pub fn darboux_rhs(z: C64, state: [C64; 2], m: &[C64; 4], b1: C64, ell: &EllipticData) -> Result<[C64; 2]> {
    let v = darboux_potential(z, m, ell)?;
    Ok([state[1], (v + b1) * state[0]])
}

/// `Σ mᵢ(mᵢ+1)℘(z − ωᵢ)`, skipping terms with vanishing coefficient.
pub fn darboux_potential(z: C64, m: &[C64; 4], ell: &EllipticData) -> Result<C64> {
    let shifts = [c64(0.0, 0.0), ell.pole_half_period(0), ell.pole_half_period(1), ell.pole_half_period(2)];
    let mut v = c64(0.0, 0.0);
    for (mi, w) in m.iter().zip(shifts) {
        let coef = *mi * (*mi + 1.0);
        if coef.norm() == 0.0 {
            continue;
        }
        v += coef * wp(z - w, ell)?;
    }
    Ok(v)
}

/// The Darboux equation as a [`LinearOde`] (`p = 0`).
#[derive(Clone, Debug)]
pub struct DarbouxOde<'a> {
    pub m: [C64; 4],
    pub b1: C64,
    pub elliptic: &'a EllipticData,
}

impl LinearOde for DarbouxOde<'_> {
    fn coefficients(&self, z: C64) -> Result<(C64, C64)> {
        let v = darboux_potential(z, &self.m, self.elliptic)?;
        Ok((c64(0.0, 0.0), -(v + self.b1)))
    }
}
