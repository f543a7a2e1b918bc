//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use unimon::unitarity::GroupCase;
use unimon::{c64, Mat2, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

pub fn complex(rng: &mut ChaCha8Rng) -> C64 {
    c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random conjugator with `|det| ≥ 0.3` and entries in the unit square.
pub fn conjugator(rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let t = Mat2::new(complex(rng), complex(rng), complex(rng), complex(rng));
        if t.det().norm() >= 0.3 {
            return t;
        }
    }
}

fn su2(rng: &mut ChaCha8Rng) -> Mat2 {
    let v: [f64; 4] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (c64(v[0], v[1]) / n, c64(v[2], v[3]) / n);
    Mat2::new(a, -b.conj(), b, a.conj())
}

fn sl2r(rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let mut m = [0.0f64; 4];
        for x in &mut m {
            *x = rng.gen_range(-2.0..2.0);
        }
        let det = m[0] * m[3] - m[1] * m[2];
        if det.abs() < 0.2 {
            continue;
        }
        if det < 0.0 {
            m[0] = -m[0];
            m[1] = -m[1];
        }
        let s = det.abs().sqrt();
        return Mat2::from_real([[m[0] / s, m[1] / s], [m[2] / s, m[3] / s]]);
    }
}

fn rotation(rng: &mut ChaCha8Rng) -> Mat2 {
    let t: f64 = rng.gen_range(0.1..2.0 * PI - 0.1);
    Mat2::from_real([[t.cos(), -t.sin()], [t.sin(), t.cos()]])
}

fn real_upper(rng: &mut ChaCha8Rng) -> Mat2 {
    let mut a: f64 = rng.gen_range(0.5..2.0);
    if rng.gen_bool(0.5) {
        a = -a;
    }
    Mat2::from_real([[a, rng.gen_range(-2.0..2.0)], [0.0, 1.0 / a]])
}

/// The unitary models of the classification theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Su2,
    Sl2R,
    So2,
    RealUpper,
    Scalar,
}

impl Model {
    pub const ALL: [Model; 5] = [Model::Su2, Model::Sl2R, Model::So2, Model::RealUpper, Model::Scalar];

    pub fn expected(self) -> (GroupCase, usize) {
        match self {
            Model::Su2 | Model::Sl2R => (GroupCase::Irreducible, 4),
            Model::So2 => (GroupCase::AbelianReducible, 2),
            Model::RealUpper => (GroupCase::NonabelianReducible, 3),
            Model::Scalar => (GroupCase::Scalar, 1),
        }
    }
}

/// 2 or 3 generators from `model`, each multiplied by a random unit phase
/// and conjugated by one random matrix.
pub fn model_set(model: Model, rng: &mut ChaCha8Rng) -> Vec<Mat2> {
    let n = rng.gen_range(2..=3);
    let t = conjugator(rng);
    let tinv = t.inverse().unwrap();
    (0..n)
        .map(|_| {
            let g = match model {
                Model::Su2 => su2(rng),
                Model::Sl2R => sl2r(rng),
                Model::So2 => rotation(rng),
                Model::RealUpper => real_upper(rng),
                Model::Scalar => Mat2::identity(),
            };
            tinv * g.scale(unit(rng)) * t
        })
        .collect()
}

/// 2 or 3 generic complex matrices.
pub fn generic_set(rng: &mut ChaCha8Rng) -> Vec<Mat2> {
    let n = rng.gen_range(2..=3);
    (0..n)
        .map(|_| loop {
            let g = Mat2::new(complex(rng), complex(rng), complex(rng), complex(rng));
            if g.det().norm() > 0.05 {
                break g;
            }
        })
        .collect()
}

/// Whether some word of length ≤ 2 in the rescaled generators has a trace
/// with imaginary part above `tol`.
pub fn has_nonreal_short_trace(gens: &[Mat2], tol: f64) -> bool {
    let r: Vec<Mat2> = gens.iter().map(|g| g.scale(g.det().sqrt().inv())).collect();
    let mut words: Vec<Mat2> = r.clone();
    for a in &r {
        for b in &r {
            words.push(*a * *b);
        }
    }
    words.iter().any(|w| w.trace().im.abs() > tol)
}

/// Random `a` with `0.1 < |a| < 10` and `|a − 1| > 0.1`.
pub fn random_a(rng: &mut ChaCha8Rng) -> C64 {
    loop {
        let r = 10f64.powf(rng.gen_range(-1.0..1.0));
        let a = C64::from_polar(r, rng.gen_range(0.0..2.0 * PI));
        if (a - 1.0).norm() > 0.1 && r > 0.1 {
            return a;
        }
    }
}

/// `∫ dx/√(4x(x−1)(x−a))` along the straight segment from root `from` to
/// root `to`, with `other` the remaining root. The substitution
/// `x = from + (to − from)·sin²φ` removes both endpoint singularities and
/// leaves `∫₀^{π/2} dφ/√(other − x)`, evaluated by composite Simpson with
/// the square root continued along the path.
pub fn period_by_quadrature(from: C64, to: C64, other: C64) -> C64 {
    let n = 20_000;
    let h = (PI / 2.0) / n as f64;
    let mut prev: Option<C64> = None;
    let mut sum = c64(0.0, 0.0);
    for k in 0..=n {
        let phi = k as f64 * h;
        let s = phi.sin();
        let x = from + (to - from) * (s * s);
        let mut r = (other - x).sqrt();
        if let Some(p) = prev {
            if (r - p).norm() > (r + p).norm() {
                r = -r;
            }
        }
        prev = Some(r);
        let w = if k == 0 || k == n {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += r.inv() * w;
    }
    sum * (h / 3.0)
}

/// Largest distance from `omega` to the lattice `ℤ·u + ℤ·v`, measured after
/// solving `omega = p·u + q·v` over the reals and rounding `(p, q)`.
pub fn lattice_membership_error(omega: C64, u: C64, v: C64) -> (f64, (f64, f64)) {
    let det = u.re * v.im - u.im * v.re;
    let p = (omega.re * v.im - omega.im * v.re) / det;
    let q = (u.re * omega.im - u.im * omega.re) / det;
    let (pr, qr) = (p.round(), q.round());
    ((omega - u * pr - v * qr).norm(), (pr, qr))
}

fn distance_to_segment(p: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let t = (((p - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Two half-periods generating the lattice of `(℘′)² = 4x(x−1)(x−a)`, by
/// quadrature along the two root-to-root segments whose opposite root is
/// farthest away (relative to segment length).
pub fn quadrature_half_periods(a: C64) -> (C64, C64) {
    let roots = [c64(0.0, 0.0), c64(1.0, 0.0), a];
    let mut pairs: Vec<(f64, usize, usize, usize)> = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
        .iter()
        .map(|&(i, j, k)| {
            let len = (roots[j] - roots[i]).norm();
            (distance_to_segment(roots[k], roots[i], roots[j]) / len, i, j, k)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let w = |(_, i, j, k): (f64, usize, usize, usize)| period_by_quadrature(roots[i], roots[j], roots[k]);
    (w(pairs[0]), w(pairs[1]))
}
