//! ℘, ℘′ and ζ from the q-expansions in the nome `q = e^{iπτ}`.

use crate::error::{Error, Result};
use crate::{c64, C64};

use std::f64::consts::PI;

/// The series stop once `|q|^{2n}` drops below this. Inside the reduced cell
/// the trigonometric factors grow like `|q|^{-n}`, so the surviving terms are
/// of size `√SERIES_EPS`.
const SERIES_EPS: f64 = 1e-36;
const MAX_TERMS: usize = 200;

/// Complex arithmetic-geometric mean with the "optimal" branch: at each
/// step `√(ab)` takes the sign making `|a' − b'| ≤ |a' + b'|`.
pub fn agm(mut a: C64, mut b: C64) -> Result<C64> {
    for _ in 0..64 {
        if (a - b).norm() <= 1e-15 * a.norm().max(b.norm()) {
            return Ok(a);
        }
        let a1 = (a + b) * 0.5;
        let mut b1 = (a * b).sqrt();
        if (a1 - b1).norm() > (a1 + b1).norm() {
            b1 = -b1;
        }
        a = a1;
        b = b1;
    }
    if (a - b).norm() <= 1e-13 * a.norm().max(b.norm()) {
        Ok(a)
    } else {
        Err(Error::AgmNonConvergence)
    }
}

/// Lattice `2ω₁ℤ + 2ω₂ℤ` with precomputed q-series coefficients.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Series {
    pub omega1: C64,
    pub omega2: C64,
    pub tau: C64,
    /// `c_n = q^{2n}/(1 − q^{2n})` for `n ≥ 1`.
    coeffs: Vec<C64>,
    pub eta1: C64,
}

impl Series {
    pub fn new(omega1: C64, omega2: C64) -> Self {
        let tau = omega2 / omega1;
        let q = (c64(0.0, PI) * tau).exp();
        let q2 = q * q;
        let mut coeffs = Vec::new();
        let mut qn = q2;
        for _ in 0..MAX_TERMS {
            coeffs.push(qn / (c64(1.0, 0.0) - qn));
            if qn.norm() < SERIES_EPS {
                break;
            }
            qn *= q2;
        }
        let s: C64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| *c * (k as f64 + 1.0))
            .sum();
        let eta1 = (c64(1.0, 0.0) - s * 24.0) * (PI * PI / 12.0) / omega1;
        Series { omega1, omega2, tau, coeffs, eta1 }
    }

    /// `(m, n)` with `z − 2mω₁ − 2nω₂` in the cell centered at 0.
    pub fn cell_offset(&self, z: C64) -> (f64, f64) {
        let w = z / (self.omega1 * 2.0);
        let t = w.im / self.tau.im;
        let s = w.re - t * self.tau.re;
        (s.round(), t.round())
    }

    pub fn reduce(&self, z: C64) -> (C64, f64, f64) {
        let (m, n) = self.cell_offset(z);
        (z - self.omega1 * (2.0 * m) - self.omega2 * (2.0 * n), m, n)
    }

    fn u(&self, z: C64) -> C64 {
        z * (PI / 2.0) / self.omega1
    }

    fn guard(&self, z: C64) -> Result<()> {
        if z.norm() <= 1e-8 * self.omega1.norm().max(1.0) {
            return Err(Error::LatticeProximity(z));
        }
        Ok(())
    }

    /// ζ without reduction; accurate in and near the central cell.
    pub fn zeta_raw(&self, z: C64) -> Result<C64> {
        self.guard(z)?;
        let u = self.u(z);
        let k = PI / (2.0 * self.omega1);
        let mut sum = c64(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            let n = (j + 1) as f64;
            sum += *c * (u * (2.0 * n)).sin();
        }
        Ok(self.eta1 * z / self.omega1 + k * u.cos() / u.sin() + sum * (2.0 * PI) / self.omega1)
    }

    pub fn wp_reduced(&self, z: C64) -> Result<C64> {
        self.guard(z)?;
        let u = self.u(z);
        let k = PI / (2.0 * self.omega1);
        let s = u.sin();
        let mut sum = c64(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            let n = (j + 1) as f64;
            sum += *c * n * (u * (2.0 * n)).cos();
        }
        Ok(-self.eta1 / self.omega1 + k * k / (s * s)
            - sum * (2.0 * PI * PI) / (self.omega1 * self.omega1))
    }

    pub fn wp_prime_reduced(&self, z: C64) -> Result<C64> {
        self.guard(z)?;
        let u = self.u(z);
        let k = PI / (2.0 * self.omega1);
        let s = u.sin();
        let mut sum = c64(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            let n = (j + 1) as f64;
            sum += *c * (n * n) * (u * (2.0 * n)).sin();
        }
        Ok(-(k * k * k) * 2.0 * u.cos() / (s * s * s)
            + sum * (2.0 * PI * PI * PI) / (self.omega1 * self.omega1 * self.omega1))
    }
}
