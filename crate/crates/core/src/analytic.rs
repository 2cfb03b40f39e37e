//! Smooth approximations to the spectral density.
//!
//! Momentum integrals use `g(φ) = √(1 - 2λ cos φ + λ²)` (half the
//! one-particle energy) over `[0, π]`, which is half the period by symmetry.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::curve::{Abscissa, DensityCurve, Grid};
use crate::error::{Error, Result};
use crate::params::IsingParams;
use crate::quadrature::integrate;

fn half_energy(lambda: f64, phi: f64) -> f64 {
    (1.0 - 2.0 * lambda * phi.cos() + lambda * lambda).max(0.0).sqrt()
}

fn phi_average<F: Fn(f64) -> f64>(f: F) -> f64 {
    integrate(f, 0.0, PI) / PI
}

fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

fn sech2(x: f64) -> f64 {
    let t = (-2.0 * x.abs()).exp();
    4.0 * t / ((1.0 + t) * (1.0 + t))
}

/// Ground-state energy per spin of the transverse-field chain as `N → ∞`.
pub fn ground_state_energy_per_spin(lambda: f64) -> f64 {
    -phi_average(|p| half_energy(lambda, p))
}

/// Energy per spin of the canonical ensemble at inverse temperature `beta`.
pub fn canonical_energy(beta: f64, lambda: f64) -> f64 {
    -phi_average(|p| {
        let g = half_energy(lambda, p);
        g * (beta * g).tanh()
    })
}

/// Energy variance per spin, `-de/dβ`.
fn canonical_curvature(beta: f64, lambda: f64) -> f64 {
    phi_average(|p| {
        let g = half_energy(lambda, p);
        g * g * sech2(beta * g)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleSolution {
    pub e: f64,
    pub beta_sp: f64,
    /// `S(e)`, normalized so that `S(0) = 0`.
    pub entropy: f64,
    /// `S''` in the Laplace sense: the canonical energy variance per spin.
    pub curvature: f64,
}

impl SaddleSolution {
    /// `A = √(N / (2π S''))`; the only place `N` enters.
    pub fn prefactor(&self, n: usize) -> f64 {
        (n as f64 / (2.0 * PI * self.curvature)).sqrt()
    }

    pub fn density(&self, n: usize) -> f64 {
        self.prefactor(n) * (n as f64 * self.entropy).exp()
    }
}

const BRACKET_LIMIT: u32 = 64;

pub fn solve_saddle(e: f64, lambda: f64) -> Result<SaddleSolution> {
    let bound = ground_state_energy_per_spin(lambda).abs();
    if !e.is_finite() || e.abs() >= bound * (1.0 - 1e-12) {
        return Err(Error::OutOfSupport { e, bound });
    }
    let f = |b: f64| canonical_energy(b, lambda) - e;
    let beta = if e == 0.0 {
        0.0
    } else {
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        let mut grow = 0;
        while f(hi) > 0.0 {
            lo = hi;
            hi *= 2.0;
            grow += 1;
            if grow > BRACKET_LIMIT {
                return Err(Error::NoConvergence(format!("no upper bracket for e = {e}")));
            }
        }
        while f(lo) < 0.0 {
            hi = lo;
            lo *= 2.0;
            grow += 1;
            if grow > BRACKET_LIMIT {
                return Err(Error::NoConvergence(format!("no lower bracket for e = {e}")));
            }
        }
        while hi - lo > 1e-12 * hi.abs().max(lo.abs()).max(1.0) {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut b = 0.5 * (lo + hi);
        for _ in 0..2 {
            let c = canonical_curvature(b, lambda);
            if c > 0.0 {
                let next = b + f(b) / c;
                if next >= lo && next <= hi {
                    b = next;
                }
            }
        }
        b
    };
    let curvature = canonical_curvature(beta, lambda);
    let entropy = e * beta + phi_average(|p| ln_cosh(beta * half_energy(lambda, p)));
    Ok(SaddleSolution {
        e,
        beta_sp: beta,
        entropy,
        curvature,
    })
}

fn require_transverse(params: &IsingParams) -> Result<()> {
    if params.alpha() != 0.0 {
        return Err(Error::InvalidArgs(
            "saddle-point density needs alpha = 0".into(),
        ));
    }
    Ok(())
}

/// Saddle-point density per unit `e`, unit integral.
pub fn saddle_density(e: f64, params: &IsingParams) -> Result<f64> {
    require_transverse(params)?;
    Ok(solve_saddle(e, params.lambda())?.density(params.n()))
}

/// Saddle-point density on a per-spin grid; zero outside the open support.
pub fn saddle_curve(params: &IsingParams, grid: &Grid) -> Result<DensityCurve> {
    require_transverse(params)?;
    let xs = grid.points();
    let values = xs
        .par_iter()
        .map(|&e| match saddle_density(e, params) {
            Err(Error::OutOfSupport { .. }) => Ok(0.0),
            other => other,
        })
        .collect::<Result<Vec<f64>>>()?;
    DensityCurve::new(
        Abscissa::PerSpin,
        crate::curve::Normalization::UnitIntegral,
        xs,
        values,
    )
}

/// Bulk Gaussian per unit `e` with variance `(1+λ²+α²)/N`.
pub fn gaussian_density_tfim(e: f64, params: &IsingParams) -> f64 {
    let n = params.n() as f64;
    let v = 1.0 + params.lambda().powi(2) + params.alpha().powi(2);
    (n / (2.0 * PI * v)).sqrt() * (-n * e * e / (2.0 * v)).exp()
}

/// Gaussian in the rescaled energy `ε = E/s`, optionally with the cubic
/// correction from the third moment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoFieldGaussian {
    scale: f64,
    skew: f64,
    cubic: bool,
}

impl TwoFieldGaussian {
    pub fn new(params: &IsingParams, cubic: bool) -> Self {
        let n = params.n() as f64;
        let v = 1.0 + params.lambda().powi(2) + params.alpha().powi(2);
        Self {
            scale: (n * v).sqrt(),
            skew: params.alpha().powi(2) / (n.sqrt() * v.powf(1.5)),
            cubic,
        }
    }

    /// `s = √(N(1+λ²+α²))`, so that `ε = E/s`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Density per unit `ε`; may dip below zero in the far tails when the
    /// correction is on.
    pub fn density_eps(&self, eps: f64) -> f64 {
        let g = (-0.5 * eps * eps).exp() / (2.0 * PI).sqrt();
        if self.cubic {
            g * (1.0 - self.skew * (eps * eps * eps - 3.0 * eps))
        } else {
            g
        }
    }

    /// Density per unit `E`.
    pub fn density_energy(&self, energy: f64) -> f64 {
        self.density_eps(energy / self.scale) / self.scale
    }
}

/// Cubic-corrected Gaussian at total energy `E`, per unit `ε`.
pub fn gaussian_density_two_fields(energy: f64, params: &IsingParams) -> f64 {
    let g = TwoFieldGaussian::new(params, true);
    g.density_eps(energy / g.scale())
}

/// Low-energy tail at `λ = 1`, per unit `E`.
pub fn tail_density_critical(energy: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    let ground = nf * ground_state_energy_per_spin(1.0);
    let x = energy - ground;
    if !(x > 0.0) {
        return Err(Error::AtOrBelowGroundState { energy, ground });
    }
    let log = -nf * LN_2 - 0.75 * x.ln() - 0.5 * (8.0 * (6.0 * PI).sqrt() * nf).ln()
        + (PI * nf * x / 6.0).sqrt();
    Ok(log.exp())
}
