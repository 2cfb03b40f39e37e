//! Transverse-field chain as free fermions.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::params::IsingParams;
use crate::spectrum::{ManyBodySpectrum, Method};

pub const MAX_FERMION_N: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    /// Antiperiodic fermions, odd momenta `π(2j+1)/N`.
    Even,
    /// Periodic fermions, even momenta `2πj/N`.
    Odd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorSpec {
    pub parity: Parity,
    pub phases: Vec<f64>,
    pub one_particle: Vec<f64>,
}

impl SectorSpec {
    pub fn new(n: usize, lambda: f64, parity: Parity) -> Result<Self> {
        let phases = momentum_grid(n, parity)?;
        let one_particle = phases
            .iter()
            .map(|&p| one_particle_energy(lambda, p))
            .collect();
        Ok(Self {
            parity,
            phases,
            one_particle,
        })
    }
}

/// `e(φ) = 2√(1 - 2λ cos φ + λ²)`.
pub fn one_particle_energy(lambda: f64, phi: f64) -> f64 {
    2.0 * (1.0 - 2.0 * lambda * phi.cos() + lambda * lambda).max(0.0).sqrt()
}

pub fn momentum_grid(n: usize, parity: Parity) -> Result<Vec<f64>> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    let nf = n as f64;
    Ok((0..n)
        .map(|j| match parity {
            Parity::Even => PI * (2 * j + 1) as f64 / nf,
            Parity::Odd => 2.0 * PI * j as f64 / nf,
        })
        .collect())
}

/// Energies `Σ e_j (n_j - 1/2)` of every occupation subset, indexed by bitmask.
fn subset_energies(e: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(1 << e.len());
    out.push(-0.5 * e.iter().sum::<f64>());
    for &ej in e {
        let len = out.len();
        for i in 0..len {
            let v = out[i] + ej;
            out.push(v);
        }
    }
    out
}

fn sector_levels(n: usize, lambda: f64, parity: Parity, odd_count: bool) -> Result<Vec<f64>> {
    let spec = SectorSpec::new(n, lambda, parity)?;
    Ok(subset_energies(&spec.one_particle)
        .into_iter()
        .enumerate()
        .filter(|(mask, _)| (mask.count_ones() % 2 == 1) == odd_count)
        .map(|(_, e)| e)
        .collect())
}

/// All `2^N` eigenvalues from the two parity sectors. The spectrum depends
/// only on `|λ|`; `|λ| = 1` uses the weak-field rule.
pub fn enumerate_spectrum(n: usize, lambda: f64) -> Result<ManyBodySpectrum> {
    if n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    if n > MAX_FERMION_N {
        return Err(Error::CapExceeded {
            what: "fermion spin count",
            requested: n as u64,
            limit: MAX_FERMION_N as u64,
        });
    }
    let params = IsingParams::transverse(n, lambda)?;
    let l = lambda.abs();
    let mut energies = sector_levels(n, l, Parity::Even, false)?;
    energies.extend(sector_levels(n, l, Parity::Odd, l > 1.0)?);
    ManyBodySpectrum::new(energies, Method::Fermion, params)
}
