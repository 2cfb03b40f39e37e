//! Normalized trace moments `⟨H^k⟩ = 2^{-N} Tr H^k`.

use serde::{Deserialize, Serialize};

use crate::params::IsingParams;
use crate::spectrum::ManyBodySpectrum;

/// Moments indexed from order 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    values: Vec<f64>,
}

impl MomentSet {
    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn max_order(&self) -> usize {
        self.values.len()
    }

    /// `⟨H^k⟩` for `1 <= k <= max_order`.
    pub fn get(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn m1(&self) -> f64 {
        self.get(1).unwrap_or(f64::NAN)
    }

    pub fn m2(&self) -> f64 {
        self.get(2).unwrap_or(f64::NAN)
    }

    pub fn m3(&self) -> f64 {
        self.get(3).unwrap_or(f64::NAN)
    }

    pub fn m4(&self) -> f64 {
        self.get(4).unwrap_or(f64::NAN)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn numeric_moments(spectrum: &ManyBodySpectrum, max_order: usize) -> MomentSet {
    let e = spectrum.energies();
    let inv = 1.0 / e.len() as f64;
    let mut sums = vec![0.0; max_order];
    for &x in e {
        let mut p = 1.0;
        for s in sums.iter_mut() {
            p *= x;
            *s += p;
        }
    }
    MomentSet::from_values(sums.into_iter().map(|s| s * inv).collect())
}

/// Closed-form moments through order 4. The TFIM is the `α = 0` case of the
/// two-field expressions.
pub fn analytic_moments(params: &IsingParams) -> MomentSet {
    let n = params.n() as f64;
    let l2 = params.lambda().powi(2);
    let a2 = params.alpha().powi(2);
    let s = 1.0 + l2 + a2;
    let m2 = n * s;
    let m3 = -6.0 * n * a2;
    let m4 = 3.0 * n * n * s * s
        + n * (24.0 * a2 - 2.0 * a2 * a2 - 2.0 - 2.0 * l2 * l2 - 8.0 * l2 - 4.0 * l2 * a2);
    MomentSet::from_values(vec![0.0, m2, m3, m4])
}

/// Smallest ring for which the closed form of order `k` is exact. Below it,
/// products of `k` local terms can wrap around the ring and close a loop.
/// Thresholds were established against dense traces.
pub fn moment_formula_min_n(order: usize) -> Option<usize> {
    match order {
        1 => Some(2),
        2 => Some(3),
        3 => Some(4),
        4 => Some(5),
        _ => None,
    }
}

/// `|a - b| / scale` with `scale = max(|b|, m2^{k/2})`, so that moments which
/// vanish exactly are judged against the natural size of order `k`.
pub fn moment_relative_error(numeric: f64, analytic: f64, m2: f64, order: usize) -> f64 {
    let natural = m2.abs().powf(order as f64 / 2.0);
    let scale = analytic.abs().max(natural).max(f64::MIN_POSITIVE);
    (numeric - analytic).abs() / scale
}
