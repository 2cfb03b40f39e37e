use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

use crate::curve::{Abscissa, DensityCurve, Grid, Normalization};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub w: f64,
    pub mu: f64,
    pub var: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GaussianMixture {
    pub components: Vec<Component>,
}

/// Components further than this many standard deviations are not rendered.
const CUTOFF_SIGMAS: f64 = 10.0;

fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

impl GaussianMixture {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        for c in &components {
            if !(c.w >= 0.0 && c.var >= 0.0 && c.mu.is_finite() && c.var.is_finite()) {
                return Err(Error::InvalidArgs(format!("bad mixture component {c:?}")));
            }
        }
        Ok(Self { components })
    }

    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|c| c.w).sum()
    }

    pub fn mean(&self) -> f64 {
        self.components.iter().map(|c| c.w * c.mu).sum::<f64>() / self.total_weight()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.components
            .iter()
            .map(|c| c.w * (c.var + (c.mu - m).powi(2)))
            .sum::<f64>()
            / self.total_weight()
    }

    /// Pointwise density; zero-variance components contribute nothing here.
    pub fn density(&self, x: f64) -> f64 {
        self.components
            .iter()
            .filter(|c| c.var > 0.0 && c.w > 0.0)
            .map(|c| c.w * (-(x - c.mu).powi(2) / (2.0 * c.var)).exp() / (2.0 * PI * c.var).sqrt())
            .sum()
    }

    /// Renders onto a uniform grid. Components much wider than a grid cell
    /// are sampled pointwise, narrower ones are averaged over the cell
    /// `[x - h/2, x + h/2]`, and deltas drop their whole weight into the
    /// enclosing cell, so mass is kept even for very sharp peaks.
    pub fn render(&self, grid: &Grid, abscissa: Abscissa) -> DensityCurve {
        let xs = grid.points();
        let h = grid.step();
        let last = xs.len() - 1;
        let mut values = vec![0.0; xs.len()];
        let index_of = |x: f64| ((x - grid.lo) / h).round();
        for c in &self.components {
            if c.w == 0.0 {
                continue;
            }
            if c.var == 0.0 {
                let i = index_of(c.mu);
                if i >= 0.0 && i <= last as f64 {
                    values[i as usize] += c.w / h;
                }
                continue;
            }
            let sigma = c.var.sqrt();
            let lo = index_of(c.mu - CUTOFF_SIGMAS * sigma).max(0.0);
            let hi = index_of(c.mu + CUTOFF_SIGMAS * sigma).min(last as f64);
            if lo > hi {
                continue;
            }
            let (lo, hi) = (lo as usize, hi as usize);
            if sigma >= h {
                let norm = c.w / (2.0 * PI * c.var).sqrt();
                for i in lo..=hi {
                    values[i] += norm * (-(xs[i] - c.mu).powi(2) / (2.0 * c.var)).exp();
                }
            } else {
                for i in lo..=hi {
                    let a = normal_cdf((xs[i] - 0.5 * h - c.mu) / sigma);
                    let b = normal_cdf((xs[i] + 0.5 * h - c.mu) / sigma);
                    values[i] += c.w * (b - a) / h;
                }
            }
        }
        DensityCurve {
            abscissa,
            norm: Normalization::UnitIntegral,
            grid: xs,
            values,
        }
    }

    /// `[min μ - 6σ, max μ + 6σ]` over all components, padded for deltas.
    pub fn support(&self) -> Option<(f64, f64)> {
        let lo = self
            .components
            .iter()
            .map(|c| c.mu - 6.0 * c.var.sqrt())
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .components
            .iter()
            .map(|c| c.mu + 6.0 * c.var.sqrt())
            .fold(f64::NEG_INFINITY, f64::max);
        if lo.is_finite() && hi.is_finite() {
            let pad = if hi > lo { 0.0 } else { 1.0 };
            Some((lo - pad, hi + pad))
        } else {
            None
        }
    }
}
