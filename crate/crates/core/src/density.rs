//! Empirical densities from spectra and curve comparison.

use serde::{Deserialize, Serialize};

use crate::curve::{Abscissa, DensityCurve, Grid, Normalization};
use crate::error::{Error, Result};
use crate::mixture::{Component, GaussianMixture};

pub const MAX_DEFAULT_BINS: usize = 400;

/// `⌈√(count)⌉`, capped at 400.
pub fn default_bins(count: usize) -> usize {
    ((count as f64).sqrt().ceil() as usize).clamp(2, MAX_DEFAULT_BINS)
}

/// Unit-integral histogram evaluated at bin centres.
///
/// Without an explicit range the data span `B - 2` bins with one empty bin
/// of padding on each side, so the trapezoid integral is exactly 1. With a
/// range, bins are half-open except the last, and values outside are
/// dropped while the normalization still counts every energy.
pub fn histogram(energies: &[f64], bins: usize, range: Option<(f64, f64)>) -> Result<DensityCurve> {
    if energies.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if bins < 2 {
        return Err(Error::InvalidArgs(format!("need at least 2 bins, got {bins}")));
    }
    let (lo, width, first, last) = match range {
        Some((a, b)) => {
            if !(b > a) {
                return Err(Error::InvalidArgs(format!("empty histogram range {a}..{b}")));
            }
            (a, (b - a) / bins as f64, 0, bins - 1)
        }
        None => {
            if bins < 3 {
                return Err(Error::InvalidArgs("padded histogram needs 3 bins".into()));
            }
            let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let w = if max > min { (max - min) / (bins - 2) as f64 } else { 1.0 };
            (min - w, w, 1, bins - 2)
        }
    };
    let mut counts = vec![0usize; bins];
    let hi = lo + width * bins as f64;
    for &e in energies {
        if range.is_some() && (e < lo || e > hi) {
            continue;
        }
        let i = ((e - lo) / width).floor();
        let i = (i.max(first as f64) as usize).min(last);
        counts[i] += 1;
    }
    let scale = 1.0 / (energies.len() as f64 * width);
    let grid = (0..bins).map(|i| lo + width * (i as f64 + 0.5)).collect();
    let values = counts.iter().map(|&c| c as f64 * scale).collect();
    DensityCurve::new(Abscissa::Energy, Normalization::UnitIntegral, grid, values)
}

/// Freedman–Diaconis bin width `2·IQR·n^{-1/3}` of sorted data.
pub fn freedman_diaconis_width(sorted: &[f64]) -> Option<f64> {
    if sorted.len() < 4 {
        return None;
    }
    let q = |p: f64| {
        let pos = p * (sorted.len() - 1) as f64;
        let i = pos.floor() as usize;
        let t = pos - i as f64;
        sorted[i] + t * (sorted[(i + 1).min(sorted.len() - 1)] - sorted[i])
    };
    let iqr = q(0.75) - q(0.25);
    (iqr > 0.0).then(|| 2.0 * iqr / (sorted.len() as f64).cbrt())
}

/// Gaussian-kernel estimate with bandwidth `sigma`. The default grid covers
/// the data with `5σ` margins at a spacing of `σ/4`, at most 20001 points.
pub fn kernel_density(energies: &[f64], sigma: f64, grid: Option<Grid>) -> Result<DensityCurve> {
    if energies.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgs(format!("bandwidth must be positive, got {sigma}")));
    }
    let grid = match grid {
        Some(g) => g,
        None => {
            let min = energies.iter().cloned().fold(f64::INFINITY, f64::min) - 5.0 * sigma;
            let max = energies.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 5.0 * sigma;
            let points = (((max - min) / (0.25 * sigma)).ceil() as usize + 1).clamp(3, 20001);
            Grid::new(min, max, points)?
        }
    };
    let w = 1.0 / energies.len() as f64;
    let mix = GaussianMixture::new(
        energies
            .iter()
            .map(|&mu| Component {
                w,
                mu,
                var: sigma * sigma,
            })
            .collect(),
    )?;
    Ok(mix.render(&grid, Abscissa::Energy))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub position: f64,
    pub height: f64,
    pub prominence: f64,
}

/// Local maxima whose topographic prominence is at least
/// `min_rel_prominence` times the curve maximum. Positions are refined by a
/// parabola through the three surrounding samples.
pub fn find_peaks(curve: &DensityCurve, min_rel_prominence: f64) -> Vec<Peak> {
    let (x, y) = (&curve.grid, &curve.values);
    let n = y.len();
    if n < 3 {
        return Vec::new();
    }
    let ymax = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let threshold = min_rel_prominence * ymax;
    let mut peaks = Vec::new();
    let mut i = 1;
    while i < n - 1 {
        if y[i] > y[i - 1] {
            // Walk across a plateau.
            let mut j = i;
            while j + 1 < n && y[j + 1] == y[i] {
                j += 1;
            }
            if j + 1 < n && y[j + 1] < y[i] {
                let top = y[i];
                let mut left_min = top;
                let mut l = i;
                while l > 0 {
                    l -= 1;
                    if y[l] > top {
                        break;
                    }
                    left_min = left_min.min(y[l]);
                }
                let mut right_min = top;
                let mut r = j;
                while r + 1 < n {
                    r += 1;
                    if y[r] > top {
                        break;
                    }
                    right_min = right_min.min(y[r]);
                }
                let prominence = top - left_min.max(right_min);
                if prominence >= threshold && prominence > 0.0 {
                    let c = (i + j) / 2;
                    let position = if i == j {
                        let (a, b, d) = (y[c - 1], y[c], y[c + 1]);
                        let denom = a - 2.0 * b + d;
                        let shift = if denom != 0.0 { 0.5 * (a - d) / denom } else { 0.0 };
                        let h = if shift >= 0.0 { x[c + 1] - x[c] } else { x[c] - x[c - 1] };
                        x[c] + shift.clamp(-0.5, 0.5) * h
                    } else {
                        0.5 * (x[i] + x[j])
                    };
                    peaks.push(Peak {
                        position,
                        height: top,
                        prominence,
                    });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakMatch {
    pub a: f64,
    pub b: f64,
    pub offset: f64,
}

/// Greedy nearest-first pairing of two position lists.
pub fn match_peaks(a: &[f64], b: &[f64]) -> Vec<PeakMatch> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, &pa) in a.iter().enumerate() {
        for (j, &pb) in b.iter().enumerate() {
            pairs.push(((pa - pb).abs(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut out = Vec::new();
    for (_, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            out.push(PeakMatch {
                a: a[i],
                b: b[j],
                offset: b[j] - a[i],
            });
        }
    }
    out.sort_by(|p, q| p.a.total_cmp(&q.a));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub l1: f64,
    pub sup: f64,
    pub peak_positions: Vec<PeakMatch>,
    pub grids_aligned: bool,
}

pub const DEFAULT_PROMINENCE: f64 = 0.01;

fn union_grid(a: &DensityCurve, b: &DensityCurve) -> Vec<f64> {
    let mut g: Vec<f64> = a.grid.iter().chain(&b.grid).cloned().collect();
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

fn check_comparable(a: &DensityCurve, b: &DensityCurve) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if a.abscissa != b.abscissa {
        return Err(Error::InvalidArgs(format!(
            "cannot compare a curve over {} with one over {}",
            a.abscissa, b.abscissa
        )));
    }
    let (alo, ahi) = (a.grid[0], a.grid[a.len() - 1]);
    let (blo, bhi) = (b.grid[0], b.grid[b.len() - 1]);
    if ahi < blo || bhi < alo {
        return Err(Error::DisjointSupports);
    }
    Ok(())
}

/// `∫|d|` of a piecewise-linear difference, exact across sign changes.
fn abs_trapezoid(x: &[f64], d: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 1..x.len() {
        let (p, q) = (d[i - 1], d[i]);
        let h = x[i] - x[i - 1];
        s += if p * q >= 0.0 {
            0.5 * h * (p.abs() + q.abs())
        } else {
            0.5 * h * (p * p + q * q) / (p.abs() + q.abs())
        };
    }
    s
}

pub fn compare(a: &DensityCurve, b: &DensityCurve) -> Result<ComparisonReport> {
    compare_with(a, b, DEFAULT_PROMINENCE)
}

/// Both curves are linearly interpolated onto the union of their grids and
/// taken as zero outside their own range.
pub fn compare_with(a: &DensityCurve, b: &DensityCurve, min_rel_prominence: f64) -> Result<ComparisonReport> {
    check_comparable(a, b)?;
    let x = union_grid(a, b);
    let d: Vec<f64> = x.iter().map(|&t| a.eval(t) - b.eval(t)).collect();
    let l1 = abs_trapezoid(&x, &d);
    let sup = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let pa: Vec<f64> = find_peaks(a, min_rel_prominence).iter().map(|p| p.position).collect();
    let pb: Vec<f64> = find_peaks(b, min_rel_prominence).iter().map(|p| p.position).collect();
    Ok(ComparisonReport {
        l1,
        sup,
        peak_positions: match_peaks(&pa, &pb),
        grids_aligned: a.grid == b.grid,
    })
}

/// `∫_lo^hi |a - b|` on the union grid clipped to the window.
pub fn l1_distance_on(a: &DensityCurve, b: &DensityCurve, lo: f64, hi: f64) -> Result<f64> {
    check_comparable(a, b)?;
    if !(hi > lo) {
        return Err(Error::InvalidArgs(format!("empty window {lo}..{hi}")));
    }
    let mut x: Vec<f64> = union_grid(a, b)
        .into_iter()
        .filter(|&t| t > lo && t < hi)
        .collect();
    x.insert(0, lo);
    x.push(hi);
    let d: Vec<f64> = x.iter().map(|&t| a.eval(t) - b.eval(t)).collect();
    Ok(abs_trapezoid(&x, &d))
}
