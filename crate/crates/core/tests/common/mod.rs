//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use ising_dos::combinatorics::block_structure;
use ising_dos::hamiltonian::rotated_frame_terms;
use ising_dos::IsingParams;

/// Mean and population variance of `Σ_{j∈S} v_j` over all subsets `S` of
/// size `n`, by explicit enumeration.
pub fn subset_sum_moments(values: &[f64], n: usize) -> (f64, f64) {
    let len = values.len();
    let mut sums = Vec::new();
    for mask in 0u64..1 << len {
        if mask.count_ones() as usize == n {
            sums.push(
                (0..len)
                    .filter(|j| mask >> j & 1 == 1)
                    .map(|j| values[j])
                    .sum::<f64>(),
            );
        }
    }
    mean_var(&sums)
}

pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    (m, v)
}

/// Every ordered composition of `n` into `k` positive parts.
pub fn compositions_of(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions_of(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `(n, k)` of a basis state in the rotated frame, where a clear bit is an
/// up spin along the field.
pub fn rotated_cell(b: u64, n_sites: usize) -> (usize, usize) {
    let mask = (1u64 << n_sites) - 1;
    block_structure(!b & mask, n_sites)
}

pub fn unperturbed_energy(n_sites: usize, n: usize, k: usize, alpha: f64) -> f64 {
    alpha * (n_sites as f64 - 2.0 * n as f64) + 4.0 * k as f64 - n_sites as f64
}

/// Second-order shift `Σ_f |H_σf|² / (E⁰_σ - E⁰_f)` over final states of a
/// different unperturbed energy, summed over all basis states of each
/// `(n, k)` cell. Matrix elements come from the single-spin-flip terms of the
/// rotated-frame Hamiltonian; pair flips carry `cos⁴φ` and only enter at
/// order `λ⁴`.
pub fn second_order_shift_by_cell(
    n_sites: usize,
    alpha: f64,
    lambda: f64,
) -> BTreeMap<(usize, usize), f64> {
    let p = IsingParams::two_field(n_sites, lambda, alpha).unwrap();
    let terms = rotated_frame_terms(&p).unwrap();
    let dim = 1u64 << n_sites;
    let e0: Vec<f64> = (0..dim)
        .map(|b| {
            let (n, k) = rotated_cell(b, n_sites);
            unperturbed_energy(n_sites, n, k, alpha)
        })
        .collect();
    let mut out = BTreeMap::new();
    for s in 0..dim {
        let mut row: HashMap<u64, f64> = HashMap::new();
        for t in terms.iter().filter(|t| t.x_mask.count_ones() == 1) {
            let (f, v) = t.apply(s);
            *row.entry(f).or_insert(0.0) += v;
        }
        let mut shift = 0.0;
        for (f, h) in row {
            if (e0[f as usize] - e0[s as usize]).abs() > 1e-9 {
                shift += h * h / (e0[s as usize] - e0[f as usize]);
            }
        }
        *out.entry(rotated_cell(s, n_sites)).or_insert(0.0) += shift;
    }
    out
}

/// Splits sorted energies by the nearest of the given centres.
pub fn cluster_by_nearest(energies: &[f64], centres: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new(); centres.len()];
    for &e in energies {
        let (i, _) = centres
            .iter()
            .enumerate()
            .map(|(i, c)| (i, (e - c).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        out[i].push(e);
    }
    out
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
