//! Multi-Gaussian descriptions of clustered spectra.

use faer::Mat;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::analytic::ground_state_energy_per_spin;
use crate::combinatorics::{
    self, binomial, cells, compositions, count_na, count_nb, count_nc, degeneracy_census, f_count,
};
use crate::curve::{Abscissa, DensityCurve, Grid};
use crate::error::{Error, Result};
use crate::fermion::{one_particle_energy, momentum_grid, Parity};
use crate::mixture::{Component, GaussianMixture};
use crate::params::IsingParams;

fn check_n(n_sites: usize, n: usize) -> Result<()> {
    if n_sites < 2 {
        return Err(Error::InvalidArgs(format!("N must be at least 2, got {n_sites}")));
    }
    if n > n_sites {
        return Err(Error::InvalidArgs(format!("n = {n} exceeds N = {n_sites}")));
    }
    Ok(())
}

fn k_bar_f64(n_sites: usize, n: usize) -> f64 {
    (n * (n_sites - n)) as f64 / (n_sites - 1) as f64
}

/// Mean and variance of `g_j = e_j / 2` over one momentum grid.
fn grid_stats(n_sites: usize, lambda: f64, parity: Parity) -> Result<(f64, f64)> {
    let g: Vec<f64> = momentum_grid(n_sites, parity)?
        .into_iter()
        .map(|p| 0.5 * one_particle_energy(lambda, p))
        .collect();
    let mean = g.iter().sum::<f64>() / g.len() as f64;
    let second = 1.0 + lambda * lambda;
    Ok((mean, (second - mean * mean).max(0.0)))
}

/// `⟨e⟩` and `⟨e²⟩ - ⟨e⟩²` for the states with `n` excitations. Strong
/// fields use the sector that hosts `n`'s parity; weak fields, where both
/// sectors host even `n`, pool them.
fn tfim_single_particle_stats(n_sites: usize, lambda: f64, n: usize) -> Result<(f64, f64)> {
    let l = lambda.abs();
    if l > 1.0 {
        let parity = if n.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
        grid_stats(n_sites, l, parity)
    } else {
        let (m1, v1) = grid_stats(n_sites, l, Parity::Even)?;
        let (m2, v2) = grid_stats(n_sites, l, Parity::Odd)?;
        let m = 0.5 * (m1 + m2);
        let v = 0.5 * (v1 + v2) + 0.25 * (m1 - m2).powi(2);
        Ok((m, v))
    }
}

/// Mean and variance of the transverse-field levels with `n` excitations,
/// from exact sums over the finite momentum grid. The mean is `(N - 2n)⟨e⟩`;
/// the fermionic labelling would give the mirror image, which leaves every
/// mixture unchanged because the weights are symmetric in `n ↔ N - n`.
pub fn tfim_fixed_n_moments(n_sites: usize, lambda: f64, n: usize) -> Result<(f64, f64)> {
    check_n(n_sites, n)?;
    if n_sites % 2 == 1 {
        return Err(Error::OddN(n_sites));
    }
    let (mean, var) = tfim_single_particle_stats(n_sites, lambda, n)?;
    Ok((
        (n_sites as f64 - 2.0 * n as f64) * mean,
        4.0 * k_bar_f64(n_sites, n) * var,
    ))
}

/// As [`tfim_fixed_n_moments`] with the `N → ∞` integrals in place of the
/// grid sums.
pub fn tfim_fixed_n_moments_preview(n_sites: usize, lambda: f64, n: usize) -> Result<(f64, f64)> {
    check_n(n_sites, n)?;
    let mean = -ground_state_energy_per_spin(lambda);
    let var = (1.0 + lambda * lambda - mean * mean).max(0.0);
    Ok((
        (n_sites as f64 - 2.0 * n as f64) * mean,
        4.0 * k_bar_f64(n_sites, n) * var,
    ))
}

fn binomial_weight(n_sites: usize, n: usize, scale: f64) -> Result<f64> {
    Ok(binomial(n_sites as i64, n as i64)? as f64 * scale / 2f64.powi(n_sites as i32))
}

/// One Gaussian per excitation number. For `|λ| > 1` every `n` appears with
/// weight `C(N,n)/2^N`; otherwise only even `n`, with weight `2C(N,n)/2^N`.
pub fn tfim_mixture(params: &IsingParams, preview: bool) -> Result<GaussianMixture> {
    if params.alpha() != 0.0 {
        return Err(Error::InvalidArgs("transverse-field mixture needs alpha = 0".into()));
    }
    let n_sites = params.n();
    let strong = params.lambda().abs() > 1.0;
    let mut comps = Vec::new();
    for n in 0..=n_sites {
        if !strong && n % 2 == 1 {
            continue;
        }
        let (mu, var) = if preview {
            tfim_fixed_n_moments_preview(n_sites, params.lambda(), n)?
        } else {
            tfim_fixed_n_moments(n_sites, params.lambda(), n)?
        };
        let w = binomial_weight(n_sites, n, if strong { 1.0 } else { 2.0 })?;
        comps.push(Component { w, mu, var });
    }
    GaussianMixture::new(comps)
}

pub fn tfim_multi_gaussian(params: &IsingParams, grid: &Grid) -> Result<DensityCurve> {
    Ok(tfim_mixture(params, false)?.render(grid, Abscissa::Energy))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    TfimLargeLambda,
    TfimSmallLambda,
    StrongFields,
    SmallLambdaIntegerAlpha,
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tfim-large" | "tfim-large-lambda" => Ok(Regime::TfimLargeLambda),
            "tfim-small" | "tfim-small-lambda" => Ok(Regime::TfimSmallLambda),
            "strong-fields" => Ok(Regime::StrongFields),
            "small-lambda-integer-alpha" | "int-alpha" => Ok(Regime::SmallLambdaIntegerAlpha),
            other => Err(Error::InvalidRegime(format!("unknown regime '{other}'"))),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::TfimLargeLambda => "tfim-large-lambda",
            Regime::TfimSmallLambda => "tfim-small-lambda",
            Regime::StrongFields => "strong-fields",
            Regime::SmallLambdaIntegerAlpha => "small-lambda-integer-alpha",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Visibility {
    pub regime: Regime,
    pub n_max: f64,
    /// The estimate only fixes the scale, not the prefactor.
    pub order_of_magnitude: bool,
}

/// Largest `N` for which neighbouring peaks stay separated by more than
/// twice their width.
pub fn visibility_nmax(lambda: f64, alpha: f64, regime: Regime) -> Result<Visibility> {
    let l2 = lambda * lambda;
    let bad = |why: &str| Err(Error::InvalidRegime(format!("{regime}: {why}")));
    let (n_max, approx) = match regime {
        Regime::TfimLargeLambda | Regime::TfimSmallLambda if alpha != 0.0 => {
            return bad("transverse-field regimes need alpha = 0")
        }
        Regime::TfimLargeLambda => (2.0 * l2, false),
        Regime::TfimSmallLambda | Regime::StrongFields | Regime::SmallLambdaIntegerAlpha
            if lambda == 0.0 =>
        {
            return bad("peaks never merge at lambda = 0")
        }
        Regime::TfimSmallLambda => (8.0 / l2, false),
        Regime::StrongFields => (2.0 * (l2 + alpha * alpha).powi(3) / (l2 * l2), false),
        Regime::SmallLambdaIntegerAlpha => {
            if alpha.fract() != 0.0 || alpha == 0.0 {
                return bad("needs a nonzero integer alpha");
            }
            (1.0 / (l2 * l2), true)
        }
    };
    Ok(Visibility {
        regime,
        n_max,
        order_of_magnitude: approx,
    })
}

/// Cluster of the `n`-up-spin states when `λ² + α²` is large.
pub fn strong_field_moments(n_sites: usize, lambda: f64, alpha: f64, n: usize) -> Result<(f64, f64)> {
    check_n(n_sites, n)?;
    let h2 = lambda * lambda + alpha * alpha;
    if h2 == 0.0 {
        return Err(Error::InvalidArgs("strong-field moments need a nonzero field".into()));
    }
    let nf = n_sites as f64;
    let kb = k_bar_f64(n_sites, n);
    let mean = h2.sqrt() * (nf - 2.0 * n as f64) - (nf - 4.0 * kb) * alpha * alpha / h2;
    let var = 2.0 * kb * lambda.powi(4) / (h2 * h2);
    Ok((mean, var))
}

pub fn strong_field_mixture(params: &IsingParams) -> Result<GaussianMixture> {
    let n_sites = params.n();
    let mut comps = Vec::with_capacity(n_sites + 1);
    for n in 0..=n_sites {
        let (mu, var) = strong_field_moments(n_sites, params.lambda(), params.alpha(), n)?;
        comps.push(Component {
            w: binomial_weight(n_sites, n, 1.0)?,
            mu,
            var,
        });
    }
    GaussianMixture::new(comps)
}

pub fn strong_field_curve(params: &IsingParams, grid: &Grid) -> Result<DensityCurve> {
    Ok(strong_field_mixture(params)?.render(grid, Abscissa::Energy))
}

/// First-order energy of an `(n, k)` string in the rotated frame.
pub fn cell_energy(n_sites: usize, n: usize, k: usize, alpha: f64, lambda: f64) -> f64 {
    let h2 = alpha * alpha + lambda * lambda;
    let nf = n_sites as f64;
    h2.sqrt() * (nf - 2.0 * n as f64) - (nf - 4.0 * k as f64) * alpha * alpha / h2
}

fn int_alpha_classes(n_sites: usize) -> Result<combinatorics::DegeneracyCensus> {
    degeneracy_census(n_sites, num_rational::Ratio::from_integer(1))
}

/// Mean first-order energy of class `R = 2k - n` at `α = 1`.
pub fn small_lambda_er(n_sites: usize, lambda: f64, r: i64) -> Result<f64> {
    let census = int_alpha_classes(n_sites)?;
    let nr = census.multiplicity(r)? as f64;
    let mut block_sum = 0.0;
    for &(n, k) in &census.cells[&r] {
        if k > 0 {
            let m = n_sites - n;
            block_sum += (compositions(n as i64, k as i64)? * compositions(m as i64, k as i64)?)
                as f64;
        }
    }
    let s = (1.0 + lambda * lambda).sqrt();
    let t = 1.0 / (1.0 + lambda * lambda);
    let nf = n_sites as f64;
    Ok(2.0 * r as f64 * s + nf * (s - t) * (1.0 - 4.0 * block_sum / nr))
}

/// Second-order shift summed over all strings of cell `(n, k)`, from single
/// spin flips into levels of different unperturbed energy.
pub fn small_lambda_delta_e(
    n_sites: usize,
    n: usize,
    m: usize,
    k: usize,
    alpha: f64,
    lambda: f64,
) -> Result<f64> {
    combinatorics::check_cell(n_sites, n, k)?;
    if n + m != n_sites {
        return Err(Error::InvalidArgs(format!("n + m = {} != N = {n_sites}", n + m)));
    }
    if (alpha.abs() - 2.0).abs() < 1e-12 {
        return Err(Error::AlphaSingular(alpha));
    }
    let h2 = alpha * alpha + lambda * lambda;
    if h2 == 0.0 {
        return Ok(0.0);
    }
    let c0 = 2.0 * alpha * alpha * lambda * lambda / (h2 * h2);
    let nf = n_sites as f64;
    if k == 0 {
        // Polarized strings: every flip creates one isolated block.
        let denom = if n == n_sites { 2.0 + alpha } else { 2.0 - alpha };
        return Ok(-c0 * nf / denom);
    }
    let (ni, mi, ki) = (n as i64, m as i64, k as i64);
    let pn = compositions(ni, ki)? as f64;
    let pm = compositions(mi, ki)? as f64;
    let pn1 = compositions(ni - 1, ki - 1)? as f64;
    let pm1 = compositions(mi - 1, ki - 1)? as f64;
    let kf = k as f64;
    let first = ((2.0 * kf - n as f64) / (2.0 + alpha) + (2.0 * kf - m as f64) / (2.0 - alpha))
        * pn
        * pm
        / kf;
    let second = 2.0 * alpha / (4.0 - alpha * alpha) * (pn1 * pm - pn * pm1);
    Ok(c0 * nf * (first + second))
}

/// Class average of [`small_lambda_delta_e`] at `α = 1`.
pub fn small_lambda_delta_er(n_sites: usize, lambda: f64, r: i64) -> Result<f64> {
    let census = int_alpha_classes(n_sites)?;
    let nr = census.multiplicity(r)? as f64;
    let mut total = 0.0;
    for &(n, k) in &census.cells[&r] {
        total += small_lambda_delta_e(n_sites, n, n_sites - n, k, 1.0, lambda)?;
    }
    Ok(total / nr)
}

/// Class variance at `α = 1` from the energy-conserving adjacent pair flips.
pub fn small_lambda_sigma2_r(n_sites: usize, lambda: f64, r: i64) -> Result<f64> {
    let census = int_alpha_classes(n_sites)?;
    let nr = census.multiplicity(r)? as f64;
    let mut transitions: u128 = 0;
    for &(n, k) in &census.cells[&r] {
        let m = n_sites - n;
        transitions += count_na(n_sites, n, m, k)? + count_nb(n_sites, n, m, k)?
            + count_nc(n_sites, n, m, k)?;
    }
    let l2 = lambda * lambda;
    Ok(l2 * l2 / (1.0 + l2).powi(2) * transitions as f64 / nr)
}

pub fn small_lambda_sigma_r(n_sites: usize, lambda: f64, r: i64) -> Result<f64> {
    Ok(small_lambda_sigma2_r(n_sites, lambda, r)?.sqrt())
}

/// One Gaussian per degeneracy class of the `α = 1` chain.
pub fn small_lambda_mixture_integer_alpha(
    params: &IsingParams,
    with_shift: bool,
) -> Result<GaussianMixture> {
    if params.alpha() != 1.0 {
        return Err(Error::InvalidArgs(format!(
            "integer-alpha mixture is implemented for alpha = 1, got {}",
            params.alpha()
        )));
    }
    let n_sites = params.n();
    let lambda = params.lambda();
    let census = int_alpha_classes(n_sites)?;
    let norm = 2f64.powi(n_sites as i32);
    let mut comps = Vec::with_capacity(census.classes.len());
    for (&r, &nr) in &census.classes {
        let mut mu = small_lambda_er(n_sites, lambda, r)?;
        if with_shift {
            mu += small_lambda_delta_er(n_sites, lambda, r)?;
        }
        comps.push(Component {
            w: nr as f64 / norm,
            mu,
            var: small_lambda_sigma2_r(n_sites, lambda, r)?,
        });
    }
    GaussianMixture::new(comps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenericVariance {
    /// `2λ⁴/(α²+λ²)² · k²(N-2k)/(n(N-n))`, the large-(n, k) form.
    #[default]
    LargeCell,
    /// `λ⁴/(α²+λ²)² · N_c/f`, exact for every cell.
    Exact,
}

/// One Gaussian per `(n, k)` cell centred on the unperturbed level, for any
/// real `α`. Polarized strings enter as deltas.
pub fn generic_alpha_mixture(params: &IsingParams, variance: GenericVariance) -> Result<GaussianMixture> {
    let n_sites = params.n();
    let (alpha, lambda) = (params.alpha(), params.lambda());
    if variance == GenericVariance::Exact && n_sites < 3 {
        return Err(Error::InvalidArgs("exact cell variance needs N >= 3".into()));
    }
    let l4 = lambda.powi(4);
    let h2 = alpha * alpha + lambda * lambda;
    let pre = if h2 == 0.0 { 0.0 } else { l4 / (h2 * h2) };
    let norm = 2f64.powi(n_sites as i32);
    let nf = n_sites as f64;
    let mut comps = Vec::new();
    for (n, k) in cells(n_sites) {
        let f = f_count(n_sites, n, k)?;
        let mu = alpha * (nf - 2.0 * n as f64) + 4.0 * k as f64 - nf;
        let var = if k == 0 {
            0.0
        } else {
            match variance {
                GenericVariance::LargeCell => {
                    let kf = k as f64;
                    2.0 * pre * kf * kf * (nf - 2.0 * kf) / (n * (n_sites - n)) as f64
                }
                GenericVariance::Exact => {
                    pre * count_nc(n_sites, n, n_sites - n, k)? as f64 / f as f64
                }
            }
        };
        comps.push(Component {
            w: f as f64 / norm,
            mu,
            var,
        });
    }
    GaussianMixture::new(comps)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XxProjectionReport {
    pub dim: usize,
    pub mean: f64,
    pub variance: f64,
    pub mean_formula: f64,
    pub variance_formula: f64,
    pub mean_deviation: f64,
    pub variance_deviation: f64,
}

pub const XX_MAX_N: usize = 12;

/// Builds the `n`-conserving part of the rotated Hamiltonian on the
/// `C(N, n)` states with `n` up spins and compares its first two moments
/// with `√(λ²+α²)(N-2n)` and `2n(N-n)/(N-1)·cos⁴φ`.
pub fn xx_projection_check(n_sites: usize, lambda: f64, alpha: f64, n: usize) -> Result<XxProjectionReport> {
    check_n(n_sites, n)?;
    if n_sites < 3 {
        return Err(Error::InvalidArgs("projection needs N >= 3".into()));
    }
    if n_sites > XX_MAX_N {
        return Err(Error::CapExceeded {
            what: "projection spin count",
            requested: n_sites as u64,
            limit: XX_MAX_N as u64,
        });
    }
    let h2 = lambda * lambda + alpha * alpha;
    if h2 == 0.0 {
        return Err(Error::InvalidArgs("projection needs a nonzero field".into()));
    }
    let h = h2.sqrt();
    let cos2 = lambda * lambda / h2;
    let states: Vec<u64> = (0..1u64 << n_sites)
        .filter(|b| b.count_ones() as usize == n)
        .collect();
    let dim = states.len();
    let index = |b: u64| states.binary_search(&b).expect("state in subspace");
    let mut m = Mat::<f64>::zeros(dim, dim);
    let diag = h * (n_sites as f64 - 2.0 * n as f64);
    for (j, &b) in states.iter().enumerate() {
        m[(j, j)] = diag;
        for i in 0..n_sites {
            let pair = (1u64 << i) | (1u64 << ((i + 1) % n_sites));
            if (b & pair).count_ones() == 1 {
                m[(index(b ^ pair), j)] -= cos2;
            }
        }
    }
    let d = dim as f64;
    let mean = (0..dim).map(|i| m[(i, i)]).sum::<f64>() / d;
    let mut sq = 0.0;
    for j in 0..dim {
        for i in 0..dim {
            sq += m[(i, j)] * m[(i, j)];
        }
    }
    let variance = sq / d - mean * mean;
    let mean_formula = diag;
    let variance_formula = 2.0 * k_bar_f64(n_sites, n) * cos2 * cos2;
    Ok(XxProjectionReport {
        dim,
        mean,
        variance,
        mean_formula,
        variance_formula,
        mean_deviation: (mean - mean_formula).abs(),
        variance_deviation: (variance - variance_formula).abs(),
    })
}
