//! Dense Hamiltonians in the σᶻ product basis.
//!
//! Basis index `b`: bit `n` clear means σᶻ_n = +1.

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::params::IsingParams;
use crate::spectrum::{ManyBodySpectrum, Method};

/// `coef · Π_{x_mask} σˣ · Π_{z_mask} σᶻ` with disjoint masks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    pub coef: f64,
    pub x_mask: u64,
    pub z_mask: u64,
}

impl PauliTerm {
    pub fn new(coef: f64, x_mask: u64, z_mask: u64) -> Self {
        debug_assert_eq!(x_mask & z_mask, 0, "overlapping masks would need σʸ");
        Self {
            coef,
            x_mask,
            z_mask,
        }
    }

    /// `(row, value)` of the single nonzero entry in column `b`.
    #[inline]
    pub fn apply(&self, b: u64) -> (u64, f64) {
        let sign = if (b & self.z_mask).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        (b ^ self.x_mask, self.coef * sign)
    }
}

/// Limits applied before any dense allocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenseLimits {
    pub max_n: usize,
    pub memory_bytes: u64,
}

impl Default for DenseLimits {
    fn default() -> Self {
        Self {
            max_n: 14,
            memory_bytes: 4 << 30,
        }
    }
}

impl DenseLimits {
    fn check(&self, n: usize) -> Result<usize> {
        if n > self.max_n {
            return Err(Error::CapExceeded {
                what: "dense spin count",
                requested: n as u64,
                limit: self.max_n as u64,
            });
        }
        let dim = 1u64 << n;
        let bytes = dim.saturating_mul(dim).saturating_mul(8);
        if bytes > self.memory_bytes {
            return Err(Error::CapExceeded {
                what: "dense matrix bytes",
                requested: bytes,
                limit: self.memory_bytes,
            });
        }
        Ok(dim as usize)
    }
}

fn site(i: usize, n: usize) -> u64 {
    1u64 << (i % n)
}

/// Pauli decomposition of the chain Hamiltonian. Every bond of the periodic
/// sum is emitted, so for `N = 2` the single physical bond appears twice.
pub fn ising_terms(params: &IsingParams) -> Vec<PauliTerm> {
    let n = params.n();
    let mut terms = Vec::with_capacity(3 * n);
    for i in 0..n {
        terms.push(PauliTerm::new(-1.0, site(i, n) | site(i + 1, n), 0));
    }
    if params.lambda() != 0.0 {
        for i in 0..n {
            terms.push(PauliTerm::new(-params.lambda(), 0, site(i, n)));
        }
    }
    if params.alpha() != 0.0 {
        for i in 0..n {
            terms.push(PauliTerm::new(-params.alpha(), site(i, n), 0));
        }
    }
    terms
}

/// The same Hamiltonian after rotating every spin so that the combined field
/// points along z: `-h Σσᶻ - Σ[sin²φ σᶻσᶻ + sinφ cosφ (σᶻσˣ + σˣσᶻ) + cos²φ σˣσˣ]`
/// with `h = √(λ²+α²)`, `sin φ = α/h`. Unitarily equivalent to [`ising_terms`].
///
/// In this frame the diagonal at λ = 0 is `α(N-2n) + 4k - N` with `n` the
/// number of up spins and `k` the number of up blocks.
pub fn rotated_frame_terms(params: &IsingParams) -> Result<Vec<PauliTerm>> {
    let n = params.n();
    let h = params.lambda().hypot(params.alpha());
    if h == 0.0 {
        return Err(Error::InvalidArgs(
            "rotated frame needs a nonzero field".into(),
        ));
    }
    let s = params.alpha() / h;
    let c = params.lambda() / h;
    let mut terms = Vec::with_capacity(5 * n);
    for i in 0..n {
        let a = site(i, n);
        let b = site(i + 1, n);
        terms.push(PauliTerm::new(-h, 0, a));
        terms.push(PauliTerm::new(-s * s, 0, a | b));
        if s * c != 0.0 {
            terms.push(PauliTerm::new(-s * c, b, a));
            terms.push(PauliTerm::new(-s * c, a, b));
        }
        if c != 0.0 {
            terms.push(PauliTerm::new(-c * c, a | b, 0));
        }
    }
    Ok(terms)
}

/// Dense `2^N × 2^N` matrix of a sum of Pauli terms.
pub fn dense_from_terms(n: usize, terms: &[PauliTerm], limits: DenseLimits) -> Result<Mat<f64>> {
    let dim = limits.check(n)?;
    let mut m = Mat::<f64>::zeros(dim, dim);
    for b in 0..dim as u64 {
        for t in terms {
            let (row, v) = t.apply(b);
            m[(row as usize, b as usize)] += v;
        }
    }
    Ok(m)
}

pub fn build_hamiltonian(params: &IsingParams) -> Result<Mat<f64>> {
    build_hamiltonian_with(params, DenseLimits::default())
}

pub fn build_hamiltonian_with(params: &IsingParams, limits: DenseLimits) -> Result<Mat<f64>> {
    dense_from_terms(params.n(), &ising_terms(params), limits)
}

/// Sorted eigenvalues of a dense symmetric matrix.
pub fn symmetric_eigenvalues(m: &Mat<f64>) -> Result<Vec<f64>> {
    let mut ev = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::EigensolverFailure(format!("{e:?}")))?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn exact_spectrum(params: &IsingParams) -> Result<ManyBodySpectrum> {
    exact_spectrum_with(params, DenseLimits::default())
}

pub fn exact_spectrum_with(params: &IsingParams, limits: DenseLimits) -> Result<ManyBodySpectrum> {
    let h = build_hamiltonian_with(params, limits)?;
    let ev = symmetric_eigenvalues(&h)?;
    ManyBodySpectrum::new(ev, Method::Dense, *params)
}

const CLASSICAL_MAX_N: usize = 26;

/// At λ = 0 the Hamiltonian is diagonal in the σˣ basis; enumerate it directly.
pub fn classical_spectrum(params: &IsingParams) -> Result<ManyBodySpectrum> {
    if params.lambda() != 0.0 {
        return Err(Error::InvalidArgs(
            "classical enumeration requires lambda = 0".into(),
        ));
    }
    let n = params.n();
    if n > CLASSICAL_MAX_N {
        return Err(Error::CapExceeded {
            what: "classical spin count",
            requested: n as u64,
            limit: CLASSICAL_MAX_N as u64,
        });
    }
    let alpha = params.alpha();
    let energies = (0..1u64 << n)
        .map(|b| {
            let s = |i: usize| if b >> (i % n) & 1 == 0 { 1.0 } else { -1.0 };
            (0..n)
                .map(|i| -s(i) * s(i + 1) - alpha * s(i))
                .sum::<f64>()
        })
        .collect();
    ManyBodySpectrum::new(energies, Method::Classical, *params)
}
