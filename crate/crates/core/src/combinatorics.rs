//! Counting cyclic spin strings by their block structure.
//!
//! A string of `N` spins with `n` up spins arranged in `k` maximal cyclic
//! up-blocks also has `k` down-blocks. All counts are exact `u128`, which
//! holds every quantity up to `N = 64`.
//!
//! Formulas are written with the composition count `P(n, k)`, the number of
//! ways to write `n` as an ordered sum of `k` positive parts. It equals
//! `C(n-1, k-1)` for `k >= 1` and fixes the edge cases (`P(0, 0) = 1`) that
//! the bare binomial shorthand leaves ambiguous.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub const MAX_N: usize = 64;
pub const BRUTE_FORCE_MAX_N: usize = 16;

fn overflow(what: &str) -> Error {
    Error::Overflow(what.to_string())
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> Result<u128> {
    if n < 0 || k < 0 || k > n {
        return Ok(0);
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut c: u128 = 1;
    for i in 0..k {
        c = c
            .checked_mul(n - i)
            .ok_or_else(|| overflow("binomial"))?
            / (i + 1);
    }
    Ok(c)
}

/// Number of compositions of `n` into exactly `k` positive parts.
pub fn compositions(n: i64, k: i64) -> Result<u128> {
    if n < 0 || k < 0 {
        return Ok(0);
    }
    if k == 0 {
        return Ok(u128::from(n == 0));
    }
    binomial(n - 1, k - 1)
}

fn check_ring(n_sites: usize) -> Result<()> {
    if n_sites < 2 {
        return Err(Error::InvalidArgs(format!("ring needs N >= 2, got {n_sites}")));
    }
    if n_sites > MAX_N {
        return Err(Error::CapExceeded {
            what: "combinatorics ring size",
            requested: n_sites as u64,
            limit: MAX_N as u64,
        });
    }
    Ok(())
}

/// Checks that `(n, k)` is a realizable cell of the ring.
pub fn check_cell(n_sites: usize, n: usize, k: usize) -> Result<()> {
    check_ring(n_sites)?;
    if n > n_sites {
        return Err(Error::InvalidArgs(format!("n = {n} exceeds N = {n_sites}")));
    }
    let m = n_sites - n;
    let polarized = n == 0 || m == 0;
    let ok = if polarized { k == 0 } else { k >= 1 && k <= n.min(m) };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgs(format!(
            "no configurations with n = {n}, k = {k} on N = {n_sites}"
        )))
    }
}

/// All realizable cells, polarized ones included, in `(n, k)` order.
pub fn cells(n_sites: usize) -> Vec<(usize, usize)> {
    let mut out = vec![(0, 0)];
    for n in 1..n_sites {
        for k in 1..=n.min(n_sites - n) {
            out.push((n, k));
        }
    }
    out.push((n_sites, 0));
    out
}

/// Number of strings with `n` up spins in `k` up-blocks.
pub fn f_count(n_sites: usize, n: usize, k: usize) -> Result<u128> {
    check_cell(n_sites, n, k)?;
    if k == 0 {
        return Ok(1);
    }
    let m = n_sites - n;
    let num = (n_sites as u128)
        .checked_mul(compositions(n as i64, k as i64)?)
        .and_then(|v| v.checked_mul(compositions(m as i64, k as i64).ok()?))
        .ok_or_else(|| overflow("f_count"))?;
    debug_assert_eq!(num % k as u128, 0);
    Ok(num / k as u128)
}

/// Mean number of up-blocks among strings with `n` up spins.
pub fn k_bar(n_sites: usize, n: usize) -> Result<Ratio<i64>> {
    check_ring(n_sites)?;
    if n > n_sites {
        return Err(Error::InvalidArgs(format!("n = {n} exceeds N = {n_sites}")));
    }
    let nn = n_sites as i64;
    let n = n as i64;
    Ok(Ratio::new(n * (nn - n), nn - 1))
}

fn check_composition(n: usize, k: usize) -> Result<()> {
    if k > n || (k == 0) != (n == 0) {
        return Err(Error::InvalidArgs(format!(
            "{n} has no composition into {k} parts"
        )));
    }
    Ok(())
}

/// Total number of parts equal to 1 over all compositions of `n` into `k`.
pub fn count_n1(n: usize, k: usize) -> Result<u128> {
    check_composition(n, k)?;
    if k == 0 {
        return Ok(0);
    }
    Ok(k as u128 * compositions(n as i64 - 1, k as i64 - 1)?)
}

/// Total number of parts equal to 2 over all compositions of `n` into `k`.
pub fn count_n2(n: usize, k: usize) -> Result<u128> {
    check_composition(n, k)?;
    if k == 0 {
        return Ok(0);
    }
    Ok(k as u128 * compositions(n as i64 - 2, k as i64 - 1)?)
}

fn check_transition_args(n_sites: usize, n: usize, m: usize, k: usize) -> Result<()> {
    check_cell(n_sites, n, k)?;
    if n + m != n_sites {
        return Err(Error::InvalidArgs(format!("n + m = {} != N = {n_sites}", n + m)));
    }
    if n_sites < 3 {
        return Err(Error::InvalidArgs(
            "transition counts need N >= 3; the two-site ring repeats its bond".into(),
        ));
    }
    Ok(())
}

fn mul3(a: u128, b: u128, c: u128) -> Result<u128> {
    a.checked_mul(b)
        .and_then(|v| v.checked_mul(c))
        .ok_or_else(|| overflow("transition count"))
}

/// Adjacent pair flips `n -> n-2`, `k -> k-1` (an up-block of size 2
/// disappears), summed over all strings of the cell.
pub fn count_na(n_sites: usize, n: usize, m: usize, k: usize) -> Result<u128> {
    check_transition_args(n_sites, n, m, k)?;
    if k == 0 {
        return Ok(0);
    }
    let (n, m, k) = (n as i64, m as i64, k as i64);
    mul3(
        n_sites as u128,
        compositions(n - 2, k - 1)?,
        compositions(m, k)?,
    )
}

/// Adjacent pair flips `n -> n+2`, `k -> k+1` (a new up-block of size 2 is
/// cut out of the interior of a down-block), summed over the cell.
pub fn count_nb(n_sites: usize, n: usize, m: usize, k: usize) -> Result<u128> {
    check_transition_args(n_sites, n, m, k)?;
    if k == 0 {
        return Ok(if n == 0 { n_sites as u128 } else { 0 });
    }
    let (n, m, k) = (n as i64, m as i64, k as i64);
    let mut inner: u128 = 0;
    for s in 4..=m {
        let term = ((s - 3) as u128)
            .checked_mul(compositions(m - s, k - 1)?)
            .ok_or_else(|| overflow("count_nb"))?;
        inner = inner.checked_add(term).ok_or_else(|| overflow("count_nb"))?;
    }
    mul3(n_sites as u128, compositions(n, k)?, inner)
}

/// Adjacent pair flips that keep both `n` and `k` (a block edge moves by
/// one site), summed over the cell.
pub fn count_nc(n_sites: usize, n: usize, m: usize, k: usize) -> Result<u128> {
    check_transition_args(n_sites, n, m, k)?;
    if k == 0 {
        return Ok(0);
    }
    let (n, m, k) = (n as i64, m as i64, k as i64);
    // Strings of an ordered block sequence where a given down-block has size 1
    // and the adjacent up-block has size >= 2, plus the mirrored case.
    let pn = compositions(n, k)?;
    let pm = compositions(m, k)?;
    let pn1 = compositions(n - 1, k - 1)?;
    let pm1 = compositions(m - 1, k - 1)?;
    let a = pm1.checked_mul(pn - pn1);
    let b = pn1.checked_mul(pm - pm1);
    let sum = a
        .zip(b)
        .and_then(|(a, b)| a.checked_add(b))
        .ok_or_else(|| overflow("count_nc"))?;
    mul3(2, n_sites as u128, sum)
}

/// `f(n, k)` for every cell, polarized strings included.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCensus {
    pub n_sites: usize,
    pub table: BTreeMap<(usize, usize), u128>,
}

impl BlockCensus {
    pub fn total(&self) -> u128 {
        self.table.values().sum()
    }

    /// `Σ_k f(n, k)` for each `n`.
    pub fn row_sums(&self) -> Vec<u128> {
        let mut out = vec![0u128; self.n_sites + 1];
        for (&(n, _), &c) in &self.table {
            out[n] += c;
        }
        out
    }
}

pub fn block_census(n_sites: usize) -> Result<BlockCensus> {
    check_ring(n_sites)?;
    let mut table = BTreeMap::new();
    for (n, k) in cells(n_sites) {
        table.insert((n, k), f_count(n_sites, n, k)?);
    }
    Ok(BlockCensus { n_sites, table })
}

/// Unperturbed levels `E⁰ = α(N - 2n) + 4k - N` grouped exactly for a
/// rational `α = p/q`. Class label `R = 2qk - pn`, so that
/// `E⁰ = ((p - q)N + 2R) / q`; for `α = 1` this is `R = 2k - n`, `E⁰ = 2R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyCensus {
    pub n_sites: usize,
    pub p: i64,
    pub q: i64,
    pub classes: BTreeMap<i64, u128>,
    pub cells: BTreeMap<i64, Vec<(usize, usize)>>,
}

impl DegeneracyCensus {
    pub fn alpha(&self) -> Ratio<i64> {
        Ratio::new(self.p, self.q)
    }

    pub fn energy_of(&self, r: i64) -> Result<Ratio<i64>> {
        if !self.classes.contains_key(&r) {
            return Err(Error::UnknownClass(r));
        }
        Ok(Ratio::new(
            (self.p - self.q) * self.n_sites as i64 + 2 * r,
            self.q,
        ))
    }

    pub fn multiplicity(&self, r: i64) -> Result<u128> {
        self.classes.get(&r).copied().ok_or(Error::UnknownClass(r))
    }

    pub fn total(&self) -> u128 {
        self.classes.values().sum()
    }
}

pub fn class_label(p: i64, q: i64, n: usize, k: usize) -> i64 {
    2 * q * k as i64 - p * n as i64
}

pub fn degeneracy_census(n_sites: usize, alpha: Ratio<i64>) -> Result<DegeneracyCensus> {
    check_ring(n_sites)?;
    let (p, q) = (*alpha.numer(), *alpha.denom());
    let mut classes = BTreeMap::new();
    let mut members: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for (n, k) in cells(n_sites) {
        let r = class_label(p, q, n, k);
        *classes.entry(r).or_insert(0u128) += f_count(n_sites, n, k)?;
        members.entry(r).or_default().push((n, k));
    }
    Ok(DegeneracyCensus {
        n_sites,
        p,
        q,
        classes,
        cells: members,
    })
}

/// Per-cell totals obtained by scanning every string.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CellTally {
    pub strings: u128,
    pub na: u128,
    pub nb: u128,
    pub nc: u128,
    /// Up-blocks of size 1, summed over strings.
    pub singles: u128,
    /// Up-blocks of size 2, summed over strings.
    pub pairs: u128,
}

impl CellTally {
    fn merge(&mut self, o: &CellTally) {
        self.strings += o.strings;
        self.na += o.na;
        self.nb += o.nb;
        self.nc += o.nc;
        self.singles += o.singles;
        self.pairs += o.pairs;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForceCensus {
    pub n_sites: usize,
    pub cells: BTreeMap<(usize, usize), CellTally>,
    /// Adjacent pair flips that keep `2k - n` but fall in none of the
    /// three transition types; always zero.
    pub unclassified: u128,
}

impl BruteForceCensus {
    /// Exact degeneracy classes for `α = p/q` from the scanned cells.
    pub fn classes(&self, alpha: Ratio<i64>) -> BTreeMap<i64, u128> {
        let (p, q) = (*alpha.numer(), *alpha.denom());
        let mut out = BTreeMap::new();
        for (&(n, k), t) in &self.cells {
            *out.entry(class_label(p, q, n, k)).or_insert(0) += t.strings;
        }
        out
    }
}

/// `(n, k)` of a cyclic string whose set bits are up spins.
pub fn block_structure(bits: u64, n_sites: usize) -> (usize, usize) {
    let mask = if n_sites == 64 { u64::MAX } else { (1u64 << n_sites) - 1 };
    let x = bits & mask;
    let prev = ((x << 1) | (x >> (n_sites - 1))) & mask;
    (x.count_ones() as usize, (x & !prev).count_ones() as usize)
}

/// Sizes of the up-blocks of a cyclic string.
fn up_block_sizes(x: u64, n_sites: usize) -> Vec<usize> {
    let up = |i: usize| x >> (i % n_sites) & 1 == 1;
    let Some(start) = (0..n_sites).find(|&i| up(i) && !up(i + n_sites - 1)) else {
        return Vec::new();
    };
    let mut sizes = Vec::new();
    let mut run = 0;
    for off in 0..n_sites {
        if up(start + off) {
            run += 1;
        } else if run > 0 {
            sizes.push(run);
            run = 0;
        }
    }
    if run > 0 {
        sizes.push(run);
    }
    sizes
}

fn tally_string(x: u64, n_sites: usize) -> ((usize, usize), CellTally, u128) {
    let (n, k) = block_structure(x, n_sites);
    let mut t = CellTally {
        strings: 1,
        ..Default::default()
    };
    let mut unclassified = 0;
    if n_sites >= 3 {
        for i in 0..n_sites {
            let y = x ^ (1 << i) ^ (1 << ((i + 1) % n_sites));
            let (n2, k2) = block_structure(y, n_sites);
            let (dn, dk) = (n2 as i64 - n as i64, k2 as i64 - k as i64);
            match (dn, dk) {
                (-2, -1) => t.na += 1,
                (2, 1) => t.nb += 1,
                (0, 0) => t.nc += 1,
                _ if 2 * dk == dn => unclassified += 1,
                _ => {}
            }
        }
    }
    for s in up_block_sizes(x, n_sites) {
        match s {
            1 => t.singles += 1,
            2 => t.pairs += 1,
            _ => {}
        }
    }
    ((n, k), t, unclassified)
}

/// Scans all `2^N` strings. Transition tallies are left at zero for `N < 3`.
pub fn brute_force_census(n_sites: usize) -> Result<BruteForceCensus> {
    check_ring(n_sites)?;
    if n_sites > BRUTE_FORCE_MAX_N {
        return Err(Error::CapExceeded {
            what: "brute-force ring size",
            requested: n_sites as u64,
            limit: BRUTE_FORCE_MAX_N as u64,
        });
    }
    type Acc = (BTreeMap<(usize, usize), CellTally>, u128);
    let merge = |mut a: Acc, b: Acc| -> Acc {
        for (key, t) in b.0 {
            a.0.entry(key).or_default().merge(&t);
        }
        a.1 += b.1;
        a
    };
    let (cells, unclassified) = (0..1u64 << n_sites)
        .into_par_iter()
        .fold(
            || (BTreeMap::new(), 0u128),
            |mut acc: Acc, x| {
                let (key, t, u) = tally_string(x, n_sites);
                acc.0.entry(key).or_default().merge(&t);
                acc.1 += u;
                acc
            },
        )
        .reduce(|| (BTreeMap::new(), 0u128), merge);
    Ok(BruteForceCensus {
        n_sites,
        cells,
        unclassified,
    })
}
