use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::params::IsingParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Fermion,
    /// Diagonal in the σˣ basis; only valid at λ = 0.
    Classical,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Dense => "dense",
            Method::Fermion => "fermion",
            Method::Classical => "classical",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Method::Dense),
            "fermion" => Ok(Method::Fermion),
            "classical" => Ok(Method::Classical),
            other => Err(Error::Parse(format!("unknown method '{other}'"))),
        }
    }
}

/// The full set of `2^N` many-body eigenvalues, sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManyBodySpectrum {
    energies: Vec<f64>,
    method: Method,
    params: IsingParams,
}

impl ManyBodySpectrum {
    /// Sorts `energies` and checks that there are exactly `2^N` of them.
    pub fn new(mut energies: Vec<f64>, method: Method, params: IsingParams) -> Result<Self> {
        let dim = params.dim()?;
        if energies.len() != dim {
            return Err(Error::InvalidArgs(format!(
                "spectrum has {} values, expected 2^{} = {dim}",
                energies.len(),
                params.n()
            )));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidArgs("spectrum contains non-finite values".into()));
        }
        energies.sort_by(f64::total_cmp);
        Ok(Self {
            energies,
            method,
            params,
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn into_energies(self) -> Vec<f64> {
        self.energies
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn params(&self) -> &IsingParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Largest elementwise difference to another spectrum of the same size.
    pub fn max_abs_diff(&self, other: &ManyBodySpectrum) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::InvalidArgs("spectra differ in length".into()));
        }
        Ok(self
            .energies
            .iter()
            .zip(&other.energies)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// `max_i |E_i + E_{last-i}|`; zero for a spectrum symmetric under `E -> -E`.
    pub fn mirror_asymmetry(&self) -> f64 {
        let e = &self.energies;
        let n = e.len();
        (0..n / 2 + n % 2)
            .map(|i| (e[i] + e[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_on_construction() {
        let p = IsingParams::transverse(2, 0.0).unwrap();
        let s = ManyBodySpectrum::new(vec![3.0, -1.0, 0.0, -2.0], Method::Dense, p).unwrap();
        assert_eq!(s.energies(), &[-2.0, -1.0, 0.0, 3.0]);
    }

    #[test]
    fn rejects_wrong_length() {
        let p = IsingParams::transverse(3, 0.0).unwrap();
        assert!(ManyBodySpectrum::new(vec![0.0; 7], Method::Dense, p).is_err());
    }

    #[test]
    fn mirror_asymmetry_of_symmetric_set_is_zero() {
        let p = IsingParams::transverse(2, 0.0).unwrap();
        let s = ManyBodySpectrum::new(vec![-2.0, -0.5, 0.5, 2.0], Method::Dense, p).unwrap();
        assert_eq!(s.mirror_asymmetry(), 0.0);
    }
}
