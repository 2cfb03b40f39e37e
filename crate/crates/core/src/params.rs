//! Model parameters for the periodic Ising chain
//!
//! `H = -Σ σˣ_n σˣ_{n+1} - λ Σ σᶻ_n - α Σ σˣ_n`, site `N+1` identified with site 1.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Longitudinal field fixed to zero; integrable.
    TransverseField,
    TwoField,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::TransverseField => f.write_str("tfim"),
            Model::TwoField => f.write_str("two-field"),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tfim" | "transverse-field" => Ok(Model::TransverseField),
            "two-field" | "two_field" => Ok(Model::TwoField),
            other => Err(Error::Parse(format!("unknown model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    n: usize,
    lambda: f64,
    alpha: f64,
    model: Model,
}

impl IsingParams {
    pub fn transverse(n: usize, lambda: f64) -> Result<Self> {
        Self::new(n, lambda, 0.0, Model::TransverseField)
    }

    pub fn two_field(n: usize, lambda: f64, alpha: f64) -> Result<Self> {
        Self::new(n, lambda, alpha, Model::TwoField)
    }

    pub fn new(n: usize, lambda: f64, alpha: f64, model: Model) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgs(format!("N must be at least 2, got {n}")));
        }
        if !lambda.is_finite() || !alpha.is_finite() {
            return Err(Error::InvalidArgs("couplings must be finite".into()));
        }
        if model == Model::TransverseField && alpha != 0.0 {
            return Err(Error::InvalidArgs(format!(
                "transverse-field model requires alpha = 0, got {alpha}"
            )));
        }
        Ok(Self {
            n,
            lambda,
            alpha,
            model,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn is_transverse(&self) -> bool {
        self.model == Model::TransverseField
    }

    /// Hilbert-space dimension `2^N`.
    pub fn dim(&self) -> Result<usize> {
        if self.n >= usize::BITS as usize - 1 {
            return Err(Error::CapExceeded {
                what: "spin count",
                requested: self.n as u64,
                limit: usize::BITS as u64 - 2,
            });
        }
        Ok(1usize << self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transverse_forces_zero_alpha() {
        assert!(IsingParams::new(4, 1.0, 0.5, Model::TransverseField).is_err());
        let p = IsingParams::transverse(4, 1.0).unwrap();
        assert_eq!(p.alpha(), 0.0);
        assert!(p.is_transverse());
    }

    #[test]
    fn rejects_tiny_chains() {
        assert!(IsingParams::two_field(1, 1.0, 1.0).is_err());
        assert!(IsingParams::two_field(2, 1.0, 1.0).is_ok());
    }

    #[test]
    fn model_round_trips_through_text() {
        for m in [Model::TransverseField, Model::TwoField] {
            assert_eq!(m.to_string().parse::<Model>().unwrap(), m);
        }
    }
}
