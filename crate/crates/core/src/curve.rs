use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which variable the grid is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Abscissa {
    /// Total energy `E`.
    Energy,
    /// `e = E / N`.
    PerSpin,
    /// `ε = E / s`, `s = √(N(1+λ²+α²))`.
    Rescaled,
}

impl fmt::Display for Abscissa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Abscissa::Energy => "energy",
            Abscissa::PerSpin => "per-spin",
            Abscissa::Rescaled => "rescaled",
        })
    }
}

impl FromStr for Abscissa {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "energy" => Ok(Abscissa::Energy),
            "per-spin" => Ok(Abscissa::PerSpin),
            "rescaled" => Ok(Abscissa::Rescaled),
            other => Err(Error::Parse(format!("unknown abscissa '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    UnitIntegral,
    /// Integrates to the number of states.
    Counts,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::UnitIntegral => "unit-integral",
            Normalization::Counts => "counts",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit-integral" => Ok(Normalization::UnitIntegral),
            "counts" => Ok(Normalization::Counts),
            other => Err(Error::Parse(format!("unknown normalization '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub abscissa: Abscissa,
    pub norm: Normalization,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl DensityCurve {
    pub fn new(
        abscissa: Abscissa,
        norm: Normalization,
        grid: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidArgs(format!(
                "grid has {} points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgs("grid must be strictly ascending".into()));
        }
        Ok(Self {
            abscissa,
            norm,
            grid,
            values,
        })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(abscissa: Abscissa, grid: &Grid, f: F) -> Self {
        let xs = grid.points();
        let values = xs.iter().map(|&x| f(x)).collect();
        Self {
            abscissa,
            norm: Normalization::UnitIntegral,
            grid: xs,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.values)
    }

    /// Rescales the abscissa by `x -> x·scale` while keeping the mass fixed.
    pub fn rescale(&self, scale: f64, abscissa: Abscissa) -> DensityCurve {
        let (grid, values) = if scale > 0.0 {
            (
                self.grid.iter().map(|x| x * scale).collect(),
                self.values.iter().map(|v| v / scale).collect(),
            )
        } else {
            (
                self.grid.iter().rev().map(|x| x * scale).collect(),
                self.values.iter().rev().map(|v| v / scale.abs()).collect(),
            )
        };
        DensityCurve {
            abscissa,
            norm: self.norm,
            grid,
            values,
        }
    }

    /// Linear interpolation; zero outside the grid.
    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        if g.is_empty() || x < g[0] || x > g[g.len() - 1] {
            return 0.0;
        }
        let i = g.partition_point(|&v| v <= x);
        if i == 0 {
            return self.values[0];
        }
        if i == g.len() {
            return self.values[g.len() - 1];
        }
        let t = (x - g[i - 1]) / (g[i] - g[i - 1]);
        self.values[i - 1] + t * (self.values[i] - self.values[i - 1])
    }
}

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

/// Uniform grid with inclusive endpoints, written `LO:HI:POINTS`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return Err(Error::InvalidArgs(format!("grid needs lo < hi, got {lo}:{hi}")));
        }
        if points < 2 {
            return Err(Error::InvalidArgs("grid needs at least 2 points".into()));
        }
        Ok(Self { lo, hi, points })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.points - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.hi
                } else {
                    self.lo + h * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("grid '{s}' is not LO:HI:POINTS")));
        }
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{t}' in grid")))
        };
        let points = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad point count '{}'", parts[2])))?;
        Grid::new(num(parts[0])?, num(parts[1])?, points)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.points)
    }
}
