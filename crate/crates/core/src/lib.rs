//! Exact spectra of the periodic quantum Ising chain in transverse and
//! longitudinal fields, and analytic approximations to its spectral density.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod combinatorics;
pub mod curve;
pub mod density;
pub mod error;
pub mod fermion;
pub mod hamiltonian;
pub mod io;
pub mod mixture;
pub mod moments;
pub mod params;
pub mod peaks;
pub mod quadrature;
pub mod spectrum;

pub use error::{Error, Result};
pub use params::{IsingParams, Model};
pub use spectrum::{ManyBodySpectrum, Method};
