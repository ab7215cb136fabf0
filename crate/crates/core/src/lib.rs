//! Thermodynamic formalism for subshifts of finite type.
//!
//! The crate computes topological pressure, Perron–Frobenius–Ruelle data,
//! equilibrium measures, KMS inverse temperatures and the bimodule partition
//! function for Cuntz–Krieger-type systems over finite-dimensional
//! coefficient algebras. Everything is exact enumeration or dense linear
//! algebra on small matrices.
//!
//! Letters are stored 0-based internally and printed 1-based.

pub mod bimodule;
pub mod error;
pub mod io;
pub mod kms;
pub mod measures;
pub mod numeric;
pub mod potential;
pub mod pressure;
pub mod sft;
pub mod transfer;

pub use error::{Error, Result};
pub use kms::{kms_analyze, KmsReport};
pub use measures::{FreeEnergyReport, MarkovMeasure};
pub use potential::{BirkhoffTable, LocallyConstantPotential};
pub use pressure::{PressureEstimate, PressureRow};
pub use sft::{BlockRecoding, LabeledGraph, SoficCover, SpectralReport, TransitionMatrix, Word};
pub use transfer::{RpfData, TransferOperator};

/// Default tolerance of the spectral radius iteration.
pub const SPECTRAL_TOL: f64 = 1e-12;
/// Default iteration cap of the spectral radius iteration.
pub const SPECTRAL_MAX_ITER: usize = 10_000;
/// Default tolerance of the Perron–Frobenius–Ruelle solver.
pub const RPF_TOL: f64 = 1e-12;
/// Default iteration cap of the Perron–Frobenius–Ruelle solver.
pub const RPF_MAX_ITER: usize = 100_000;
/// Largest number of words a partition sum may enumerate.
pub const WORD_LIMIT: u128 = 100_000_000;
