//! Finite-dimensional Hilbert bimodule systems `X = q_1A ⊕ ... ⊕ q_dA` over a
//! multimatrix coefficient algebra, the diagonal subalgebra `D` and its pressure.

pub mod algebra;
pub mod dpotential;
pub mod partition;
pub mod system;

pub use algebra::{AlgebraElement, MultiMatrixAlgebra};
pub use dpotential::{DPotential, DPotentialSpec};
pub use partition::{
    check_commutation, bimodule_log_partition, bimodule_log_partitions, bimodule_partition,
    bimodule_pressure, CommutationReport, CommutationRow,
};
pub use system::{BimoduleSystem, Endomorphism, SystemSpec};
