//! su(1,1) generators on fixed-difference blocks, the two-mode squeeze
//! operator and the phase-space coordinates it acts on.

pub mod closed_form;
pub mod coords;
pub mod dfunction;
pub mod generators;
pub mod squeeze;

pub use closed_form::squeeze_matrix_element_closed;
pub use coords::{disk_to_param, DiskPoint, HyperboloidPoint, SqueezeParam};
pub use dfunction::{dfunction, dfunction_by_exponential, dfunction_element, DFunctionTable};
pub use generators::{block_generators, pair_coupling, DifferenceBlock};
pub use squeeze::{
    apply_squeeze, initial_guard, plan_truncation, squeeze_block_unitary, BlockEigen, Sign,
    SqueezeOptions, Squeezed,
};
