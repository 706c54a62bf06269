//! Point-by-point sampling of the SU(1,1) Wigner function of two-mode states.
//!
//! A state is displaced on the hyperboloid by the two-mode squeeze operator,
//! its joint photon-number distribution is measured (optionally through a
//! lossy, saturating detector) and the parity-weighted histogram gives the
//! Wigner function at that point.

pub mod algebra;
pub mod detector;
pub mod error;
pub mod fock;
mod num;
pub mod oracles;
pub mod reconstruction;
pub mod wigner;

pub use algebra::{
    apply_squeeze, block_generators, dfunction, disk_to_param, squeeze_block_unitary,
    squeeze_matrix_element_closed, DFunctionTable, DifferenceBlock, DiskPoint, HyperboloidPoint,
    Sign, SqueezeOptions, SqueezeParam,
};
pub use detector::{
    apply_loss, parity_from_histogram, sample_shots, truncate_resolution, DetectorConfig,
    Histogram, NoiseConfig, SaturationPolicy, ShotConfig,
};
pub use error::{Error, Result};
pub use fock::{
    irrep_of, occupation_of, parity_sign, photon_distribution, Branch, HalfInt, IrrepIndex,
    JointPhotonDistribution, ModeOccupation, TwoModeState,
};
pub use num::Num;
pub use reconstruction::{reconstruct_irrep, IrrepDensityBlock, QuadratureGrid};
pub use wigner::{wigner_at, wigner_grid, wigner_origin, GridSpec, Protocol, WignerField};
