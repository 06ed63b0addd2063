//! Bragg reflection, transmission and absorption spectra of one-dimensional
//! optical lattices of cold atoms, computed with 2×2 transfer matrices.
//!
//! The crate is organized bottom-up:
//!
//! * [`geometry`]: lattice geometry, thermal widths, Debye-Waller factor,
//!   effective and penetration layer counts.
//! * [`response`]: single-layer reflection coefficient ζ and absorption
//!   cross section for a weighted set of hyperfine lines.
//! * [`engine`]: layer/gap matrices, chain products, r/t/R/T/A/φ, field
//!   profiles and Bloch bands.
//! * [`lattice`]: slab chains for the perfect, sequential thermal and
//!   two-component lattice models.
//! * [`experiments`]: spectra and parameter scans, detector powers and an
//!   independent boundary-value solver used as an oracle.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod engine;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod lattice;
pub mod response;
pub mod units;

pub use engine::{ScatterResult, Slab, SlabChain, TransferMatrix};
pub use error::{Error, Result};
pub use experiments::{DeltaGrid, SpectrumRow, SpectrumTable};
pub use geometry::{DerivedGeometry, LatticeGeometry};
pub use lattice::{LatticeModel, PotentialForm, ThermalModelConfig};
pub use response::{AtomResponseConfig, SpectralLine};

/// Version string recorded in output metadata.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
