//! Transfer-matrix engine: layer and gap matrices, chain products,
//! scattering amplitudes, intra-lattice field profiles and Bloch bands.

mod bands;
mod chain;
mod field;
mod matrix;

pub use bands::{bloch_phase, density_of_states, unwrap_dispersion, DensityOfStates, GAP_THRESHOLD};
pub use chain::{chain_matrix, chain_matrix_sequential, scatter, scatter_chain, ScatterResult, Slab, SlabChain};
pub use field::{field_profile, slab_positions, FieldSample};
pub use matrix::{gap_matrix, layer_matrix, phase_matrix, TransferMatrix, OVERFLOW_LIMIT};
