//! High-level scans: spectra, atom-number and lattice-constant scans,
//! radial averaging, band structure, detector mapping and the independent
//! boundary-value oracle.

mod features;
mod oracle;
mod powers;
mod scans;
mod spectrum;

pub use features::{local_maxima, local_minima, DIP_PROMINENCE};
pub use oracle::{solve_boundary_value, MAX_ORACLE_SLABS};
pub use powers::{detected_powers, powers_from_coefficients, DetectorReading};
pub use scans::{
    atoms_to_density, band_structure, cell_matrix, chain_spectrum, detuned_lattice, lattice_constant_scan,
    radial_average, saturation_scan, BandTable, SaturationPoint, FILLED_ANTINODES,
};
pub use spectrum::{spectrum, spectrum_of_chain, DeltaGrid, SpectrumRow, SpectrumTable};
