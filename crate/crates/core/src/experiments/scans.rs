use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::spectrum::{spectrum, spectrum_of_chain, DeltaGrid, SpectrumRow, SpectrumTable};
use crate::engine::{
    bloch_phase, density_of_states, layer_matrix, phase_matrix, unwrap_dispersion, Slab, TransferMatrix,
};
use crate::error::{Error, Result};
use crate::geometry::LatticeGeometry;
use crate::lattice::LatticeModel;
use crate::response::{zeta, AtomResponseConfig};
use crate::units::C_LIGHT;

/// Number of filled antinodes assumed when converting atom number to density.
pub const FILLED_ANTINODES: f64 = 1e4;

/// Mean density for `atoms` spread over [`FILLED_ANTINODES`] periods of
/// radial Gaussian area 2πσ_r².
pub fn atoms_to_density(atoms: f64, geom: &LatticeGeometry) -> f64 {
    let sigma_r = geom.derived().sigma_r;
    atoms / (FILLED_ANTINODES * geom.period() * 2.0 * PI * sigma_r * sigma_r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationPoint {
    pub atoms: f64,
    pub density: f64,
    pub max_r: f64,
    pub delta_at_max: f64,
}

/// Maximum of the reflection spectrum as a function of atom number.
pub fn saturation_scan(
    atom_numbers: &[f64],
    model: &LatticeModel,
    grid: &DeltaGrid,
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> Result<Vec<SaturationPoint>> {
    if atom_numbers.iter().any(|&n| !(n >= 0.0)) {
        return Err(Error::InvalidInput("atom numbers must be non-negative".into()));
    }
    atom_numbers
        .iter()
        .map(|&atoms| {
            let density = atoms_to_density(atoms, geom);
            let table = spectrum(&model.with_density(density), grid, cfg, geom)?;
            let (delta_at_max, max_r) = table.max_reflection();
            Ok(SaturationPoint {
                atoms,
                density,
                max_r,
                delta_at_max,
            })
        })
        .collect()
}

/// Geometry with the lattice constant detuned by `delta_lambda` from the
/// Bragg condition of the fixed probe angle, together with the density that
/// keeps the number of atoms per layer unchanged.
pub fn detuned_lattice(geom: &LatticeGeometry, density: f64, delta_lambda: f64) -> (LatticeGeometry, f64) {
    let matched = geom.lambda_brg / geom.beta_i.cos();
    let detuned = LatticeGeometry {
        lambda_dip: matched + delta_lambda,
        ..*geom
    };
    (detuned, density * matched / detuned.lambda_dip)
}

/// One spectrum per lattice-constant detuning (metres). Atoms per layer
/// are held fixed while the period changes.
pub fn lattice_constant_scan(
    delta_lambdas: &[f64],
    model: &LatticeModel,
    grid: &DeltaGrid,
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> Result<Vec<SpectrumTable>> {
    delta_lambdas
        .iter()
        .map(|&dl| {
            let (g, n) = detuned_lattice(geom, model.density(), dl);
            let mut table = spectrum(&model.with_density(n), grid, cfg, &g)?;
            table.set_meta("delta_lambda_dip_nm", format!("{}", dl * 1e9));
            table.set_meta("label", format!("dl={:.3} nm", dl * 1e9));
            Ok(table)
        })
        .collect()
}

/// Area-weighted average of spectra over a Gaussian radial density profile.
///
/// The disc of radius 2σ_r is cut into `n_rings` equal-area rings; ring i
/// is represented by its inner radius ρᵢ = 2σ_r √(i/n_rings) and density
/// n_peak e^{−ρᵢ²/2σ_r²}. R and T are averaged, A = 1 − R − T, and φ is the
/// phase of the averaged complex amplitude r.
pub fn radial_average(
    model: &LatticeModel,
    sigma_r: f64,
    n_peak: f64,
    n_rings: usize,
    grid: &DeltaGrid,
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> Result<SpectrumTable> {
    if n_rings < 1 {
        return Err(Error::InvalidInput("n_rings must be at least 1".into()));
    }
    grid.validate()?;
    let deltas = grid.values();
    let outer = 2.0 * sigma_r;
    let densities: Vec<f64> = (0..n_rings)
        .map(|i| {
            let rho = outer * (i as f64 / n_rings as f64).sqrt();
            if sigma_r.is_infinite() {
                n_peak
            } else {
                n_peak * (-rho * rho / (2.0 * sigma_r * sigma_r)).exp()
            }
        })
        .collect();

    let w = 1.0 / n_rings as f64;
    let mut acc_r = vec![0.0; deltas.len()];
    let mut acc_t = vec![0.0; deltas.len()];
    let mut acc_amp = vec![Complex64::default(); deltas.len()];
    for &n in &densities {
        let chain = model.with_density(n).build(geom)?;
        let amps: Vec<_> = deltas
            .par_iter()
            .map(|&d| crate::engine::scatter_chain(&chain, d * cfg.gamma, cfg, geom))
            .collect::<Result<Vec<_>>>()?;
        for (i, s) in amps.iter().enumerate() {
            acc_r[i] += w * s.big_r;
            acc_t[i] += w * s.big_t;
            acc_amp[i] += w * s.r;
        }
    }
    let rows = deltas
        .iter()
        .enumerate()
        .map(|(i, &d)| SpectrumRow {
            delta_over_gamma: d,
            big_r: acc_r[i],
            big_t: acc_t[i],
            big_a: 1.0 - acc_r[i] - acc_t[i],
            phi: acc_amp[i].im.atan2(acc_amp[i].re),
        })
        .collect();
    let mut table = SpectrumTable {
        rows,
        metadata: model.describe(),
    };
    table.set_meta("radial_rings", n_rings.to_string());
    table.set_meta("sigma_r_um", format!("{}", sigma_r * 1e6));
    Ok(table)
}

/// Sampled Bloch dispersion of one unit cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BandTable {
    pub delta_over_gamma: Vec<f64>,
    /// Unwrapped Bloch phase, Im θ ≥ 0.
    pub theta: Vec<Complex64>,
    pub dos: Vec<f64>,
    pub coarse_grid: bool,
}

/// Unit-cell matrix with the probe wavenumber following the detuning,
/// k(Δ) = k_brg (1 + Δ/ω_brg). With `lossless`, only Re ζ is kept.
pub fn cell_matrix(
    cell: &[Slab],
    delta: f64,
    lossless: bool,
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> TransferMatrix {
    let omega = 2.0 * PI * C_LIGHT / geom.lambda_brg;
    let k_axial = geom.k_axial() * (1.0 + delta / omega);
    cell.iter().fold(TransferMatrix::IDENTITY, |m, s| {
        let mut z = zeta(s.surface_density, delta - s.stark_shift, cfg);
        if lossless {
            z.im = 0.0;
        }
        m * layer_matrix(z) * phase_matrix(k_axial * s.gap_after)
    })
}

/// Bloch phase and density of states of `cell` across the detuning grid.
pub fn band_structure(
    cell: &[Slab],
    grid: &DeltaGrid,
    lossless: bool,
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> Result<BandTable> {
    grid.validate()?;
    let deltas = grid.values();
    let raw: Vec<Complex64> = deltas
        .iter()
        .map(|&d| bloch_phase(&cell_matrix(cell, d * cfg.gamma, lossless, cfg, geom)))
        .collect();
    let theta = unwrap_dispersion(&raw);
    let dos = density_of_states(&raw, grid.step().max(f64::MIN_POSITIVE));
    Ok(BandTable {
        delta_over_gamma: deltas,
        theta,
        dos: dos.rho,
        coarse_grid: dos.coarse_grid,
    })
}

/// Spectrum of a single chain over a grid, for callers that build chains
/// themselves.
pub fn chain_spectrum(
    chain: &crate::engine::SlabChain,
    grid: &DeltaGrid,
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> Result<SpectrumTable> {
    grid.validate()?;
    spectrum_of_chain(chain, &grid.values(), cfg, geom)
}
