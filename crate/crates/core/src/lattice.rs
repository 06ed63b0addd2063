//! Slab-chain builders for the three lattice models: a perfect lattice,
//! the sequential (Boltzmann-weighted sublayer) thermal lattice with
//! optional local Stark shifts, and the ordered + homogeneous two-component
//! ansatz.
//!
//! The trapping potential has period λ_dip/2 with its minima (antinodes) at
//! z = 0 mod λ_dip/2. Each period is cut into `n_ss` equal slices whose
//! midpoints sit at z_ν = ν δz, so slice 0 is centred on the antinode.

use crate::engine::{Slab, SlabChain};
use crate::error::{Error, Result};
use crate::geometry::LatticeGeometry;
use crate::units::kelvin_to_angular;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PotentialForm {
    /// W(z) = U₀ k_dip² z², the expansion of the well around its minimum.
    #[default]
    Harmonic,
    /// W(z) = U₀ sin²(k_dip z), i.e. V(z) = −U₀ cos²(k_dip z) shifted to its minimum.
    Sinusoidal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalModelConfig {
    /// Mean volume density, m⁻³.
    pub density: f64,
    pub n_s: usize,
    pub n_ss: usize,
    /// K.
    pub temperature: f64,
    /// Trap depth U₀/ħ, rad/s.
    pub u0: f64,
    pub stark_enabled: bool,
    pub potential_form: PotentialForm,
}

impl ThermalModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_s < 1 || self.n_ss < 1 {
            return Err(Error::InvalidInput("n_s and n_ss must be at least 1".into()));
        }
        if !(self.temperature >= 0.0) || !(self.density >= 0.0) || !(self.u0 > 0.0) {
            return Err(Error::InvalidInput(
                "thermal model needs T >= 0, density >= 0 and U0 > 0".into(),
            ));
        }
        Ok(())
    }

    /// Height of the potential above its minimum at z, rad/s.
    pub fn potential(&self, z: f64, geom: &LatticeGeometry) -> f64 {
        let kz = geom.k_dip() * wrap(z, geom.period());
        match self.potential_form {
            PotentialForm::Harmonic => self.u0 * kz * kz,
            PotentialForm::Sinusoidal => self.u0 * kz.sin().powi(2),
        }
    }

    /// Local trap depth felt by an atom at z; this is the blue shift of its
    /// resonance. Equals U₀ at the antinode and is clamped at zero where the
    /// harmonic form overshoots the true depth.
    pub fn local_depth(&self, z: f64, geom: &LatticeGeometry) -> f64 {
        (self.u0 - self.potential(z, geom)).max(0.0)
    }
}

/// Maps z into [−p/2, p/2).
fn wrap(z: f64, period: f64) -> f64 {
    z - period * (z / period + 0.5).floor()
}

fn sublayer_positions(n_ss: usize, geom: &LatticeGeometry) -> impl Iterator<Item = f64> {
    let dz = geom.period() / n_ss as f64;
    let p = geom.period();
    (0..n_ss).map(move |nu| wrap(nu as f64 * dz, p))
}

fn boltzmann_weights(cfg: &ThermalModelConfig, geom: &LatticeGeometry) -> Vec<f64> {
    let kt = kelvin_to_angular(cfg.temperature);
    sublayer_positions(cfg.n_ss, geom)
        .map(|z| (-cfg.potential(z, geom) / kt).exp())
        .collect()
}

/// Boltzmann-weighted local density n_loc(z), m⁻³, normalized on the
/// midpoint grid so that Σ_ν n_loc(z_ν) δz = n λ_dip/2 per period.
/// At T = 0 the whole period's atoms sit in the slice around the antinode.
pub fn local_density(z: f64, cfg: &ThermalModelConfig, geom: &LatticeGeometry) -> f64 {
    let dz = geom.period() / cfg.n_ss as f64;
    if cfg.temperature == 0.0 {
        let zw = wrap(z, geom.period());
        return if zw >= -0.5 * dz && zw < 0.5 * dz {
            cfg.density * cfg.n_ss as f64
        } else {
            0.0
        };
    }
    let weights = boltzmann_weights(cfg, geom);
    let mean = weights.iter().sum::<f64>() / weights.len() as f64;
    let kt = kelvin_to_angular(cfg.temperature);
    cfg.density * (-cfg.potential(z, geom) / kt).exp() / mean
}

/// `n_s` antinode layers of surface density n λ_dip/2 spaced by λ_dip/2.
pub fn perfect_lattice(density: f64, n_s: usize, geom: &LatticeGeometry) -> Result<SlabChain> {
    if n_s < 1 {
        return Err(Error::InvalidInput("n_s must be at least 1".into()));
    }
    if !(density >= 0.0) {
        return Err(Error::InvalidInput("density must be non-negative".into()));
    }
    let p = geom.period();
    Ok(SlabChain::periodic(vec![Slab::new(density * p, p)], n_s))
}

/// Thermal lattice resolved into `n_ss` sublayers per period, each carrying
/// its Boltzmann share of the atoms and, if enabled, its local Stark shift.
pub fn sequential_lattice(cfg: &ThermalModelConfig, geom: &LatticeGeometry) -> Result<SlabChain> {
    cfg.validate()?;
    let p = geom.period();
    let dz = p / cfg.n_ss as f64;
    let per_period = cfg.density * p;

    let cell: Vec<Slab> = if cfg.temperature == 0.0 {
        (0..cfg.n_ss)
            .map(|nu| Slab {
                surface_density: if nu == 0 { per_period } else { 0.0 },
                stark_shift: if nu == 0 && cfg.stark_enabled { cfg.u0 } else { 0.0 },
                gap_after: dz,
            })
            .collect()
    } else {
        let weights = boltzmann_weights(cfg, geom);
        let total: f64 = weights.iter().sum();
        sublayer_positions(cfg.n_ss, geom)
            .zip(&weights)
            .map(|(z, w)| Slab {
                surface_density: per_period * w / total,
                stark_shift: if cfg.stark_enabled {
                    cfg.local_depth(z, geom)
                } else {
                    0.0
                },
                gap_after: dz,
            })
            .collect()
    };
    Ok(SlabChain::periodic(cell, cfg.n_s))
}

/// Ordered lattice of density n f_DW plus a homogeneous cloud of density
/// n (1 − f_DW). Each period holds one ordered sheet at the antinode
/// followed by `n_ss` evenly spaced sublayers carrying the disordered atoms.
pub fn two_component_lattice(
    density: f64,
    f_dw: f64,
    n_s: usize,
    n_ss: usize,
    geom: &LatticeGeometry,
) -> Result<SlabChain> {
    if !(0.0..=1.0).contains(&f_dw) {
        return Err(Error::InvalidInput(format!("f_dw = {f_dw} outside [0, 1]")));
    }
    if n_s < 1 || n_ss < 1 {
        return Err(Error::InvalidInput("n_s and n_ss must be at least 1".into()));
    }
    if !(density >= 0.0) {
        return Err(Error::InvalidInput("density must be non-negative".into()));
    }
    let p = geom.period();
    let dz = p / n_ss as f64;
    let mut cell = Vec::with_capacity(n_ss + 1);
    cell.push(Slab::new(density * f_dw * p, 0.0));
    let diffuse = density * (1.0 - f_dw) * p / n_ss as f64;
    cell.extend((0..n_ss).map(|_| Slab::new(diffuse, dz)));
    Ok(SlabChain::periodic(cell, n_s))
}

/// A lattice model with all parameters needed to build its chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LatticeModel {
    Perfect {
        density: f64,
        n_s: usize,
    },
    Sequential(ThermalModelConfig),
    TwoComponent {
        density: f64,
        f_dw: f64,
        n_s: usize,
        n_ss: usize,
    },
}

impl LatticeModel {
    pub fn build(&self, geom: &LatticeGeometry) -> Result<SlabChain> {
        match *self {
            LatticeModel::Perfect { density, n_s } => perfect_lattice(density, n_s, geom),
            LatticeModel::Sequential(ref cfg) => sequential_lattice(cfg, geom),
            LatticeModel::TwoComponent {
                density,
                f_dw,
                n_s,
                n_ss,
            } => two_component_lattice(density, f_dw, n_s, n_ss, geom),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LatticeModel::Perfect { .. } => "perfect",
            LatticeModel::Sequential(_) => "sequential",
            LatticeModel::TwoComponent { .. } => "two_component",
        }
    }

    pub fn density(&self) -> f64 {
        match *self {
            LatticeModel::Perfect { density, .. } | LatticeModel::TwoComponent { density, .. } => density,
            LatticeModel::Sequential(cfg) => cfg.density,
        }
    }

    pub fn with_density(&self, density: f64) -> LatticeModel {
        let mut m = *self;
        match &mut m {
            LatticeModel::Perfect { density: d, .. } | LatticeModel::TwoComponent { density: d, .. } => *d = density,
            LatticeModel::Sequential(cfg) => cfg.density = density,
        }
        m
    }

    pub fn n_s(&self) -> usize {
        match *self {
            LatticeModel::Perfect { n_s, .. } | LatticeModel::TwoComponent { n_s, .. } => n_s,
            LatticeModel::Sequential(cfg) => cfg.n_s,
        }
    }

    /// Human-readable parameter list for output metadata.
    pub fn describe(&self) -> Vec<(String, String)> {
        let mut v = vec![("model".to_string(), self.name().to_string())];
        let mut push = |k: &str, val: String| v.push((k.to_string(), val));
        match *self {
            LatticeModel::Perfect { density, n_s } => {
                push("density_cm3", format!("{:e}", density * 1e-6));
                push("n_s", n_s.to_string());
            }
            LatticeModel::Sequential(c) => {
                push("density_cm3", format!("{:e}", c.density * 1e-6));
                push("n_s", c.n_s.to_string());
                push("n_ss", c.n_ss.to_string());
                push("temperature_uK", format!("{}", c.temperature * 1e6));
                push("u0_rad_s", format!("{:e}", c.u0));
                push("stark", c.stark_enabled.to_string());
                push("potential", format!("{:?}", c.potential_form).to_lowercase());
            }
            LatticeModel::TwoComponent {
                density,
                f_dw,
                n_s,
                n_ss,
            } => {
                push("density_cm3", format!("{:e}", density * 1e-6));
                push("f_dw", f_dw.to_string());
                push("n_s", n_s.to_string());
                push("n_ss", n_ss.to_string());
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{per_cm3, HBAR, K_B};
    use approx::assert_relative_eq;

    fn thermal(ratio: f64, n_ss: usize) -> (ThermalModelConfig, LatticeGeometry) {
        let geom = LatticeGeometry::default();
        let cfg = ThermalModelConfig {
            density: per_cm3(3e11),
            n_s: 10,
            n_ss,
            temperature: ratio * HBAR * geom.u0 / K_B,
            u0: geom.u0,
            stark_enabled: true,
            potential_form: PotentialForm::Harmonic,
        };
        (cfg, geom)
    }

    fn per_period(chain: &SlabChain) -> f64 {
        chain.cell().iter().map(|s| s.surface_density).sum()
    }

    #[test]
    fn perfect_lattice_density() {
        let geom = LatticeGeometry::default();
        let c = perfect_lattice(per_cm3(3e11), 5, &geom).unwrap();
        assert_eq!(c.len(), 5);
        assert_relative_eq!(c.cell()[0].surface_density, 1.215e11, max_relative = 1e-12);
        assert!(perfect_lattice(1.0, 0, &geom).is_err());
    }

    #[test]
    fn wrap_is_centred() {
        assert_eq!(wrap(0.0, 1.0), 0.0);
        assert!((wrap(0.75, 1.0) + 0.25).abs() < 1e-15);
        assert!((wrap(0.5, 1.0) + 0.5).abs() < 1e-15);
        assert!((wrap(-0.25, 1.0) + 0.25).abs() < 1e-15);
    }

    #[test]
    fn conservation_for_every_model() {
        let geom = LatticeGeometry::default();
        let target = per_cm3(3e11) * geom.period();
        for ratio in [0.0, 1e-3, 0.1, 0.4, 2.0] {
            for form in [PotentialForm::Harmonic, PotentialForm::Sinusoidal] {
                let (mut cfg, _) = thermal(ratio, 20);
                cfg.potential_form = form;
                let c = sequential_lattice(&cfg, &geom).unwrap();
                assert_relative_eq!(per_period(&c), target, max_relative = 1e-12);
                // the continuous local density integrates to the same on the grid
                let dz = geom.period() / 20.0;
                let s: f64 = (0..20).map(|nu| local_density(nu as f64 * dz, &cfg, &geom) * dz).sum();
                assert_relative_eq!(s, target, max_relative = 1e-6);
            }
        }
        for f in [0.0, 0.2, 1.0] {
            let c = two_component_lattice(per_cm3(3e11), f, 3, 20, &geom).unwrap();
            assert_relative_eq!(per_period(&c), target, max_relative = 1e-12);
        }
        let c = perfect_lattice(per_cm3(3e11), 3, &geom).unwrap();
        assert_relative_eq!(per_period(&c), target, max_relative = 1e-12);
    }

    #[test]
    fn zero_temperature_concentrates_at_antinode() {
        let (cfg, geom) = thermal(0.0, 20);
        let c = sequential_lattice(&cfg, &geom).unwrap();
        assert_eq!(c.cell()[0].stark_shift, geom.u0);
        assert!(c.cell()[1..].iter().all(|s| s.surface_density == 0.0));
        assert_eq!(local_density(0.0, &cfg, &geom), cfg.density * 20.0);
        assert_eq!(local_density(geom.period() * 0.25, &cfg, &geom), 0.0);
        // nearly frozen lattice behaves the same
        let (cold, _) = thermal(1e-4, 20);
        let c = sequential_lattice(&cold, &geom).unwrap();
        assert!(c.cell()[0].surface_density / per_period(&c) > 1.0 - 1e-12);
    }

    #[test]
    fn flat_potential_gives_uniform_density() {
        // very hot relative to the depth
        let (cfg, geom) = thermal(1e12, 20);
        for nu in 0..20 {
            let z = nu as f64 * geom.period() / 20.0;
            assert_relative_eq!(local_density(z, &cfg, &geom), cfg.density, max_relative = 1e-9);
        }
    }

    #[test]
    fn harmonic_profile_is_gaussian_with_sigma_z() {
        let (cfg, geom) = thermal(0.4, 20);
        let sigma_z = geom.derived().sigma_z;
        let centre = local_density(0.0, &cfg, &geom);
        for nu in 1..10 {
            let z = nu as f64 * geom.period() / 20.0;
            let ratio = local_density(z, &cfg, &geom) / centre;
            assert_relative_eq!(ratio, (-z * z / (2.0 * sigma_z * sigma_z)).exp(), max_relative = 1e-10);
        }
    }

    #[test]
    fn single_sublayer_is_perfect_lattice() {
        let (mut cfg, geom) = thermal(0.4, 1);
        cfg.stark_enabled = false;
        let c = sequential_lattice(&cfg, &geom).unwrap();
        let p = perfect_lattice(cfg.density, cfg.n_s, &geom).unwrap();
        assert_eq!(c.len(), p.len());
        assert_relative_eq!(
            c.cell()[0].surface_density,
            p.cell()[0].surface_density,
            max_relative = 1e-15
        );
        assert_eq!(c.cell()[0].gap_after, p.cell()[0].gap_after);
    }

    #[test]
    fn stark_shift_largest_at_antinode() {
        let (cfg, geom) = thermal(0.4, 20);
        let c = sequential_lattice(&cfg, &geom).unwrap();
        let shifts: Vec<f64> = c.cell().iter().map(|s| s.stark_shift).collect();
        assert_eq!(shifts[0], geom.u0);
        assert!(shifts.iter().all(|&s| (0.0..=geom.u0).contains(&s)));
        // symmetric about the antinode
        for nu in 1..10 {
            assert_relative_eq!(shifts[nu], shifts[20 - nu], max_relative = 1e-9);
        }
    }

    #[test]
    fn two_component_rejects_bad_fraction() {
        let geom = LatticeGeometry::default();
        assert!(two_component_lattice(1.0, 1.5, 1, 1, &geom).is_err());
        assert!(two_component_lattice(1.0, -0.1, 1, 1, &geom).is_err());
    }
}
