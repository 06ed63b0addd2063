//! Linear atomic response of a thin layer: the complex single-layer
//! reflection coefficient ζ and the absorption cross section.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::mhz_to_angular;

/// One hyperfine transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    /// Line position relative to the reference zero of Δ_brg, rad/s.
    pub delta_f: f64,
    /// Relative oscillator strength.
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtomResponseConfig {
    /// Natural linewidth Γ, rad/s.
    pub gamma: f64,
    lines: Vec<SpectralLine>,
    /// Probe wavelength, m.
    pub lambda_brg: f64,
}

/// ⁸⁵Rb D2 line, F = 3 → F' = 2, 3, 4, Γ/2π = 6 MHz.
///
/// Offsets in units of Γ relative to F' = 4. Strengths are the relative
/// hyperfine transition strength factors S₃F' (5/63, 5/18, 9/14) from the
/// standard alkali D-line data tables; they sum to one.
pub const RB85_D2_F3: [(f64, f64); 3] = [(-31.0, 5.0 / 63.0), (-20.0, 5.0 / 18.0), (0.0, 9.0 / 14.0)];

impl AtomResponseConfig {
    /// Builds a response model; line strengths are rescaled to sum to one.
    pub fn new(gamma: f64, lines: Vec<SpectralLine>, lambda_brg: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::InvalidInput("linewidth must be positive".into()));
        }
        if lines.is_empty() {
            return Err(Error::InvalidInput("at least one spectral line is required".into()));
        }
        if lines.iter().any(|l| !(l.strength >= 0.0) || !l.delta_f.is_finite()) {
            return Err(Error::InvalidInput(
                "line strengths must be non-negative and offsets finite".into(),
            ));
        }
        let total: f64 = lines.iter().map(|l| l.strength).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidInput("line strengths sum to zero".into()));
        }
        if !(lambda_brg > 0.0) {
            return Err(Error::InvalidInput("probe wavelength must be positive".into()));
        }
        let lines = lines
            .into_iter()
            .map(|l| SpectralLine {
                strength: l.strength / total,
                ..l
            })
            .collect();
        Ok(AtomResponseConfig {
            gamma,
            lines,
            lambda_brg,
        })
    }

    /// A single unit-strength line at Δ = 0.
    pub fn single_line(gamma: f64, lambda_brg: f64) -> Self {
        Self::new(
            gamma,
            vec![SpectralLine {
                delta_f: 0.0,
                strength: 1.0,
            }],
            lambda_brg,
        )
        .expect("single line config is valid")
    }

    /// Lines given as (offset / Γ, strength) pairs.
    pub fn from_gamma_units(gamma: f64, lines: &[(f64, f64)], lambda_brg: f64) -> Result<Self> {
        let lines = lines
            .iter()
            .map(|&(offset, strength)| SpectralLine {
                delta_f: offset * gamma,
                strength,
            })
            .collect();
        Self::new(gamma, lines, lambda_brg)
    }

    pub fn rb85_d2(lambda_brg: f64) -> Self {
        Self::from_gamma_units(mhz_to_angular(6.0), &RB85_D2_F3, lambda_brg).expect("static line set")
    }

    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    /// Resonant cross section 3λ²/2π of a unit-strength line.
    pub fn resonant_cross_section(&self) -> f64 {
        3.0 * self.lambda_brg * self.lambda_brg / (2.0 * PI)
    }

    /// Σ_F s_F / (i + 2(Δ − Δ_F)/Γ).
    fn line_sum(&self, delta: f64) -> Complex64 {
        self.lines
            .iter()
            .map(|l| l.strength / Complex64::new(2.0 * (delta - l.delta_f) / self.gamma, 1.0))
            .sum()
    }
}

/// Single-layer reflection coefficient ζ for a layer of surface density
/// `surface_density` (m⁻²) probed at detuning `delta` (rad/s).
///
/// Im ζ ≥ 0 for every real detuning.
pub fn zeta(surface_density: f64, delta: f64, cfg: &AtomResponseConfig) -> Complex64 {
    if surface_density == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    -surface_density * 0.5 * cfg.resonant_cross_section() * cfg.line_sum(delta)
}

/// Absorption cross section σ(Δ), m². Shares the Lorentzian envelope of Im ζ.
pub fn cross_section(delta: f64, cfg: &AtomResponseConfig) -> f64 {
    let sigma0 = cfg.resonant_cross_section();
    cfg.lines
        .iter()
        .map(|l| {
            let x = 2.0 * (delta - l.delta_f) / cfg.gamma;
            l.strength / (1.0 + x * x)
        })
        .sum::<f64>()
        * sigma0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{nm, per_cm3};
    use approx::assert_relative_eq;

    fn cfg() -> AtomResponseConfig {
        AtomResponseConfig::single_line(mhz_to_angular(6.0), nm(780.0))
    }

    #[test]
    fn zero_density_gives_zero() {
        assert_eq!(zeta(0.0, 1e7, &cfg()), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn resonant_zeta_is_imaginary() {
        // n = 3e11 cm^-3 over 405 nm
        let sd = per_cm3(3e11) * nm(405.0);
        assert_relative_eq!(sd, 1.215e11, max_relative = 1e-12);
        let z = zeta(sd, 0.0, &cfg());
        assert!(z.re.abs() < 1e-18);
        assert!((z.im - 0.01765).abs() < 5e-6);

        let c = cfg();
        let z = zeta(sd, 0.5 * c.gamma, &c);
        assert!((z.re + 0.00883).abs() < 1e-5);
        assert!((z.im - 0.00883).abs() < 1e-5);
        assert_relative_eq!(z.re, -z.im, max_relative = 1e-12);
    }

    #[test]
    fn resonant_cross_section_value() {
        let s = cross_section(0.0, &cfg());
        // 2.905e-9 cm^2
        assert!((s * 1e4 - 2.905e-9).abs() < 1e-12);
        let c = cfg();
        assert_relative_eq!(cross_section(c.gamma, &c), s / 5.0, max_relative = 1e-12);
        assert!(cross_section(1e15, &c) < 1e-20);
    }

    #[test]
    fn strengths_are_normalized() {
        let c = AtomResponseConfig::from_gamma_units(1.0, &[(0.0, 2.0), (-3.0, 6.0)], nm(780.0)).unwrap();
        let s: f64 = c.lines().iter().map(|l| l.strength).sum();
        assert_relative_eq!(s, 1.0, max_relative = 1e-15);
        let d = AtomResponseConfig::rb85_d2(nm(780.0));
        let s: f64 = d.lines().iter().map(|l| l.strength).sum();
        assert_relative_eq!(s, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(AtomResponseConfig::new(
            0.0,
            vec![SpectralLine {
                delta_f: 0.0,
                strength: 1.0
            }],
            1e-6
        )
        .is_err());
        assert!(AtomResponseConfig::new(1.0, vec![], 1e-6).is_err());
        assert!(AtomResponseConfig::new(
            1.0,
            vec![SpectralLine {
                delta_f: 0.0,
                strength: -1.0
            }],
            1e-6
        )
        .is_err());
    }

    #[test]
    fn single_line_symmetry() {
        let c = cfg();
        for i in 1..40 {
            let d = i as f64 * 0.37 * c.gamma;
            let a = zeta(1e11, d, &c);
            let b = zeta(1e11, -d, &c);
            assert_relative_eq!(a.re, -b.re, max_relative = 1e-14);
            assert_relative_eq!(a.im, b.im, max_relative = 1e-14);
        }
    }

    #[test]
    fn multi_line_passive_and_proportional() {
        let c = AtomResponseConfig::rb85_d2(nm(780.0));
        let sd = 1.2e11;
        for i in -400..=150 {
            let d = i as f64 * 0.1 * c.gamma;
            let z = zeta(sd, d, &c);
            assert!(z.im > 0.0);
            // Im ζ = (n δz / 2) σ(Δ)
            assert_relative_eq!(z.im, 0.5 * sd * cross_section(d, &c), max_relative = 1e-12);
        }
    }
}
