//! Lattice geometry and the closed-form thermal/geometric relations.
//!
//! A 1D optical lattice is formed by a standing wave at `lambda_dip`; it is
//! probed at `lambda_brg` under an angle `beta_i` measured from the lattice
//! axis. Trap depth `u0` is stored as a positive angular frequency (U₀/ħ).

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::units::{kelvin_to_angular, wavenumber, HBAR, K_B};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeGeometry {
    /// Trap (standing wave) wavelength, m.
    pub lambda_dip: f64,
    /// Probe wavelength, m.
    pub lambda_brg: f64,
    /// Probe angle of incidence, rad.
    pub beta_i: f64,
    /// Trap depth U₀/ħ, rad/s, positive.
    pub u0: f64,
    /// Temperature, K.
    pub temperature: f64,
    /// Trap beam waist, m.
    pub w_dip: f64,
    /// Probe beam waist, m.
    pub w_brg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedGeometry {
    pub sigma_z: f64,
    pub sigma_r: f64,
    pub f_dw: f64,
    pub n_s: f64,
    pub k_dip: f64,
    pub k_brg: f64,
    pub delta_lambda_dip: f64,
}

impl LatticeGeometry {
    /// Geometry with the probe angle set to the Bragg angle of the two
    /// wavelengths and `k_B T = 0.4 U₀`.
    pub fn bragg_matched(lambda_dip: f64, lambda_brg: f64, u0: f64, w_dip: f64, w_brg: f64) -> Result<Self> {
        let beta_i = bragg_angle(lambda_brg, lambda_dip)?;
        let geom = LatticeGeometry {
            lambda_dip,
            lambda_brg,
            beta_i,
            u0,
            temperature: 0.4 * HBAR * u0 / K_B,
            w_dip,
            w_brg,
        };
        geom.validate()?;
        Ok(geom)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_brg > 0.0 && self.lambda_brg <= self.lambda_dip) {
            return Err(Error::InvalidInput(format!(
                "wavelengths must satisfy 0 < lambda_brg <= lambda_dip (got {:e}, {:e})",
                self.lambda_brg, self.lambda_dip
            )));
        }
        if !(0.0..FRAC_PI_2).contains(&self.beta_i) {
            return Err(Error::InvalidInput(format!(
                "beta_i = {} rad outside [0, pi/2)",
                self.beta_i
            )));
        }
        if !(self.u0 > 0.0) {
            return Err(Error::InvalidInput("trap depth must be positive".into()));
        }
        if !(self.temperature >= 0.0) {
            return Err(Error::InvalidInput("temperature must be non-negative".into()));
        }
        if !(self.w_dip > 0.0 && self.w_brg > 0.0) {
            return Err(Error::InvalidInput("beam waists must be positive".into()));
        }
        Ok(())
    }

    /// Same geometry with the trap wavelength shifted by `delta` while the
    /// probe angle stays fixed.
    pub fn with_lattice_detuning(&self, delta: f64) -> Self {
        LatticeGeometry {
            lambda_dip: self.lambda_dip + delta,
            ..*self
        }
    }

    pub fn k_dip(&self) -> f64 {
        wavenumber(self.lambda_dip)
    }

    pub fn k_brg(&self) -> f64 {
        wavenumber(self.lambda_brg)
    }

    /// Axial component of the probe wavevector, k_brg cos β_i.
    pub fn k_axial(&self) -> f64 {
        self.k_brg() * self.beta_i.cos()
    }

    /// Lattice period λ_dip/2.
    pub fn period(&self) -> f64 {
        0.5 * self.lambda_dip
    }

    pub fn derived(&self) -> DerivedGeometry {
        let sigma_z = axial_width(self.temperature, self.u0, self.lambda_dip);
        let sigma_r = radial_width(self.temperature, self.u0, self.w_dip);
        DerivedGeometry {
            sigma_z,
            sigma_r,
            f_dw: debye_waller(sigma_z, self.k_dip()),
            n_s: effective_layers(sigma_r, self.lambda_dip, self.beta_i),
            k_dip: self.k_dip(),
            k_brg: self.k_brg(),
            delta_lambda_dip: lattice_mismatch(self.lambda_dip, self.lambda_brg, self.beta_i),
        }
    }
}

impl Default for LatticeGeometry {
    /// 810 nm lattice probed at 780 nm on the Bragg angle, U₀ = 500 μK,
    /// k_B T = 0.4 U₀, 220 μm trap waist, 800 μm probe waist.
    fn default() -> Self {
        let u0 = kelvin_to_angular(500e-6);
        LatticeGeometry::bragg_matched(810e-9, 780e-9, u0, 220e-6, 800e-6).expect("default geometry is valid")
    }
}

/// Probe angle that satisfies the Bragg condition, arccos(λ_brg/λ_dip).
pub fn bragg_angle(lambda_brg: f64, lambda_dip: f64) -> Result<f64> {
    if !(lambda_brg > 0.0) || lambda_brg > lambda_dip {
        return Err(Error::Domain(format!(
            "Bragg angle undefined for lambda_brg = {lambda_brg:e} > lambda_dip = {lambda_dip:e}"
        )));
    }
    Ok((lambda_brg / lambda_dip).acos())
}

/// Signed lattice-constant mismatch λ_dip − λ_brg / cos β_i.
pub fn lattice_mismatch(lambda_dip: f64, lambda_brg: f64, beta_i: f64) -> f64 {
    lambda_dip - lambda_brg / beta_i.cos()
}

fn thermal_ratio(temperature: f64, u0: f64) -> f64 {
    kelvin_to_angular(temperature) / u0
}

/// Axial rms half-width σ_z of a single well in the harmonic approximation.
pub fn axial_width(temperature: f64, u0: f64, lambda_dip: f64) -> f64 {
    // 2σ_z = (λ/π) sqrt(k_B T / 2U₀)
    lambda_dip / (2.0 * PI) * (thermal_ratio(temperature, u0) / 2.0).sqrt()
}

/// Radial rms half-width σ_r of a single well.
pub fn radial_width(temperature: f64, u0: f64, w_dip: f64) -> f64 {
    0.5 * w_dip * thermal_ratio(temperature, u0).sqrt()
}

/// Debye-Waller factor exp(−2 k² σ_z²).
pub fn debye_waller(sigma_z: f64, k_dip: f64) -> f64 {
    (-2.0 * k_dip * k_dip * sigma_z * sigma_z).exp()
}

/// Effective number of layers crossed by the probe, 2σ_r / (λ_dip tan β_i).
/// Returns +∞ at normal incidence along the lattice axis.
pub fn effective_layers(sigma_r: f64, lambda_dip: f64, beta_i: f64) -> f64 {
    if sigma_r == 0.0 {
        return 0.0;
    }
    let tan = beta_i.tan();
    if tan <= 0.0 {
        return f64::INFINITY;
    }
    2.0 * sigma_r / (lambda_dip * tan)
}

/// Number of layers within one absorption length of the disordered atoms,
/// 2 z_pd / λ_brg with z_pd = [σ n (1 − f_DW)]⁻¹.
pub fn penetration_layers(density: f64, f_dw: f64, sigma_abs: f64, lambda_brg: f64) -> f64 {
    let extinction = sigma_abs * density * (1.0 - f_dw);
    if extinction <= 0.0 {
        return f64::INFINITY;
    }
    2.0 / (extinction * lambda_brg)
}

/// Penetration depth z_pd in metres.
pub fn penetration_depth(density: f64, f_dw: f64, sigma_abs: f64) -> f64 {
    let extinction = sigma_abs * density * (1.0 - f_dw);
    if extinction <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / extinction
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{deg, nm, per_cm3, um};
    use approx::assert_relative_eq;

    fn u0() -> f64 {
        kelvin_to_angular(500e-6)
    }

    fn t_at(ratio: f64) -> f64 {
        ratio * HBAR * u0() / K_B
    }

    #[test]
    fn bragg_angle_examples() {
        let b = bragg_angle(nm(780.0), nm(810.0)).unwrap();
        assert!((b.to_degrees() - 15.64).abs() < 0.01);
        assert_eq!(bragg_angle(nm(780.0), nm(780.0)).unwrap(), 0.0);
        let b = bragg_angle(nm(780.0), nm(812.0)).unwrap();
        assert!((b.to_degrees() - 16.139).abs() < 0.001);
        assert!(matches!(bragg_angle(nm(812.0), nm(780.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn mismatch_examples() {
        let b = bragg_angle(nm(780.0), nm(810.0)).unwrap();
        assert!(lattice_mismatch(nm(810.0), nm(780.0), b).abs() < 1e-21);
        assert_relative_eq!(lattice_mismatch(nm(810.8), nm(780.0), b), nm(0.8), max_relative = 1e-9);
        let m = lattice_mismatch(nm(810.0), nm(780.0), deg(16.0));
        assert!((m / 1e-9 + 1.434).abs() < 1e-3);
    }

    #[test]
    fn thermal_widths() {
        let lam = nm(810.0);
        assert!((2.0 * axial_width(t_at(0.4), u0(), lam) / 1e-9 - 115.3).abs() < 0.1);
        assert_eq!(axial_width(0.0, u0(), lam), 0.0);
        assert!((2.0 * axial_width(t_at(0.8), u0(), lam) / 1e-9 - 163.1).abs() < 0.1);

        assert!((2.0 * radial_width(t_at(0.4), u0(), um(220.0)) / 1e-6 - 139.1).abs() < 0.1);
        assert_eq!(radial_width(0.0, u0(), um(220.0)), 0.0);
        assert!((2.0 * radial_width(t_at(0.1), u0(), um(220.0)) / 1e-6 - 69.57).abs() < 0.01);
    }

    #[test]
    fn widths_scale_as_sqrt_t() {
        let a = axial_width(t_at(0.1), u0(), nm(810.0));
        let b = axial_width(t_at(0.4), u0(), nm(810.0));
        assert_relative_eq!(b / a, 2.0, max_relative = 1e-12);
        let a = radial_width(t_at(0.1), u0(), um(220.0));
        let b = radial_width(t_at(0.9), u0(), um(220.0));
        assert_relative_eq!(b / a, 3.0, max_relative = 1e-12);
    }

    #[test]
    fn debye_waller_examples() {
        let k = wavenumber(nm(810.0));
        assert_eq!(debye_waller(0.0, k), 1.0);
        assert!((debye_waller(nm(57.5), k) - 0.672).abs() < 5e-4);
        assert_eq!(debye_waller(1.0, k), 0.0);
        let mut last = 1.0;
        for i in 1..50 {
            let f = debye_waller(nm(i as f64 * 5.0), k);
            assert!(f < last);
            last = f;
        }
    }

    #[test]
    fn effective_layer_examples() {
        let b = bragg_angle(nm(780.0), nm(810.0)).unwrap();
        assert!((effective_layers(um(70.0), nm(810.0), b) - 618.0).abs() < 1.0);
        assert!((effective_layers(um(70.0), nm(810.0), deg(45.0)) - 172.84).abs() < 0.01);
        assert_eq!(effective_layers(0.0, nm(810.0), b), 0.0);
        assert_eq!(effective_layers(um(70.0), nm(810.0), 0.0), f64::INFINITY);
    }

    #[test]
    fn penetration_layer_examples() {
        let lam = nm(780.0);
        let sigma0 = 3.0 * lam * lam / (2.0 * PI);
        let n = per_cm3(3e11);
        assert!((penetration_layers(n, 0.2, sigma0, lam) - 36.77).abs() < 0.01);
        assert_eq!(penetration_layers(n, 1.0, sigma0, lam), f64::INFINITY);
        assert_eq!(penetration_layers(0.0, 0.2, sigma0, lam), f64::INFINITY);
        assert!((penetration_layers(n, 0.2, sigma0 / 5.0, lam) - 183.9).abs() < 0.1);
    }

    #[test]
    fn penetration_monotone_in_f_dw() {
        let lam = nm(780.0);
        let sigma0 = 3.0 * lam * lam / (2.0 * PI);
        let mut last = 0.0;
        for i in 0..10 {
            let v = penetration_layers(per_cm3(3e11), i as f64 / 10.0, sigma0, lam);
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn default_geometry_derived() {
        let g = LatticeGeometry::default();
        let d = g.derived();
        assert!(d.delta_lambda_dip.abs() < 1e-20);
        assert!((2.0 * d.sigma_z / 1e-9 - 115.3).abs() < 0.2);
        assert!((d.f_dw - 0.67).abs() < 0.01);
        assert!(d.n_s > 500.0 && d.n_s < 700.0);
    }

    #[test]
    fn validate_rejects_bad_geometry() {
        let g = LatticeGeometry {
            lambda_brg: nm(900.0),
            ..LatticeGeometry::default()
        };
        assert!(g.validate().is_err());
        let g = LatticeGeometry {
            u0: 0.0,
            ..LatticeGeometry::default()
        };
        assert!(g.validate().is_err());
    }
}
