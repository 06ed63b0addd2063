//! Physical constants and unit conversions.
//!
//! Internally everything is SI, with detunings, linewidths and trap depths
//! expressed as angular frequencies (rad/s). Conversions from lab units
//! (nm, μK, cm⁻³, MHz, multiples of Γ) happen at the edges.

use std::f64::consts::PI;

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C_LIGHT: f64 = 299_792_458.0;

pub fn nm(x: f64) -> f64 {
    x * 1e-9
}

pub fn um(x: f64) -> f64 {
    x * 1e-6
}

/// Volume density given in cm⁻³, returned in m⁻³.
pub fn per_cm3(x: f64) -> f64 {
    x * 1e6
}

/// Ordinary frequency in MHz to angular frequency in rad/s.
pub fn mhz_to_angular(f_mhz: f64) -> f64 {
    2.0 * PI * f_mhz * 1e6
}

/// Temperature-equivalent energy (K) to angular frequency, E/ħ.
pub fn kelvin_to_angular(t: f64) -> f64 {
    K_B * t / HBAR
}

/// Angular-frequency energy back to kelvin.
pub fn angular_to_kelvin(w: f64) -> f64 {
    HBAR * w / K_B
}

pub fn deg(x: f64) -> f64 {
    x.to_radians()
}

pub fn wavenumber(lambda: f64) -> f64 {
    2.0 * PI / lambda
}
