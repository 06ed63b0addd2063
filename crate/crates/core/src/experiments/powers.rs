use crate::engine::ScatterResult;
use crate::error::{Error, Result};

/// Powers seen by the three detectors when only a fraction η of the probe
/// overlaps the cloud.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorReading {
    pub p_r: f64,
    pub p_t: f64,
    pub p_a: f64,
    pub eta: f64,
    pub p_i: f64,
}

/// P_r = RηP_i, P_t = TηP_i + (1 − η)P_i, P_a = AηP_i.
pub fn detected_powers(result: &ScatterResult, eta: f64, p_i: f64) -> Result<DetectorReading> {
    powers_from_coefficients(result.big_r, result.big_t, result.big_a, eta, p_i)
}

/// [`detected_powers`] for coefficients already extracted, e.g. from a
/// spectrum row.
pub fn powers_from_coefficients(big_r: f64, big_t: f64, big_a: f64, eta: f64, p_i: f64) -> Result<DetectorReading> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidInput(format!("overlap fraction {eta} outside [0, 1]")));
    }
    Ok(DetectorReading {
        p_r: big_r * eta * p_i,
        p_t: big_t * eta * p_i + (1.0 - eta) * p_i,
        p_a: big_a * eta * p_i,
        eta,
        p_i,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn result(r: f64, t: f64) -> ScatterResult {
        ScatterResult {
            r: Complex64::new(r.sqrt(), 0.0),
            t: Complex64::new(t.sqrt(), 0.0),
            big_r: r,
            big_t: t,
            big_a: 1.0 - r - t,
            phi: 0.0,
        }
    }

    #[test]
    fn reflected_power_example() {
        let d = detected_powers(&result(0.3, 0.5), 0.16, 30e-6).unwrap();
        assert!((d.p_r - 1.44e-6).abs() < 1e-15);
    }

    #[test]
    fn transparent_cloud() {
        let d = detected_powers(&result(0.0, 1.0), 0.16, 30e-6).unwrap();
        assert_eq!(d.p_t, 30e-6);
        assert_eq!(d.p_r, 0.0);
        assert!(d.p_a.abs() < 1e-20);
    }

    #[test]
    fn powers_sum_to_incident() {
        for (r, t) in [(0.1, 0.2), (0.3, 0.69), (0.0, 0.0), (0.5, 0.5)] {
            for eta in [0.0, 0.16, 1.0] {
                let d = detected_powers(&result(r, t), eta, 30e-6).unwrap();
                assert!(((d.p_r + d.p_t + d.p_a) - 30e-6).abs() <= 1e-12 * 30e-6);
            }
        }
        assert!(detected_powers(&result(0.1, 0.1), 1.2, 1.0).is_err());
    }
}
