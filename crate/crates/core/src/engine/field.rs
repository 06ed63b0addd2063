use num_complex::Complex64;

use super::chain::{chain_matrix_sequential, slab_matrix, SlabChain};
use super::matrix::{phase_matrix, OVERFLOW_LIMIT};
use crate::error::{Error, Result};
use crate::geometry::LatticeGeometry;
use crate::response::AtomResponseConfig;

/// One sample of the probe intensity inside the lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// Axial depth measured from slab 0, m.
    pub z: f64,
    /// |E|² normalized to the incident intensity.
    pub intensity: f64,
}

/// Axial position of every slab, measured from slab 0.
pub fn slab_positions(chain: &SlabChain) -> Vec<f64> {
    let mut z = 0.0;
    chain
        .iter()
        .map(|s| {
            let here = z;
            z += s.gap_after;
            here
        })
        .collect()
}

/// Standing-wave intensity |E⁺e^{ik_z z} + E⁻e^{−ik_z z}|² through the chain
/// for unit incident amplitude on the slab-0 side and no light entering
/// from the far side.
///
/// Each gap is sampled at `samples_per_gap` equally spaced points starting
/// at its slab; zero-length gaps contribute a single point. A final sample
/// sits at the exit face.
pub fn field_profile(
    chain: &SlabChain,
    delta: f64,
    samples_per_gap: usize,
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> Result<Vec<FieldSample>> {
    if samples_per_gap < 2 {
        return Err(Error::InvalidInput("samples_per_gap must be at least 2".into()));
    }
    if chain.is_empty() {
        return Ok(vec![FieldSample { z: 0.0, intensity: 1.0 }]);
    }
    let k_axial = geom.k_axial();
    let m = chain_matrix_sequential(chain, delta, cfg, geom)?;
    let t = super::chain::scatter(&m)?.t;

    // Amplitudes at the exit side of every gap, walked back from the exit:
    // v_N = (0, t), v_k = U_k v_{k+1}.
    let slabs = chain.to_vec();
    let n = slabs.len();
    let mut states = vec![[Complex64::new(0.0, 0.0); 2]; n + 1];
    states[n] = [Complex64::new(0.0, 0.0), t];
    for k in (0..n).rev() {
        let v = slab_matrix(&slabs[k], delta, cfg, k_axial).apply(states[k + 1]);
        let mag = v[0].norm().max(v[1].norm());
        if !(mag <= OVERFLOW_LIMIT) {
            return Err(Error::Overflow {
                slab: k,
                magnitude: mag,
            });
        }
        states[k] = v;
    }

    let mut out = Vec::with_capacity(n * samples_per_gap + 1);
    let mut z0 = 0.0;
    for (k, slab) in slabs.iter().enumerate() {
        let g = slab.gap_after;
        // amplitudes just past slab k
        let w = phase_matrix(k_axial * g).apply(states[k + 1]);
        let count = if g > 0.0 { samples_per_gap } else { 1 };
        for j in 0..count {
            let d = g * j as f64 / samples_per_gap as f64;
            let e = Complex64::from_polar(1.0, -k_axial * d);
            let field = w[0] * e + w[1] * e.conj();
            out.push(FieldSample {
                z: z0 + d,
                intensity: field.norm_sqr(),
            });
        }
        z0 += g;
    }
    out.push(FieldSample {
        z: z0,
        intensity: states[n][1].norm_sqr(),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::chain::{scatter_chain, Slab};
    use crate::units::mhz_to_angular;

    fn setup() -> (AtomResponseConfig, LatticeGeometry) {
        let geom = LatticeGeometry::default();
        (
            AtomResponseConfig::single_line(mhz_to_angular(6.0), geom.lambda_brg),
            geom,
        )
    }

    #[test]
    fn no_atoms_gives_flat_profile() {
        let (cfg, geom) = setup();
        let chain = SlabChain::periodic(vec![Slab::new(0.0, geom.period())], 10);
        let p = field_profile(&chain, 0.0, 16, &cfg, &geom).unwrap();
        assert_eq!(p.len(), 161);
        assert!(p.iter().all(|s| (s.intensity - 1.0).abs() < 1e-14));
        let empty = SlabChain::new(vec![]);
        assert_eq!(field_profile(&empty, 0.0, 4, &cfg, &geom).unwrap()[0].intensity, 1.0);
    }

    #[test]
    fn boundaries_match_scatter() {
        let (cfg, geom) = setup();
        let chain = SlabChain::periodic(vec![Slab::new(1.2e11, geom.period())], 50);
        for d in [-2.0, 0.0, 0.7] {
            let delta = d * cfg.gamma;
            let s = scatter_chain(&chain, delta, &cfg, &geom).unwrap();
            let p = field_profile(&chain, delta, 8, &cfg, &geom).unwrap();
            let one = Complex64::new(1.0, 0.0);
            assert!((p[0].intensity - (one + s.r).norm_sqr()).abs() < 1e-9);
            assert!((p.last().unwrap().intensity - s.big_t).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_coarse_sampling() {
        let (cfg, geom) = setup();
        let chain = SlabChain::new(vec![Slab::new(1.0, 1e-7)]);
        assert!(field_profile(&chain, 0.0, 1, &cfg, &geom).is_err());
    }

    #[test]
    fn positions_accumulate_gaps() {
        let chain = SlabChain::new(vec![Slab::new(1.0, 2.0), Slab::new(1.0, 0.0), Slab::new(1.0, 3.0)]);
        assert_eq!(slab_positions(&chain), vec![0.0, 2.0, 2.0]);
    }
}
