//! Fixtures shared by the benchmarks.

use braggstack::units::per_cm3;
use braggstack::{AtomResponseConfig, LatticeGeometry, LatticeModel, Slab, SlabChain};

pub fn setup() -> (AtomResponseConfig, LatticeGeometry) {
    let geom = LatticeGeometry::default();
    (AtomResponseConfig::rb85_d2(geom.lambda_brg), geom)
}

/// Two-component lattice at the usual working point.
pub fn working_point(n_s: usize) -> LatticeModel {
    LatticeModel::TwoComponent {
        density: per_cm3(3e11),
        f_dw: 0.2,
        n_s,
        n_ss: 10,
    }
}

/// Irregular chain of `n` slabs that defeats the periodic fast path.
pub fn irregular_chain(n: usize, geom: &LatticeGeometry) -> SlabChain {
    let p = geom.period();
    SlabChain::new(
        (0..n)
            .map(|i| {
                let w = (i as f64 * 0.618_033_988_75).fract();
                Slab {
                    surface_density: 1e12 * (0.5 + w),
                    stark_shift: 0.0,
                    gap_after: p * (0.9 + 0.2 * w),
                }
            })
            .collect(),
    )
}
