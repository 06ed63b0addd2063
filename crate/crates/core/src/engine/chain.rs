use num_complex::Complex64;

use super::matrix::{layer_matrix, phase_matrix, TransferMatrix};
use crate::error::{Error, Result};
use crate::geometry::LatticeGeometry;
use crate::response::{zeta, AtomResponseConfig};

/// One thin atomic sheet followed by an empty gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slab {
    /// Atoms per unit area, m⁻².
    pub surface_density: f64,
    /// Local resonance shift (rad/s); the slab responds at Δ − shift.
    pub stark_shift: f64,
    /// Length of the empty gap after this slab, m.
    pub gap_after: f64,
}

impl Slab {
    pub fn new(surface_density: f64, gap_after: f64) -> Self {
        Slab {
            surface_density,
            stark_shift: 0.0,
            gap_after,
        }
    }
}

/// Ordered sequence of slabs in the order the probe meets them.
///
/// Stored as a unit cell repeated `repeats` times so strictly periodic
/// lattices can take the repeated-squaring path.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabChain {
    cell: Vec<Slab>,
    repeats: usize,
}

impl SlabChain {
    pub fn new(slabs: Vec<Slab>) -> Self {
        SlabChain {
            cell: slabs,
            repeats: 1,
        }
    }

    pub fn periodic(cell: Vec<Slab>, repeats: usize) -> Self {
        SlabChain { cell, repeats }
    }

    pub fn cell(&self) -> &[Slab] {
        &self.cell
    }

    pub fn repeats(&self) -> usize {
        self.repeats
    }

    pub fn len(&self) -> usize {
        self.cell.len() * self.repeats
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Slab> + '_ {
        (0..self.repeats).flat_map(move |_| self.cell.iter())
    }

    pub fn to_vec(&self) -> Vec<Slab> {
        self.iter().copied().collect()
    }

    /// The same slabs met in the opposite order. Each gap stays attached
    /// to the interval it spans; the trailing gap stays at the exit.
    pub fn reversed(&self) -> SlabChain {
        let slabs = self.to_vec();
        let n = slabs.len();
        let mut out = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let gap = if i == 0 {
                slabs[n - 1].gap_after
            } else {
                slabs[i - 1].gap_after
            };
            out.push(Slab {
                gap_after: gap,
                ..slabs[i]
            });
        }
        SlabChain::new(out)
    }

    /// Total axial length, m.
    pub fn length(&self) -> f64 {
        self.cell.iter().map(|s| s.gap_after).sum::<f64>() * self.repeats as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::InvalidInput("slab chain is empty".into()));
        }
        for s in &self.cell {
            if !(s.surface_density >= 0.0) || !(s.gap_after >= 0.0) || !s.stark_shift.is_finite() {
                return Err(Error::InvalidInput(format!("invalid slab {s:?}")));
            }
        }
        Ok(())
    }
}

/// Complex amplitudes and power coefficients of one scattering problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterResult {
    pub r: Complex64,
    pub t: Complex64,
    pub big_r: f64,
    pub big_t: f64,
    /// 1 − R − T.
    pub big_a: f64,
    /// Reflection phase, atan2(Im r, Re r).
    pub phi: f64,
}

pub(crate) fn slab_matrix(slab: &Slab, delta: f64, cfg: &AtomResponseConfig, k_axial: f64) -> TransferMatrix {
    let z = zeta(slab.surface_density, delta - slab.stark_shift, cfg);
    layer_matrix(z) * phase_matrix(k_axial * slab.gap_after)
}

fn product<'a>(
    slabs: impl Iterator<Item = &'a Slab>,
    delta: f64,
    cfg: &AtomResponseConfig,
    k_axial: f64,
) -> Result<TransferMatrix> {
    let mut m = TransferMatrix::IDENTITY;
    for (i, slab) in slabs.enumerate() {
        m = m * slab_matrix(slab, delta, cfg, k_axial);
        m.check_overflow(i)?;
    }
    Ok(m)
}

/// Transfer matrix of the whole chain at probe detuning `delta` (rad/s).
///
/// Products are accumulated left to right, M = U₀ U₁ ⋯ with
/// Uᵢ = A(ζᵢ) B(gapᵢ); with this ordering r = M₁₂/M₂₂ is the reflection
/// amplitude for a probe entering on the side of slab 0.
pub fn chain_matrix(
    chain: &SlabChain,
    delta: f64,
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> Result<TransferMatrix> {
    let k_axial = geom.k_axial();
    let cell = product(chain.cell.iter(), delta, cfg, k_axial)?;
    if chain.repeats == 1 {
        return Ok(cell);
    }
    let m = cell.pow(chain.repeats);
    m.check_overflow(chain.len().saturating_sub(1))?;
    Ok(m)
}

/// Plain slab-by-slab product, ignoring any periodic structure.
pub fn chain_matrix_sequential(
    chain: &SlabChain,
    delta: f64,
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> Result<TransferMatrix> {
    product(chain.iter(), delta, cfg, geom.k_axial())
}

/// Reflection/transmission from a chain matrix: r = M₁₂/M₂₂, t = 1/M₂₂.
pub fn scatter(m: &TransferMatrix) -> Result<ScatterResult> {
    let m22n = m.m22.norm();
    if m22n < 1e-300 || !m22n.is_finite() {
        return Err(Error::SingularMatrix(m22n));
    }
    let t = m.m22.inv();
    let r = m.m12 * t;
    let big_r = r.norm_sqr();
    let big_t = t.norm_sqr();
    Ok(ScatterResult {
        r,
        t,
        big_r,
        big_t,
        big_a: 1.0 - big_r - big_t,
        phi: r.im.atan2(r.re),
    })
}

/// Convenience: scatter(chain_matrix(..)).
pub fn scatter_chain(
    chain: &SlabChain,
    delta: f64,
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> Result<ScatterResult> {
    scatter(&chain_matrix(chain, delta, cfg, geom)?)
}
