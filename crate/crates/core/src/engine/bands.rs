use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::matrix::TransferMatrix;

/// Threshold on Im θ above which a sample counts as inside a stop band.
pub const GAP_THRESHOLD: f64 = 1e-9;

/// Bloch phase θ of a unimodular unit cell, cos θ = Tr(M)/2, on the branch
/// with Im θ ≥ 0 and Re θ ∈ [0, 2π).
pub fn bloch_phase(unit_cell: &TransferMatrix) -> Complex64 {
    let half_trace = unit_cell.trace() * 0.5;
    let mut theta = half_trace.acos();
    if theta.im < 0.0 {
        theta = -theta;
    }
    if theta.re < 0.0 {
        theta.re += TAU;
    }
    theta
}

/// Makes a sampled dispersion θ(Δ) continuous in Re θ while keeping
/// Im θ ≥ 0. Propagating samples may flip sign; all samples may shift by 2π.
/// Each sample is matched to a linear extrapolation of the last propagating
/// trend, so band crossings of 0 and π keep their direction.
pub fn unwrap_dispersion(thetas: &[Complex64]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(thetas.len());
    let mut trend = 0.0;
    for &theta in thetas {
        let Some(&prev) = out.last() else {
            out.push(theta);
            continue;
        };
        let target = prev.re + trend;
        let mut candidates = vec![theta];
        if theta.im <= GAP_THRESHOLD {
            candidates.push(Complex64::new(-theta.re, theta.im));
        }
        let best = candidates
            .into_iter()
            .map(|c| {
                let m = ((target - c.re) / TAU).round();
                Complex64::new(c.re + m * TAU, c.im)
            })
            .min_by(|a, b| (a.re - target).abs().total_cmp(&(b.re - target).abs()))
            .expect("at least one candidate");
        if best.im <= GAP_THRESHOLD && prev.im <= GAP_THRESHOLD && best.re != prev.re {
            trend = best.re - prev.re;
        }
        out.push(best);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOfStates {
    pub rho: Vec<f64>,
    /// Set when adjacent samples of Re θ differ by more than π/4.
    pub coarse_grid: bool,
}

/// ρ ∝ |d Re θ / dΔ| by central differences on a uniform grid with spacing
/// `step`; zero wherever Im θ exceeds [`GAP_THRESHOLD`].
pub fn density_of_states(dispersion: &[Complex64], step: f64) -> DensityOfStates {
    let theta = unwrap_dispersion(dispersion);
    let n = theta.len();
    let coarse_grid = theta.windows(2).any(|w| (w[1].re - w[0].re).abs() > PI / 4.0);
    let rho = (0..n)
        .map(|i| {
            if theta[i].im > GAP_THRESHOLD || n < 2 {
                return 0.0;
            }
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
            ((theta[hi].re - theta[lo].re) / ((hi - lo) as f64 * step)).abs()
        })
        .collect();
    DensityOfStates { rho, coarse_grid }
}
