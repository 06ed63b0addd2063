//! Independent check on the transfer-matrix product: the scattering
//! problem posed as one global linear system over the forward/backward
//! amplitudes of every region and solved by banded elimination.

use num_complex::Complex64;

use crate::engine::SlabChain;
use crate::error::{Error, Result};
use crate::geometry::LatticeGeometry;
use crate::response::{zeta, AtomResponseConfig};

pub const MAX_ORACLE_SLABS: usize = 10_000;

/// Sparse row with a contiguous window of columns starting at `lo`.
#[derive(Debug, Clone)]
struct Row {
    lo: usize,
    vals: Vec<Complex64>,
}

impl Row {
    fn new(lo: usize) -> Self {
        Row { lo, vals: Vec::new() }
    }

    fn get(&self, j: usize) -> Complex64 {
        if j < self.lo {
            return Complex64::new(0.0, 0.0);
        }
        self.vals.get(j - self.lo).copied().unwrap_or_default()
    }

    fn hi(&self) -> usize {
        self.lo + self.vals.len()
    }

    fn add(&mut self, j: usize, v: Complex64) {
        if self.vals.is_empty() {
            self.lo = j;
        }
        if j < self.lo {
            let shift = self.lo - j;
            let mut vals = vec![Complex64::default(); shift];
            vals.append(&mut self.vals);
            self.vals = vals;
            self.lo = j;
        }
        let idx = j - self.lo;
        if idx >= self.vals.len() {
            self.vals.resize(idx + 1, Complex64::default());
        }
        self.vals[idx] += v;
    }
}

/// Gaussian elimination with partial pivoting restricted to the `kl` rows
/// below the diagonal. Returns the failing column on a zero pivot.
fn solve_banded(mut rows: Vec<Row>, mut rhs: Vec<Complex64>, kl: usize) -> std::result::Result<Vec<Complex64>, usize> {
    let n = rows.len();
    for col in 0..n {
        let last = (col + kl).min(n - 1);
        let (piv, mag) = (col..=last)
            .map(|r| (r, rows[r].get(col).norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(mag > 0.0) {
            return Err(col);
        }
        rows.swap(col, piv);
        rhs.swap(col, piv);
        let pivot_row = rows[col].clone();
        let p = pivot_row.get(col);
        for r in col + 1..=last {
            let f = rows[r].get(col) / p;
            if f == Complex64::default() {
                continue;
            }
            for j in col..pivot_row.hi() {
                let v = pivot_row.get(j);
                if v != Complex64::default() {
                    rows[r].add(j, -f * v);
                }
            }
            rhs[r] = rhs[r] - f * rhs[col];
        }
    }
    let mut x = vec![Complex64::default(); n];
    for i in (0..n).rev() {
        let row = &rows[i];
        let mut s = rhs[i];
        for (j, xj) in x.iter().enumerate().take(row.hi()).skip(i + 1) {
            s -= row.get(j) * xj;
        }
        x[i] = s / row.get(i);
    }
    Ok(x)
}

/// Reflection and transmission amplitudes (r, t) of the chain for a unit
/// wave incident on the slab-0 side, from the global boundary-value system.
///
/// Unknowns are the local forward/backward amplitudes (p_j, q_j) of each
/// region j = 0..N (region 0 is the entry face, region j > 0 the gap after
/// slab j − 1, referenced at its start). Each slab imposes the thin-sheet
/// jump between the amplitudes arriving at it and those leaving it; the
/// outer conditions are p₀ = 1 and no backward wave beyond the exit.
pub fn solve_boundary_value(
    chain: &SlabChain,
    delta: f64,
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> Result<(Complex64, Complex64)> {
    let slabs = chain.to_vec();
    let n = slabs.len();
    if n > MAX_ORACLE_SLABS {
        return Err(Error::InvalidInput(format!(
            "oracle limited to {MAX_ORACLE_SLABS} slabs, got {n}"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    if n == 0 {
        return Ok((Complex64::default(), one));
    }
    let kz = geom.k_axial();
    let size = 2 * (n + 1);
    let p = |j: usize| 2 * j;
    let q = |j: usize| 2 * j + 1;

    let mut rows = Vec::with_capacity(size);
    let mut rhs = vec![Complex64::default(); size];

    let mut first = Row::new(0);
    first.add(p(0), one);
    rows.push(first);
    rhs[0] = one;

    for (k, slab) in slabs.iter().enumerate() {
        let z = zeta(slab.surface_density, delta - slab.stark_shift, cfg);
        let phase = if k == 0 { 0.0 } else { kz * slabs[k - 1].gap_after };
        let fwd = Complex64::from_polar(1.0, phase);
        let bwd = fwd.conj();

        let mut a = Row::new(p(k));
        a.add(p(k), (one + i * z) * fwd);
        a.add(q(k), i * z * bwd);
        a.add(p(k + 1), -one);
        rows.push(a);

        let mut b = Row::new(p(k));
        b.add(p(k), -i * z * fwd);
        b.add(q(k), (one - i * z) * bwd);
        b.add(q(k + 1), -one);
        rows.push(b);
    }

    let mut last = Row::new(q(n));
    last.add(q(n), one);
    rows.push(last);

    let x = solve_banded(rows, rhs, 2).map_err(|col| Error::SingularSystem {
        slab: (col / 2).min(n - 1),
    })?;
    let exit_phase = Complex64::from_polar(1.0, kz * slabs[n - 1].gap_after);
    Ok((x[q(0)], x[p(n)] * exit_phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Slab;
    use crate::units::mhz_to_angular;

    fn setup() -> (AtomResponseConfig, LatticeGeometry) {
        let geom = LatticeGeometry::default();
        (
            AtomResponseConfig::single_line(mhz_to_angular(6.0), geom.lambda_brg),
            geom,
        )
    }

    #[test]
    fn empty_chain() {
        let (cfg, geom) = setup();
        let (r, t) = solve_boundary_value(&SlabChain::new(vec![]), 0.0, &cfg, &geom).unwrap();
        assert_eq!(r, Complex64::default());
        assert_eq!(t, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn single_slab_closed_form() {
        let (cfg, geom) = setup();
        for d in [-3.0, 0.0, 0.5, 10.0] {
            let delta = d * cfg.gamma;
            let chain = SlabChain::new(vec![Slab::new(1.215e11, 0.0)]);
            let (r, t) = solve_boundary_value(&chain, delta, &cfg, &geom).unwrap();
            let z = zeta(1.215e11, delta, &cfg);
            let i = Complex64::i();
            let one = Complex64::new(1.0, 0.0);
            assert!((r - i * z / (one - i * z)).norm() < 1e-12);
            assert!((t - one / (one - i * z)).norm() < 1e-12);
        }
    }

    #[test]
    fn vacuum_chain_is_transparent() {
        let (cfg, geom) = setup();
        let chain = SlabChain::new(vec![Slab::new(0.0, 1e-7); 5]);
        let (r, t) = solve_boundary_value(&chain, 0.0, &cfg, &geom).unwrap();
        assert!(r.norm() < 1e-14);
        assert!((t.norm() - 1.0).abs() < 1e-14);
    }
}
