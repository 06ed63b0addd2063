use rayon::prelude::*;

use crate::engine::{scatter_chain, ScatterResult, SlabChain};
use crate::error::{Error, Result};
use crate::geometry::LatticeGeometry;
use crate::lattice::LatticeModel;
use crate::response::AtomResponseConfig;

/// Uniform detuning grid in units of Γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl DeltaGrid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        let g = DeltaGrid { start, stop, points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::InvalidInput("detuning grid is empty".into()));
        }
        if self.points > 1 && !(self.stop > self.start) {
            return Err(Error::InvalidInput("detuning grid must be strictly increasing".into()));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        if self.points < 2 {
            0.0
        } else {
            (self.stop - self.start) / (self.points - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.start + i as f64 * self.step()).collect()
    }
}

impl Default for DeltaGrid {
    /// −40 Γ to +15 Γ in 1101 points.
    fn default() -> Self {
        DeltaGrid {
            start: -40.0,
            stop: 15.0,
            points: 1101,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub delta_over_gamma: f64,
    pub big_r: f64,
    pub big_t: f64,
    pub big_a: f64,
    pub phi: f64,
}

impl SpectrumRow {
    fn from_result(delta_over_gamma: f64, s: &ScatterResult) -> Self {
        SpectrumRow {
            delta_over_gamma,
            big_r: s.big_r,
            big_t: s.big_t,
            big_a: s.big_a,
            phi: s.phi,
        }
    }
}

/// Sampled spectrum plus key/value run metadata, in insertion order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
    pub metadata: Vec<(String, String)>,
}

impl SpectrumTable {
    pub fn deltas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.delta_over_gamma).collect()
    }

    pub fn reflection(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.big_r).collect()
    }

    pub fn transmission(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.big_t).collect()
    }

    pub fn absorption(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.big_a).collect()
    }

    /// (Δ/Γ, R) at the reflection maximum.
    pub fn max_reflection(&self) -> (f64, f64) {
        self.rows
            .iter()
            .map(|r| (r.delta_over_gamma, r.big_r))
            .fold((f64::NAN, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn set_meta(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.metadata.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key.to_string(), value)),
        }
    }

    /// Grid strictly increasing and R, T, A within [−1e-9, 1 + 1e-9].
    pub fn validate(&self) -> Result<()> {
        if self
            .rows
            .windows(2)
            .any(|w| !(w[1].delta_over_gamma > w[0].delta_over_gamma))
        {
            return Err(Error::InvalidInput("spectrum grid is not strictly increasing".into()));
        }
        let ok = |x: f64| (-1e-9..=1.0 + 1e-9).contains(&x);
        if let Some(r) = self.rows.iter().find(|r| !(ok(r.big_r) && ok(r.big_t) && ok(r.big_a))) {
            return Err(Error::InvalidInput(format!(
                "unphysical coefficients at Δ/Γ = {}",
                r.delta_over_gamma
            )));
        }
        Ok(())
    }
}

/// Scatters `chain` at every point of `deltas_over_gamma`. Work is spread
/// over the current rayon pool; rows come back in grid order.
pub fn spectrum_of_chain(
    chain: &SlabChain,
    deltas_over_gamma: &[f64],
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> Result<SpectrumTable> {
    if deltas_over_gamma.is_empty() {
        return Err(Error::InvalidInput("detuning grid is empty".into()));
    }
    chain.validate()?;
    let rows = deltas_over_gamma
        .par_iter()
        .enumerate()
        .map(|(index, &d)| {
            scatter_chain(chain, d * cfg.gamma, cfg, geom)
                .map(|s| SpectrumRow::from_result(d, &s))
                .map_err(|e| Error::AtGridPoint {
                    index,
                    delta_over_gamma: d,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable {
        rows,
        metadata: Vec::new(),
    })
}

/// Builds the chain for `model` and computes its spectrum, recording the
/// model parameters as metadata.
pub fn spectrum(
    model: &LatticeModel,
    grid: &DeltaGrid,
    cfg: &AtomResponseConfig,
    geom: &LatticeGeometry,
) -> Result<SpectrumTable> {
    grid.validate()?;
    let chain = model.build(geom)?;
    let mut table = spectrum_of_chain(&chain, &grid.values(), cfg, geom)?;
    table.metadata = model.describe();
    table.set_meta("lambda_dip_nm", format!("{}", geom.lambda_dip * 1e9));
    table.set_meta("lambda_brg_nm", format!("{}", geom.lambda_brg * 1e9));
    table.set_meta("beta_i_deg", format!("{}", geom.beta_i.to_degrees()));
    table.set_meta(
        "delta_lambda_dip_nm",
        format!("{}", geom.derived().delta_lambda_dip * 1e9),
    );
    table.set_meta("gamma_rad_s", format!("{:e}", cfg.gamma));
    Ok(table)
}
