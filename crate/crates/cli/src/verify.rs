//! Self-check suite behind `braggstack verify`: the transfer-matrix engine
//! against the boundary-value solver and against its own invariants, on
//! seeded random chains.

use braggstack::engine::{chain_matrix, chain_matrix_sequential, layer_matrix, phase_matrix, scatter, scatter_chain};
use braggstack::experiments::solve_boundary_value;
use braggstack::lattice::perfect_lattice;
use braggstack::response::zeta;
use braggstack::units::per_cm3;
use braggstack::{AtomResponseConfig, LatticeGeometry, Slab, SlabChain, TransferMatrix};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Largest deviation seen.
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:<32} {:>5}/{:<5} worst {:.3e} (tol {:.0e})",
            if self.ok() { "ok  " } else { "FAIL" },
            self.name,
            self.passed,
            self.total,
            self.worst,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub cases: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { cases: 500, seed: 1 }
    }
}

struct Check {
    name: &'static str,
    tolerance: f64,
    passed: usize,
    total: usize,
    worst: f64,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Check {
            name,
            tolerance,
            passed: 0,
            total: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, err: f64) {
        self.total += 1;
        if err <= self.tolerance {
            self.passed += 1;
        }
        if !(err <= self.worst) {
            self.worst = err;
        }
    }

    fn fail(&mut self) {
        self.record(f64::INFINITY);
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            passed: self.passed,
            total: self.total,
            worst: self.worst,
            tolerance: self.tolerance,
        }
    }
}

fn random_chain(rng: &mut StdRng, max_slabs: usize, gamma: f64) -> SlabChain {
    let n = rng.gen_range(0..=max_slabs);
    SlabChain::new(
        (0..n)
            .map(|_| Slab {
                surface_density: rng.gen_range(0.0..2e13),
                stark_shift: rng.gen_range(-3.0..3.0) * gamma,
                gap_after: rng.gen_range(0.0..1.2e-6),
            })
            .collect(),
    )
}

/// Runs every check and returns one result per check.
pub fn run_suite(opts: VerifyOptions, cfg: &AtomResponseConfig, geom: &LatticeGeometry) -> Vec<CheckResult> {
    let mut rng = StdRng::seed_from_u64(opts.seed);
    let g = cfg.gamma;
    let mut out = Vec::new();

    let mut oracle = Check::new("oracle agreement (r, t)", 1e-10);
    for _ in 0..opts.cases {
        let chain = random_chain(&mut rng, 20, g);
        let delta = rng.gen_range(-40.0..15.0) * g;
        match (
            scatter_chain(&chain, delta, cfg, geom),
            solve_boundary_value(&chain, delta, cfg, geom),
        ) {
            (Ok(s), Ok((r, t))) => oracle.record((s.r - r).norm().max((s.t - t).norm())),
            _ => oracle.fail(),
        }
    }
    out.push(oracle.finish());

    let mut single = Check::new("single-slab closed form", 1e-12);
    for _ in 0..opts.cases {
        let sd = rng.gen_range(0.0..2e13);
        let delta = rng.gen_range(-40.0..15.0) * g;
        let z = zeta(sd, delta, cfg);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let chain = SlabChain::new(vec![Slab::new(sd, 0.0)]);
        match scatter_chain(&chain, delta, cfg, geom) {
            Ok(s) => single.record(
                (s.r - i * z / (one - i * z))
                    .norm()
                    .max((s.t - one / (one - i * z)).norm()),
            ),
            Err(_) => single.fail(),
        }
    }
    out.push(single.finish());

    let mut unimodular = Check::new("det = 1 (10^4 slabs)", 1e-9);
    let n_long = 10_000;
    for _ in 0..opts.cases.div_ceil(50) {
        let density = per_cm3(rng.gen_range(0.0..3e11));
        let delta = rng.gen_range(-40.0..15.0) * g;
        match perfect_lattice(density, n_long, geom).and_then(|c| chain_matrix_sequential(&c, delta, cfg, geom)) {
            Ok(m) => unimodular.record((m.det() - Complex64::new(1.0, 0.0)).norm()),
            Err(_) => unimodular.fail(),
        }
    }
    out.push(unimodular.finish());

    let mut passive = Check::new("passivity 0 <= R, T, A <= 1", 1e-9);
    for _ in 0..opts.cases {
        let chain = random_chain(&mut rng, 60, g);
        let delta = rng.gen_range(-40.0..15.0) * g;
        match scatter_chain(&chain, delta, cfg, geom) {
            Ok(s) => passive.record(
                [s.big_r, s.big_t, s.big_a]
                    .iter()
                    .map(|v| (-v).max(v - 1.0).max(0.0))
                    .fold(0.0, f64::max),
            ),
            Err(_) => passive.fail(),
        }
    }
    out.push(passive.finish());

    let mut lossless = Check::new("real zeta: R + T = 1", 1e-12);
    for _ in 0..opts.cases {
        let n = rng.gen_range(1..80);
        let m = (0..n).fold(TransferMatrix::IDENTITY, |m, _| {
            m * layer_matrix(Complex64::new(rng.gen_range(-0.5..0.5), 0.0)) * phase_matrix(rng.gen_range(0.0..7.0))
        });
        match scatter(&m) {
            Ok(s) => lossless.record((s.big_r + s.big_t - 1.0).abs()),
            Err(_) => lossless.fail(),
        }
    }
    out.push(lossless.finish());

    let mut reciprocal = Check::new("reciprocity |t| under reversal", 1e-10);
    for _ in 0..opts.cases {
        let chain = random_chain(&mut rng, 30, g);
        let delta = rng.gen_range(-10.0..10.0) * g;
        match (
            scatter_chain(&chain, delta, cfg, geom),
            scatter_chain(&chain.reversed(), delta, cfg, geom),
        ) {
            (Ok(a), Ok(b)) => reciprocal.record((a.t.norm() - b.t.norm()).abs()),
            _ => reciprocal.fail(),
        }
    }
    out.push(reciprocal.finish());

    let mut fast = Check::new("periodic fast path", 1e-9);
    for _ in 0..opts.cases.div_ceil(5) {
        let chain = SlabChain::periodic(
            vec![Slab::new(rng.gen_range(0.0..3e11), rng.gen_range(0.0..1e-6))],
            rng.gen_range(1..400),
        );
        let delta = rng.gen_range(-5.0..5.0) * g;
        match (
            chain_matrix(&chain, delta, cfg, geom),
            chain_matrix_sequential(&chain, delta, cfg, geom),
        ) {
            (Ok(a), Ok(b)) => fast.record(a.relative_distance(&b)),
            _ => fast.fail(),
        }
    }
    out.push(fast.finish());

    out
}
