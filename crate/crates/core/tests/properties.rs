use braggstack::engine::{chain_matrix, chain_matrix_sequential, layer_matrix, phase_matrix, scatter, scatter_chain};
use braggstack::experiments::solve_boundary_value;
use braggstack::response::zeta;
use braggstack::units::mhz_to_angular;
use braggstack::{AtomResponseConfig, Error, LatticeGeometry, Slab, SlabChain, TransferMatrix};
use num_complex::Complex64;
use proptest::prelude::*;

fn setup() -> (AtomResponseConfig, LatticeGeometry) {
    let geom = LatticeGeometry::default();
    (AtomResponseConfig::rb85_d2(geom.lambda_brg), geom)
}

fn gamma() -> f64 {
    mhz_to_angular(6.0)
}

prop_compose! {
    fn slab()(sd in 0.0..2e13f64, shift in -3.0..3.0f64, gap in 0.0..1.2e-6f64) -> Slab {
        Slab { surface_density: sd, stark_shift: shift * gamma(), gap_after: gap }
    }
}

fn chain(max: usize) -> impl Strategy<Value = SlabChain> {
    prop::collection::vec(slab(), 0..=max).prop_map(SlabChain::new)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn oracle_agrees_with_product(ch in chain(20), d in -40.0..15.0f64) {
        let (cfg, geom) = setup();
        let s = scatter_chain(&ch, d * cfg.gamma, &cfg, &geom).unwrap();
        let (r, t) = solve_boundary_value(&ch, d * cfg.gamma, &cfg, &geom).unwrap();
        prop_assert!((s.r - r).norm() <= 1e-10, "r {} vs {}", s.r, r);
        prop_assert!((s.t - t).norm() <= 1e-10, "t {} vs {}", s.t, t);
    }
}

proptest! {
    #[test]
    fn chain_is_unimodular(ch in chain(60), d in -40.0..15.0f64) {
        let (cfg, geom) = setup();
        let m = chain_matrix_sequential(&ch, d * cfg.gamma, &cfg, &geom).unwrap();
        let scale = m.max_abs().powi(2).max(1.0);
        prop_assert!((m.det() - c(1.0, 0.0)).norm() < 1e-13 * scale, "{} at scale {scale}", m.det());
    }

    #[test]
    fn physical_chains_are_passive(ch in chain(60), d in -40.0..15.0f64) {
        let (cfg, geom) = setup();
        let s = scatter_chain(&ch, d * cfg.gamma, &cfg, &geom).unwrap();
        for v in [s.big_r, s.big_t, s.big_a] {
            prop_assert!((-1e-9..=1.0 + 1e-9).contains(&v), "{s:?}");
        }
        prop_assert!((s.big_r + s.big_t + s.big_a - 1.0).abs() < 1e-15);
    }

    #[test]
    fn real_zeta_is_lossless(zs in prop::collection::vec((-0.5..0.5f64, 0.0..7.0f64), 1..80)) {
        let m = zs.iter().fold(TransferMatrix::IDENTITY, |m, &(z, phi)| m * layer_matrix(c(z, 0.0)) * phase_matrix(phi));
        let s = scatter(&m).unwrap();
        prop_assert!((s.big_r + s.big_t - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transmission_is_reciprocal(ch in chain(30), d in -10.0..10.0f64) {
        let (cfg, geom) = setup();
        let fwd = scatter_chain(&ch, d * cfg.gamma, &cfg, &geom).unwrap();
        let bwd = scatter_chain(&ch.reversed(), d * cfg.gamma, &cfg, &geom).unwrap();
        prop_assert!((fwd.t.norm() - bwd.t.norm()).abs() < 1e-10);
        prop_assert!((fwd.big_t - bwd.big_t).abs() < 1e-10);
    }

    #[test]
    fn fast_path_matches_sequential(sd in 0.0..2e12f64, gap in 0.0..1e-6f64, n in 1usize..400, d in -5.0..5.0f64) {
        let (cfg, geom) = setup();
        let ch = SlabChain::periodic(vec![Slab::new(sd, gap)], n);
        match (chain_matrix(&ch, d * cfg.gamma, &cfg, &geom), chain_matrix_sequential(&ch, d * cfg.gamma, &cfg, &geom)) {
            (Ok(a), Ok(b)) => prop_assert!(a.relative_distance(&b) < 1e-9),
            (Err(a), Err(b)) => {
                let both = matches!((a, b), (Error::Overflow { .. }, Error::Overflow { .. }));
                prop_assert!(both);
            }
            (a, b) => prop_assert!(false, "paths disagree: {a:?} / {b:?}"),
        }
    }

    #[test]
    fn layer_matrices_compose_additively(a in -1.0..1.0f64, b in 0.0..1.0f64, x in -1.0..1.0f64, y in 0.0..1.0f64) {
        let p = layer_matrix(c(a, b)) * layer_matrix(c(x, y));
        prop_assert!(p.relative_distance(&layer_matrix(c(a + x, b + y))) < 1e-14);
    }

    #[test]
    fn zeta_is_linear_in_density(sd in 1e9..1e13f64, k in 0.0..5.0f64, d in -40.0..15.0f64) {
        let (cfg, _) = setup();
        let one = zeta(sd, d * cfg.gamma, &cfg);
        let scaled = zeta(k * sd, d * cfg.gamma, &cfg);
        prop_assert!((scaled - one * k).norm() <= 1e-12 * scaled.norm().max(1e-30));
        prop_assert!(one.im >= 0.0);
    }

    #[test]
    fn thin_grating_is_quadratic(z in 1e-7..1e-5f64, n in 1usize..500, phase in 0.0..1.0f64) {
        // exact Bragg phase: every gap contributes a multiple of π
        let k = if phase < 0.5 { 1.0 } else { 2.0 };
        let cell = layer_matrix(c(0.0, z)) * phase_matrix(k * std::f64::consts::PI);
        let r1 = scatter(&cell.pow(n)).unwrap().big_r;
        let r2 = scatter(&cell.pow(2 * n)).unwrap().big_r;
        prop_assume!(z * 2.0 * n as f64 <= 0.01);
        prop_assert!((r2 / r1 / 4.0 - 1.0).abs() < 0.01);
    }
}
