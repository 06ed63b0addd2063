//! Subcommand implementations. Each writes its tables into the output
//! directory and returns the paths written.

use std::path::{Path, PathBuf};

use braggstack::engine::field_profile;
use braggstack::experiments::{
    band_structure, lattice_constant_scan, powers_from_coefficients, radial_average, saturation_scan, spectrum,
    FILLED_ANTINODES,
};
use braggstack::{SpectrumTable, ENGINE_VERSION};

use crate::config::RunConfig;
use crate::csv::{format_spectrum, format_table, write_file};
use crate::error::CliError;
use crate::svg::{render_profile, render_spectra, Column, Plot, Series};
use crate::verify::{run_suite, CheckResult, VerifyOptions};

pub struct RunContext {
    pub config: RunConfig,
    pub out: PathBuf,
    pub svg: bool,
}

/// Value of SOURCE_DATE_EPOCH when set, so that repeated runs stay
/// byte-identical.
pub fn timestamp() -> String {
    std::env::var("SOURCE_DATE_EPOCH").unwrap_or_else(|_| "unset".into())
}

fn run_metadata(cfg: &RunConfig) -> Vec<(String, String)> {
    vec![
        ("engine_version".into(), ENGINE_VERSION.into()),
        ("timestamp".into(), timestamp()),
        ("gamma_rad_s".into(), format!("{:e}", cfg.response.gamma)),
        ("u0_rad_s".into(), format!("{:e}", cfg.geometry.u0)),
        ("temperature_uK".into(), format!("{}", cfg.geometry.temperature * 1e6)),
    ]
}

fn with_run_metadata(mut table: SpectrumTable, cfg: &RunConfig) -> SpectrumTable {
    for (k, v) in run_metadata(cfg) {
        table.set_meta(&k, v);
    }
    table
}

impl RunContext {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn emit(&self, name: &str, contents: &str, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
        let p = self.path(name);
        write_file(&p, contents)?;
        written.push(p);
        Ok(())
    }

    fn prepare(&self) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(&self.out).map_err(|e| CliError::io(&self.out, e))?;
        let mut written = Vec::new();
        self.emit("config.resolved.toml", &self.config.echo(), &mut written)?;
        Ok(written)
    }

    pub fn spectrum(&self) -> Result<Vec<PathBuf>, CliError> {
        let mut written = self.prepare()?;
        let cfg = &self.config;
        let model = cfg.lattice_model();
        let table = if cfg.scan.radial_rings > 0 {
            let sigma_r = cfg.geometry.derived().sigma_r;
            radial_average(
                &model,
                sigma_r,
                model.density(),
                cfg.scan.radial_rings,
                &cfg.scan.grid,
                &cfg.response,
                &cfg.geometry,
            )?
        } else {
            spectrum(&model, &cfg.scan.grid, &cfg.response, &cfg.geometry)?
        };
        let mut table = with_run_metadata(table, cfg);
        table.set_meta("delta_lambda_dip_nm", format!("{}", cfg.delta_lambda_dip * 1e9));
        self.emit("spectrum.csv", &format_spectrum(&table), &mut written)?;
        if self.svg {
            self.emit("spectrum.svg", &render_spectra(&[table], Column::R), &mut written)?;
        }
        Ok(written)
    }

    pub fn scan_lattice(&self) -> Result<Vec<PathBuf>, CliError> {
        let mut written = self.prepare()?;
        let cfg = &self.config;
        let model = cfg.model.build(&cfg.matched_geometry).with_density(cfg.matched_density);
        let family = lattice_constant_scan(
            &cfg.scan.delta_lambdas,
            &model,
            &cfg.scan.grid,
            &cfg.response,
            &cfg.matched_geometry,
        )?;
        let family: Vec<SpectrumTable> = family.into_iter().map(|t| with_run_metadata(t, cfg)).collect();
        for (i, t) in family.iter().enumerate() {
            self.emit(&format!("scan_lattice_{i:02}.csv"), &format_spectrum(t), &mut written)?;
        }
        if self.svg {
            self.emit("scan_lattice.svg", &render_spectra(&family, Column::R), &mut written)?;
        }
        Ok(written)
    }

    pub fn scan_atoms(&self) -> Result<Vec<PathBuf>, CliError> {
        let mut written = self.prepare()?;
        let cfg = &self.config;
        let model = cfg.lattice_model();
        let pts = saturation_scan(
            &cfg.scan.atom_numbers,
            &model,
            &cfg.scan.grid,
            &cfg.response,
            &cfg.geometry,
        )?;
        let mut meta = model.describe();
        meta.extend(run_metadata(cfg));
        meta.push((
            "atom_mapping".into(),
            format!("n = N / ({FILLED_ANTINODES:e} * lambda_dip/2 * 2 pi sigma_r^2)"),
        ));
        meta.push(("sigma_r_um".into(), format!("{}", cfg.geometry.derived().sigma_r * 1e6)));
        let rows: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| vec![p.atoms, p.density * 1e-6, p.max_r, p.delta_at_max])
            .collect();
        self.emit(
            "scan_atoms.csv",
            &format_table(
                &meta,
                &["atoms", "density_cm3", "max_R", "delta_at_max_over_gamma"],
                &rows,
            ),
            &mut written,
        )?;
        if self.svg {
            let plot = Plot {
                title: "maximum reflectivity".into(),
                x_label: "log10 atom number".into(),
                y_label: "max R".into(),
                series: vec![Series {
                    label: model.name().into(),
                    points: pts.iter().map(|p| (p.atoms.log10(), p.max_r)).collect(),
                }],
            };
            self.emit("scan_atoms.svg", &plot.render(), &mut written)?;
        }
        Ok(written)
    }

    pub fn profile(&self) -> Result<Vec<PathBuf>, CliError> {
        let mut written = self.prepare()?;
        let cfg = &self.config;
        let mut spec = cfg.model.clone();
        if cfg.profile.n_s > 0 {
            spec.n_s = cfg.profile.n_s;
        }
        let model = spec.build(&cfg.geometry);
        let chain = model.build(&cfg.geometry)?;
        let delta = cfg.profile.delta * cfg.response.gamma;
        let samples = field_profile(&chain, delta, cfg.profile.samples_per_gap, &cfg.response, &cfg.geometry)?;
        let mut meta = model.describe();
        meta.extend(run_metadata(cfg));
        meta.push(("delta_over_gamma".into(), format!("{}", cfg.profile.delta)));
        meta.push(("lambda_dip_nm".into(), format!("{}", cfg.geometry.lambda_dip * 1e9)));
        let ld = cfg.geometry.lambda_dip;
        let rows: Vec<Vec<f64>> = samples.iter().map(|s| vec![s.z, s.z / ld, s.intensity]).collect();
        self.emit(
            "profile.csv",
            &format_table(&meta, &["z_m", "z_over_lambda_dip", "intensity"], &rows),
            &mut written,
        )?;
        if self.svg {
            let label = format!("{} at {} Gamma", model.name(), cfg.profile.delta);
            self.emit("profile.svg", &render_profile(&samples, ld, &label), &mut written)?;
        }
        Ok(written)
    }

    pub fn bands(&self) -> Result<Vec<PathBuf>, CliError> {
        let mut written = self.prepare()?;
        let cfg = &self.config;
        let model = cfg.lattice_model();
        let chain = model.build(&cfg.geometry)?;
        let b = band_structure(
            chain.cell(),
            &cfg.scan.grid,
            cfg.lossless_bands,
            &cfg.response,
            &cfg.geometry,
        )?;
        let mut meta = model.describe();
        meta.extend(run_metadata(cfg));
        meta.push(("lossless".into(), cfg.lossless_bands.to_string()));
        meta.push(("coarse_grid".into(), b.coarse_grid.to_string()));
        let rows: Vec<Vec<f64>> = b
            .delta_over_gamma
            .iter()
            .zip(&b.theta)
            .zip(&b.dos)
            .map(|((d, th), rho)| vec![*d, th.re, th.im, *rho])
            .collect();
        self.emit(
            "bands.csv",
            &format_table(&meta, &["delta_over_gamma", "theta_re", "theta_im", "dos"], &rows),
            &mut written,
        )?;
        if self.svg {
            let series = |label: &str, f: &dyn Fn(&Vec<f64>) -> f64| Series {
                label: label.into(),
                points: rows.iter().map(|r| (r[0], f(r))).collect(),
            };
            let plot = Plot {
                title: "Bloch phase per cell".into(),
                x_label: "detuning / Gamma".into(),
                y_label: "theta (rad)".into(),
                series: vec![
                    series("Re theta - pi", &|r| r[1] - std::f64::consts::PI),
                    series("Im theta", &|r| r[2]),
                ],
            };
            self.emit("bands.svg", &plot.render(), &mut written)?;
        }
        if b.coarse_grid {
            eprintln!("warning: Bloch phase jumps by more than pi/4 between grid points; refine the grid");
        }
        Ok(written)
    }

    pub fn powers(&self) -> Result<Vec<PathBuf>, CliError> {
        let mut written = self.prepare()?;
        let cfg = &self.config;
        let model = cfg.lattice_model();
        let table = with_run_metadata(spectrum(&model, &cfg.scan.grid, &cfg.response, &cfg.geometry)?, cfg);
        let mut meta = table.metadata.clone();
        meta.push(("eta".into(), format!("{}", cfg.powers.eta)));
        meta.push(("incident_W".into(), format!("{:e}", cfg.powers.incident)));
        let rows = table
            .rows
            .iter()
            .map(|r| {
                let d = powers_from_coefficients(r.big_r, r.big_t, r.big_a, cfg.powers.eta, cfg.powers.incident)?;
                Ok(vec![r.delta_over_gamma, d.p_r, d.p_t, d.p_a])
            })
            .collect::<Result<Vec<_>, braggstack::Error>>()?;
        self.emit(
            "powers.csv",
            &format_table(&meta, &["delta_over_gamma", "P_r_W", "P_t_W", "P_a_W"], &rows),
            &mut written,
        )?;
        if self.svg {
            let col = |label: &str, i: usize| Series {
                label: label.into(),
                points: rows.iter().map(|r| (r[0], r[i] * 1e6)).collect(),
            };
            let plot = Plot {
                title: "detected powers".into(),
                x_label: "detuning / Gamma".into(),
                y_label: "power (uW)".into(),
                series: vec![col("P_r", 1), col("P_t", 2), col("P_a", 3)],
            };
            self.emit("powers.svg", &plot.render(), &mut written)?;
        }
        Ok(written)
    }

    /// Runs the self-check suite; fails if any check fails.
    pub fn verify(&self, opts: VerifyOptions) -> Result<Vec<CheckResult>, CliError> {
        let results = run_suite(opts, &self.config.response, &self.config.geometry);
        for r in &results {
            println!("{r}");
        }
        let failures = results.iter().filter(|r| !r.ok()).count();
        if failures > 0 {
            return Err(CliError::Verify { failures });
        }
        Ok(results)
    }
}

pub fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        None => crate::config::parse_config(""),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            crate::config::parse_config(&text)
        }
    }
}
