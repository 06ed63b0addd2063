//! Run configuration: a TOML file whose dimensional values carry explicit
//! units, e.g. `lambda_dip = "810 nm"` or `temperature = "0.4*U0"`.
//!
//! Every table and key is optional. [`RunConfig::echo`] renders the fully
//! resolved configuration, defaults included, in the same schema.

use std::ops::Range;

use braggstack::experiments::DeltaGrid;
use braggstack::geometry::{bragg_angle, lattice_mismatch};
use braggstack::response::RB85_D2_F3;
use braggstack::units::{kelvin_to_angular, mhz_to_angular, HBAR, K_B};
use braggstack::{AtomResponseConfig, LatticeGeometry, LatticeModel, PotentialForm, ThermalModelConfig};
use serde::Deserialize;
use toml::{Spanned, Value};

use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    geometry: Option<RawGeometry>,
    response: Option<RawResponse>,
    model: Option<RawModel>,
    scan: Option<RawScan>,
    profile: Option<RawProfile>,
    bands: Option<RawBands>,
    powers: Option<RawPowers>,
}

type Field = Option<Spanned<Value>>;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    lambda_dip: Field,
    lambda_brg: Field,
    angle: Field,
    delta_lambda_dip: Field,
    u0: Field,
    temperature: Field,
    w_dip: Field,
    w_brg: Field,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResponse {
    gamma: Field,
    lines: Option<Vec<RawLine>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLine {
    offset: Spanned<Value>,
    strength: Spanned<Value>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    kind: Field,
    density: Field,
    n_s: Field,
    n_ss: Field,
    f_dw: Field,
    stark: Field,
    potential: Field,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    start: Field,
    stop: Field,
    points: Field,
    delta_lambdas: Option<Vec<Spanned<Value>>>,
    atom_numbers: Option<Vec<Spanned<Value>>>,
    radial_rings: Field,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    delta: Field,
    samples_per_gap: Field,
    n_s: Field,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBands {
    lossless: Field,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPowers {
    eta: Field,
    incident: Field,
}

/// Which lattice model to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Perfect,
    Sequential,
    TwoComponent,
}

impl ModelKind {
    fn name(self) -> &'static str {
        match self {
            ModelKind::Perfect => "perfect",
            ModelKind::Sequential => "sequential",
            ModelKind::TwoComponent => "two_component",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    /// m⁻³
    pub density: f64,
    pub n_s: usize,
    pub n_ss: usize,
    pub f_dw: f64,
    pub stark: bool,
    pub potential: PotentialForm,
}

impl ModelSpec {
    pub fn build(&self, geom: &LatticeGeometry) -> LatticeModel {
        match self.kind {
            ModelKind::Perfect => LatticeModel::Perfect {
                density: self.density,
                n_s: self.n_s,
            },
            ModelKind::TwoComponent => LatticeModel::TwoComponent {
                density: self.density,
                f_dw: self.f_dw,
                n_s: self.n_s,
                n_ss: self.n_ss,
            },
            ModelKind::Sequential => LatticeModel::Sequential(ThermalModelConfig {
                density: self.density,
                n_s: self.n_s,
                n_ss: self.n_ss,
                temperature: geom.temperature,
                u0: geom.u0,
                stark_enabled: self.stark,
                potential_form: self.potential,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub grid: DeltaGrid,
    /// Lattice-constant detunings for `scan-lattice`, m.
    pub delta_lambdas: Vec<f64>,
    pub atom_numbers: Vec<f64>,
    /// 0 disables radial averaging.
    pub radial_rings: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSpec {
    /// Probe detuning in units of Γ.
    pub delta: f64,
    pub samples_per_gap: usize,
    /// Number of periods shown; 0 uses the model's own N_s.
    pub n_s: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpec {
    pub eta: f64,
    /// W
    pub incident: f64,
}

/// Fully resolved, validated configuration in SI units.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Probe geometry. When `delta_lambda_dip` is non-zero, `lambda_dip`
    /// already includes it and the density has been rescaled to keep the
    /// number of atoms per layer fixed.
    pub geometry: LatticeGeometry,
    pub delta_lambda_dip: f64,
    pub response: AtomResponseConfig,
    pub model: ModelSpec,
    pub scan: ScanSpec,
    pub profile: ProfileSpec,
    pub lossless_bands: bool,
    pub powers: PowerSpec,
    /// Geometry before any lattice-constant detuning.
    pub matched_geometry: LatticeGeometry,
    /// Density before any lattice-constant detuning, m⁻³.
    pub matched_density: f64,
    /// Angle derived from the wavelengths rather than given explicitly.
    pub bragg_mode: bool,
}

impl RunConfig {
    pub fn lattice_model(&self) -> LatticeModel {
        self.model.build(&self.geometry)
    }

    /// The resolved configuration in the input schema, with every default
    /// written out.
    pub fn echo(&self) -> String {
        let g = &self.matched_geometry;
        let q = |v: f64, scale: f64, unit: &str| Value::String(format!("{} {unit}", fmt_scaled(v, scale)));
        let gamma = self.response.gamma;
        let mut out = toml::Table::new();

        let mut geom = toml::Table::new();
        geom.insert("lambda_dip".into(), q(g.lambda_dip, 1e-9, "nm"));
        geom.insert("lambda_brg".into(), q(g.lambda_brg, 1e-9, "nm"));
        if self.bragg_mode {
            geom.insert("angle".into(), Value::String("bragg".into()));
            geom.insert("delta_lambda_dip".into(), q(self.delta_lambda_dip, 1e-9, "nm"));
        } else {
            geom.insert("angle".into(), q(g.beta_i, std::f64::consts::PI / 180.0, "deg"));
        }
        geom.insert("u0".into(), q(g.u0, gamma, "Gamma"));
        geom.insert("temperature".into(), q(g.temperature, 1e-6, "uK"));
        geom.insert("w_dip".into(), q(g.w_dip, 1e-6, "um"));
        geom.insert("w_brg".into(), q(g.w_brg, 1e-6, "um"));
        out.insert("geometry".into(), Value::Table(geom));

        let mut resp = toml::Table::new();
        resp.insert("gamma".into(), q(gamma, 2.0 * std::f64::consts::PI * 1e6, "MHz"));
        let lines = self
            .response
            .lines()
            .iter()
            .map(|l| {
                let mut t = toml::Table::new();
                t.insert("offset".into(), q(l.delta_f, gamma, "Gamma"));
                t.insert("strength".into(), Value::Float(l.strength));
                Value::Table(t)
            })
            .collect();
        resp.insert("lines".into(), Value::Array(lines));
        out.insert("response".into(), Value::Table(resp));

        let m = &self.model;
        let mut model = toml::Table::new();
        model.insert("kind".into(), Value::String(m.kind.name().into()));
        model.insert("density".into(), q(self.matched_density, 1e6, "cm^-3"));
        model.insert("n_s".into(), Value::Integer(m.n_s as i64));
        model.insert("n_ss".into(), Value::Integer(m.n_ss as i64));
        model.insert("f_dw".into(), Value::Float(m.f_dw));
        model.insert("stark".into(), Value::Boolean(m.stark));
        let pot = match m.potential {
            PotentialForm::Harmonic => "harmonic",
            PotentialForm::Sinusoidal => "sinusoidal",
        };
        model.insert("potential".into(), Value::String(pot.into()));
        out.insert("model".into(), Value::Table(model));

        let s = &self.scan;
        let mut scan = toml::Table::new();
        scan.insert("start".into(), q(s.grid.start, 1.0, "Gamma"));
        scan.insert("stop".into(), q(s.grid.stop, 1.0, "Gamma"));
        scan.insert("points".into(), Value::Integer(s.grid.points as i64));
        scan.insert(
            "delta_lambdas".into(),
            Value::Array(s.delta_lambdas.iter().map(|&d| q(d, 1e-9, "nm")).collect()),
        );
        scan.insert(
            "atom_numbers".into(),
            Value::Array(s.atom_numbers.iter().map(|&n| Value::Float(n)).collect()),
        );
        scan.insert("radial_rings".into(), Value::Integer(s.radial_rings as i64));
        out.insert("scan".into(), Value::Table(scan));

        let mut prof = toml::Table::new();
        prof.insert("delta".into(), q(self.profile.delta, 1.0, "Gamma"));
        prof.insert(
            "samples_per_gap".into(),
            Value::Integer(self.profile.samples_per_gap as i64),
        );
        prof.insert("n_s".into(), Value::Integer(self.profile.n_s as i64));
        out.insert("profile".into(), Value::Table(prof));

        let mut bands = toml::Table::new();
        bands.insert("lossless".into(), Value::Boolean(self.lossless_bands));
        out.insert("bands".into(), Value::Table(bands));

        let mut pw = toml::Table::new();
        pw.insert("eta".into(), Value::Float(self.powers.eta));
        pw.insert("incident".into(), q(self.powers.incident, 1e-6, "uW"));
        out.insert("powers".into(), Value::Table(pw));

        toml::to_string(&out).expect("plain tables always serialize")
    }
}

/// Shortest decimal that round-trips.
/// Shortest decimal x with x * scale == v exactly, so that echoed
/// quantities parse back to the same bits.
fn fmt_scaled(v: f64, scale: f64) -> String {
    let x = v / scale;
    for digits in 0..17 {
        if let Ok(y) = format!("{x:.digits$e}").parse::<f64>() {
            if y * scale == v {
                return format!("{y}");
            }
        }
    }
    format!("{x}")
}

/// Byte offset → 1-based (line, column).
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before
        .rfind('\n')
        .map_or(before.chars().count(), |i| before[i + 1..].chars().count())
        + 1;
    (line, col)
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn err(&self, span: Range<usize>, msg: impl Into<String>) -> CliError {
        let (line, column) = line_col(self.text, span.start);
        CliError::Config {
            line,
            column,
            message: msg.into(),
        }
    }

    fn string<'v>(&self, v: &'v Spanned<Value>, what: &str) -> Result<&'v str, CliError> {
        v.get_ref()
            .as_str()
            .ok_or_else(|| self.err(v.span(), format!("{what}: expected a string")))
    }

    fn quantity(&self, v: &Spanned<Value>, what: &str, units: &[(&str, f64)]) -> Result<f64, CliError> {
        let list = units.iter().map(|u| u.0).collect::<Vec<_>>().join(", ");
        let s = match v.get_ref() {
            Value::String(s) => s.as_str(),
            Value::Integer(_) | Value::Float(_) => {
                return Err(self.err(v.span(), format!("{what}: unit required (one of {list})")))
            }
            _ => {
                return Err(self.err(
                    v.span(),
                    format!("{what}: expected a quantity such as \"1 {}\"", units[0].0),
                ))
            }
        };
        let (x, unit) = split_quantity(s).ok_or_else(|| self.err(v.span(), format!("{what}: cannot parse \"{s}\"")))?;
        let scale = units.iter().find(|u| u.0 == unit).map(|u| u.1).ok_or_else(|| {
            self.err(
                v.span(),
                format!("{what}: unit \"{unit}\" not allowed here (use one of {list})"),
            )
        })?;
        Ok(x * scale)
    }

    fn number(&self, v: &Spanned<Value>, what: &str) -> Result<f64, CliError> {
        match v.get_ref() {
            Value::Integer(i) => Ok(*i as f64),
            Value::Float(f) if f.is_finite() => Ok(*f),
            _ => Err(self.err(v.span(), format!("{what}: expected a finite number"))),
        }
    }

    fn count(&self, v: &Spanned<Value>, what: &str) -> Result<usize, CliError> {
        match v.get_ref() {
            Value::Integer(i) if *i >= 0 => Ok(*i as usize),
            _ => Err(self.err(v.span(), format!("{what}: expected a non-negative integer"))),
        }
    }

    fn boolean(&self, v: &Spanned<Value>, what: &str) -> Result<bool, CliError> {
        v.get_ref()
            .as_bool()
            .ok_or_else(|| self.err(v.span(), format!("{what}: expected true or false")))
    }
}

/// Splits "810 nm" / "810nm" / "3e11 cm^-3" into value and unit.
fn split_quantity(s: &str) -> Option<(f64, &str)> {
    let s = s.trim();
    let mut best = None;
    for (i, _) in s.char_indices().skip(1).chain(std::iter::once((s.len(), ' '))) {
        if let Ok(x) = s[..i].parse::<f64>() {
            if x.is_finite() {
                best = Some((x, s[i..].trim()));
            }
        }
    }
    best
}

const LENGTH: &[(&str, f64)] = &[
    ("nm", 1e-9),
    ("um", 1e-6),
    ("μm", 1e-6),
    ("µm", 1e-6),
    ("mm", 1e-3),
    ("m", 1.0),
];
const TEMPERATURE: &[(&str, f64)] = &[
    ("K", 1.0),
    ("mK", 1e-3),
    ("uK", 1e-6),
    ("μK", 1e-6),
    ("µK", 1e-6),
    ("nK", 1e-9),
];
const DENSITY: &[(&str, f64)] = &[("cm^-3", 1e6), ("m^-3", 1.0)];
const POWER: &[(&str, f64)] = &[
    ("W", 1.0),
    ("mW", 1e-3),
    ("uW", 1e-6),
    ("μW", 1e-6),
    ("µW", 1e-6),
    ("nW", 1e-9),
];
const LINEWIDTH: &[(&str, f64)] = &[("MHz", 2.0 * std::f64::consts::PI * 1e6), ("rad/s", 1.0)];

/// Units of a detuning, expressed as multipliers to Γ.
fn detuning_units(gamma: f64) -> [(&'static str, f64); 3] {
    [
        ("Gamma", 1.0),
        ("MHz", mhz_to_angular(1.0) / gamma),
        ("rad/s", 1.0 / gamma),
    ]
}

/// Parses and validates a configuration file's text.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        CliError::Config {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let cx = Ctx { text };

    // linewidth first: other values may be given in units of Γ
    let resp = raw.response.unwrap_or_default();
    let gamma = match &resp.gamma {
        Some(v) => cx.quantity(v, "response.gamma", LINEWIDTH)?,
        None => mhz_to_angular(6.0),
    };
    if !(gamma > 0.0) {
        return Err(cx.err(resp.gamma.as_ref().unwrap().span(), "response.gamma must be positive"));
    }
    let det_units = detuning_units(gamma);

    let g = raw.geometry.unwrap_or_default();
    let lambda_dip = opt(&g.lambda_dip, |v| cx.quantity(v, "geometry.lambda_dip", LENGTH))?.unwrap_or(810e-9);
    let lambda_brg = opt(&g.lambda_brg, |v| cx.quantity(v, "geometry.lambda_brg", LENGTH))?.unwrap_or(780e-9);
    let w_dip = opt(&g.w_dip, |v| cx.quantity(v, "geometry.w_dip", LENGTH))?.unwrap_or(220e-6);
    let w_brg = opt(&g.w_brg, |v| cx.quantity(v, "geometry.w_brg", LENGTH))?.unwrap_or(800e-6);

    let mut u0_units: Vec<(&str, f64)> = TEMPERATURE.iter().map(|&(u, s)| (u, kelvin_to_angular(s))).collect();
    u0_units.extend(det_units.iter().map(|&(u, s)| (u, s * gamma)));
    let u0 = opt(&g.u0, |v| cx.quantity(v, "geometry.u0", &u0_units))?.unwrap_or(kelvin_to_angular(500e-6));
    if !(u0 > 0.0) {
        return Err(cx.err(g.u0.as_ref().unwrap().span(), "geometry.u0 must be positive"));
    }

    let temperature = match &g.temperature {
        None => 0.4 * HBAR * u0 / K_B,
        Some(v) => {
            let s = cx.string(v, "geometry.temperature")?;
            if let Some(factor) = s.strip_suffix("U0").and_then(|p| p.trim().strip_suffix('*')) {
                let x: f64 = factor
                    .trim()
                    .parse()
                    .map_err(|_| cx.err(v.span(), format!("geometry.temperature: cannot parse \"{s}\"")))?;
                x * HBAR * u0 / K_B
            } else {
                cx.quantity(v, "geometry.temperature", TEMPERATURE)?
            }
        }
    };
    if !(temperature >= 0.0) {
        return Err(cx.err(
            g.temperature.as_ref().unwrap().span(),
            "geometry.temperature must be non-negative",
        ));
    }

    let delta_lambda = opt(&g.delta_lambda_dip, |v| {
        cx.quantity(v, "geometry.delta_lambda_dip", LENGTH)
    })?;
    let explicit_angle = match &g.angle {
        None => None,
        Some(v) if v.get_ref().as_str() == Some("bragg") => None,
        Some(v) => {
            let beta = cx.quantity(
                v,
                "geometry.angle",
                &[("deg", std::f64::consts::PI / 180.0), ("rad", 1.0)],
            )?;
            if let Some(d) = &g.delta_lambda_dip {
                return Err(cx.err(d.span(), "geometry.delta_lambda_dip requires angle = \"bragg\""));
            }
            Some(beta)
        }
    };
    let angle_span = g
        .angle
        .as_ref()
        .or(g.lambda_brg.as_ref())
        .or(g.lambda_dip.as_ref())
        .map_or(0..0, |v| v.span());
    let beta_i = match explicit_angle {
        Some(b) => b,
        None => {
            bragg_angle(lambda_brg, lambda_dip).map_err(|e| cx.err(angle_span.clone(), format!("geometry: {e}")))?
        }
    };
    let matched = LatticeGeometry {
        lambda_dip,
        lambda_brg,
        beta_i,
        u0,
        temperature,
        w_dip,
        w_brg,
    };
    matched
        .validate()
        .map_err(|e| cx.err(angle_span.clone(), format!("geometry: {e}")))?;
    let delta_lambda_dip = match explicit_angle {
        Some(b) => lattice_mismatch(lambda_dip, lambda_brg, b),
        None => delta_lambda.unwrap_or(0.0),
    };

    let lines = match &resp.lines {
        None => None,
        Some(list) => {
            let mut out = Vec::with_capacity(list.len());
            for l in list {
                let off = cx.quantity(&l.offset, "response.lines.offset", &det_units)?;
                let s = cx.number(&l.strength, "response.lines.strength")?;
                out.push((off, s));
            }
            Some(out)
        }
    };
    let lines_span = resp
        .lines
        .as_ref()
        .and_then(|l| l.first())
        .map_or(0..0, |l| l.offset.span());
    let response = AtomResponseConfig::from_gamma_units(gamma, lines.as_deref().unwrap_or(&RB85_D2_F3), lambda_brg)
        .map_err(|e| cx.err(lines_span, format!("response.lines: {e}")))?;

    let m = raw.model.unwrap_or_default();
    let kind = match &m.kind {
        None => ModelKind::TwoComponent,
        Some(v) => match cx.string(v, "model.kind")? {
            "perfect" => ModelKind::Perfect,
            "sequential" => ModelKind::Sequential,
            "two_component" => ModelKind::TwoComponent,
            other => {
                return Err(cx.err(
                    v.span(),
                    format!("model.kind: unknown model \"{other}\" (perfect, sequential, two_component)"),
                ))
            }
        },
    };
    let density = opt(&m.density, |v| cx.quantity(v, "model.density", DENSITY))?.unwrap_or(3e17);
    if !(density >= 0.0) {
        return Err(cx.err(m.density.as_ref().unwrap().span(), "model.density must be non-negative"));
    }
    let n_s = match &m.n_s {
        None => 600,
        Some(v) if v.get_ref().as_str() == Some("auto") => matched.derived().n_s.round().max(1.0) as usize,
        Some(v) => cx.count(v, "model.n_s")?,
    };
    let n_ss = opt(&m.n_ss, |v| cx.count(v, "model.n_ss"))?.unwrap_or(10);
    let f_dw = match &m.f_dw {
        None => 0.2,
        Some(v) if v.get_ref().as_str() == Some("auto") => matched.derived().f_dw,
        Some(v) => {
            let f = cx.number(v, "model.f_dw")?;
            if !(0.0..=1.0).contains(&f) {
                return Err(cx.err(v.span(), "model.f_dw must lie in [0, 1]"));
            }
            f
        }
    };
    if n_s < 1 || n_ss < 1 {
        let span = m.n_s.as_ref().or(m.n_ss.as_ref()).map_or(0..0, |v| v.span());
        return Err(cx.err(span, "model.n_s and model.n_ss must be at least 1"));
    }
    let stark = opt(&m.stark, |v| cx.boolean(v, "model.stark"))?.unwrap_or(true);
    let potential = match &m.potential {
        None => PotentialForm::Harmonic,
        Some(v) => match cx.string(v, "model.potential")? {
            "harmonic" => PotentialForm::Harmonic,
            "sinusoidal" => PotentialForm::Sinusoidal,
            other => {
                return Err(cx.err(
                    v.span(),
                    format!("model.potential: unknown form \"{other}\" (harmonic, sinusoidal)"),
                ))
            }
        },
    };

    let s = raw.scan.unwrap_or_default();
    let start = opt(&s.start, |v| cx.quantity(v, "scan.start", &det_units))?.unwrap_or(-40.0);
    let stop = opt(&s.stop, |v| cx.quantity(v, "scan.stop", &det_units))?.unwrap_or(15.0);
    let points = opt(&s.points, |v| cx.count(v, "scan.points"))?.unwrap_or(1101);
    let grid = DeltaGrid::new(start, stop, points).map_err(|e| {
        let span = s.points.as_ref().or(s.start.as_ref()).map_or(0..0, |v| v.span());
        cx.err(span, format!("scan: {e}"))
    })?;
    let delta_lambdas = match &s.delta_lambdas {
        None => vec![-0.8e-9, -0.4e-9, 0.0, 0.4e-9, 0.8e-9],
        Some(v) => v
            .iter()
            .map(|x| cx.quantity(x, "scan.delta_lambdas", LENGTH))
            .collect::<Result<_, _>>()?,
    };
    let atom_numbers = match &s.atom_numbers {
        None => (0..=12).map(|i| 1e5 * 10f64.powf(i as f64 / 4.0)).collect(),
        Some(v) => v
            .iter()
            .map(|x| {
                let n = cx.number(x, "scan.atom_numbers")?;
                if n < 0.0 {
                    return Err(cx.err(x.span(), "scan.atom_numbers must be non-negative"));
                }
                Ok(n)
            })
            .collect::<Result<_, _>>()?,
    };
    let radial_rings = opt(&s.radial_rings, |v| cx.count(v, "scan.radial_rings"))?.unwrap_or(0);

    let p = raw.profile.unwrap_or_default();
    let profile = ProfileSpec {
        delta: opt(&p.delta, |v| cx.quantity(v, "profile.delta", &det_units))?.unwrap_or(0.0),
        samples_per_gap: opt(&p.samples_per_gap, |v| cx.count(v, "profile.samples_per_gap"))?.unwrap_or(32),
        n_s: opt(&p.n_s, |v| cx.count(v, "profile.n_s"))?.unwrap_or(0),
    };
    if profile.samples_per_gap < 2 {
        return Err(cx.err(
            p.samples_per_gap.as_ref().unwrap().span(),
            "profile.samples_per_gap must be at least 2",
        ));
    }

    let lossless_bands = opt(&raw.bands.unwrap_or_default().lossless, |v| {
        cx.boolean(v, "bands.lossless")
    })?
    .unwrap_or(false);

    let pw = raw.powers.unwrap_or_default();
    let eta = opt(&pw.eta, |v| cx.number(v, "powers.eta"))?.unwrap_or(0.16);
    if !(0.0..=1.0).contains(&eta) {
        return Err(cx.err(pw.eta.as_ref().unwrap().span(), "powers.eta must lie in [0, 1]"));
    }
    let incident = opt(&pw.incident, |v| cx.quantity(v, "powers.incident", POWER))?.unwrap_or(30e-6);

    let (geometry, model_density) = if explicit_angle.is_none() && delta_lambda_dip != 0.0 {
        let (dg, n) = braggstack::experiments::detuned_lattice(&matched, density, delta_lambda_dip);
        dg.validate().map_err(|e| {
            cx.err(
                g.delta_lambda_dip.as_ref().map_or(0..0, |v| v.span()),
                format!("geometry: {e}"),
            )
        })?;
        (dg, n)
    } else {
        (matched, density)
    };

    Ok(RunConfig {
        geometry,
        delta_lambda_dip,
        response,
        model: ModelSpec {
            kind,
            density: model_density,
            n_s,
            n_ss,
            f_dw,
            stark,
            potential,
        },
        scan: ScanSpec {
            grid,
            delta_lambdas,
            atom_numbers,
            radial_rings,
        },
        profile,
        lossless_bands,
        powers: PowerSpec { eta, incident },
        matched_geometry: matched,
        matched_density: density,
        bragg_mode: explicit_angle.is_none(),
    })
}

fn opt<T>(v: &Field, f: impl FnOnce(&Spanned<Value>) -> Result<T, CliError>) -> Result<Option<T>, CliError> {
    v.as_ref().map(f).transpose()
}

impl Default for RunConfig {
    fn default() -> Self {
        parse_config("").expect("empty configuration is valid")
    }
}
