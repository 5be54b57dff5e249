//! TOML run configuration with defaults, `--set` overrides and pre-run gates.

use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::fdtd::{self, Bootstrap};
use crate::grid::{Plane, PositionGrid};
use crate::packet::{GaussianPacket, PolarizedState};
use crate::spinor::Bispinor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineChoice {
    Spectral,
    Fdtd,
    Both,
}

impl EngineChoice {
    pub fn uses_fdtd(self) -> bool {
        matches!(self, EngineChoice::Fdtd | EngineChoice::Both)
    }

    pub fn uses_spectral(self) -> bool {
        matches!(self, EngineChoice::Spectral | EngineChoice::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketConfig {
    pub d: f64,
    pub delta: f64,
    #[serde(default)]
    pub k0: f64,
    #[serde(default)]
    pub m_axial: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationConfig {
    /// Four (re, im) pairs; normalized before use.
    pub phi: [[f64; 2]; 4],
}

impl PolarizationConfig {
    pub fn bispinor(&self) -> Bispinor {
        Bispinor(self.phi.map(|[re, im]| Complex64::new(re, im)))
    }

    pub fn from_bispinor(phi: &Bispinor) -> Self {
        PolarizationConfig {
            phi: phi.0.map(|c| [c.re, c.im]),
        }
    }
}

/// Time step: a number or `"auto"` (half the stability bound).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DtSetting {
    #[default]
    Auto,
    Fixed(f64),
}

impl Serialize for DtSetting {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DtSetting::Auto => s.serialize_str("auto"),
            DtSetting::Fixed(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for DtSetting {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(DtSetting::Fixed(v)),
            Raw::Int(v) => Ok(DtSetting::Fixed(v as f64)),
            Raw::Text(t) if t == "auto" => Ok(DtSetting::Auto),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("dt must be a number or \"auto\", got \"{t}\""))),
        }
    }
}

fn one_or_three<'de, D, T>(d: D) -> std::result::Result<[T; 3], D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de> + Copy,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw<T> {
        One(T),
        Three([T; 3]),
    }
    Ok(match Raw::<T>::deserialize(d)? {
        Raw::One(v) => [v; 3],
        Raw::Three(v) => v,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(deserialize_with = "one_or_three", default = "default_n")]
    pub n: [usize; 3],
    #[serde(deserialize_with = "one_or_three", default = "default_spacing")]
    pub spacing: [f64; 3],
    #[serde(default)]
    pub dt: DtSetting,
    #[serde(default)]
    pub bootstrap: Bootstrap,
}

fn default_n() -> [usize; 3] {
    [64; 3]
}

fn default_spacing() -> [f64; 3] {
    [0.5; 3]
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n: default_n(),
            spacing: default_spacing(),
            dt: DtSetting::Auto,
            bootstrap: Bootstrap::Lattice,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    /// Snapshot times; empty means none.
    #[serde(default)]
    pub snapshots: Vec<f64>,
    /// Sampling interval of the time series; 0 disables them.
    #[serde(default = "default_series_dt")]
    pub series_dt: f64,
}

fn default_t_end() -> f64 {
    10.0
}

fn default_series_dt() -> f64 {
    0.1
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig {
            t_end: default_t_end(),
            snapshots: Vec::new(),
            series_dt: default_series_dt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    /// Velocity, spin and norm series from the engine.
    Series,
    /// The same quantities from momentum quadrature (m_axial = 0 only).
    Oracle,
    /// Probability density slices.
    Density,
    /// Spin density slices (all three components).
    SpinDensity,
    /// W± curves.
    WCurve,
    /// Symmetry metrics at every snapshot.
    Symmetry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_directory")]
    pub directory: PathBuf,
    #[serde(default = "default_observables")]
    pub observables: Vec<Observable>,
    /// Planes such as `"z=0"` written for every snapshot.
    #[serde(default = "default_slices")]
    pub slices: Vec<String>,
    /// Write binary field dumps at snapshot times.
    #[serde(default = "default_true")]
    pub dumps: bool,
    #[serde(default = "default_w_samples")]
    pub w_samples: usize,
}

fn default_directory() -> PathBuf {
    PathBuf::from("out")
}

fn default_observables() -> Vec<Observable> {
    vec![
        Observable::Series,
        Observable::Oracle,
        Observable::Density,
        Observable::Symmetry,
    ]
}

fn default_slices() -> Vec<String> {
    vec!["z=0".into()]
}

fn default_true() -> bool {
    true
}

fn default_w_samples() -> usize {
    201
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: default_directory(),
            observables: default_observables(),
            slices: default_slices(),
            dumps: true,
            w_samples: default_w_samples(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub engine: EngineChoice,
    pub packet: PacketConfig,
    pub polarization: PolarizationConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
}

impl RunConfig {
    pub fn packet(&self) -> Result<GaussianPacket> {
        let p = &self.packet;
        GaussianPacket::with_axial(p.d, p.delta, p.k0, p.m_axial)
    }

    pub fn state(&self) -> Result<PolarizedState> {
        PolarizedState::new(self.packet()?, self.polarization.bispinor())
            .map_err(|_| Error::Config("polarization has zero norm; give at least one non-zero component".into()))
    }

    pub fn position_grid(&self) -> Result<PositionGrid> {
        PositionGrid::centered(self.grid.n, self.grid.spacing)
    }

    /// Leap-frog time step with `"auto"` resolved.
    pub fn resolved_dt(&self) -> Result<f64> {
        match self.grid.dt {
            DtSetting::Fixed(v) => Ok(v),
            DtSetting::Auto => fdtd::auto_dt(&self.position_grid()?),
        }
    }

    pub fn planes(&self) -> Result<Vec<Plane>> {
        self.outputs.slices.iter().map(|s| Plane::parse(s)).collect()
    }

    pub fn wants(&self, o: Observable) -> bool {
        self.outputs.observables.contains(&o)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("RunConfig always serializes")
    }

    /// Cheap checks that need no sampled field.
    pub fn validate(&self) -> Result<()> {
        self.packet().map_err(|e| Error::Config(e.to_string()))?;
        self.state()?;
        if self.grid.n.iter().any(|&n| n < 4) {
            return Err(Error::Config(format!("grid.n must be at least 4 per axis, got {:?}", self.grid.n)));
        }
        if self.grid.spacing.iter().any(|&h| !(h.is_finite() && h > 0.0)) {
            return Err(Error::Config(format!("grid.spacing must be positive, got {:?}", self.grid.spacing)));
        }
        let s = &self.schedule;
        if !(s.t_end.is_finite() && s.t_end >= 0.0) {
            return Err(Error::Config(format!("schedule.t_end must be ≥ 0, got {}", s.t_end)));
        }
        if let Some(t) = s.snapshots.iter().find(|t| !(**t >= 0.0 && **t <= s.t_end)) {
            return Err(Error::Config(format!("snapshot time {t} lies outside [0, t_end = {}]", s.t_end)));
        }
        if !(s.series_dt.is_finite() && s.series_dt >= 0.0) {
            return Err(Error::Config(format!("schedule.series_dt must be ≥ 0, got {}", s.series_dt)));
        }
        self.planes().map_err(|e| Error::Config(e.to_string()))?;
        if self.engine.uses_fdtd() {
            self.validate_fdtd()?;
        }
        Ok(())
    }

    fn validate_fdtd(&self) -> Result<()> {
        if self.packet.m_axial != 0 {
            return Err(Error::Config(
                "packet.m_axial != 0 is only supported by the spectral engine".into(),
            ));
        }
        let g = self.position_grid()?;
        if !g.is_uniform() {
            return Err(Error::Config(format!(
                "the leap-frog engine needs equal spacings on all axes, got {:?}",
                self.grid.spacing
            )));
        }
        let h = self.grid.spacing[0];
        if h >= 1.0 {
            return Err(Error::Config(format!(
                "resolution gate: spacing {h} must be below the Compton wavelength (1) to resolve Zitterbewegung"
            )));
        }
        let dt = self.resolved_dt()?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::Config(format!("grid.dt must be > 0, got {dt}")));
        }
        let margin = fdtd::stability_margin(&g, dt)?;
        if margin <= 0.0 {
            return Err(Error::Config(format!(
                "stability margin d^4(1-dt^2) - 2(d*dt)^2 - 4dt^2 = {margin:.6} is not positive for d = {h}, dt = {dt}; \
                 the largest stable dt is {:.6}",
                fdtd::max_stable_dt(h)
            )));
        }
        Ok(())
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_with(text, &[])
}

/// As [`parse_config`], applying `key.path=value` overrides first.
pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut doc: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let cfg: RunConfig = doc.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Validates an already-built configuration after applying overrides.
pub fn override_config(cfg: &RunConfig, overrides: &[String]) -> Result<RunConfig> {
    parse_config_with(&cfg.to_toml(), overrides)
}

fn apply_override(doc: &mut toml::Table, text: &str) -> Result<()> {
    let (key, raw) = text
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{text}` is not of the form key=value")))?;
    let value: toml::Value = format!("v = {}", raw.trim())
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
    let path: Vec<&str> = key.trim().split('.').collect();
    let (last, parents) = path.split_last().expect("split yields one element");
    let mut table = doc;
    for p in parents {
        table = table
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| Error::Config(format!("override `{key}`: `{p}` is not a section")))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}
