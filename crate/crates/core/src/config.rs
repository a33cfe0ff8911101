//! JSON model documents and run configurations.
//!
//! Parsing is strict: unknown keys are rejected, and every error carries the
//! JSON path of the offending value.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::model::{ModelKind, ModelParams, ModelSpec};
use crate::sim::{PeriodProtocol, TimingNoise};
use crate::units::UnitSystem;

pub const SCHEMA_VERSION: &str = "1";

/// Shipped presets, `(name, document)`.
pub const PRESETS: [(&str, &str); 4] = [
    ("box", include_str!("../presets/box.json")),
    ("harmonic", include_str!("../presets/harmonic.json")),
    ("hydrogen", include_str!("../presets/hydrogen.json")),
    ("h2-morse", include_str!("../presets/h2-morse.json")),
];

fn join(prefix: &str, path: &str) -> String {
    match (prefix.is_empty(), path == "." || path.is_empty()) {
        (true, _) => path.to_string(),
        (false, true) => prefix.to_string(),
        (false, false) => format!("{prefix}.{path}"),
    }
}

fn from_str_at<T: DeserializeOwned>(text: &str, prefix: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(de)
        .map_err(|e| Error::Parse { location: join(prefix, &e.path().to_string()), reason: e.inner().to_string() })?;
    Ok(value)
}

fn from_value_at<T: DeserializeOwned>(value: &Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(value)
        .map_err(|e| Error::Parse { location: join(prefix, &e.path().to_string()), reason: e.inner().to_string() })
}

fn reprefix(err: Error, prefix: &str) -> Error {
    match err {
        Error::InvalidModel { path, reason } => Error::InvalidModel { path: join(prefix, &path), reason },
        other => other,
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxParams {
    mass: f64,
    width: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HarmonicParams {
    mass: f64,
    stiffness: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HydrogenoidParams {
    reduced_mass: f64,
    charge_number: u32,
    elementary_charge: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MorseParams {
    mass: f64,
    depth: f64,
    range: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NumericParams {
    mass: f64,
    x: Vec<f64>,
    u: Vec<f64>,
}

/// `{"kind", "units", "params"}`, or `{"preset"}` naming a shipped model.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ModelKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Value>,
}

impl ModelDocument {
    pub fn preset(name: &str) -> Result<ModelDocument> {
        let text = PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| Error::Parse { location: "preset".into(), reason: format!("unknown preset `{name}`") })?;
        from_str_at(text, "")
    }

    /// Build the model; `prefix` is prepended to error paths.
    pub fn to_spec(&self, prefix: &str) -> Result<ModelSpec> {
        if let Some(name) = &self.preset {
            if self.kind.is_some() || self.units.is_some() || self.params.is_some() {
                return Err(Error::Parse {
                    location: join(prefix, "preset"),
                    reason: "a preset excludes kind, units and params".into(),
                });
            }
            return ModelDocument::preset(name)
                .map_err(|e| match e {
                    Error::Parse { reason, .. } => Error::Parse { location: join(prefix, "preset"), reason },
                    other => other,
                })?
                .to_spec(prefix);
        }
        let missing = |field: &str| Error::Parse { location: join(prefix, field), reason: "missing field".into() };
        let kind = self.kind.ok_or_else(|| missing("kind"))?;
        let units_name = self.units.as_deref().ok_or_else(|| missing("units"))?;
        let params = self.params.as_ref().ok_or_else(|| missing("params"))?;
        let units = UnitSystem::by_name(units_name)?;
        let at = join(prefix, "params");
        let params = match kind {
            ModelKind::Box => {
                let p: BoxParams = from_value_at(params, &at)?;
                ModelParams::Box { mass: p.mass, width: p.width }
            }
            ModelKind::Harmonic => {
                let p: HarmonicParams = from_value_at(params, &at)?;
                ModelParams::Harmonic { mass: p.mass, stiffness: p.stiffness }
            }
            ModelKind::Hydrogenoid => {
                let p: HydrogenoidParams = from_value_at(params, &at)?;
                ModelParams::Hydrogenoid {
                    reduced_mass: p.reduced_mass,
                    charge_number: p.charge_number,
                    elementary_charge: p.elementary_charge,
                }
            }
            ModelKind::Morse => {
                let p: MorseParams = from_value_at(params, &at)?;
                ModelParams::Morse { mass: p.mass, depth: p.depth, range: p.range }
            }
            ModelKind::NumericPotential => {
                let p: NumericParams = from_value_at(params, &at)?;
                let table = MonotoneCubic::new(p.x, p.u).map_err(|e| reprefix(e, prefix))?;
                ModelParams::NumericPotential { mass: p.mass, table }
            }
        };
        ModelSpec::new(params, units).map_err(|e| reprefix(e, prefix))
    }
}

/// Parse and validate a standalone model document.
pub fn parse_model_document(text: &str) -> Result<ModelSpec> {
    from_str_at::<ModelDocument>(text, "")?.to_spec("")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Hash)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Spectrum,
    Criterion,
    Noise,
    Simulate,
    Report,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Analysis::Spectrum => "spectrum",
            Analysis::Criterion => "criterion",
            Analysis::Noise => "noise",
            Analysis::Simulate => "simulate",
            Analysis::Report => "report",
        }
    }
}

/// Overrides of the default period-timing protocol; the seed is set at the
/// top level of the run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<TimingNoise>,
}

impl ProtocolOverrides {
    pub fn protocol(&self, seed: u64) -> PeriodProtocol {
        let d = PeriodProtocol::default();
        PeriodProtocol {
            s: self.s.unwrap_or(d.s),
            delta_t: self.delta_t.or(d.delta_t),
            trials: self.trials.unwrap_or(d.trials),
            seed,
            noise: self.noise.unwrap_or(d.noise),
        }
    }
}

/// Measurement-noise analysis settings. Widths default to `√(ħ/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_p: Option<f64>,
    #[serde(default)]
    pub center_x: f64,
    #[serde(default)]
    pub center_p: f64,
    #[serde(default = "default_count")]
    pub count: usize,
    /// Momenta at which the characteristic function is checked; defaults to
    /// `k ħ/(4δx)` for `k = 0..=12`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momenta: Option<Vec<f64>>,
    /// Highest oscillator level in the noise-product table.
    #[serde(default = "default_levels")]
    pub harmonic_levels: i64,
}

fn default_count() -> usize {
    100_000
}

fn default_levels() -> i64 {
    1000
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            delta_x: None,
            delta_p: None,
            center_x: 0.0,
            center_p: 0.0,
            count: default_count(),
            momenta: None,
            harmonic_levels: default_levels(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<String>,
    pub model: ModelDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Analysis>,
    /// Inclusive `[lo, hi]`; clamped to the levels the model supports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_range: Option<(i64, i64)>,
    #[serde(default)]
    pub protocol: ProtocolOverrides,
    #[serde(default)]
    pub noise: NoiseConfig,
    /// Use the semiclassical engine for the spectrum comparison column.
    #[serde(default)]
    pub semiclassical: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    /// Parse without semantic checks.
    pub fn parse(text: &str) -> Result<RunConfig> {
        from_str_at(text, "")
    }

    /// Parse and run every check that does not need a computation.
    pub fn load(text: &str) -> Result<(RunConfig, ModelSpec)> {
        let config = RunConfig::parse(text)?;
        let model = config.validate()?;
        Ok((config, model))
    }

    pub fn validate(&self) -> Result<ModelSpec> {
        let bad = |location: &str, reason: String| Error::Parse { location: location.into(), reason };
        if let Some(v) = &self.schema_version {
            if v != SCHEMA_VERSION {
                return Err(bad("schema_version", format!("unsupported version `{v}`, expected `{SCHEMA_VERSION}`")));
            }
        }
        let model = self.model.to_spec("model")?;
        if let Some((lo, hi)) = self.n_range {
            if lo < 0 || hi < lo {
                return Err(bad("n_range", format!("expected 0 <= lo <= hi, got [{lo}, {hi}]")));
            }
        }
        self.protocol.protocol(self.seed).validate()?;
        let noise = &self.noise;
        for (name, v) in [("noise.delta_x", noise.delta_x), ("noise.delta_p", noise.delta_p)] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(bad(name, format!("must be finite and >= 0, got {v}")));
                }
            }
        }
        for (name, v) in [("noise.center_x", noise.center_x), ("noise.center_p", noise.center_p)] {
            if !v.is_finite() {
                return Err(bad(name, "must be finite".into()));
            }
        }
        if noise.count < 2 {
            return Err(bad("noise.count", format!("at least 2 samples are required, got {}", noise.count)));
        }
        if let Some(ps) = &noise.momenta {
            if let Some(i) = ps.iter().position(|p| !p.is_finite()) {
                return Err(bad(&format!("noise.momenta[{i}]"), "must be finite".into()));
            }
        }
        if noise.harmonic_levels < 0 {
            return Err(bad("noise.harmonic_levels", "must be >= 0".into()));
        }
        Ok(model)
    }
}
