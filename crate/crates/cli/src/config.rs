//! Run configuration: a flat JSON document.

use std::fmt;

use gaussest::estimators::{ChannelEstimate, SchemeModel};
use gaussest::gaussian::{NoiseChannel, Source};
use gaussest::interferometer::{NoiseSpec, ProcessParams, SchemeConfig};
use gaussest::statistics::{Method, StandardPipeline};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    Passive,
    Active,
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineKind {
    Ideal,
    Naive,
    KnownChannel,
    ChannelCalibrated,
    KnownProcess,
    TwoSource,
    Combined,
}

impl PipelineKind {
    pub fn name(&self) -> &'static str {
        match self {
            PipelineKind::Ideal => "ideal",
            PipelineKind::Naive => "naive",
            PipelineKind::KnownChannel => "known-channel",
            PipelineKind::ChannelCalibrated => "channel-calibrated",
            PipelineKind::KnownProcess => "known-process",
            PipelineKind::TwoSource => "two-source",
            PipelineKind::Combined => "combined",
        }
    }
}

/// Every key is optional; see [`RunConfig::default`] for the defaults.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub scheme: SchemeKind,
    pub mu: f64,
    pub r: f64,
    pub source_r: f64,
    pub source_d: f64,
    pub source2_r: Option<f64>,
    pub source2_d: Option<f64>,
    pub q: f64,
    pub phi: f64,
    pub d: f64,
    pub alpha: f64,
    pub beta: f64,
    pub channel_t: Option<f64>,
    pub channel_v_eps: Option<f64>,
    pub process_t: Option<f64>,
    pub process_v_eps: Option<f64>,
    pub efficiency: f64,
    pub shots: usize,
    pub blocks: usize,
    pub seed: u64,
    pub sweep_param: Option<String>,
    pub sweep_values: Vec<f64>,
    pub pipeline: PipelineKind,
    pub assumed_v_eps: f64,
    /// Shots of the bypass round as a multiple of `shots`.
    pub calibration_factor: usize,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scheme: SchemeKind::Passive,
            mu: 0.3,
            r: 0.5,
            source_r: 5.0,
            source_d: 10.0,
            source2_r: None,
            source2_d: None,
            q: 1.23,
            phi: 0.63,
            d: 1.67,
            alpha: 0.0,
            beta: 0.0,
            channel_t: None,
            channel_v_eps: None,
            process_t: None,
            process_v_eps: None,
            efficiency: 1.0,
            shots: 10_000,
            blocks: 1_000,
            seed: 1,
            sweep_param: None,
            sweep_values: Vec::new(),
            pipeline: PipelineKind::Ideal,
            assumed_v_eps: 1.0,
            calibration_factor: 1,
            out: None,
        }
    }
}

/// Parameters a sweep may vary. `source_v` keeps the thermal fraction
/// `R²/V` of the first source, `thermal_ratio` keeps its `V`.
pub const SWEEP_PARAMS: &[&str] = &[
    "mu",
    "r",
    "source_r",
    "source_d",
    "source_v",
    "thermal_ratio",
    "q",
    "phi",
    "d",
    "channel_t",
    "channel_v_eps",
    "process_t",
    "process_v_eps",
    "efficiency",
    "shots",
];

/// A configuration problem, located at a line of the source text when known.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// First line mentioning `"key"`.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
}

impl RunConfig {
    /// Parses without the run checks: syntax, key names and types only.
    pub fn parse_unchecked(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError {
            line: Some(e.line()),
            message: e.to_string(),
        })
    }

    /// Parses and validates; errors carry the line of the offending key.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let config = Self::parse_unchecked(text)?;
        config.validate().map_err(|(key, message)| ConfigError {
            line: line_of(text, key),
            message: format!("{key}: {message}"),
        })?;
        Ok(config)
    }

    /// Checks every point of the sweep against the model preconditions.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        let sweep_key = match &self.sweep_param {
            Some(p) => match SWEEP_PARAMS.iter().find(|k| *k == p) {
                Some(k) => Some(*k),
                None => return Err(("sweep_param", format!("unknown parameter {p:?}; one of {}", SWEEP_PARAMS.join(", ")))),
            },
            None => None,
        };
        match sweep_key {
            Some(_) if self.sweep_values.is_empty() => {
                return Err(("sweep_values", "a sweep needs at least one value".into()));
            }
            None if !self.sweep_values.is_empty() => {
                return Err(("sweep_param", "sweep_values given without sweep_param".into()));
            }
            _ => {}
        }
        if self.blocks < 2 {
            return Err(("blocks", format!("{} blocks; at least 2 are needed", self.blocks)));
        }
        if self.scheme == SchemeKind::Direct {
            return Err((
                "scheme",
                "the direct layout has no reference arm and no phase estimator; use `expect` for it".into(),
            ));
        }
        for point in self.points() {
            point.resolve().map_err(|(key, message)| {
                let swept = sweep_key.is_some_and(|s| s == key || (s.starts_with("source") && key == "source_r"));
                (if swept { "sweep_values" } else { key }, message)
            })?;
        }
        Ok(())
    }

    /// One configuration per sweep value (or just this one).
    pub fn points(&self) -> Vec<RunConfig> {
        match &self.sweep_param {
            None => vec![self.clone()],
            Some(p) => self.sweep_values.iter().map(|&v| self.with(p, v)).collect(),
        }
    }

    /// A copy with `param` set to `value`.
    pub fn with(&self, param: &str, value: f64) -> RunConfig {
        let mut c = self.clone();
        c.sweep_param = None;
        c.sweep_values.clear();
        match param {
            "mu" => c.mu = value,
            "r" => c.r = value,
            "source_r" => c.source_r = value,
            "source_d" => c.source_d = value,
            "source_v" => {
                let v = self.source_variance();
                let ratio = self.source_r.powi(2) / v;
                c.source_r = (ratio * value).sqrt();
                c.source_d = (2.0 * value * (1.0 - ratio)).max(0.0).sqrt();
            }
            "thermal_ratio" => {
                let v = self.source_variance();
                c.source_r = (value * v).sqrt();
                c.source_d = (2.0 * v * (1.0 - value)).max(0.0).sqrt();
            }
            "q" => c.q = value,
            "phi" => c.phi = value,
            "d" => c.d = value,
            "channel_t" => c.channel_t = Some(value),
            "channel_v_eps" => c.channel_v_eps = Some(value),
            "process_t" => c.process_t = Some(value),
            "process_v_eps" => c.process_v_eps = Some(value),
            "efficiency" => c.efficiency = value,
            "shots" => c.shots = value.round().max(0.0) as usize,
            _ => {}
        }
        c
    }

    pub fn source_variance(&self) -> f64 {
        self.source_r.powi(2) + self.source_d.powi(2) / 2.0
    }

    /// Builds the simulation and estimation objects for this point.
    pub fn resolve(&self) -> Result<Resolved, (&'static str, String)> {
        let e = |key: &'static str, err: gaussest::Error| (key, err.to_string());
        if self.shots == 0 {
            return Err(("shots", "at least one shot per setting".into()));
        }
        let source = Source::new(self.source_r, self.source_d).map_err(|x| e("source_r", x))?;
        let truth = ProcessParams::new(self.q, self.phi, self.d)
            .and_then(|p| p.with_directions(self.alpha, self.beta))
            .map_err(|x| e("q", x))?;
        let mut noise = NoiseSpec::none();
        let channel = match (self.channel_t, self.channel_v_eps) {
            (None, None) => None,
            (t, v) => Some(NoiseChannel::new(t.unwrap_or(1.0), v.unwrap_or(1.0)).map_err(|x| e("channel_t", x))?),
        };
        let process = match (self.process_t, self.process_v_eps) {
            (None, None) => None,
            (t, v) => Some(NoiseChannel::new(t.unwrap_or(1.0), v.unwrap_or(1.0)).map_err(|x| e("process_t", x))?),
        };
        if let Some(ch) = channel {
            noise = noise.with_channel(ch.transmittance(), ch.noise_variance()).map_err(|x| e("channel_t", x))?;
        }
        if let Some(ch) = process {
            noise = noise.with_process(ch.transmittance(), ch.noise_variance()).map_err(|x| e("process_t", x))?;
        }
        noise = noise.with_efficiency(self.efficiency).map_err(|x| e("efficiency", x))?;
        let (scheme, model) = match self.scheme {
            SchemeKind::Passive => (
                SchemeConfig::passive(self.mu).map_err(|x| e("mu", x))?,
                SchemeModel::Passive { mu: self.mu },
            ),
            SchemeKind::Active => (
                SchemeConfig::active(self.r, self.r).map_err(|x| e("r", x))?,
                SchemeModel::Active { r1: self.r, r2: self.r },
            ),
            SchemeKind::Direct => return Err(("scheme", "direct layout cannot be estimated".into())),
        };
        if !(source.variance() > 1.0) {
            return Err(("source_r", format!("source second moment V = {} carries no photons", source.variance())));
        }
        let scheme_key = if self.scheme == SchemeKind::Passive { "mu" } else { "r" };
        model.validate(source.variance()).map_err(|x| e(scheme_key, x))?;
        let scheme = scheme.with_noise(noise);
        let second = || -> Result<Source, (&'static str, String)> {
            match (self.source2_r, self.source2_d) {
                (None, None) => Err(("source2_r", "the pipeline needs a second source".into())),
                (r, d) => Source::new(r.unwrap_or(1.0), d.unwrap_or(0.0)).map_err(|x| e("source2_r", x)),
            }
        };
        let method = match self.pipeline {
            PipelineKind::Ideal | PipelineKind::Naive => Method::Ideal { source },
            PipelineKind::KnownChannel => Method::KnownChannel {
                source,
                channel: channel
                    .map(|c| ChannelEstimate {
                        transmittance: c.transmittance(),
                        noise_variance: c.noise_variance(),
                    })
                    .ok_or(("pipeline", "known-channel needs channel_t and channel_v_eps".into()))?,
            },
            PipelineKind::ChannelCalibrated => Method::ChannelCalibrated {
                source,
                calibration: source,
            },
            PipelineKind::KnownProcess => Method::KnownProcess {
                source,
                process: process.ok_or(("pipeline", "known-process needs process_t and process_v_eps".into()))?,
            },
            PipelineKind::TwoSource | PipelineKind::Combined => {
                let s2 = second()?;
                model.validate(s2.variance()).map_err(|x| e("source2_r", x))?;
                if self.pipeline == PipelineKind::TwoSource {
                    if !(self.assumed_v_eps >= 1.0) {
                        return Err(("assumed_v_eps", format!("{} is below the vacuum level 1", self.assumed_v_eps)));
                    }
                    Method::TwoSource {
                        sources: [source, s2],
                        assumed_v_eps: self.assumed_v_eps,
                    }
                } else {
                    Method::Combined {
                        sources: [source, s2],
                        calibration: source,
                    }
                }
            }
        };
        if self.calibration_factor == 0 {
            return Err(("calibration_factor", "must be at least 1".into()));
        }
        let pipeline = StandardPipeline::new(self.pipeline.name(), model, method)
            .with_efficiency(self.efficiency)
            .with_calibration_factor(self.calibration_factor);
        Ok(Resolved {
            scheme,
            truth,
            source,
            pipeline,
        })
    }
}

/// A validated point: what to simulate and how to estimate.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub scheme: SchemeConfig,
    pub truth: ProcessParams,
    pub source: Source,
    pub pipeline: StandardPipeline,
}
