use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{
    calibrate_channel, correct_efficiency_all, estimate_combined, estimate_ideal, estimate_with_channel_noise,
    estimate_with_known_process, estimate_with_process_noise, ChannelEstimate, EstimateReport, Readings, SchemeModel,
};
use crate::gaussian::{NoiseChannel, Source};
use crate::interferometer::{ProcessParams, SchemeConfig, Setting, ShotSimulator, ShotStats};
use crate::rng::block_rng;

/// A parameter whose estimation error is tracked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Phase,
    Squeezing,
    Displacement,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::Phase, Target::Squeezing, Target::Displacement];

    pub fn name(&self) -> &'static str {
        match self {
            Target::Phase => "phi",
            Target::Squeezing => "q",
            Target::Displacement => "d",
        }
    }

    pub fn truth(&self, p: &ProcessParams) -> f64 {
        match self {
            Target::Phase => p.phi(),
            Target::Squeezing => p.q(),
            Target::Displacement => p.d(),
        }
    }

    fn pick(&self, report: &EstimateReport) -> Option<f64> {
        match self {
            Target::Phase => Some(report.phase),
            Target::Squeezing => report.squeezing,
            Target::Displacement => report.displacement,
        }
    }
}

/// An estimation procedure: which settings it needs, and how it turns their
/// statistics into an estimate.
pub trait Pipeline: Sync {
    fn name(&self) -> &str;
    fn settings(&self, shots: usize) -> Vec<Setting>;
    fn estimate(&self, stats: &ShotStats) -> Result<EstimateReport>;
}

/// The estimators of [`crate::estimators`] with their measurement rounds.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    /// Noise-free inversion; on noisy data this is the naive estimator.
    Ideal { source: Source },
    /// Channel loss and noise known beforehand.
    KnownChannel { source: Source, channel: ChannelEstimate },
    /// Channel calibrated by a bypass round with `calibration`.
    ChannelCalibrated { source: Source, calibration: Source },
    /// Process loss and noise known beforehand.
    KnownProcess { source: Source, process: NoiseChannel },
    /// Two source strengths; `d̂` assumes the process noise `assumed_v_eps`.
    TwoSource { sources: [Source; 2], assumed_v_eps: f64 },
    /// Bypass calibration plus two source strengths.
    Combined { sources: [Source; 2], calibration: Source },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardPipeline {
    pub label: String,
    pub model: SchemeModel,
    pub method: Method,
    /// Detector efficiency undone before estimation.
    pub efficiency: f64,
    /// Shots of a bypass round, as a multiple of the per-setting count.
    pub calibration_factor: usize,
}

impl StandardPipeline {
    pub fn new(label: impl Into<String>, model: SchemeModel, method: Method) -> Self {
        Self {
            label: label.into(),
            model,
            method,
            efficiency: 1.0,
            calibration_factor: 1,
        }
    }

    pub fn with_calibration_factor(mut self, factor: usize) -> Self {
        self.calibration_factor = factor;
        self
    }

    pub fn with_efficiency(mut self, eta: f64) -> Self {
        self.efficiency = eta;
        self
    }
}

impl Pipeline for StandardPipeline {
    fn name(&self) -> &str {
        &self.label
    }

    fn settings(&self, shots: usize) -> Vec<Setting> {
        let pair = |s: &Source| Setting::quadrature_pair(*s, true, shots).to_vec();
        let bypass = |s: &Source| Setting::calibration(*s, 0.0, shots * self.calibration_factor);
        match &self.method {
            Method::Ideal { source } | Method::KnownChannel { source, .. } | Method::KnownProcess { source, .. } => {
                pair(source)
            }
            Method::ChannelCalibrated { source, calibration } => {
                let mut s = pair(source);
                s.push(bypass(calibration));
                s
            }
            Method::TwoSource { sources, .. } => sources.iter().flat_map(pair).collect(),
            Method::Combined { sources, calibration } => {
                let mut s: Vec<Setting> = sources.iter().flat_map(pair).collect();
                s.push(bypass(calibration));
                s
            }
        }
    }

    fn estimate(&self, raw: &ShotStats) -> Result<EstimateReport> {
        let corrected;
        let stats = if self.efficiency == 1.0 {
            raw
        } else {
            corrected = correct_efficiency_all(raw, self.efficiency)?;
            &corrected
        };
        let model = &self.model;
        let readings = |s: &Source| Readings::from_stats(stats, true, s.variance());
        match &self.method {
            Method::Ideal { source } => estimate_ideal(model, &readings(source)?, source.variance()),
            Method::KnownChannel { source, channel } => {
                estimate_with_channel_noise(model, &readings(source)?, channel, source.variance())
            }
            Method::ChannelCalibrated { source, calibration } => {
                let bypass = stats.find(false, calibration.variance(), 0.0)?.means();
                let cal = calibrate_channel(model, &bypass, calibration.variance())?;
                let mut report = estimate_with_channel_noise(model, &readings(source)?, &cal.estimate, source.variance())?;
                let mut flags = cal.flags;
                flags.append(&mut report.flags);
                report.flags = flags;
                Ok(report)
            }
            Method::KnownProcess { source, process } => {
                estimate_with_known_process(model, &readings(source)?, source.variance(), process)
            }
            Method::TwoSource { sources, assumed_v_eps } => estimate_with_process_noise(
                model,
                sources[0].variance(),
                &readings(&sources[0])?,
                sources[1].variance(),
                &readings(&sources[1])?,
                *assumed_v_eps,
            ),
            Method::Combined { sources, calibration } => {
                let bypass = stats.find(false, calibration.variance(), 0.0)?.means();
                estimate_combined(
                    model,
                    &bypass,
                    calibration.variance(),
                    sources[0].variance(),
                    &readings(&sources[0])?,
                    sources[1].variance(),
                    &readings(&sources[1])?,
                )
            }
        }
    }
}

/// Empirical error statistics of one parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct MseResult {
    pub target: Target,
    pub truth: f64,
    pub mse: f64,
    pub bias: f64,
    /// Population variance of the estimates, so `mse = bias² + variance`.
    pub variance: f64,
    /// Blocks that produced an estimate of this parameter.
    pub blocks: usize,
    pub shots: usize,
    pub seed: u64,
    /// Fraction of those blocks in which any estimate was clamped.
    pub clamp_fraction: f64,
}

/// All tracked parameters of one pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineMse {
    pub name: String,
    pub results: Vec<MseResult>,
    /// Blocks in which the pipeline returned an error.
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl PipelineMse {
    pub fn get(&self, target: Target) -> Option<&MseResult> {
        self.results.iter().find(|r| r.target == target)
    }
}

#[derive(Debug, Clone, Copy)]
struct BlockEstimate {
    values: [Option<f64>; 3],
    clamped: bool,
}

/// Error of `estimate` against `truth`, wrapped to `(−π, π]` for the phase.
fn error(target: Target, estimate: f64, truth: f64) -> f64 {
    let e = estimate - truth;
    if target == Target::Phase {
        let w = e.rem_euclid(TAU);
        if w > PI {
            w - TAU
        } else {
            w
        }
    } else {
        e
    }
}

/// Monte-Carlo mean squared error: `blocks` independent blocks of `shots`
/// shots per setting, each estimated by every pipeline.
///
/// All pipelines see the same shots: the simulated settings are the union of
/// what they ask for. Block `i` draws from stream `i` of `seed` and errors are
/// summed in block order, so results do not depend on the thread count.
/// A pipeline failing in more than half of the blocks is an error.
pub fn empirical_mse(
    scheme: &SchemeConfig,
    truth: &ProcessParams,
    pipelines: &[&dyn Pipeline],
    shots: usize,
    blocks: usize,
    seed: u64,
) -> Result<Vec<PipelineMse>> {
    if blocks < 2 {
        return Err(crate::error::invalid("M", blocks as f64, "at least two blocks are needed"));
    }
    if shots == 0 {
        return Err(crate::error::invalid("N", 0.0, "at least one shot per setting"));
    }
    if pipelines.is_empty() {
        return Err(Error::Dimension("no estimation pipeline given".into()));
    }
    let mut settings: Vec<Setting> = Vec::new();
    for s in pipelines.iter().flat_map(|p| p.settings(shots)) {
        match settings.iter().find(|t| t.same_key(&s)) {
            None => settings.push(s),
            Some(t) if t.shots != s.shots => {
                return Err(Error::Dimension(format!(
                    "pipelines disagree on the shot count of a shared setting ({} vs {})",
                    t.shots, s.shots
                )))
            }
            Some(_) => {}
        }
    }
    let sim = ShotSimulator::new(scheme, truth, &settings)?;
    let per_block: Vec<Vec<std::result::Result<BlockEstimate, String>>> = (0..blocks)
        .into_par_iter()
        .map(|i| {
            let stats = sim.run_block(&mut block_rng(seed, i as u64))?;
            Ok(pipelines
                .iter()
                .map(|p| {
                    p.estimate(&stats)
                        .map(|r| BlockEstimate {
                            values: Target::ALL.map(|t| t.pick(&r)),
                            clamped: r.clamped(),
                        })
                        .map_err(|e| e.to_string())
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    pipelines
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let outcomes: Vec<_> = per_block.iter().map(|b| &b[k]).collect();
            let failures = outcomes.iter().filter(|o| o.is_err()).count();
            if 2 * failures > blocks {
                return Err(Error::TooManyFailures {
                    failed: failures,
                    total: blocks,
                });
            }
            let ok: Vec<&BlockEstimate> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
            let results = Target::ALL
                .iter()
                .enumerate()
                .filter_map(|(j, &target)| {
                    let t = target.truth(truth);
                    let hits: Vec<(f64, bool)> = ok
                        .iter()
                        .filter_map(|b| b.values[j].map(|v| (error(target, v, t), b.clamped)))
                        .collect();
                    if hits.is_empty() {
                        return None;
                    }
                    let n = hits.len() as f64;
                    let bias = hits.iter().map(|h| h.0).sum::<f64>() / n;
                    let mse = hits.iter().map(|h| h.0 * h.0).sum::<f64>() / n;
                    let variance = hits.iter().map(|h| (h.0 - bias).powi(2)).sum::<f64>() / n;
                    Some(MseResult {
                        target,
                        truth: t,
                        mse,
                        bias,
                        variance,
                        blocks: hits.len(),
                        shots,
                        seed,
                        clamp_fraction: hits.iter().filter(|h| h.1).count() as f64 / n,
                    })
                })
                .collect();
            Ok(PipelineMse {
                name: p.name().to_string(),
                results,
                failures,
                first_failure: outcomes.iter().find_map(|o| o.as_ref().err().cloned()),
            })
        })
        .collect()
}
