//! Sweeps of Monte-Carlo runs and their CSV rows.

use std::io::Write;

use gaussest::statistics::{
    cramer_rao_bound, empirical_mse, fisher_information_normal, qhat_normal_approx, Pipeline, Target,
};

use crate::config::{PipelineKind, RunConfig, SchemeKind};

pub const HEADER: [&str; 13] = [
    "sweep_param",
    "sweep_value",
    "target",
    "truth",
    "mse",
    "bias",
    "variance",
    "approx_variance",
    "cr_bound",
    "n_shots",
    "n_blocks",
    "clamp_fraction",
    "seed",
];

/// Extra columns of figure reproductions.
pub const SERIES_HEADER: [&str; 2] = ["series", "mse_times_n"];

/// One sweep with one or more estimators sharing the same shots.
#[derive(Debug, Clone)]
pub struct Job {
    pub label: String,
    pub config: RunConfig,
    pub pipelines: Vec<PipelineKind>,
}

impl Job {
    pub fn single(label: impl Into<String>, config: RunConfig) -> Self {
        let pipelines = vec![config.pipeline];
        Self {
            label: label.into(),
            config,
            pipelines,
        }
    }

    fn series(&self, kind: PipelineKind) -> String {
        if self.pipelines.len() > 1 {
            format!("{}/{}", self.label, kind.name())
        } else {
            self.label.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub sweep_param: String,
    pub sweep_value: Option<f64>,
    pub target: &'static str,
    pub truth: f64,
    pub mse: f64,
    pub bias: f64,
    pub variance: f64,
    pub approx_variance: Option<f64>,
    pub cr_bound: Option<f64>,
    pub n_shots: usize,
    pub n_blocks: usize,
    pub clamp_fraction: f64,
    pub seed: u64,
    pub series: String,
    pub failures: usize,
}

/// Whether the thermal-source, beam-splitter analytics describe `q̂` here.
fn analytics_apply(c: &RunConfig, kind: PipelineKind) -> bool {
    c.scheme == SchemeKind::Passive
        && c.source_d == 0.0
        && c.d == 0.0
        && c.channel_t.is_none()
        && c.channel_v_eps.is_none()
        && c.process_t.is_none()
        && c.process_v_eps.is_none()
        && c.efficiency == 1.0
        && matches!(kind, PipelineKind::Ideal | PipelineKind::Naive)
}

/// Shortest round-trip text, in exponent form for very small or large values.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Runs every sweep point of `job`; progress goes to `log`.
pub fn run_job(job: &Job, log: &mut dyn Write) -> Result<Vec<Row>, String> {
    let sweep_param = job.config.sweep_param.clone().unwrap_or_else(|| "none".into());
    let values: Vec<Option<f64>> = if job.config.sweep_param.is_some() {
        job.config.sweep_values.iter().map(|v| Some(*v)).collect()
    } else {
        vec![None]
    };
    let mut rows = Vec::new();
    for (point, value) in job.config.points().into_iter().zip(values) {
        let resolved: Vec<_> = job
            .pipelines
            .iter()
            .map(|&kind| {
                RunConfig {
                    pipeline: kind,
                    ..point.clone()
                }
                .resolve()
                .map_err(|(k, m)| format!("{k}: {m}"))
            })
            .collect::<Result<_, _>>()?;
        let first = &resolved[0];
        let pipes: Vec<&dyn Pipeline> = resolved.iter().map(|r| &r.pipeline as &dyn Pipeline).collect();
        let out = empirical_mse(&first.scheme, &first.truth, &pipes, point.shots, point.blocks, point.seed)
            .map_err(|e| format!("{} at {sweep_param} = {}: {e}", job.label, opt(value)))?;
        for (kind, result) in job.pipelines.iter().zip(&out) {
            let series = job.series(*kind);
            let _ = writeln!(
                log,
                "{series} {sweep_param}={}: {} failed blocks{}; {}",
                opt(value),
                result.failures,
                result.first_failure.as_deref().map(|f| format!(" (first: {f})")).unwrap_or_default(),
                result
                    .results
                    .iter()
                    .map(|r| format!("MSE({}) = {:.4e}", r.target.name(), r.mse))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            for r in &result.results {
                let (approx, cr) = if r.target == Target::Squeezing && analytics_apply(&point, *kind) {
                    let (v, n) = (point.source_variance(), point.shots as f64);
                    let approx = qhat_normal_approx(point.q, v, point.mu, n).ok().map(|a| a.var_q);
                    let cr = fisher_information_normal(point.q, v, point.mu, n)
                        .ok()
                        .and_then(|i| cramer_rao_bound(i).ok())
                        .and_then(|b| b.value());
                    (approx, cr)
                } else {
                    (None, None)
                };
                rows.push(Row {
                    sweep_param: sweep_param.clone(),
                    sweep_value: value,
                    target: r.target.name(),
                    truth: r.truth,
                    mse: r.mse,
                    bias: r.bias,
                    variance: r.variance,
                    approx_variance: approx,
                    cr_bound: cr,
                    n_shots: r.shots,
                    n_blocks: r.blocks,
                    clamp_fraction: r.clamp_fraction,
                    seed: r.seed,
                    series: series.clone(),
                    failures: result.failures,
                });
            }
        }
    }
    Ok(rows)
}

/// Writes rows as CSV, with the series columns when `series` is set.
pub fn write_csv<W: Write>(out: W, rows: &[Row], series: bool) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let mut header: Vec<&str> = HEADER.to_vec();
    if series {
        header.extend(SERIES_HEADER);
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.sweep_param.clone(),
            opt(r.sweep_value),
            r.target.to_string(),
            num(r.truth),
            num(r.mse),
            num(r.bias),
            num(r.variance),
            opt(r.approx_variance),
            opt(r.cr_bound),
            r.n_shots.to_string(),
            r.n_blocks.to_string(),
            num(r.clamp_fraction),
            r.seed.to_string(),
        ];
        if series {
            rec.push(r.series.clone());
            rec.push(num(r.mse * r.n_shots as f64));
        }
        w.write_record(&rec)?;
    }
    w.flush()
}
