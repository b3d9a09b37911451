//! Baked-in configurations of the reference figures.

use crate::config::{PipelineKind, RunConfig, SchemeKind};
use crate::experiment::Job;

pub const FIGURES: [&str; 9] = ["fig2a", "fig2b", "fig3", "fig4a", "fig4b", "fig5", "supp7", "supp8", "supp9"];

/// Blocks per point: reduced by default, 10⁴ with `full`.
pub fn default_blocks(full: bool) -> usize {
    if full {
        10_000
    } else {
        1_000
    }
}

fn base(blocks: usize) -> RunConfig {
    RunConfig {
        blocks,
        ..RunConfig::default()
    }
}

fn sweep(mut c: RunConfig, param: &str, values: Vec<f64>) -> RunConfig {
    c.sweep_param = Some(param.into());
    c.sweep_values = values;
    c
}

fn active(c: RunConfig) -> RunConfig {
    RunConfig {
        scheme: SchemeKind::Active,
        ..c
    }
}

fn shot_grid(full: bool) -> Vec<f64> {
    let mut n = vec![1e3, 1e4, 1e5];
    if full {
        n.push(1e6);
    }
    n
}

/// The jobs of figure `id`, or `None` for an unknown id.
pub fn preset(id: &str, full: bool) -> Option<Vec<Job>> {
    let m = default_blocks(full);
    let b = base(m);
    let jobs = match id {
        "fig2a" => vec![Job::single("BS", sweep(b, "mu", (1..=19).map(|k| k as f64 * 0.05).collect()))],
        "fig2b" => vec![Job::single("OPA", sweep(active(b), "r", (1..=15).map(|k| k as f64 * 0.1).collect()))],
        "fig3" => {
            let n = vec![1e3, 1e4, 1e5, 1e6];
            vec![
                Job::single("BS", sweep(b.clone(), "shots", n.clone())),
                Job::single("OPA", sweep(active(b), "shots", n)),
            ]
        }
        "fig4a" => {
            let c = RunConfig {
                source_r: 10.0,
                source_d: 0.0,
                ..b
            };
            let ratios: Vec<f64> = std::iter::once(0.01).chain((1..=10).map(|k| k as f64 * 0.1)).collect();
            vec![
                Job::single("BS", sweep(c.clone(), "thermal_ratio", ratios.clone())),
                Job::single("OPA", sweep(active(c), "thermal_ratio", ratios)),
            ]
        }
        "fig4b" => {
            // R = D: V = 1.5 R².
            let r = (100.0f64 / 1.5).sqrt();
            let c = RunConfig {
                source_r: r,
                source_d: r,
                ..b
            };
            let v = vec![10.0, 30.0, 100.0, 300.0, 1000.0];
            vec![
                Job::single("BS", sweep(c.clone(), "source_v", v.clone())),
                Job::single("OPA", sweep(active(c), "source_v", v)),
            ]
        }
        "fig5" => [10.0f64, 1000.0]
            .iter()
            .map(|&v1| {
                let c = RunConfig {
                    source_r: v1.sqrt(),
                    source_d: 0.0,
                    source2_r: Some((4.0 * v1).sqrt()),
                    source2_d: Some(0.0),
                    process_t: Some(0.9),
                    process_v_eps: Some(1.1),
                    channel_t: Some(0.7),
                    channel_v_eps: Some(1.3),
                    pipeline: PipelineKind::Combined,
                    ..b.clone()
                };
                Job::single(format!("V1={v1}"), sweep(c, "shots", shot_grid(full)))
            })
            .collect(),
        "supp7" => {
            let c = RunConfig {
                mu: 0.2,
                source_r: 5.0,
                source_d: 0.0,
                q: 3.0,
                phi: 0.0,
                d: 0.0,
                ..b
            };
            vec![Job::single("BS", sweep(c, "shots", vec![1e2, 1e3, 1e4, 1e5]))]
        }
        "supp8" => {
            let c = RunConfig {
                channel_t: Some(0.9),
                channel_v_eps: Some(1.1),
                ..b
            };
            let kinds = vec![PipelineKind::Naive, PipelineKind::ChannelCalibrated, PipelineKind::KnownChannel];
            let grid = shot_grid(full);
            vec![
                Job {
                    label: "BS".into(),
                    config: sweep(c.clone(), "shots", grid.clone()),
                    pipelines: kinds.clone(),
                },
                Job {
                    label: "OPA".into(),
                    config: sweep(active(c), "shots", grid),
                    pipelines: kinds,
                },
            ]
        }
        "supp9" => {
            let c = RunConfig {
                source2_r: Some(10.0),
                source2_d: Some(20.0),
                process_t: Some(0.9),
                process_v_eps: Some(1.1),
                assumed_v_eps: 1.1,
                ..b
            };
            let kinds = vec![PipelineKind::Naive, PipelineKind::TwoSource, PipelineKind::KnownProcess];
            let grid = shot_grid(full);
            vec![
                Job {
                    label: "BS".into(),
                    config: sweep(c.clone(), "shots", grid.clone()),
                    pipelines: kinds.clone(),
                },
                Job {
                    label: "OPA".into(),
                    config: sweep(active(c), "shots", grid),
                    pipelines: kinds,
                },
            ]
        }
        _ => return None,
    };
    Some(jobs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for id in FIGURES {
            for full in [false, true] {
                for job in preset(id, full).unwrap() {
                    for kind in &job.pipelines {
                        let c = RunConfig {
                            pipeline: *kind,
                            ..job.config.clone()
                        };
                        c.validate().unwrap_or_else(|e| panic!("{id}: {e:?}"));
                    }
                }
            }
        }
        assert!(preset("fig9", false).is_none());
    }

    #[test]
    fn figure_sources() {
        let fig5 = preset("fig5", false).unwrap();
        assert!((fig5[1].config.source_variance() - 1000.0).abs() < 1e-9);
        let fig4b = &preset("fig4b", false).unwrap()[0].config;
        let at = fig4b.with("source_v", 300.0);
        assert!((at.source_r - at.source_d).abs() < 1e-9);
        assert!((at.source_variance() - 300.0).abs() < 1e-9);
    }
}
