//! Closed-form expectations next to the oracle.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use gaussest::interferometer::{
    active_terms, expected_direct, expected_passive, oracle_expected, printed, NoiseSpec, SchemeConfig,
};

use crate::config::{PipelineKind, RunConfig, SchemeKind};
use crate::experiment::num;

/// Relative deviation (unit floor) below which two expectations agree.
pub const AGREEMENT_TOL: f64 = 1e-9;

pub const HEADER: [&str; 9] = [
    "quantity",
    "phi_ref",
    "printed",
    "closed_form",
    "oracle",
    "printed_rel_dev",
    "closed_form_rel_dev",
    "printed_status",
    "closed_form_status",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectRow {
    pub quantity: String,
    pub phi_ref: f64,
    /// Absent when the printed form does not cover the configured noise.
    pub printed: Option<f64>,
    pub closed_form: f64,
    pub oracle: f64,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn status(dev: f64) -> &'static str {
    if dev <= AGREEMENT_TOL {
        "ok"
    } else {
        "MISMATCH"
    }
}

impl ExpectRow {
    pub fn printed_ok(&self) -> Option<bool> {
        self.printed.map(|p| rel(p, self.oracle) <= AGREEMENT_TOL)
    }

    pub fn closed_form_ok(&self) -> bool {
        rel(self.closed_form, self.oracle) <= AGREEMENT_TOL
    }
}

/// Passive, amplifier and direct expectations at the configured regime.
pub fn expect_rows(config: &RunConfig) -> Result<Vec<ExpectRow>, String> {
    let base = RunConfig {
        scheme: SchemeKind::Passive,
        pipeline: PipelineKind::Ideal,
        sweep_param: None,
        sweep_values: Vec::new(),
        ..config.clone()
    };
    let resolved = base.resolve().map_err(|(k, m)| format!("{k}: {m}"))?;
    let (p, source, noise) = (resolved.truth, resolved.source, resolved.scheme.noise);
    let v = source.variance();
    let ideal = noise == NoiseSpec::none();
    let err = |e: gaussest::Error| e.to_string();
    let mut rows = Vec::new();

    let scheme = resolved.scheme;
    for phi_ref in [0.0, FRAC_PI_2] {
        let o = oracle_expected(&scheme, &p, &source, phi_ref).map_err(err)?;
        let c = expected_passive(&p, v, config.mu, phi_ref, &noise).map_err(err)?;
        let pr = ideal.then(|| printed::passive(&p, v, config.mu, phi_ref));
        rows.push(ExpectRow {
            quantity: "passive <i->".into(),
            phi_ref,
            printed: pr.map(|x| x.0),
            closed_form: c.minus,
            oracle: o.minus,
        });
        rows.push(ExpectRow {
            quantity: "passive <i+>".into(),
            phi_ref,
            printed: pr.map(|x| x.1),
            closed_form: c.plus,
            oracle: o.plus,
        });
    }

    // Interference is largest at φ_ref = −Φ and vanishes at π/2 − Φ.
    let r = config.r;
    let scheme = SchemeConfig::active(r, r).map_err(err)?.with_noise(noise);
    let (peak_ref, node_ref) = (-p.phi(), FRAC_PI_2 - p.phi());
    let peak = oracle_expected(&scheme, &p, &source, peak_ref).map_err(err)?;
    let node = oracle_expected(&scheme, &p, &source, node_ref).map_err(err)?;
    let c = active_terms(&p, v, r, r, peak_ref, &noise).map_err(err)?;
    let pr = ideal.then(|| printed::active_terms(&p, v, r, r, peak_ref));
    let eta = noise.efficiency;
    for (name, printed, closed, oracle) in [
        ("active <i->", pr.map(|x| x.0), c.minus, peak.minus),
        ("active <i+> baseline", pr.map(|x| x.1), c.plus_baseline, node.plus),
        ("active <i+> interference", pr.map(|x| x.2), c.interference, peak.plus - node.plus),
    ] {
        rows.push(ExpectRow {
            quantity: name.into(),
            phi_ref: peak_ref,
            printed,
            closed_form: eta * closed,
            oracle,
        });
    }

    // The direct layout is evaluated without noise.
    let o = oracle_expected(&SchemeConfig::direct(), &p, &source, 0.0).map_err(err)?;
    rows.push(ExpectRow {
        quantity: "direct <n>".into(),
        phi_ref: 0.0,
        printed: Some(printed::direct(v, p.q(), p.d())),
        closed_form: expected_direct(v, p.q(), p.d()).map_err(err)?,
        oracle: o.minus,
    });
    Ok(rows)
}

pub fn write_csv<W: Write>(out: W, rows: &[ExpectRow]) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        let pdev = r.printed.map(|p| rel(p, r.oracle));
        let cdev = rel(r.closed_form, r.oracle);
        w.write_record([
            r.quantity.clone(),
            num(r.phi_ref),
            r.printed.map(num).unwrap_or_default(),
            num(r.closed_form),
            num(r.oracle),
            pdev.map(num).unwrap_or_default(),
            num(cdev),
            pdev.map(status).unwrap_or("").to_string(),
            status(cdev).to_string(),
        ])?;
    }
    w.flush()
}
