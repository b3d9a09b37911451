use std::f64::consts::{FRAC_PI_2, PI, TAU};

use approx::assert_relative_eq;
use gaussest::estimators::*;
use gaussest::gaussian::{NoiseChannel, Source};
use gaussest::interferometer::*;
use gaussest::rng::block_rng;
use proptest::prelude::*;

fn fig2() -> ProcessParams {
    ProcessParams::new(1.23, 0.63, 1.67).unwrap()
}

fn phase_err(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn passive(p: &ProcessParams, v: f64, mu: f64, noise: &NoiseSpec) -> Readings {
    let at = |phi| expected_passive(p, v, mu, phi, noise).unwrap();
    Readings::from_pair(at(0.0), at(FRAC_PI_2))
}

fn active(p: &ProcessParams, v: f64, r: f64, noise: &NoiseSpec) -> Readings {
    let at = |phi| expected_active(p, v, r, r, phi, noise).unwrap();
    Readings::from_pair(at(0.0), at(FRAC_PI_2))
}

/// Round-trip agreement: relative with a unit floor; `d` through `d²`,
/// which is what the readings determine linearly.
fn assert_recovers(rep: &EstimateReport, p: &ProcessParams, check_d: bool) {
    assert!(phase_err(rep.phase, p.phi()) < 1e-9, "phase {} vs {}", rep.phase, p.phi());
    let q = rep.squeezing.unwrap();
    assert!((q - p.q()).abs() <= 1e-9 * p.q(), "q {q} vs {}", p.q());
    if check_d {
        let d = rep.displacement.unwrap();
        assert!((d * d - p.d() * p.d()).abs() <= 1e-9 * (p.d() * p.d()).max(1.0), "d {d} vs {}", p.d());
    }
}

#[test]
fn fig2_passive_round_trip() {
    let rep = estimate_ideal_passive(&passive(&fig2(), 75.0, 0.3, &NoiseSpec::none()), 75.0, 0.3).unwrap();
    assert_recovers(&rep, &fig2(), true);
    assert!((rep.displacement.unwrap() - 1.67).abs() < 1e-9);
    assert!(rep.flags.is_empty());
}

#[test]
fn fig2_active_round_trip() {
    let rep = estimate_ideal_active(&active(&fig2(), 75.0, 0.5, &NoiseSpec::none()), 75.0, 0.5).unwrap();
    assert_recovers(&rep, &fig2(), true);
    assert!(rep.flags.contains(&Flag::CorrectedFormula));
}

#[test]
fn unit_squeezing_without_displacement() {
    let p = ProcessParams::new(1.0, 0.4, 0.0).unwrap();
    let rep = estimate_ideal_active(&active(&p, 75.0, 0.5, &NoiseSpec::none()), 75.0, 0.5).unwrap();
    assert!((rep.squeezing.unwrap() - 1.0).abs() < 1e-6);
    assert!(rep.displacement.unwrap() < 1e-5);
}

#[test]
fn channel_calibration_values() {
    let model = SchemeModel::Passive { mu: 0.3 };
    let noise = NoiseSpec::none().with_channel(0.9, 1.1).unwrap();
    let bypass = expected_passive_calibration(75.0, 0.3, 0.0, &noise).unwrap();
    assert_relative_eq!(bypass.minus, 30.520, epsilon = 5e-4);
    assert_relative_eq!(bypass.plus, 33.31, max_relative = 1e-12);
    let cal = calibrate_channel(&model, &bypass, 75.0).unwrap();
    assert_relative_eq!(cal.estimate.transmittance, 0.9, max_relative = 1e-12);
    assert_relative_eq!(cal.estimate.noise_variance, 1.1, max_relative = 1e-10);
    assert!(cal.flags.is_empty());

    let lossless = NoiseSpec::none().with_channel(1.0, 1.7).unwrap();
    let bypass = expected_passive_calibration(75.0, 0.3, 0.0, &lossless).unwrap();
    let cal = calibrate_channel(&model, &bypass, 75.0).unwrap();
    assert_eq!(cal.estimate.transmittance, 1.0);
    assert_eq!(cal.estimate.noise_variance, 1.0);
    assert!(cal.flags.contains(&Flag::NoiseIndeterminate));
}

#[test]
fn printed_calibration_sum_does_not_match() {
    // The printed bypass sum `T·V/2 + V_ε(1−T) − 1` is off by T/2.
    let noise = NoiseSpec::none().with_channel(0.9, 1.1).unwrap();
    let bypass = expected_passive_calibration(75.0, 0.3, 0.0, &noise).unwrap();
    assert_relative_eq!(bypass.plus - printed::calibration_plus(75.0, 0.9, 1.1), 0.45, max_relative = 1e-12);
}

#[test]
fn lossless_channel_correction_is_ideal() {
    let r = passive(&fig2(), 75.0, 0.3, &NoiseSpec::none());
    let model = SchemeModel::Passive { mu: 0.3 };
    let ch = ChannelEstimate {
        transmittance: 1.0,
        noise_variance: 3.0,
    };
    let a = estimate_with_channel_noise(&model, &r, &ch, 75.0).unwrap();
    let b = estimate_ideal(&model, &r, 75.0).unwrap();
    assert_eq!((a.phase, a.squeezing, a.displacement), (b.phase, b.squeezing, b.displacement));
}

#[test]
fn naive_estimator_is_biased_under_channel_noise() {
    let noise = NoiseSpec::none().with_channel(0.9, 1.1).unwrap();
    let rep = estimate_ideal_passive(&passive(&fig2(), 75.0, 0.3, &noise), 75.0, 0.3).unwrap();
    assert!((rep.squeezing.unwrap() - 1.23).abs() > 0.01);
    // Loss scales both differences equally, so the phase survives.
    assert!(phase_err(rep.phase, 0.63) < 1e-12);
}

#[test]
fn two_source_fig9_values() {
    let model = SchemeModel::Passive { mu: 0.3 };
    let noise = NoiseSpec::none().with_process(0.9, 1.1).unwrap();
    let r1 = passive(&fig2(), 75.0, 0.3, &noise);
    let r2 = passive(&fig2(), 300.0, 0.3, &noise);
    // Q = T(q² + 1/q²) from the energy difference.
    let delta = r2.mean_plus() - r1.mean_plus();
    let q_energy = 4.0 * (delta - 0.7 * 225.0 / 2.0) / (0.3 * 225.0);
    assert_relative_eq!(q_energy, 0.9 * (1.23f64.powi(2) + 1.23f64.powi(-2)), max_relative = 1e-12);
    assert!((q_energy - 1.956494).abs() < 1e-6);
    let rep = estimate_with_process_noise(&model, 75.0, &r1, 300.0, &r2, 1.1).unwrap();
    assert_relative_eq!(rep.process_transmittance.unwrap(), 0.9, max_relative = 1e-10);
    assert_recovers(&rep, &fig2(), true);
    assert_eq!(rep.assumptions[0].value, 1.1);
}

#[test]
fn diff_equation_at_unit_squeezing() {
    let p = ProcessParams::new(1.0, 0.2, 0.5).unwrap();
    let noise = NoiseSpec::none().with_process(0.8, 1.3).unwrap();
    let r1 = passive(&p, 75.0, 0.3, &noise);
    let r2 = passive(&p, 300.0, 0.3, &noise);
    let dv = 225.0;
    assert_relative_eq!(
        r2.mean_plus() - r1.mean_plus(),
        0.8 * 0.3 * dv / 2.0 + 0.7 * dv / 2.0,
        max_relative = 1e-12
    );
}

#[test]
fn lossless_process_reduces_to_ideal() {
    let model = SchemeModel::Passive { mu: 0.3 };
    let r1 = passive(&fig2(), 75.0, 0.3, &NoiseSpec::none());
    let r2 = passive(&fig2(), 300.0, 0.3, &NoiseSpec::none());
    let rep = estimate_with_process_noise(&model, 75.0, &r1, 300.0, &r2, 1.0).unwrap();
    assert_relative_eq!(rep.process_transmittance.unwrap(), 1.0, max_relative = 1e-10);
    assert_recovers(&rep, &fig2(), true);
}

#[test]
fn fig5_combined_round_trip() {
    let model = SchemeModel::Passive { mu: 0.3 };
    let noise = NoiseSpec::none().with_process(0.9, 1.1).unwrap().with_channel(0.7, 1.3).unwrap();
    let bypass = expected_passive_calibration(10.0, 0.3, 0.0, &noise).unwrap();
    let r1 = passive(&fig2(), 10.0, 0.3, &noise);
    let r2 = passive(&fig2(), 40.0, 0.3, &noise);
    let rep = estimate_combined(&model, &bypass, 10.0, 10.0, &r1, 40.0, &r2).unwrap();
    assert_recovers(&rep, &fig2(), false);
    assert_eq!(rep.displacement, None);
    assert!(rep.flags.contains(&Flag::DisplacementUnidentifiable));
    let ch = rep.channel.unwrap();
    assert_relative_eq!(ch.transmittance, 0.7, max_relative = 1e-12);
    assert_relative_eq!(ch.noise_variance, 1.3, max_relative = 1e-10);
    assert_relative_eq!(rep.process_transmittance.unwrap(), 0.9, max_relative = 1e-10);
}

#[test]
fn combined_without_noise_matches_ideal() {
    let model = SchemeModel::Passive { mu: 0.3 };
    let bypass = expected_passive_calibration(10.0, 0.3, 0.0, &NoiseSpec::none()).unwrap();
    let r1 = passive(&fig2(), 10.0, 0.3, &NoiseSpec::none());
    let r2 = passive(&fig2(), 40.0, 0.3, &NoiseSpec::none());
    let rep = estimate_combined(&model, &bypass, 10.0, 10.0, &r1, 40.0, &r2).unwrap();
    let ideal = estimate_ideal(&model, &r1, 10.0).unwrap();
    assert!((rep.squeezing.unwrap() - ideal.squeezing.unwrap()).abs() < 1e-9);
    assert!(phase_err(rep.phase, ideal.phase) < 1e-12);

    let unit = ProcessParams::new(1.0, 0.63, 1.67).unwrap();
    let r1 = passive(&unit, 10.0, 0.3, &NoiseSpec::none());
    let r2 = passive(&unit, 40.0, 0.3, &NoiseSpec::none());
    let rep = estimate_combined(&model, &bypass, 10.0, 10.0, &r1, 40.0, &r2).unwrap();
    assert!((rep.squeezing.unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn phase_invariant_under_efficiency() {
    let eta = NoiseSpec::none().with_efficiency(0.37).unwrap();
    let a = estimate_ideal_passive(&passive(&fig2(), 75.0, 0.3, &eta), 75.0, 0.3).unwrap();
    assert!(phase_err(a.phase, 0.63) < 1e-12);
}

#[test]
fn efficiency_correction_on_simulated_shots() {
    let noise = NoiseSpec::none().with_efficiency(0.8).unwrap();
    let scheme = SchemeConfig::passive(0.3).unwrap().with_noise(noise);
    let src = Source::new(5.0, 10.0).unwrap();
    let settings = Setting::quadrature_pair(src, true, 400_000);
    let raw = simulate_shots(&scheme, &fig2(), &settings, &mut block_rng(17, 0)).unwrap();
    let corrected = correct_efficiency_all(&raw, 0.8).unwrap();
    for s in &corrected.settings {
        let e = expected_passive(&fig2(), 75.0, 0.3, s.setting.phi_ref, &NoiseSpec::none()).unwrap();
        assert!((s.mean_minus - e.minus).abs() < 4.0 * s.stderr_minus());
        assert!((s.mean_plus - e.plus).abs() < 4.0 * s.stderr_plus());
    }
}

#[test]
fn readings_from_stats_lookup() {
    let src = Source::thermal(10.0).unwrap();
    let mut settings = Setting::quadrature_pair(src, true, 3).to_vec();
    settings.push(Setting::calibration(src, 0.0, 3));
    let stats = simulate_shots(&SchemeConfig::passive(0.3).unwrap(), &fig2(), &settings, &mut block_rng(1, 1)).unwrap();
    let r = Readings::from_stats(&stats, true, 10.0).unwrap();
    assert_eq!(r.minus_90, stats.settings[1].mean_minus);
    assert!(Readings::from_stats(&stats, false, 10.0).is_err());
    assert!(Readings::from_stats(&stats, true, 11.0).is_err());
}

fn grid() -> impl Strategy<Value = (ProcessParams, f64, f64)> {
    (1.0..=3.0f64, 0.0..TAU, 0.0..=5.0f64, 1.0001..=1000.0f64, 0.05..=0.95f64)
        .prop_map(|(q, phi, d, v, mu)| (ProcessParams::new(q, phi, d).unwrap(), v, mu))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ideal_passive_round_trip((p, v, mu) in grid()) {
        let rep = estimate_ideal_passive(&passive(&p, v, mu, &NoiseSpec::none()), v, mu).unwrap();
        assert_recovers(&rep, &p, true);
    }

    #[test]
    fn ideal_active_round_trip((p, v, _mu) in grid(), r in 0.05..1.5f64) {
        let rep = estimate_ideal_active(&active(&p, v, r, &NoiseSpec::none()), v, r).unwrap();
        assert_recovers(&rep, &p, true);
    }

    #[test]
    fn channel_round_trip((p, v, mu) in grid(), t in 0.3..1.0f64, v_eps in 1.0..2.0f64, r in 0.05..1.0f64) {
        let noise = NoiseSpec::none().with_channel(t, v_eps).unwrap();
        let ch = ChannelEstimate { transmittance: t, noise_variance: v_eps };
        let model = SchemeModel::Passive { mu };
        let rep = estimate_with_channel_noise(&model, &passive(&p, v, mu, &noise), &ch, v).unwrap();
        assert_recovers(&rep, &p, true);
        let model = SchemeModel::Active { r1: r, r2: r };
        let rep = estimate_with_channel_noise(&model, &active(&p, v, r, &noise), &ch, v).unwrap();
        assert_recovers(&rep, &p, true);
    }

    #[test]
    fn calibration_round_trip(v in 1.5..1000.0f64, mu in 0.05..0.95f64, t in 0.3..0.99f64, v_eps in 1.0..2.0f64, r in 0.05..1.0f64) {
        let noise = NoiseSpec::none().with_channel(t, v_eps).unwrap();
        let bypass = expected_passive_calibration(v, mu, 0.0, &noise).unwrap();
        let cal = calibrate_channel(&SchemeModel::Passive { mu }, &bypass, v).unwrap();
        prop_assert!((cal.estimate.transmittance - t).abs() < 1e-9 * t);
        prop_assert!((cal.estimate.noise_variance - v_eps).abs() < 1e-9 * v * v_eps);
        let bypass = expected_active_calibration(v, r, r, 0.0, &noise).unwrap();
        let cal = calibrate_channel(&SchemeModel::Active { r1: r, r2: r }, &bypass, v).unwrap();
        prop_assert!((cal.estimate.transmittance - t).abs() < 1e-9 * t);
        prop_assert!((cal.estimate.noise_variance - v_eps).abs() < 1e-9 * v * v_eps);
    }

    #[test]
    fn known_process_round_trip((p, v, mu) in grid(), t in 0.3..1.0f64, v_eps in 1.0..2.0f64) {
        let noise = NoiseSpec::none().with_process(t, v_eps).unwrap();
        let rep = estimate_with_known_process(
            &SchemeModel::Passive { mu }, &passive(&p, v, mu, &noise), v, &NoiseChannel::new(t, v_eps).unwrap(),
        ).unwrap();
        assert_recovers(&rep, &p, true);
    }

    #[test]
    fn two_source_round_trip((p, v1, mu) in grid(), ratio in 1.5..10.0f64, t in 0.3..1.0f64, v_eps in 1.0..2.0f64, r in 0.05..1.0f64) {
        let v2 = v1 * ratio;
        let noise = NoiseSpec::none().with_process(t, v_eps).unwrap();
        let model = SchemeModel::Passive { mu };
        let rep = estimate_with_process_noise(
            &model, v1, &passive(&p, v1, mu, &noise), v2, &passive(&p, v2, mu, &noise), v_eps,
        ).unwrap();
        assert_recovers(&rep, &p, true);
        prop_assert!((rep.process_transmittance.unwrap() - t).abs() < 1e-9);
        let model = SchemeModel::Active { r1: r, r2: r };
        let rep = estimate_with_process_noise(
            &model, v1, &active(&p, v1, r, &noise), v2, &active(&p, v2, r, &noise), v_eps,
        ).unwrap();
        assert_recovers(&rep, &p, true);
    }

    #[test]
    fn combined_round_trip(
        (p, v1, mu) in grid(), ratio in 1.5..10.0f64,
        tp in 0.3..1.0f64, ep in 1.0..2.0f64, tc in 0.3..0.99f64, ec in 1.0..2.0f64,
    ) {
        let v2 = v1 * ratio;
        let noise = NoiseSpec::none().with_process(tp, ep).unwrap().with_channel(tc, ec).unwrap();
        let model = SchemeModel::Passive { mu };
        let bypass = expected_passive_calibration(v1, mu, 0.0, &noise).unwrap();
        let rep = estimate_combined(
            &model, &bypass, v1, v1, &passive(&p, v1, mu, &noise), v2, &passive(&p, v2, mu, &noise),
        ).unwrap();
        assert_recovers(&rep, &p, false);
    }

    #[test]
    fn phase_survives_loss_and_efficiency((p, v, mu) in grid(), t in 0.05..1.0f64, eta in 0.05..=1.0f64) {
        let noise = NoiseSpec::none().with_channel(t, 1.0).unwrap().with_efficiency(eta).unwrap();
        let a = estimate_ideal_passive(&passive(&p, v, mu, &noise), v, mu).unwrap();
        let b = estimate_ideal_passive(&passive(&p, v, mu, &NoiseSpec::none()), v, mu).unwrap();
        prop_assert!(phase_err(a.phase, b.phase) < 1e-12);
        prop_assert!(a.squeezing.unwrap() >= 1.0 && a.displacement.unwrap() >= 0.0);
    }
}

#[test]
fn phase_recovered_in_every_quadrant() {
    for k in 0..8 {
        let p = ProcessParams::new(1.5, k as f64 * PI / 4.0 + 0.1, 1.0).unwrap();
        let rep = estimate_ideal_passive(&passive(&p, 20.0, 0.4, &NoiseSpec::none()), 20.0, 0.4).unwrap();
        assert!(phase_err(rep.phase, p.phi()) < 1e-12);
    }
}
