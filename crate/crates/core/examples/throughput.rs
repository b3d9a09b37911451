//! Shots per second of the sampler for the passive and active schemes.
use std::time::Instant;

use gaussest::gaussian::Source;
use gaussest::interferometer::{simulate_shots, ProcessParams, SchemeConfig, Setting};
use gaussest::rng::block_rng;

fn main() {
    let p = ProcessParams::new(1.23, 0.63, 1.67).unwrap();
    let src = Source::new(5.0, 10.0).unwrap();
    for (name, scheme) in [
        ("passive", SchemeConfig::passive(0.3).unwrap()),
        ("active", SchemeConfig::active(0.5, 0.5).unwrap()),
    ] {
        let settings = Setting::quadrature_pair(src, true, 5_000_000);
        let start = Instant::now();
        let stats = simulate_shots(&scheme, &p, &settings, &mut block_rng(1, 0)).unwrap();
        let secs = start.elapsed().as_secs_f64();
        println!("{name}: {:.1} ns/shot (mean i- {:.3})", secs / 1e7 * 1e9, stats.settings[0].mean_minus);
    }
}
