//! Fixtures shared by the benchmarks under `benches/`.

use visector_core::{Point, ScenarioConfig};

/// The reference scenario compressed to `duration_s`, with the profile
/// steps scaled so the whole schedule still plays out.
pub fn compressed_scenario(duration_s: f64) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::paper();
    let scale = duration_s / cfg.duration_s;
    cfg.duration_s = duration_s;
    for s in &mut cfg.traffic.profile {
        s.start_s *= scale;
    }
    cfg
}

/// A deterministic spread of `n` user positions over the central site.
pub fn user_positions(n: usize, half_width_m: f64) -> Vec<Point> {
    let side = (n as f64).sqrt().ceil() as usize;
    (0..n)
        .map(|k| {
            let (i, j) = (k % side, k / side);
            let f = |v: usize| -half_width_m + 2.0 * half_width_m * (v as f64 + 0.5) / side as f64;
            Point::new(f(i), f(j))
        })
        .collect()
}
