//! Shared fixtures for the criterion benches.

use biarc_core::collide::{ConvexHitbox, Obstacle};
use biarc_core::sim::{desk_scenario, Prepared};
use biarc_core::{biarc_equal_chord, Biarc, Pose, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Roughly 1 m biarcs with a point obstacle somewhere near each.
pub fn collision_cases(n: usize, seed: u64) -> Vec<(Biarc, Obstacle)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let end = Pose::new(
            rng.random_range(0.8..1.0),
            rng.random_range(-0.3..0.3),
            rng.random_range(-0.6..0.6),
        );
        let Ok(b) = biarc_equal_chord(Pose::new(0.0, 0.0, 0.0), end) else {
            continue;
        };
        let o = Obstacle::Point(Vec2::new(
            rng.random_range(-0.2..1.2),
            rng.random_range(-0.6..0.6),
        ));
        out.push((b, o));
    }
    out
}

pub fn robot() -> ConvexHitbox {
    ConvexHitbox::square(0.34).unwrap()
}

/// The 50-waypoint, 500-point desk scenario.
pub fn desk() -> Prepared {
    desk_scenario("desk", 1, 50, 500).prepare().unwrap()
}
