//! Rotation sets in half-angle tangent coordinates for a line `a` turning
//! about the origin against a static line `b`.
//!
//! `a = {x·u_a + h_a·u_a⊥}` is first aligned with `b = {x·u_b + h_b·u_b⊥}`
//! and then rotated by an angle whose half tangent is `t`.

use super::interval::{Interval, TIntervalSet};

/// Below this value of `h_a + h_b` both lines pass through the rotation center.
pub const CENTER_TOL: f64 = 1e-12;
/// Relative tolerance under which `h_a` and `h_b` are considered equal.
pub const EQUAL_H_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum RotationError {
    #[error("both lines pass through the rotation center (h_a + h_b = {0})")]
    DegenerateCenter(f64),
}

/// `tan(angle/2)` for the angle with cosine `c` and sine `s`. An angle of
/// exactly π maps to `at_pi`.
#[inline]
fn half_tan(c: f64, s: f64, at_pi: f64) -> f64 {
    if c >= 0.0 {
        s / (1.0 + c)
    } else if s == 0.0 {
        at_pi
    } else {
        (1.0 - c) / s
    }
}

/// Rotations `t` visited while turning from `-μ` by `theta_d`, where `μ` is
/// the angle with cosine `c_mu` and sine `s_mu`.
pub fn t_interval_motion(theta_d: f64, c_mu: f64, s_mu: f64) -> TIntervalSet {
    if theta_d.abs() >= std::f64::consts::TAU {
        return TIntervalSet::full();
    }
    let (sd, cd) = theta_d.sin_cos();
    // -μ and -μ + θ_d
    let (c0, s0) = (c_mu, -s_mu);
    let (c1, s1) = (c0 * cd - s0 * sd, s0 * cd + c0 * sd);
    let ((cl, sl), (ch, sh)) = if theta_d >= 0.0 {
        ((c0, s0), (c1, s1))
    } else {
        ((c1, s1), (c0, s0))
    };
    let t_lo = half_tan(cl, sl, f64::NEG_INFINITY);
    let t_hi = half_tan(ch, sh, f64::INFINITY);
    if t_lo <= t_hi {
        return TIntervalSet::single(t_lo, t_hi);
    }
    // a genuine pass through π below a half turn needs one endpoint beyond ±1
    let wraps = theta_d.abs() >= std::f64::consts::PI
        || (t_lo >= 0.0 && t_hi <= 0.0 && t_lo.max(-t_hi) >= 1.0);
    if wraps {
        TIntervalSet::from_intervals([
            Interval::new(f64::NEG_INFINITY, t_hi),
            Interval::new(t_lo, f64::INFINITY),
        ])
    } else {
        TIntervalSet::single(t_hi, t_lo)
    }
}

/// Both rotations placing coordinate `x` of `a` on `b`: the roots of
/// `S·t² − 2x·t − D = 0` with `S = h_a + h_b`, `D = h_a − h_b`, ordered `(t−, t+)`.
#[inline]
fn roots(x: f64, s: f64, d: f64) -> (f64, f64) {
    let r = x * x + s * d;
    if r <= 0.0 {
        return (x / s, x / s);
    }
    let q = r.sqrt();
    if x >= 0.0 {
        (-d / (x + q), (x + q) / s)
    } else {
        ((x - q) / s, -d / (x - q))
    }
}

#[inline]
fn iv(a: f64, b: f64) -> Interval {
    Interval::new(a.min(b), a.max(b))
}

/// Which of the three `h_a` vs `h_b` regimes applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Regime {
    AGreater,
    Equal,
    BGreater,
}

pub(crate) fn regime(h_a: f64, h_b: f64) -> Regime {
    let d = h_a - h_b;
    if d.abs() <= EQUAL_H_TOL * (h_a + h_b) {
        Regime::Equal
    } else if d > 0.0 {
        Regime::AGreater
    } else {
        Regime::BGreater
    }
}

/// `I_a` without the isolated `t = 0` of the equal regime.
pub(crate) fn edge_set(h_a: f64, h_b: f64, x1: f64, x2: f64) -> TIntervalSet {
    let s = h_a + h_b;
    let d = h_a - h_b;
    match regime(h_a, h_b) {
        Regime::Equal => {
            let h = 0.5 * s;
            TIntervalSet::single(x1 / h, x2 / h)
        }
        Regime::AGreater => {
            let (m1, p1) = roots(x1, s, d);
            let (m2, p2) = roots(x2, s, d);
            TIntervalSet::from_intervals([iv(m1, m2), iv(p1, p2)])
        }
        Regime::BGreater => {
            let a_star = (-s * d).sqrt();
            let (m1, p1) = roots(x1, s, d);
            let (m2, p2) = roots(x2, s, d);
            let parts: &[Interval] = if x2 <= -a_star {
                &[iv(m1, m2), iv(p2, p1)]
            } else if x1 <= -a_star {
                if x2 < a_star {
                    &[iv(m1, p1)]
                } else {
                    &[iv(m1, p1), iv(m2, p2)]
                }
            } else if x1 < a_star {
                if x2 < a_star {
                    &[]
                } else {
                    &[iv(m2, p2)]
                }
            } else {
                &[iv(m2, m1), iv(p1, p2)]
            };
            TIntervalSet::from_intervals(parts.iter().copied())
        }
    }
}

/// `I_b` without the isolated `t = 0` of the equal regime.
pub(crate) fn obstacle_set(h_a: f64, h_b: f64, x1: f64, x2: f64) -> TIntervalSet {
    let s = h_a + h_b;
    let d = h_a - h_b;
    // t_b± are the roots for -x with the roles of the two lines swapped
    let rb = |x: f64| roots(-x, s, -d);
    match regime(h_a, h_b) {
        Regime::Equal => {
            let h = 0.5 * s;
            TIntervalSet::single(-x2 / h, -x1 / h)
        }
        Regime::BGreater => {
            let (m1, p1) = rb(x1);
            let (m2, p2) = rb(x2);
            TIntervalSet::from_intervals([iv(m2, m1), iv(p2, p1)])
        }
        Regime::AGreater => {
            let b_star = (s * d).sqrt();
            let (m1, p1) = rb(x1);
            let (m2, p2) = rb(x2);
            let parts: &[Interval] = if x2 < -b_star {
                &[iv(m1, m2), iv(p2, p1)]
            } else if x1 <= -b_star {
                if x2 < b_star {
                    &[iv(m1, p1)]
                } else {
                    &[iv(m2, p2), iv(m1, p1)]
                }
            } else if x1 < b_star {
                if x2 < b_star {
                    &[]
                } else {
                    &[iv(m2, p2)]
                }
            } else {
                &[iv(m2, m1), iv(p1, p2)]
            };
            TIntervalSet::from_intervals(parts.iter().copied())
        }
    }
}

/// Rotations at which the segment `[x_a1, x_a2]` of the turning line `a`
/// touches the static line `b`.
pub fn t_intervals_edge(
    h_a: f64,
    h_b: f64,
    x_a1: f64,
    x_a2: f64,
) -> Result<TIntervalSet, RotationError> {
    debug_assert!(x_a1 <= x_a2);
    if h_a + h_b < CENTER_TOL {
        return Err(RotationError::DegenerateCenter(h_a + h_b));
    }
    let mut set = edge_set(h_a, h_b, x_a1, x_a2);
    if regime(h_a, h_b) == Regime::Equal {
        set = set.union(&TIntervalSet::single(0.0, 0.0));
    }
    Ok(set)
}

/// Rotations at which the turning line `a` touches the static segment
/// `[x_b1, x_b2]` of line `b`.
pub fn t_intervals_obstacle(
    h_a: f64,
    h_b: f64,
    x_b1: f64,
    x_b2: f64,
) -> Result<TIntervalSet, RotationError> {
    debug_assert!(x_b1 <= x_b2);
    if h_a + h_b < CENTER_TOL {
        return Err(RotationError::DegenerateCenter(h_a + h_b));
    }
    let mut set = obstacle_set(h_a, h_b, x_b1, x_b2);
    if regime(h_a, h_b) == Regime::Equal {
        set = set.union(&TIntervalSet::single(0.0, 0.0));
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec2;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const INF: f64 = f64::INFINITY;

    fn rot(t: f64) -> (f64, f64) {
        // cos, sin of the angle with half tangent t
        if t.is_infinite() {
            return (-1.0, 0.0);
        }
        let d = 1.0 + t * t;
        ((1.0 - t * t) / d, 2.0 * t / d)
    }

    /// Does the rotated segment of `a` touch `b`? `b` is the line y = h_b and
    /// the aligned `a` is y = h_a.
    fn edge_hits(t: f64, h_a: f64, h_b: f64, x1: f64, x2: f64) -> bool {
        let (c, s) = rot(t);
        let y = |x: f64| Vec2::new(x, h_a).rotate_cs(c, s).y - h_b;
        let (y1, y2) = (y(x1), y(x2));
        y1.min(y2) <= 0.0 && 0.0 <= y1.max(y2)
    }

    /// Does the rotated line `a` touch the segment `[x1, x2]` of `b`?
    fn obstacle_hits(t: f64, h_a: f64, h_b: f64, x1: f64, x2: f64) -> bool {
        let (c, s) = rot(t);
        let n = Vec2::new(0.0, 1.0).rotate_cs(c, s);
        let side = |x: f64| n.dot(Vec2::new(x, h_b)) - h_a;
        let (d1, d2) = (side(x1), side(x2));
        d1.min(d2) <= 0.0 && 0.0 <= d1.max(d2)
    }

    fn assert_set(got: &TIntervalSet, want: &[(f64, f64)]) {
        assert_eq!(got.intervals().len(), want.len(), "{got:?} vs {want:?}");
        for (g, w) in got.intervals().iter().zip(want) {
            assert!(
                (g.lo - w.0).abs() < 1e-12 || g.lo == w.0,
                "{got:?} vs {want:?}"
            );
            assert!(
                (g.hi - w.1).abs() < 1e-12 || g.hi == w.1,
                "{got:?} vs {want:?}"
            );
        }
    }

    /// Every finite endpoint separates hit from miss one micro-step away.
    fn check_endpoints(set: &TIntervalSet, hits: impl Fn(f64) -> bool) {
        for i in set.intervals() {
            for (e, inward) in [(i.lo, 1.0), (i.hi, -1.0)] {
                if !e.is_finite() || i.lo == i.hi {
                    continue;
                }
                let step = 1e-6 * e.abs().max(1.0);
                assert!(hits(e + inward * step), "inside near {e} in {set:?}");
                let out = e - inward * step;
                assert_eq!(hits(out), set.contains(out), "outside near {e} in {set:?}");
            }
        }
    }

    #[test]
    fn motion_examples() {
        assert_set(&t_interval_motion(FRAC_PI_2, 1.0, 0.0), &[(0.0, 1.0)]);
        assert_set(&t_interval_motion(-FRAC_PI_2, 1.0, 0.0), &[(-1.0, 0.0)]);
        let wrap = t_interval_motion(1.5 * PI, 1.0, 0.0);
        assert_set(&wrap, &[(-INF, -1.0), (0.0, INF)]);
        assert!(t_interval_motion(2.0 * PI, 0.3, 0.9539392014169457).contains(7.0));
    }

    #[test]
    fn motion_membership_by_explicit_rotation() {
        let theta_d = 1.5 * PI;
        let set = t_interval_motion(theta_d, 1.0, 0.0);
        for k in 0..100 {
            let phi = -PI + (k as f64 + 0.5) * 2.0 * PI / 100.0;
            let t = (phi / 2.0).tan();
            // swept angles are [0, 3π/2], i.e. phi ∈ [0, π] ∪ (−π, −π/2]
            let inside = phi >= 0.0 || phi <= -FRAC_PI_2;
            assert_eq!(set.contains(t), inside, "phi={phi}");
        }
    }

    #[test]
    fn motion_starting_or_ending_at_half_turn() {
        // from π to 3π/2
        let s = t_interval_motion(FRAC_PI_2, -1.0, 0.0);
        assert_set(&s, &[(-INF, -1.0)]);
        // from π/2 to π
        let s = t_interval_motion(FRAC_PI_2, 0.0, -1.0);
        assert_eq!(s.intervals().len(), 1);
        assert!((s.intervals()[0].lo - 1.0).abs() < 1e-15 && s.intervals()[0].hi > 1e15);
        let s = t_interval_motion(1.0, -1.0, 0.0);
        assert_eq!(s.intervals()[0].lo, f64::NEG_INFINITY);
        // tiny motion around zero never wraps
        let s = t_interval_motion(1e-15, 1.0, -1e-17);
        assert_eq!(s.intervals().len(), 1);
        assert!(s.intervals()[0].hi - s.intervals()[0].lo < 1e-14);
    }

    proptest! {
        #[test]
        fn motion_matches_angle_sampling(mu in -PI..PI, theta_d in -7.0f64..7.0, f in 0.0f64..1.0) {
            let set = t_interval_motion(theta_d, mu.cos(), mu.sin());
            // a visited angle
            let phi = -mu + f * theta_d;
            let t = (phi / 2.0).tan();
            prop_assert!(set.dilated(1e-9).contains(t));
            // an unvisited angle
            if theta_d.abs() < 2.0 * PI - 1e-3 {
                let gap = 2.0 * PI - theta_d.abs();
                let away = -mu + theta_d + theta_d.signum() * gap * (0.01 + 0.98 * f);
                let t = (away / 2.0).tan();
                prop_assert!(!set.contains(t), "{set:?} t={t}");
            }
        }
    }

    #[test]
    fn edge_a_greater() {
        let set = t_intervals_edge(2.0, 1.0, -1.0, 2.0).unwrap();
        let s7 = 7f64.sqrt();
        assert_set(
            &set,
            &[(-1.0, (2.0 - s7) / 3.0), (1.0 / 3.0, (2.0 + s7) / 3.0)],
        );
        check_endpoints(&set, |t| edge_hits(t, 2.0, 1.0, -1.0, 2.0));
    }

    #[test]
    fn edge_equal() {
        let set = t_intervals_edge(1.0, 1.0, -1.0, 2.0).unwrap();
        assert_set(&set, &[(-1.0, 2.0)]);
        check_endpoints(&set, |t| edge_hits(t, 1.0, 1.0, -1.0, 2.0));
        // the isolated coincidence at t = 0 when the edge avoids x = 0
        let set = t_intervals_edge(1.0, 1.0, 0.5, 2.0).unwrap();
        assert_set(&set, &[(0.0, 0.0), (0.5, 2.0)]);
    }

    #[test]
    fn edge_b_greater_all_cases() {
        let (ha, hb) = (1.0, 2.0);
        let a = 3f64.sqrt();
        let cases = [
            (-4.0, -2.0, 2),
            (-4.0, 0.0, 1),
            (-4.0, 3.0, 2),
            (-1.0, 1.0, 0),
            (-1.0, 2.0, 1),
            (2.0, 4.0, 2),
            // boundaries
            (-4.0, -a, 2),
            (a, 4.0, 2),
            (-a, 0.5, 1),
        ];
        for (x1, x2, n) in cases {
            let set = t_intervals_edge(ha, hb, x1, x2).unwrap();
            assert!(set.intervals().len() <= n.max(1), "{x1},{x2}: {set:?}");
            check_endpoints(&set, |t| edge_hits(t, ha, hb, x1, x2));
        }
        let set = t_intervals_edge(ha, hb, -1.0, 2.0).unwrap();
        assert_set(&set, &[(1.0 / 3.0, 1.0)]);
        assert!(t_intervals_edge(ha, hb, -1.0, 1.0).unwrap().is_empty());
    }

    #[test]
    fn obstacle_cases() {
        let set = t_intervals_obstacle(1.0, 1.0, -1.0, 2.0).unwrap();
        assert_set(&set, &[(-2.0, 1.0)]);
        let set = t_intervals_obstacle(2.0, 1.0, -2.0, 2.0).unwrap();
        assert_set(&set, &[(-1.0, -1.0 / 3.0), (1.0 / 3.0, 1.0)]);
        check_endpoints(&set, |t| obstacle_hits(t, 2.0, 1.0, -2.0, 2.0));

        let set = t_intervals_obstacle(1.0, 2.0, -1.0, 2.0).unwrap();
        let tb = |x: f64, sign: f64| (-x + sign * (x * x + 3.0).sqrt()) / 3.0;
        assert_set(
            &set,
            &[
                (tb(2.0, -1.0), tb(-1.0, -1.0)),
                (tb(2.0, 1.0), tb(-1.0, 1.0)),
            ],
        );
        check_endpoints(&set, |t| obstacle_hits(t, 1.0, 2.0, -1.0, 2.0));

        let b = 3f64.sqrt();
        for (x1, x2) in [
            (-4.0, -2.0),
            (-4.0, 0.0),
            (-4.0, 3.0),
            (-1.0, 1.0),
            (-1.0, 2.0),
            (2.0, 4.0),
            (-4.0, -b),
            (b, 4.0),
            (-b, 1.0),
        ] {
            let set = t_intervals_obstacle(2.0, 1.0, x1, x2).unwrap();
            check_endpoints(&set, |t| obstacle_hits(t, 2.0, 1.0, x1, x2));
        }
        assert!(t_intervals_obstacle(2.0, 1.0, -1.0, 1.0)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn degenerate_center_is_an_error() {
        assert!(t_intervals_edge(0.0, 0.0, -1.0, 1.0).is_err());
        assert!(t_intervals_obstacle(0.0, 1e-13, -1.0, 1.0).is_err());
    }

    fn t_probe() -> impl Strategy<Value = f64> {
        prop_oneof![-3.0f64..3.0, -50.0f64..50.0]
    }

    proptest! {
        #[test]
        fn edge_sets_match_rotation_oracle(
            ha in 0.01f64..3.0, hb in 0.01f64..3.0,
            x1 in -4.0f64..4.0, w in 0.0f64..4.0, t in t_probe()
        ) {
            let x2 = x1 + w;
            let set = t_intervals_edge(ha, hb, x1, x2).unwrap();
            let near = set.dilated(1e-7);
            let far = set.complement().dilated(1e-7);
            let hit = edge_hits(t, ha, hb, x1, x2);
            if !far.contains(t) { prop_assert!(hit, "{set:?} t={t}"); }
            if !near.contains(t) { prop_assert!(!hit, "{set:?} t={t}"); }
        }

        #[test]
        fn obstacle_sets_match_rotation_oracle(
            ha in 0.01f64..3.0, hb in 0.01f64..3.0,
            x1 in -4.0f64..4.0, w in 0.0f64..4.0, t in t_probe()
        ) {
            let x2 = x1 + w;
            let set = t_intervals_obstacle(ha, hb, x1, x2).unwrap();
            let near = set.dilated(1e-7);
            let far = set.complement().dilated(1e-7);
            let hit = obstacle_hits(t, ha, hb, x1, x2);
            if !far.contains(t) { prop_assert!(hit, "{set:?} t={t}"); }
            if !near.contains(t) { prop_assert!(!hit, "{set:?} t={t}"); }
        }
    }
}
