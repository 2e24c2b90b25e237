//! Replanning toward a fixed target pose while reusing the previous biarc.
//!
//! The new joint `J'` is taken on the circle (or line) `c_B` carrying the
//! previous biarc's second arc, so the two biarcs overlap on their final
//! portion. When that candidate is missing or poor, the equal-chord biarc is
//! used instead.

use serde::{Deserialize, Serialize};

use crate::biarc::{
    biarc_equal_chord, biarc_through_joint, equal_chord_from_frame, joint_locus, Biarc, ChordFrame,
    JointLocus,
};
use crate::geom::{wrap_angle, Pose, Vec2};

/// Second arcs with curvature below this carry a straight `c_B`.
pub const STRAIGHT_CURVATURE_TOL: f64 = 1e-12;
/// Joint candidates closer than this to `B` (or circle centers closer than this) coincide.
pub const COINCIDENCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplanParams {
    /// Maximum accepted ratio of candidate length to equal-chord length.
    pub eta_l: f64,
    /// Maximum accepted ratio of candidate to equal-chord curvature jump.
    pub eta_k: f64,
}

impl Default for ReplanParams {
    fn default() -> Self {
        Self {
            eta_l: 2.0,
            eta_k: 2.0,
        }
    }
}

impl ReplanParams {
    pub fn new(eta_l: f64, eta_k: f64) -> Option<Self> {
        (eta_l > 1.0 && eta_k > 1.0).then_some(Self { eta_l, eta_k })
    }
}

/// Where a selected biarc came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReplanSource {
    /// Overlaps the previous second arc.
    Candidate,
    /// Fresh equal-chord biarc.
    EqualChord,
}

/// Circle or line carrying the previous biarc's second arc.
fn second_arc_support(prev: &Biarc) -> JointLocus {
    let arc = &prev.arc_b;
    if arc.curvature.abs() < STRAIGHT_CURVATURE_TOL {
        JointLocus::Line {
            point: arc.start.position(),
            direction: arc.start.heading(),
        }
    } else {
        JointLocus::Circle {
            center: arc.center().expect("curved arc has a center"),
            radius: 1.0 / arc.curvature.abs(),
        }
    }
}

/// Reflection of `b` across the line through `pivot` with unit direction `w`.
fn reflect_across(b: Vec2, pivot: Vec2, w: Vec2) -> Vec2 {
    let a_c = w.x * w.x - w.y * w.y;
    let a_s = 2.0 * w.x * w.y;
    Vec2::new(
        a_c * b.x + a_s * b.y + (1.0 - a_c) * pivot.x - a_s * pivot.y,
        a_s * b.x - a_c * b.y - a_s * pivot.x + (1.0 + a_c) * pivot.y,
    )
}

/// Biarc from `a_prime` to the end of `prev` whose second arc lies on `prev`'s
/// second-arc circle, or `None` when no such biarc exists.
pub fn replan_candidate(prev: &Biarc, a_prime: Pose) -> Option<Biarc> {
    let b = prev.end();
    let frame = ChordFrame::new(a_prime, b).ok()?;
    let bp = b.position();
    // c' degenerates to the line A'B when the headings are parallel
    let new_locus = if wrap_angle(a_prime.theta - b.theta).abs() < 1e-9 {
        JointLocus::Line {
            point: a_prime.position(),
            direction: frame.u,
        }
    } else {
        joint_locus(&frame)
    };
    let joint = match (second_arc_support(prev), new_locus) {
        (JointLocus::Line { .. }, JointLocus::Line { .. }) => return None,
        (JointLocus::Circle { center: cb, .. }, JointLocus::Circle { center: cp, .. }) => {
            let d = cb - cp;
            let dist = d.norm();
            if dist < COINCIDENCE_TOL {
                // same circle through B: any point works, take the equal-chord joint
                let bi = equal_chord_from_frame(&frame).ok()?;
                return accept(bi);
            }
            reflect_across(bp, cp, d * (1.0 / dist))
        }
        (JointLocus::Line { direction: ub, .. }, JointLocus::Circle { center: cp, .. }) => {
            bp + ub * (2.0 * ub.dot(cp - bp))
        }
        (JointLocus::Circle { center: cb, .. }, JointLocus::Line { direction: up, .. }) => {
            bp + up * (2.0 * up.dot(cb - bp))
        }
    };
    if joint.distance(bp) < COINCIDENCE_TOL {
        return None;
    }
    accept(biarc_through_joint(a_prime, b, joint).ok()?)
}

fn accept(bi: Biarc) -> Option<Biarc> {
    let limit = std::f64::consts::TAU - 1e-9;
    (bi.arc_a.spanned_angle().abs() < limit && bi.arc_b.spanned_angle().abs() < limit).then_some(bi)
}

/// Chooses between the overlapping candidate and the equal-chord biarc.
pub fn replan_select(prev: &Biarc, a_prime: Pose, params: &ReplanParams) -> Option<Biarc> {
    replan_select_detailed(prev, a_prime, params).map(|(b, _)| b)
}

/// As [`replan_select`], also reporting which construction was used.
///
/// Returns `None` only when even the equal-chord biarc cannot be built
/// (`a_prime` at the target position, or both headings pointing away).
pub fn replan_select_detailed(
    prev: &Biarc,
    a_prime: Pose,
    params: &ReplanParams,
) -> Option<(Biarc, ReplanSource)> {
    let fresh = biarc_equal_chord(a_prime, prev.end()).ok();
    let Some(candidate) = replan_candidate(prev, a_prime) else {
        return fresh.map(|b| (b, ReplanSource::EqualChord));
    };
    let Some(fresh) = fresh else {
        return Some((candidate, ReplanSource::Candidate));
    };
    let dk_c = (candidate.arc_b.curvature - candidate.arc_a.curvature).abs();
    let dk_f = (fresh.arc_b.curvature - fresh.arc_a.curvature).abs();
    if candidate.length() > params.eta_l * fresh.length() || dk_c > params.eta_k * dk_f {
        Some((fresh, ReplanSource::EqualChord))
    } else {
        Some((candidate, ReplanSource::Candidate))
    }
}
