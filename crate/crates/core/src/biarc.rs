//! Biarc construction between oriented poses.
//!
//! A biarc is two circular arcs (straight segments are arcs with zero
//! curvature) that meet with a common tangent at the joint point `J`. For a
//! given pair of end poses the joint can lie anywhere on a circle (or, when
//! the end headings are parallel, on the line through both endpoints); this
//! module builds the chord frame, that locus, the `α`-parametrized family and
//! the equal-chord member (`α = 0`) used throughout the planner.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{sinc, wrap_angle, Pose, Rigid, Vec2};

/// Minimum chord length accepted by [`ChordFrame::new`].
pub const MIN_CHORD: f64 = 1e-12;
/// Headings whose wrapped difference is below this are treated as parallel.
pub const PARALLEL_TOL: f64 = 1e-9;
/// Distance (in `α`) from an infinite-length or infinite-curvature pole that is rejected.
pub const POLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeomError {
    #[error("start and end positions coincide (|AB| = {0:e})")]
    CoincidentEndpoints(f64),
    #[error("joint parameter hits a pole: {0}")]
    Pole(PoleKind),
    #[error("arclength {s} outside [0, {length}]")]
    OutOfRange { s: f64, length: f64 },
    #[error("joint point is not on the joint locus (heading mismatch {0:e} rad)")]
    JointOffLocus(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleKind {
    /// The arc would have to wrap a full turn around a circle of infinite radius.
    InfiniteLength,
    /// A zero-length arc would have to turn the heading in place.
    InfiniteCurvature,
}

impl std::fmt::Display for PoleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PoleKind::InfiniteLength => f.write_str("infinite length"),
            PoleKind::InfiniteCurvature => f.write_str("infinite curvature"),
        }
    }
}

/// A circular arc (or straight segment when `curvature == 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcSegment {
    pub start: Pose,
    /// Signed, positive counterclockwise.
    pub curvature: f64,
    pub length: f64,
}

impl ArcSegment {
    pub fn new(start: Pose, curvature: f64, length: f64) -> Self {
        debug_assert!(length >= 0.0, "negative arc length {length}");
        Self {
            start,
            curvature,
            length,
        }
    }

    /// Heading change over the arc, `curvature * length`.
    #[inline]
    pub fn spanned_angle(&self) -> f64 {
        self.curvature * self.length
    }

    #[inline]
    pub fn is_straight(&self) -> bool {
        self.curvature == 0.0
    }

    /// Center of rotation; `None` for straight segments.
    pub fn center(&self) -> Option<Vec2> {
        if self.curvature == 0.0 {
            None
        } else {
            Some(self.start.position() + self.start.heading().perp() * (1.0 / self.curvature))
        }
    }

    /// Pose at arclength `s`; no range check.
    #[inline]
    pub fn pose_at_unchecked(&self, s: f64) -> Pose {
        // chord form stays exact as curvature -> 0
        let half = 0.5 * self.curvature * s;
        let chord = s * sinc(half);
        let dir = Vec2::from_angle(self.start.theta + half);
        Pose::from_position(
            self.start.position() + dir * chord,
            self.start.theta + 2.0 * half,
        )
    }

    pub fn pose_at(&self, s: f64) -> Result<Pose, GeomError> {
        if !(0.0..=self.length).contains(&s) {
            return Err(GeomError::OutOfRange {
                s,
                length: self.length,
            });
        }
        Ok(self.pose_at_unchecked(s))
    }

    pub fn end_pose(&self) -> Pose {
        self.pose_at_unchecked(self.length)
    }

    /// Sub-arc covering `[s0, s1]`.
    pub fn slice(&self, s0: f64, s1: f64) -> ArcSegment {
        let s0 = s0.clamp(0.0, self.length);
        let s1 = s1.clamp(s0, self.length);
        ArcSegment::new(self.pose_at_unchecked(s0), self.curvature, s1 - s0)
    }

    /// The same curve traversed from its end back to its start.
    ///
    /// The heading is flipped and the curvature negated, so the center of
    /// rotation is unchanged. A body frame rotated by π sweeps the same region.
    pub fn reversed(&self) -> ArcSegment {
        let end = self.end_pose();
        ArcSegment::new(
            Pose::new(end.x, end.y, end.theta + PI),
            -self.curvature,
            self.length,
        )
    }

    pub fn transformed(&self, t: &Rigid) -> ArcSegment {
        ArcSegment::new(t.apply_pose(&self.start), self.curvature, self.length)
    }
}

/// Two G1-continuous arcs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Biarc {
    pub arc_a: ArcSegment,
    pub arc_b: ArcSegment,
}

impl Biarc {
    pub fn new(arc_a: ArcSegment, arc_b: ArcSegment) -> Self {
        Self { arc_a, arc_b }
    }

    pub fn start(&self) -> Pose {
        self.arc_a.start
    }

    pub fn end(&self) -> Pose {
        self.arc_b.end_pose()
    }

    pub fn joint(&self) -> Vec2 {
        self.arc_b.start.position()
    }

    pub fn length(&self) -> f64 {
        self.arc_a.length + self.arc_b.length
    }

    pub fn arcs(&self) -> [&ArcSegment; 2] {
        [&self.arc_a, &self.arc_b]
    }

    /// Pose at arclength `s` measured from the biarc start (clamped).
    pub fn pose_at(&self, s: f64) -> Pose {
        if s <= self.arc_a.length {
            self.arc_a.pose_at_unchecked(s.max(0.0))
        } else {
            self.arc_b
                .pose_at_unchecked((s - self.arc_a.length).min(self.arc_b.length))
        }
    }

    pub fn curvature_at(&self, s: f64) -> f64 {
        if s < self.arc_a.length {
            self.arc_a.curvature
        } else {
            self.arc_b.curvature
        }
    }

    pub fn transformed(&self, t: &Rigid) -> Biarc {
        Biarc::new(self.arc_a.transformed(t), self.arc_b.transformed(t))
    }

    /// Samples with arclength and curvature; see [`sample_biarc`].
    pub fn samples(&self, ds: f64) -> Vec<PathSample> {
        assert!(ds > 0.0, "sampling step must be positive");
        let l = self.length();
        let joint_s = self.arc_a.length;
        let mut out = Vec::with_capacity((l / ds) as usize + 3);
        let mut joint_done = false;
        let mut i = 0u64;
        loop {
            let s = i as f64 * ds;
            if s >= l * (1.0 - 1e-12) && i > 0 {
                break;
            }
            if !joint_done && joint_s <= s {
                out.push(self.joint_sample());
                joint_done = true;
            }
            out.push(PathSample {
                s,
                pose: self.pose_at(s),
                curvature: self.curvature_at(s),
            });
            i += 1;
        }
        if !joint_done {
            out.push(self.joint_sample());
        }
        out.push(PathSample {
            s: l,
            pose: self.end(),
            curvature: self.arc_b.curvature,
        });
        out
    }

    fn joint_sample(&self) -> PathSample {
        PathSample {
            s: self.arc_a.length,
            pose: self.arc_b.start,
            curvature: self.arc_b.curvature,
        }
    }
}

/// A pose along a path together with its arclength and the curvature in effect there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    pub s: f64,
    pub pose: Pose,
    pub curvature: f64,
}

/// Geometry of the chord `AB` and the end headings measured against it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordFrame {
    pub a: Pose,
    pub b: Pose,
    /// Unit vector from A to B.
    pub u: Vec2,
    /// `u` rotated by +90°.
    pub v: Vec2,
    pub chord: f64,
    pub mid: Vec2,
    pub phi_a: f64,
    pub phi_b: f64,
    pub gamma: f64,
    pub phi_m: f64,
    pub alpha_ha: f64,
    pub alpha_hb: f64,
}

impl ChordFrame {
    pub fn new(a: Pose, b: Pose) -> Result<Self, GeomError> {
        let d = b.position() - a.position();
        let chord = d.norm();
        if !(chord > MIN_CHORD) {
            return Err(GeomError::CoincidentEndpoints(chord));
        }
        let u = d * (1.0 / chord);
        let chord_angle = u.angle();
        let phi_a = wrap_angle(a.theta - chord_angle);
        let phi_b = wrap_angle(b.theta - chord_angle);
        let phi_m = 0.5 * (phi_a + phi_b);
        Ok(Self {
            a,
            b,
            u,
            v: u.perp(),
            chord,
            mid: a.position() + u * (0.5 * chord),
            phi_a,
            phi_b,
            gamma: phi_b - phi_a,
            phi_m,
            alpha_ha: phi_m + phi_a,
            alpha_hb: phi_m + phi_b,
        })
    }

    /// End headings parallel: the joint locus is the line through A and B.
    pub fn is_degenerate(&self) -> bool {
        wrap_angle(self.gamma).abs() < PARALLEL_TOL
    }
}

pub fn chord_frame(a: Pose, b: Pose) -> Result<ChordFrame, GeomError> {
    ChordFrame::new(a, b)
}

/// Locus of admissible joint points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JointLocus {
    Circle {
        center: Vec2,
        radius: f64,
    },
    /// Line through `point` with unit `direction`.
    Line {
        point: Vec2,
        direction: Vec2,
    },
}

impl JointLocus {
    /// Unsigned distance from `p` to the locus.
    pub fn distance(&self, p: Vec2) -> f64 {
        match *self {
            JointLocus::Circle { center, radius } => ((p - center).norm() - radius).abs(),
            JointLocus::Line { point, direction } => (p - point).cross(direction).abs(),
        }
    }
}

pub fn joint_locus(frame: &ChordFrame) -> JointLocus {
    if frame.is_degenerate() {
        return JointLocus::Line {
            point: frame.a.position(),
            direction: frame.u,
        };
    }
    let half = 0.5 * frame.gamma;
    // cot(γ/2) vanishes for γ = ±π, which puts C at M
    let cot = half.cos() / half.sin();
    let center = frame.mid + frame.v * (0.5 * frame.chord * cot);
    JointLocus::Circle {
        center,
        radius: 0.5 * frame.chord / half.sin().abs(),
    }
}

/// Joint position for parameter `alpha`.
///
/// On a circular locus `alpha` is the angle from `CM` to `CJ`; `J = A` at
/// `α = -γ/2` and `J = B` at `α = γ/2`. On a straight locus it is the affine
/// parameter of `J = A(1/2 - α) + B(1/2 + α)`.
pub fn joint_at_alpha(frame: &ChordFrame, alpha: f64) -> Vec2 {
    let a = frame.a.position();
    let b = frame.b.position();
    match joint_locus(frame) {
        JointLocus::Circle { center, .. } => {
            let half = 0.5 * frame.gamma;
            if wrap_angle(alpha + half).abs() < POLE_TOL {
                return a;
            }
            if wrap_angle(alpha - half).abs() < POLE_TOL {
                return b;
            }
            center - frame.v.rotate(alpha) * (0.5 * frame.chord / half.sin())
        }
        JointLocus::Line { .. } => {
            if (alpha + 0.5).abs() < POLE_TOL {
                return a;
            }
            if (alpha - 0.5).abs() < POLE_TOL {
                return b;
            }
            a * (0.5 - alpha) + b * (0.5 + alpha)
        }
    }
}

/// Member of the biarc family selected by `alpha` (see [`joint_at_alpha`]).
pub fn biarc_with_alpha(frame: &ChordFrame, alpha: f64) -> Result<Biarc, GeomError> {
    biarc_through_joint(frame.a, frame.b, joint_at_alpha(frame, alpha))
}

/// Arc leaving `start` that passes through `target`, or a pole error.
fn arc_to_point(start: Pose, target: Vec2) -> Result<ArcSegment, GeomError> {
    let d = target - start.position();
    let dist = d.norm();
    if dist == 0.0 {
        return Ok(ArcSegment::new(start, 0.0, 0.0));
    }
    // half of the spanned angle: angle from the heading to the chord
    let half = wrap_angle(d.angle() - start.theta);
    if PI - half.abs() < 0.5 * POLE_TOL {
        return Err(GeomError::Pole(PoleKind::InfiniteLength));
    }
    let length = dist / sinc(half);
    let curvature = if half == 0.0 {
        0.0
    } else {
        2.0 * half.sin() / dist
    };
    Ok(ArcSegment::new(start, curvature, length))
}

/// Builds the biarc from `a` to `b` whose arcs meet at `joint`.
///
/// `joint` must lie on the joint locus of `(a, b)`; a heading mismatch above
/// 1e-7 rad at `b` is reported as [`GeomError::JointOffLocus`].
pub fn biarc_through_joint(a: Pose, b: Pose, joint: Vec2) -> Result<Biarc, GeomError> {
    let arc_a = arc_to_point(a, joint)?;
    let joint_pose = if arc_a.length == 0.0 {
        a
    } else {
        let mut p = arc_a.end_pose();
        // snap the position; the heading is what the first arc produces
        p.x = joint.x;
        p.y = joint.y;
        p
    };
    let arc_b = arc_to_point(joint_pose, b.position())?;
    let mismatch = wrap_angle(arc_b.end_pose().theta - b.theta).abs();
    if mismatch > 1e-7 {
        if arc_a.length == 0.0 || arc_b.length == 0.0 {
            return Err(GeomError::Pole(PoleKind::InfiniteCurvature));
        }
        return Err(GeomError::JointOffLocus(mismatch));
    }
    Ok(Biarc::new(arc_a, arc_b))
}

/// The equal-chord biarc (`α = 0`): `J` on the perpendicular bisector of `AB`.
pub fn biarc_equal_chord(a: Pose, b: Pose) -> Result<Biarc, GeomError> {
    let f = ChordFrame::new(a, b)?;
    equal_chord_from_frame(&f)
}

pub(crate) fn equal_chord_from_frame(f: &ChordFrame) -> Result<Biarc, GeomError> {
    let q = 0.25 * f.gamma;
    let half_a = 0.5 * f.alpha_ha;
    let half_b = 0.5 * f.alpha_hb;
    // |α_H/2| reaches π only for φ_A = φ_B = π: both headings point away from the chord
    if PI - half_a.abs() < POLE_TOL || PI - half_b.abs() < POLE_TOL {
        return Err(GeomError::Pole(PoleKind::InfiniteLength));
    }
    let side = f.chord / (2.0 * q.cos());
    let l_a = side / sinc(half_a);
    let l_b = side / sinc(half_b);
    let k_a = -2.0 * (f.phi_m.sin() + f.phi_a.sin()) / f.chord;
    let k_b = 2.0 * (f.phi_m.sin() + f.phi_b.sin()) / f.chord;
    let arc_a = ArcSegment::new(f.a, k_a, l_a);
    let mut joint_pose = arc_a.end_pose();
    let j = f.mid - f.v * (0.5 * f.chord * q.tan());
    joint_pose.x = j.x;
    joint_pose.y = j.y;
    Ok(Biarc::new(arc_a, ArcSegment::new(joint_pose, k_b, l_b)))
}

/// Length and curvature summary of a biarc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiarcMetrics {
    pub l_a: f64,
    pub l_b: f64,
    pub l: f64,
    pub k_a: f64,
    pub k_b: f64,
    pub dk: f64,
}

pub fn biarc_metrics(b: &Biarc) -> BiarcMetrics {
    BiarcMetrics {
        l_a: b.arc_a.length,
        l_b: b.arc_b.length,
        l: b.arc_a.length + b.arc_b.length,
        k_a: b.arc_a.curvature,
        k_b: b.arc_b.curvature,
        dk: b.arc_b.curvature - b.arc_a.curvature,
    }
}

pub fn pose_at(arc: &ArcSegment, s: f64) -> Result<Pose, GeomError> {
    arc.pose_at(s)
}

/// Poses at arclength `0, ds, 2ds, …, l`, with the joint inserted in order.
pub fn sample_biarc(b: &Biarc, ds: f64) -> Vec<Pose> {
    b.samples(ds).into_iter().map(|s| s.pose).collect()
}
