//! Swept collision of a hitbox along arcs and straight moves.

use smallvec::SmallVec;

use super::interval::TIntervalSet;
use super::rotation::{edge_set, obstacle_set, regime, t_interval_motion, Regime, CENTER_TOL};
use super::shapes::{
    hitbox_at, point_in_hitbox, point_strictly_in, ConvexHitbox, LineParam, Obstacle,
};
use crate::biarc::{ArcSegment, Biarc};
use crate::geom::{wrap_angle, Pose, Vec2};

/// Arcs with smaller curvature are swept as translations.
pub const STRAIGHT_TOL: f64 = 1e-12;
/// Relative slack of the closed containment and entry tests.
const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("straight move changes heading by {0} rad")]
    HeadingMismatch(f64),
    #[error("arc is straight; use the straight sweep")]
    StraightArc,
}

/// Convex hull, counterclockwise, without collinear points.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Region swept by `h` translating from `start` to `end`.
pub fn straight_sweep_hull(
    h: &ConvexHitbox,
    start: Pose,
    end: Pose,
) -> Result<Vec<Vec2>, SweepError> {
    let dtheta = wrap_angle(end.theta - start.theta);
    if dtheta.abs() > 1e-9 {
        return Err(SweepError::HeadingMismatch(dtheta));
    }
    let mut pts = hitbox_at(h, &start);
    let d = end.position() - start.position();
    let moved: Vec<Vec2> = pts.iter().map(|&p| p + d).collect();
    pts.extend(moved);
    Ok(convex_hull(&pts))
}

fn project(poly: &[Vec2], axis: Vec2) -> (f64, f64) {
    poly.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            let v = axis.dot(*p);
            (lo.min(v), hi.max(v))
        })
}

fn separated(a: (f64, f64), b: (f64, f64), axis: Vec2, scale: f64) -> bool {
    let tol = SLACK * axis.norm() * scale;
    a.1 < b.0 - tol || b.1 < a.0 - tol
}

fn poly_scale(poly: &[Vec2]) -> f64 {
    poly.iter().map(|p| p.norm()).fold(1.0, f64::max)
}

/// Closed segment vs convex polygon by separating axes.
pub fn segment_hits_polygon(poly: &[Vec2], a: Vec2, b: Vec2) -> bool {
    let scale = poly_scale(poly).max(a.norm()).max(b.norm());
    let seg = [a, b];
    let n = poly.len();
    for i in 0..n {
        let axis = (poly[(i + 1) % n] - poly[i]).perp();
        if separated(project(poly, axis), project(&seg, axis), axis, scale) {
            return false;
        }
    }
    let axis = (b - a).perp();
    !separated(project(poly, axis), project(&seg, axis), axis, scale)
}

/// Closed line vs polygon: vertices on both sides or touching.
pub fn line_hits_polygon(poly: &[Vec2], point: Vec2, dir: Vec2) -> bool {
    let n = dir.perp();
    let scale = poly_scale(poly).max(point.norm());
    let (lo, hi) = project(poly, n);
    let c = n.dot(point);
    lo <= c + SLACK * scale && c - SLACK * scale <= hi
}

/// Obstacle test against the hull of a straight move.
pub fn straight_collision(hull: &[Vec2], o: &Obstacle) -> bool {
    match *o {
        Obstacle::Point(p) => point_in_hitbox(hull, p),
        Obstacle::Segment(a, b) => segment_hits_polygon(hull, a, b),
        Obstacle::Line { point, direction } => line_hits_polygon(hull, point, direction),
    }
}

#[derive(Debug, Clone, Copy)]
struct EdgeFrame {
    line: LineParam,
    x1: f64,
    x2: f64,
}

#[derive(Debug, Clone)]
enum Kind {
    Arc {
        center: Vec2,
        theta_d: f64,
        half_cos: f64,
        half_sin: f64,
        /// Largest vertex distance from the center.
        radius: f64,
        edges: SmallVec<[EdgeFrame; 8]>,
    },
    Straight {
        hull: Vec<Vec2>,
        end_poly: Vec<Vec2>,
    },
}

/// Precomputed sweep of one hitbox along one arc, reusable across obstacles.
#[derive(Debug, Clone)]
pub struct ArcSweep {
    kind: Kind,
    start_poly: Vec<Vec2>,
    mid: Vec2,
    /// Any obstacle farther than this from `mid` is missed.
    bound: f64,
}

impl ArcSweep {
    pub fn new(arc: &ArcSegment, h: &ConvexHitbox) -> Self {
        let start_poly = hitbox_at(h, &arc.start);
        let mid_pose = arc.pose_at_unchecked(0.5 * arc.length);
        let bound = 0.5 * arc.length + h.reach();
        let kind = if arc.curvature.abs() < STRAIGHT_TOL {
            let d = Vec2::from_angle(arc.start.theta) * arc.length;
            let end_poly: Vec<Vec2> = start_poly.iter().map(|&p| p + d).collect();
            let mut all = start_poly.clone();
            all.extend_from_slice(&end_poly);
            Kind::Straight {
                hull: convex_hull(&all),
                end_poly,
            }
        } else {
            let center = arc.center().expect("curved arc");
            let theta_d = arc.curvature * arc.length;
            let (half_sin, half_cos) = (0.5 * theta_d).sin_cos();
            let verts: SmallVec<[Vec2; 8]> = hitbox_at(h, &mid_pose)
                .into_iter()
                .map(|v| v - center)
                .collect();
            let n = verts.len();
            let edges = (0..n)
                .map(|j| {
                    let (a, b) = (verts[j], verts[(j + 1) % n]);
                    let line = LineParam::through(a, (b - a).normalized());
                    let (xa, xb) = (line.coord(a), line.coord(b));
                    EdgeFrame {
                        line,
                        x1: xa.min(xb),
                        x2: xa.max(xb),
                    }
                })
                .collect();
            let radius = verts.iter().map(|v| v.norm()).fold(0.0, f64::max);
            Kind::Arc {
                center,
                theta_d,
                half_cos,
                half_sin,
                radius,
                edges,
            }
        };
        Self {
            kind,
            start_poly,
            mid: mid_pose.position(),
            bound,
        }
    }

    /// Center and radius of a disk containing the whole sweep.
    pub fn bounding_disk(&self) -> (Vec2, f64) {
        (self.mid, self.bound)
    }

    pub fn collides(&self, o: &Obstacle, start_containment: bool) -> bool {
        if o.distance_to(self.mid) > self.bound * (1.0 + SLACK) + SLACK {
            return false;
        }
        match &self.kind {
            Kind::Straight { hull, end_poly } => {
                straight_hit(hull, &self.start_poly, end_poly, o, start_containment)
            }
            Kind::Arc {
                center,
                theta_d,
                half_cos,
                half_sin,
                radius,
                edges,
            } => {
                let c = *center;
                if o.distance_to(c) > radius * (1.0 + SLACK) + SLACK {
                    return false;
                }
                let cos_window = if theta_d.abs() >= std::f64::consts::TAU {
                    -1.0
                } else {
                    *half_cos
                };
                let entry = |p: Vec2| {
                    let q = p - c;
                    edges.iter().any(|e| edge_point_entry(e, q, cos_window))
                };
                match *o {
                    Obstacle::Point(p) => {
                        (start_containment && point_in_hitbox(&self.start_poly, p)) || entry(p)
                    }
                    Obstacle::Segment(a, b) => {
                        if start_containment
                            && (point_in_hitbox(&self.start_poly, a)
                                || point_in_hitbox(&self.start_poly, b))
                        {
                            return true;
                        }
                        if entry(a) || entry(b) {
                            return true;
                        }
                        let (qa, qb) = (a - c, b - c);
                        let lb = LineParam::through(qa, (qb - qa).normalized());
                        let (xa, xb) = (lb.coord(qa), lb.coord(qb));
                        let range = Some((xa.min(xb), xa.max(xb)));
                        edges
                            .iter()
                            .any(|e| edge_line_hit(e, &lb, range, *theta_d, *half_cos, *half_sin))
                    }
                    Obstacle::Line { point, direction } => {
                        if start_containment
                            && line_hits_polygon(&self.start_poly, point, direction)
                        {
                            return true;
                        }
                        let lb = LineParam::through(point - c, direction);
                        edges
                            .iter()
                            .any(|e| edge_line_hit(e, &lb, None, *theta_d, *half_cos, *half_sin))
                    }
                }
            }
        }
    }
}

fn straight_hit(
    hull: &[Vec2],
    start: &[Vec2],
    end: &[Vec2],
    o: &Obstacle,
    start_containment: bool,
) -> bool {
    if !straight_collision(hull, o) {
        return false;
    }
    if start_containment {
        return true;
    }
    // without the start check only boundary passage counts, which fails only
    // when the obstacle stays strictly inside from start to end
    match *o {
        Obstacle::Point(p) => !(point_strictly_in(start, p) && point_strictly_in(end, p)),
        Obstacle::Segment(a, b) => {
            !([a, b]
                .iter()
                .all(|&p| point_strictly_in(start, p) && point_strictly_in(end, p)))
        }
        Obstacle::Line { .. } => true,
    }
}

/// Entry of center-frame point `q` through an edge during the turn
/// `±θ_d/2` around the mid-arc placement.
#[inline]
fn edge_point_entry(e: &EdgeFrame, q: Vec2, cos_window: f64) -> bool {
    let r2 = q.norm_sq();
    let h = e.line.h;
    let rad = r2 - h * h;
    let tol = SLACK * r2.max(1.0);
    if rad < -tol {
        return false;
    }
    let x0 = rad.max(0.0).sqrt();
    let xtol = SLACK * (e.x2 - e.x1).abs().max(1.0).max(x0);
    let bound = r2 * cos_window - tol;
    [x0, -x0]
        .into_iter()
        .any(|x| x >= e.x1 - xtol && x <= e.x2 + xtol && q.dot(e.line.point_at(x)) >= bound)
}

/// Public form of the per-edge point entry test. `edge` is the edge line in
/// the center frame at mid-arc, `[x_j, x_j1]` its coordinate range.
pub fn arc_edge_point_entry(
    arc: &ArcSegment,
    edge: LineParam,
    x_j: f64,
    x_j1: f64,
    p: Vec2,
) -> Result<bool, SweepError> {
    if arc.curvature.abs() < STRAIGHT_TOL {
        return Err(SweepError::StraightArc);
    }
    let theta_d = arc.curvature * arc.length;
    let cos_window = if theta_d.abs() >= std::f64::consts::TAU {
        -1.0
    } else {
        (0.5 * theta_d).cos()
    };
    let e = EdgeFrame {
        line: edge,
        x1: x_j.min(x_j1),
        x2: x_j.max(x_j1),
    };
    Ok(edge_point_entry(&e, p, cos_window))
}

fn ranges_overlap(a: (f64, f64), b: (f64, f64)) -> bool {
    let tol = SLACK
        * a.0
            .abs()
            .max(a.1.abs())
            .max(b.0.abs())
            .max(b.1.abs())
            .max(1.0);
    a.0 <= b.1 + tol && b.0 <= a.1 + tol
}

fn dilate(s: &TIntervalSet) -> TIntervalSet {
    s.dilated(SLACK)
}

/// Does edge `e` touch line `b` (restricted to `range` when it is a segment)
/// while turning `θ_d` about the origin centered on the current placement?
fn edge_line_hit(
    e: &EdgeFrame,
    b: &LineParam,
    range: Option<(f64, f64)>,
    theta_d: f64,
    half_cos: f64,
    half_sin: f64,
) -> bool {
    let c_mu = b.u.dot(e.line.u);
    let s_mu = e.line.u.perp().dot(b.u);
    // shift to the start-of-arc alignment angle μ + θ_d/2
    let c_s = c_mu * half_cos - s_mu * half_sin;
    let s_s = s_mu * half_cos + c_mu * half_sin;
    let i_d = dilate(&t_interval_motion(theta_d, c_s, s_s));
    let (h_a, h_b) = (e.line.h, b.h);
    let b_range = range.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));

    if h_a + h_b < CENTER_TOL {
        // both lines through the center: they cross at the origin unless aligned
        let zero_in = |r: (f64, f64)| ranges_overlap(r, (0.0, 0.0));
        if zero_in((e.x1, e.x2)) && zero_in(b_range) {
            return true;
        }
        if i_d.contains(0.0) && ranges_overlap((e.x1, e.x2), b_range) {
            return true;
        }
        let half_turn = i_d.contains(f64::INFINITY) || i_d.contains(f64::NEG_INFINITY);
        return half_turn && ranges_overlap((-e.x2, -e.x1), b_range);
    }

    let i_a = dilate(&edge_set(h_a, h_b, e.x1, e.x2));
    let mut hit = i_a.intersection(&i_d);
    if let Some((x1, x2)) = range {
        hit = hit.intersection(&dilate(&obstacle_set(h_a, h_b, x1, x2)));
    }
    if !hit.is_empty() {
        return true;
    }
    // coincident lines at t = 0
    regime(h_a, h_b) == Regime::Equal && i_d.contains(0.0) && ranges_overlap((e.x1, e.x2), b_range)
}

/// Swept collision of `h` along `arc` against one obstacle.
pub fn arc_collision(
    arc: &ArcSegment,
    h: &ConvexHitbox,
    o: &Obstacle,
    start_containment: bool,
) -> bool {
    ArcSweep::new(arc, h).collides(o, start_containment)
}

/// Both arcs of a biarc; the start check applies only to the first arc of the
/// first biarc of a path.
pub fn biarc_collision(
    b: &Biarc,
    h: &ConvexHitbox,
    obstacles: &[Obstacle],
    is_first: bool,
) -> bool {
    if obstacles.is_empty() {
        return false;
    }
    let sa = ArcSweep::new(&b.arc_a, h);
    if obstacles.iter().any(|o| sa.collides(o, is_first)) {
        return true;
    }
    let sb = ArcSweep::new(&b.arc_b, h);
    obstacles.iter().any(|o| sb.collides(o, false))
}

pub fn path_collision(plan: &[Biarc], h: &ConvexHitbox, obstacles: &[Obstacle]) -> bool {
    plan.iter()
        .enumerate()
        .any(|(i, b)| biarc_collision(b, h, obstacles, i == 0))
}
