//! Brute-force references: dense-sampling swept collision, polyline lengths
//! and α scans. Deliberately slow and independent of `collide`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::biarc::{
    biarc_metrics, biarc_with_alpha, ArcSegment, Biarc, BiarcMetrics, ChordFrame, GeomError,
};
use crate::collide::{arc_collision, ConvexHitbox, Obstacle};
use crate::geom::{Pose, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Arclength step, meters.
    pub ds: f64,
    /// Heading step, radians.
    pub dtheta_max: f64,
    /// Cases closer than this to contact are not judged.
    pub clearance_margin: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            ds: 1e-3,
            dtheta_max: 1e-3,
            clearance_margin: 2e-3,
        }
    }
}

impl OracleConfig {
    pub fn new(ds: f64, dtheta_max: f64, clearance_margin: f64) -> Option<Self> {
        (ds > 0.0 && dtheta_max > 0.0 && clearance_margin > 0.0).then_some(Self {
            ds,
            dtheta_max,
            clearance_margin,
        })
    }
}

/// Poses along `arcs` spaced by at most `ds` in arclength and `dtheta` in heading,
/// including both ends of every arc.
pub fn sample_motion(arcs: &[ArcSegment], ds: f64, dtheta: f64) -> Vec<Pose> {
    let mut out = Vec::new();
    for arc in arcs {
        let by_len = arc.length / ds;
        let by_turn = (arc.curvature * arc.length).abs() / dtheta;
        let n = by_len.max(by_turn).ceil().max(1.0) as usize;
        for i in 0..=n {
            out.push(arc.pose_at_unchecked(arc.length * i as f64 / n as f64));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Contact {
    Outside,
    Touching,
    Inside,
}

fn placed(h: &ConvexHitbox, p: &Pose) -> Vec<Vec2> {
    let (s, c) = p.theta.sin_cos();
    h.vertices()
        .iter()
        .map(|v| Vec2::new(p.x + c * v.x - s * v.y, p.y + s * v.x + c * v.y))
        .collect()
}

/// Smallest signed distance from `q` to the edge lines, positive inside.
fn depth(poly: &[Vec2], q: Vec2) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let a = poly[i];
            let e = poly[(i + 1) % n] - a;
            e.cross(q - a) / e.norm()
        })
        .fold(f64::INFINITY, f64::min)
}

fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    (b - a).cross(c - a)
}

fn segments_touch(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Vec2, b: Vec2, c: Vec2, d: f64| {
        d == 0.0
            && c.x >= a.x.min(b.x)
            && c.x <= a.x.max(b.x)
            && c.y >= a.y.min(b.y)
            && c.y <= a.y.max(b.y)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn contact(poly: &[Vec2], o: &Obstacle) -> Contact {
    match *o {
        Obstacle::Point(p) => {
            let d = depth(poly, p);
            if d > 0.0 {
                Contact::Inside
            } else if d == 0.0 {
                Contact::Touching
            } else {
                Contact::Outside
            }
        }
        Obstacle::Segment(a, b) => {
            let (da, db) = (depth(poly, a), depth(poly, b));
            if da > 0.0 && db > 0.0 {
                return Contact::Inside;
            }
            let n = poly.len();
            let crosses = da >= 0.0
                || db >= 0.0
                || (0..n).any(|i| segments_touch(a, b, poly[i], poly[(i + 1) % n]));
            if crosses {
                Contact::Touching
            } else {
                Contact::Outside
            }
        }
        Obstacle::Line { point, direction } => {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for v in poly {
                let d = direction.cross(*v - point);
                lo = lo.min(d);
                hi = hi.max(d);
            }
            if lo <= 0.0 && hi >= 0.0 {
                Contact::Touching
            } else {
                Contact::Outside
            }
        }
    }
}

/// Sampled swept collision over a chain of arcs.
///
/// With `start_containment` any contact counts. Without it an obstacle
/// counts only if the hitbox boundary passes over it: it touches at some
/// sample, or is outside at one sample and strictly inside at another.
pub fn swept_collision_oracle(
    arcs: &[ArcSegment],
    h: &ConvexHitbox,
    o: &Obstacle,
    cfg: &OracleConfig,
    start_containment: bool,
) -> bool {
    let (mut outside, mut inside) = (false, false);
    for pose in sample_motion(arcs, cfg.ds, cfg.dtheta_max) {
        match contact(&placed(h, &pose), o) {
            Contact::Touching => return true,
            Contact::Inside if start_containment => return true,
            Contact::Inside => inside = true,
            Contact::Outside => outside = true,
        }
        if inside && outside {
            return true;
        }
    }
    false
}

pub fn biarc_collision_oracle(
    b: &Biarc,
    h: &ConvexHitbox,
    o: &Obstacle,
    cfg: &OracleConfig,
    start_containment: bool,
) -> bool {
    swept_collision_oracle(&[b.arc_a, b.arc_b], h, o, cfg, start_containment)
}

/// Ground truth with a safety margin, for a sweep that counts start contact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Clearance {
    /// Clearance exceeds the margin: no collision.
    Free,
    /// Penetration exceeds the margin: collision.
    Hit,
    /// Within the margin of contact; not judged.
    Ambiguous,
}

/// Runs the oracle with the hitbox grown and shrunk by the margin.
pub fn classify(
    arcs: &[ArcSegment],
    h: &ConvexHitbox,
    o: &Obstacle,
    cfg: &OracleConfig,
) -> Clearance {
    let m = cfg.clearance_margin;
    let grown = h
        .inflated(m)
        .expect("outward offset of a convex polygon stays convex");
    if !swept_collision_oracle(arcs, &grown, o, cfg, true) {
        return Clearance::Free;
    }
    match h.deflated(m) {
        Ok(shrunk) if swept_collision_oracle(arcs, &shrunk, o, cfg, true) => Clearance::Hit,
        _ => Clearance::Ambiguous,
    }
}

/// Sum of chord lengths between consecutive samples.
///
/// Each arc is split into equal steps no longer than `ds`. Points come from
/// exact rotations of the start radius: a table of in-block rotations applied
/// to an anchor that is itself rotated exactly at the start of each block.
pub fn polyline_length_oracle(b: &Biarc, ds: f64) -> f64 {
    assert!(ds > 0.0, "sampling step must be positive");
    [b.arc_a, b.arc_b]
        .iter()
        .map(|a| arc_polyline_length(a, ds))
        .sum()
}

fn arc_polyline_length(a: &ArcSegment, ds: f64) -> f64 {
    const BLOCK: u64 = 256;
    if a.length == 0.0 {
        return 0.0;
    }
    let n = (a.length / ds).ceil().max(1.0) as u64;
    let Some(c) = a.center() else {
        let step = a.length / n as f64;
        let d = Vec2::from_angle(a.start.theta);
        let mut prev = a.start.position();
        let mut total = 0.0;
        for k in 1..=n {
            let p = a.start.position() + d * (step * k as f64);
            total += (p - prev).norm_sq().sqrt();
            prev = p;
        }
        return total;
    };
    let r0 = a.start.position() - c;
    let turn = a.curvature * a.length / n as f64;
    let table: Vec<(f64, f64)> = (0..BLOCK.min(n + 1))
        .map(|j| (turn * j as f64).sin_cos())
        .collect();
    let mut prev = r0;
    let mut total = 0.0;
    let mut k = 1;
    while k <= n {
        let block = k / BLOCK * BLOCK;
        let (s, co) = (turn * block as f64).sin_cos();
        let anchor = r0.rotate_cs(co, s);
        let last = (block + BLOCK - 1).min(n);
        for j in k..=last {
            let (sj, cj) = table[(j - block) as usize];
            let p = anchor.rotate_cs(cj, sj);
            total += (p - prev).norm_sq().sqrt();
            prev = p;
        }
        k = last + 1;
    }
    total
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaRow {
    pub alpha: f64,
    /// `Err` on a pole.
    pub metrics: Result<BiarcMetrics, GeomError>,
}

pub fn alpha_scan(frame: &ChordFrame, alphas: &[f64]) -> Vec<AlphaRow> {
    alphas
        .iter()
        .map(|&alpha| AlphaRow {
            alpha,
            metrics: biarc_with_alpha(frame, alpha).map(|b| biarc_metrics(&b)),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObstacleKind {
    Point,
    Segment,
    Line,
}

/// One randomized (arc, hitbox, obstacle) triple.
#[derive(Debug, Clone)]
pub struct RandomCase {
    pub arc: ArcSegment,
    pub hitbox: ConvexHitbox,
    pub obstacle: Obstacle,
}

impl RandomCase {
    pub fn kind(&self) -> ObstacleKind {
        match self.obstacle {
            Obstacle::Point(_) => ObstacleKind::Point,
            Obstacle::Segment(..) => ObstacleKind::Segment,
            Obstacle::Line { .. } => ObstacleKind::Line,
        }
    }
}

fn random_hitbox<R: Rng>(rng: &mut R) -> ConvexHitbox {
    if rng.random_bool(0.3) {
        return ConvexHitbox::rectangle(rng.random_range(0.1..0.8), rng.random_range(0.1..0.8))
            .unwrap();
    }
    loop {
        let n = rng.random_range(3..9);
        let pts: Vec<Vec2> = (0..n)
            .map(|_| Vec2::new(rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4)))
            .collect();
        let hull = crate::collide::convex_hull(&pts);
        if let Ok(h) = ConvexHitbox::new(hull) {
            let c = h.centroid();
            // keep the polygon thick enough to shrink by a few millimeters
            if h.min_edge_distance_from(c) > 0.02 {
                return h;
            }
        }
    }
}

/// Draws a case whose obstacle usually lies near the swept region.
pub fn random_case<R: Rng>(rng: &mut R, kind: ObstacleKind) -> RandomCase {
    let hitbox = random_hitbox(rng);
    let start = Pose::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
    );
    let curvature = if rng.random_bool(0.15) {
        0.0
    } else {
        let mag = 10f64.powf(rng.random_range(-1.3..1.0));
        if rng.random_bool(0.5) {
            mag
        } else {
            -mag
        }
    };
    let mut length = rng.random_range(0.05..2.0);
    let max_turn = 1.95 * std::f64::consts::PI;
    if (curvature * length).abs() > max_turn {
        length = max_turn / curvature.abs();
    }
    let arc = ArcSegment::new(start, curvature, length);
    let at = arc.pose_at_unchecked(rng.random_range(0.0..=length));
    let spread = hitbox.reach() + 0.3;
    let far = rng.random_bool(0.1);
    let body = Vec2::new(
        rng.random_range(-spread..spread),
        rng.random_range(-spread..spread),
    ) * if far { 6.0 } else { 1.0 };
    let anchor = at.transform_point(body);
    let dir = Vec2::from_angle(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI));
    let obstacle = match kind {
        ObstacleKind::Point => Obstacle::Point(anchor),
        ObstacleKind::Segment => {
            let half = rng.random_range(0.01..1.0);
            let off = rng.random_range(-1.0..1.0) * half;
            Obstacle::Segment(anchor + dir * (off - half), anchor + dir * (off + half))
        }
        ObstacleKind::Line => Obstacle::Line {
            point: anchor,
            direction: dir,
        },
    };
    RandomCase {
        arc,
        hitbox,
        obstacle,
    }
}

/// Case `index` of the stream for `seed`; independent of evaluation order.
pub fn seeded_case(seed: u64, index: u64) -> RandomCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let kind = match index % 3 {
        0 => ObstacleKind::Point,
        1 => ObstacleKind::Segment,
        _ => ObstacleKind::Line,
    };
    random_case(&mut rng, kind)
}

#[derive(Debug, Clone)]
pub struct Disagreement {
    pub index: u64,
    pub case: RandomCase,
    pub closed_form: bool,
    pub truth: Clearance,
}

#[derive(Debug, Clone, Default)]
pub struct AgreementReport {
    pub total: usize,
    pub free: usize,
    pub hit: usize,
    pub ambiguous: usize,
    pub disagreements: Vec<Disagreement>,
}

impl AgreementReport {
    pub fn judged(&self) -> usize {
        self.free + self.hit
    }
}

/// Compares `arc_collision` (start check on) with the oracle on `trials` cases.
pub fn agreement_suite(trials: u64, seed: u64, cfg: &OracleConfig) -> AgreementReport {
    let results: Vec<(u64, RandomCase, bool, Clearance)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let case = seeded_case(seed, i);
            let closed = arc_collision(&case.arc, &case.hitbox, &case.obstacle, true);
            let truth = classify(&[case.arc], &case.hitbox, &case.obstacle, cfg);
            (i, case, closed, truth)
        })
        .collect();
    let mut rep = AgreementReport {
        total: results.len(),
        ..Default::default()
    };
    for (index, case, closed_form, truth) in results {
        match truth {
            Clearance::Free => rep.free += 1,
            Clearance::Hit => rep.hit += 1,
            Clearance::Ambiguous => rep.ambiguous += 1,
        }
        let agrees = match truth {
            Clearance::Free => !closed_form,
            Clearance::Hit => closed_form,
            Clearance::Ambiguous => true,
        };
        if !agrees {
            rep.disagreements.push(Disagreement {
                index,
                case,
                closed_form,
                truth,
            });
        }
    }
    rep
}
