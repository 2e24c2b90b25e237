//! Closed-loop scenario runs: perfect tracking at constant speed with periodic
//! incremental replanning, plus the benchmark metrics.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::biarc::{ArcSegment, Biarc, PathSample};
use crate::collide::{
    hitbox_at, line_hits_polygon, point_in_hitbox, point_segment_distance, segment_hits_polygon,
    ConvexHitbox, Obstacle, ObstacleSet, ShapeError,
};
use crate::geom::{Pose, Vec2};
use crate::lattice::{
    build_waypoints_from_polyline, LatticeError, PlanError, PlanSession, PlannerParams,
    WaypointPath,
};
use crate::replan::ReplanParams;

/// Distance to the final waypoint that counts as arrival.
pub const GOAL_TOL: f64 = 0.05;
/// Trace resolution used for the proximity metric.
pub const TRACE_DS: f64 = 0.01;

pub type Point = [f64; 2];

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ObstacleLists {
    pub points: Vec<Point>,
    pub segments: Vec<[Point; 2]>,
    /// `[point, direction]`.
    pub lines: Vec<[Point; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioParams {
    pub lateral_step: f64,
    pub h_max: u32,
    pub horizon_m: f64,
    pub spacing_m: f64,
    pub speed_mps: f64,
    pub replan_period_s: f64,
    pub eta_l: f64,
    pub eta_k: f64,
    pub seed: u64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            lateral_step: 0.2,
            h_max: 15,
            horizon_m: 25.0,
            spacing_m: 0.5,
            speed_mps: 1.67,
            replan_period_s: 0.05,
            eta_l: 2.0,
            eta_k: 2.0,
            seed: 0,
        }
    }
}

fn default_hitbox() -> Vec<Point> {
    let h = 0.17;
    vec![[-h, -h], [h, -h], [h, h], [-h, h]]
}

/// Scenario in its file form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default = "default_hitbox")]
    pub hitbox: Vec<Point>,
    pub waypoints: Vec<Point>,
    #[serde(default)]
    pub obstacles: ObstacleLists,
    #[serde(default)]
    pub params: ScenarioParams,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid hitbox: {0}")]
    Hitbox(ShapeError),
    #[error("invalid obstacle #{index}: {source}")]
    Obstacle { index: usize, source: ShapeError },
    #[error("invalid waypoints: {0}")]
    Waypoints(LatticeError),
    #[error("parameter {name} out of range: {value}")]
    Param { name: &'static str, value: f64 },
}

/// Typed, validated scenario ready to run.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub path: WaypointPath,
    pub hitbox: ConvexHitbox,
    pub obstacles: Vec<Obstacle>,
    pub planner: PlannerParams,
    pub speed: f64,
    pub period: f64,
}

impl Scenario {
    pub fn with_defaults(name: &str, waypoints: Vec<Point>) -> Self {
        Self {
            name: name.to_string(),
            hitbox: default_hitbox(),
            waypoints,
            obstacles: ObstacleLists::default(),
            params: ScenarioParams::default(),
        }
    }

    pub fn prepare(&self) -> Result<Prepared, ScenarioError> {
        let p = &self.params;
        let positive = |name, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(ScenarioError::Param { name, value })
            }
        };
        positive("lateral_step", p.lateral_step)?;
        positive("horizon_m", p.horizon_m)?;
        positive("spacing_m", p.spacing_m)?;
        positive("speed_mps", p.speed_mps)?;
        positive("replan_period_s", p.replan_period_s)?;
        let replan = ReplanParams::new(p.eta_l, p.eta_k).ok_or(ScenarioError::Param {
            name: "eta",
            value: p.eta_l.min(p.eta_k),
        })?;
        let hitbox = ConvexHitbox::new(self.hitbox.iter().map(|&v| v.into()).collect())
            .map_err(ScenarioError::Hitbox)?;
        let pts: Vec<Vec2> = self.waypoints.iter().map(|&v| v.into()).collect();
        let path =
            build_waypoints_from_polyline(&pts, p.spacing_m).map_err(ScenarioError::Waypoints)?;
        let o = &self.obstacles;
        let built = o
            .points
            .iter()
            .map(|&q| Obstacle::point(q.into()))
            .chain(
                o.segments
                    .iter()
                    .map(|&[a, b]| Obstacle::segment(a.into(), b.into())),
            )
            .chain(
                o.lines
                    .iter()
                    .map(|&[q, d]| Obstacle::line(q.into(), d.into())),
            );
        let mut obstacles = Vec::new();
        for (index, r) in built.enumerate() {
            obstacles.push(r.map_err(|source| ScenarioError::Obstacle { index, source })?);
        }
        Ok(Prepared {
            path,
            hitbox,
            obstacles,
            planner: PlannerParams {
                lateral_step: p.lateral_step,
                h_max: p.h_max,
                horizon_m: p.horizon_m,
                replan,
                ..PlannerParams::default()
            },
            speed: p.speed_mps,
            period: p.replan_period_s,
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    Scenario(#[from] ScenarioError),
    #[error("no initial plan: {0}")]
    NoInitialPlan(PlanError),
    #[error("replanning failed at t = {time:.2} s: {source}")]
    Replan { time: f64, source: PlanError },
    #[error("timed out after {0:.2} s")]
    Timeout(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub plan_ms_median: f64,
    pub plan_ms_max: f64,
    pub path_m: f64,
    pub time_s: f64,
    pub prox_m: f64,
    pub success: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimOptions {
    /// Measure planning wall time; when off the timing fields are zero so
    /// reports are reproducible.
    pub record_timing: bool,
    /// Call the full planner every cycle instead of the incremental replan.
    pub force_full_replan: bool,
}

#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub report: MetricsReport,
    pub error: Option<SimError>,
    /// Executed motion, in order.
    pub executed: Vec<ArcSegment>,
    pub trace: Vec<PathSample>,
    pub cycles: usize,
}

/// Flattens biarcs into their arcs, dropping zero-length pieces.
pub fn arcs_of(biarcs: &[Biarc]) -> Vec<ArcSegment> {
    biarcs
        .iter()
        .flat_map(|b| [b.arc_a, b.arc_b])
        .filter(|a| a.length > 0.0)
        .collect()
}

/// Samples a chain of arcs every `ds` along arclength, always including both
/// ends; `s` is strictly increasing.
pub fn sample_arcs(arcs: &[ArcSegment], ds: f64) -> Vec<PathSample> {
    assert!(ds > 0.0, "sampling step must be positive");
    let total: f64 = arcs.iter().map(|a| a.length).sum();
    let mut out = Vec::with_capacity((total / ds) as usize + 2);
    let mut base = 0.0;
    let mut k = 0u64;
    for a in arcs {
        loop {
            let s = k as f64 * ds;
            if s > base + a.length {
                break;
            }
            out.push(PathSample {
                s,
                pose: a.pose_at_unchecked(s - base),
                curvature: a.curvature,
            });
            k += 1;
        }
        base += a.length;
    }
    if let Some(last) = arcs.last() {
        if out.last().map_or(true, |p| total - p.s > 1e-9) {
            out.push(PathSample {
                s: total,
                pose: last.end_pose(),
                curvature: last.curvature,
            });
        }
    }
    out
}

/// Distance between a convex polygon and an obstacle, zero when they meet.
pub fn polygon_obstacle_distance(poly: &[Vec2], o: &Obstacle) -> f64 {
    let edges = || (0..poly.len()).map(|i| (poly[i], poly[(i + 1) % poly.len()]));
    match *o {
        Obstacle::Point(p) => {
            if point_in_hitbox(poly, p) {
                0.0
            } else {
                edges()
                    .map(|(a, b)| point_segment_distance(p, a, b))
                    .fold(f64::INFINITY, f64::min)
            }
        }
        Obstacle::Segment(a, b) => {
            if segment_hits_polygon(poly, a, b) {
                return 0.0;
            }
            let to_edges = edges()
                .flat_map(|(u, v)| {
                    [
                        point_segment_distance(a, u, v),
                        point_segment_distance(b, u, v),
                    ]
                })
                .fold(f64::INFINITY, f64::min);
            poly.iter()
                .map(|&q| point_segment_distance(q, a, b))
                .fold(to_edges, f64::min)
        }
        Obstacle::Line { point, direction } => {
            if line_hits_polygon(poly, point, direction) {
                0.0
            } else {
                poly.iter()
                    .map(|&q| (q - point).cross(direction).abs())
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Minimum polygon-to-obstacle distance over the trace, resampled so
/// consecutive poses are at most `ds` apart.
pub fn min_proximity(trace: &[Pose], h: &ConvexHitbox, obstacles: &[Obstacle], ds: f64) -> f64 {
    assert!(!trace.is_empty(), "empty trace");
    let mut best = f64::INFINITY;
    let mut visit = |p: &Pose| {
        let poly = hitbox_at(h, p);
        for o in obstacles {
            best = best.min(polygon_obstacle_distance(&poly, o));
        }
    };
    visit(&trace[0]);
    for w in trace.windows(2) {
        let d = w[0].position().distance(w[1].position());
        let n = (d / ds).ceil().max(1.0) as usize;
        for k in 1..=n {
            let f = k as f64 / n as f64;
            if k == n {
                visit(&w[1]);
            } else {
                let p = w[0].position() + (w[1].position() - w[0].position()) * f;
                let dth = crate::geom::wrap_angle(w[1].theta - w[0].theta);
                visit(&Pose::from_position(p, w[0].theta + dth * f));
            }
        }
    }
    best
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Advances along `plan` by up to `dist`, appending the covered pieces.
fn advance(plan: &[Biarc], dist: f64, executed: &mut Vec<ArcSegment>) -> Pose {
    let mut left = dist;
    let mut pose = plan[0].start();
    for a in arcs_of(plan) {
        if left <= 0.0 {
            break;
        }
        let take = left.min(a.length);
        let piece = a.slice(0.0, take);
        pose = piece.end_pose();
        executed.push(piece);
        left -= take;
    }
    pose
}

pub fn run_scenario(sc: &Scenario) -> SimOutcome {
    run_scenario_with(sc, SimOptions::default())
}

pub fn run_scenario_with(sc: &Scenario, opts: SimOptions) -> SimOutcome {
    let prepared = match sc.prepare() {
        Ok(p) => p,
        Err(e) => {
            return SimOutcome {
                report: MetricsReport {
                    plan_ms_median: 0.0,
                    plan_ms_max: 0.0,
                    path_m: 0.0,
                    time_s: 0.0,
                    prox_m: 0.0,
                    success: false,
                    failure: Some(e.to_string()),
                },
                error: Some(e.into()),
                executed: vec![],
                trace: vec![],
                cycles: 0,
            }
        }
    };
    run_prepared(&prepared, opts)
}

pub fn run_prepared(p: &Prepared, opts: SimOptions) -> SimOutcome {
    let goal = p.path.waypoints().last().unwrap().position;
    let timeout = 4.0 * p.path.total_length() / p.speed;
    let mut session = PlanSession::new(
        p.path.clone(),
        p.hitbox.clone(),
        ObstacleSet::new(p.obstacles.clone()),
        p.planner,
    );
    let mut robot = p.path.waypoints()[0].pose();
    let mut timings = Vec::new();
    let mut executed = Vec::new();
    let mut time = 0.0;
    let mut cycles = 0;
    let timed = |t0: Instant| {
        if opts.record_timing {
            t0.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        }
    };

    let t0 = Instant::now();
    let mut error = match session.plan(robot) {
        Ok(_) => None,
        Err(e) => Some(SimError::NoInitialPlan(e)),
    };
    timings.push(timed(t0));

    while error.is_none() {
        let plan = session.current_plan().expect("plan exists").biarcs.clone();
        let step = p.speed * p.period;
        let before: f64 = executed.iter().map(|a: &ArcSegment| a.length).sum();
        robot = advance(&plan, step, &mut executed);
        let moved: f64 = executed.iter().map(|a| a.length).sum::<f64>() - before;
        time += moved / p.speed;
        cycles += 1;
        if robot.position().distance(goal) <= GOAL_TOL {
            break;
        }
        if time > timeout || moved == 0.0 {
            error = Some(SimError::Timeout(time));
            break;
        }
        let t0 = Instant::now();
        let r = if opts.force_full_replan {
            session.plan(robot)
        } else {
            session.incremental_replan(robot)
        };
        timings.push(timed(t0));
        if let Err(source) = r {
            error = Some(SimError::Replan { time, source });
        }
    }

    let trace = if executed.is_empty() {
        vec![PathSample {
            s: 0.0,
            pose: robot,
            curvature: 0.0,
        }]
    } else {
        sample_arcs(&executed, TRACE_DS)
    };
    let poses: Vec<Pose> = trace.iter().map(|t| t.pose).collect();
    let prox = min_proximity(&poses, &p.hitbox, &p.obstacles, TRACE_DS);
    let path_m: f64 = executed.iter().map(|a| a.length).sum();
    let plan_ms_max = timings.iter().copied().fold(0.0, f64::max);
    SimOutcome {
        report: MetricsReport {
            plan_ms_median: median(&mut timings),
            plan_ms_max,
            path_m,
            time_s: time,
            prox_m: if prox.is_finite() { prox } else { f64::MAX },
            success: error.is_none(),
            failure: error.as_ref().map(|e| e.to_string()),
        },
        error,
        executed,
        trace,
        cycles,
    }
}

/// Random desk-scale scenario: a gently winding path with `n_waypoints`
/// waypoints at the default spacing, point clutter on both sides and a few
/// points near the center line that force lateral detours.
pub fn desk_scenario(name: &str, seed: u64, n_waypoints: usize, n_points: usize) -> Scenario {
    assert!(n_waypoints >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = ScenarioParams {
        seed,
        ..ScenarioParams::default()
    };
    let spacing = params.spacing_m;
    let mut pts = vec![Vec2::ZERO];
    let mut heading = 0.0f64;
    for _ in 1..n_waypoints {
        heading += rng.random_range(-0.08..0.08);
        let p = *pts.last().unwrap() + Vec2::from_angle(heading) * spacing;
        pts.push(p);
    }
    let total = spacing * (n_waypoints - 1) as f64;
    let at = |s: f64| {
        let k = ((s / spacing) as usize).min(n_waypoints - 2);
        let f = (s - k as f64 * spacing) / spacing;
        let d = pts[k + 1] - pts[k];
        (pts[k] + d * f, d.normalized().perp())
    };
    let blockers = (n_points / 100).min(((total - 4.0) / 4.0).max(0.0) as usize);
    let mut points = Vec::with_capacity(n_points);
    for b in 0..blockers {
        let s = 2.0 + (b as f64 + rng.random_range(0.2..0.8)) * (total - 4.0) / blockers as f64;
        let (c, n) = at(s);
        points.push(c + n * rng.random_range(-0.05..0.05));
    }
    while points.len() < n_points {
        let s = rng.random_range(0.0..total);
        let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let (c, n) = at(s);
        points.push(c + n * (side * rng.random_range(1.2..3.5)));
    }
    let mut sc = Scenario::with_defaults(name, pts.iter().map(|&p| p.into()).collect());
    sc.obstacles.points = points.iter().map(|&p| p.into()).collect();
    sc.params = params;
    sc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{swept_collision_oracle, OracleConfig};

    fn corridor(len: f64) -> Scenario {
        let mut sc = Scenario::with_defaults("corridor", vec![[0.0, 0.0], [len, 0.0]]);
        sc.obstacles.segments = vec![[[0.0, 1.0], [len, 1.0]], [[0.0, -1.0], [len, -1.0]]];
        sc.params.speed_mps = 1.0;
        sc
    }

    #[test]
    fn straight_corridor_arrives() {
        let out = run_scenario(&corridor(10.0));
        let r = &out.report;
        assert!(r.success, "{:?}", out.error);
        assert!((r.time_s - r.path_m / 1.0).abs() <= 0.05 * r.time_s);
        assert!((r.path_m - 10.0).abs() < 0.06);
        assert!((r.prox_m - (1.0 - 0.17)).abs() < 1e-9, "{}", r.prox_m);
        assert_eq!(r.plan_ms_max, 0.0);
    }

    #[test]
    fn wall_fails_without_plan() {
        let mut sc = corridor(10.0);
        sc.obstacles.lines = vec![[[5.0, 0.0], [0.0, 1.0]]];
        let out = run_scenario(&sc);
        assert!(!out.report.success);
        assert!(matches!(
            out.error,
            Some(SimError::NoInitialPlan(PlanError::NoPath { .. }))
        ));
    }

    #[test]
    fn detour_trace_is_collision_free() {
        let mut sc = corridor(8.0);
        sc.obstacles.points = vec![[3.0, 0.0], [5.0, 0.3]];
        let out = run_scenario(&sc);
        assert!(out.report.success, "{:?}", out.error);
        assert!(out.report.prox_m > 0.0);
        let cfg = OracleConfig::default();
        let p = sc.prepare().unwrap();
        for o in &p.obstacles {
            assert!(
                !swept_collision_oracle(&out.executed, &p.hitbox, o, &cfg, true),
                "{o:?}"
            );
        }
        for w in out.trace.windows(2) {
            assert!(w[1].s > w[0].s);
        }
    }

    #[test]
    fn deterministic_reports() {
        let sc = desk_scenario("desk", 7, 30, 200);
        let a = serde_json::to_string(&run_scenario(&sc).report).unwrap();
        let b = serde_json::to_string(&run_scenario(&sc).report).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn proximity_examples() {
        let unit = ConvexHitbox::square(1.0).unwrap();
        let pose = [Pose::new(0.0, 0.0, 0.0)];
        let far = Obstacle::Point(Vec2::new(1.5, 0.0));
        assert!((min_proximity(&pose, &unit, &[far], 0.01) - 1.0).abs() < 1e-12);
        let touching = Obstacle::Point(Vec2::new(0.5, 0.2));
        assert_eq!(min_proximity(&pose, &unit, &[touching], 0.01), 0.0);
        let seg = Obstacle::segment(Vec2::new(1.0, -3.0), Vec2::new(1.0, 3.0)).unwrap();
        assert!((min_proximity(&pose, &unit, &[seg], 0.01) - 0.5).abs() < 1e-12);
        let line = Obstacle::line(Vec2::new(0.0, 2.0), Vec2::new(1.0, 0.0)).unwrap();
        assert!((min_proximity(&pose, &unit, &[line], 0.01) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn scenario_json_round_trip() {
        let mut sc = desk_scenario("rt", 3, 12, 20);
        sc.obstacles.segments.push([[0.1, 0.2], [0.3, 1.0 / 3.0]]);
        sc.obstacles.lines.push([[1e-17, 2.5], [0.6, 0.8]]);
        let text = serde_json::to_string_pretty(&sc).unwrap();
        let back: Scenario = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sc);
        let minimal: Scenario =
            serde_json::from_str(r#"{"name":"m","waypoints":[[0,0],[1,0]]}"#).unwrap();
        assert_eq!(minimal.params, ScenarioParams::default());
        assert_eq!(minimal.hitbox.len(), 4);
    }
}
