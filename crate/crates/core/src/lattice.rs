//! Conformal lattice over a waypoint path, searched with A* using equal-chord
//! biarc edges and closed-form collision costs.
//!
//! Column indices are 0-based: waypoint `0` is the first waypoint of the path.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::biarc::{biarc_equal_chord, Biarc};
use crate::collide::{ConvexHitbox, ObstacleSet};
use crate::geom::{Pose, Vec2};
use crate::replan::{replan_select, ReplanParams};

/// Waypoints closer than this along the heading count as passed.
const AHEAD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LatticeError {
    #[error("polyline needs at least two distinct points")]
    DegeneratePolyline,
    #[error("spacing must be positive and finite, got {0}")]
    BadSpacing(f64),
    #[error("node ({i}, {j}) outside the lattice")]
    OutOfRange { i: usize, j: i32 },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlanError {
    #[error("no collision-free path after {attempts} widening attempts")]
    NoPath { attempts: usize },
    #[error("every waypoint has been passed")]
    PathExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub position: Vec2,
    pub theta: f64,
}

impl Waypoint {
    pub fn pose(&self) -> Pose {
        Pose::from_position(self.position, self.theta)
    }
}

/// Reference path with along-path prefix distances.
#[derive(Debug, Clone, PartialEq)]
pub struct WaypointPath {
    waypoints: Vec<Waypoint>,
    spacing: f64,
    cumulative: Vec<f64>,
}

impl WaypointPath {
    pub fn new(waypoints: Vec<Waypoint>, spacing: f64) -> Result<Self, LatticeError> {
        if waypoints.len() < 2 {
            return Err(LatticeError::DegeneratePolyline);
        }
        let mut cumulative = Vec::with_capacity(waypoints.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in waypoints.windows(2) {
            let d = w[0].position.distance(w[1].position);
            if d == 0.0 {
                return Err(LatticeError::DegeneratePolyline);
            }
            acc += d;
            cumulative.push(acc);
        }
        Ok(Self {
            waypoints,
            spacing,
            cumulative,
        })
    }

    pub fn waypoints(&self) -> &[Waypoint] {
        &self.waypoints
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Along-path distance from waypoint 0 to waypoint `i`.
    pub fn distance_to(&self, i: usize) -> f64 {
        self.cumulative[i]
    }

    pub fn total_length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }
}

/// Resamples a polyline at uniform arclength, keeping the final point.
pub fn build_waypoints_from_polyline(
    points: &[Vec2],
    spacing: f64,
) -> Result<WaypointPath, LatticeError> {
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(LatticeError::BadSpacing(spacing));
    }
    let mut pts: Vec<Vec2> = Vec::with_capacity(points.len());
    for &p in points {
        if !p.is_finite() {
            return Err(LatticeError::DegeneratePolyline);
        }
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    }
    if pts.len() < 2 {
        return Err(LatticeError::DegeneratePolyline);
    }
    let seg_len: Vec<f64> = pts.windows(2).map(|w| w[0].distance(w[1])).collect();
    let total: f64 = seg_len.iter().sum();
    let heading = |k: usize| (pts[k + 1] - pts[k]).angle();

    let mut out = Vec::new();
    let mut seg = 0;
    let mut seg_start = 0.0;
    let n = (total / spacing).floor() as usize;
    for step in 0..=n {
        let s = step as f64 * spacing;
        if step > 0 && total - s < 1e-9 * total.max(1.0) {
            break;
        }
        while seg + 1 < seg_len.len() && s >= seg_start + seg_len[seg] {
            seg_start += seg_len[seg];
            seg += 1;
        }
        let f = ((s - seg_start) / seg_len[seg]).clamp(0.0, 1.0);
        out.push(Waypoint {
            position: pts[seg] + (pts[seg + 1] - pts[seg]) * f,
            theta: heading(seg),
        });
    }
    out.push(Waypoint {
        position: *pts.last().unwrap(),
        theta: heading(pts.len() - 2),
    });
    WaypointPath::new(out, spacing)
}

/// Edge or path cost; `INFINITE` marks a blocked edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cost(u32);

impl Cost {
    pub const ZERO: Cost = Cost(0);
    pub const INFINITE: Cost = Cost(u32::MAX);

    pub fn finite(v: u32) -> Self {
        assert!(v < u32::MAX);
        Cost(v)
    }

    pub fn is_finite(self) -> bool {
        self.0 != u32::MAX
    }

    pub fn value(self) -> Option<u32> {
        self.is_finite().then_some(self.0)
    }
}

impl std::ops::Add for Cost {
    type Output = Cost;
    fn add(self, o: Cost) -> Cost {
        if !self.is_finite() || !o.is_finite() {
            return Cost::INFINITE;
        }
        Cost(self.0.saturating_add(o.0))
    }
}

impl std::fmt::Display for Cost {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "inf"),
        }
    }
}

/// Lateral copies of the waypoint path.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub path: WaypointPath,
    /// Lateral step `s` between neighboring rows, meters.
    pub step: f64,
    /// Rows span `-half_width..=half_width`.
    pub half_width: u32,
}

impl Lattice {
    pub fn node_pose(&self, i: usize, j: i32) -> Result<Pose, LatticeError> {
        if i >= self.path.len() || j.unsigned_abs() > self.half_width {
            return Err(LatticeError::OutOfRange { i, j });
        }
        Ok(node_pose_unchecked(&self.path, self.step, i, j))
    }
}

fn node_pose_unchecked(path: &WaypointPath, step: f64, i: usize, j: i32) -> Pose {
    let w = path.waypoints[i];
    let (s, c) = w.theta.sin_cos();
    let off = j as f64 * step;
    Pose::new(w.position.x - off * s, w.position.y + off * c, w.theta)
}

pub fn lattice_node_pose(lat: &Lattice, i: usize, j: i32) -> Result<Pose, LatticeError> {
    lat.node_pose(i, j)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Heuristic {
    /// `i_e − i + |j|`, zero on the goal column.
    GoalColumn,
    /// `N_W − i + |j|`, measured to the last waypoint; not admissible when the horizon ends earlier.
    LastWaypoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannerParams {
    pub lateral_step: f64,
    pub h_max: u32,
    pub horizon_m: f64,
    pub replan: ReplanParams,
    pub heuristic: Heuristic,
}

impl Default for PlannerParams {
    fn default() -> Self {
        Self {
            lateral_step: 0.2,
            h_max: 15,
            horizon_m: 25.0,
            replan: ReplanParams::default(),
            heuristic: Heuristic::GoalColumn,
        }
    }
}

/// A lattice node `(i, j)`.
pub type Node = (usize, i32);

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    /// Robot-to-first-node biarc followed by one biarc per lattice edge.
    pub biarcs: Vec<Biarc>,
    pub nodes: Vec<Node>,
    pub cost: Cost,
    pub plan_ms: f64,
}

impl PlanResult {
    pub fn length(&self) -> f64 {
        self.biarcs.iter().map(|b| b.length()).sum()
    }
}

fn node_cost(j: i32, k: i32) -> Cost {
    Cost(1 + j.unsigned_abs() + k.unsigned_abs())
}

/// Planner state carried between replanning cycles.
#[derive(Debug, Clone)]
pub struct PlanSession {
    path: WaypointPath,
    hitbox: ConvexHitbox,
    obstacles: ObstacleSet,
    params: PlannerParams,
    cache: HashMap<(usize, i32, i32), Cost>,
    current: Option<PlanResult>,
    i_b: usize,
    i_e: usize,
    astar_calls: usize,
    edge_evaluations: usize,
}

impl PlanSession {
    pub fn new(
        path: WaypointPath,
        hitbox: ConvexHitbox,
        obstacles: ObstacleSet,
        params: PlannerParams,
    ) -> Self {
        let mut s = Self {
            path,
            hitbox,
            obstacles,
            params,
            cache: HashMap::new(),
            current: None,
            i_b: 0,
            i_e: 0,
            astar_calls: 0,
            edge_evaluations: 0,
        };
        s.i_e = s.horizon_end(0);
        s
    }

    pub fn path(&self) -> &WaypointPath {
        &self.path
    }

    pub fn hitbox(&self) -> &ConvexHitbox {
        &self.hitbox
    }

    pub fn obstacles(&self) -> &ObstacleSet {
        &self.obstacles
    }

    pub fn params(&self) -> &PlannerParams {
        &self.params
    }

    pub fn current_plan(&self) -> Option<&PlanResult> {
        self.current.as_ref()
    }

    pub fn progress(&self) -> (usize, usize) {
        (self.i_b, self.i_e)
    }

    /// Number of A* searches run since the session started.
    pub fn astar_calls(&self) -> usize {
        self.astar_calls
    }

    /// Number of edge collision checks actually computed (cache misses).
    pub fn edge_evaluations(&self) -> usize {
        self.edge_evaluations
    }

    pub fn cached_edges(&self) -> usize {
        self.cache.len()
    }

    pub fn clear_cache(&mut self) {
        self.cache.clear();
    }

    /// Replaces the obstacles; cached costs are dropped, the current plan is
    /// kept and re-validated by the next incremental replan.
    pub fn set_obstacles(&mut self, obstacles: ObstacleSet) {
        self.obstacles = obstacles;
        self.cache.clear();
    }

    /// Replaces the reference path and forgets all planning state.
    pub fn set_path(&mut self, path: WaypointPath) {
        self.path = path;
        self.cache.clear();
        self.current = None;
        self.i_b = 0;
        self.i_e = self.horizon_end(0);
    }

    pub fn lattice(&self, half_width: u32) -> Lattice {
        Lattice {
            path: self.path.clone(),
            step: self.params.lateral_step,
            half_width,
        }
    }

    pub fn node_pose(&self, i: usize, j: i32) -> Pose {
        node_pose_unchecked(&self.path, self.params.lateral_step, i, j)
    }

    fn horizon_end(&self, i_b: usize) -> usize {
        let last = self.path.len() - 1;
        let base = self.path.distance_to(i_b);
        if self.path.total_length() - base < self.params.horizon_m {
            return last;
        }
        (i_b..=last)
            .find(|&i| self.path.distance_to(i) - base > self.params.horizon_m)
            .unwrap_or(last)
    }

    /// Advances `i_b` to the first waypoint ahead of `robot` and recomputes `i_e`.
    /// When every waypoint is behind the robot, `i_b` is `N_W`.
    pub fn update_progress(&mut self, robot: Pose) -> (usize, usize) {
        let n = self.path.len();
        let p = robot.position();
        let mut i = self.i_b;
        while i < n {
            let w = self.path.waypoints[i];
            if (w.position - p).dot(Vec2::from_angle(w.theta)) > AHEAD_TOL {
                break;
            }
            i += 1;
        }
        self.i_b = i;
        self.i_e = if i < n { self.horizon_end(i) } else { n };
        (self.i_b, self.i_e)
    }

    /// Cost of edge `(i, j) → (i + 1, k)`, cached.
    pub fn edge_cost(&mut self, i: usize, j: i32, k: i32) -> Cost {
        if let Some(&c) = self.cache.get(&(i, j, k)) {
            return c;
        }
        self.edge_evaluations += 1;
        let a = self.node_pose(i, j);
        let b = self.node_pose(i + 1, k);
        let c = match biarc_equal_chord(a, b) {
            Ok(bi) if !self.obstacles.biarc_collides(&bi, &self.hitbox, false) => node_cost(j, k),
            _ => Cost::INFINITE,
        };
        self.cache.insert((i, j, k), c);
        c
    }

    fn heuristic(&self, i: usize, j: i32) -> u32 {
        match self.params.heuristic {
            Heuristic::GoalColumn if i >= self.i_e => 0,
            Heuristic::GoalColumn => (self.i_e - i) as u32 + j.unsigned_abs(),
            Heuristic::LastWaypoint => (self.path.len() - 1 - i) as u32 + j.unsigned_abs(),
        }
    }

    /// Collision-checked start biarc from `robot` to node `(i_b, j)`.
    fn start_edge(&self, robot: Pose, j: i32) -> Option<(Biarc, Cost)> {
        let b = biarc_equal_chord(robot, self.node_pose(self.i_b, j)).ok()?;
        if self.obstacles.biarc_collides(&b, &self.hitbox, true) {
            return None;
        }
        Some((b, Cost(1 + j.unsigned_abs())))
    }

    /// Least-cost lattice path of half-width `h` from `robot` to column `i_e`.
    pub fn astar(&mut self, robot: Pose, h: u32) -> Option<PlanResult> {
        self.astar_calls += 1;
        let t0 = Instant::now();
        if self.i_b >= self.path.len() {
            return None;
        }
        let (i_b, i_e) = (self.i_b, self.i_e);
        let width = 2 * h as usize + 1;
        let cols = i_e - i_b + 1;
        let idx = |i: usize, j: i32| (i - i_b) * width + (j + h as i32) as usize;
        const NONE: usize = usize::MAX;
        let mut g = vec![Cost::INFINITE; cols * width];
        let mut parent = vec![NONE; cols * width];
        let mut closed = vec![false; cols * width];
        let mut start_biarcs: Vec<Option<Biarc>> = vec![None; width];
        let mut open = BinaryHeap::new();
        let hi = h as i32;
        for j in -hi..=hi {
            if let Some((b, c)) = self.start_edge(robot, j) {
                start_biarcs[(j + hi) as usize] = Some(b);
                g[idx(i_b, j)] = c;
                let f = c.0 + self.heuristic(i_b, j);
                open.push(Reverse((f, j.unsigned_abs(), i_b, j)));
            }
        }
        let mut goal = None;
        while let Some(Reverse((_, _, i, j))) = open.pop() {
            let u = idx(i, j);
            if closed[u] {
                continue;
            }
            closed[u] = true;
            if i == i_e {
                goal = Some((i, j));
                break;
            }
            for k in -hi..=hi {
                let v = idx(i + 1, k);
                if closed[v] {
                    continue;
                }
                let c = self.edge_cost(i, j, k);
                if !c.is_finite() {
                    continue;
                }
                let cand = g[u] + c;
                if cand < g[v] {
                    g[v] = cand;
                    parent[v] = u;
                    let f = cand.0 + self.heuristic(i + 1, k);
                    open.push(Reverse((f, k.unsigned_abs(), i + 1, k)));
                }
            }
        }
        let (gi, gj) = goal?;
        let mut nodes = vec![(gi, gj)];
        let mut u = idx(gi, gj);
        while parent[u] != NONE {
            u = parent[u];
            nodes.push((i_b + u / width, (u % width) as i32 - hi));
        }
        nodes.reverse();
        let mut biarcs = Vec::with_capacity(nodes.len());
        biarcs.push(start_biarcs[(nodes[0].1 + hi) as usize].expect("start edge exists"));
        for w in nodes.windows(2) {
            let a = self.node_pose(w[0].0, w[0].1);
            let b = self.node_pose(w[1].0, w[1].1);
            biarcs.push(biarc_equal_chord(a, b).expect("finite edge has a biarc"));
        }
        Some(PlanResult {
            biarcs,
            nodes,
            cost: g[idx(gi, gj)],
            plan_ms: t0.elapsed().as_secs_f64() * 1e3,
        })
    }

    /// Fresh plan with iterative widening `h = 0..=h_max`.
    pub fn plan(&mut self, robot: Pose) -> Result<PlanResult, PlanError> {
        let t0 = Instant::now();
        self.cache.clear();
        self.update_progress(robot);
        if self.i_b >= self.path.len() {
            return Err(PlanError::PathExhausted);
        }
        for h in 0..=self.params.h_max {
            if let Some(mut r) = self.astar(robot, h) {
                r.plan_ms = t0.elapsed().as_secs_f64() * 1e3;
                self.current = Some(r.clone());
                return Ok(r);
            }
        }
        self.current = None;
        Err(PlanError::NoPath {
            attempts: self.params.h_max as usize + 1,
        })
    }

    /// Reuses the previous plan when it is still collision-free, otherwise plans
    /// from scratch.
    pub fn incremental_replan(&mut self, robot: Pose) -> Result<PlanResult, PlanError> {
        let t0 = Instant::now();
        match self.compose_incremental(robot) {
            Some(mut r) => {
                r.plan_ms = t0.elapsed().as_secs_f64() * 1e3;
                self.current = Some(r.clone());
                Ok(r)
            }
            None => {
                let mut r = self.plan(robot)?;
                r.plan_ms = t0.elapsed().as_secs_f64() * 1e3;
                self.current = Some(r.clone());
                Ok(r)
            }
        }
    }

    fn compose_incremental(&mut self, robot: Pose) -> Option<PlanResult> {
        let prev = self.current.clone()?;
        let old_end = *prev.nodes.last()?;
        let (i_b, i_e) = self.update_progress(robot);
        if i_b >= self.path.len() {
            return None;
        }
        let at = prev.nodes.iter().position(|&(i, _)| i == i_b)?;
        let head = replan_select(&prev.biarcs[at], robot, &self.params.replan)?;
        let mut biarcs = Vec::with_capacity(prev.biarcs.len() - at + (i_e - old_end.0));
        biarcs.push(head);
        biarcs.extend_from_slice(&prev.biarcs[at + 1..]);
        let mut nodes: Vec<Node> = prev.nodes[at..].to_vec();
        let mut from = old_end;
        for i in old_end.0 + 1..=i_e {
            let a = self.node_pose(from.0, from.1);
            let b = self.node_pose(i, 0);
            biarcs.push(biarc_equal_chord(a, b).ok()?);
            nodes.push((i, 0));
            from = (i, 0);
        }
        if self.obstacles.path_collides(&biarcs, &self.hitbox) {
            return None;
        }
        let mut cost = Cost(1 + nodes[0].1.unsigned_abs());
        for w in nodes.windows(2) {
            cost = cost + node_cost(w[0].1, w[1].1);
        }
        Some(PlanResult {
            biarcs,
            nodes,
            cost,
            plan_ms: 0.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collide::Obstacle;

    fn straight_path(n: usize, spacing: f64) -> WaypointPath {
        let pts = [
            Vec2::new(0.0, 0.0),
            Vec2::new(spacing * (n - 1) as f64, 0.0),
        ];
        build_waypoints_from_polyline(&pts, spacing).unwrap()
    }

    fn session(path: WaypointPath, obstacles: Vec<Obstacle>) -> PlanSession {
        PlanSession::new(
            path,
            ConvexHitbox::square(0.34).unwrap(),
            ObstacleSet::new(obstacles),
            PlannerParams::default(),
        )
    }

    #[test]
    fn polyline_resampling() {
        let p = straight_path(5, 0.5);
        assert_eq!(p.len(), 5);
        assert!(p.waypoints().iter().all(|w| w.theta == 0.0));
        assert_eq!(p.waypoints()[4].position, Vec2::new(2.0, 0.0));

        let short = build_waypoints_from_polyline(&[Vec2::new(0.0, 0.0), Vec2::new(0.3, 0.0)], 0.5)
            .unwrap();
        assert_eq!(short.len(), 2);

        let l = build_waypoints_from_polyline(
            &[
                Vec2::new(0.0, 0.0),
                Vec2::new(1.0, 0.0),
                Vec2::new(1.0, 1.0),
            ],
            0.25,
        )
        .unwrap();
        assert_eq!(l.len(), 9);
        for (k, w) in l.waypoints().iter().enumerate() {
            let expect = if k < 4 {
                0.0
            } else {
                std::f64::consts::FRAC_PI_2
            };
            assert!((w.theta - expect).abs() < 1e-12, "{k}: {}", w.theta);
        }
        // finite differences follow the headings on each leg
        for w in l.waypoints().windows(2) {
            let d = (w[1].position - w[0].position).angle();
            assert!((d - w[1].theta).abs() < 1e-12 || (d - w[0].theta).abs() < 1e-12);
        }
        assert!(build_waypoints_from_polyline(&[Vec2::ZERO, Vec2::ZERO], 0.5).is_err());
        assert!(build_waypoints_from_polyline(&[Vec2::ZERO, Vec2::new(1.0, 0.0)], 0.0).is_err());
    }

    #[test]
    fn node_poses() {
        let lat = Lattice {
            path: straight_path(4, 0.5),
            step: 0.2,
            half_width: 2,
        };
        let w = lat.path.waypoints()[1].position;
        assert_eq!(lat.node_pose(1, 0).unwrap().position(), w);
        assert!(
            lat.node_pose(1, 1)
                .unwrap()
                .position()
                .distance(w + Vec2::new(0.0, 0.2))
                < 1e-15
        );
        assert!(
            lat.node_pose(1, -2)
                .unwrap()
                .position()
                .distance(w - Vec2::new(0.0, 0.4))
                < 1e-15
        );
        assert!(lat.node_pose(1, 3).is_err());
        assert!(lat.node_pose(4, 0).is_err());
    }

    #[test]
    fn edge_costs() {
        let mut s = session(straight_path(6, 0.5), vec![]);
        assert_eq!(s.edge_cost(1, 0, 0), Cost(1));
        assert_eq!(s.edge_cost(1, 1, -2), Cost(4));
        let evals = s.edge_evaluations();
        s.edge_cost(1, 1, -2);
        assert_eq!(s.edge_evaluations(), evals);
        let mut blocked = session(
            straight_path(6, 0.5),
            vec![Obstacle::Point(Vec2::new(0.75, 0.0))],
        );
        assert_eq!(blocked.edge_cost(1, 0, 0), Cost::INFINITE);
        assert_eq!(Cost::INFINITE + Cost(3), Cost::INFINITE);
    }

    #[test]
    fn progress_and_horizon() {
        let mut s = session(straight_path(21, 0.5), vec![]);
        assert_eq!(s.update_progress(Pose::new(0.0, 0.0, 0.0)), (1, 20));
        let long = straight_path(201, 0.5);
        let mut s = session(long, vec![]);
        let (i_b, i_e) = s.update_progress(Pose::new(0.0, 0.0, 0.0));
        assert_eq!(i_b, 1);
        let d = s.path().distance_to(i_e) - s.path().distance_to(i_b);
        assert!(d > 25.0 && d - 0.5 <= 25.0, "{d}");
        assert!(i_e < 200);
    }

    #[test]
    fn empty_map_plans_center_line() {
        let mut s = session(straight_path(8, 0.5), vec![]);
        let r = s.plan(Pose::new(0.0, 0.0, 0.0)).unwrap();
        assert!(r.nodes.iter().all(|&(_, j)| j == 0));
        assert_eq!(r.cost, Cost(1 + 6));
        assert_eq!(s.astar_calls(), 1);
        assert_eq!(r.biarcs.len(), r.nodes.len());
    }

    #[test]
    fn widening_counts_and_failure() {
        // a point on the center line forces h >= 1
        let mut s = session(
            straight_path(8, 0.5),
            vec![Obstacle::Point(Vec2::new(1.5, 0.0))],
        );
        let r = s.plan(Pose::new(0.0, 0.0, 0.0)).unwrap();
        assert!(r.nodes.iter().any(|&(_, j)| j != 0));
        let calls = s.astar_calls();
        assert!(calls >= 2);
        let wall: Vec<Obstacle> = (-200..=200)
            .map(|k| Obstacle::Point(Vec2::new(1.6, k as f64 * 0.02)))
            .collect();
        let mut s = session(straight_path(8, 0.5), wall);
        assert_eq!(
            s.plan(Pose::new(0.0, 0.0, 0.0)),
            Err(PlanError::NoPath { attempts: 16 })
        );
        assert_eq!(s.astar_calls(), 16);
    }

    #[test]
    fn incremental_reuses_suffix() {
        let mut s = session(
            straight_path(12, 0.5),
            vec![Obstacle::Point(Vec2::new(2.5, 0.05))],
        );
        let first = s.plan(Pose::new(0.0, 0.0, 0.0)).unwrap();
        let robot = first.biarcs[0].pose_at(0.1);
        let next = s.incremental_replan(robot).unwrap();
        assert_eq!(next.nodes, first.nodes);
        assert_eq!(&next.biarcs[1..], &first.biarcs[1..]);
        assert_ne!(next.biarcs[0], first.biarcs[0]);
    }
}
