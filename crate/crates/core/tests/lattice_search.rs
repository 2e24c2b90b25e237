use biarc_core::collide::{ConvexHitbox, Obstacle, ObstacleSet};
use biarc_core::{
    biarc_equal_chord, build_waypoints_from_polyline, Cost, Heuristic, PlanSession, PlannerParams,
    Pose, Vec2,
};

fn make(obstacles: Vec<Obstacle>, heuristic: Heuristic) -> PlanSession {
    let path =
        build_waypoints_from_polyline(&[Vec2::new(0.0, 0.0), Vec2::new(2.5, 0.0)], 0.5).unwrap();
    PlanSession::new(
        path,
        ConvexHitbox::square(0.34).unwrap(),
        ObstacleSet::new(obstacles),
        PlannerParams {
            heuristic,
            ..PlannerParams::default()
        },
    )
}

/// Minimum over every column-by-column row assignment.
fn brute_force(s: &mut PlanSession, robot: Pose, h: i32) -> Cost {
    let (i_b, i_e) = s.update_progress(robot);
    let rows: Vec<i32> = (-h..=h).collect();
    let mut best = vec![Cost::INFINITE; rows.len()];
    for (r, &j) in rows.iter().enumerate() {
        let b = biarc_equal_chord(robot, s.node_pose(i_b, j)).unwrap();
        if !s.obstacles().biarc_collides(&b, s.hitbox(), true) {
            best[r] = Cost::finite(1 + j.unsigned_abs());
        }
    }
    for i in i_b..i_e {
        let mut next = vec![Cost::INFINITE; rows.len()];
        for (r, &j) in rows.iter().enumerate() {
            for (q, &k) in rows.iter().enumerate() {
                let c = best[r] + s.edge_cost(i, j, k);
                if c < next[q] {
                    next[q] = c;
                }
            }
        }
        best = next;
    }
    best.into_iter().min().unwrap()
}

fn placements() -> Vec<Vec<Obstacle>> {
    let mut spots = Vec::new();
    for i in 1..=5 {
        for j in -3..=3 {
            let x = i as f64 * 0.5;
            let y = j as f64 * 0.2;
            spots.push(Vec2::new(x, y));
            spots.push(Vec2::new(x - 0.25, y + 0.1));
        }
    }
    let mut out = vec![vec![]];
    for &p in &spots {
        out.push(vec![Obstacle::Point(p)]);
    }
    for (a, &p) in spots.iter().enumerate().step_by(3) {
        for &q in spots.iter().skip(a + 1).step_by(5) {
            out.push(vec![Obstacle::Point(p), Obstacle::Point(q)]);
        }
    }
    out
}

#[test]
fn astar_matches_exhaustive_enumeration() {
    let robot = Pose::new(0.0, 0.0, 0.0);
    let mut checked = 0;
    for obstacles in placements() {
        for h in 0..=3u32 {
            let mut s = make(obstacles.clone(), Heuristic::GoalColumn);
            let expect = brute_force(&mut s, robot, h as i32);
            let got = s.astar(robot, h).map(|r| r.cost).unwrap_or(Cost::INFINITE);
            assert_eq!(got, expect, "h={h} obstacles={obstacles:?}");
            checked += 1;
        }
    }
    assert!(checked > 500);
}

#[test]
fn returned_cost_matches_nodes() {
    let robot = Pose::new(0.0, 0.0, 0.0);
    for obstacles in placements().into_iter().take(80) {
        let mut s = make(obstacles, Heuristic::GoalColumn);
        let Ok(r) = s.plan(robot) else { continue };
        let mut c = 1 + r.nodes[0].1.unsigned_abs();
        for w in r.nodes.windows(2) {
            assert_eq!(w[1].0, w[0].0 + 1);
            c += 1 + w[0].1.unsigned_abs() + w[1].1.unsigned_abs();
        }
        assert_eq!(r.cost, Cost::finite(c));
        for w in r.biarcs.windows(2) {
            assert!(w[0].end().position().distance(w[1].start().position()) < 1e-9);
        }
    }
}

#[test]
fn last_waypoint_heuristic_still_finds_a_path() {
    let robot = Pose::new(0.0, 0.0, 0.0);
    let mut s = make(
        vec![Obstacle::Point(Vec2::new(1.5, 0.0))],
        Heuristic::LastWaypoint,
    );
    let r = s.plan(robot).unwrap();
    assert_eq!(r.nodes.last().unwrap().0, 5);
}

#[test]
fn cache_is_per_plan_call() {
    let robot = Pose::new(0.0, 0.0, 0.0);
    let mut s = make(
        vec![Obstacle::Point(Vec2::new(1.5, 0.0))],
        Heuristic::GoalColumn,
    );
    s.plan(robot).unwrap();
    let first = s.edge_evaluations();
    assert!(s.cached_edges() > 0);
    let mut t = make(
        vec![Obstacle::Point(Vec2::new(1.5, 0.0))],
        Heuristic::GoalColumn,
    );
    t.plan(robot).unwrap();
    t.plan(robot).unwrap();
    assert_eq!(t.edge_evaluations(), 2 * first);
}
