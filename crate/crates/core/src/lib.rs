//! Biarc motion primitives, closed-form swept collision detection for convex
//! hitboxes, and a conformal lattice planner built on top of them.

pub mod biarc;
pub mod collide;
pub mod geom;
pub mod lattice;
pub mod oracle;
pub mod replan;
pub mod sim;

pub use biarc::{
    biarc_equal_chord, biarc_metrics, biarc_through_joint, biarc_with_alpha, chord_frame,
    joint_at_alpha, joint_locus, pose_at, sample_biarc, ArcSegment, Biarc, BiarcMetrics,
    ChordFrame, GeomError, JointLocus, PathSample, PoleKind,
};
pub use collide::{
    arc_collision, biarc_collision, path_collision, ConvexHitbox, Obstacle, ObstacleSet,
    TIntervalSet,
};
pub use geom::{sinc, wrap_angle, Pose, Rigid, Vec2};
pub use lattice::{
    build_waypoints_from_polyline, lattice_node_pose, Cost, Heuristic, Lattice, LatticeError, Node,
    PlanError, PlanResult, PlanSession, PlannerParams, Waypoint, WaypointPath,
};
pub use replan::{replan_candidate, replan_select, ReplanParams, ReplanSource};
pub use sim::{
    run_scenario, run_scenario_with, MetricsReport, Scenario, SimError, SimOptions, SimOutcome,
};
