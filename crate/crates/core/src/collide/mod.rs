//! Closed-form swept collision detection for convex polygonal hitboxes moving
//! along arcs and straight segments, against points, segments and lines.

mod index;
mod interval;
mod rotation;
mod shapes;
mod sweep;

pub use index::ObstacleSet;
pub use interval::{Interval, TIntervalSet};
pub use rotation::{
    t_interval_motion, t_intervals_edge, t_intervals_obstacle, RotationError, CENTER_TOL,
    EQUAL_H_TOL,
};
pub use shapes::{
    hitbox_at, point_in_hitbox, point_segment_distance, ConvexHitbox, LineParam, Obstacle,
    ShapeError,
};
pub use sweep::{
    arc_collision, arc_edge_point_entry, biarc_collision, convex_hull, line_hits_polygon,
    path_collision, segment_hits_polygon, straight_collision, straight_sweep_hull, ArcSweep,
    SweepError, STRAIGHT_TOL,
};
