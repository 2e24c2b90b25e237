//! Uniform-grid index over obstacles for disk queries.

use std::collections::HashMap;

use super::shapes::{ConvexHitbox, Obstacle};
use super::sweep::ArcSweep;
use crate::biarc::Biarc;
use crate::geom::Vec2;

/// Segments spanning more cells than this are kept in the always-checked list.
const MAX_CELLS_PER_SEGMENT: i64 = 4096;

/// Obstacles with a spatial hash for fast rejection.
#[derive(Debug, Clone)]
pub struct ObstacleSet {
    obstacles: Vec<Obstacle>,
    cell: f64,
    grid: HashMap<(i64, i64), Vec<u32>>,
    always: Vec<u32>,
}

impl ObstacleSet {
    pub fn new(obstacles: Vec<Obstacle>) -> Self {
        Self::with_cell_size(obstacles, 0.5)
    }

    pub fn with_cell_size(obstacles: Vec<Obstacle>, cell: f64) -> Self {
        assert!(cell > 0.0);
        let mut set = Self {
            obstacles: Vec::new(),
            cell,
            grid: HashMap::new(),
            always: Vec::new(),
        };
        for o in obstacles {
            set.push(o);
        }
        set
    }

    fn key(&self, p: Vec2) -> (i64, i64) {
        (
            (p.x / self.cell).floor() as i64,
            (p.y / self.cell).floor() as i64,
        )
    }

    pub fn push(&mut self, o: Obstacle) {
        let id = self.obstacles.len() as u32;
        self.obstacles.push(o);
        match o {
            Obstacle::Point(p) => self.grid.entry(self.key(p)).or_default().push(id),
            Obstacle::Segment(a, b) => {
                let (ka, kb) = (self.key(a), self.key(b));
                let (x0, x1) = (ka.0.min(kb.0), ka.0.max(kb.0));
                let (y0, y1) = (ka.1.min(kb.1), ka.1.max(kb.1));
                if (x1 - x0 + 1).saturating_mul(y1 - y0 + 1) > MAX_CELLS_PER_SEGMENT {
                    self.always.push(id);
                    return;
                }
                for x in x0..=x1 {
                    for y in y0..=y1 {
                        self.grid.entry((x, y)).or_default().push(id);
                    }
                }
            }
            Obstacle::Line { .. } => self.always.push(id),
        }
    }

    pub fn obstacles(&self) -> &[Obstacle] {
        &self.obstacles
    }

    pub fn len(&self) -> usize {
        self.obstacles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obstacles.is_empty()
    }

    /// Ids of obstacles that may lie within `r` of `c` (a superset).
    pub fn candidates(&self, c: Vec2, r: f64, out: &mut Vec<u32>) {
        out.clear();
        out.extend_from_slice(&self.always);
        let lo = self.key(Vec2::new(c.x - r, c.y - r));
        let hi = self.key(Vec2::new(c.x + r, c.y + r));
        let cells = (hi.0 - lo.0 + 1).saturating_mul(hi.1 - lo.1 + 1);
        if cells as usize > self.grid.len() {
            for ids in self.grid.values() {
                out.extend_from_slice(ids);
            }
        } else {
            for x in lo.0..=hi.0 {
                for y in lo.1..=hi.1 {
                    if let Some(ids) = self.grid.get(&(x, y)) {
                        out.extend_from_slice(ids);
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
    }

    fn sweep_hits(&self, sweep: &ArcSweep, start_containment: bool, buf: &mut Vec<u32>) -> bool {
        let (c, r) = sweep.bounding_disk();
        self.candidates(c, r, buf);
        buf.iter()
            .any(|&id| sweep.collides(&self.obstacles[id as usize], start_containment))
    }

    /// Same result as `biarc_collision` over all obstacles.
    pub fn biarc_collides(&self, b: &Biarc, h: &ConvexHitbox, is_first: bool) -> bool {
        if self.obstacles.is_empty() {
            return false;
        }
        let mut buf = Vec::new();
        self.sweep_hits(&ArcSweep::new(&b.arc_a, h), is_first, &mut buf)
            || self.sweep_hits(&ArcSweep::new(&b.arc_b, h), false, &mut buf)
    }

    pub fn path_collides(&self, plan: &[Biarc], h: &ConvexHitbox) -> bool {
        plan.iter()
            .enumerate()
            .any(|(i, b)| self.biarc_collides(b, h, i == 0))
    }
}
