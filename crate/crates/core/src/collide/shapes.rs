//! Hitbox polygons, obstacles and the line parametrization `p = x·u + h·u⊥`.

use serde::{Deserialize, Serialize};

use crate::geom::{Pose, Vec2};

/// Minimum cross product between consecutive edges of a valid hitbox.
pub const CONVEXITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ShapeError {
    #[error("hitbox needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("hitbox is not strictly convex and counterclockwise at vertex {0}")]
    NotConvex(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("line direction has zero length")]
    DegenerateLine,
}

/// Convex robot footprint in the body frame, counterclockwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec2>", into = "Vec<Vec2>")]
pub struct ConvexHitbox {
    vertices: Vec<Vec2>,
}

impl TryFrom<Vec<Vec2>> for ConvexHitbox {
    type Error = ShapeError;
    fn try_from(v: Vec<Vec2>) -> Result<Self, ShapeError> {
        Self::new(v)
    }
}

impl From<ConvexHitbox> for Vec<Vec2> {
    fn from(h: ConvexHitbox) -> Self {
        h.vertices
    }
}

impl ConvexHitbox {
    pub fn new(vertices: Vec<Vec2>) -> Result<Self, ShapeError> {
        let n = vertices.len();
        if n < 3 {
            return Err(ShapeError::TooFewVertices(n));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(ShapeError::NonFinite);
        }
        for i in 0..n {
            let e0 = vertices[(i + 1) % n] - vertices[i];
            let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
            if e0.cross(e1) <= CONVEXITY_TOL {
                return Err(ShapeError::NotConvex((i + 1) % n));
            }
        }
        // a star polygon can pass the local test while winding twice
        let winding: f64 = (0..n)
            .map(|i| {
                let e0 = vertices[(i + 1) % n] - vertices[i];
                let e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
                e0.cross(e1).atan2(e0.dot(e1))
            })
            .sum();
        if (winding - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(ShapeError::NotConvex(0));
        }
        Ok(Self { vertices })
    }

    /// Axis-aligned rectangle centered on the body origin.
    pub fn rectangle(length: f64, width: f64) -> Result<Self, ShapeError> {
        let (a, b) = (0.5 * length, 0.5 * width);
        Self::new(vec![
            Vec2::new(-a, -b),
            Vec2::new(a, -b),
            Vec2::new(a, b),
            Vec2::new(-a, b),
        ])
    }

    pub fn square(side: f64) -> Result<Self, ShapeError> {
        Self::rectangle(side, side)
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Largest vertex distance from the body origin.
    pub fn reach(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            vertices: self.vertices.iter().map(|v| v.rotate_cs(c, s)).collect(),
        }
    }

    pub fn translated(&self, d: Vec2) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&v| v + d).collect(),
        }
    }

    /// Mitered outward offset by `m` (inward for negative `m`).
    pub fn inflated(&self, m: f64) -> Result<Self, ShapeError> {
        let n = self.vertices.len();
        let normal = |i: usize| {
            let e = self.vertices[(i + 1) % n] - self.vertices[i];
            Vec2::new(e.y, -e.x).normalized()
        };
        let out = (0..n)
            .map(|i| {
                let n0 = normal((i + n - 1) % n);
                let n1 = normal(i);
                self.vertices[i] + (n0 + n1) * (m / (1.0 + n0.dot(n1)))
            })
            .collect();
        Self::new(out)
    }

    pub fn deflated(&self, m: f64) -> Result<Self, ShapeError> {
        self.inflated(-m)
    }

    /// Signed distance from `p` to the nearest edge line, positive inside.
    pub fn min_edge_distance_from(&self, p: Vec2) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let e = (self.vertices[(i + 1) % n] - a).normalized();
                e.cross(p - a)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn centroid(&self) -> Vec2 {
        let n = self.vertices.len() as f64;
        self.vertices.iter().fold(Vec2::ZERO, |acc, &v| acc + v) * (1.0 / n)
    }
}

/// Static obstacle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstacle {
    Point(Vec2),
    Segment(Vec2, Vec2),
    /// Infinite line through `point` with unit `direction`.
    Line {
        point: Vec2,
        direction: Vec2,
    },
}

impl Obstacle {
    pub fn point(p: Vec2) -> Result<Self, ShapeError> {
        if !p.is_finite() {
            return Err(ShapeError::NonFinite);
        }
        Ok(Obstacle::Point(p))
    }

    pub fn segment(a: Vec2, b: Vec2) -> Result<Self, ShapeError> {
        if !a.is_finite() || !b.is_finite() {
            return Err(ShapeError::NonFinite);
        }
        if a == b {
            return Err(ShapeError::DegenerateSegment);
        }
        Ok(Obstacle::Segment(a, b))
    }

    /// Normalizes `direction`.
    pub fn line(point: Vec2, direction: Vec2) -> Result<Self, ShapeError> {
        if !point.is_finite() || !direction.is_finite() {
            return Err(ShapeError::NonFinite);
        }
        let n = direction.norm();
        if n == 0.0 {
            return Err(ShapeError::DegenerateLine);
        }
        Ok(Obstacle::Line {
            point,
            direction: direction * (1.0 / n),
        })
    }

    /// Distance from `c` to the obstacle.
    pub fn distance_to(&self, c: Vec2) -> f64 {
        match *self {
            Obstacle::Point(p) => p.distance(c),
            Obstacle::Segment(a, b) => point_segment_distance(c, a, b),
            Obstacle::Line { point, direction } => direction.cross(c - point).abs(),
        }
    }

    pub fn transformed(&self, t: &crate::geom::Rigid) -> Obstacle {
        match *self {
            Obstacle::Point(p) => Obstacle::Point(t.apply_point(p)),
            Obstacle::Segment(a, b) => Obstacle::Segment(t.apply_point(a), t.apply_point(b)),
            Obstacle::Line { point, direction } => Obstacle::Line {
                point: t.apply_point(point),
                direction: direction.rotate(t.rotation),
            },
        }
    }
}

pub fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sq();
    let s = if len2 > 0.0 {
        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    p.distance(a + ab * s)
}

/// Line `{x·u + h·u⊥}` with `h ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineParam {
    pub u: Vec2,
    pub h: f64,
}

impl LineParam {
    /// Line through `p` along unit `dir`, flipping `dir` if needed so `h ≥ 0`.
    pub fn through(p: Vec2, dir: Vec2) -> Self {
        let h = dir.perp().dot(p);
        if h < 0.0 {
            Self { u: -dir, h: -h }
        } else {
            Self { u: dir, h }
        }
    }

    /// Coordinate `x` of a point on the line.
    #[inline]
    pub fn coord(&self, p: Vec2) -> f64 {
        self.u.dot(p)
    }

    #[inline]
    pub fn point_at(&self, x: f64) -> Vec2 {
        self.u * x + self.u.perp() * self.h
    }
}

/// World-frame vertices of `h` placed at `p`.
pub fn hitbox_at(h: &ConvexHitbox, p: &Pose) -> Vec<Vec2> {
    let (s, c) = p.theta.sin_cos();
    let o = p.position();
    h.vertices().iter().map(|v| o + v.rotate_cs(c, s)).collect()
}

/// Closed point-in-convex-polygon test; `poly` is counterclockwise.
pub fn point_in_hitbox(poly: &[Vec2], p: Vec2) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let a = poly[i];
        let e = poly[(i + 1) % n] - a;
        let d = p - a;
        e.cross(d) >= -1e-12 * e.norm() * d.norm().max(1.0)
    })
}

/// Strict interior test.
pub(crate) fn point_strictly_in(poly: &[Vec2], p: Vec2) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let a = poly[i];
        let e = poly[(i + 1) % n] - a;
        let d = p - a;
        e.cross(d) > 1e-12 * e.norm() * d.norm().max(1.0)
    })
}
