//! Planar primitives shared by scene validation and geodesic enumeration.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Polar angle in `(-pi, pi]`.
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn lerp(self, other: Self, t: f64) -> Self {
        self + (other - self) * t
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Twice the signed area of the triangle `abc` (positive when counterclockwise).
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// Signed polygon area, positive for counterclockwise order.
pub fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum::<f64>()
        / 2.0
}

/// Normalizes an angle into `[0, 2pi)`.
pub fn wrap_2pi(a: f64) -> f64 {
    let t = std::f64::consts::TAU;
    let r = a.rem_euclid(t);
    if r >= t {
        0.0
    } else {
        r
    }
}

/// Mirror image of `p` across the line through `a` and `b`.
pub fn reflect_across(p: Point2, a: Point2, b: Point2) -> Point2 {
    let d = b - a;
    let t = (p - a).dot(d) / d.dot(d);
    let foot = a + d * t;
    foot * 2.0 - p
}

/// Distance from `p` to the closed segment `ab`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// Parameters `(t, u)` of the intersection of lines `p + t (q - p)` and
/// `a + u (b - a)`, or `None` when parallel.
pub fn line_intersection(p: Point2, q: Point2, a: Point2, b: Point2) -> Option<(f64, f64)> {
    let r = q - p;
    let s = b - a;
    let denom = r.cross(s);
    if denom.abs() < 1e-300 {
        return None;
    }
    let w = a - p;
    Some((w.cross(s) / denom, w.cross(r) / denom))
}

/// Closed polygon given by vertices in order. Only geometric queries live here;
/// validation lives in the scene module.
#[derive(Debug, Clone)]
pub struct Polygon<'a> {
    pub vertices: &'a [Point2],
    /// Absolute tolerance used for on-boundary decisions.
    pub eps: f64,
}

impl<'a> Polygon<'a> {
    pub fn new(vertices: &'a [Point2]) -> Self {
        let scale = bbox_diameter(vertices).max(1e-300);
        Self {
            vertices,
            eps: 1e-9 * scale,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn on_boundary(&self, p: Point2) -> bool {
        (0..self.len()).any(|i| {
            let (a, b) = self.edge(i);
            point_segment_distance(p, a, b) <= self.eps
        })
    }

    /// Crossing-number test; points within `eps` of the boundary are not inside.
    pub fn strictly_contains(&self, p: Point2) -> bool {
        if self.on_boundary(p) {
            return false;
        }
        let mut inside = false;
        let n = self.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

pub fn bbox_diameter(points: &[Point2]) -> f64 {
    let (w, h) = bbox_extent(points);
    w.hypot(h)
}

pub fn bbox_extent(points: &[Point2]) -> (f64, f64) {
    if points.is_empty() {
        return (0.0, 0.0);
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    (x1 - x0, y1 - y0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_is_involution() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        let p = Point2::new(1.0, 1.0);
        let q = reflect_across(p, a, b);
        assert_eq!(q, Point2::new(1.0, -1.0));
        let back = reflect_across(q, a, b);
        assert!(back.dist(p) < 1e-15);
    }

    #[test]
    fn square_containment() {
        let sq = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ];
        let poly = Polygon::new(&sq);
        assert!(poly.strictly_contains(Point2::new(0.5, 0.5)));
        assert!(!poly.strictly_contains(Point2::new(0.5, 0.0)));
        assert!(!poly.strictly_contains(Point2::new(1.5, 0.5)));
        assert!((signed_area(&sq) - 1.0).abs() < 1e-15);
    }
}
