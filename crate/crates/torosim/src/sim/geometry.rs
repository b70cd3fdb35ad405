//! Planar geometry primitives for the locomotion simulator.

use nalgebra::{Point2, Vector2};

pub type Point = Point2<f64>;
pub type Vec2 = Vector2<f64>;

/// Left-hand perpendicular of `v`.
pub fn perp(v: &Vec2) -> Vec2 {
    Vec2::new(-v.y, v.x)
}

pub fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// A wall segment with a stored orientation from `a` to `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(ax: f64, ay: f64, bx: f64, by: f64) -> Self {
        Segment {
            a: Point::new(ax, ay),
            b: Point::new(bx, by),
        }
    }

    pub fn direction(&self) -> Vec2 {
        self.b - self.a
    }

    pub fn length(&self) -> f64 {
        self.direction().norm()
    }

    pub fn closest_point(&self, p: &Point) -> Point {
        let d = self.direction();
        let len2 = d.norm_squared();
        if len2 == 0.0 {
            return self.a;
        }
        let t = ((p - self.a).dot(&d) / len2).clamp(0.0, 1.0);
        self.a + d * t
    }

    pub fn distance(&self, p: &Point) -> f64 {
        (p - self.closest_point(p)).norm()
    }

    /// Closest pair of points `(on self, on other)` between two segments.
    pub fn closest_points_to_segment(&self, other: &Segment) -> (Point, Point) {
        let d1 = self.direction();
        let d2 = other.direction();
        let r = self.a - other.a;
        let a = d1.norm_squared();
        let e = d2.norm_squared();
        let f = d2.dot(&r);

        let (s, t);
        if a == 0.0 && e == 0.0 {
            s = 0.0;
            t = 0.0;
        } else if a == 0.0 {
            s = 0.0;
            t = (f / e).clamp(0.0, 1.0);
        } else {
            let c = d1.dot(&r);
            if e == 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else {
                let b = d1.dot(&d2);
                let denom = a * e - b * b;
                let mut s_candidate = if denom != 0.0 {
                    ((b * f - c * e) / denom).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let mut t_candidate = (b * s_candidate + f) / e;
                if t_candidate < 0.0 {
                    t_candidate = 0.0;
                    s_candidate = (-c / a).clamp(0.0, 1.0);
                } else if t_candidate > 1.0 {
                    t_candidate = 1.0;
                    s_candidate = ((b - c) / a).clamp(0.0, 1.0);
                }
                s = s_candidate;
                t = t_candidate;
            }
        }
        (self.a + d1 * s, other.a + d2 * t)
    }

    /// Distance along the ray `origin + t*dir` (unit `dir`, `t >= 0`) to
    /// the first crossing of this segment, if any.
    pub fn raycast(&self, origin: &Point, dir: &Vec2) -> Option<f64> {
        let v = self.direction();
        let denom = cross(dir, &v);
        if denom.abs() < 1e-15 {
            return None; // parallel (collinear overlap treated as no hit)
        }
        let m = self.a - origin;
        let t = cross(&m, &v) / denom;
        let u = cross(&m, dir) / denom;
        if t >= 0.0 && (0.0..=1.0).contains(&u) {
            Some(t)
        } else {
            None
        }
    }

    /// True when the two segments cross at interior points of both.
    /// Shared endpoints and T-junctions do not count.
    pub fn crosses_properly(&self, other: &Segment) -> bool {
        let d1 = self.direction();
        let d2 = other.direction();
        let o1 = cross(&d1, &(other.a - self.a));
        let o2 = cross(&d1, &(other.b - self.a));
        let o3 = cross(&d2, &(self.a - other.a));
        let o4 = cross(&d2, &(self.b - other.a));
        (o1 > 0.0) != (o2 > 0.0)
            && (o3 > 0.0) != (o4 > 0.0)
            && o1 != 0.0
            && o2 != 0.0
            && o3 != 0.0
            && o4 != 0.0
    }
}

/// True when `p` lies inside or on the boundary of the convex polygon
/// `poly` (vertices in consistent winding order).
pub fn point_in_convex_polygon(p: &Point, poly: &[Point]) -> bool {
    if poly.len() < 3 {
        return false;
    }
    let mut sign = 0.0f64;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let c = cross(&(b - a), &(p - a));
        if c.abs() < 1e-15 {
            continue; // on an edge line
        }
        if sign == 0.0 {
            sign = c.signum();
        } else if c.signum() != sign {
            return false;
        }
    }
    true
}

pub fn polygon_is_convex(poly: &[Point]) -> bool {
    if poly.len() < 3 {
        return false;
    }
    let mut sign = 0.0f64;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let c = poly[(i + 2) % poly.len()];
        let turn = cross(&(b - a), &(c - b));
        if turn.abs() < 1e-15 {
            continue;
        }
        if sign == 0.0 {
            sign = turn.signum();
        } else if turn.signum() != sign {
            return false;
        }
    }
    sign != 0.0
}
