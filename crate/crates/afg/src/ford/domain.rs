//! Circular-arc polygon `F = D ∩ ∩ ext(C_g)` and its combinatorics.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::DiskMatrix;

/// Tolerance for identifying points computed along different routes.
pub const VERTEX_TOL: f64 = 1e-7;
/// Arcs shorter than this (in radians of the supporting circle) are dropped.
const ARC_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    pub fn point(&self, t: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, t)
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        (z - self.center).norm() < self.radius - tol
    }
}

/// Boundary arc on the isometric circle of `elements[element]`, traversed
/// counterclockwise around the origin from `start` to `end`.
#[derive(Clone, Debug)]
pub struct Arc {
    pub element: usize,
    pub circle: Circle,
    pub t0: f64,
    pub t1: f64,
    pub start: Complex64,
    pub end: Complex64,
}

impl Arc {
    pub fn midpoint(&self) -> Complex64 {
        self.circle.point(0.5 * (self.t0 + self.t1))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeometryOutcome {
    /// Boundary reaches the unit circle or leaves the disk of radius `1 − ε`.
    Refine(String),
}

/// Allowed parameter intervals on circle `i`: inside the unit disk and outside
/// every other disk.
fn free_intervals(i: usize, circles: &[Circle]) -> Vec<(f64, f64)> {
    let c = &circles[i];
    let d0 = c.center.norm();
    // part of the circle inside the unit disk, centred on the direction of −c
    let cos0 = (c.radius * c.radius + d0 * d0 - 1.0) / (2.0 * c.radius * d0);
    if cos0 >= 1.0 {
        return Vec::new();
    }
    let w0 = cos0.max(-1.0).acos();
    let phi0 = (-c.center).arg();
    let mut allowed = vec![(-w0, w0)];
    for (j, o) in circles.iter().enumerate() {
        if j == i || allowed.is_empty() {
            continue;
        }
        let dv = o.center - c.center;
        let d = dv.norm();
        if d >= c.radius + o.radius {
            continue;
        }
        if d <= (c.radius - o.radius).abs() {
            if o.radius > c.radius {
                allowed.clear();
            }
            continue;
        }
        let w = ((c.radius * c.radius + d * d - o.radius * o.radius) / (2.0 * c.radius * d)).clamp(-1.0, 1.0).acos();
        let mut rel = dv.arg() - phi0;
        while rel > PI {
            rel -= 2.0 * PI;
        }
        while rel <= -PI {
            rel += 2.0 * PI;
        }
        for shift in [-2.0 * PI, 0.0, 2.0 * PI] {
            let (lo, hi) = (rel + shift - w, rel + shift + w);
            let mut next = Vec::with_capacity(allowed.len() + 1);
            for &(a, b) in &allowed {
                if hi <= a || lo >= b {
                    next.push((a, b));
                    continue;
                }
                if lo > a {
                    next.push((a, lo));
                }
                if hi < b {
                    next.push((hi, b));
                }
            }
            allowed = next;
        }
    }
    allowed.into_iter().filter(|(a, b)| b - a > ARC_TOL).map(|(a, b)| (a + phi0, b + phi0)).collect()
}

/// Boundary arcs of `F_ε`, sorted counterclockwise and checked to close up
/// inside `|z| < radius_bound`.
pub fn boundary(
    elements: &[DiskMatrix],
    radius_bound: f64,
) -> Result<(Vec<Arc>, Vec<Circle>), GeometryOutcome> {
    let circles: Vec<Circle> = elements.iter().map(|g| g.isometric_circle().expect("origin is not fixed")).collect();
    let mut arcs = Vec::new();
    for i in 0..circles.len() {
        for (t0, t1) in free_intervals(i, &circles) {
            let c = circles[i].clone();
            let (p0, p1) = (c.point(t0), c.point(t1));
            // counterclockwise around the origin
            let (t0, t1, start, end) =
                if (p0.conj() * p1).im >= 0.0 { (t0, t1, p0, p1) } else { (t1, t0, p1, p0) };
            arcs.push(Arc { element: i, circle: c, t0, t1, start, end });
        }
    }
    if arcs.is_empty() {
        return Err(GeometryOutcome::Refine("no boundary arcs".into()));
    }
    arcs.sort_by(|a, b| a.midpoint().arg().partial_cmp(&b.midpoint().arg()).unwrap());
    let n = arcs.len();
    for k in 0..n {
        let (a, b) = (&arcs[k], &arcs[(k + 1) % n]);
        if (a.end - b.start).norm() > VERTEX_TOL {
            return Err(GeometryOutcome::Refine(format!("boundary meets the unit circle near {:.4}", a.end)));
        }
        if a.end.norm() >= radius_bound {
            return Err(GeometryOutcome::Refine(format!("vertex at radius {:.4} ≥ {radius_bound:.4}", a.end.norm())));
        }
    }
    let swept: f64 = arcs.iter().map(|a| (a.start.conj() * a.end).arg()).sum();
    if (swept - 2.0 * PI).abs() > 1e-6 {
        return Err(GeometryOutcome::Refine(format!("arcs sweep {swept:.6} around the origin")));
    }
    Ok((arcs, circles))
}

/// Interior angle of `F` at `v` between arcs on circles `c1` and `c2`.
pub fn interior_angle(v: Complex64, c1: &Circle, c2: &Circle) -> f64 {
    let (n1, n2) = (v - c1.center, v - c2.center);
    let phi = (n1.conj() * n2).arg().abs();
    PI - phi
}

/// Split `arc` at `z`, which must lie on it.
pub fn split_arc(arc: &Arc, z: Complex64) -> Option<(Arc, Arc)> {
    let t = (z - arc.circle.center).arg();
    let (lo, hi) = if arc.t0 < arc.t1 { (arc.t0, arc.t1) } else { (arc.t1, arc.t0) };
    let t = [t - 2.0 * PI, t, t + 2.0 * PI].into_iter().find(|s| *s > lo + ARC_TOL && *s < hi - ARC_TOL)?;
    let zt = arc.circle.point(t);
    let first = Arc { t1: t, end: zt, ..arc.clone() };
    let second = Arc { t0: t, start: zt, ..arc.clone() };
    Some((first, second))
}

/// Hyperbolic area of a polygon from its interior angles.
pub fn polygon_area(angles: &[f64]) -> f64 {
    (angles.len() as f64 - 2.0) * PI - angles.iter().sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_angles() {
        let c1 = Circle { center: Complex64::new(1.0, 0.0), radius: 1.0 };
        let c2 = Circle { center: Complex64::new(0.0, 1.0), radius: 1.0 };
        let v = Complex64::new(0.0, 0.0);
        assert!((interior_angle(v, &c1, &c2) - PI / 2.0).abs() < 1e-12);
        // the same circle on both sides is a straight angle
        assert!((interior_angle(Complex64::new(2.0, 0.0), &c1, &c1) - PI).abs() < 1e-12);
    }

    #[test]
    fn ideal_quadrilateral_area() {
        assert!((polygon_area(&[0.0; 4]) - 2.0 * PI).abs() < 1e-12);
        // (0;2,3,7)-type triangle with angles π/2, π/3, π/7 doubled is 2·(π/42)
        let t = polygon_area(&[PI / 2.0, PI / 3.0, PI / 7.0]);
        assert!((t - PI / 42.0).abs() < 1e-12);
    }
}
