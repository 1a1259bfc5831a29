//! Planar polygon predicates for sampled closed curves.

use std::f64::consts::PI;

use num_complex::Complex64;

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn orient(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    cross(b - a, p - a)
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

/// Closed-segment intersection test.
pub fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// True when the closed polygon through `pts` has no self-intersection
/// (adjacent edges may share their common vertex only).
pub fn is_simple_closed(pts: &[Complex64]) -> bool {
    let m = pts.len();
    if m < 3 {
        return false;
    }
    for i in 0..m {
        if (pts[i] - pts[(i + 1) % m]).norm() == 0.0 {
            return false;
        }
    }
    // Bounding-box prefilter keeps the O(m²) sweep cheap in practice.
    let boxes: Vec<(f64, f64, f64, f64)> = (0..m)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % m]);
            (a.re.min(b.re), a.re.max(b.re), a.im.min(b.im), a.im.max(b.im))
        })
        .collect();
    for i in 0..m {
        for j in (i + 2)..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            let (bi, bj) = (boxes[i], boxes[j]);
            if bi.1 < bj.0 || bj.1 < bi.0 || bi.3 < bj.2 || bj.3 < bi.2 {
                continue;
            }
            if segments_intersect(pts[i], pts[(i + 1) % m], pts[j], pts[(j + 1) % m]) {
                return false;
            }
        }
    }
    true
}

/// Winding number of the closed polygon around `z`.
pub fn winding_number(pts: &[Complex64], z: Complex64) -> i64 {
    let m = pts.len();
    let mut total = 0.0;
    for i in 0..m {
        let a = pts[i] - z;
        let b = pts[(i + 1) % m] - z;
        total += (b / a).arg();
    }
    (total / (2.0 * PI)).round() as i64
}

pub fn dist_to_segment(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (a + ab * t - p).norm()
}

pub fn dist_to_polygon(pts: &[Complex64], z: Complex64) -> f64 {
    let m = pts.len();
    (0..m)
        .map(|i| dist_to_segment(pts[i], pts[(i + 1) % m], z))
        .fold(f64::INFINITY, f64::min)
}

/// True if two closed polygons cross or touch.
pub fn polygons_intersect(p: &[Complex64], q: &[Complex64]) -> bool {
    let (m, n) = (p.len(), q.len());
    for i in 0..m {
        for j in 0..n {
            if segments_intersect(p[i], p[(i + 1) % m], q[j], q[(j + 1) % n]) {
                return true;
            }
        }
    }
    false
}
