//! Unit-sphere vector kernels. Angles here are in radians.

use std::f64::consts::PI;

pub type V3 = [f64; 3];

pub fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

pub fn normalize(a: V3) -> V3 {
    scale(a, 1.0 / norm(a))
}

/// Great-circle distance, stable for nearby and nearly antipodal points.
pub fn arc(a: V3, b: V3) -> f64 {
    norm(cross(a, b)).atan2(dot(a, b))
}

/// Unit tangent at `p` pointing along the arc toward `q`.
pub fn tangent(p: V3, q: V3) -> V3 {
    normalize(sub(q, scale(p, dot(p, q))))
}

/// Rotates tangent `t` at `p` counterclockwise (seen from outside) by `theta`.
pub fn turn(p: V3, t: V3, theta: f64) -> V3 {
    add(scale(t, theta.cos()), scale(cross(p, t), theta.sin()))
}

/// Point at arc length `s` from `p` in tangent direction `t`.
pub fn walk(p: V3, t: V3, s: f64) -> V3 {
    normalize(add(scale(p, s.cos()), scale(t, s.sin())))
}

/// Counterclockwise angle at `v` from the arc toward `to` to the arc toward `from`,
/// in `[0, 2π)`. For a counterclockwise polygon `from → v → to` this is the
/// interior angle at `v`.
pub fn interior_angle(from: V3, v: V3, to: V3) -> f64 {
    let t_to = tangent(v, to);
    let t_from = tangent(v, from);
    let a = dot(v, cross(t_to, t_from)).atan2(dot(t_to, t_from));
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Signed area of the spherical triangle (positive when counterclockwise).
pub fn triangle_area(a: V3, b: V3, c: V3) -> f64 {
    2.0 * dot(a, cross(b, c)).atan2(1.0 + dot(a, b) + dot(b, c) + dot(c, a))
}

/// Signed area of a polygon by a fan from its first vertex.
pub fn polygon_area(pts: &[V3]) -> f64 {
    (1..pts.len() - 1).map(|i| triangle_area(pts[0], pts[i], pts[i + 1])).sum()
}

/// 3×3 matrix as rows.
pub type M3 = [V3; 3];

pub fn apply(m: &M3, v: V3) -> V3 {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

/// Orthonormal frame with first axis `p` and second axis toward `q`.
fn frame(p: V3, q: V3) -> M3 {
    let e2 = tangent(p, q);
    [p, e2, cross(p, e2)]
}

/// The rotation sending `p` to `x` and the arc `p q` onto the arc `x y`.
pub fn rotation_onto(p: V3, q: V3, x: V3, y: V3) -> M3 {
    let fp = frame(p, q);
    let fx = frame(x, y);
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|k| fx[k][i] * fp[k][j]).sum();
        }
    }
    m
}

/// Reflection through the plane `y = 0`.
pub fn reflect(v: V3) -> V3 {
    [v[0], -v[1], v[2]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octant_triangle() {
        let (x, y, z) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]);
        assert!((triangle_area(x, y, z) - PI / 2.0).abs() < 1e-14);
        assert!((triangle_area(x, z, y) + PI / 2.0).abs() < 1e-14);
        assert!((interior_angle(z, x, y) - PI / 2.0).abs() < 1e-14);
        assert!((interior_angle(y, x, z) - 1.5 * PI).abs() < 1e-14);
        assert!((arc(x, y) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_maps_arc() {
        let p = normalize([1.0, 2.0, 3.0]);
        let q = normalize([-1.0, 0.5, 2.0]);
        let x = normalize([0.0, -1.0, 0.2]);
        let y = walk(x, turn(x, tangent(x, [1.0, 0.0, 0.0]), 0.3), arc(p, q));
        let m = rotation_onto(p, q, x, y);
        assert!(norm(sub(apply(&m, p), x)) < 1e-14);
        assert!(norm(sub(apply(&m, q), y)) < 1e-14);
    }
}
