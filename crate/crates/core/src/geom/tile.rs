//! Solving a single tile from its angles.
//!
//! Corners are `A, B, C, D` counterclockwise with angles `α, β, γ, δ` and
//! edges `AB = a`, `BC = a`, `CD = c`, `DA = b`; type 2 has `c = a`.
//! Angles are in π-radian units, lengths in radians.

use std::f64::consts::PI;

use super::sphere::{arc, cross, dot, interior_angle, normalize, norm, polygon_area, tangent, turn, walk, V3};
use crate::chart::TileType;

/// Grid step for root bracketing over the edge length `a`.
pub const GRID_STEP: f64 = 1e-3;
/// Closure tolerance on the bracketed function.
pub const CLOSURE_TOL: f64 = 1e-12;
/// Margin for numerically sensitive decisions.
pub const SAFETY_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalQuadrangle {
    /// `A, B, C, D`.
    pub vertices: [V3; 4],
    /// `α, β, γ, δ` in π-radian units.
    pub angles: [f64; 4],
    /// `AB, BC, CD, DA` in radians.
    pub edges: [f64; 4],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Concave,
    /// Some angle lies within the safety margin of π.
    Indeterminate,
}

impl SphericalQuadrangle {
    /// Measures a counterclockwise quadrangle.
    pub fn from_points(v: [V3; 4]) -> Self {
        let angles = [0, 1, 2, 3].map(|i| interior_angle(v[(i + 3) % 4], v[i], v[(i + 1) % 4]) / PI);
        let edges = [0, 1, 2, 3].map(|i| arc(v[i], v[(i + 1) % 4]));
        SphericalQuadrangle { vertices: v, angles, edges }
    }

    pub fn a(&self) -> f64 {
        self.edges[0]
    }

    pub fn c(&self) -> f64 {
        self.edges[2]
    }

    pub fn b(&self) -> f64 {
        self.edges[3]
    }

    /// Angle sum minus 2, in π-radian units.
    pub fn excess(&self) -> f64 {
        self.angles.iter().sum::<f64>() - 2.0
    }

    /// Area from the coordinates, in π-radian units.
    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices) / PI
    }

    /// Difference between the angle excess and the area.
    pub fn gauss_bonnet_error(&self) -> f64 {
        (self.excess() - self.area()).abs()
    }

    /// Strict: an angle of exactly π is not convex.
    pub fn is_convex(&self) -> bool {
        self.angles.iter().all(|&x| x < 1.0)
    }

    pub fn convexity(&self) -> Convexity {
        if self.angles.iter().any(|&x| (x - 1.0).abs() <= SAFETY_MARGIN) {
            Convexity::Indeterminate
        } else if self.is_convex() {
            Convexity::Convex
        } else {
            Convexity::Concave
        }
    }

    /// The same tile reflected, relabeled so that it is again counterclockwise
    /// `A, B, C, D`: angles `(δ, γ, β, α)` and edges `(c, a, a, b)`.
    pub fn conjugate(&self) -> SphericalQuadrangle {
        let r = |p: V3| super::sphere::reflect(p);
        let v = self.vertices;
        SphericalQuadrangle::from_points([r(v[3]), r(v[2]), r(v[1]), r(v[0])])
    }
}

fn corners_abc(a: f64, beta: f64) -> (V3, V3, V3) {
    let b_pt: V3 = [0.0, 0.0, 1.0];
    let t0: V3 = [1.0, 0.0, 0.0];
    (walk(b_pt, turn(b_pt, t0, beta * PI), a), b_pt, walk(b_pt, t0, a))
}

fn finish(v: [V3; 4]) -> Option<SphericalQuadrangle> {
    let q = SphericalQuadrangle::from_points(v);
    (q.gauss_bonnet_error() < 1e-9 && q.edges.iter().all(|&e| e > 1e-9 && e < PI)).then_some(q)
}

/// The quadrangle with `AB = BC = a`, `CD = c` and angles `β`, `γ` at `B`, `C`.
pub fn tile_from_sides(a: f64, c: f64, beta: f64, gamma: f64) -> Option<SphericalQuadrangle> {
    let (a_pt, b_pt, c_pt) = corners_abc(a, beta);
    let t_cd = turn(c_pt, tangent(c_pt, b_pt), -gamma * PI);
    finish([a_pt, b_pt, c_pt, walk(c_pt, t_cd, c)])
}

/// The quadrangle with `AB = BC = a` and angles `α, β, γ`, closed at `D`
/// where the arcs leaving `A` and `C` meet. `None` when they do not meet
/// within a half circle or the outline is not a simple quadrangle.
pub fn tile_closing_at(a: f64, alpha: f64, beta: f64, gamma: f64) -> Option<SphericalQuadrangle> {
    let (a_pt, b_pt, c_pt) = corners_abc(a, beta);
    let t_cd = turn(c_pt, tangent(c_pt, b_pt), -gamma * PI);
    let t_ad = turn(a_pt, tangent(a_pt, b_pt), alpha * PI);
    let n = cross(cross(a_pt, t_ad), cross(c_pt, t_cd));
    if norm(n) < 1e-14 {
        return None;
    }
    let x = normalize(n);
    let (sa, sc) = (dot(x, t_ad), dot(x, t_cd));
    let d_pt = if sa > 0.0 && sc > 0.0 {
        x
    } else if sa < 0.0 && sc < 0.0 {
        [-x[0], -x[1], -x[2]]
    } else {
        return None;
    };
    finish([a_pt, b_pt, c_pt, d_pt])
}

/// Roots in `(0, π)` of `f`, bracketed on the grid and refined by bisection.
/// `f` returns `None` where undefined; brackets across such points or across
/// jumps are skipped.
pub fn grid_roots(f: impl Fn(f64) -> Option<f64>, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil() as usize;
    let xs: Vec<f64> = (1..n).map(|i| lo + i as f64 * step).collect();
    let vals: Vec<Option<f64>> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..xs.len().saturating_sub(1) {
        let (Some(u), Some(w)) = (vals[i], vals[i + 1]) else { continue };
        if u == 0.0 {
            roots.push(xs[i]);
            continue;
        }
        if u.signum() == w.signum() || (u - w).abs() > 0.5 {
            continue;
        }
        let (mut l, mut r, mut fl) = (xs[i], xs[i + 1], u);
        for _ in 0..200 {
            let m = 0.5 * (l + r);
            let Some(fm) = f(m) else { break };
            if fm == 0.0 {
                l = m;
                r = m;
                break;
            }
            if fm.signum() == fl.signum() {
                l = m;
                fl = fm;
            } else {
                r = m;
            }
            if r - l < 1e-15 {
                break;
            }
        }
        let root = 0.5 * (l + r);
        if f(root).is_some_and(|v| v.abs() < CLOSURE_TOL.max(1e-10)) {
            roots.push(root);
        }
    }
    roots
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0);
    if y > 1.0 {
        y - 2.0
    } else {
        y
    }
}

/// Closings of the `(α, β, γ)` construction that hit `δ`, as `(a, tile)`.
pub fn delta_closings(angles: [f64; 4]) -> Vec<SphericalQuadrangle> {
    let [alpha, beta, gamma, delta] = angles;
    let f = |a: f64| tile_closing_at(a, alpha, beta, gamma).map(|q| wrap(q.angles[3] - delta));
    grid_roots(f, 0.0, PI, GRID_STEP)
        .into_iter()
        .filter_map(|a| tile_closing_at(a, alpha, beta, gamma))
        .collect()
}

/// Tiles with `AB = BC = CD`, the angles `β, γ` and the area fixed by
/// the angle sum. `α` and `δ` are whatever the closing gives.
pub fn type2_closings(angles: [f64; 4]) -> Vec<SphericalQuadrangle> {
    type2_closings_on_grid(angles, GRID_STEP)
}

/// As [`type2_closings`] with a custom bracketing step.
pub fn type2_closings_on_grid(angles: [f64; 4], step: f64) -> Vec<SphericalQuadrangle> {
    let [_, beta, gamma, _] = angles;
    let excess = angles.iter().sum::<f64>() - 2.0;
    let f = |a: f64| tile_from_sides(a, a, beta, gamma).map(|q| q.excess() - excess);
    grid_roots(f, 0.0, PI, step)
        .into_iter()
        .filter_map(|a| tile_from_sides(a, a, beta, gamma))
        .collect()
}

/// Every tile of the given type with these angles.
///
/// Returns an empty list for angles outside `(0, 2)` or a non-positive
/// excess. Type 2 fixes `β, γ` and the area on a tile with three equal
/// sides, then keeps the closings whose `α` and `δ` agree within `tol`.
/// Type 4 closes the `(α, β, γ)` construction at `δ` and keeps tiles whose
/// three lengths are pairwise distinct beyond `tol`.
pub fn solve_tile(angles: [f64; 4], tile_type: TileType, tol: f64) -> Vec<SphericalQuadrangle> {
    if angles.iter().any(|&x| x <= 0.0 || x >= 2.0) || angles.iter().sum::<f64>() <= 2.0 {
        return Vec::new();
    }
    match tile_type {
        TileType::Type2 => type2_closings(angles)
            .into_iter()
            .filter(|q| (q.angles[0] - angles[0]).abs() < tol && (q.angles[3] - angles[3]).abs() < tol)
            .collect(),
        TileType::Type4 => delta_closings(angles)
            .into_iter()
            .filter(|q| {
                (q.c() - q.a()).abs() > tol && (q.b() - q.a()).abs() > tol && (q.b() - q.c()).abs() > tol
            })
            .collect(),
    }
}

/// Signed type-2 defects `α(closing) - α` with the closing's `a`.
pub fn type2_defects(angles: [f64; 4], step: f64) -> Vec<(f64, f64)> {
    type2_closings_on_grid(angles, step).into_iter().map(|q| (q.a(), q.angles[0] - angles[0])).collect()
}

/// True when the tile matches the angles and the type-2 side pattern.
pub fn is_type2_tile(q: &SphericalQuadrangle, angles: [f64; 4], tol: f64) -> bool {
    (0..4).all(|i| (q.angles[i] - angles[i]).abs() < tol)
        && (q.edges[0] - q.edges[1]).abs() < tol
        && (q.edges[1] - q.edges[2]).abs() < tol
        && (q.b() - q.a()).abs() > tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_face() {
        let t = solve_tile([2.0 / 3.0; 4], TileType::Type2, 1e-9);
        assert!(!t.is_empty());
        let side = (1.0f64 / 3.0).acos();
        let q = t.iter().find(|q| (q.a() - side).abs() < 1e-9).expect("cube face");
        for e in q.edges {
            assert!((e - side).abs() < 1e-9);
        }
        assert!(q.gauss_bonnet_error() < 1e-10);
        assert!(q.is_convex());
    }

    #[test]
    fn no_excess_no_tile() {
        assert!(solve_tile([0.5; 4], TileType::Type2, 1e-9).is_empty());
        assert!(solve_tile([0.4, 0.5, 0.5, 0.5], TileType::Type4, 1e-9).is_empty());
    }

    #[test]
    fn constructed_angles_are_recovered() {
        let q = tile_from_sides(0.9, 0.9, 0.45, 0.7).unwrap();
        for i in 0..3 {
            assert!((q.edges[i] - 0.9).abs() < 1e-12);
        }
        assert!((q.angles[1] - 0.45).abs() < 1e-12);
        assert!((q.angles[2] - 0.7).abs() < 1e-12);
        let found = solve_tile(q.angles, TileType::Type2, 1e-9);
        assert!(found.iter().any(|t| (t.a() - 0.9).abs() < 1e-9 && (t.b() - q.b()).abs() < 1e-9));
    }

    #[test]
    fn convexity_is_strict() {
        let mut q = tile_from_sides(0.9, 0.9, 0.45, 0.7).unwrap();
        assert!(q.is_convex());
        q.angles[2] = 1.0;
        assert!(!q.is_convex());
        assert_eq!(q.convexity(), Convexity::Indeterminate);
        q.angles[2] = 1.2;
        assert_eq!(q.convexity(), Convexity::Concave);
    }

    #[test]
    fn conjugate_swaps_sides() {
        let q = tile_from_sides(0.8, 1.1, 0.5, 0.6).unwrap();
        let r = q.conjugate();
        let want = [q.angles[3], q.angles[2], q.angles[1], q.angles[0]];
        for i in 0..4 {
            assert!((r.angles[i] - want[i]).abs() < 1e-12);
        }
        assert!((r.a() - q.c()).abs() < 1e-12 && (r.c() - q.a()).abs() < 1e-12);
    }
}
