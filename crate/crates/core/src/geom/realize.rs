//! Realizing a chart on the unit sphere by propagating one solved tile.
//!
//! Face walks are realized counterclockwise seen from outside, so vertex
//! rotations come out clockwise. Plus faces carry the tile, minus faces its
//! reflection.

use std::collections::VecDeque;
use std::f64::consts::PI;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::sphere::{apply, arc, reflect, rotation_onto, V3};
use super::tile::{delta_closings, solve_tile, type2_closings, type2_defects, SphericalQuadrangle};
use crate::chart::{Chart, Chirality, TileType};
use crate::error::GeomError;
use crate::linear::{Feasibility, Q};
use crate::map::edge_of;

/// Bracketing step for the parameter scan; roots are refined by bisection.
const SCAN_STEP: f64 = 1e-2;

#[derive(Clone, Copy, Debug)]
pub struct RealizeOptions {
    pub tolerance: f64,
    pub seed_face: usize,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        RealizeOptions { tolerance: 1e-9, seed_face: 0 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SphericalTiling {
    pub angles: [f64; 4],
    /// Tile edges `AB, BC, CD, DA` in radians.
    pub edges: [f64; 4],
    pub positions: Vec<V3>,
    /// Faces as vertex cycles, counterclockwise from outside.
    pub faces: Vec<Vec<usize>>,
    pub b_edges: Vec<(usize, usize)>,
    pub seed_face: usize,
    /// Largest disagreement between propagated copies of a vertex.
    pub closure_residual: f64,
    /// Per face, largest deviation of its angles and sides from the tile.
    pub congruence_residuals: Vec<f64>,
    /// Largest `|Σ angles - 2π|` over vertices, in radians.
    pub vertex_angle_error: f64,
    /// Largest per-face `|excess - area|`, in π-radian units.
    pub gauss_bonnet_error: f64,
    pub concave: bool,
}

impl SphericalTiling {
    pub fn max_residual(&self) -> f64 {
        let cong = self.congruence_residuals.iter().copied().fold(0.0, f64::max);
        self.closure_residual.max(cong).max(self.vertex_angle_error)
    }
}

fn tile_copy(tile: &SphericalQuadrangle, ch: Chirality) -> [V3; 4] {
    match ch {
        Chirality::Plus => tile.vertices,
        Chirality::Minus => tile.vertices.map(reflect),
    }
}

/// Realizes `chart` with the given angle values (π-radian units).
pub fn realize_chart(chart: &Chart, angles: [f64; 4], opts: RealizeOptions) -> Result<SphericalTiling, GeomError> {
    let mut tiles = solve_tile(angles, chart.tile_type(), opts.tolerance);
    if tiles.is_empty() {
        // keep the closest closing so the failure carries a residual
        tiles = match chart.tile_type() {
            TileType::Type2 => {
                let mut t = type2_closings(angles);
                t.sort_by(|p, q| (p.angles[0] - angles[0]).abs().total_cmp(&(q.angles[0] - angles[0]).abs()));
                t.truncate(1);
                t
            }
            TileType::Type4 => delta_closings(angles),
        };
    }
    if tiles.is_empty() {
        return Err(GeomError::NoTile(angles));
    }
    let mut best: Option<(SphericalTiling, Option<usize>)> = None;
    for tile in &tiles {
        let got = propagate(chart, tile, angles, opts);
        if best.as_ref().is_none_or(|(b, _)| got.0.max_residual() < b.max_residual()) {
            best = Some(got);
        }
    }
    let (tiling, edge) = best.expect("at least one tile");
    let residual = tiling.max_residual();
    if residual.is_nan() || residual >= opts.tolerance {
        return Err(GeomError::Closure { residual, edge });
    }
    check_distinct(&tiling.positions)?;
    Ok(tiling)
}

fn propagate(
    chart: &Chart,
    tile: &SphericalQuadrangle,
    angles: [f64; 4],
    opts: RealizeOptions,
) -> (SphericalTiling, Option<usize>) {
    let map = chart.map();
    let n_faces = chart.n_faces();
    let seed = opts.seed_face.min(n_faces - 1);
    let face_of = map.face_of_darts();
    let mut pos: Vec<Option<V3>> = vec![None; map.n_vertices()];
    let mut placed = vec![false; n_faces];
    let mut residual: f64 = 0.0;
    let mut first_bad: Option<usize> = None;
    let mut note = |r: f64, e: usize, residual: &mut f64| {
        *residual = residual.max(r);
        if r >= opts.tolerance && first_bad.is_none() {
            first_bad = Some(e);
        }
    };
    let copy0 = tile_copy(tile, chart.chirality()[seed]);
    for &d in &chart.faces()[seed] {
        pos[map.tail(d)] = Some(copy0[chart.angle(d).index()]);
    }
    placed[seed] = true;
    let mut queue = VecDeque::from([seed]);
    while let Some(f) = queue.pop_front() {
        for &d in &chart.faces()[f] {
            let t = d ^ 1;
            let g = face_of[t];
            if placed[g] {
                continue;
            }
            placed[g] = true;
            let copy = tile_copy(tile, chart.chirality()[g]);
            let (u, w) = (map.tail(t), map.head(t));
            let (xu, xw) = (pos[u].expect("placed"), pos[w].expect("placed"));
            let pu = copy[chart.angle(t).index()];
            let pw = copy[chart.angle(map.face_next(t)).index()];
            note((arc(pu, pw) - arc(xu, xw)).abs(), edge_of(t), &mut residual);
            let rot = rotation_onto(pu, pw, xu, xw);
            for &e in &chart.faces()[g] {
                let p = apply(&rot, copy[chart.angle(e).index()]);
                match pos[map.tail(e)] {
                    Some(x) => note(arc(p, x), edge_of(e), &mut residual),
                    None => pos[map.tail(e)] = Some(p),
                }
            }
            queue.push_back(g);
        }
    }
    let positions: Vec<V3> = pos.into_iter().map(|p| p.expect("connected map")).collect();
    let faces: Vec<Vec<usize>> = chart.faces().iter().map(|w| w.iter().map(|&d| map.tail(d)).collect()).collect();
    let mut sums = vec![0.0; map.n_vertices()];
    let mut congruence = Vec::with_capacity(n_faces);
    let mut gb: f64 = 0.0;
    for (fi, walk) in chart.faces().iter().enumerate() {
        let pts = [0, 1, 2, 3].map(|j| positions[map.tail(walk[j])]);
        let q = SphericalQuadrangle::from_points(pts);
        gb = gb.max(q.gauss_bonnet_error());
        let mut dev: f64 = 0.0;
        for j in 0..4 {
            let sym = chart.angle(walk[j]).index();
            dev = dev.max((q.angles[j] - angles[sym]).abs() * PI);
            sums[map.tail(walk[j])] += q.angles[j] * PI;
            // side j joins corners j and j+1; compare with the tile's side between the same symbols
            let s2 = chart.angle(walk[(j + 1) % 4]).index();
            let copy = tile_copy(tile, chart.chirality()[fi]);
            dev = dev.max((q.edges[j] - arc(copy[sym], copy[s2])).abs());
        }
        congruence.push(dev);
    }
    let vertex_angle_error = sums.iter().map(|s| (s - 2.0 * PI).abs()).fold(0.0, f64::max);
    // edges sharing a length label must share a length
    let mut by_label: [Option<(f64, f64)>; 3] = [None; 3];
    for e in 0..map.n_edges() {
        let (u, w) = map.edge_endpoints(e);
        let len = arc(positions[u], positions[w]);
        let slot = &mut by_label[chart.length(e) as usize];
        *slot = Some(slot.map_or((len, len), |(lo, hi)| (lo.min(len), hi.max(len))));
        if let Some((lo, hi)) = *slot {
            note(hi - lo, e, &mut residual);
        }
    }
    let b = chart.b_edges();
    let b_edges = (0..map.n_edges()).filter(|&e| b[e]).map(|e| map.edge_endpoints(e)).collect();
    let tiling = SphericalTiling {
        angles,
        edges: tile.edges,
        positions,
        faces,
        b_edges,
        seed_face: seed,
        closure_residual: residual,
        congruence_residuals: congruence,
        vertex_angle_error,
        gauss_bonnet_error: gb,
        concave: !tile.is_convex(),
    };
    (tiling, first_bad)
}

fn check_distinct(pos: &[V3]) -> Result<(), GeomError> {
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            if arc(pos[i], pos[j]) < 1e-6 {
                return Err(GeomError::Combinatorics(format!("vertices {i} and {j} coincide")));
            }
        }
    }
    Ok(())
}

fn to_f64(x: &[Q]) -> Vec<f64> {
    x.iter().map(|v| v.to_f64().expect("finite rational")).collect()
}

/// Angle values on the exact solution space of `fz` where a tile of the
/// chart's type closes. Type 4 tiles close for any interior point; type 2
/// needs `c = a`, found by bisection along lines through the sample.
pub fn closing_angles(chart: &Chart, fz: &Feasibility, convex: bool, tol: f64) -> Result<[f64; 4], GeomError> {
    let sample = fz.sample.as_ref().ok_or(GeomError::NoParameters)?;
    let x0 = to_f64(sample);
    let x0: [f64; 4] = [x0[0], x0[1], x0[2], x0[3]];
    if chart.tile_type() == TileType::Type4 || fz.basis.is_empty() {
        return if solve_tile(x0, chart.tile_type(), tol).is_empty() {
            Err(GeomError::NoParameters)
        } else {
            Ok(x0)
        };
    }
    let hi = if convex { 1.0 } else { 2.0 };
    let basis: Vec<Vec<f64>> = fz.basis.iter().map(|v| to_f64(v)).collect();
    let mut dirs = basis.clone();
    if basis.len() > 1 {
        dirs.push((0..4).map(|i| basis.iter().map(|v| v[i]).sum()).collect());
        dirs.push((0..4).map(|i| basis[0][i] - basis[1][i]).collect());
    }
    for dir in dirs {
        if let Some(x) = root_on_line(x0, &dir, hi, tol) {
            return Ok(x);
        }
    }
    Err(GeomError::NoParameters)
}

fn root_on_line(x0: [f64; 4], dir: &[f64], hi: f64, tol: f64) -> Option<[f64; 4]> {
    let (mut lo_t, mut hi_t) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..4 {
        if dir[i].abs() < 1e-15 {
            continue;
        }
        let (t1, t2) = ((0.0 - x0[i]) / dir[i], (hi - x0[i]) / dir[i]);
        lo_t = lo_t.max(t1.min(t2));
        hi_t = hi_t.min(t1.max(t2));
    }
    if !(lo_t.is_finite() && hi_t.is_finite() && lo_t < hi_t) {
        return None;
    }
    let at = |t: f64| -> [f64; 4] { [0, 1, 2, 3].map(|i| x0[i] + t * dir[i]) };
    let steps = 400;
    let ts: Vec<f64> = (1..steps).map(|k| lo_t + (hi_t - lo_t) * k as f64 / steps as f64).collect();
    let vals: Vec<Vec<(f64, f64)>> = ts.iter().map(|&t| type2_defects(at(t), SCAN_STEP)).collect();
    for k in 0..ts.len() - 1 {
        for &(a1, d1) in &vals[k] {
            let Some(&(_, d2)) = vals[k + 1].iter().filter(|(a2, _)| (a2 - a1).abs() < 0.05).min_by(|p, q| (p.0 - a1).abs().total_cmp(&(q.0 - a1).abs())) else {
                continue;
            };
            if d1.signum() == d2.signum() || (d1 - d2).abs() > 0.5 {
                continue;
            }
            if let Some(x) = bisect_defect(&at, ts[k], ts[k + 1], a1, d1, tol) {
                return Some(x);
            }
        }
    }
    None
}

fn bisect_defect(at: &dyn Fn(f64) -> [f64; 4], mut l: f64, mut r: f64, mut a: f64, mut dl: f64, tol: f64) -> Option<[f64; 4]> {
    let branch = |t: f64, a: f64| -> Option<(f64, f64)> {
        type2_defects(at(t), SCAN_STEP)
            .into_iter()
            .filter(|(x, _)| (x - a).abs() < 0.05)
            .min_by(|p, q| (p.0 - a).abs().total_cmp(&(q.0 - a).abs()))
    };
    for _ in 0..200 {
        let m = 0.5 * (l + r);
        let (am, dm) = branch(m, a)?;
        if dm.signum() == dl.signum() {
            l = m;
            dl = dm;
            a = am;
        } else {
            r = m;
        }
        if dm.abs() < 1e-14 || r - l < 1e-16 {
            break;
        }
    }
    let x = at(0.5 * (l + r));
    (!solve_tile(x, TileType::Type2, tol).is_empty()).then_some(x)
}
