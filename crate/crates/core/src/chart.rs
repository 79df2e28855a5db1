//! Length and angle decorations of maps.
//!
//! A tile has corners α, β, γ, δ in cyclic order with edge lengths
//! αβ = a, βγ = a, γδ = c and δα = b. Type 2 tiles have a = c; type 4
//! tiles have a, b, c pairwise distinct. A face's decoration is fixed by
//! the position of its b-edge and a chirality bit.

use serde::{Deserialize, Serialize};

use crate::error::ChartError;
use crate::linear::{q, qi, Equation, LinearSystem, Q};
use crate::map::{edge_of, Dart, EdgeId, PlanarMap, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sym {
    Alpha,
    Beta,
    Gamma,
    Delta,
}

impl Sym {
    pub const ALL: [Sym; 4] = [Sym::Alpha, Sym::Beta, Sym::Gamma, Sym::Delta];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Sym {
        Sym::ALL[i]
    }

    /// α ↔ δ, β ↔ γ.
    pub fn conjugate(self) -> Sym {
        Sym::from_index(3 - self.index())
    }

    pub fn name(self) -> &'static str {
        ["alpha", "beta", "gamma", "delta"][self.index()]
    }

    pub fn parse(s: &str) -> Option<Sym> {
        Sym::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Len {
    A,
    B,
    C,
}

impl Len {
    pub fn name(self) -> &'static str {
        ["a", "b", "c"][self as usize]
    }

    pub fn parse(s: &str) -> Option<Len> {
        [Len::A, Len::B, Len::C].into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TileType {
    Type2,
    Type4,
}

impl TileType {
    pub fn number(self) -> u8 {
        match self {
            TileType::Type2 => 2,
            TileType::Type4 => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<TileType> {
        match n {
            2 => Some(TileType::Type2),
            4 => Some(TileType::Type4),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chirality {
    Plus,
    Minus,
}

impl Chirality {
    pub fn flip(self) -> Chirality {
        match self {
            Chirality::Plus => Chirality::Minus,
            Chirality::Minus => Chirality::Plus,
        }
    }
}

/// Corner symbols at offsets `k..k+3` from the b-dart `d_k` of a face walk.
pub fn corner_pattern(ch: Chirality) -> [Sym; 4] {
    match ch {
        Chirality::Plus => [Sym::Delta, Sym::Alpha, Sym::Beta, Sym::Gamma],
        Chirality::Minus => [Sym::Alpha, Sym::Delta, Sym::Gamma, Sym::Beta],
    }
}

/// Edge labels of darts `d_k..d_{k+3}` for a type 4 tile.
pub fn edge_pattern(ch: Chirality) -> [Len; 4] {
    match ch {
        Chirality::Plus => [Len::B, Len::A, Len::A, Len::C],
        Chirality::Minus => [Len::B, Len::C, Len::A, Len::A],
    }
}

/// Number of α, β, γ, δ angles at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexType(pub [u32; 4]);

impl VertexType {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn equation(&self) -> Equation {
        Equation::new(self.0.iter().map(|&n| qi(n as i128)).collect(), qi(2))
    }

    pub fn conjugate(&self) -> VertexType {
        let [a, b, c, d] = self.0;
        VertexType([d, c, b, a])
    }
}

impl std::fmt::Display for VertexType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (i, &n) in self.0.iter().enumerate() {
            let s = ["α", "β", "γ", "δ"][i];
            match n {
                0 => {}
                1 => parts.push(s.to_string()),
                _ => parts.push(format!("{n}{s}")),
            }
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// α + β + γ + δ for a tile of an F-tiling, in π-radian units.
pub fn area_sum(faces: usize) -> Q {
    qi(2) + q(4, faces as i128)
}

/// A map with a b-edge per face and a chirality per face, from which all
/// lengths and angles follow.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    map: PlanarMap,
    tile_type: TileType,
    /// Face walks, fixed at construction.
    faces: Vec<Vec<Dart>>,
    /// Index into the walk of each face's b-dart.
    b_pos: Vec<usize>,
    chirality: Vec<Chirality>,
    lengths: Vec<Len>,
    angles: Vec<Sym>,
}

impl Chart {
    /// Builds a chart from per-edge b flags and per-face chiralities.
    pub fn assemble(
        map: PlanarMap,
        tile_type: TileType,
        b_edges: &[bool],
        chirality: Vec<Chirality>,
    ) -> Result<Chart, ChartError> {
        let faces = map.faces();
        if chirality.len() != faces.len() || b_edges.len() != map.n_edges() {
            return Err(ChartError::Parameter("decoration size mismatch".into()));
        }
        let mut b_pos = Vec::with_capacity(faces.len());
        for (fi, walk) in faces.iter().enumerate() {
            if walk.len() != 4 {
                return Err(ChartError::TileShape { face: fi, why: "face is not a quadrangle".into() });
            }
            let hits: Vec<usize> = (0..4).filter(|&j| b_edges[edge_of(walk[j])]).collect();
            if hits.len() != 1 {
                return Err(ChartError::TileShape {
                    face: fi,
                    why: format!("{} b-edges, expected one", hits.len()),
                });
            }
            b_pos.push(hits[0]);
        }
        let mut angles = vec![Sym::Alpha; map.n_darts()];
        let mut lengths: Vec<Option<Len>> = vec![None; map.n_edges()];
        for (fi, walk) in faces.iter().enumerate() {
            let k = b_pos[fi];
            let syms = corner_pattern(chirality[fi]);
            let lens = edge_pattern(chirality[fi]);
            for j in 0..4 {
                let d = walk[(k + j) % 4];
                angles[d] = syms[j];
                let lab = match (tile_type, lens[j]) {
                    (TileType::Type2, Len::C) => Len::A,
                    (_, l) => l,
                };
                let e = edge_of(d);
                match lengths[e] {
                    None => lengths[e] = Some(lab),
                    Some(prev) if prev == lab => {}
                    Some(prev) => {
                        return Err(ChartError::TileShape {
                            face: fi,
                            why: format!("edge {e} labeled {} and {}", prev.name(), lab.name()),
                        })
                    }
                }
            }
        }
        let lengths = lengths.into_iter().map(|l| l.expect("every edge lies on a face")).collect();
        Ok(Chart { map, tile_type, faces, b_pos, chirality, lengths, angles })
    }

    /// Builds a chart where face `f` carries symbol `sym[f].1` at vertex `sym[f].0`.
    pub fn from_corner_symbols(
        map: PlanarMap,
        tile_type: TileType,
        b_edges: &[bool],
        corner: impl Fn(usize, &[Dart]) -> (Vertex, Sym),
    ) -> Result<Chart, ChartError> {
        let faces = map.faces();
        let mut chirality = Vec::with_capacity(faces.len());
        for (fi, walk) in faces.iter().enumerate() {
            let (v, s) = corner(fi, walk);
            let k = (0..4)
                .find(|&j| b_edges[edge_of(walk[j])])
                .ok_or_else(|| ChartError::TileShape { face: fi, why: "no b-edge".into() })?;
            let pos = (0..4)
                .find(|&j| map.tail(walk[(k + j) % 4]) == v)
                .ok_or_else(|| ChartError::TileShape { face: fi, why: format!("vertex {v} not on face") })?;
            let ch = [Chirality::Plus, Chirality::Minus]
                .into_iter()
                .find(|&c| corner_pattern(c)[pos] == s)
                .ok_or_else(|| ChartError::TileShape {
                    face: fi,
                    why: format!("symbol {} impossible at vertex {v}", s.name()),
                })?;
            chirality.push(ch);
        }
        Chart::assemble(map, tile_type, b_edges, chirality)
    }

    pub fn map(&self) -> &PlanarMap {
        &self.map
    }

    pub fn tile_type(&self) -> TileType {
        self.tile_type
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn chirality(&self) -> &[Chirality] {
        &self.chirality
    }

    /// The b-dart of face `f`.
    pub fn b_dart(&self, f: usize) -> Dart {
        self.faces[f][self.b_pos[f]]
    }

    /// Face walk of `f` rotated to start at its b-dart.
    pub fn face_from_b(&self, f: usize) -> [Dart; 4] {
        let w = &self.faces[f];
        let k = self.b_pos[f];
        [w[k], w[(k + 1) % 4], w[(k + 2) % 4], w[(k + 3) % 4]]
    }

    pub fn length(&self, e: EdgeId) -> Len {
        self.lengths[e]
    }

    pub fn lengths(&self) -> &[Len] {
        &self.lengths
    }

    pub fn b_edges(&self) -> Vec<bool> {
        self.lengths.iter().map(|&l| l == Len::B).collect()
    }

    /// Angle symbol of the corner indexed by dart `d`.
    pub fn angle(&self, d: Dart) -> Sym {
        self.angles[d]
    }

    pub fn angles(&self) -> &[Sym] {
        &self.angles
    }

    pub fn vertex_type(&self, v: Vertex) -> VertexType {
        let mut c = [0u32; 4];
        for &d in self.map.rotation(v) {
            c[self.angles[d].index()] += 1;
        }
        VertexType(c)
    }

    pub fn vertex_types(&self) -> Vec<VertexType> {
        (0..self.map.n_vertices()).map(|v| self.vertex_type(v)).collect()
    }

    /// Distinct vertex types, sorted.
    pub fn distinct_vertex_types(&self) -> Vec<VertexType> {
        let mut t = self.vertex_types();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// Vertex equations plus the area equation; duplicates removed.
    pub fn constraints(&self) -> LinearSystem {
        constraints_for_types(&self.distinct_vertex_types(), self.n_faces())
    }

    /// Swaps α ↔ δ and β ↔ γ everywhere; lengths unchanged.
    ///
    /// Only type 2 tiles are symmetric under this swap, so type 4 charts
    /// are rejected.
    pub fn conjugate(&self) -> Result<Chart, ChartError> {
        if self.tile_type == TileType::Type4 {
            return Err(ChartError::Parameter("conjugation needs a type 2 tile".into()));
        }
        let mut out = self.clone();
        out.chirality = self.chirality.iter().map(|c| c.flip()).collect();
        out.angles = self.angles.iter().map(|s| s.conjugate()).collect();
        Ok(out)
    }

    /// Reverses all rotations; `K^R(u,v,w) = K(w,v,u)`.
    pub fn mirror(&self) -> Chart {
        let map = self.map.mirror();
        let angles: Vec<Sym> = (0..self.map.n_darts()).map(|d| self.angles[self.map.next(d)]).collect();
        let b = self.b_edges();
        let chirality = map
            .faces()
            .iter()
            .map(|walk| {
                let k = (0..4).find(|&j| b[edge_of(walk[j])]).expect("one b-edge per face");
                let got = [0, 1, 2, 3].map(|j| angles[walk[(k + j) % 4]]);
                chirality_of(got)
            })
            .collect();
        let out = Chart::assemble(map, self.tile_type, &b, chirality).expect("mirror of a chart is a chart");
        debug_assert_eq!(out.angles, angles);
        out
    }

    /// Same decoration transported along a map isomorphism given as a dart map.
    pub fn transport(&self, target: &PlanarMap, dart_map: &[Dart], reversing: bool) -> Chart {
        let n = self.map.n_darts();
        let mut angles = vec![Sym::Alpha; n];
        let mut b = vec![false; target.n_edges()];
        for d in 0..n {
            let img = dart_map[d];
            // a reversing map sends the corner before d to the slot after it
            angles[img] = if reversing { self.angles[self.map.next(d)] } else { self.angles[d] };
            b[edge_of(img)] = self.lengths[edge_of(d)] == Len::B;
        }
        let faces = target.faces();
        let chirality = faces
            .iter()
            .map(|walk| {
                let k = (0..4).find(|&j| b[edge_of(walk[j])]).expect("one b-edge per face");
                let got = [0, 1, 2, 3].map(|j| angles[walk[(k + j) % 4]]);
                chirality_of(got)
            })
            .collect();
        Chart::assemble(target.clone(), self.tile_type, &b, chirality).expect("isomorphic image is a chart")
    }

    /// Decoration fingerprint under an automorphism of the underlying map.
    pub fn key_under(&self, aut: &crate::map::Automorphism) -> Vec<u8> {
        let n = self.map.n_darts();
        let mut key = vec![0u8; n];
        for d in 0..n {
            let s = if aut.reversing { self.angles[self.map.next(d)] } else { self.angles[d] };
            key[aut.dart_map[d]] = s as u8 * 3 + self.lengths[edge_of(d)] as u8;
        }
        key
    }

    /// Raw decoration fingerprint: per dart, angle and edge length.
    pub fn key(&self) -> Vec<u8> {
        (0..self.map.n_darts())
            .map(|d| self.angles[d] as u8 * 3 + self.lengths[edge_of(d)] as u8)
            .collect()
    }
}

fn chirality_of(corners: [Sym; 4]) -> Chirality {
    if corners == corner_pattern(Chirality::Plus) {
        Chirality::Plus
    } else {
        assert_eq!(corners, corner_pattern(Chirality::Minus), "corners do not form a tile");
        Chirality::Minus
    }
}

/// Vertex equations for the given types, plus the area equation.
pub fn constraints_for_types(types: &[VertexType], faces: usize) -> LinearSystem {
    let mut sys = LinearSystem::new(4);
    for t in types {
        sys.push_equation(t.equation());
    }
    sys.push_equation(Equation::new(vec![qi(1); 4], area_sum(faces)));
    sys
}

/// b-edges `v_{2i} v_{2i+1}` of a pseudo-double wheel.
pub fn pdw_equatorial_placement(map: &PlanarMap, faces: usize) -> Vec<bool> {
    let mut b = vec![false; map.n_edges()];
    for i in 0..faces / 2 {
        let d = map.dart_between(2 * i, 2 * i + 1).expect("equatorial edge");
        b[edge_of(d)] = true;
    }
    b
}

/// b-edges `N v_{6i}`, `v_{6i+1} S` and `v_{6i+3} v_{6i+4}`.
pub fn pdw_alternating_placement(map: &PlanarMap, faces: usize) -> Option<Vec<bool>> {
    if !faces.is_multiple_of(6) {
        return None;
    }
    let (n, s) = (faces, faces + 1);
    let mut b = vec![false; map.n_edges()];
    for i in 0..faces / 6 {
        for (u, w) in [(n, 6 * i), (6 * i + 1, s), (6 * i + 3, 6 * i + 4)] {
            b[edge_of(map.dart_between(u, w)?)] = true;
        }
    }
    Some(b)
}

/// The pole vertex of each pdw face: north faces first contain `N`.
fn pdw_pole(faces: usize, walk: &[Dart], map: &PlanarMap) -> Vertex {
    walk.iter()
        .map(|&d| map.tail(d))
        .find(|&v| v >= faces)
        .expect("every pdw face contains a pole")
}

/// Equatorial index of the face: `i` for `N_i = (N, v_{2i}, v_{2i+1}, v_{2i+2})`
/// or `S_i = (S, v_{2i+1}, v_{2i+2}, v_{2i+3})`.
pub fn pdw_face_index(faces: usize, walk: &[Dart], map: &PlanarMap) -> (bool, usize) {
    let pole = pdw_pole(faces, walk, map);
    let p = walk.iter().position(|&d| map.tail(d) == pole).expect("pole on face");
    let opposite = map.tail(walk[(p + 2) % 4]);
    // the equatorial vertex opposite the pole is v_{2i+1} (north) or v_{2i+2} (south)
    if pole == faces {
        (true, (opposite - 1) / 2)
    } else {
        (false, ((opposite + faces - 2) % faces) / 2)
    }
}

/// The chart with all b-edges `v_{2i} v_{2i+1}` and β at both poles.
pub fn build_p(faces: usize, tile_type: TileType) -> Result<Chart, ChartError> {
    let map = PlanarMap::pseudo_double_wheel(faces)?;
    let b = pdw_equatorial_placement(&map, faces);
    let m = map.clone();
    Chart::from_corner_symbols(map, tile_type, &b, |_, walk| (pdw_pole(faces, walk, &m), Sym::Beta))
}

/// P's lengths with γ instead of β at the poles of every other face on
/// each side, giving pole type (F/4)(β+γ).
pub fn build_q(faces: usize) -> Result<Chart, ChartError> {
    if !faces.is_multiple_of(4) || faces < 8 {
        return Err(ChartError::Parameter(format!("face count {faces} is not a multiple of four >= 8")));
    }
    let map = PlanarMap::pseudo_double_wheel(faces)?;
    let b = pdw_equatorial_placement(&map, faces);
    let m = map.clone();
    Chart::from_corner_symbols(map, TileType::Type2, &b, |_, walk| {
        let (_, i) = pdw_face_index(faces, walk, &m);
        let s = if i % 2 == 0 { Sym::Gamma } else { Sym::Beta };
        (pdw_pole(faces, walk, &m), s)
    })
}

/// Chart A over the 12-face pseudo-double wheel.
pub fn build_a() -> Chart {
    let faces = 12;
    let map = PlanarMap::pseudo_double_wheel(faces).expect("valid");
    let b = pdw_alternating_placement(&map, faces).expect("12 is a multiple of 6");
    let m = map.clone();
    Chart::from_corner_symbols(map, TileType::Type2, &b, |_, walk| {
        let (north, i) = pdw_face_index(faces, walk, &m);
        let pole = pdw_pole(faces, walk, &m);
        (pole, chart_a_pole_symbol(north, i))
    })
    .expect("chart A is well formed")
}

/// Pole corner symbol of chart A's faces, by hemisphere and index mod 3.
fn chart_a_pole_symbol(north: bool, i: usize) -> Sym {
    CHART_A_POLES[usize::from(!north)][i % 3]
}

const CHART_A_POLES: [[Sym; 3]; 2] = [
    [Sym::Alpha, Sym::Beta, Sym::Delta],
    [Sym::Delta, Sym::Beta, Sym::Alpha],
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_values() {
        assert_eq!(area_sum(6), q(8, 3));
        assert_eq!(area_sum(8), q(5, 2));
        assert_eq!(area_sum(12), q(7, 3));
    }

    #[test]
    fn p12_vertex_types() {
        let c = build_p(12, TileType::Type2).unwrap();
        assert_eq!(c.vertex_type(12), VertexType([0, 6, 0, 0]));
        assert_eq!(c.vertex_type(13), VertexType([0, 6, 0, 0]));
        for v in 0..12 {
            assert_eq!(c.vertex_type(v), VertexType([1, 0, 1, 1]));
        }
        assert_eq!(c.vertex_types()[12].to_string(), "6β");
    }

    #[test]
    fn p_type4_lengths_consistent() {
        for f in [6, 8, 10, 12] {
            let c = build_p(f, TileType::Type4).unwrap();
            let nb = c.lengths().iter().filter(|&&l| l == Len::B).count();
            assert_eq!(nb, f / 2);
            assert!(c.lengths().contains(&Len::C));
        }
    }

    #[test]
    fn q_pole_type() {
        for f in [8, 12, 16] {
            let c = build_q(f).unwrap();
            let k = (f / 4) as u32;
            assert_eq!(c.vertex_type(f), VertexType([0, k, k, 0]));
            assert_eq!(c.vertex_type(f + 1), VertexType([0, k, k, 0]));
        }
        assert!(build_q(10).is_err());
    }

    #[test]
    fn mirror_and_conjugate_are_involutions() {
        for c in [build_p(12, TileType::Type2).unwrap(), build_p(8, TileType::Type4).unwrap(), build_q(8).unwrap()] {
            assert_eq!(c.mirror().mirror(), c);
            if c.tile_type() == TileType::Type2 {
                assert_eq!(c.conjugate().unwrap().conjugate().unwrap(), c);
                assert_eq!(c.conjugate().unwrap().lengths(), c.lengths());
            } else {
                assert!(c.conjugate().is_err());
            }
            let mut a = c.vertex_types();
            let mut b = c.mirror().vertex_types();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn conjugate_moves_poles_to_gamma() {
        let c = build_p(10, TileType::Type2).unwrap().conjugate().unwrap();
        assert_eq!(c.vertex_type(10), VertexType([0, 0, 5, 0]));
    }

    #[test]
    fn every_face_matches_tile_shape() {
        let c = build_p(12, TileType::Type2).unwrap();
        for f in 0..c.n_faces() {
            let w = c.face_from_b(f);
            let s = [c.angle(w[0]), c.angle(w[1])];
            assert!(s == [Sym::Delta, Sym::Alpha] || s == [Sym::Alpha, Sym::Delta]);
        }
    }
}
