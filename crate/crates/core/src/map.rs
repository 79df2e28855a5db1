//! Sphere-embedded maps stored as rotation systems over darts.
//!
//! Edge `e` owns the darts `2e` and `2e + 1`; the twin of a dart is `d ^ 1`.
//! Every vertex carries the cyclic order of its outgoing darts. Faces are
//! never stored: the face successor of `d` is `next(twin(d))`, and the
//! corner indexed by dart `d` is the angle at `tail(d)` between `prev(d)`
//! and `d`. With this convention the corner indexed by `d` lies in the face
//! walk that contains `d`.

use std::collections::VecDeque;

use crate::error::MapError;

pub type Vertex = usize;
pub type Dart = usize;
pub type EdgeId = usize;

#[inline]
pub fn twin(d: Dart) -> Dart {
    d ^ 1
}

#[inline]
pub fn edge_of(d: Dart) -> EdgeId {
    d >> 1
}

/// A connected genus-0 map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarMap {
    tail: Vec<Vertex>,
    next: Vec<Dart>,
    prev: Vec<Dart>,
    rotation: Vec<Vec<Dart>>,
}

/// An angle `(u, v, w)`: the dart `v -> w` directly follows `v -> u` at `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle {
    pub from: Vertex,
    pub at: Vertex,
    pub to: Vertex,
}

/// Pole-relative classification of pseudo-double wheel edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Northern,
    Southern,
    NonMeridian,
}

impl PlanarMap {
    /// Builds a map from per-vertex cyclic dart lists.
    pub fn from_rotation(rotation: Vec<Vec<Dart>>) -> Result<Self, MapError> {
        let n_darts: usize = rotation.iter().map(Vec::len).sum();
        if !n_darts.is_multiple_of(2) {
            return Err(MapError::OddDarts(n_darts));
        }
        let mut seen = vec![0usize; n_darts];
        let mut tail = vec![usize::MAX; n_darts];
        let mut next = vec![0; n_darts];
        let mut prev = vec![0; n_darts];
        for (v, rot) in rotation.iter().enumerate() {
            if rot.is_empty() {
                return Err(MapError::IsolatedVertex(v));
            }
            for (i, &d) in rot.iter().enumerate() {
                if d >= n_darts {
                    return Err(MapError::DartMultiplicity(d, 0));
                }
                seen[d] += 1;
                tail[d] = v;
                let nd = rot[(i + 1) % rot.len()];
                next[d] = nd;
                prev[nd] = d;
            }
        }
        if let Some((d, &k)) = seen.iter().enumerate().find(|(_, &k)| k != 1) {
            return Err(MapError::DartMultiplicity(d, k));
        }
        let map = PlanarMap { tail, next, prev, rotation };
        if !map.is_connected() {
            return Err(MapError::Disconnected);
        }
        let chi = map.euler_characteristic();
        if chi != 2 {
            return Err(MapError::NotSpherical(chi));
        }
        Ok(map)
    }

    /// Builds a simple map from neighbor lists given in rotation order.
    pub fn from_neighbors(adj: &[Vec<Vertex>]) -> Result<Self, MapError> {
        let n = adj.len();
        let mut edge_id = std::collections::HashMap::new();
        let mut rotation = vec![Vec::new(); n];
        let mut n_edges = 0usize;
        for (u, nbrs) in adj.iter().enumerate() {
            for &w in nbrs {
                if w >= n {
                    return Err(MapError::VertexOutOfRange(w));
                }
                if w == u {
                    return Err(MapError::NotSimple(u));
                }
                let key = (u.min(w), u.max(w));
                let e = *edge_id.entry(key).or_insert_with(|| {
                    n_edges += 1;
                    n_edges - 1
                });
                let d = if u < w { 2 * e } else { 2 * e + 1 };
                rotation[u].push(d);
            }
        }
        for (u, nbrs) in adj.iter().enumerate() {
            let mut sorted = nbrs.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(MapError::NotSimple(u));
            }
            for &w in nbrs {
                if !adj[w].contains(&u) {
                    return Err(MapError::Asymmetric(u, w));
                }
            }
        }
        Self::from_rotation(rotation)
    }

    /// The pseudo-double wheel with `faces` faces.
    ///
    /// Equatorial vertices are `0..faces`, the north pole is `faces` and the
    /// south pole `faces + 1`.
    pub fn pseudo_double_wheel(faces: usize) -> Result<Self, MapError> {
        if faces < 6 || !faces.is_multiple_of(2) {
            return Err(MapError::BadFaceCount(faces));
        }
        let f = faces;
        let north = f;
        let south = f + 1;
        let m = |i: i64| -> usize { i.rem_euclid(f as i64) as usize };
        let mut adj = vec![Vec::new(); f + 2];
        adj[north] = (0..f / 2).map(|i| 2 * i).collect();
        // S: edge S v_{2i-1} follows S v_{2i+1}
        adj[south] = (0..f / 2).map(|i| m(-(2 * i as i64) - 1)).collect();
        for i in 0..f as i64 {
            if i % 2 == 0 {
                adj[i as usize] = vec![m(i - 1), m(i + 1), north];
            } else {
                adj[i as usize] = vec![m(i + 1), m(i - 1), south];
            }
        }
        Self::from_neighbors(&adj)
    }

    pub fn n_vertices(&self) -> usize {
        self.rotation.len()
    }

    pub fn n_darts(&self) -> usize {
        self.tail.len()
    }

    pub fn n_edges(&self) -> usize {
        self.tail.len() / 2
    }

    #[inline]
    pub fn tail(&self, d: Dart) -> Vertex {
        self.tail[d]
    }

    #[inline]
    pub fn head(&self, d: Dart) -> Vertex {
        self.tail[d ^ 1]
    }

    /// Rotation successor of `d` around its tail.
    #[inline]
    pub fn next(&self, d: Dart) -> Dart {
        self.next[d]
    }

    #[inline]
    pub fn prev(&self, d: Dart) -> Dart {
        self.prev[d]
    }

    /// Successor of `d` along its face walk.
    #[inline]
    pub fn face_next(&self, d: Dart) -> Dart {
        self.next[d ^ 1]
    }

    pub fn rotation(&self, v: Vertex) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotation
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rotation[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.rotation.iter().map(Vec::len).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.rotation.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.rotation[v].iter().map(move |&d| self.head(d))
    }

    pub fn edge_endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        (self.tail[2 * e], self.tail[2 * e + 1])
    }

    /// The dart `u -> w`, if the edge exists (first one for multi-edges).
    pub fn dart_between(&self, u: Vertex, w: Vertex) -> Option<Dart> {
        self.rotation[u].iter().copied().find(|&d| self.head(d) == w)
    }

    /// The angle indexed by `d`: at `tail(d)`, from `prev(d)` to `d`.
    pub fn angle(&self, d: Dart) -> Angle {
        Angle {
            from: self.head(self.prev[d]),
            at: self.tail[d],
            to: self.head(d),
        }
    }

    /// Face walks as dart sequences, in order of their smallest dart.
    pub fn faces(&self) -> Vec<Vec<Dart>> {
        let mut seen = vec![false; self.n_darts()];
        let mut out = Vec::new();
        for start in 0..self.n_darts() {
            if seen[start] {
                continue;
            }
            let mut walk = Vec::new();
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                walk.push(d);
                d = self.face_next(d);
            }
            out.push(walk);
        }
        out
    }

    /// Face index of every dart, consistent with [`PlanarMap::faces`].
    pub fn face_of_darts(&self) -> Vec<usize> {
        let mut id = vec![usize::MAX; self.n_darts()];
        for (f, walk) in self.faces().iter().enumerate() {
            for &d in walk {
                id[d] = f;
            }
        }
        id
    }

    pub fn n_faces(&self) -> usize {
        self.faces().len()
    }

    fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_faces() as i64
    }

    fn is_connected(&self) -> bool {
        if self.rotation.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.n_vertices()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &d in &self.rotation[v] {
                let w = self.head(d);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut mark = vec![usize::MAX; self.n_vertices()];
        for v in 0..self.n_vertices() {
            for &d in &self.rotation[v] {
                let w = self.head(d);
                if w == v || mark[w] == v {
                    return false;
                }
                mark[w] = v;
            }
        }
        true
    }

    /// Every face walk has length four.
    pub fn is_quadrangulation(&self) -> bool {
        self.faces().iter().all(|f| f.len() == 4)
    }

    /// True when removing any single vertex leaves the graph connected.
    pub fn is_two_connected(&self) -> bool {
        (0..self.n_vertices()).all(|cut| self.connected_without(&[cut]))
    }

    /// True when removing any two vertices leaves the graph connected.
    pub fn is_three_connected(&self) -> bool {
        let n = self.n_vertices();
        if n < 4 {
            return false;
        }
        for a in 0..n {
            for b in a + 1..n {
                if !self.connected_without(&[a, b]) {
                    return false;
                }
            }
        }
        true
    }

    fn connected_without(&self, removed: &[Vertex]) -> bool {
        let n = self.n_vertices();
        let Some(start) = (0..n).find(|v| !removed.contains(v)) else {
            return true;
        };
        let mut seen = vec![false; n];
        for &r in removed {
            seen[r] = true;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = removed.len() + 1;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Dual map: one vertex per face; dart ids and edge ids are preserved.
    pub fn dual(&self) -> PlanarMap {
        let rotation = self.faces();
        let face_id = self.face_of_darts();
        let n_darts = self.n_darts();
        let mut next = vec![0; n_darts];
        let mut prev = vec![0; n_darts];
        for d in 0..n_darts {
            let nd = self.face_next(d);
            next[d] = nd;
            prev[nd] = d;
        }
        PlanarMap { tail: face_id, next, prev, rotation }
    }

    /// Reverses every vertex rotation.
    pub fn mirror(&self) -> PlanarMap {
        let rotation = self
            .rotation
            .iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        PlanarMap {
            tail: self.tail.clone(),
            next: self.prev.clone(),
            prev: self.next.clone(),
            rotation,
        }
    }

    /// Renames vertices by `perm` and edges by `edge_perm` (old id -> new id),
    /// swapping the two darts of every edge with `flip` set.
    pub fn relabel(&self, perm: &[Vertex], edge_perm: &[EdgeId], flip: &[bool]) -> PlanarMap {
        let map_dart = |d: Dart| -> Dart {
            let e = edge_perm[edge_of(d)];
            let side = (d & 1) ^ usize::from(flip[edge_of(d)]);
            2 * e + side
        };
        let mut rotation = vec![Vec::new(); self.n_vertices()];
        for v in 0..self.n_vertices() {
            rotation[perm[v]] = self.rotation[v].iter().map(|&d| map_dart(d)).collect();
        }
        PlanarMap::from_rotation(rotation).expect("relabeling preserves validity")
    }

    /// Neighbor lists in rotation order (meaningful for simple maps).
    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        (0..self.n_vertices()).map(|v| self.neighbors(v).collect()).collect()
    }

    /// Edge kind for a pseudo-double wheel produced by [`PlanarMap::pseudo_double_wheel`].
    pub fn pdw_edge_kind(&self, e: EdgeId) -> EdgeKind {
        let f = self.n_vertices() - 2;
        let (u, w) = self.edge_endpoints(e);
        if u == f || w == f {
            EdgeKind::Northern
        } else if u == f + 1 || w == f + 1 {
            EdgeKind::Southern
        } else {
            EdgeKind::NonMeridian
        }
    }

    /// All dart bijections onto `other` commuting with twin and with the
    /// rotation (or its inverse when `reversing`).
    pub fn isomorphisms(&self, other: &PlanarMap, reversing: bool, limit: usize) -> Vec<Automorphism> {
        let mut out = Vec::new();
        if self.n_darts() != other.n_darts() || self.n_vertices() != other.n_vertices() {
            return out;
        }
        if self.n_darts() == 0 {
            return out;
        }
        let mut deg_self = self.degrees();
        let mut deg_other = other.degrees();
        deg_self.sort_unstable();
        deg_other.sort_unstable();
        if deg_self != deg_other {
            return out;
        }
        let d0 = 0;
        let mut buf = vec![usize::MAX; self.n_darts()];
        for target in 0..other.n_darts() {
            if self.degree(self.tail[d0]) != other.degree(other.tail[target]) {
                continue;
            }
            if let Some(iso) = self.extend_iso(other, d0, target, reversing, &mut buf) {
                out.push(iso);
                if out.len() >= limit {
                    break;
                }
            }
        }
        out
    }

    fn extend_iso(
        &self,
        other: &PlanarMap,
        d0: Dart,
        t0: Dart,
        reversing: bool,
        f: &mut [Dart],
    ) -> Option<Automorphism> {
        f.iter_mut().for_each(|x| *x = usize::MAX);
        let mut used = vec![false; other.n_darts()];
        f[d0] = t0;
        used[t0] = true;
        let mut queue = VecDeque::from([d0]);
        while let Some(d) = queue.pop_front() {
            let img = f[d];
            let rot_img = if reversing { other.prev[img] } else { other.next[img] };
            for (src, dst) in [(self.next[d], rot_img), (d ^ 1, img ^ 1)] {
                if f[src] == usize::MAX {
                    if used[dst] {
                        return None;
                    }
                    f[src] = dst;
                    used[dst] = true;
                    queue.push_back(src);
                } else if f[src] != dst {
                    return None;
                }
            }
        }
        if f.contains(&usize::MAX) {
            return None;
        }
        let mut vertex_map = vec![usize::MAX; self.n_vertices()];
        for d in 0..self.n_darts() {
            let v = self.tail[d];
            let w = other.tail[f[d]];
            if vertex_map[v] == usize::MAX {
                vertex_map[v] = w;
            } else if vertex_map[v] != w {
                return None;
            }
        }
        Some(Automorphism { vertex_map, dart_map: f.to_vec(), reversing })
    }

    /// Orientation-preserving automorphisms (identity first).
    pub fn automorphisms(&self) -> Vec<Automorphism> {
        let mut all = self.isomorphisms(self, false, usize::MAX);
        all.sort_by_key(|a| a.dart_map[0]);
        // dart 0 -> 0 is the identity, which sorts first
        all
    }

    /// Orientation-preserving and orientation-reversing automorphisms.
    pub fn automorphisms_with_reflections(&self) -> Vec<Automorphism> {
        let mut all = self.automorphisms();
        all.extend(self.isomorphisms(self, true, usize::MAX));
        all
    }

    pub fn is_isomorphic(&self, other: &PlanarMap) -> bool {
        !self.isomorphisms(other, false, 1).is_empty()
    }

    /// Isomorphic as unoriented maps (reflections permitted).
    pub fn is_isomorphic_unoriented(&self, other: &PlanarMap) -> bool {
        self.is_isomorphic(other) || !self.isomorphisms(other, true, 1).is_empty()
    }

    /// Deterministic code that is equal for two maps iff they are
    /// isomorphic as oriented maps.
    pub fn canonical_code(&self) -> CanonicalCode {
        self.canonical_with_starts(&[false]).0
    }

    /// Code invariant under isomorphisms that may reverse orientation.
    pub fn canonical_code_unoriented(&self) -> CanonicalCode {
        self.canonical_with_starts(&[false, true]).0
    }

    /// Minimal code together with every (start dart, reversed) achieving it.
    pub fn canonical_with_starts(&self, orientations: &[bool]) -> (CanonicalCode, Vec<(Dart, bool)>) {
        let deg = self.degrees();
        let key = |d: Dart| (deg[self.tail[d]], deg[self.head(d)]);
        let best_key = (0..self.n_darts()).map(key).max().unwrap_or((0, 0));
        let mut best: Option<Vec<u32>> = None;
        let mut starts = Vec::new();
        let mut num = vec![u32::MAX; self.n_darts()];
        let mut order = Vec::with_capacity(self.n_darts());
        let mut cur = Vec::with_capacity(2 * self.n_darts());
        for &rev in orientations {
            for s in (0..self.n_darts()).filter(|&d| key(d) == best_key) {
                match self.code_from(s, rev, best.as_deref(), &mut num, &mut order, &mut cur) {
                    std::cmp::Ordering::Less => {
                        best = Some(cur.clone());
                        starts.clear();
                        starts.push((s, rev));
                    }
                    std::cmp::Ordering::Equal => starts.push((s, rev)),
                    std::cmp::Ordering::Greater => {}
                }
            }
        }
        let mut code = vec![
            self.n_vertices() as u32,
            self.n_edges() as u32,
            best_key.0 as u32,
            best_key.1 as u32,
        ];
        code.extend(best.unwrap_or_default());
        (CanonicalCode(code), starts)
    }

    /// Dart-BFS code from `start`; compares against `bound` on the fly.
    fn code_from(
        &self,
        start: Dart,
        rev: bool,
        bound: Option<&[u32]>,
        num: &mut [u32],
        order: &mut Vec<Dart>,
        cur: &mut Vec<u32>,
    ) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        num.iter_mut().for_each(|x| *x = u32::MAX);
        order.clear();
        cur.clear();
        num[start] = 0;
        order.push(start);
        let mut k = 0;
        let mut state = if bound.is_none() { Ordering::Less } else { Ordering::Equal };
        while k < order.len() {
            let d = order[k];
            let r = if rev { self.prev[d] } else { self.next[d] };
            for x in [r, d ^ 1] {
                if num[x] == u32::MAX {
                    num[x] = order.len() as u32;
                    order.push(x);
                }
            }
            for val in [num[r], num[d ^ 1]] {
                if state == Ordering::Equal {
                    let b = bound.expect("bound present while equal")[cur.len()];
                    state = val.cmp(&b);
                    if state == Ordering::Greater {
                        return state;
                    }
                }
                cur.push(val);
            }
            k += 1;
        }
        state
    }
}

/// Opaque canonical code; compare for isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(pub Vec<u32>);

impl CanonicalCode {
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|x| x.to_le_bytes()).collect()
    }
}

/// A map automorphism (or isomorphism) as a dart bijection with the
/// induced vertex bijection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub vertex_map: Vec<Vertex>,
    pub dart_map: Vec<Dart>,
    /// True when the cyclic orders are reversed.
    pub reversing: bool,
}

impl Automorphism {
    pub fn identity(map: &PlanarMap) -> Self {
        Automorphism {
            vertex_map: (0..map.n_vertices()).collect(),
            dart_map: (0..map.n_darts()).collect(),
            reversing: false,
        }
    }

    /// `self` after `other`: `d -> self(other(d))`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            dart_map: other.dart_map.iter().map(|&d| self.dart_map[d]).collect(),
            reversing: self.reversing ^ other.reversing,
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut vertex_map = vec![0; self.vertex_map.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            vertex_map[w] = v;
        }
        let mut dart_map = vec![0; self.dart_map.len()];
        for (d, &e) in self.dart_map.iter().enumerate() {
            dart_map[e] = d;
        }
        Automorphism { vertex_map, dart_map, reversing: self.reversing }
    }

    pub fn is_identity(&self) -> bool {
        self.dart_map.iter().enumerate().all(|(i, &d)| i == d)
    }

    pub fn edge_image(&self, e: EdgeId) -> EdgeId {
        edge_of(self.dart_map[2 * e])
    }

    /// Checks the defining commutation relations against `map`.
    pub fn is_valid_for(&self, map: &PlanarMap) -> bool {
        (0..map.n_darts()).all(|d| {
            let img = self.dart_map[d];
            let rot = if self.reversing { map.prev(img) } else { map.next(img) };
            self.dart_map[d ^ 1] == img ^ 1
                && self.dart_map[map.next(d)] == rot
                && self.vertex_map[map.tail(d)] == map.tail(img)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Octahedron with vertices 0/5 as poles and equator 1-2-3-4.
    pub(crate) fn octahedron() -> PlanarMap {
        PlanarMap::from_neighbors(&[
            vec![1, 2, 3, 4],
            vec![0, 4, 5, 2],
            vec![0, 1, 5, 3],
            vec![0, 2, 5, 4],
            vec![0, 3, 5, 1],
            vec![1, 4, 3, 2],
        ])
        .unwrap()
    }

    #[test]
    fn pdw_counts() {
        for f in [6usize, 8, 10, 12, 14] {
            let m = PlanarMap::pseudo_double_wheel(f).unwrap();
            assert_eq!(m.n_vertices(), f + 2);
            assert_eq!(m.n_edges(), 2 * f);
            assert_eq!(m.n_faces(), f);
            assert!(m.is_quadrangulation());
            assert!(m.is_simple());
            assert_eq!(m.degree(f), f / 2);
            assert_eq!(m.degree(f + 1), f / 2);
            assert!((0..f).all(|v| m.degree(v) == 3));
        }
        let m = PlanarMap::pseudo_double_wheel(10).unwrap();
        assert_eq!(m.n_vertices() as i64 - m.n_edges() as i64 + m.n_faces() as i64, 2);
    }

    #[test]
    fn pdw_rejects_bad_sizes() {
        assert_eq!(PlanarMap::pseudo_double_wheel(7), Err(MapError::BadFaceCount(7)));
        assert_eq!(PlanarMap::pseudo_double_wheel(4), Err(MapError::BadFaceCount(4)));
    }

    #[test]
    fn pdw_cyclic_orders_follow_definition() {
        let f = 10;
        let m = PlanarMap::pseudo_double_wheel(f).unwrap();
        let n = f;
        // N v_{2i+2} is next to N v_{2i}
        for i in 0..f / 2 {
            let d = m.dart_between(n, 2 * i).unwrap();
            assert_eq!(m.head(m.next(d)), (2 * i + 2) % f);
        }
        // at v_{2i}: v_{2i}N follows v_{2i}v_{2i+1}, which follows v_{2i}v_{2i-1}
        for i in 0..f / 2 {
            let v = 2 * i;
            let d = m.dart_between(v, (v + f - 1) % f).unwrap();
            assert_eq!(m.head(m.next(d)), v + 1);
            assert_eq!(m.head(m.next(m.next(d))), n);
        }
        // S v_{2i-1} follows S v_{2i+1}
        for i in 0..f / 2 {
            let d = m.dart_between(n + 1, 2 * i + 1).unwrap();
            assert_eq!(m.head(m.next(d)), (2 * i + f - 1) % f);
        }
        // at v_{2i+1}: S follows v_{2i}, which follows v_{2i+2}
        for i in 0..f / 2 {
            let v = 2 * i + 1;
            let d = m.dart_between(v, (v + 1) % f).unwrap();
            assert_eq!(m.head(m.next(d)), v - 1);
            assert_eq!(m.head(m.next(m.next(d))), n + 1);
        }
    }

    #[test]
    fn faces_partition_darts() {
        for m in [PlanarMap::pseudo_double_wheel(6).unwrap(), PlanarMap::pseudo_double_wheel(12).unwrap()] {
            let faces = m.faces();
            assert!(faces.iter().all(|f| f.len() == 4));
            let mut all: Vec<_> = faces.concat();
            all.sort_unstable();
            assert_eq!(all, (0..m.n_darts()).collect::<Vec<_>>());
        }
        assert_eq!(PlanarMap::pseudo_double_wheel(12).unwrap().n_faces(), 12);
        let oct = octahedron();
        let faces = oct.faces();
        assert_eq!(faces.len(), 8);
        assert!(faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn dual_of_cube_is_octahedron() {
        let d = PlanarMap::pseudo_double_wheel(6).unwrap().dual();
        assert_eq!(d.n_vertices(), 6);
        assert_eq!(d.n_edges(), 12);
        assert_eq!(d.n_faces(), 8);
        assert!((0..6).all(|v| d.degree(v) == 4));
        assert!(d.is_isomorphic(&octahedron()));
    }

    #[test]
    fn dual_involution() {
        let m = PlanarMap::pseudo_double_wheel(8).unwrap();
        let dd = m.dual().dual();
        assert!(dd.is_isomorphic(&m));
        assert_eq!(m.dual().n_vertices(), 8);
        assert_eq!(m.dual().n_edges(), 16);
    }

    #[test]
    fn automorphism_group_orders() {
        let cube = PlanarMap::pseudo_double_wheel(6).unwrap();
        assert_eq!(cube.automorphisms().len(), 24);
        let p8 = PlanarMap::pseudo_double_wheel(8).unwrap();
        let auts = p8.automorphisms();
        assert_eq!(auts.len(), 8);
        assert!(auts[0].is_identity());
        assert!(auts.iter().all(|a| a.is_valid_for(&p8)));
        assert_eq!(p8.automorphisms_with_reflections().len(), 16);
    }

    #[test]
    fn mirror_is_involution_and_pdw_reflexible() {
        for f in [6, 8, 12] {
            let m = PlanarMap::pseudo_double_wheel(f).unwrap();
            let r = m.mirror();
            assert_eq!(r.mirror(), m);
            assert_eq!(r.n_faces(), m.n_faces());
            assert!(r.is_isomorphic(&m));
        }
        let m = PlanarMap::pseudo_double_wheel(12).unwrap();
        assert_eq!(m.canonical_code(), m.mirror().canonical_code());
    }

    #[test]
    fn canonical_codes_separate_sizes() {
        let a = PlanarMap::pseudo_double_wheel(6).unwrap().canonical_code();
        let b = PlanarMap::pseudo_double_wheel(8).unwrap().canonical_code();
        assert_ne!(a, b);
    }

    #[test]
    fn angle_convention() {
        let m = PlanarMap::pseudo_double_wheel(8).unwrap();
        for d in 0..m.n_darts() {
            let a = m.angle(d);
            let u_dart = m.dart_between(a.at, a.from).unwrap();
            assert_eq!(m.head(m.next(u_dart)), a.to);
        }
    }
}
