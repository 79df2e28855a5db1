//! Isomorph-free generation of simple quadrangulations with minimum degree 3.
//!
//! Every member is reached from a pseudo-double wheel by local expansions:
//!
//! * [`Expansion::Insert`] deletes an edge `uw` and inserts a degree-3 vertex
//!   `x` joined to `u` and to the two vertices opposite `u` in the faces on
//!   either side of `uw`.
//! * [`Expansion::Split`] splits a vertex `v` along two non-consecutive
//!   incident edges `vb`, `vd` into `a` and `c`, creating the face `abcd`.
//! * [`Expansion::Cube`] places a smaller quadrangle inside a face and joins
//!   corresponding corners, adding four faces.
//!
//! Generation proceeds level by level in the face count. All children of a
//! level are deduplicated by their reflection-invariant canonical code, so
//! the output is independent of thread count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::map::{CanonicalCode, Dart, PlanarMap, Vertex};

/// Which quadrangulation class to emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadClass {
    /// Simple, minimum degree 3.
    Q2,
    /// Simple and 3-connected.
    Q3,
}

/// A local expansion and its site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Expansion {
    /// Degree-3 vertex insertion on the dart `u -> w`.
    Insert { dart: Dart },
    /// Vertex split of `tail(d1)` along the darts `d1` and `d2`.
    Split { d1: Dart, d2: Dart },
    /// Cube insertion into the face containing `dart`.
    Cube { dart: Dart },
}

impl Expansion {
    /// Number of faces the expansion adds.
    pub fn face_gain(self) -> usize {
        match self {
            Expansion::Cube { .. } => 4,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExpandError {
    #[error("site is not a legal location for this expansion")]
    IllegalSite,
    #[error("expansion would leave the class (simple, minimum degree 3)")]
    LeavesClass,
}

/// A generated map together with the expansion path that produced it.
#[derive(Clone, Debug)]
pub struct GenerationNode {
    pub map: PlanarMap,
    pub face_count: usize,
    /// Face count of the root pseudo-double wheel followed by the expansions.
    pub root_faces: usize,
    pub provenance: Vec<Expansion>,
}

/// Applies `kind` to `m`, adding [`Expansion::face_gain`] faces.
pub fn expand(m: &PlanarMap, kind: Expansion) -> Result<PlanarMap, ExpandError> {
    let adj = match kind {
        Expansion::Insert { dart } => insert_adjacency(m, dart)?,
        Expansion::Split { d1, d2 } => split_adjacency(m, d1, d2)?,
        Expansion::Cube { dart } => cube_adjacency(m, dart)?,
    };
    let out = PlanarMap::from_neighbors(&adj).map_err(|_| ExpandError::LeavesClass)?;
    if out.min_degree() < 3 || !out.is_quadrangulation() {
        return Err(ExpandError::LeavesClass);
    }
    Ok(out)
}

fn insert_adjacency(m: &PlanarMap, d: Dart) -> Result<Vec<Vec<Vertex>>, ExpandError> {
    if d >= m.n_darts() {
        return Err(ExpandError::IllegalSite);
    }
    let u = m.tail(d);
    let w = m.head(d);
    if m.degree(w) < 4 {
        return Err(ExpandError::IllegalSite);
    }
    // face(d) = (u, w, y, p); face(twin d) = (w, u, q, z)
    let y = m.head(m.face_next(d));
    let t = d ^ 1;
    let z = m.head(m.face_next(m.face_next(t)));
    if y == z || y == u || z == u {
        return Err(ExpandError::IllegalSite);
    }
    let x = m.n_vertices();
    let mut adj = m.adjacency();
    replace(&mut adj[u], w, &[x]);
    adj[w].retain(|&k| k != u);
    insert_after(&mut adj[y], w, x);
    let pos = adj[z].iter().position(|&k| k == w).expect("z is adjacent to w");
    adj[z].insert(pos, x);
    adj.push(vec![u, y, z]);
    Ok(adj)
}

fn split_adjacency(m: &PlanarMap, d1: Dart, d2: Dart) -> Result<Vec<Vec<Vertex>>, ExpandError> {
    if d1 >= m.n_darts() || d2 >= m.n_darts() || m.tail(d1) != m.tail(d2) {
        return Err(ExpandError::IllegalSite);
    }
    let v = m.tail(d1);
    let rot = m.rotation(v);
    let k = rot.len();
    let i1 = rot.iter().position(|&d| d == d1).expect("d1 at v");
    let i2 = rot.iter().position(|&d| d == d2).expect("d2 at v");
    let gap = (i2 + k - i1) % k;
    if k < 4 || gap < 2 || gap > k - 2 {
        return Err(ExpandError::IllegalSite);
    }
    let b = m.head(d1);
    let d = m.head(d2);
    if b == d {
        return Err(ExpandError::IllegalSite);
    }
    let heads: Vec<Vertex> = (0..k).map(|j| m.head(rot[(i1 + j) % k])).collect();
    // a keeps b, s.., d; c keeps d, t.., b
    let a_rot: Vec<Vertex> = heads[..=gap].to_vec();
    let mut c_rot: Vec<Vertex> = heads[gap..].to_vec();
    c_rot.push(b);
    let a = v;
    let c = m.n_vertices();
    let mut adj = m.adjacency();
    for &t in &heads[gap + 1..] {
        replace(&mut adj[t], v, &[c]);
    }
    replace(&mut adj[b], v, &[a, c]);
    replace(&mut adj[d], v, &[c, a]);
    adj[a] = a_rot;
    adj.push(c_rot);
    Ok(adj)
}

fn cube_adjacency(m: &PlanarMap, d: Dart) -> Result<Vec<Vec<Vertex>>, ExpandError> {
    if d >= m.n_darts() {
        return Err(ExpandError::IllegalSite);
    }
    let mut walk = vec![d];
    while walk.len() < 5 {
        walk.push(m.face_next(*walk.last().expect("nonempty")));
    }
    if walk[4] != d {
        return Err(ExpandError::IllegalSite);
    }
    let u: Vec<Vertex> = walk[..4].iter().map(|&x| m.tail(x)).collect();
    let n = m.n_vertices();
    let w = |i: usize| n + i % 4;
    let mut adj = m.adjacency();
    for i in 0..4 {
        let pos = adj[u[i]].iter().position(|&k| k == u[(i + 1) % 4]).expect("face edge");
        adj[u[i]].insert(pos, w(i));
    }
    for i in 0..4 {
        adj.push(vec![u[i], w(i + 3), w(i + 1)]);
    }
    Ok(adj)
}

fn replace(list: &mut Vec<Vertex>, old: Vertex, new: &[Vertex]) {
    let pos = list.iter().position(|&k| k == old).expect("neighbor present");
    list.splice(pos..=pos, new.iter().copied());
}

fn insert_after(list: &mut Vec<Vertex>, anchor: Vertex, new: Vertex) {
    let pos = list.iter().position(|&k| k == anchor).expect("neighbor present");
    list.insert(pos + 1, new);
}

/// Inverse of [`Expansion::Split`]: contracts the face containing `d` by
/// merging `tail(d)` with the opposite vertex of that face.
pub fn contract_face(m: &PlanarMap, d: Dart) -> Result<PlanarMap, ExpandError> {
    let walk = [d, m.face_next(d), m.face_next(m.face_next(d))];
    let a = m.tail(walk[0]);
    let b = m.head(walk[0]);
    let c = m.tail(walk[2]);
    let dd = m.head(walk[2]);
    if a == c || b == dd {
        return Err(ExpandError::IllegalSite);
    }
    let mut adj = m.adjacency();
    let rotate_to = |list: &[Vertex], first: Vertex| -> Vec<Vertex> {
        let p = list.iter().position(|&k| k == first).expect("neighbor present");
        list[p..].iter().chain(&list[..p]).copied().collect()
    };
    let a_part = rotate_to(&adj[a], b);
    let c_part = rotate_to(&adj[c], dd);
    let mut merged = a_part;
    merged.extend_from_slice(&c_part[1..c_part.len() - 1]);
    for &t in &c_part[1..c_part.len() - 1] {
        replace(&mut adj[t], c, &[a]);
    }
    adj[b].retain(|&k| k != c);
    adj[dd].retain(|&k| k != c);
    adj[a] = merged;
    let adj = remove_vertex(adj, c);
    let out = PlanarMap::from_neighbors(&adj).map_err(|_| ExpandError::LeavesClass)?;
    Ok(out)
}

/// Inverse of [`Expansion::Insert`]: removes the degree-3 vertex `x` and
/// reinstates the edge from its neighbor `u` across the opposite face.
pub fn remove_degree3(m: &PlanarMap, x: Vertex, u: Vertex) -> Result<PlanarMap, ExpandError> {
    if m.degree(x) != 3 {
        return Err(ExpandError::IllegalSite);
    }
    let du = m.dart_between(x, u).ok_or(ExpandError::IllegalSite)?;
    let dy = m.next(du);
    let dz = m.next(dy);
    let y = m.head(dy);
    let z = m.head(dz);
    let w = m.head(m.face_next(dz));
    let mut adj = m.adjacency();
    replace(&mut adj[u], x, &[w]);
    insert_after(&mut adj[w], z, u);
    adj[y].retain(|&k| k != x);
    adj[z].retain(|&k| k != x);
    let adj = remove_vertex(adj, x);
    PlanarMap::from_neighbors(&adj).map_err(|_| ExpandError::LeavesClass)
}

fn remove_vertex(mut adj: Vec<Vec<Vertex>>, r: Vertex) -> Vec<Vec<Vertex>> {
    adj.remove(r);
    for list in adj.iter_mut() {
        for k in list.iter_mut() {
            if *k > r {
                *k -= 1;
            }
        }
    }
    adj
}

/// Every legal expansion site of `m`, in a fixed order.
pub fn expansion_sites(m: &PlanarMap) -> Vec<Expansion> {
    let mut out = Vec::new();
    for dart in 0..m.n_darts() {
        out.push(Expansion::Insert { dart });
    }
    for face in m.faces() {
        out.push(Expansion::Cube { dart: face[0] });
    }
    for v in 0..m.n_vertices() {
        let rot = m.rotation(v);
        let k = rot.len();
        if k < 4 {
            continue;
        }
        for i in 0..k {
            for j in i + 2..k {
                if i == 0 && j == k - 1 {
                    continue;
                }
                out.push(Expansion::Split { d1: rot[i], d2: rot[j] });
            }
        }
    }
    out
}

/// Enumerates one representative per unoriented isomorphism class of the
/// requested class with exactly `faces` faces.
pub fn enumerate_quadrangulations(faces: usize, class: QuadClass) -> Vec<GenerationNode> {
    let levels = generate_levels(faces);
    let mut out = levels.into_iter().next_back().map(|(_, v)| v).unwrap_or_default();
    if class == QuadClass::Q3 {
        out.retain(|n| n.map.is_three_connected());
    }
    out
}

/// All Q2 levels from 6 faces up to `max_faces`, keyed by face count.
pub fn generate_levels(max_faces: usize) -> BTreeMap<usize, Vec<GenerationNode>> {
    let mut levels: BTreeMap<usize, Vec<GenerationNode>> = BTreeMap::new();
    for f in 6..=max_faces {
        let parents: Vec<&GenerationNode> = [1usize, 4]
            .iter()
            .filter_map(|&g| f.checked_sub(g).and_then(|p| levels.get(&p)))
            .flatten()
            .collect();
        let mut candidates: Vec<(CanonicalCode, usize, GenerationNode)> = parents
            .par_iter()
            .enumerate()
            .flat_map_iter(|(pi, parent)| {
                expansion_sites(&parent.map)
                    .into_iter()
                    .filter(move |site| parent.face_count + site.face_gain() == f)
                    .filter_map(move |site| {
                        let child = expand(&parent.map, site).ok()?;
                        let code = child.canonical_code_unoriented();
                        let mut provenance = parent.provenance.clone();
                        provenance.push(site);
                        Some((
                            code,
                            pi,
                            GenerationNode {
                                map: child,
                                face_count: f,
                                root_faces: parent.root_faces,
                                provenance,
                            },
                        ))
                    })
            })
            .collect();
        if f % 2 == 0 {
            let pdw = PlanarMap::pseudo_double_wheel(f).expect("even face count");
            candidates.push((
                pdw.canonical_code_unoriented(),
                usize::MAX,
                GenerationNode { map: pdw, face_count: f, root_faces: f, provenance: Vec::new() },
            ));
        }
        // roots first, then the smallest parent index and site order
        candidates.par_sort_by(|x, y| {
            x.0.cmp(&y.0)
                .then_with(|| (x.1 != usize::MAX).cmp(&(y.1 != usize::MAX)))
                .then_with(|| x.1.cmp(&y.1))
                .then_with(|| x.2.provenance.cmp(&y.2.provenance))
        });
        candidates.dedup_by(|x, y| x.0 == y.0);
        let current: Vec<GenerationNode> = candidates.into_iter().map(|(_, _, n)| n).collect();
        log::debug!("level {f}: {} maps", current.len());
        levels.insert(f, current);
    }
    levels
}

/// Number of distinct vertex degrees.
pub fn distinct_degrees(m: &PlanarMap) -> usize {
    let mut d = m.degrees();
    d.sort_unstable();
    d.dedup();
    d.len()
}

/// Counts of Q2 members with `faces` faces by number of distinct degrees;
/// index `k` holds the count for `k + 1` distinct degrees.
pub fn degree_class_count(faces: usize) -> Vec<usize> {
    let maps = enumerate_quadrangulations(faces, QuadClass::Q2);
    degree_histogram(maps.iter().map(|n| &n.map))
}

pub fn degree_histogram<'a>(maps: impl Iterator<Item = &'a PlanarMap>) -> Vec<usize> {
    let mut counts = Vec::new();
    for m in maps {
        let k = distinct_degrees(m);
        if counts.len() < k {
            counts.resize(k, 0);
        }
        counts[k - 1] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansions_add_one_face() {
        let m = PlanarMap::pseudo_double_wheel(8).unwrap();
        let mut n = 0;
        for site in expansion_sites(&m) {
            if let Ok(c) = expand(&m, site) {
                assert_eq!(c.n_faces(), 8 + site.face_gain());
                assert!(c.is_quadrangulation());
                n += 1;
            }
        }
        assert!(n > 0);
    }

    #[test]
    fn cube_has_no_insertion_site() {
        let m = PlanarMap::pseudo_double_wheel(6).unwrap();
        for d in 0..m.n_darts() {
            assert_eq!(expand(&m, Expansion::Insert { dart: d }), Err(ExpandError::IllegalSite));
        }
    }

    #[test]
    fn reductions_invert_expansions() {
        let m = PlanarMap::pseudo_double_wheel(10).unwrap();
        let code = m.canonical_code();
        for site in expansion_sites(&m) {
            let Ok(c) = expand(&m, site) else { continue };
            let back = match site {
                Expansion::Insert { dart } => remove_degree3(&c, m.n_vertices(), m.tail(dart)).unwrap(),
                Expansion::Cube { .. } => continue,
                Expansion::Split { d1, .. } => {
                    let a = m.tail(d1);
                    let b = m.head(d1);
                    let dd = c.dart_between(a, b).unwrap();
                    contract_face(&c, dd).unwrap()
                }
            };
            assert_eq!(back.canonical_code(), code, "{site:?}");
        }
    }

    #[test]
    fn small_levels() {
        let levels = generate_levels(10);
        assert_eq!(levels[&6].len(), 1);
        assert_eq!(levels[&7].len(), 0);
        assert_eq!(levels[&8].len(), 1);
        assert_eq!(levels[&10].len(), 3);
    }
}
