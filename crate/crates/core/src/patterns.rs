//! Forbidden length patterns and a cyclic-order-aware matcher.
//!
//! A pattern vertex lists its slots in rotation order. A slot is either an
//! edge to another pattern vertex or a gap that absorbs a run of host darts
//! of at least the stated length. Consecutive edge slots must land on
//! consecutive host darts. Matching looks at b versus non-b labels only.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::PatternError;
use crate::map::{edge_of, Dart, PlanarMap, Vertex};

pub const SCHEMA: &str = "sqtile.pattern/1";

const BUILTIN: [(&str, &str); 4] = [
    ("blade.json", include_str!("../patterns/blade.json")),
    ("typhoon.json", include_str!("../patterns/typhoon.json")),
    ("blade_f8.json", include_str!("../patterns/blade_f8.json")),
    ("typhoon_f8.json", include_str!("../patterns/typhoon_f8.json")),
];

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PatternFile {
    schema: String,
    name: String,
    family: String,
    vertices: Vec<(String, Vec<String>)>,
    b_edges: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Edge to pattern vertex `to`; `twin` is the matching slot index there.
    Edge { to: usize, twin: usize, b: bool },
    /// At least `min` host darts.
    Gap { min: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub name: String,
    pub family: String,
    pub mirrored: bool,
    pub names: Vec<String>,
    pub slots: Vec<Vec<Slot>>,
}

impl Pattern {
    pub fn from_json(text: &str) -> Result<Pattern, PatternError> {
        let file: PatternFile = serde_json::from_str(text)?;
        let invalid = |why: String| PatternError::Invalid { name: file.name.clone(), why };
        if file.schema != SCHEMA {
            return Err(invalid(format!("unknown schema {}", file.schema)));
        }
        let index: HashMap<&str, usize> =
            file.vertices.iter().enumerate().map(|(i, (n, _))| (n.as_str(), i)).collect();
        let is_b = |u: &str, w: &str| file.b_edges.iter().any(|(x, y)| (x == u && y == w) || (x == w && y == u));
        let mut slots = Vec::new();
        for (name, list) in &file.vertices {
            let mut row = Vec::new();
            for tok in list {
                row.push(match tok.as_str() {
                    "*" => Slot::Gap { min: 0 },
                    "+" => Slot::Gap { min: 1 },
                    other => {
                        let to = *index.get(other).ok_or_else(|| invalid(format!("unknown vertex {other}")))?;
                        Slot::Edge { to, twin: usize::MAX, b: is_b(name, other) }
                    }
                });
            }
            slots.push(row);
        }
        for (u, w) in &file.b_edges {
            if !index.contains_key(u.as_str()) || !index.contains_key(w.as_str()) {
                return Err(invalid(format!("b-edge {u}-{w} names an unknown vertex")));
            }
        }
        for v in 0..slots.len() {
            for s in 0..slots[v].len() {
                if let Slot::Edge { to, .. } = slots[v][s] {
                    let back: Vec<usize> = (0..slots[to].len())
                        .filter(|&t| matches!(slots[to][t], Slot::Edge { to: x, .. } if x == v))
                        .collect();
                    if back.len() != 1 {
                        return Err(invalid(format!("edge {}-{} is not listed once at both ends", file.vertices[v].0, file.vertices[to].0)));
                    }
                    if let Slot::Edge { twin, .. } = &mut slots[v][s] {
                        *twin = back[0];
                    }
                }
            }
        }
        Ok(Pattern {
            name: file.name,
            family: file.family,
            mirrored: false,
            names: file.vertices.into_iter().map(|(n, _)| n).collect(),
            slots,
        })
    }

    pub fn from_path(path: &Path) -> Result<Pattern, PatternError> {
        Pattern::from_json(&std::fs::read_to_string(path)?)
    }

    /// Reverses every slot list.
    pub fn mirror(&self) -> Pattern {
        let len: Vec<usize> = self.slots.iter().map(Vec::len).collect();
        let slots = self
            .slots
            .iter()
            .map(|row| {
                row.iter()
                    .rev()
                    .map(|s| match *s {
                        Slot::Edge { to, twin, b } => Slot::Edge { to, twin: len[to] - 1 - twin, b },
                        Slot::Gap { min } => Slot::Gap { min },
                    })
                    .collect()
            })
            .collect();
        Pattern {
            name: self.name.clone(),
            family: self.family.clone(),
            mirrored: !self.mirrored,
            names: self.names.clone(),
            slots,
        }
    }

    pub fn n_edges(&self) -> usize {
        self.slots.iter().flatten().filter(|s| matches!(s, Slot::Edge { .. })).count() / 2
    }

    pub fn n_b_edges(&self) -> usize {
        self.slots.iter().flatten().filter(|s| matches!(s, Slot::Edge { b: true, .. })).count() / 2
    }

    /// Display name including the mirror flag.
    pub fn label(&self) -> String {
        if self.mirrored {
            format!("{}-mirror", self.name)
        } else {
            self.name.clone()
        }
    }
}

/// The built-in patterns as stored, without mirrors.
pub fn builtin_patterns() -> Vec<Pattern> {
    BUILTIN
        .iter()
        .map(|(file, text)| Pattern::from_json(text).unwrap_or_else(|e| panic!("built-in pattern {file}: {e}")))
        .collect()
}

/// The forbidden patterns and their mirror images. Both tile types share
/// the same length patterns.
pub fn forbidden_patterns() -> Vec<Pattern> {
    builtin_patterns().into_iter().flat_map(|p| [p.mirror(), p].into_iter().rev()).collect()
}

/// A length-decorated host: per-edge b flags over a map.
#[derive(Clone, Copy, Debug)]
pub struct Host<'a> {
    pub map: &'a PlanarMap,
    pub b: &'a [bool],
}

/// Pattern-to-host correspondence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub vertices: Vec<Vertex>,
    /// Host dart of every edge slot; gaps hold `usize::MAX`.
    pub slots: Vec<Vec<Dart>>,
}

#[derive(Clone)]
struct State {
    vmap: Vec<Option<Vertex>>,
    used: Vec<bool>,
    required: Vec<Vec<Option<Dart>>>,
    aligned: Vec<Option<Vec<Dart>>>,
}

/// Every embedding of `p` into the host.
pub fn match_pattern(host: Host<'_>, p: &Pattern) -> Vec<Embedding> {
    let mut out = Vec::new();
    for_each_embedding(host, p, usize::MAX, &mut |e| out.push(e));
    out
}

/// True when at least one embedding exists.
pub fn occurs(host: Host<'_>, p: &Pattern) -> bool {
    let mut found = false;
    for_each_embedding(host, p, 1, &mut |_| found = true);
    found
}

fn for_each_embedding(host: Host<'_>, p: &Pattern, limit: usize, sink: &mut dyn FnMut(Embedding)) {
    let Some(anchor) = p.slots[0].iter().position(|s| matches!(s, Slot::Edge { .. })) else {
        return;
    };
    let mut count = 0;
    for d in 0..host.map.n_darts() {
        let mut st = State {
            vmap: vec![None; p.slots.len()],
            used: vec![false; host.map.n_vertices()],
            required: p.slots.iter().map(|r| vec![None; r.len()]).collect(),
            aligned: vec![None; p.slots.len()],
        };
        let v = host.map.tail(d);
        st.vmap[0] = Some(v);
        st.used[v] = true;
        st.required[0][anchor] = Some(d);
        search(host, p, st, &mut |e| {
            count += 1;
            sink(e);
            count < limit
        });
        if count >= limit {
            return;
        }
    }
}

/// Returns false when the sink asks to stop.
fn search(host: Host<'_>, p: &Pattern, st: State, sink: &mut dyn FnMut(Embedding) -> bool) -> bool {
    let Some(pv) = (0..p.slots.len()).find(|&v| st.vmap[v].is_some() && st.aligned[v].is_none()) else {
        let emb = Embedding {
            vertices: st.vmap.iter().map(|v| v.expect("pattern is connected")).collect(),
            slots: st.aligned.into_iter().map(|a| a.expect("aligned")).collect(),
        };
        return sink(emb);
    };
    for align in alignments(host.map, &p.slots[pv], &st.required[pv]) {
        let mut next = st.clone();
        if apply(host, p, &mut next, pv, &align) && !search(host, p, next, sink) {
            return false;
        }
    }
    true
}

fn apply(host: Host<'_>, p: &Pattern, st: &mut State, pv: usize, align: &[Dart]) -> bool {
    for (s, slot) in p.slots[pv].iter().enumerate() {
        let Slot::Edge { to, twin, b } = *slot else { continue };
        let hd = align[s];
        if host.b[edge_of(hd)] != b {
            return false;
        }
        let w = host.map.head(hd);
        match st.vmap[to] {
            Some(x) if x != w => return false,
            Some(_) => {}
            None => {
                if st.used[w] {
                    return false;
                }
                st.vmap[to] = Some(w);
                st.used[w] = true;
            }
        }
        match (&st.aligned[to], st.required[to][twin]) {
            (Some(a), _) if a[twin] != hd ^ 1 => return false,
            (_, Some(r)) if r != hd ^ 1 => return false,
            _ => st.required[to][twin] = Some(hd ^ 1),
        }
    }
    st.aligned[pv] = Some(align.to_vec());
    true
}

/// Slot-to-dart alignments around one host vertex honoring requirements.
fn alignments(map: &PlanarMap, slots: &[Slot], required: &[Option<Dart>]) -> Vec<Vec<Dart>> {
    let (s0, d0) = required
        .iter()
        .enumerate()
        .find_map(|(s, r)| r.map(|d| (s, d)))
        .expect("a mapped vertex has an anchored slot");
    let rot = map.rotation(map.tail(d0));
    let deg = rot.len();
    let start = rot.iter().position(|&d| d == d0).expect("anchor at vertex");
    let n = slots.len();
    let mut out = Vec::new();
    let mut cur = vec![usize::MAX; n];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        slots: &[Slot],
        required: &[Option<Dart>],
        rot: &[Dart],
        start: usize,
        s0: usize,
        k: usize,
        used: usize,
        cur: &mut Vec<Dart>,
        out: &mut Vec<Vec<Dart>>,
    ) {
        let n = slots.len();
        let deg = rot.len();
        if k == n {
            if used == deg {
                out.push(cur.clone());
            }
            return;
        }
        let s = (s0 + k) % n;
        match slots[s] {
            Slot::Edge { .. } => {
                if used >= deg {
                    return;
                }
                let d = rot[(start + used) % deg];
                if required[s].is_some_and(|r| r != d) {
                    return;
                }
                cur[s] = d;
                rec(slots, required, rot, start, s0, k + 1, used + 1, cur, out);
            }
            Slot::Gap { min } => {
                let edges_left = (k + 1..n).filter(|&j| matches!(slots[(s0 + j) % n], Slot::Edge { .. })).count();
                let room = deg.saturating_sub(used + edges_left);
                for take in min..=room {
                    cur[s] = usize::MAX;
                    rec(slots, required, rot, start, s0, k + 1, used + take, cur, out);
                }
            }
        }
    }
    if !matches!(slots[s0], Slot::Edge { .. }) || deg == 0 {
        return out;
    }
    rec(slots, required, rot, start, s0, 0, 0, &mut cur, &mut out);
    out
}

/// Names of the forbidden patterns occurring in the host, in pattern order.
pub fn occurring_patterns(host: Host<'_>, patterns: &[Pattern]) -> Vec<String> {
    patterns.iter().filter(|p| occurs(host, p)).map(Pattern::label).collect()
}

/// Placements of the pseudo-double wheel free of every forbidden pattern.
pub fn pattern_filter_pdw(faces: usize) -> Result<Vec<Vec<bool>>, crate::error::MapError> {
    let map = PlanarMap::pseudo_double_wheel(faces)?;
    let pats = forbidden_patterns();
    Ok(crate::feasibility::b_placements(&map)
        .into_iter()
        .filter(|b| !pats.iter().any(|p| occurs(Host { map: &map, b }, p)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b_from_pairs(m: &PlanarMap, pairs: &[(usize, usize)]) -> Vec<bool> {
        let mut b = vec![false; m.n_edges()];
        for &(u, w) in pairs {
            b[edge_of(m.dart_between(u, w).unwrap())] = true;
        }
        b
    }

    #[test]
    fn builtin_shapes() {
        let ps = builtin_patterns();
        assert_eq!(ps.len(), 4);
        for p in &ps {
            assert_eq!(p.n_b_edges(), 4, "{}", p.name);
        }
        assert_eq!(ps[0].n_edges(), 19);
        assert_eq!(ps[2].n_edges(), 16);
        for p in &ps {
            assert_eq!(p.mirror().mirror(), *p);
        }
        assert_eq!(forbidden_patterns().len(), 8);
    }

    #[test]
    fn blade_and_typhoon_assignments() {
        let m = PlanarMap::pseudo_double_wheel(8).unwrap();
        let pats = forbidden_patterns();
        let blade = b_from_pairs(&m, &[(8, 0), (9, 1), (8, 4), (9, 5)]);
        let typhoon = b_from_pairs(&m, &[(8, 0), (9, 1), (3, 4), (5, 6)]);
        let hit = occurring_patterns(Host { map: &m, b: &blade }, &pats);
        assert!(hit.iter().any(|n| n.starts_with("blade")), "{hit:?}");
        let hit = occurring_patterns(Host { map: &m, b: &typhoon }, &pats);
        assert!(hit.iter().any(|n| n.starts_with("typhoon")), "{hit:?}");
    }

    #[test]
    fn gap_alignment_counts() {
        // degree 5 against [e, *, e, *]: the two gaps share three darts
        let m = PlanarMap::pseudo_double_wheel(10).unwrap();
        let e = |to| Slot::Edge { to, twin: 0, b: false };
        let d0 = m.rotation(10)[0];
        let mut req = vec![None; 4];
        req[0] = Some(d0);
        let slots = vec![e(1), Slot::Gap { min: 0 }, e(2), Slot::Gap { min: 0 }];
        assert_eq!(alignments(&m, &slots, &req).len(), 4);
        let slots = vec![e(1), Slot::Gap { min: 1 }, e(2), Slot::Gap { min: 1 }];
        assert_eq!(alignments(&m, &slots, &req).len(), 2);
        let slots = vec![e(1), Slot::Gap { min: 0 }, e(2)];
        assert_eq!(alignments(&m, &slots, &req).len(), 1);
    }

    #[test]
    fn known_charts_avoid_patterns() {
        let pats = forbidden_patterns();
        for f in [6, 8, 10, 12, 14] {
            let p = crate::chart::build_p(f, crate::chart::TileType::Type2).unwrap();
            let b = p.b_edges();
            assert!(occurring_patterns(Host { map: p.map(), b: &b }, &pats).is_empty(), "P_{f}");
        }
        let a = crate::chart::build_a();
        let b = a.b_edges();
        assert!(occurring_patterns(Host { map: a.map(), b: &b }, &pats).is_empty());
    }

    /// Survivors up to symmetry, keyed by the sorted b-edge list.
    fn survivor_orbits(faces: usize) -> usize {
        let m = PlanarMap::pseudo_double_wheel(faces).unwrap();
        let auts = m.automorphisms_with_reflections();
        let mut keys = std::collections::BTreeSet::new();
        for b in pattern_filter_pdw(faces).unwrap() {
            let key = auts
                .iter()
                .map(|a| {
                    let mut img = vec![false; b.len()];
                    for e in 0..b.len() {
                        img[a.edge_image(e)] = b[e];
                    }
                    img
                })
                .min()
                .unwrap();
            keys.insert(key);
        }
        keys.len()
    }

    #[test]
    fn pdw_filter_survivors() {
        assert_eq!(survivor_orbits(8), 1);
        assert_eq!(survivor_orbits(12), 2);
        let m = PlanarMap::pseudo_double_wheel(12).unwrap();
        let surv = pattern_filter_pdw(12).unwrap();
        assert!(surv.contains(&crate::chart::pdw_equatorial_placement(&m, 12)));
        assert!(surv.contains(&crate::chart::pdw_alternating_placement(&m, 12).unwrap()));
    }
}
