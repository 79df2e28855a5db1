//! b-edge placements, angle assignments and the exact feasibility test.

use std::collections::{BTreeSet, HashMap};

use crate::chart::{area_sum, corner_pattern, edge_pattern, Chart, Chirality, Len, Sym, TileType, VertexType};
use crate::linear::{qi, solve, Clause, Equation, Feasibility, LinearSystem, RejectReason, Q};
use crate::map::{edge_of, Automorphism, PlanarMap};

/// Open bounds on every angle: (0, 1) for convex tiles, (0, 2) otherwise.
pub fn angle_bounds(convex: bool) -> (Q, Q) {
    if convex {
        (qi(0), qi(1))
    } else {
        (qi(0), qi(2))
    }
}

/// Every perfect matching of the dual, as per-edge b flags of the primal.
pub fn b_placements(map: &PlanarMap) -> Vec<Vec<bool>> {
    let faces = map.faces();
    let face_of = map.face_of_darts();
    let mut used = vec![false; faces.len()];
    let mut chosen = vec![false; map.n_edges()];
    let mut out = Vec::new();
    fn rec(
        faces: &[Vec<usize>],
        face_of: &[usize],
        used: &mut [bool],
        chosen: &mut [bool],
        out: &mut Vec<Vec<bool>>,
    ) {
        let Some(f) = used.iter().position(|&u| !u) else {
            out.push(chosen.to_vec());
            return;
        };
        used[f] = true;
        for &d in &faces[f] {
            let g = face_of[d ^ 1];
            if g == f || used[g] || chosen[edge_of(d)] {
                continue;
            }
            used[g] = true;
            chosen[edge_of(d)] = true;
            rec(faces, face_of, used, chosen, out);
            chosen[edge_of(d)] = false;
            used[g] = false;
        }
        used[f] = false;
    }
    rec(&faces, &face_of, &mut used, &mut chosen, &mut out);
    out
}

/// Automorphisms (orientation-preserving) mapping the placement onto itself.
pub fn placement_stabilizer(map: &PlanarMap, auts: &[Automorphism], placement: &[bool]) -> Vec<Automorphism> {
    auts.iter()
        .filter(|a| (0..map.n_edges()).all(|e| placement[e] == placement[a.edge_image(e)]))
        .cloned()
        .collect()
}

/// Smallest decoration fingerprint over a group of automorphisms.
pub fn orbit_key(chart: &Chart, group: &[Automorphism]) -> Vec<u8> {
    group.iter().map(|a| chart.key_under(a)).min().unwrap_or_else(|| chart.key())
}

/// Face order that completes vertices as early as possible.
fn face_order(map: &PlanarMap, faces: &[Vec<usize>]) -> Vec<usize> {
    let mut remaining: Vec<usize> = map.degrees();
    let mut done = vec![false; faces.len()];
    let mut order = Vec::with_capacity(faces.len());
    let mut touched = vec![false; map.n_vertices()];
    for _ in 0..faces.len() {
        let score = |f: usize| {
            let closes = faces[f].iter().filter(|&&d| remaining[map.tail(d)] == 1).count();
            let near = faces[f].iter().filter(|&&d| touched[map.tail(d)]).count();
            (closes, near)
        };
        let f = (0..faces.len())
            .filter(|&f| !done[f])
            .max_by(|&x, &y| score(x).cmp(&score(y)).then(y.cmp(&x)))
            .expect("a face remains");
        done[f] = true;
        for &d in &faces[f] {
            remaining[map.tail(d)] -= 1;
            touched[map.tail(d)] = true;
        }
        order.push(f);
    }
    order
}

/// Search settings for [`assignments`].
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub tile_type: TileType,
    /// `None` disables pruning; otherwise prune with these angle bounds.
    pub convex: Option<bool>,
    /// Stop after this many distinct survivors.
    pub limit: usize,
    /// Keep only completed charts passing [`check_chart`]; needs `convex`.
    pub verify: bool,
}

impl SearchOptions {
    pub fn new(tile_type: TileType) -> Self {
        SearchOptions { tile_type, convex: None, limit: usize::MAX, verify: false }
    }

    pub fn pruned(tile_type: TileType, convex: bool) -> Self {
        SearchOptions { tile_type, convex: Some(convex), limit: usize::MAX, verify: false }
    }
}

/// Angle assignments on `placement` with per-edge length agreement,
/// deduplicated modulo `group`. With pruning enabled, a partial assignment
/// is abandoned as soon as the completed vertex types and the area equation
/// admit no solution within the bounds.
pub fn assignments(
    map: &PlanarMap,
    placement: &[bool],
    group: &[Automorphism],
    opts: SearchOptions,
) -> Vec<Chart> {
    let faces = map.faces();
    let order = face_order(map, &faces);
    let b_pos: Vec<usize> = faces
        .iter()
        .map(|w| (0..w.len()).find(|&j| placement[edge_of(w[j])]).expect("one b-edge per face"))
        .collect();
    let mut st = SearchState {
        map,
        faces: &faces,
        b_pos: &b_pos,
        order: &order,
        opts,
        angles: vec![None; map.n_darts()],
        lengths: vec![None; map.n_edges()],
        remaining: map.degrees(),
        chirality: vec![Chirality::Plus; faces.len()],
        types: Vec::new(),
        cache: HashMap::new(),
        seen: BTreeSet::new(),
        out: Vec::new(),
        placement,
        group,
    };
    st.rec(0);
    st.out
}

/// All assignments without pruning, modulo orientation-preserving
/// automorphisms fixing the placement.
pub fn angle_assignments(map: &PlanarMap, placement: &[bool], tile_type: TileType) -> Vec<Chart> {
    let group = placement_stabilizer(map, &map.automorphisms(), placement);
    assignments(map, placement, &group, SearchOptions::new(tile_type))
}

struct SearchState<'a> {
    map: &'a PlanarMap,
    faces: &'a [Vec<usize>],
    b_pos: &'a [usize],
    order: &'a [usize],
    opts: SearchOptions,
    angles: Vec<Option<Sym>>,
    lengths: Vec<Option<Len>>,
    remaining: Vec<usize>,
    chirality: Vec<Chirality>,
    types: Vec<VertexType>,
    cache: HashMap<Vec<VertexType>, bool>,
    seen: BTreeSet<Vec<u8>>,
    out: Vec<Chart>,
    placement: &'a [bool],
    group: &'a [Automorphism],
}

impl SearchState<'_> {
    fn rec(&mut self, depth: usize) {
        if self.out.len() >= self.opts.limit {
            return;
        }
        if depth == self.order.len() {
            let chart = Chart::assemble(
                self.map.clone(),
                self.opts.tile_type,
                self.placement,
                self.chirality.clone(),
            )
            .expect("search keeps lengths consistent");
            if self.opts.verify && !check_chart(&chart, self.opts.convex.unwrap_or(false)).feasible {
                return;
            }
            let key = orbit_key(&chart, self.group);
            if self.seen.insert(key) {
                self.out.push(chart);
            }
            return;
        }
        let f = self.order[depth];
        let walk = &self.faces[f];
        let k = self.b_pos[f];
        for ch in [Chirality::Plus, Chirality::Minus] {
            let syms = corner_pattern(ch);
            let lens = edge_pattern(ch);
            // lengths
            let mut set_edges = Vec::new();
            let mut ok = true;
            if self.opts.tile_type == TileType::Type4 {
                for j in 0..4 {
                    let e = edge_of(walk[(k + j) % 4]);
                    match self.lengths[e] {
                        None => {
                            self.lengths[e] = Some(lens[j]);
                            set_edges.push(e);
                        }
                        Some(l) if l == lens[j] => {}
                        Some(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if ok {
                let n_types = self.types.len();
                for j in 0..4 {
                    let d = walk[(k + j) % 4];
                    self.angles[d] = Some(syms[j]);
                    let v = self.map.tail(d);
                    self.remaining[v] -= 1;
                    if self.remaining[v] == 0 {
                        let mut c = [0u32; 4];
                        for &x in self.map.rotation(v) {
                            c[self.angles[x].expect("vertex complete").index()] += 1;
                        }
                        self.types.push(VertexType(c));
                    }
                }
                self.chirality[f] = ch;
                if self.types.len() == n_types || self.partial_feasible() {
                    self.rec(depth + 1);
                }
                for j in 0..4 {
                    let d = walk[(k + j) % 4];
                    self.angles[d] = None;
                    self.remaining[self.map.tail(d)] += 1;
                }
                self.types.truncate(n_types);
            }
            for e in set_edges {
                self.lengths[e] = None;
            }
        }
    }

    fn partial_feasible(&mut self) -> bool {
        let Some(convex) = self.opts.convex else {
            return true;
        };
        let mut key = self.types.clone();
        key.sort_unstable();
        key.dedup();
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let sys = crate::chart::constraints_for_types(&key, self.faces.len());
        let (lo, hi) = angle_bounds(convex);
        let r = solve(&sys, lo, hi).feasible;
        self.cache.insert(key, r);
        r
    }
}

fn form(c: [i128; 4]) -> Equation {
    Equation::new(c.iter().map(|&x| qi(x)).collect(), qi(0))
}

/// Witnesses for the three-a argument: a 3-valent vertex with three a-edges and a
/// 3-valent vertex with both an a-edge and a b-edge.
pub fn has_three_a_witnesses(chart: &Chart) -> bool {
    let m = chart.map();
    let lens = |v: usize| -> Vec<Len> { m.rotation(v).iter().map(|&d| chart.length(edge_of(d))).collect() };
    let three_a = (0..m.n_vertices()).any(|v| m.degree(v) == 3 && lens(v).iter().all(|&l| l == Len::A));
    let a_and_b = (0..m.n_vertices()).any(|v| {
        let l = lens(v);
        m.degree(v) == 3 && l.contains(&Len::A) && l.contains(&Len::B)
    });
    three_a && a_and_b
}

/// Disequality clauses that hold for every tile of the chart's type.
pub fn lemma_clauses(chart: &Chart) -> Vec<Clause> {
    let mut out = Vec::new();
    let clause = |tag: &str, forms: Vec<Equation>| Clause { tag: tag.into(), forms };
    // α=β and γ=δ cannot both hold
    out.push(clause("lune-ab-gd", vec![form([1, -1, 0, 0]), form([0, 0, 1, -1])]));
    match chart.tile_type() {
        TileType::Type2 => {
            out.push(clause("type2-b!=d", vec![form([0, 1, 0, -1])]));
            out.push(clause("type2-a!=g", vec![form([1, 0, -1, 0])]));
            if has_three_a_witnesses(chart) {
                out.push(clause("three-a-vertex-a!=d", vec![form([1, 0, 0, -1])]));
                out.push(clause("three-a-vertex-b!=g", vec![form([0, 1, -1, 0])]));
            }
        }
        TileType::Type4 => {
            out.push(clause("type4-a!=g", vec![form([1, 0, -1, 0])]));
            out.push(clause("lune-ad-bg", vec![form([1, 0, 0, -1]), form([0, 1, -1, 0])]));
        }
    }
    out
}

/// Fails with the first lemma clause whose equalities are all forced.
pub fn lemma_filters(chart: &Chart, fz: &Feasibility) -> Result<(), RejectReason> {
    for c in lemma_clauses(chart) {
        if c.forms.iter().all(|f| fz.forces(f)) {
            return Err(RejectReason::ForcedEquality(c.tag));
        }
    }
    Ok(())
}

/// Vertex and area equations plus lemma clauses of a chart.
pub fn full_system(chart: &Chart) -> LinearSystem {
    let mut sys = chart.constraints();
    for c in lemma_clauses(chart) {
        sys.push_clause(c);
    }
    sys
}

/// Exact feasibility of a chart: equations, strict bounds and lemma clauses.
pub fn check_chart(chart: &Chart, convex: bool) -> Feasibility {
    let (lo, hi) = angle_bounds(convex);
    let fz = solve(&chart.constraints(), lo, hi);
    if !fz.feasible {
        return fz;
    }
    solve(&full_system(chart), lo, hi)
}

/// Area equation alone, used by tests as a sanity anchor.
pub fn area_equation(faces: usize) -> Equation {
    Equation::new(vec![qi(1); 4], area_sum(faces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::build_p;

    #[test]
    fn cube_placements() {
        let m = PlanarMap::pseudo_double_wheel(6).unwrap();
        let p = b_placements(&m);
        assert_eq!(p.len(), 8);
        assert!(p.iter().all(|x| x.iter().filter(|&&b| b).count() == 3));
    }

    #[test]
    fn two_all_equatorial_placements() {
        for f in [8, 10, 12] {
            let m = PlanarMap::pseudo_double_wheel(f).unwrap();
            let n = b_placements(&m)
                .iter()
                .filter(|p| (0..m.n_edges()).all(|e| !p[e] || m.pdw_edge_kind(e) == crate::map::EdgeKind::NonMeridian))
                .count();
            assert_eq!(n, 2, "F={f}");
        }
    }

    #[test]
    fn p_is_feasible() {
        for f in [6, 8, 10, 12] {
            for t in [TileType::Type2, TileType::Type4] {
                let c = build_p(f, t).unwrap();
                let fz = check_chart(&c, true);
                assert!(fz.feasible, "F={f} {t:?} {:?}", fz.reason);
                assert_eq!(fz.fixed_value(1), Some(crate::linear::q(4, f as i128)));
                assert!(lemma_filters(&c, &fz).is_ok());
            }
        }
    }

    #[test]
    fn chart_a_is_concave_feasible() {
        let a = crate::chart::build_a();
        let mut types: Vec<String> = a.distinct_vertex_types().iter().map(|t| t.to_string()).collect();
        types.sort();
        assert_eq!(types, ["2α+2β+2δ", "2β+γ", "α+γ+δ"]);
        assert!(!check_chart(&a, true).feasible);
        let fz = check_chart(&a, false);
        assert!(fz.feasible, "{:?}", fz.reason);
        assert_eq!(fz.fixed_value(1), Some(crate::linear::q(1, 3)));
        assert_eq!(fz.fixed_value(2), Some(crate::linear::q(4, 3)));
    }

    #[test]
    fn single_face_has_two_decorations() {
        assert_ne!(corner_pattern(Chirality::Plus), corner_pattern(Chirality::Minus));
    }
}
