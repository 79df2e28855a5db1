//! Classification pipelines over pseudo-double wheels and over generated
//! maps, chart identification and isohedrality.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chart::{build_a, build_p, build_q, Chart, TileType};
use crate::feasibility::{assignments, b_placements, check_chart, placement_stabilizer, SearchOptions};
use crate::geom::reject_q;
use crate::io::ChartRecord;
use crate::linear::{qi, solve, Equation};
use crate::map::{edge_of, Automorphism, PlanarMap};
use crate::patterns::{forbidden_patterns, occurring_patterns, Host, Pattern};
use crate::MapError;

pub const VERDICT_SCHEMA: &str = "sqtile.verdict/1";

/// Samples drawn when rejecting the alternating-pole chart.
pub const Q_SAMPLES: usize = 100;

/// Map automorphisms, reflections included, that preserve the decoration.
pub fn decorated_automorphisms(chart: &Chart) -> Vec<Automorphism> {
    let key = chart.key();
    chart
        .map()
        .automorphisms_with_reflections()
        .into_iter()
        .filter(|a| chart.key_under(a) == key)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isohedrality {
    pub transitive: bool,
    pub orbit_count: usize,
    pub group_order: usize,
    /// Face orbits, each sorted, ordered by smallest face.
    pub orbits: Vec<Vec<usize>>,
}

/// Face orbits under the decorated automorphism group.
pub fn is_isohedral_chart(chart: &Chart) -> Isohedrality {
    let auts = decorated_automorphisms(chart);
    let m = chart.map();
    let face_of = m.face_of_darts();
    let faces = chart.faces();
    let mut parent: Vec<usize> = (0..faces.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for a in &auts {
        for (f, walk) in faces.iter().enumerate() {
            // a reversing map sends the corner at d to the corner at prev(d)'s image
            let d = walk[0];
            let img = if a.reversing { a.dart_map[m.prev(d)] } else { a.dart_map[d] };
            let (x, y) = (root(&mut parent, f), root(&mut parent, face_of[img]));
            parent[x.max(y)] = x.min(y);
        }
    }
    let mut orbits: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for f in 0..faces.len() {
        let r = root(&mut parent, f);
        orbits.entry(r).or_default().push(f);
    }
    let orbits: Vec<Vec<usize>> = orbits.into_values().collect();
    Isohedrality { transitive: orbits.len() == 1, orbit_count: orbits.len(), group_order: auts.len(), orbits }
}

/// Which named chart a chart equals, and through which symmetries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedMatch {
    pub name: String,
    pub mirrored: bool,
    pub conjugated: bool,
    /// Matched only after using `α = δ`, `β = γ`, under which the corners
    /// of each tile may be relabeled freely.
    pub symmetric_tile: bool,
}

/// The named charts with `faces` faces and the given tile type.
pub fn named_charts(faces: usize, tile_type: TileType) -> Vec<(String, Chart)> {
    let mut out = Vec::new();
    if let Ok(p) = build_p(faces, tile_type) {
        out.push((format!("P{faces}"), p));
    }
    if tile_type == TileType::Type2 {
        if let Ok(q) = build_q(faces) {
            out.push((format!("Q{faces}"), q));
        }
        if faces == 12 {
            out.push(("A".to_string(), build_a()));
        }
    }
    out
}

/// Matches `chart` against `named` modulo map isomorphism, mirror image and
/// (for type 2) conjugation.
pub fn identify(chart: &Chart, named: &[(String, Chart)]) -> Option<NamedMatch> {
    let key = chart.key();
    for (name, c) in named {
        if c.tile_type() != chart.tile_type() {
            continue;
        }
        let mut variants = vec![(false, c.clone())];
        if let Ok(cc) = c.conjugate() {
            variants.push((true, cc));
        }
        for (conjugated, v) in variants {
            for mirrored in [false, true] {
                let hit = v
                    .map()
                    .isomorphisms(chart.map(), mirrored, usize::MAX)
                    .iter()
                    .any(|iso| v.key_under(iso) == key);
                if hit {
                    return Some(NamedMatch { name: name.clone(), mirrored, conjugated, symmetric_tile: false });
                }
            }
        }
    }
    None
}

/// Matches the b-edges of `chart` against those of a named chart, ignoring angles.
pub fn identify_lengths(chart: &Chart, named: &[(String, Chart)]) -> Option<NamedMatch> {
    let b = chart.b_edges();
    for (name, c) in named {
        let cb = c.b_edges();
        for mirrored in [false, true] {
            let hit = c
                .map()
                .isomorphisms(chart.map(), mirrored, usize::MAX)
                .iter()
                .any(|iso| (0..cb.len()).all(|e| cb[e] == b[iso.edge_image(e)]));
            if hit {
                return Some(NamedMatch { name: name.clone(), mirrored, conjugated: false, symmetric_tile: true });
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Rejected { reason: String },
    Survivor { identified: Option<NamedMatch> },
}

/// One classified candidate: a placement with no chart, or a chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub schema: String,
    pub faces: usize,
    pub tile_type: u8,
    pub convex: bool,
    /// Index of the placement orbit within the run.
    pub placement: usize,
    pub b_edges: Vec<[usize; 2]>,
    pub chart: Option<ChartRecord>,
    pub status: Status,
}

impl Verdict {
    pub fn is_survivor(&self) -> bool {
        matches!(self.status, Status::Survivor { .. })
    }

    pub fn reason(&self) -> Option<&str> {
        match &self.status {
            Status::Rejected { reason } => Some(reason),
            Status::Survivor { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub faces: usize,
    pub tile_type: u8,
    pub convex: bool,
}

impl ClassifyConfig {
    pub fn tile(&self) -> TileType {
        TileType::from_number(self.tile_type).expect("validated tile type")
    }

    /// The forbidden patterns are theorems for convex tiles and for `F ≤ 8`.
    pub fn patterns_apply(&self) -> bool {
        self.convex || self.faces <= 8
    }
}

fn b_endpoints(map: &PlanarMap, b: &[bool]) -> Vec<[usize; 2]> {
    let mut out: Vec<[usize; 2]> = (0..map.n_edges())
        .filter(|&e| b[e])
        .map(|e| {
            let (u, w) = map.edge_endpoints(e);
            [u.min(w), u.max(w)]
        })
        .collect();
    out.sort_unstable();
    out
}

/// One representative per orbit of b-placements under the full group,
/// reflections included, in deterministic order.
pub fn placement_orbits(map: &PlanarMap, group: &[Automorphism]) -> Vec<Vec<bool>> {
    let mut reps: BTreeMap<Vec<bool>, Vec<bool>> = BTreeMap::new();
    for p in b_placements(map) {
        let key = group
            .iter()
            .map(|a| {
                let mut img = vec![false; map.n_edges()];
                for e in 0..map.n_edges() {
                    img[a.edge_image(e)] = p[e];
                }
                img
            })
            .max()
            .unwrap_or_else(|| p.clone());
        reps.entry(key).or_insert(p);
    }
    // keys are canonical images, so iterating in key order is deterministic
    reps.into_keys().collect()
}

/// Geometric and structural checks after the linear stage. The named
/// alternating-pole chart goes to its geometric rejection; a system forcing
/// `β = γ` on a type-2 tile forces the tile to be symmetric, so `α = δ`
/// joins the system and the corners of every tile become interchangeable.
fn derive(chart: &Chart, convex: bool, named: &[(String, Chart)]) -> Status {
    let id = identify(chart, named);
    if let Some(m) = &id {
        if m.name.starts_with('Q') {
            return match reject_q(chart.n_faces(), Q_SAMPLES) {
                Ok(r) if r.rejected() => Status::Rejected { reason: format!("geom:{}-pole-lemma", m.name) },
                _ => Status::Survivor { identified: id },
            };
        }
        return Status::Survivor { identified: id };
    }
    if chart.tile_type() == TileType::Type2 {
        let fz = check_chart(chart, convex);
        let bg = Equation::new(vec![qi(0), qi(1), qi(-1), qi(0)], qi(0));
        if fz.forces(&bg) {
            let mut sys = crate::feasibility::full_system(chart);
            sys.push_equation(Equation::new(vec![qi(1), qi(0), qi(0), qi(-1)], qi(0)));
            let (lo, hi) = crate::feasibility::angle_bounds(convex);
            let sym = solve(&sys, lo, hi);
            if !sym.feasible {
                return Status::Rejected { reason: "geom:symmetric-tile".into() };
            }
            let p: Vec<_> = named.iter().filter(|(n, _)| n.starts_with('P')).cloned().collect();
            return Status::Survivor { identified: identify_lengths(chart, &p) };
        }
    }
    Status::Survivor { identified: None }
}

/// Full pipeline over the pseudo-double wheel with `faces` faces.
pub fn classify_pdw(cfg: ClassifyConfig) -> Result<Vec<Verdict>, MapError> {
    let map = PlanarMap::pseudo_double_wheel(cfg.faces)?;
    Ok(classify_map(&map, cfg, &forbidden_patterns()))
}

/// Full pipeline over any quadrangulation: one verdict per placement orbit
/// that dies before the search, and one per surviving assignment otherwise.
pub fn classify_map(map: &PlanarMap, cfg: ClassifyConfig, patterns: &[Pattern]) -> Vec<Verdict> {
    let tt = cfg.tile();
    let group = map.automorphisms_with_reflections();
    let named = named_charts(cfg.faces, tt);
    let placements = placement_orbits(map, &group);
    let per: Vec<Vec<Verdict>> = placements
        .par_iter()
        .enumerate()
        .map(|(i, b)| {
            let base = |chart: Option<ChartRecord>, status: Status| Verdict {
                schema: VERDICT_SCHEMA.into(),
                faces: cfg.faces,
                tile_type: cfg.tile_type,
                convex: cfg.convex,
                placement: i,
                b_edges: b_endpoints(map, b),
                chart,
                status,
            };
            if cfg.patterns_apply() {
                let hits = occurring_patterns(Host { map, b }, patterns);
                if let Some(h) = hits.first() {
                    return vec![base(None, Status::Rejected { reason: format!("pattern:{h}") })];
                }
            }
            let stab = placement_stabilizer(map, &group, b);
            let charts = assignments(map, b, &stab, SearchOptions::pruned(tt, cfg.convex));
            if charts.is_empty() {
                return vec![base(None, Status::Rejected { reason: "linear:no-assignment".into() })];
            }
            charts
                .iter()
                .map(|c| {
                    let fz = check_chart(c, cfg.convex);
                    let status = match &fz.reason {
                        Some(r) if !fz.feasible => Status::Rejected { reason: format!("linear:{r}") },
                        _ => derive(c, cfg.convex, &named),
                    };
                    base(Some(ChartRecord::from_chart(c)), status)
                })
                .collect()
        })
        .collect();
    per.into_iter().flatten().collect()
}

/// Per-map outcome of the exclusion survey.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapVerdict {
    pub schema: String,
    pub faces: usize,
    pub tile_type: u8,
    pub convex: bool,
    /// Position of the map in the generator's deterministic order.
    pub index: usize,
    /// Planar code of the map, base64.
    pub map: String,
    pub placements: usize,
    /// Placement orbits killed by a forbidden pattern.
    pub pattern_excluded: usize,
    /// Reason counts over all placement orbits.
    pub reasons: BTreeMap<String, usize>,
    /// Excluded when no placement orbit admits a feasible chart; `excluded_by_patterns`
    /// when every orbit already dies to a pattern.
    pub excluded: bool,
    pub excluded_by_patterns: bool,
}

/// Decides for one map whether any placement admits a linearly feasible
/// chart, recording why each placement orbit dies.
pub fn survey_map(map: &PlanarMap, index: usize, cfg: ClassifyConfig, patterns: &[Pattern]) -> MapVerdict {
    let cfg = ClassifyConfig { faces: map.n_faces(), ..cfg };
    use base64::Engine;
    let tt = cfg.tile();
    let group = map.automorphisms_with_reflections();
    let placements = placement_orbits(map, &group);
    let mut reasons: BTreeMap<String, usize> = BTreeMap::new();
    let mut pattern_excluded = 0;
    let mut feasible = false;
    if placements.is_empty() {
        reasons.insert("matching:no-b-placement".into(), 1);
    }
    for b in &placements {
        if cfg.patterns_apply() {
            if let Some(h) = occurring_patterns(Host { map, b }, patterns).first() {
                pattern_excluded += 1;
                *reasons.entry(format!("pattern:{h}")).or_default() += 1;
                continue;
            }
        }
        let mut opts = SearchOptions::pruned(tt, cfg.convex);
        opts.verify = true;
        opts.limit = 1;
        let found = assignments(map, b, &[Automorphism::identity(map)], opts);
        if found.is_empty() {
            *reasons.entry("linear:no-feasible-chart".into()).or_default() += 1;
        } else {
            *reasons.entry("feasible".into()).or_default() += 1;
            feasible = true;
        }
    }
    MapVerdict {
        schema: VERDICT_SCHEMA.into(),
        faces: cfg.faces,
        tile_type: cfg.tile_type,
        convex: cfg.convex,
        index,
        map: base64::engine::general_purpose::STANDARD.encode(crate::planar_code::encode_graph(map)),
        placements: placements.len(),
        pattern_excluded,
        reasons,
        excluded: !feasible,
        excluded_by_patterns: !placements.is_empty() && pattern_excluded == placements.len(),
    }
}

/// Surveys every map; the output order follows the input order.
pub fn survey_maps(maps: &[PlanarMap], cfg: ClassifyConfig) -> Vec<MapVerdict> {
    survey_maps_with(maps, cfg, &forbidden_patterns())
}

/// As [`survey_maps`] with an explicit pattern list.
pub fn survey_maps_with(maps: &[PlanarMap], cfg: ClassifyConfig, patterns: &[Pattern]) -> Vec<MapVerdict> {
    maps.par_iter().enumerate().map(|(i, m)| survey_map(m, i, cfg, patterns)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExclusionSummary {
    pub maps: usize,
    pub excluded: usize,
    pub excluded_by_patterns: usize,
    pub placement_orbits: usize,
    pub pattern_placements: usize,
    /// Share of maps whose every placement dies to a forbidden pattern.
    pub pattern_fraction: f64,
    /// Share of maps with no feasible chart at all.
    pub exclusion_fraction: f64,
}

pub fn summarize(verdicts: &[MapVerdict]) -> ExclusionSummary {
    let maps = verdicts.len();
    let excluded = verdicts.iter().filter(|v| v.excluded).count();
    let by_patterns = verdicts.iter().filter(|v| v.excluded_by_patterns).count();
    let frac = |k: usize| if maps == 0 { 0.0 } else { k as f64 / maps as f64 };
    ExclusionSummary {
        maps,
        excluded,
        excluded_by_patterns: by_patterns,
        placement_orbits: verdicts.iter().map(|v| v.placements).sum(),
        pattern_placements: verdicts.iter().map(|v| v.pattern_excluded).sum(),
        pattern_fraction: frac(by_patterns),
        exclusion_fraction: frac(excluded),
    }
}

/// Edge indices of the b-edges, used by callers that rebuild placements.
pub fn b_flags(map: &PlanarMap, b_edges: &[[usize; 2]]) -> Option<Vec<bool>> {
    let mut b = vec![false; map.n_edges()];
    for &[u, w] in b_edges {
        b[edge_of(map.dart_between(u, w)?)] = true;
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(faces: usize, t: u8, convex: bool) -> ClassifyConfig {
        ClassifyConfig { faces, tile_type: t, convex }
    }

    #[test]
    fn convex_survivors_are_p() {
        for f in [6, 8, 10, 12] {
            for t in [2, 4] {
                let v = classify_pdw(cfg(f, t, true)).unwrap();
                let surv: Vec<_> = v.iter().filter(|x| x.is_survivor()).collect();
                assert!(!surv.is_empty());
                for x in surv {
                    let Status::Survivor { identified: Some(m) } = &x.status else {
                        panic!("F={f} t={t}: unidentified survivor {x:?}");
                    };
                    assert_eq!(m.name, format!("P{f}"));
                }
            }
        }
    }

    #[test]
    fn q_dies_geometrically() {
        let v = classify_pdw(cfg(12, 2, true)).unwrap();
        assert!(v.iter().any(|x| x.reason() == Some("geom:Q12-pole-lemma")));
    }

    #[test]
    fn concave_twelve_keeps_a() {
        let v = classify_pdw(cfg(12, 2, false)).unwrap();
        let a = v.iter().find(|x| matches!(&x.status, Status::Survivor { identified: Some(m) } if m.name == "A"));
        let chart = a.expect("chart A survives").chart.as_ref().unwrap().to_chart().unwrap();
        assert!(identify(&chart, &[("A".into(), build_a())]).is_some());
    }

    #[test]
    fn isohedrality_of_named_charts() {
        for f in [6, 8, 10, 12] {
            for t in [TileType::Type2, TileType::Type4] {
                let iso = is_isohedral_chart(&build_p(f, t).unwrap());
                assert!(iso.transitive, "P{f} {t:?}");
                assert_eq!(iso.orbit_count, 1);
            }
        }
        let a = is_isohedral_chart(&build_a());
        assert!(!a.transitive);
        assert_eq!(a.orbit_count, 3);
        assert_eq!(a.orbits.iter().map(Vec::len).sum::<usize>(), 12);
    }

    #[test]
    fn decorated_orbits_refine_map_orbits() {
        // the bare pdw is face transitive, so decorated orbits can only split
        let a = build_a();
        let g = decorated_automorphisms(&a);
        assert!(g.len() < a.map().automorphisms_with_reflections().len());
        for x in &g {
            for y in &g {
                assert!(g.contains(&x.compose(y)));
            }
        }
    }

    #[test]
    fn identify_sees_through_mirror_and_conjugation() {
        let p = build_p(10, TileType::Type2).unwrap();
        let named = named_charts(10, TileType::Type2);
        let m = identify(&p.mirror(), &named).unwrap();
        assert_eq!(m.name, "P10");
        let c = identify(&p.conjugate().unwrap(), &named).unwrap();
        assert_eq!(c.name, "P10");
        assert!(identify(&build_q(12).unwrap(), &named_charts(12, TileType::Type2)).is_some_and(|m| m.name == "Q12"));
    }

    #[test]
    fn survey_of_wheels() {
        let maps = [PlanarMap::pseudo_double_wheel(8).unwrap(), PlanarMap::pseudo_double_wheel(10).unwrap()];
        for (i, v) in survey_maps(&maps, cfg(8, 2, true)).iter().enumerate() {
            assert_eq!(v.index, i);
            assert!(!v.excluded);
            assert_eq!(v.reasons.values().sum::<usize>(), v.placements);
        }
        let s = summarize(&[]);
        assert_eq!(s.exclusion_fraction, 0.0);
    }
}
