//! JSON records for charts. The map travels as base64 planar code, and
//! decorations are keyed by `(tail, head)` so they survive dart renumbering.

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

use crate::chart::{Chart, Sym, TileType};
use crate::error::ChartError;
use crate::map::edge_of;
use crate::planar_code::{decode_graph, encode_graph};

pub const CHART_SCHEMA: &str = "sqtile.chart/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartRecord {
    pub schema: String,
    pub faces: usize,
    pub tile_type: u8,
    /// Planar code of the map, base64.
    pub map: String,
    /// Endpoints of the b-edges.
    pub b_edges: Vec<[usize; 2]>,
    /// `(tail, head, symbol)`: the corner at `tail` just before the edge
    /// toward `head` in the rotation.
    pub corners: Vec<(usize, usize, String)>,
}

impl ChartRecord {
    pub fn from_chart(chart: &Chart) -> ChartRecord {
        let m = chart.map();
        let b_edges = chart
            .b_edges()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(e, _)| {
                let (u, w) = m.edge_endpoints(e);
                [u.min(w), u.max(w)]
            })
            .collect();
        let corners = (0..m.n_darts())
            .map(|d| (m.tail(d), m.head(d), chart.angle(d).name().to_string()))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        ChartRecord {
            schema: CHART_SCHEMA.into(),
            faces: chart.n_faces(),
            tile_type: chart.tile_type().number(),
            map: STANDARD.encode(encode_graph(m)),
            b_edges,
            corners,
        }
    }

    pub fn to_chart(&self) -> Result<Chart, ChartError> {
        let bad = |why: String| ChartError::Decode(why);
        if self.schema != CHART_SCHEMA {
            return Err(bad(format!("unknown schema {}", self.schema)));
        }
        let tile_type =
            TileType::from_number(self.tile_type).ok_or_else(|| bad(format!("tile type {}", self.tile_type)))?;
        let bytes = STANDARD.decode(&self.map).map_err(|e| bad(e.to_string()))?;
        let (map, _) = decode_graph(&bytes)?;
        let dart = |u: usize, w: usize| {
            map.dart_between(u, w).ok_or_else(|| bad(format!("no edge {u}-{w}")))
        };
        let mut b = vec![false; map.n_edges()];
        for &[u, w] in &self.b_edges {
            b[edge_of(dart(u, w)?)] = true;
        }
        let mut syms = vec![None; map.n_darts()];
        for (u, w, s) in &self.corners {
            let sym = Sym::parse(s).ok_or_else(|| bad(format!("angle symbol {s}")))?;
            syms[dart(*u, *w)?] = Some(sym);
        }
        if let Some(d) = syms.iter().position(Option::is_none) {
            return Err(ChartError::Undecorated(d));
        }
        let syms: Vec<Sym> = syms.into_iter().map(|s| s.expect("checked")).collect();
        let m = map.clone();
        let chart = Chart::from_corner_symbols(map, tile_type, &b, |_, walk| (m.tail(walk[0]), syms[walk[0]]))?;
        if chart.n_faces() != self.faces {
            return Err(bad(format!("{} faces, record says {}", chart.n_faces(), self.faces)));
        }
        if let Some(d) = (0..syms.len()).find(|&d| chart.angle(d) != syms[d]) {
            return Err(bad(format!("corner at dart {d} contradicts its tile")));
        }
        Ok(chart)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{build_a, build_p};

    #[test]
    fn named_charts_round_trip() {
        for c in [build_p(12, TileType::Type2).unwrap(), build_p(10, TileType::Type4).unwrap(), build_a()] {
            let rec = ChartRecord::from_chart(&c);
            let json = serde_json::to_string(&rec).unwrap();
            let back: ChartRecord = serde_json::from_str(&json).unwrap();
            let d = back.to_chart().unwrap();
            assert!(d.map().is_isomorphic(c.map()));
            assert_eq!(ChartRecord::from_chart(&d), rec);
        }
    }

    #[test]
    fn tampered_corner_is_rejected() {
        let mut rec = ChartRecord::from_chart(&build_a());
        rec.corners[0].2 = if rec.corners[0].2 == "γ" { "β".into() } else { "γ".into() };
        assert!(rec.to_chart().is_err());
    }
}
