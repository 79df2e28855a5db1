use sqtile::chart::{build_a, build_p, build_q, TileType};
use sqtile::classify::{classify_pdw, ClassifyConfig};
use sqtile::io::ChartRecord;
use sqtile::planar_code::{read_planar_code, write_planar_code};
use sqtile::quadgen::{enumerate_quadrangulations, QuadClass};

#[test]
fn planar_code_round_trips_the_corpus() {
    let maps: Vec<_> = enumerate_quadrangulations(12, QuadClass::Q2).into_iter().map(|n| n.map).collect();
    let back = read_planar_code(&write_planar_code(&maps)).unwrap();
    assert_eq!(back.len(), maps.len());
    for (a, b) in maps.iter().zip(&back) {
        assert_eq!(a.canonical_code(), b.canonical_code());
    }
}

#[test]
fn chart_records_survive_json() {
    for chart in [build_a(), build_p(10, TileType::Type4).unwrap(), build_q(12).unwrap()] {
        let rec = ChartRecord::from_chart(&chart);
        let text = serde_json::to_string(&rec).unwrap();
        let back: ChartRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(ChartRecord::from_chart(&back.to_chart().unwrap()), rec);
    }
}

#[test]
fn classification_is_deterministic() {
    let cfg = ClassifyConfig { faces: 10, tile_type: 2, convex: false };
    let a = serde_json::to_string(&classify_pdw(cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&classify_pdw(cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn q3_is_a_subset_of_q2() {
    for faces in [10, 12, 14] {
        let q2: Vec<_> = enumerate_quadrangulations(faces, QuadClass::Q2).into_iter().map(|n| n.map).collect();
        let q3 = enumerate_quadrangulations(faces, QuadClass::Q3);
        assert!(q3.len() <= q2.len());
        for n in &q3 {
            assert!(n.map.is_three_connected());
            assert!(q2.iter().any(|m| m.is_isomorphic_unoriented(&n.map)));
        }
    }
}
