//! Deterministic SVG drawings of charts and realized tilings. Thick strokes
//! are b-edges, dotted strokes are c-edges.

use std::fmt::Write;

use crate::chart::{Chart, Len};
use crate::geom::sphere::{add, normalize, scale, V3};
use crate::geom::SphericalTiling;

const SIZE: f64 = 480.0;
const RADIUS: f64 = 200.0;
const TUTTE_SWEEPS: usize = 2000;

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
}

fn stroke(len: Len) -> &'static str {
    match len {
        Len::B => r#"stroke="black" stroke-width="4""#,
        Len::C => r#"stroke="black" stroke-width="1.5" stroke-dasharray="2 4""#,
        Len::A => r#"stroke="black" stroke-width="1.5""#,
    }
}

/// Tutte embedding with the largest-index face as the outer boundary.
fn tutte_layout(chart: &Chart) -> Vec<(f64, f64)> {
    let m = chart.map();
    let outer = &chart.faces()[chart.n_faces() - 1];
    let c = SIZE / 2.0;
    let mut pos = vec![(c, c); m.n_vertices()];
    let mut fixed = vec![false; m.n_vertices()];
    for (k, &d) in outer.iter().enumerate() {
        let t = std::f64::consts::TAU * k as f64 / outer.len() as f64;
        pos[m.tail(d)] = (c + RADIUS * t.cos(), c - RADIUS * t.sin());
        fixed[m.tail(d)] = true;
    }
    for _ in 0..TUTTE_SWEEPS {
        for v in 0..m.n_vertices() {
            if fixed[v] {
                continue;
            }
            let (mut x, mut y) = (0.0, 0.0);
            for w in m.neighbors(v) {
                x += pos[w].0;
                y += pos[w].1;
            }
            let k = m.degree(v) as f64;
            pos[v] = (x / k, y / k);
        }
    }
    pos
}

/// Schematic drawing of a chart with an angle symbol in every corner.
pub fn render_chart(chart: &Chart) -> String {
    let m = chart.map();
    let pos = tutte_layout(chart);
    let mut out = String::new();
    header(&mut out);
    for e in 0..m.n_edges() {
        let (u, w) = m.edge_endpoints(e);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {} data-length="{}"/>"#,
            pos[u].0,
            pos[u].1,
            pos[w].0,
            pos[w].1,
            stroke(chart.length(e)),
            chart.length(e).name()
        );
    }
    let outer = chart.n_faces() - 1;
    for (f, walk) in chart.faces().iter().enumerate() {
        let n = walk.len() as f64;
        let centroid = walk.iter().fold((0.0, 0.0), |acc, &d| {
            let p = pos[m.tail(d)];
            (acc.0 + p.0 / n, acc.1 + p.1 / n)
        });
        for &d in walk {
            let p = pos[m.tail(d)];
            // outer corners point away from the drawing's center
            let (tx, ty) = if f == outer { (2.0 * p.0 - SIZE / 2.0, 2.0 * p.1 - SIZE / 2.0) } else { centroid };
            let (dx, dy) = (tx - p.0, ty - p.1);
            let r = (dx * dx + dy * dy).sqrt().max(1e-9);
            let k = 14.0_f64.min(r / 2.0);
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
                p.0 + dx / r * k,
                p.1 + dy / r * k,
                chart.angle(d).name()
            );
        }
    }
    for (v, p) in pos.iter().enumerate() {
        let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="black" data-vertex="{v}"/>"#, p.0, p.1);
    }
    out.push_str("</svg>\n");
    out
}

/// Orthographic view from `+z`; far-side arcs are drawn faint.
pub fn render_tiling(t: &SphericalTiling) -> String {
    const STEPS: usize = 24;
    let c = SIZE / 2.0;
    let project = |p: V3| (c + RADIUS * p[0], c - RADIUS * p[1]);
    let mut out = String::new();
    header(&mut out);
    let _ = writeln!(out, r#"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="gray"/>"#);
    let [ab, _, cd, _] = t.edges;
    let mut drawn = std::collections::BTreeSet::new();
    for face in &t.faces {
        for k in 0..face.len() {
            let (u, w) = (face[k], face[(k + 1) % face.len()]);
            if !drawn.insert((u.min(w), u.max(w))) {
                continue;
            }
            let (p, q) = (t.positions[u], t.positions[w]);
            let len = crate::geom::sphere::arc(p, q);
            let style = if t.b_edges.contains(&(u.min(w), u.max(w))) {
                stroke(Len::B)
            } else if (len - cd).abs() < 1e-6 && (len - ab).abs() > 1e-6 {
                stroke(Len::C)
            } else {
                stroke(Len::A)
            };
            let pts: Vec<V3> = (0..=STEPS)
                .map(|i| {
                    let s = i as f64 / STEPS as f64;
                    normalize(add(scale(p, 1.0 - s), scale(q, s)))
                })
                .collect();
            for pair in pts.windows(2) {
                let front = pair[0][2] + pair[1][2] >= 0.0;
                let (a, b) = (project(pair[0]), project(pair[1]));
                let opacity = if front { "1" } else { "0.15" };
                let _ = writeln!(
                    out,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" {style} stroke-opacity="{opacity}"/>"#,
                    a.0, a.1, b.0, b.1
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Number of b-edges drawn as thick strokes in a chart drawing.
pub fn thick_edges(svg: &str) -> usize {
    svg.matches(r#"data-length="b""#).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{build_a, build_p, TileType};
    use crate::map::edge_of;

    #[test]
    fn p12_has_six_thick_edges() {
        let svg = render_chart(&build_p(12, TileType::Type2).unwrap());
        assert_eq!(thick_edges(&svg), 6);
        assert_eq!(svg.matches("<text").count(), 48);
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = build_a();
        assert_eq!(render_chart(&a), render_chart(&a.clone()));
        let p4 = render_chart(&build_p(8, TileType::Type4).unwrap());
        assert_eq!(p4.matches(r#"data-length="c""#).count(), 4);
    }

    #[test]
    fn chart_a_thick_edges_follow_the_placement() {
        let a = build_a();
        let svg = render_chart(&a);
        assert_eq!(thick_edges(&svg), 6);
        let m = a.map();
        for (u, w) in [(12, 0), (1, 13), (3, 4), (12, 6), (7, 13), (9, 10)] {
            assert_eq!(a.length(edge_of(m.dart_between(u, w).unwrap())), Len::B);
        }
    }
}
