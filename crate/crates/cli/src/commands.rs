use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sqtile::chart::{build_a, build_p, build_q, Chart, TileType};
use sqtile::classify::{identify, named_charts, Q_SAMPLES};
use sqtile::feasibility::check_chart;
use sqtile::geom::{closing_angles, realize_chart, reject_q, RealizeOptions, SphericalTiling};
use sqtile::io::ChartRecord;
use sqtile::planar_code::{read_planar_code, write_planar_code};
use sqtile::quadgen::{degree_histogram, enumerate_quadrangulations, QuadClass};
use sqtile::svg::{render_chart, render_tiling};
use sqtile::GeomError;

use crate::report::{self, Mode, Outcome, RunConfig};
use crate::{ChartArgs, ChartSource, Class, ClassifyArgs, Fail, GenArgs, RealizeArgs, RenderArgs};

pub const TILING_SCHEMA: &str = "sqtile.tiling/1";
pub const REJECTION_SCHEMA: &str = "sqtile.rejection/1";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Fail + '_ {
    move |source| Fail::Io { path: path.to_path_buf(), source }
}

fn write_out(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(io_err(p)),
        None => std::io::stdout().write_all(bytes).map_err(io_err(Path::new("<stdout>"))),
    }
}

fn check_faces(faces: usize) -> Result<(), Fail> {
    if faces < 6 || faces % 2 == 1 {
        return Err(Fail::Usage(format!("--faces must be even and at least 6, got {faces}")));
    }
    Ok(())
}

fn degree_row(counts: &[usize]) -> String {
    counts.iter().enumerate().filter(|(_, &n)| n > 0).map(|(k, n)| format!("Δ={}: {n}", k + 1)).collect::<Vec<_>>().join(", ")
}

pub fn gen(a: &GenArgs) -> Result<(), Fail> {
    check_faces(a.faces)?;
    let class = match a.class {
        Class::Q2 => QuadClass::Q2,
        Class::Q3 => QuadClass::Q3,
    };
    let ours: Vec<_> = enumerate_quadrangulations(a.faces, class).into_iter().map(|n| n.map).collect();
    if let Some(path) = &a.ingest {
        let bytes = fs::read(path).map_err(io_err(path))?;
        let theirs = read_planar_code(&bytes).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
        let mut codes = BTreeSet::new();
        for (i, m) in theirs.iter().enumerate() {
            let ok = m.is_simple() && m.is_quadrangulation() && m.min_degree() >= 3 && m.n_faces() == a.faces;
            if !ok {
                println!("graph {i}: not a simple quadrangulation with {} faces and minimum degree 3", a.faces);
            }
            if !codes.insert(m.canonical_code_unoriented()) {
                println!("graph {i}: duplicate isomorphism class");
            }
        }
        let mine: BTreeSet<_> = ours.iter().map(|m| m.canonical_code_unoriented()).collect();
        println!("ingested {} graphs, {} classes", theirs.len(), codes.len());
        println!("{}", degree_row(&degree_histogram(theirs.iter())));
        println!("agrees with enumeration: {}", codes == mine);
        return Ok(());
    }
    if let Some(path) = &a.out {
        fs::write(path, write_planar_code(&ours)).map_err(io_err(path))?;
    }
    if let Some(m) = ours.iter().find(|m| !m.is_quadrangulation() || m.min_degree() < 3 || m.n_faces() != a.faces) {
        return Err(Fail::Invariant(format!("generator emitted a map outside the class: {:?}", m.degrees())));
    }
    println!("F={} class={:?}: {} maps", a.faces, a.class, ours.len());
    println!("{}", degree_row(&degree_histogram(ours.iter())));
    Ok(())
}

pub fn classify(a: &ClassifyArgs) -> Result<(), Fail> {
    if let Some(path) = &a.replay {
        return replay(path);
    }
    let cfg = if a.all_maps {
        let faces = a.faces.ok_or_else(|| Fail::Usage("--all-maps needs --faces".into()))?;
        check_faces(faces)?;
        RunConfig {
            command: "classify".into(),
            mode: Mode::AllMaps,
            faces,
            class: Class::Q2,
            tile_type: a.tile_type,
            convex: a.convex,
            patterns: a.patterns.clone(),
        }
    } else {
        let faces = a.pdw.ok_or_else(|| Fail::Usage("give --pdw F, --all-maps --faces F or --replay".into()))?;
        check_faces(faces)?;
        RunConfig {
            command: "classify".into(),
            mode: Mode::Pdw,
            faces,
            class: Class::Q2,
            tile_type: a.tile_type,
            convex: a.convex,
            patterns: a.patterns.clone(),
        }
    };
    let (lines, outcome) = report::build(&cfg)?;
    if let Some(path) = &a.out {
        let mut text = lines.join("\n");
        text.push('\n');
        fs::write(path, text).map_err(io_err(path))?;
    }
    let mode = if cfg.convex { "convex" } else { "possibly concave" };
    match outcome {
        Outcome::Pdw(s) => {
            println!("pdw F={} type {} ({mode}): {} candidates, {} survivors", cfg.faces, cfg.tile_type, s.candidates, s.survivors);
            for (reason, n) in &s.reasons {
                println!("  rejected {n}: {reason}");
            }
            let names: Vec<&str> = s.identified.keys().map(String::as_str).collect();
            println!("survivors modulo mirror and conjugation: {}", if names.is_empty() { "none".into() } else { names.join(", ") });
            for (name, iso) in &s.isohedrality {
                let word = if iso.transitive { "isohedral" } else { "not isohedral" };
                println!("  {name}: {word}, {} face orbits, decorated group order {}", iso.orbit_count, iso.group_order);
            }
            if s.unidentified > 0 {
                println!("unidentified survivors: {} (face orbit counts {:?})", s.unidentified, s.unidentified_orbit_counts);
            }
        }
        Outcome::AllMaps(s) => {
            let e = &s.exclusion;
            println!("all maps F={} type {} ({mode}): {} maps", cfg.faces, cfg.tile_type, e.maps);
            println!("excluded by forbidden substructures: {} ({:.4})", e.excluded_by_patterns, e.pattern_fraction);
            println!("excluded in total: {} ({:.4})", e.excluded, e.exclusion_fraction);
            println!("placement orbits killed by forbidden substructures: {} of {}", e.pattern_placements, e.placement_orbits);
            for (reason, n) in &s.reasons {
                println!("  placement orbits {n}: {reason}");
            }
        }
    }
    Ok(())
}

fn replay(path: &Path) -> Result<(), Fail> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let stored: Vec<&str> = text.lines().collect();
    let first = stored.first().ok_or_else(|| Fail::Usage(format!("{}: empty report", path.display())))?;
    let cfg = report::read_config(first)?;
    let (lines, _) = report::build(&cfg)?;
    if let Some(i) = (0..stored.len().max(lines.len())).find(|&i| stored.get(i).copied() != lines.get(i).map(String::as_str)) {
        return Err(Fail::Invariant(format!("replay differs at line {}", i + 1)));
    }
    println!("replay: {} records identical", lines.len());
    Ok(())
}

fn parse_named(name: &str, tile_type: u8) -> Result<Chart, Fail> {
    let tt = TileType::from_number(tile_type).ok_or_else(|| Fail::Usage(format!("tile type {tile_type}")))?;
    let usage = |e: sqtile::ChartError| Fail::Usage(e.to_string());
    if name == "A" {
        return Ok(build_a());
    }
    let faces = |s: &str| s.parse::<usize>().map_err(|_| Fail::Usage(format!("unknown chart {name}")));
    if let Some(f) = name.strip_prefix('P') {
        build_p(faces(f)?, tt).map_err(usage)
    } else if let Some(f) = name.strip_prefix('Q') {
        build_q(faces(f)?).map_err(usage)
    } else {
        Err(Fail::Usage(format!("unknown chart {name}; use P<F>, Q<F> or A")))
    }
}

fn load_chart(src: &ChartSource) -> Result<Chart, Fail> {
    match (&src.named, &src.chart) {
        (Some(n), _) => parse_named(n, src.tile_type),
        (None, Some(p)) => {
            let text = fs::read_to_string(p).map_err(io_err(p))?;
            let rec: ChartRecord =
                serde_json::from_str(&text).map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?;
            rec.to_chart().map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))
        }
        (None, None) => Err(Fail::Usage("give --named or --chart".into())),
    }
}

fn parse_params(s: &str) -> Result<[f64; 4], Fail> {
    let bad = || Fail::Usage(format!("--params needs four numbers, got {s}"));
    let vals: Vec<f64> = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            match t.split_once('/') {
                Some((n, d)) => Ok(n.trim().parse::<f64>().map_err(|_| bad())? / d.trim().parse::<f64>().map_err(|_| bad())?),
                None => t.parse::<f64>().map_err(|_| bad()),
            }
        })
        .collect::<Result<_, _>>()?;
    vals.try_into().map_err(|_| bad())
}

#[derive(Serialize)]
struct TilingDoc<'a> {
    schema: &'static str,
    tiling: &'a SphericalTiling,
}

#[derive(Serialize)]
struct RejectionDoc<'a, T> {
    schema: &'static str,
    chart: &'a str,
    rejection: &'a T,
}

pub fn realize(a: &RealizeArgs) -> Result<(), Fail> {
    let chart = load_chart(&a.source)?;
    let named = named_charts(chart.n_faces(), chart.tile_type());
    if let Some(m) = identify(&chart, &named).filter(|m| m.name.starts_with('Q')) {
        let r = reject_q(chart.n_faces(), Q_SAMPLES).map_err(|e| Fail::Invariant(e.to_string()))?;
        let doc = RejectionDoc { schema: REJECTION_SCHEMA, chart: &m.name, rejection: &r };
        let text = serde_json::to_string_pretty(&doc).map_err(|e| Fail::Invariant(e.to_string()))?;
        write_out(a.out.as_ref(), format!("{text}\n").as_bytes())?;
        let fired = |b: bool| if b { "fired" } else { "did not fire" };
        eprintln!(
            "{}: {} over {} samples; concave branch {}, convex branch {}",
            m.name,
            if r.rejected() { "rejected" } else { "not rejected" },
            r.samples.len(),
            fired(r.concave_fired),
            fired(r.convex_fired)
        );
        return Ok(());
    }
    let angles = match &a.params {
        Some(p) => parse_params(p)?,
        None => {
            let modes: &[bool] = if a.convex { &[true] } else { &[true, false] };
            let mut found = None;
            for &convex in modes {
                let fz = check_chart(&chart, convex);
                if !fz.feasible {
                    continue;
                }
                if let Ok(x) = closing_angles(&chart, &fz, convex, a.tolerance) {
                    found = Some(x);
                    break;
                }
            }
            found.ok_or_else(|| Fail::Usage("no closing angles in the feasible region".into()))?
        }
    };
    if a.seed_face >= chart.n_faces() {
        return Err(Fail::Usage(format!("--seed-face {} out of range", a.seed_face)));
    }
    let opts = RealizeOptions { tolerance: a.tolerance, seed_face: a.seed_face };
    match realize_chart(&chart, angles, opts) {
        Ok(t) => {
            let doc = TilingDoc { schema: TILING_SCHEMA, tiling: &t };
            let text = serde_json::to_string_pretty(&doc).map_err(|e| Fail::Invariant(e.to_string()))?;
            write_out(a.out.as_ref(), format!("{text}\n").as_bytes())?;
            if let Some(p) = &a.svg {
                fs::write(p, render_tiling(&t)).map_err(io_err(p))?;
            }
            eprintln!(
                "realized with angles {:?}: closure residual {:.3e}, max residual {:.3e}, Gauss-Bonnet error {:.3e}, vertex angle error {:.3e}, concave {}",
                angles,
                t.closure_residual,
                t.max_residual(),
                t.gauss_bonnet_error,
                t.vertex_angle_error,
                t.concave
            );
            Ok(())
        }
        Err(GeomError::Closure { residual, edge }) => {
            let edge = edge.map_or_else(|| "none".to_string(), |e| e.to_string());
            eprintln!("realization failed: residual {residual:.3e}, first inconsistent edge {edge}");
            Ok(())
        }
        Err(e) => {
            eprintln!("realization failed: {e}");
            Ok(())
        }
    }
}

pub fn render(a: &RenderArgs) -> Result<(), Fail> {
    let svg = match &a.tiling {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io_err(p))?;
            let doc: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?;
            if doc.get("schema").and_then(|s| s.as_str()) != Some(TILING_SCHEMA) {
                return Err(Fail::Usage(format!("{}: not a {TILING_SCHEMA} document", p.display())));
            }
            let t: SphericalTiling = serde_json::from_value(doc["tiling"].clone())
                .map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?;
            render_tiling(&t)
        }
        None => render_chart(&load_chart(&a.source)?),
    };
    write_out(a.out.as_ref(), svg.as_bytes())
}

pub fn chart(a: &ChartArgs) -> Result<(), Fail> {
    let chart = load_chart(&a.source)?;
    let text = serde_json::to_string_pretty(&ChartRecord::from_chart(&chart)).map_err(|e| Fail::Invariant(e.to_string()))?;
    write_out(a.out.as_ref(), format!("{text}\n").as_bytes())
}
