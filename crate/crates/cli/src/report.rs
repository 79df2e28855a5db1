//! JSON-lines classification reports and their replay.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sqtile::classify::{
    classify_map, is_isohedral_chart, named_charts, summarize, survey_maps_with, ClassifyConfig, ExclusionSummary,
    Isohedrality, Status, Verdict,
};
use sqtile::patterns::{forbidden_patterns, Pattern};
use sqtile::PlanarMap;
use sqtile::io::ChartRecord;
use sqtile::quadgen::{enumerate_quadrangulations, QuadClass};

use crate::{Class, Fail};

pub const REPORT_SCHEMA: &str = "sqtile.report/1";
pub const SUMMARY_SCHEMA: &str = "sqtile.summary/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Pdw,
    AllMaps,
}

/// Everything that determines a report's content. Worker count and output
/// path are left out so they cannot change it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub mode: Mode,
    pub faces: usize,
    pub class: Class,
    pub tile_type: u8,
    pub convex: bool,
    /// Pattern files added to the built-in set.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patterns: Vec<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    schema: String,
    config: RunConfig,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PdwSummary {
    pub schema: String,
    pub candidates: usize,
    pub survivors: usize,
    pub reasons: BTreeMap<String, usize>,
    /// Survivor counts per named chart.
    pub identified: BTreeMap<String, usize>,
    pub unidentified: usize,
    /// Decorated-map isohedrality of each named chart among the survivors.
    pub isohedrality: BTreeMap<String, Isohedrality>,
    /// Face orbit counts of the unidentified survivors.
    pub unidentified_orbit_counts: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AllMapsSummary {
    pub schema: String,
    #[serde(flatten)]
    pub exclusion: ExclusionSummary,
    pub reasons: BTreeMap<String, usize>,
}

pub enum Outcome {
    Pdw(PdwSummary),
    AllMaps(AllMapsSummary),
}

fn json<T: Serialize>(x: &T) -> Result<String, Fail> {
    serde_json::to_string(x).map_err(|e| Fail::Invariant(format!("serialization: {e}")))
}

/// Runs the configured classification and renders every report line.
pub fn build(cfg: &RunConfig) -> Result<(Vec<String>, Outcome), Fail> {
    let ccfg = ClassifyConfig { faces: cfg.faces, tile_type: cfg.tile_type, convex: cfg.convex };
    let patterns = load_patterns(&cfg.patterns)?;
    let mut lines = vec![json(&Header { schema: REPORT_SCHEMA.into(), config: cfg.clone() })?];
    match cfg.mode {
        Mode::Pdw => {
            let map = PlanarMap::pseudo_double_wheel(cfg.faces).map_err(|e| Fail::Usage(e.to_string()))?;
            let verdicts = classify_map(&map, ccfg, &patterns);
            for v in &verdicts {
                check_record(v)?;
                lines.push(json(v)?);
            }
            let summary = pdw_summary(cfg, &verdicts)?;
            lines.push(json(&summary)?);
            Ok((lines, Outcome::Pdw(summary)))
        }
        Mode::AllMaps => {
            let class = match cfg.class {
                Class::Q2 => QuadClass::Q2,
                Class::Q3 => QuadClass::Q3,
            };
            let maps: Vec<_> = enumerate_quadrangulations(cfg.faces, class).into_iter().map(|n| n.map).collect();
            log::info!("surveying {} maps", maps.len());
            let verdicts = survey_maps_with(&maps, ccfg, &patterns);
            let mut reasons: BTreeMap<String, usize> = BTreeMap::new();
            for v in &verdicts {
                for (k, n) in &v.reasons {
                    *reasons.entry(k.clone()).or_default() += n;
                }
                lines.push(json(v)?);
            }
            let summary =
                AllMapsSummary { schema: SUMMARY_SCHEMA.into(), exclusion: summarize(&verdicts), reasons };
            lines.push(json(&summary)?);
            Ok((lines, Outcome::AllMaps(summary)))
        }
    }
}

/// Built-in patterns plus the given files, each with its mirror image.
fn load_patterns(paths: &[PathBuf]) -> Result<Vec<Pattern>, Fail> {
    let mut out = forbidden_patterns();
    for p in paths {
        let pat = Pattern::from_path(p).map_err(|e| Fail::Usage(format!("{}: {e}", p.display())))?;
        out.push(pat.clone());
        out.push(pat.mirror());
    }
    Ok(out)
}

/// Every stored chart must decode back to itself.
fn check_record(v: &Verdict) -> Result<(), Fail> {
    if let Some(rec) = &v.chart {
        let chart = rec.to_chart().map_err(|e| Fail::Invariant(format!("chart record: {e}")))?;
        if ChartRecord::from_chart(&chart) != *rec {
            return Err(Fail::Invariant("chart record does not round-trip".into()));
        }
    }
    Ok(())
}

fn pdw_summary(cfg: &RunConfig, verdicts: &[Verdict]) -> Result<PdwSummary, Fail> {
    let tt = sqtile::chart::TileType::from_number(cfg.tile_type).ok_or_else(|| Fail::Usage("tile type".into()))?;
    let named = named_charts(cfg.faces, tt);
    let mut s = PdwSummary {
        schema: SUMMARY_SCHEMA.into(),
        candidates: verdicts.len(),
        survivors: 0,
        reasons: BTreeMap::new(),
        identified: BTreeMap::new(),
        unidentified: 0,
        isohedrality: BTreeMap::new(),
        unidentified_orbit_counts: Vec::new(),
    };
    for v in verdicts {
        match &v.status {
            Status::Rejected { reason } => *s.reasons.entry(reason.clone()).or_default() += 1,
            Status::Survivor { identified: Some(m) } => {
                s.survivors += 1;
                *s.identified.entry(m.name.clone()).or_default() += 1;
                if !s.isohedrality.contains_key(&m.name) {
                    let (_, chart) = named
                        .iter()
                        .find(|(n, _)| *n == m.name)
                        .ok_or_else(|| Fail::Invariant(format!("unknown named chart {}", m.name)))?;
                    s.isohedrality.insert(m.name.clone(), is_isohedral_chart(chart));
                }
            }
            Status::Survivor { identified: None } => {
                s.survivors += 1;
                s.unidentified += 1;
                let rec = v.chart.as_ref().ok_or_else(|| Fail::Invariant("survivor without chart".into()))?;
                let chart = rec.to_chart().map_err(|e| Fail::Invariant(e.to_string()))?;
                s.unidentified_orbit_counts.push(is_isohedral_chart(&chart).orbit_count);
            }
        }
    }
    Ok(s)
}

/// Parses the header of a stored report.
pub fn read_config(first_line: &str) -> Result<RunConfig, Fail> {
    let h: Header = serde_json::from_str(first_line).map_err(|e| Fail::Usage(format!("report header: {e}")))?;
    if h.schema != REPORT_SCHEMA {
        return Err(Fail::Usage(format!("unknown report schema {}", h.schema)));
    }
    Ok(h.config)
}
