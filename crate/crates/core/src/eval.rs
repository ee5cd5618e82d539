//! Edge-overlap comparison of an extracted graph against a benchmark, and
//! threshold coverage statistics.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cooccur::PairScore;
use crate::network::{Method, SocialNetwork};

/// Overlap of `E1` (extracted) and `E2` (benchmark). A ratio is `None` when
/// its denominator is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphComparison {
    pub shared_edges: u64,
    pub e1: u64,
    pub e2: u64,
    pub sim_g: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f_measure: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// F written in edge counts, `2 I² / (e1·I + e2·I)`. Zero when `I = 0`.
pub fn f_measure_expanded(shared: u64, e1: u64, e2: u64) -> Option<f64> {
    if e1 == 0 || e2 == 0 {
        return None;
    }
    if shared == 0 {
        return Some(0.0);
    }
    let i = shared as f64;
    Some(2.0 * i * i / (e1 as f64 * i + e2 as f64 * i))
}

/// `2I / (e1 + e2)`.
pub fn f_measure_simplified(shared: u64, e1: u64, e2: u64) -> Option<f64> {
    (e1 > 0 && e2 > 0).then(|| 2.0 * shared as f64 / (e1 + e2) as f64)
}

impl GraphComparison {
    /// # Panics
    /// If `shared` exceeds either edge count.
    pub fn from_counts(shared: u64, e1: u64, e2: u64) -> GraphComparison {
        assert!(shared <= e1.min(e2), "shared edges {shared} exceed |E1| = {e1} or |E2| = {e2}");
        let f_measure = f_measure_simplified(shared, e1, e2);
        if let (Some(simple), Some(expanded)) = (f_measure, f_measure_expanded(shared, e1, e2)) {
            debug_assert!((simple - expanded).abs() <= 1e-12, "F forms disagree: {simple} vs {expanded}");
        }
        GraphComparison {
            shared_edges: shared,
            e1,
            e2,
            sim_g: ratio(shared, e1 + e2 - shared),
            precision: ratio(shared, e1),
            recall: ratio(shared, e2),
            f_measure,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("comparison serializes")
    }

    pub fn to_table(&self) -> String {
        let cell = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.6}"));
        let mut out = String::new();
        writeln!(out, "|E1 ∩ E2|   {}", self.shared_edges).unwrap();
        writeln!(out, "|E1|        {}", self.e1).unwrap();
        writeln!(out, "|E2|        {}", self.e2).unwrap();
        writeln!(out, "sim_G       {}", cell(self.sim_g)).unwrap();
        writeln!(out, "precision   {}", cell(self.precision)).unwrap();
        writeln!(out, "recall      {}", cell(self.recall)).unwrap();
        writeln!(out, "F           {}", cell(self.f_measure)).unwrap();
        out
    }

    pub const CSV_HEADER: &'static str = "shared_edges,e1,e2,sim_g,precision,recall,f_measure";

    /// One CSV row without header; undefined metrics are empty cells.
    pub fn to_csv_row(&self) -> String {
        let cell = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
        format!(
            "{},{},{},{},{},{},{}",
            self.shared_edges,
            self.e1,
            self.e2,
            cell(self.sim_g),
            cell(self.precision),
            cell(self.recall),
            cell(self.f_measure)
        )
    }
}

/// Unordered name pairs present in both graphs. Nodes are matched by
/// normalized name; parallel edges count once.
pub fn edge_intersection(g1: &SocialNetwork, g2: &SocialNetwork) -> u64 {
    let p2 = g2.name_pairs();
    g1.name_pairs().iter().filter(|p| p2.contains(*p)).count() as u64
}

pub fn compare_graphs(g1: &SocialNetwork, g2: &SocialNetwork) -> GraphComparison {
    let (p1, p2) = (g1.name_pairs(), g2.name_pairs());
    let shared = p1.intersection(&p2).count() as u64;
    GraphComparison::from_counts(shared, p1.len() as u64, p2.len() as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodCoverage {
    pub method: Method,
    pub scored: u64,
    pub above_threshold: u64,
    pub undefined: u64,
    /// `above_threshold / potential_pairs`.
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub alpha: f64,
    pub strict: bool,
    pub potential_pairs: u64,
    pub methods: Vec<MethodCoverage>,
}

/// Counts pairs above `alpha` per method, as a fraction of `potential_pairs`.
///
/// # Panics
/// If `potential_pairs` is zero.
pub fn coverage_report(scores: &[PairScore], alpha: f64, potential_pairs: u64, strict: bool) -> CoverageReport {
    assert!(potential_pairs > 0, "coverage needs a positive pair universe");
    let mut per: BTreeMap<Method, (u64, u64, u64)> = BTreeMap::new();
    for s in scores {
        let entry = per.entry(s.method).or_default();
        entry.0 += 1;
        if if strict { s.score > alpha } else { s.score >= alpha } {
            entry.1 += 1;
        }
        if s.undefined {
            entry.2 += 1;
        }
    }
    let methods = per
        .into_iter()
        .map(|(method, (scored, above, undefined))| MethodCoverage {
            method,
            scored,
            above_threshold: above,
            undefined,
            fraction: above as f64 / potential_pairs as f64,
        })
        .collect();
    CoverageReport { alpha, strict, potential_pairs, methods }
}

impl CoverageReport {
    pub fn to_table(&self) -> String {
        let mut out = format!("alpha {} ({}), {} potential pairs\n", self.alpha, if self.strict { ">" } else { ">=" }, self.potential_pairs);
        for m in &self.methods {
            writeln!(
                out,
                "{:<8} {:>8} above of {:>8} scored ({:.1}%), {} undefined",
                m.method.as_str(),
                m.above_threshold,
                m.scored,
                m.fraction * 100.0,
                m.undefined
            )
            .unwrap();
        }
        out
    }
}
