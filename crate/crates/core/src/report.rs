//! Structured report documents.
//!
//! Documents are `serde_json::Value` trees with sorted keys and no run
//! metadata, so equal inputs give byte-identical output. Means are carried as
//! exact fractions of femtoseconds next to a rounded rendering.

use serde_json::{json, Value};

use crate::delay::{
    aggregate_electrical, arrival_times, feasibility_max_size, natural_delays, ArrivalProfile, DelayError,
    DelayProfile, ElectricalReport, FeasibilityReport,
};
use crate::library::CornerId;
use crate::par::Execution;
use crate::region::RegionModel;
use crate::route::{InputSelect, RctTopology};
use crate::skew::{cost_report, CostReport, OracleResult, PairSet, PrunedCandidates, SearchOutcome, TapAssignment};
use crate::units::{MeanFs, TimeFs};

pub const ANALYSIS_SCHEMA: &str = "rct-analysis/1";
pub const OPTIMIZATION_SCHEMA: &str = "rct-optimization/1";

pub fn time(t: TimeFs) -> Value {
    json!({ "fs": t.fs(), "ns": t.ns_string() })
}

fn times(ts: &[TimeFs]) -> Value {
    Value::Array(ts.iter().map(|&t| time(t)).collect())
}

/// `{num_fs, den, fs, ps}`: the reduced fraction plus its half-even rounding.
pub fn exact(m: MeanFs) -> Value {
    let (num, den) = m.reduced();
    let fs = m.rounded_fs();
    json!({ "num_fs": num, "den": den, "fs": fs.fs(), "ps": fs.ps_string() })
}

/// Everything known about one corner for a fixed assignment.
#[derive(Clone, Debug)]
pub struct CornerAnalysis {
    pub corner: CornerId,
    pub profile: DelayProfile,
    pub arrivals: ArrivalProfile,
    pub cost: CostReport,
    pub feasibility: FeasibilityReport,
    pub electrical: ElectricalReport,
}

/// Evaluates `assignment` at every library corner.
pub fn analyze_corners(
    region: &RegionModel,
    topology: &RctTopology,
    assignment: &TapAssignment,
    window: Option<&PairSet>,
    exec: Execution,
) -> Result<Vec<CornerAnalysis>, DelayError> {
    exec.map(region.library().corners(), |corner| {
        let profile = natural_delays(region, topology, corner)?;
        let taps = region
            .taps(corner)
            .ok_or_else(|| DelayError::UnknownCorner(corner.clone()))?;
        let arrivals = arrival_times(&profile, taps, assignment)?;
        Ok(CornerAnalysis {
            corner: corner.clone(),
            cost: cost_report(&arrivals, window),
            feasibility: feasibility_max_size(&profile, taps),
            electrical: aggregate_electrical(region, corner)?,
            profile,
            arrivals,
        })
    })
    .into_iter()
    .collect()
}

pub fn cost_json(c: &CostReport) -> Value {
    json!({
        "l_abs_mean": exact(c.l_abs_mean),
        "g_abs_mean": exact(c.g_abs_mean),
        "windowed_mean": c.windowed_mean.map(exact),
        "max_pairwise_diff": time(c.max_pairwise_diff),
        "windowed_max_diff": c.windowed_max_diff.map(time),
        "diffs_vs_furthest": times(&c.diffs_vs_furthest),
    })
}

pub fn feasibility_json(f: &FeasibilityReport) -> Value {
    json!({
        "corner": f.corner.as_str(),
        "feasible": f.feasible,
        "max_natural": time(f.max_natural),
        "tap_range": time(f.tap_range),
        "margin": time(f.margin),
        "offending": f.offending,
        "nodes": f.nodes.iter().map(|n| json!({
            "node": n.node,
            "ideal": time(n.ideal),
            "in_range": n.in_range,
        })).collect::<Vec<_>>(),
    })
}

pub fn electrical_json(e: &ElectricalReport) -> Value {
    json!({
        "total_rct_capacitance_ff": e.total_rct_capacitance_ff,
        "total_lct_capacitance_ff": e.total_lct_capacitance_ff,
        "rct_fraction": e.rct_fraction,
        "worst_slew": time(e.worst_slew),
        "slew_rule_ok": e.slew_rule_ok,
        "slew_violations": e.slew_violations,
    })
}

fn region_json(region: &RegionModel, topology: &RctTopology, window: Option<&PairSet>) -> Value {
    let fp = region.floorplan();
    let nodes: Vec<Value> = topology
        .ids()
        .map(|id| {
            let node = topology.node(id);
            let b = &region.blocks()[node.block];
            json!({
                "id": id,
                "type": region.block_type(node.block).id,
                "col": b.col,
                "row": b.row,
                "row_class": b.row_class.as_str(),
                "input": match node.config.input {
                    InputSelect::H => "H",
                    InputSelect::V => "V",
                    InputSelect::Entry => "entry",
                },
                "h_out": node.config.enable_h_out,
                "v_out": node.config.enable_v_out,
            })
        })
        .collect();
    json!({
        "cols": fp.cols,
        "rows": fp.rows,
        "entry_corner": fp.entry_corner.to_string(),
        "orientation": fp.orientation.to_string(),
        "corner_of_record": fp.corner_of_record.as_str(),
        "window": fp.window,
        "window_pairs": window.map(PairSet::len),
        "n_prime": window.map(PairSet::n_prime),
        "branches": topology.branches().len(),
        "nodes": nodes,
    })
}

fn corners_json(corners: &[CornerAnalysis]) -> Value {
    let mut map = serde_json::Map::new();
    for c in corners {
        map.insert(
            c.corner.0.clone(),
            json!({
                "natural": times(&c.profile.natural),
                "arrivals": times(&c.arrivals.arrival),
                "cost": cost_json(&c.cost),
                "feasibility": feasibility_json(&c.feasibility),
                "electrical": electrical_json(&c.electrical),
            }),
        );
    }
    Value::Object(map)
}

fn cross_corner_json(corners: &[CornerAnalysis]) -> Value {
    let n = corners.first().map_or(0, |c| c.arrivals.len());
    let spread: Vec<TimeFs> = (0..n)
        .map(|k| {
            let at = corners.iter().map(|c| c.arrivals.arrival[k]);
            at.clone().max().unwrap_or(TimeFs::ZERO) - at.min().unwrap_or(TimeFs::ZERO)
        })
        .collect();
    json!({
        "worst_skew": time(corners.iter().map(|c| c.cost.max_pairwise_diff).max().unwrap_or(TimeFs::ZERO)),
        "arrival_spread": times(&spread),
    })
}

pub fn analysis_document(
    region: &RegionModel,
    topology: &RctTopology,
    source: &str,
    assignment: &TapAssignment,
    window: Option<&PairSet>,
    corners: &[CornerAnalysis],
) -> Value {
    json!({
        "schema": ANALYSIS_SCHEMA,
        "region": region_json(region, topology, window),
        "assignment": { "source": source, "indices": assignment },
        "corners": corners_json(corners),
        "cross_corner": cross_corner_json(corners),
    })
}

/// The full-space, pruned-space and local optima side by side.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub full: OracleResult,
    pub pruned: (TapAssignment, MeanFs),
    pub local: (TapAssignment, MeanFs),
}

pub struct OptimizationInput<'a> {
    pub region: &'a RegionModel,
    pub topology: &'a RctTopology,
    pub objective: &'a str,
    pub method: &'a str,
    pub candidates: &'a PrunedCandidates,
    pub assignment: &'a TapAssignment,
    pub cost: MeanFs,
    pub search: Option<&'a SearchOutcome>,
    pub comparison: Option<&'a Comparison>,
    pub window: Option<&'a PairSet>,
    pub corners: &'a [CornerAnalysis],
}

pub fn optimization_document(input: &OptimizationInput) -> Value {
    let candidates: Vec<Value> = input
        .candidates
        .nodes
        .iter()
        .map(|c| {
            json!({
                "node": c.node,
                "ideal": time(c.ideal),
                "taps": c.taps,
                "clamp": c.clamp,
            })
        })
        .collect();
    let warnings: Vec<String> = input
        .candidates
        .clamped()
        .map(|c| {
            format!(
                "{}: ideal tap delay {} ns is {} the tap line; clamped to tap {}",
                c.node,
                c.ideal.ns_string(),
                match c.clamp {
                    Some(crate::skew::Clamp::Below) => "below",
                    _ => "above",
                },
                c.taps[0]
            )
        })
        .collect();
    let pair = |(a, c): &(TapAssignment, MeanFs)| json!({ "assignment": a, "cost": exact(*c) });
    json!({
        "schema": OPTIMIZATION_SCHEMA,
        "region": region_json(input.region, input.topology, input.window),
        "objective": input.objective,
        "method": input.method,
        "corner": input.region.corner_of_record().as_str(),
        "assignment": input.assignment,
        "cost": exact(input.cost),
        "candidates": candidates,
        "warnings": warnings,
        "search": input.search.map(|s| &s.stats),
        "comparison": input.comparison.map(|c| json!({
            "full": { "assignment": c.full.assignment, "cost": exact(c.full.cost), "configurations": c.full.configurations },
            "pruned": pair(&c.pruned),
            "local": pair(&c.local),
            "pruned_equals_full": c.pruned.1 == c.full.cost,
        })),
        "corners": corners_json(input.corners),
        "cross_corner": cross_corner_json(input.corners),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// Short human-readable summary of an analysis or optimization document.
pub fn summary_text(doc: &Value) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let region = &doc["region"];
    writeln!(
        out,
        "region {}x{} ({} nodes, {} branches), corner of record {}",
        region["cols"],
        region["rows"],
        region["nodes"].as_array().map_or(0, Vec::len),
        region["branches"],
        region["corner_of_record"].as_str().unwrap_or("")
    )
    .unwrap();
    if let Some(obj) = doc.get("objective") {
        writeln!(
            out,
            "objective {} via {}: cost {} ps",
            obj.as_str().unwrap_or(""),
            doc["method"].as_str().unwrap_or(""),
            doc["cost"]["ps"].as_str().unwrap_or("")
        )
        .unwrap();
    }
    let assignment = doc["assignment"].get("indices").unwrap_or(&doc["assignment"]);
    writeln!(out, "assignment {}", assignment).unwrap();
    for w in doc.get("warnings").and_then(Value::as_array).into_iter().flatten() {
        writeln!(out, "warning: {}", w.as_str().unwrap_or("")).unwrap();
    }
    if let Some(corners) = doc["corners"].as_object() {
        for (name, c) in corners {
            let f = &c["feasibility"];
            writeln!(
                out,
                "[{name}] skew {} ns, L {} ps, G {} ps, max T_nat {} ns, tap range {} ns, {}",
                c["cost"]["max_pairwise_diff"]["ns"].as_str().unwrap_or(""),
                c["cost"]["l_abs_mean"]["ps"].as_str().unwrap_or(""),
                c["cost"]["g_abs_mean"]["ps"].as_str().unwrap_or(""),
                f["max_natural"]["ns"].as_str().unwrap_or(""),
                f["tap_range"]["ns"].as_str().unwrap_or(""),
                if f["feasible"].as_bool() == Some(true) { "feasible" } else { "infeasible" }
            )
            .unwrap();
        }
    }
    out
}
