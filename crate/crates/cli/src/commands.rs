use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use rct_core::render::{render_dot, render_svg, Annotations};
use rct_core::report::{
    analysis_document, analyze_corners, feasibility_json, optimization_document, summary_text, time, to_pretty,
    Comparison, OptimizationInput,
};
use rct_core::skew::{OracleResult, SearchOutcome};
use rct_core::*;

use crate::error::CliError;
use crate::{AnalyzeArgs, Diagram, FeasibilityArgs, Format, Method, ObjectiveArgs, ObjectiveKind, OptimizeArgs};
use crate::{RegionArgs, RenderArgs, SweepArgs};

pub const VALIDATION_SCHEMA: &str = "rct-validation/1";
pub const SWEEP_SCHEMA: &str = "rct-sweep/1";
pub const FEASIBILITY_SCHEMA: &str = "rct-feasibility/1";

/// Command result: the primary output and the exit status it implies.
pub struct Output {
    pub body: String,
    pub code: u8,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, code: 0 }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

pub fn emit(out: Option<&Path>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Write {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

pub fn write_meta(path: &Path, command: &str, code: u8, elapsed: Duration) -> Result<(), CliError> {
    let started = SystemTime::now()
        .checked_sub(elapsed)
        .and_then(|t| t.duration_since(UNIX_EPOCH).ok())
        .map_or(0, |d| d.as_millis());
    let doc = json!({
        "tool": "rct",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "args": std::env::args().skip(1).collect::<Vec<_>>(),
        "exit_code": code,
        "started_unix_ms": started,
        "elapsed_ms": elapsed.as_secs_f64() * 1e3,
    });
    emit(Some(path), &to_pretty(&doc))
}

fn render_doc(doc: &Value, format: Format) -> String {
    match format {
        Format::Json => to_pretty(doc),
        Format::Text => summary_text(doc),
    }
}

struct Loaded {
    region: RegionModel,
    topology: RctTopology,
}

fn load_library(path: &Path) -> Result<BlockLibrary, CliError> {
    Ok(load_block_library(&read(path)?)?)
}

fn load(library: &Path, floorplan: &Path) -> Result<Loaded, CliError> {
    let lib = load_library(library)?;
    let fp = load_floorplan(&read(floorplan)?, &lib)?;
    let region = build_region(&fp, &lib)?;
    let topology = route_rct(&region)?;
    let report = verify_topology(&topology, &region);
    if !report.is_clean() {
        return Err(CliError::Model(report.violations.iter().map(|v| format!("topology: {v}")).collect()));
    }
    Ok(Loaded { region, topology })
}

fn corner(region: &RegionModel, name: Option<&str>) -> Result<CornerId, CliError> {
    match name {
        None => Ok(region.corner_of_record().clone()),
        Some(n) => {
            let c = CornerId::new(n);
            if region.library().has_corner(&c) {
                Ok(c)
            } else {
                Err(CliError::Usage(format!("corner `{n}` is not characterized by the library")))
            }
        }
    }
}

pub fn validate(a: &RegionArgs) -> Result<Output, CliError> {
    let lib = load_library(&a.common.library)?;
    let mut violations: Vec<String> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();
    let mut summary = Value::Null;
    match load_floorplan(&read(&a.floorplan)?, &lib) {
        Err(FloorplanError::Invalid(issues)) => violations.extend(issues.iter().map(|i| format!("floorplan: {i}"))),
        Err(e) => return Err(e.into()),
        Ok(fp) => match build_region(&fp, &lib) {
            Err(e) => violations.push(format!("region: {e}")),
            Ok(region) => match route_rct(&region) {
                Err(e) => violations.push(format!("routing: {e}")),
                Ok(topo) => {
                    let report = verify_topology(&topo, &region);
                    violations.extend(report.violations.iter().map(|v| format!("topology: {v}")));
                    for c in region.library().corners() {
                        let e = aggregate_electrical(&region, c)?;
                        for b in &e.slew_violations {
                            violations.push(format!("electrical: block {b} exceeds the slew rule at corner {c}"));
                        }
                        let profile = natural_delays(&region, &topo, c)?;
                        let f = feasibility_max_size(&profile, region.taps(c).expect("corner checked"));
                        if !f.feasible {
                            warnings.push(format!(
                                "feasibility: at corner {c} max natural delay {} ns exceeds the tap range {} ns",
                                f.max_natural.ns_string(),
                                f.tap_range.ns_string()
                            ));
                        }
                    }
                    summary = json!({
                        "nodes": topo.len(),
                        "edges": topo.edges.len(),
                        "branches": topo.branches().len(),
                    });
                }
            },
        },
    }
    let clean = violations.is_empty();
    let body = match a.format {
        Format::Json => to_pretty(&json!({
            "schema": VALIDATION_SCHEMA,
            "clean": clean,
            "violations": violations,
            "warnings": warnings,
            "topology": summary,
        })),
        Format::Text => {
            let mut s = String::new();
            for v in &violations {
                s.push_str(&format!("violation: {v}\n"));
            }
            for w in &warnings {
                s.push_str(&format!("warning: {w}\n"));
            }
            if clean {
                s.push_str(&format!(
                    "ok: {} nodes, {} branches\n",
                    summary["nodes"], summary["branches"]
                ));
            }
            s
        }
    };
    Ok(Output {
        body,
        code: if clean { 0 } else { 1 },
    })
}

fn parse_pair(s: &str) -> Option<(u32, u32)> {
    let (a, b) = s.split_once('x')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn window_spec(args: &ObjectiveArgs, region: &RegionModel) -> Result<Option<WindowSpec>, CliError> {
    let Some(text) = args.window.as_deref() else {
        return Ok(region.window());
    };
    if text == "none" {
        return Ok(None);
    }
    let bad = || CliError::Usage(format!("--window `{text}`: expected COLSxROWS[/STRIDE | /SCOLSxSROWS] or none"));
    let (size, stride) = match text.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (text, None),
    };
    let (cols, rows) = parse_pair(size).ok_or_else(bad)?;
    let (stride_cols, stride_rows) = match stride {
        None => (1, 1),
        Some(s) => match s.parse::<u32>() {
            Ok(k) => (k, k),
            Err(_) => parse_pair(s).ok_or_else(bad)?,
        },
    };
    if cols == 0 || rows == 0 || stride_cols == 0 || stride_rows == 0 {
        return Err(bad());
    }
    Ok(Some(WindowSpec {
        cols,
        rows,
        stride_cols,
        stride_rows,
    }))
}

struct Goal {
    objective: Objective,
    window: Option<PairSet>,
    corner: CornerId,
    profile: DelayProfile,
    taps: Taps,
}

fn goal(args: &ObjectiveArgs, l: &Loaded) -> Result<Goal, CliError> {
    let window = window_spec(args, &l.region)?.map(|w| window_pairs(&l.region, &l.topology, w));
    let kind = args.objective.unwrap_or(if window.is_some() {
        ObjectiveKind::Windowed
    } else {
        ObjectiveKind::G
    });
    let objective = match kind {
        ObjectiveKind::L => Objective::L,
        ObjectiveKind::G => Objective::G,
        ObjectiveKind::Windowed => Objective::Windowed(
            window
                .clone()
                .ok_or_else(|| CliError::Usage("objective `windowed` needs a window (floorplan or --window)".into()))?,
        ),
    };
    let corner = corner(&l.region, args.optimize_corner.as_deref())?;
    let profile = natural_delays(&l.region, &l.topology, &corner)?;
    let taps = l.region.taps(&corner).expect("corner checked").clone();
    Ok(Goal {
        objective,
        window,
        corner,
        profile,
        taps,
    })
}

fn search(g: &Goal, args: &ObjectiveArgs) -> Result<SearchOutcome, CliError> {
    let candidates = ideal_taps_and_prune(&g.profile, &g.taps);
    let options = SearchOptions {
        node_limit: args.node_limit,
        ..SearchOptions::default()
    };
    let pairs = g.objective.pair_set(g.profile.len());
    Ok(global_optimize(&g.profile, &g.taps, &candidates, &pairs, &options)?)
}

fn resolve_assignment(choice: &str, l: &Loaded, g: &Goal, args: &ObjectiveArgs) -> Result<TapAssignment, CliError> {
    let n = l.topology.len();
    match choice {
        "ones" => Ok(TapAssignment::uniform(n, 1)),
        "local" => Ok(local_optimize(&g.profile, &g.taps)),
        "optimized" => Ok(search(g, args)?.assignment),
        path => {
            let text = read(Path::new(path))?;
            let indices: Vec<u32> = serde_json::from_str(&text)
                .map_err(|e| CliError::Schema(format!("assignment {path}: expected a JSON array of tap indices: {e}")))?;
            if indices.len() != n {
                return Err(CliError::model(format!(
                    "assignment has {} entries for {n} nodes",
                    indices.len()
                )));
            }
            TapAssignment::checked(indices).map_err(CliError::model)
        }
    }
}

pub fn analyze(a: &AnalyzeArgs) -> Result<Output, CliError> {
    let l = load(&a.region.common.library, &a.region.floorplan)?;
    let g = goal(&a.objective, &l)?;
    let assignment = resolve_assignment(&a.assignment, &l, &g, &a.objective)?;
    let mut corners = analyze_corners(&l.region, &l.topology, &assignment, g.window.as_ref(), Execution::default())?;
    if let Some(name) = &a.corner {
        let c = corner(&l.region, Some(name))?;
        corners.retain(|x| x.corner == c);
    }
    let doc = analysis_document(&l.region, &l.topology, &a.assignment, &assignment, g.window.as_ref(), &corners);
    Ok(Output::ok(render_doc(&doc, a.region.format)))
}

pub fn optimize(a: &OptimizeArgs) -> Result<Output, CliError> {
    let l = load(&a.region.common.library, &a.region.floorplan)?;
    let g = goal(&a.objective, &l)?;
    let n = g.profile.len();
    let pairs = g.objective.pair_set(n);
    let candidates = ideal_taps_and_prune(&g.profile, &g.taps);
    let mean = |assignment: &TapAssignment| -> Result<MeanFs, CliError> {
        Ok(g_abs_mean(&arrival_times(&g.profile, &g.taps, assignment)?, &pairs))
    };

    let mut outcome = None;
    let mut comparison = None;
    let (assignment, cost, method) = match a.method {
        Method::Local => {
            let local = local_optimize(&g.profile, &g.taps);
            let cost = mean(&local)?;
            (local, cost, "local")
        }
        Method::Global => {
            let o = search(&g, &a.objective)?;
            let result = (o.assignment.clone(), o.cost, "global");
            outcome = Some(o);
            result
        }
        Method::Oracle => {
            let limit = a.oracle_limit.expect("enforced by argument parsing");
            let full: OracleResult = brute_force_oracle(&g.profile, &g.taps, &pairs, limit, Execution::default())?;
            let o = search(&g, &a.objective)?;
            let local = local_optimize(&g.profile, &g.taps);
            let local_cost = mean(&local)?;
            let result = (full.assignment.clone(), full.cost, "oracle");
            comparison = Some(Comparison {
                full,
                pruned: (o.assignment.clone(), o.cost),
                local: (local, local_cost),
            });
            outcome = Some(o);
            result
        }
    };
    let corners = analyze_corners(&l.region, &l.topology, &assignment, g.window.as_ref(), Execution::default())?;
    let doc = optimization_document(&OptimizationInput {
        region: &l.region,
        topology: &l.topology,
        objective: g.objective.name(),
        method,
        candidates: &candidates,
        assignment: &assignment,
        cost,
        search: outcome.as_ref(),
        comparison: comparison.as_ref(),
        window: g.window.as_ref(),
        corners: &corners,
    });
    let mut doc = doc;
    doc["corner"] = json!(g.corner.as_str());
    Ok(Output::ok(render_doc(&doc, a.region.format)))
}

pub fn render(a: &RenderArgs) -> Result<Output, CliError> {
    let l = load(&a.common.library, &a.floorplan)?;
    let c = corner(&l.region, a.corner.as_deref())?;
    let profile = natural_delays(&l.region, &l.topology, &c)?;
    let taps = l.region.taps(&c).expect("corner checked");
    let assignment = match &a.assignment {
        None => None,
        Some(choice) => {
            let g = goal(&a.objective, &l)?;
            Some(resolve_assignment(choice, &l, &g, &a.objective)?)
        }
    };
    let arrivals = match &assignment {
        Some(x) => Some(arrival_times(&profile, taps, x)?),
        None => None,
    };
    let notes = Annotations {
        assignment: assignment.as_ref(),
        arrivals: arrivals.as_ref(),
    };
    Ok(Output::ok(match a.format {
        Diagram::Dot => render_dot(&l.region, &l.topology, &profile, notes),
        Diagram::Svg => render_svg(&l.region, &l.topology, &profile, notes),
    }))
}

pub fn sweep_size(a: &SweepArgs) -> Result<Output, CliError> {
    let lib = load_library(&a.common.library)?;
    let t = match &a.type_id {
        Some(id) => lib
            .block_type(id)
            .ok_or_else(|| CliError::Usage(format!("block type `{id}` is not in the library")))?,
        None => &lib.types()[0],
    };
    let corners: Vec<CornerId> = match &a.corner {
        Some(c) if lib.has_corner(&CornerId::new(c.as_str())) => vec![CornerId::new(c.as_str())],
        Some(c) => return Err(CliError::Usage(format!("corner `{c}` is not characterized by the library"))),
        None => lib.corners().to_vec(),
    };
    if a.rows == 0 {
        return Err(CliError::Usage("--rows must be at least 1".into()));
    }
    let mut per_corner = serde_json::Map::new();
    let mut text = String::new();
    for c in &corners {
        let cols = size_sweep(t, a.rows, c)?;
        let range = t.taps(c).expect("library covers every corner").range();
        text.push_str(&format!(
            "[{c}] type {} with {} rows: at most {cols} columns (tap range {} ns)\n",
            t.id,
            a.rows,
            range.ns_string()
        ));
        per_corner.insert(c.0.clone(), json!({ "max_columns": cols, "tap_range": time(range) }));
    }
    Ok(Output::ok(match a.format {
        Format::Json => to_pretty(&json!({
            "schema": SWEEP_SCHEMA,
            "type": t.id,
            "rows": a.rows,
            "corners": per_corner,
        })),
        Format::Text => text,
    }))
}

pub fn feasibility(a: &FeasibilityArgs) -> Result<Output, CliError> {
    let l = load(&a.region.common.library, &a.region.floorplan)?;
    let corners: Vec<CornerId> = match &a.corner {
        Some(c) => vec![corner(&l.region, Some(c))?],
        None => l.region.library().corners().to_vec(),
    };
    let mut per_corner = serde_json::Map::new();
    let mut text = String::new();
    for c in &corners {
        let profile = natural_delays(&l.region, &l.topology, c)?;
        let f = feasibility_max_size(&profile, l.region.taps(c).expect("corner checked"));
        text.push_str(&format!(
            "[{c}] {}: max natural delay {} ns, tap range {} ns, margin {} ns",
            if f.feasible { "feasible" } else { "infeasible" },
            f.max_natural.ns_string(),
            f.tap_range.ns_string(),
            f.margin.ns_string()
        ));
        if !f.offending.is_empty() {
            let ids: Vec<String> = f.offending.iter().map(ToString::to_string).collect();
            text.push_str(&format!(", ideal tap out of range at {}", ids.join(" ")));
        }
        text.push('\n');
        per_corner.insert(c.0.clone(), feasibility_json(&f));
    }
    Ok(Output::ok(match a.region.format {
        Format::Json => to_pretty(&json!({
            "schema": FEASIBILITY_SCHEMA,
            "corners": per_corner,
        })),
        Format::Text => text,
    }))
}

