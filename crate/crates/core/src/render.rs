//! Static DOT and SVG views of a routed region.

use std::fmt::Write;

use crate::delay::{ArrivalProfile, DelayProfile};
use crate::region::RegionModel;
use crate::route::{InputSelect, NodeId, RctTopology};
use crate::skew::TapAssignment;

/// Optional per-node annotations.
#[derive(Clone, Copy, Debug, Default)]
pub struct Annotations<'a> {
    pub assignment: Option<&'a TapAssignment>,
    pub arrivals: Option<&'a ArrivalProfile>,
}

fn position(region: &RegionModel, topology: &RctTopology, id: NodeId) -> (u32, u32) {
    let b = &region.blocks()[topology.node(id).block];
    (b.col, b.row)
}

/// Graphviz digraph: one node per block, one edge per chord with its variant
/// and the delay charged at `profile`'s corner.
pub fn render_dot(region: &RegionModel, topology: &RctTopology, profile: &DelayProfile, notes: Annotations) -> String {
    let mut out = String::new();
    writeln!(out, "digraph rct {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=box];").unwrap();
    for id in topology.ids() {
        let (col, row) = position(region, topology, id);
        let mut label = format!("{id} ({col},{row})\\nT_nat {}", profile.of(id).ns_string());
        if let Some(a) = notes.assignment {
            write!(label, "\\ntap {}", a.indices()[id.index()]).unwrap();
        }
        if let Some(a) = notes.arrivals {
            write!(label, "\\nT_LCT {}", a.of(id).ns_string()).unwrap();
        }
        writeln!(out, "  {id} [label=\"{label}\"];").unwrap();
    }
    let mut edges = topology.edges.clone();
    edges.sort_by_key(|e| (e.parent, e.child));
    for e in edges {
        let delay = profile.of(e.child) - profile.of(e.parent);
        writeln!(
            out,
            "  {} -> {} [label=\"{} {} ns\"];",
            e.parent,
            e.child,
            e.variant,
            delay.ns_string()
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

const CELL_W: u32 = 120;
const CELL_H: u32 = 80;
const MARGIN: u32 = 20;

fn centre(region: &RegionModel, topology: &RctTopology, id: NodeId) -> (u32, u32) {
    let b = &region.blocks()[topology.node(id).block];
    (
        MARGIN + b.col * CELL_W + b.width * CELL_W / 2,
        MARGIN + b.row * CELL_H + b.height * CELL_H / 2,
    )
}

fn polyline(out: &mut String, class: &str, points: &[(u32, u32)]) {
    let pts: Vec<String> = points.iter().map(|(x, y)| format!("{x},{y}")).collect();
    writeln!(out, "  <polyline class=\"{class}\" points=\"{}\"/>", pts.join(" ")).unwrap();
}

/// The block grid with the spine, one polyline per row branch and annotated
/// nodes.
pub fn render_svg(region: &RegionModel, topology: &RctTopology, profile: &DelayProfile, notes: Annotations) -> String {
    let width = 2 * MARGIN + region.cols() * CELL_W;
    let height = 2 * MARGIN + region.rows() * CELL_H;
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    )
    .unwrap();
    writeln!(
        out,
        "  <style>.block{{fill:#f4f4f4;stroke:#999}}.spine{{fill:none;stroke:#c0392b;stroke-width:3}}\
         .branch{{fill:none;stroke:#2c7bb6;stroke-width:2}}.node{{fill:#333}}text{{font:10px monospace}}</style>"
    )
    .unwrap();
    for b in region.blocks() {
        writeln!(
            out,
            "  <rect class=\"block\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
            MARGIN + b.col * CELL_W,
            MARGIN + b.row * CELL_H,
            b.width * CELL_W,
            b.height * CELL_H
        )
        .unwrap();
    }

    let spine: Vec<(u32, u32)> = topology
        .ids()
        .filter(|&id| topology.node(id).config.input != InputSelect::H)
        .map(|id| centre(region, topology, id))
        .collect();
    if spine.len() > 1 {
        polyline(&mut out, "spine", &spine);
    }
    for branch in topology.branches() {
        if branch.len() > 1 {
            let pts: Vec<(u32, u32)> = branch.iter().map(|&id| centre(region, topology, id)).collect();
            polyline(&mut out, "branch", &pts);
        }
    }

    for id in topology.ids() {
        let (x, y) = centre(region, topology, id);
        writeln!(out, "  <g class=\"annotated-node\" id=\"{id}\">").unwrap();
        writeln!(out, "    <circle class=\"node\" cx=\"{x}\" cy=\"{y}\" r=\"4\"/>").unwrap();
        let mut lines = vec![format!("{id}"), format!("nat {}", profile.of(id).ns_string())];
        if let Some(a) = notes.assignment {
            lines.push(format!("tap {}", a.indices()[id.index()]));
        }
        if let Some(a) = notes.arrivals {
            lines.push(format!("lct {}", a.of(id).ns_string()));
        }
        for (k, line) in lines.iter().enumerate() {
            writeln!(out, "    <text x=\"{}\" y=\"{}\">{line}</text>", x - CELL_W / 2 + 6, y - 24 + 12 * k as u32).unwrap();
        }
        writeln!(out, "  </g>").unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delay::natural_delays;
    use crate::reference::fixture;
    use crate::region::build_region;
    use crate::route::route_rct;

    fn routed(name: &str) -> (RegionModel, RctTopology, DelayProfile) {
        let (lib, fp) = fixture(name).unwrap().load();
        let region = build_region(&fp, &lib).unwrap();
        let topo = route_rct(&region).unwrap();
        let profile = natural_delays(&region, &topo, region.corner_of_record()).unwrap();
        (region, topo, profile)
    }

    #[test]
    fn dot_edges_round_trip() {
        let (region, topo, profile) = routed("region_8x3");
        let dot = render_dot(&region, &topo, &profile, Annotations::default());
        let mut parsed: Vec<(u32, u32)> = dot
            .lines()
            .filter_map(|l| {
                let (lhs, rest) = l.trim().split_once(" -> ")?;
                let rhs = rest.split_whitespace().next()?;
                Some((lhs.trim_start_matches('n').parse().ok()?, rhs.trim_start_matches('n').parse().ok()?))
            })
            .collect();
        parsed.sort_unstable();
        let mut expected: Vec<(u32, u32)> = topo.edges.iter().map(|e| (e.parent.0, e.child.0)).collect();
        expected.sort_unstable();
        assert_eq!(parsed, expected);
    }

    #[test]
    fn svg_structure() {
        let (region, topo, profile) = routed("region_8x3");
        let svg = render_svg(&region, &topo, &profile, Annotations::default());
        assert_eq!(svg.matches("class=\"branch\"").count(), 3);
        assert_eq!(svg.matches("class=\"spine\"").count(), 1);
        assert_eq!(svg.matches("class=\"annotated-node\"").count(), 24);
    }
}
