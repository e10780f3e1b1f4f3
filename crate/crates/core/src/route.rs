//! Regional clock tree composition by abutment.
//!
//! Every region is routed as a vertical spine down the entry column with one
//! horizontal branch per block row. Each block's fragment selects one input
//! and enables the exits that feed its neighbours; the resulting edges form a
//! single-driver tree rooted at the entry block.
//!
//! Chord delays are charged to the child of each edge. The variant charged
//! pairs the child's selected input with its primary exit: `H` when the
//! horizontal exit is enabled, otherwise `V` when the vertical exit is, and
//! the input direction itself for a leaf.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::library::{ChordVariant, CornerId, Dir, RowClass};
use crate::region::RegionModel;
use crate::units::TimeFs;

/// 1-based node id. Node 1 is the entry node, node `N` the furthest node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    pub const ENTRY: NodeId = NodeId(1);

    pub fn from_index(index: usize) -> Self {
        NodeId(index as u32 + 1)
    }

    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Which fragment input carries the clock.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputSelect {
    H,
    V,
    /// The entry node is fed by the region clock directly.
    Entry,
}

impl InputSelect {
    pub fn dir(self) -> Option<Dir> {
        match self {
            InputSelect::H => Some(Dir::H),
            InputSelect::V => Some(Dir::V),
            InputSelect::Entry => None,
        }
    }
}

/// Power-up configuration of one fragment. Disabled exits are gated to 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FragmentConfig {
    pub input: InputSelect,
    pub enable_h_out: bool,
    pub enable_v_out: bool,
}

impl FragmentConfig {
    pub fn enables(&self, port: Dir) -> bool {
        match port {
            Dir::H => self.enable_h_out,
            Dir::V => self.enable_v_out,
        }
    }

    /// The chord variant charged to this node, or `None` for the entry node.
    pub fn charged_variant(&self) -> Option<ChordVariant> {
        let input = self.input.dir()?;
        let output = if self.enable_h_out {
            Dir::H
        } else if self.enable_v_out {
            Dir::V
        } else {
            input
        };
        Some(ChordVariant::from_dirs(input, output))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RctNode {
    /// Index into [`RegionModel::blocks`].
    pub block: usize,
    pub config: FragmentConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RctEdge {
    pub parent: NodeId,
    pub child: NodeId,
    pub variant: ChordVariant,
}

/// Fragment configurations and clock edges of a routed region.
///
/// `nodes[k]` holds node `k + 1`. Topologies built by hand are accepted for
/// analysis; run [`verify_topology`] before trusting one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RctTopology {
    pub nodes: Vec<RctNode>,
    pub edges: Vec<RctEdge>,
}

impl RctTopology {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &RctNode {
        &self.nodes[id.index()]
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId::from_index)
    }

    /// The furthest node `N`.
    pub fn furthest(&self) -> NodeId {
        NodeId::from_index(self.nodes.len() - 1)
    }

    /// Node id of each block.
    pub fn node_of_block(&self) -> BTreeMap<usize, NodeId> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.block, NodeId::from_index(i)))
            .collect()
    }

    /// Children of every node, in edge order.
    pub fn children(&self) -> Vec<Vec<(NodeId, ChordVariant)>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            if let Some(list) = out.get_mut(e.parent.index()) {
                list.push((e.child, e.variant));
            }
        }
        out
    }

    /// Row branches: each starts at a node not fed horizontally and follows
    /// horizontal edges to its end. The start node is part of its branch.
    pub fn branches(&self) -> Vec<Vec<NodeId>> {
        let children = self.children();
        let mut out = Vec::new();
        for id in self.ids() {
            if self.node(id).config.input == InputSelect::H {
                continue;
            }
            let mut branch = vec![id];
            let mut cur = id;
            while let Some(&(next, _)) = children[cur.index()]
                .iter()
                .find(|(c, _)| self.node(*c).config.input == InputSelect::H)
            {
                branch.push(next);
                cur = next;
            }
            out.push(branch);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RouteError {
    #[error("unsupported floorplan shape: grid row {row} is not tiled by one complete row of equal-height blocks")]
    IncompleteRows { row: u32 },
    #[error("region has no blocks")]
    Empty,
    #[error("entry corner is not covered by a block")]
    NoEntry,
    #[error("block {block} ({type_id}) has no {variant} chord for row class {row_class} at corner {corner}")]
    MissingChord {
        block: usize,
        type_id: String,
        variant: ChordVariant,
        row_class: RowClass,
        corner: CornerId,
    },
}

/// A row of blocks in the propagation frame, ordered outward from the spine.
struct Band {
    blocks: Vec<usize>,
}

fn bands(region: &RegionModel) -> Result<Vec<Band>, RouteError> {
    let rows = region.rows() as usize;
    let mut extent: Vec<Option<(u32, u32)>> = vec![None; rows];
    for b in 0..region.len() {
        let s = region.oriented_span(b);
        for v in s.v0..s.v1 {
            match extent[v as usize] {
                None => extent[v as usize] = Some((s.v0, s.v1)),
                Some(e) if e == (s.v0, s.v1) => {}
                Some(_) => return Err(RouteError::IncompleteRows { row: grid_row(region, v) }),
            }
        }
    }
    let mut by_start: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for b in 0..region.len() {
        by_start.entry(region.oriented_span(b).v0).or_default().push(b);
    }
    Ok(by_start
        .into_values()
        .map(|mut blocks| {
            blocks.sort_by_key(|&b| region.oriented_span(b).u0);
            Band { blocks }
        })
        .collect())
}

fn grid_row(region: &RegionModel, v: u32) -> u32 {
    if region.floorplan().orientation.bottom_up() {
        region.rows() - 1 - v
    } else {
        v
    }
}

/// Routes the spine-and-branch tree and numbers the nodes.
///
/// Node ids follow propagation order (spine band by band, each branch
/// outward), except that the node with the largest natural delay at the
/// corner of record is moved to id `N`. Ties go to the later node in
/// propagation order.
pub fn route_rct(region: &RegionModel) -> Result<RctTopology, RouteError> {
    if region.is_empty() {
        return Err(RouteError::Empty);
    }
    let bands = bands(region)?;
    let entry = region.entry_block().ok_or(RouteError::NoEntry)?;
    debug_assert_eq!(bands[0].blocks[0], entry);

    // Propagation order with configs and parent links (by order position).
    let mut order: Vec<(usize, FragmentConfig, Option<usize>)> = Vec::with_capacity(region.len());
    let mut prev_spine: Option<usize> = None;
    let last_band = bands.len() - 1;
    for (k, band) in bands.iter().enumerate() {
        for (j, &block) in band.blocks.iter().enumerate() {
            let is_spine = j == 0;
            let config = FragmentConfig {
                input: match (k, is_spine) {
                    (0, true) => InputSelect::Entry,
                    (_, true) => InputSelect::V,
                    _ => InputSelect::H,
                },
                enable_h_out: j + 1 < band.blocks.len(),
                enable_v_out: is_spine && k < last_band,
            };
            let parent = if is_spine { prev_spine } else { Some(order.len() - 1) };
            if is_spine {
                prev_spine = Some(order.len());
            }
            order.push((block, config, parent));
        }
    }

    // Natural delays at the corner of record pick node N.
    let corner = region.corner_of_record();
    let mut natural = vec![TimeFs::ZERO; order.len()];
    for pos in 0..order.len() {
        let (block, config, parent) = order[pos];
        if let Some(p) = parent {
            natural[pos] = natural[p] + charged_delay(region, block, &config, corner)?;
        }
    }
    let furthest = (0..order.len())
        .max_by_key(|&pos| (natural[pos], pos))
        .expect("region is not empty");

    let mut ids = vec![0usize; order.len()];
    let mut next = 0;
    for (pos, id) in ids.iter_mut().enumerate() {
        if pos != furthest {
            *id = next;
            next += 1;
        }
    }
    ids[furthest] = order.len() - 1;

    let mut nodes = vec![
        RctNode {
            block: 0,
            config: order[0].1,
        };
        order.len()
    ];
    let mut edges = Vec::with_capacity(order.len() - 1);
    for (pos, &(block, config, parent)) in order.iter().enumerate() {
        nodes[ids[pos]] = RctNode { block, config };
        if let Some(p) = parent {
            edges.push(RctEdge {
                parent: NodeId::from_index(ids[p]),
                child: NodeId::from_index(ids[pos]),
                variant: config.charged_variant().expect("non-entry node has an input"),
            });
        }
    }
    Ok(RctTopology { nodes, edges })
}

/// Chord delay charged to `block` when configured as `config`.
pub(crate) fn charged_delay(
    region: &RegionModel,
    block: usize,
    config: &FragmentConfig,
    corner: &CornerId,
) -> Result<TimeFs, RouteError> {
    let Some(variant) = config.charged_variant() else {
        return Ok(TimeFs::ZERO);
    };
    let row_class = region.blocks()[block].row_class;
    let t = region.block_type(block);
    t.chord_delay(variant, row_class, corner).ok_or_else(|| RouteError::MissingChord {
        block,
        type_id: t.id.clone(),
        variant,
        row_class,
        corner: corner.clone(),
    })
}

/// Structural defects found by [`verify_topology`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("topology has {nodes} nodes but the region has {blocks} blocks")]
    NodeCount { nodes: usize, blocks: usize },
    #[error("{node} refers to block {block} which does not exist")]
    UnknownBlock { node: NodeId, block: usize },
    #[error("block {block} is assigned to {count} nodes")]
    BlockMultiplicity { block: usize, count: usize },
    #[error("entry node n1 is block {found:?}, expected block {expected:?} at the entry corner")]
    EntryMismatch { found: usize, expected: Option<usize> },
    #[error("entry node must take the region clock directly, found input {found:?}")]
    EntryInput { found: InputSelect },
    #[error("{node} selects no input")]
    MissingInput { node: NodeId },
    #[error("edge {parent} -> {child} references an unknown node")]
    UnknownEdgeNode { parent: NodeId, child: NodeId },
    #[error("tree needs {expected} edges, found {found}")]
    EdgeCount { found: usize, expected: usize },
    #[error("{node} has {drivers} drivers")]
    MultipleDrivers { node: NodeId, drivers: usize },
    #[error("entry node is driven by {parent}")]
    EntryDriven { parent: NodeId },
    #[error("{node} is unreachable from the entry node")]
    Unreachable { node: NodeId },
    #[error("edge {parent} -> {child} does not match an enabled exit feeding a selected input")]
    EdgeMismatch { parent: NodeId, child: NodeId },
    #[error("edge {parent} -> {child} labeled {labeled}, configuration implies {expected}")]
    VariantMismatch {
        parent: NodeId,
        child: NodeId,
        labeled: ChordVariant,
        expected: ChordVariant,
    },
    #[error("{node}: dangling enabled exit {port:?}_out")]
    DanglingExit { node: NodeId, port: Dir },
    #[error("{node}: undriven input {port:?}_in")]
    UndrivenInput { node: NodeId, port: Dir },
    #[error("{parent} drives {child} through {port:?} but no edge records it")]
    MissingEdge { parent: NodeId, child: NodeId, port: Dir },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructuralReport {
    pub violations: Vec<Violation>,
}

impl StructuralReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Block fed by `block`'s exit on `port`, if one abuts there.
fn exit_target(region: &RegionModel, block: usize, port: Dir) -> Option<usize> {
    let s = region.oriented_span(block);
    match port {
        Dir::H => region.block_at_oriented(s.u1, s.v0),
        Dir::V => region.block_at_oriented(s.u0, s.v1),
    }
}

/// Block whose `port` exit would feed `block`, if one abuts there.
fn entry_source(region: &RegionModel, block: usize, port: Dir) -> Option<usize> {
    let s = region.oriented_span(block);
    let candidate = match port {
        Dir::H => s.u0.checked_sub(1).and_then(|u| region.block_at_oriented(u, s.v0)),
        Dir::V => s.v0.checked_sub(1).and_then(|v| region.block_at_oriented(s.u0, v)),
    }?;
    (exit_target(region, candidate, port) == Some(block)).then_some(candidate)
}

/// Checks tree shape, input selection, exit usage and entry placement.
/// Violations are collected, never raised.
pub fn verify_topology(topology: &RctTopology, region: &RegionModel) -> StructuralReport {
    let mut v = Vec::new();
    let n = topology.len();
    if n != region.len() {
        v.push(Violation::NodeCount {
            nodes: n,
            blocks: region.len(),
        });
    }
    let mut node_of_block: Vec<Vec<NodeId>> = vec![Vec::new(); region.len()];
    let mut blocks_ok = true;
    for id in topology.ids() {
        let block = topology.node(id).block;
        match node_of_block.get_mut(block) {
            Some(list) => list.push(id),
            None => {
                v.push(Violation::UnknownBlock { node: id, block });
                blocks_ok = false;
            }
        }
    }
    for (block, ids) in node_of_block.iter().enumerate() {
        if ids.len() != 1 {
            v.push(Violation::BlockMultiplicity {
                block,
                count: ids.len(),
            });
            blocks_ok = false;
        }
    }
    if n == 0 {
        return StructuralReport { violations: v };
    }

    let entry = topology.node(NodeId::ENTRY);
    if region.entry_block() != Some(entry.block) {
        v.push(Violation::EntryMismatch {
            found: entry.block,
            expected: region.entry_block(),
        });
    }
    if entry.config.input != InputSelect::Entry {
        v.push(Violation::EntryInput {
            found: entry.config.input,
        });
    }
    for id in topology.ids().skip(1) {
        if topology.node(id).config.input == InputSelect::Entry {
            v.push(Violation::MissingInput { node: id });
        }
    }

    // Tree shape.
    if topology.edges.len() + 1 != n {
        v.push(Violation::EdgeCount {
            found: topology.edges.len(),
            expected: n - 1,
        });
    }
    let mut drivers = vec![0usize; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &topology.edges {
        if e.parent.0 == 0 || e.child.0 == 0 || e.parent.index() >= n || e.child.index() >= n {
            v.push(Violation::UnknownEdgeNode {
                parent: e.parent,
                child: e.child,
            });
            continue;
        }
        drivers[e.child.index()] += 1;
        children[e.parent.index()].push(e.child.index());
        if e.child == NodeId::ENTRY {
            v.push(Violation::EntryDriven { parent: e.parent });
        }
    }
    for (i, &d) in drivers.iter().enumerate().skip(1) {
        if d > 1 {
            v.push(Violation::MultipleDrivers {
                node: NodeId::from_index(i),
                drivers: d,
            });
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for &c in &children[i] {
            if !seen[c] {
                seen[c] = true;
                stack.push(c);
            }
        }
    }
    for (i, s) in seen.iter().enumerate() {
        if !s {
            v.push(Violation::Unreachable {
                node: NodeId::from_index(i),
            });
        }
    }

    // Geometry checks need a consistent block <-> node map.
    if !blocks_ok || n != region.len() {
        return StructuralReport { violations: v };
    }
    let node_at = |block: usize| node_of_block[block][0];

    for e in &topology.edges {
        if e.parent.index() >= n || e.child.index() >= n || e.parent.0 == 0 || e.child.0 == 0 {
            continue;
        }
        let p = topology.node(e.parent);
        let c = topology.node(e.child);
        let linked = [Dir::H, Dir::V].into_iter().any(|port| {
            p.config.enables(port)
                && c.config.input.dir() == Some(port)
                && exit_target(region, p.block, port) == Some(c.block)
        });
        if !linked {
            v.push(Violation::EdgeMismatch {
                parent: e.parent,
                child: e.child,
            });
        }
        if let Some(expected) = c.config.charged_variant() {
            if expected != e.variant {
                v.push(Violation::VariantMismatch {
                    parent: e.parent,
                    child: e.child,
                    labeled: e.variant,
                    expected,
                });
            }
        }
    }

    for id in topology.ids() {
        let node = topology.node(id);
        for port in [Dir::H, Dir::V] {
            if node.config.enables(port) {
                let consumer = exit_target(region, node.block, port)
                    .filter(|&t| topology.node(node_at(t)).config.input.dir() == Some(port));
                match consumer {
                    None => v.push(Violation::DanglingExit { node: id, port }),
                    Some(t) => {
                        let child = node_at(t);
                        if !topology.edges.iter().any(|e| e.parent == id && e.child == child) {
                            v.push(Violation::MissingEdge {
                                parent: id,
                                child,
                                port,
                            });
                        }
                    }
                }
            }
        }
        if let Some(port) = node.config.input.dir() {
            let driven = entry_source(region, node.block, port)
                .is_some_and(|src| topology.node(node_at(src)).config.enables(port));
            if !driven {
                v.push(Violation::UndrivenInput { node: id, port });
            }
        }
    }

    StructuralReport { violations: v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floorplan::{EntryCorner, Floorplan, FloorplanDocument};
    use crate::library::{load_block_library, BlockLibrary};
    use crate::region::build_region;

    fn library() -> BlockLibrary {
        load_block_library(
            r#"{"corners": ["BC"], "types": [
              {"id": "u", "width": 1, "height": 1,
               "chords": {
                 "H_to_H": {"edge": {"BC": 0.5}, "middle": {"BC": 0.5}},
                 "H_to_V": {"edge": {"BC": 0.6}, "middle": {"BC": 0.6}},
                 "V_to_H": {"edge": {"BC": 0.7}, "middle": {"BC": 0.7}},
                 "V_to_V": {"edge": {"BC": 0.8}, "middle": {"BC": 0.8}}},
               "taps": {"BC": [1.0, 2.0]},
               "fragment_cap_ff": 1, "lct_cap_ff": 1, "slew_ps": {"BC": 50}, "max_slew_ps": 100}
            ]}"#,
        )
        .unwrap()
    }

    fn region(cols: u32, rows: u32, corner: EntryCorner) -> RegionModel {
        let lib = library();
        let fp = Floorplan::from_document(FloorplanDocument::uniform("u", cols, rows, corner, "BC"), &lib).unwrap();
        build_region(&fp, &lib).unwrap()
    }

    #[test]
    fn single_node_has_no_edges() {
        let r = region(1, 1, EntryCorner::TopLeft);
        let t = route_rct(&r).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.edges.is_empty());
        assert!(verify_topology(&t, &r).is_clean());
    }

    #[test]
    fn two_by_one_orders_left_then_right() {
        let r = region(2, 1, EntryCorner::TopLeft);
        let t = route_rct(&r).unwrap();
        assert_eq!(r.blocks()[t.node(NodeId(1)).block].col, 0);
        assert_eq!(r.blocks()[t.node(NodeId(2)).block].col, 1);
    }

    #[test]
    fn row_of_three_is_a_horizontal_chain() {
        let r = region(3, 1, EntryCorner::TopLeft);
        let t = route_rct(&r).unwrap();
        assert_eq!(t.edges.len(), 2);
        assert!(t.edges.iter().all(|e| e.variant == ChordVariant::HToH));
        let cols: Vec<u32> = t.ids().map(|id| r.blocks()[t.node(id).block].col).collect();
        assert_eq!(cols, vec![0, 1, 2]);
    }

    #[test]
    fn eight_by_three_has_three_branches() {
        let r = region(8, 3, EntryCorner::TopLeft);
        let t = route_rct(&r).unwrap();
        let branches = t.branches();
        assert_eq!(branches.len(), 3);
        assert!(branches.iter().all(|b| b.len() == 8));
        let spine: Vec<ChordVariant> = t
            .edges
            .iter()
            .filter(|e| t.node(e.child).config.input == InputSelect::V)
            .map(|e| e.variant)
            .collect();
        assert_eq!(spine, vec![ChordVariant::VToH, ChordVariant::VToH]);
        assert!(t
            .edges
            .iter()
            .filter(|e| t.node(e.child).config.input == InputSelect::H)
            .all(|e| e.variant == ChordVariant::HToH));
        // Furthest node is the end of the bottom branch.
        let last = &r.blocks()[t.node(t.furthest()).block];
        assert_eq!((last.col, last.row), (7, 2));
        assert!(verify_topology(&t, &r).is_clean());
    }

    #[test]
    fn single_column_spine_uses_v_to_v() {
        let r = region(1, 3, EntryCorner::TopLeft);
        let t = route_rct(&r).unwrap();
        assert!(t.edges.iter().all(|e| e.variant == ChordVariant::VToV));
        assert!(verify_topology(&t, &r).is_clean());
    }

    #[test]
    fn dangling_exit_detected() {
        let r = region(2, 1, EntryCorner::TopLeft);
        let mut t = route_rct(&r).unwrap();
        t.nodes[0].config.enable_v_out = true;
        let report = verify_topology(&t, &r);
        assert_eq!(
            report.violations,
            vec![Violation::DanglingExit {
                node: NodeId(1),
                port: Dir::V
            }]
        );
    }

    #[test]
    fn undriven_input_detected() {
        let r = region(1, 2, EntryCorner::TopLeft);
        let mut t = route_rct(&r).unwrap();
        t.nodes[1].config.input = InputSelect::H;
        let report = verify_topology(&t, &r);
        assert!(report.violations.contains(&Violation::UndrivenInput {
            node: NodeId(2),
            port: Dir::H
        }));
        assert!(report.violations.contains(&Violation::DanglingExit {
            node: NodeId(1),
            port: Dir::V
        }));
    }

    #[test]
    fn broken_tree_detected() {
        let r = region(3, 1, EntryCorner::TopLeft);
        let mut t = route_rct(&r).unwrap();
        t.edges.pop();
        let report = verify_topology(&t, &r);
        assert!(report.violations.contains(&Violation::EdgeCount { found: 1, expected: 2 }));
        assert!(report.violations.contains(&Violation::Unreachable { node: NodeId(3) }));
        assert!(report.violations.iter().any(|v| matches!(v, Violation::MissingEdge { .. })));
    }

    #[test]
    fn incomplete_rows_rejected() {
        let lib = load_block_library(
            &library()
                .to_json()
                .replace(r#""types": ["#, r#""types": [{"id": "tall", "width": 1, "height": 2, "chords": {"H_to_H": {"edge": {"BC": 0.5}}}, "taps": {"BC": [1.0, 2.0]}, "fragment_cap_ff": 1, "lct_cap_ff": 1, "slew_ps": {"BC": 50}, "max_slew_ps": 100},"#),
        )
        .unwrap();
        let mut doc = FloorplanDocument::uniform("u", 2, 2, EntryCorner::TopLeft, "BC");
        doc.placements = vec![("tall".into(), 0, 0), ("u".into(), 1, 0), ("u".into(), 1, 1)];
        let fp = Floorplan::from_document(doc, &lib).unwrap();
        let r = build_region(&fp, &lib).unwrap();
        assert!(matches!(route_rct(&r), Err(RouteError::IncompleteRows { .. })));
    }

    #[test]
    fn missing_chord_is_an_error() {
        let lib = load_block_library(
            r#"{"corners": ["BC"], "types": [
              {"id": "u", "width": 1, "height": 1,
               "chords": {"H_to_H": {"edge": {"BC": 0.5}}},
               "taps": {"BC": [1.0, 2.0]},
               "fragment_cap_ff": 1, "lct_cap_ff": 1, "slew_ps": {"BC": 50}, "max_slew_ps": 100}]}"#,
        )
        .unwrap();
        let fp = Floorplan::from_document(FloorplanDocument::uniform("u", 2, 2, EntryCorner::TopLeft, "BC"), &lib)
            .unwrap();
        let r = build_region(&fp, &lib).unwrap();
        assert!(matches!(
            route_rct(&r),
            Err(RouteError::MissingChord {
                variant: ChordVariant::VToH,
                ..
            })
        ));
    }
}
