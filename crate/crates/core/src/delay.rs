//! Additive delay model and region-level electrical checks.
//!
//! The natural delay of a node is the exact sum of the chord delays charged
//! along its path from the entry node; its arrival time adds the delay of the
//! tap selected in its own delay line.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::library::{BlockType, ChordVariant, CornerId, RowClass, Taps};
use crate::par::Execution;
use crate::region::RegionModel;
use crate::route::{NodeId, RctTopology, RouteError};
use crate::skew::TapAssignment;
use crate::units::TimeFs;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DelayError {
    #[error(transparent)]
    Characterization(#[from] RouteError),
    #[error("corner `{0}` is not characterized")]
    UnknownCorner(CornerId),
    #[error("topology is not a tree rooted at n1; {0} is unreachable or multiply driven")]
    NotATree(NodeId),
    #[error("assignment has {found} entries for {expected} nodes")]
    AssignmentLength { found: usize, expected: usize },
    #[error("{node}: tap index {index} is outside 1..={taps}")]
    TapOutOfRange { node: NodeId, index: u32, taps: usize },
}

/// Natural delays `T_nat` of every node at one corner; `natural[k]` belongs
/// to node `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DelayProfile {
    pub corner: CornerId,
    pub natural: Vec<TimeFs>,
}

impl DelayProfile {
    pub fn new(corner: CornerId, natural: Vec<TimeFs>) -> Self {
        DelayProfile { corner, natural }
    }

    pub fn len(&self) -> usize {
        self.natural.len()
    }

    pub fn is_empty(&self) -> bool {
        self.natural.is_empty()
    }

    pub fn of(&self, node: NodeId) -> TimeFs {
        self.natural[node.index()]
    }

    pub fn max(&self) -> TimeFs {
        self.natural.iter().copied().max().unwrap_or(TimeFs::ZERO)
    }

    /// `T_nat_N`, the natural delay of the last node.
    pub fn furthest(&self) -> TimeFs {
        self.natural.last().copied().unwrap_or(TimeFs::ZERO)
    }

    /// Whether node `N` attains the maximal natural delay.
    pub fn furthest_is_max(&self) -> bool {
        self.furthest() == self.max()
    }
}

/// Arrival times `T_LCT` at every LCT entry for one assignment and corner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArrivalProfile {
    pub corner: CornerId,
    pub arrival: Vec<TimeFs>,
}

impl ArrivalProfile {
    pub fn len(&self) -> usize {
        self.arrival.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrival.is_empty()
    }

    pub fn of(&self, node: NodeId) -> TimeFs {
        self.arrival[node.index()]
    }

    /// Largest difference between any two arrivals.
    pub fn skew(&self) -> TimeFs {
        match (self.arrival.iter().min(), self.arrival.iter().max()) {
            (Some(&lo), Some(&hi)) => hi - lo,
            _ => TimeFs::ZERO,
        }
    }
}

/// `T_nat` of every node: the sum of chord delays charged along its path.
pub fn natural_delays(region: &RegionModel, topology: &RctTopology, corner: &CornerId) -> Result<DelayProfile, DelayError> {
    if !region.library().has_corner(corner) {
        return Err(DelayError::UnknownCorner(corner.clone()));
    }
    let n = topology.len();
    let children = topology.children();
    let mut natural = vec![TimeFs::ZERO; n];
    let mut visits = vec![0usize; n];
    if n == 0 {
        return Ok(DelayProfile::new(corner.clone(), natural));
    }
    visits[0] = 1;
    let mut stack = vec![NodeId::ENTRY];
    while let Some(parent) = stack.pop() {
        for &(child, variant) in &children[parent.index()] {
            let c = child.index();
            visits[c] += 1;
            if visits[c] > 1 {
                return Err(DelayError::NotATree(child));
            }
            natural[c] = natural[parent.index()] + chord(region, topology.node(child).block, variant, corner)?;
            stack.push(child);
        }
    }
    if let Some(i) = visits.iter().position(|&v| v != 1) {
        return Err(DelayError::NotATree(NodeId::from_index(i)));
    }
    Ok(DelayProfile::new(corner.clone(), natural))
}

fn chord(region: &RegionModel, block: usize, variant: ChordVariant, corner: &CornerId) -> Result<TimeFs, DelayError> {
    let row_class = region.blocks()[block].row_class;
    let t = region.block_type(block);
    t.chord_delay(variant, row_class, corner).ok_or_else(|| {
        DelayError::Characterization(RouteError::MissingChord {
            block,
            type_id: t.id.clone(),
            variant,
            row_class,
            corner: corner.clone(),
        })
    })
}

/// Natural delays at every library corner, evaluated per corner and keyed by
/// corner name.
pub fn natural_delays_all_corners(
    region: &RegionModel,
    topology: &RctTopology,
    exec: Execution,
) -> Result<BTreeMap<CornerId, DelayProfile>, DelayError> {
    let corners = region.library().corners();
    exec.map(corners, |c| natural_delays(region, topology, c))
        .into_iter()
        .map(|r| r.map(|p| (p.corner.clone(), p)))
        .collect()
}

/// `T_LCT_x = T_nat_x + t_tap(i_x)` for every node.
pub fn arrival_times(profile: &DelayProfile, taps: &Taps, assignment: &TapAssignment) -> Result<ArrivalProfile, DelayError> {
    if assignment.len() != profile.len() {
        return Err(DelayError::AssignmentLength {
            found: assignment.len(),
            expected: profile.len(),
        });
    }
    let arrival = profile
        .natural
        .iter()
        .zip(assignment.indices())
        .enumerate()
        .map(|(k, (&nat, &index))| {
            taps.delay(index as usize)
                .map(|t| nat + t)
                .ok_or(DelayError::TapOutOfRange {
                    node: NodeId::from_index(k),
                    index,
                    taps: taps.len(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ArrivalProfile {
        corner: profile.corner.clone(),
        arrival,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeFeasibility {
    pub node: NodeId,
    /// `t_tap_ideal = T_LCT_N,1 - T_nat_x`.
    pub ideal: TimeFs,
    pub in_range: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub corner: CornerId,
    pub feasible: bool,
    pub max_natural: TimeFs,
    pub tap_range: TimeFs,
    /// `tap_range - max_natural`; negative when infeasible.
    pub margin: TimeFs,
    pub nodes: Vec<NodeFeasibility>,
    /// Nodes whose ideal tap delay lies outside the tap line.
    pub offending: Vec<NodeId>,
}

/// Checks `max(T_nat) <= t_tap_M - t_tap_1` and reports each node's ideal tap.
pub fn feasibility_max_size(profile: &DelayProfile, taps: &Taps) -> FeasibilityReport {
    let max_natural = profile.max();
    let tap_range = taps.range();
    let reference = profile.furthest() + taps.min();
    let nodes: Vec<NodeFeasibility> = profile
        .natural
        .iter()
        .enumerate()
        .map(|(k, &nat)| {
            let ideal = reference - nat;
            NodeFeasibility {
                node: NodeId::from_index(k),
                ideal,
                in_range: ideal >= taps.min() && ideal <= taps.max(),
            }
        })
        .collect();
    let offending = nodes.iter().filter(|n| !n.in_range).map(|n| n.node).collect();
    FeasibilityReport {
        corner: profile.corner.clone(),
        feasible: max_natural <= tap_range,
        max_natural,
        tap_range,
        margin: tap_range - max_natural,
        nodes,
        offending,
    }
}

fn row_class(row: u32, rows: u32) -> RowClass {
    if row == 0 || row + 1 == rows {
        RowClass::Edge
    } else {
        RowClass::Middle
    }
}

/// Largest column count for which a homogeneous `rows`-row region of
/// `block_type` stays feasible under spine-and-branch routing.
///
/// Natural delays are accumulated per column rather than by rebuilding
/// regions. Returns 0 when even a single column is infeasible.
pub fn size_sweep(block_type: &BlockType, rows: u32, corner: &CornerId) -> Result<u32, DelayError> {
    let taps = block_type
        .taps(corner)
        .ok_or_else(|| DelayError::UnknownCorner(corner.clone()))?;
    let range = taps.range();
    let lookup = |variant: ChordVariant, row: u32| {
        let class = row_class(row, rows);
        block_type.chord_delay(variant, class, corner).ok_or_else(|| {
            DelayError::Characterization(RouteError::MissingChord {
                block: 0,
                type_id: block_type.id.clone(),
                variant,
                row_class: class,
                corner: corner.clone(),
            })
        })
    };
    if rows == 0 {
        return Ok(0);
    }

    // One column: a bare spine.
    let mut single = TimeFs::ZERO;
    for row in 1..rows {
        single += lookup(ChordVariant::VToV, row)?;
    }
    if single > range {
        return Ok(0);
    }

    // Two or more columns: spine nodes turn into their branch.
    let mut spine = Vec::with_capacity(rows as usize);
    let mut branch = Vec::with_capacity(rows as usize);
    let mut acc = TimeFs::ZERO;
    for row in 0..rows {
        if row > 0 {
            acc += lookup(ChordVariant::VToH, row)?;
        }
        spine.push(acc);
        branch.push(lookup(ChordVariant::HToH, row)?);
    }
    let mut feasible = 1;
    let mut tail: Vec<TimeFs> = spine.clone();
    loop {
        for (t, &h) in tail.iter_mut().zip(&branch) {
            *t += h;
        }
        let worst = tail.iter().copied().max().expect("rows >= 1");
        if worst > range {
            return Ok(feasible);
        }
        feasible += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ElectricalReport {
    pub corner: CornerId,
    pub total_rct_capacitance_ff: f64,
    pub total_lct_capacitance_ff: f64,
    pub rct_fraction: f64,
    pub worst_slew: TimeFs,
    pub slew_rule_ok: bool,
    /// Nodes whose LCT-entry slew exceeds their block's rule.
    pub slew_violations: Vec<usize>,
}

/// Capacitance totals and slew rule check at one corner.
pub fn aggregate_electrical(region: &RegionModel, corner: &CornerId) -> Result<ElectricalReport, DelayError> {
    if !region.library().has_corner(corner) {
        return Err(DelayError::UnknownCorner(corner.clone()));
    }
    let mut rct = 0.0;
    let mut lct = 0.0;
    let mut worst = TimeFs::ZERO;
    let mut violations = Vec::new();
    for b in 0..region.len() {
        let t = region.block_type(b);
        rct += t.fragment_cap_ff;
        lct += t.lct_cap_ff;
        let slew = t.slew(corner).ok_or_else(|| DelayError::UnknownCorner(corner.clone()))?;
        worst = worst.max(slew);
        if slew > t.max_slew {
            violations.push(b);
        }
    }
    let total = rct + lct;
    Ok(ElectricalReport {
        corner: corner.clone(),
        total_rct_capacitance_ff: rct,
        total_lct_capacitance_ff: lct,
        rct_fraction: if total > 0.0 { rct / total } else { 0.0 },
        worst_slew: worst,
        slew_rule_ok: violations.is_empty(),
        slew_violations: violations,
    })
}
