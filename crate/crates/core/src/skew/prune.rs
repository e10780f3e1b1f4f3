use serde::Serialize;

use crate::delay::DelayProfile;
use crate::library::Taps;
use crate::route::NodeId;
use crate::units::TimeFs;

use super::TapAssignment;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clamp {
    /// Ideal delay below the first tap.
    Below,
    /// Ideal delay above the last tap.
    Above,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeCandidates {
    pub node: NodeId,
    /// `T_LCT_N,1 - T_nat_x`.
    pub ideal: TimeFs,
    /// One or two sorted 1-based tap indices.
    pub taps: Vec<u32>,
    pub clamp: Option<Clamp>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrunedCandidates {
    pub nodes: Vec<NodeCandidates>,
}

impl PrunedCandidates {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn clamped(&self) -> impl Iterator<Item = &NodeCandidates> {
        self.nodes.iter().filter(|c| c.clamp.is_some())
    }

    pub(crate) fn tap_lists(&self) -> Vec<Vec<u32>> {
        self.nodes.iter().map(|c| c.taps.clone()).collect()
    }

    /// Number of assignments in the pruned space, if it fits in `u64`.
    pub fn space_size(&self) -> Option<u64> {
        self.nodes
            .iter()
            .try_fold(1u64, |acc, c| acc.checked_mul(c.taps.len() as u64))
    }

    pub fn contains(&self, assignment: &TapAssignment) -> bool {
        assignment.len() == self.nodes.len()
            && self
                .nodes
                .iter()
                .zip(assignment.indices())
                .all(|(c, i)| c.taps.contains(i))
    }
}

/// Brackets every node's ideal tap delay by two neighbouring taps.
pub fn ideal_taps_and_prune(profile: &DelayProfile, taps: &Taps) -> PrunedCandidates {
    let n = profile.len();
    let m = taps.len() as u32;
    let reference = profile.furthest() + taps.min();
    let nodes = profile
        .natural
        .iter()
        .enumerate()
        .map(|(k, &nat)| {
            let ideal = reference - nat;
            let (list, clamp) = if k + 1 == n {
                (vec![1], None)
            } else if ideal < taps.min() {
                (vec![1], Some(Clamp::Below))
            } else if ideal > taps.max() {
                (vec![m], Some(Clamp::Above))
            } else if ideal == taps.max() {
                (vec![m], None)
            } else {
                let lb = taps.as_slice().partition_point(|&t| t <= ideal) as u32;
                (vec![lb, lb + 1], None)
            };
            NodeCandidates {
                node: NodeId::from_index(k),
                ideal,
                taps: list,
                clamp,
            }
        })
        .collect();
    PrunedCandidates { nodes }
}
