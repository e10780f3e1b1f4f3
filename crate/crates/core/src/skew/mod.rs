//! Tap assignment: cost functions, local and pruned-global optimization,
//! window pair sets and an exhaustive oracle.

mod oracle;
mod prune;
mod search;
mod window;

use serde::Serialize;
use thiserror::Error;

use crate::delay::{ArrivalProfile, DelayProfile};
use crate::library::Taps;
use crate::units::{MeanFs, TimeFs};

pub use oracle::{brute_force_oracle, brute_force_pruned, OracleError, OracleResult};
pub use prune::{ideal_taps_and_prune, Clamp, NodeCandidates, PrunedCandidates};
pub use search::{global_optimize, SearchError, SearchMethod, SearchOptions, SearchOutcome, SearchStats, Strategy};
pub use window::{window_pairs, PairSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("the furthest node must use tap 1, found tap {0}")]
    Unpinned(u32),
    #[error("tap indices are 1-based; found 0 at position {0}")]
    ZeroIndex(usize),
}

/// One 1-based tap index per node; `indices[k]` belongs to node `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct TapAssignment(Vec<u32>);

impl TapAssignment {
    /// An assignment with the last node pinned to tap 1.
    pub fn new(indices: Vec<u32>) -> Result<Self, AssignmentError> {
        let a = Self::checked(indices)?;
        match a.0.last() {
            Some(&i) if i != 1 => Err(AssignmentError::Unpinned(i)),
            _ => Ok(a),
        }
    }

    /// Any 1-based assignment, for analyzing configurations the optimizer
    /// would not produce.
    pub fn checked(indices: Vec<u32>) -> Result<Self, AssignmentError> {
        match indices.iter().position(|&i| i == 0) {
            Some(k) => Err(AssignmentError::ZeroIndex(k)),
            None => Ok(TapAssignment(indices)),
        }
    }

    /// Skips every check; indices are validated again when arrivals are formed.
    pub fn new_unpinned(indices: Vec<u32>) -> Self {
        TapAssignment(indices)
    }

    pub fn uniform(n: usize, index: u32) -> Self {
        TapAssignment(vec![index; n])
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_pinned(&self) -> bool {
        self.0.last().map_or(true, |&i| i == 1)
    }
}

/// Cost function minimized by the optimizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Mean absolute difference to the furthest node.
    L,
    /// Mean absolute difference over all node pairs.
    G,
    /// Mean absolute difference over the given pairs.
    Windowed(PairSet),
}

impl Objective {
    /// The pairs whose mean absolute difference this objective measures.
    pub fn pair_set(&self, n: usize) -> PairSet {
        match self {
            Objective::L => PairSet::star(n),
            Objective::G => PairSet::all(n),
            Objective::Windowed(p) => p.clone(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Objective::L => "L",
            Objective::G => "G",
            Objective::Windowed(_) => "windowed",
        }
    }
}

/// Mean of `|T_LCT_x - T_LCT_N|` over `x < N`.
pub fn l_abs_mean(arrivals: &ArrivalProfile) -> MeanFs {
    let a = &arrivals.arrival;
    let Some((&last, rest)) = a.split_last() else {
        return MeanFs::ZERO;
    };
    let total: i64 = rest.iter().map(|&t| (t - last).abs().fs()).sum();
    MeanFs::new(total, rest.len() as u64)
}

/// Mean absolute difference over ordered pairs; every unordered pair of
/// `pairs` counts in both directions.
pub fn g_abs_mean(arrivals: &ArrivalProfile, pairs: &PairSet) -> MeanFs {
    pair_mean(&arrivals.arrival, pairs)
}

pub(crate) fn pair_sum(arrival: &[TimeFs], pairs: &PairSet) -> i64 {
    pairs
        .pairs()
        .iter()
        .map(|&(x, y)| (arrival[x as usize] - arrival[y as usize]).abs().fs())
        .sum()
}

pub(crate) fn pair_mean(arrival: &[TimeFs], pairs: &PairSet) -> MeanFs {
    MeanFs::new(2 * pair_sum(arrival, pairs), 2 * pairs.len() as u64)
}

/// Cost summary of one arrival profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostReport {
    pub l_abs_mean: MeanFs,
    pub g_abs_mean: MeanFs,
    pub windowed_mean: Option<MeanFs>,
    /// Largest pairwise arrival difference.
    pub max_pairwise_diff: TimeFs,
    /// Largest arrival difference within a window, when one is given.
    pub windowed_max_diff: Option<TimeFs>,
    /// `T_LCT_x - T_LCT_N` for every node.
    pub diffs_vs_furthest: Vec<TimeFs>,
}

pub fn cost_report(arrivals: &ArrivalProfile, window: Option<&PairSet>) -> CostReport {
    let a = &arrivals.arrival;
    let last = a.last().copied().unwrap_or(TimeFs::ZERO);
    CostReport {
        l_abs_mean: l_abs_mean(arrivals),
        g_abs_mean: pair_mean(a, &PairSet::all(a.len())),
        windowed_mean: window.map(|p| pair_mean(a, p)),
        max_pairwise_diff: arrivals.skew(),
        windowed_max_diff: window.map(|p| {
            p.pairs()
                .iter()
                .map(|&(x, y)| (a[x as usize] - a[y as usize]).abs())
                .max()
                .unwrap_or(TimeFs::ZERO)
        }),
        diffs_vs_furthest: a.iter().map(|&t| t - last).collect(),
    }
}

/// Per-node closest tap to `T_LCT_N,1`, ties to the lower index; the
/// furthest node keeps tap 1.
pub fn local_optimize(profile: &DelayProfile, taps: &Taps) -> TapAssignment {
    let n = profile.len();
    if n == 0 {
        return TapAssignment(Vec::new());
    }
    let target = profile.furthest() + taps.min();
    let mut out = Vec::with_capacity(n);
    for &nat in &profile.natural[..n - 1] {
        let mut best = (TimeFs(i64::MAX), 0u32);
        for (j, &t) in taps.as_slice().iter().enumerate() {
            let d = (nat + t - target).abs();
            if d < best.0 {
                best = (d, j as u32 + 1);
            }
        }
        out.push(best.1);
    }
    out.push(1);
    TapAssignment(out)
}

/// Arrival time of every candidate of every node, in candidate order.
pub(crate) fn candidate_arrivals(profile: &DelayProfile, taps: &Taps, candidates: &[Vec<u32>]) -> Vec<Vec<i64>> {
    profile
        .natural
        .iter()
        .zip(candidates)
        .map(|(&nat, c)| c.iter().map(|&i| (nat + taps.as_slice()[i as usize - 1]).fs()).collect())
        .collect()
}
