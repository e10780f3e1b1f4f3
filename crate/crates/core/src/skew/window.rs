use std::collections::BTreeSet;

use crate::floorplan::WindowSpec;
use crate::region::RegionModel;
use crate::route::RctTopology;

/// Unordered node pairs, stored 0-based as `(x, y)` with `x < y` and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSet {
    n: usize,
    pairs: Vec<(u32, u32)>,
    sweep_order: Option<Vec<usize>>,
}

impl PairSet {
    /// Builds a pair set from arbitrary pairs; self pairs are dropped and
    /// orientation is normalized.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let set: BTreeSet<(u32, u32)> = pairs
            .into_iter()
            .filter(|&(x, y)| x != y)
            .map(|(x, y)| (x.min(y), x.max(y)))
            .inspect(|&(_, y)| assert!((y as usize) < n, "pair node out of range"))
            .collect();
        PairSet {
            n,
            pairs: set.into_iter().collect(),
            sweep_order: None,
        }
    }

    pub fn all(n: usize) -> Self {
        let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for x in 0..n as u32 {
            for y in x + 1..n as u32 {
                pairs.push((x, y));
            }
        }
        PairSet {
            n,
            pairs,
            sweep_order: None,
        }
    }

    /// Every node paired with the last one.
    pub fn star(n: usize) -> Self {
        let last = n.saturating_sub(1) as u32;
        PairSet {
            n,
            pairs: (0..last).map(|x| (x, last)).collect(),
            sweep_order: None,
        }
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: u32, y: u32) -> bool {
        self.pairs.binary_search(&(x.min(y), x.max(y))).is_ok()
    }

    pub fn is_all(&self) -> bool {
        self.pairs.len() == self.n * self.n.saturating_sub(1) / 2
    }

    /// Neighbour lists, sorted.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for &(x, y) in &self.pairs {
            out[x as usize].push(y as usize);
            out[y as usize].push(x as usize);
        }
        for list in &mut out {
            list.sort_unstable();
        }
        out
    }

    /// `N'`, the largest neighbourhood size.
    pub fn n_prime(&self) -> usize {
        self.neighbors().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Spatial node order suggested by the window geometry, if any.
    pub fn sweep_order(&self) -> Option<&[usize]> {
        self.sweep_order.as_deref()
    }
}

fn origins(extent: u32, size: u32, stride: u32) -> Vec<u32> {
    let last = extent - size;
    let mut out: Vec<u32> = (0..=last).step_by(stride.max(1) as usize).collect();
    if out.last() != Some(&last) {
        out.push(last);
    }
    out
}

/// Pairs of nodes whose blocks share at least one window placement.
///
/// Windows start at every stride step and one more placement is aligned to
/// the far edge when the strides do not reach it. A block belongs to every
/// placement it intersects. Windows larger than the grid are clipped to it.
pub fn window_pairs(region: &RegionModel, topology: &RctTopology, window: WindowSpec) -> PairSet {
    let n = topology.len();
    let w = window.cols.clamp(1, region.cols().max(1));
    let h = window.rows.clamp(1, region.rows().max(1));
    let node_of = topology.node_of_block();
    let mut set = BTreeSet::new();
    for &r0 in &origins(region.rows(), h, window.stride_rows) {
        for &c0 in &origins(region.cols(), w, window.stride_cols) {
            let members: Vec<u32> = region
                .blocks()
                .iter()
                .enumerate()
                .filter(|(_, b)| b.col < c0 + w && c0 < b.col + b.width && b.row < r0 + h && r0 < b.row + b.height)
                .map(|(i, _)| node_of[&i].index() as u32)
                .collect();
            for (k, &x) in members.iter().enumerate() {
                for &y in &members[k + 1..] {
                    set.insert((x.min(y), x.max(y)));
                }
            }
        }
    }
    let mut sweep: Vec<usize> = (0..n).collect();
    sweep.sort_by_key(|&k| {
        let b = &region.blocks()[topology.nodes[k].block];
        (b.col, b.row)
    });
    PairSet {
        n,
        pairs: set.into_iter().collect(),
        sweep_order: Some(sweep),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floorplan::{EntryCorner, Floorplan, FloorplanDocument};
    use crate::library::load_block_library;
    use crate::region::build_region;
    use crate::route::route_rct;

    fn routed(cols: u32, rows: u32) -> (RegionModel, RctTopology) {
        let lib = load_block_library(
            r#"{"corners": ["BC"], "types": [
              {"id": "u", "width": 1, "height": 1,
               "chords": {"H_to_H": {"edge": {"BC": 0.5}, "middle": {"BC": 0.5}},
                          "V_to_H": {"edge": {"BC": 0.6}, "middle": {"BC": 0.6}},
                          "V_to_V": {"edge": {"BC": 0.6}, "middle": {"BC": 0.6}}},
               "taps": {"BC": [1.0, 2.0]},
               "fragment_cap_ff": 1, "lct_cap_ff": 1, "slew_ps": {"BC": 50}, "max_slew_ps": 100}]}"#,
        )
        .unwrap();
        let fp = Floorplan::from_document(FloorplanDocument::uniform("u", cols, rows, EntryCorner::TopLeft, "BC"), &lib)
            .unwrap();
        let region = build_region(&fp, &lib).unwrap();
        let topo = route_rct(&region).unwrap();
        (region, topo)
    }

    #[test]
    fn whole_grid_is_all_pairs() {
        let (r, t) = routed(4, 3);
        let p = window_pairs(&r, &t, WindowSpec::whole(4, 3));
        assert!(p.is_all());
        assert_eq!(p.pairs(), PairSet::all(12).pairs());
        let big = window_pairs(&r, &t, WindowSpec::whole(9, 9));
        assert!(big.is_all());
    }

    #[test]
    fn row_window_enumeration() {
        let (r, t) = routed(8, 1);
        let p = window_pairs(&r, &t, WindowSpec { cols: 3, rows: 1, stride_cols: 1, stride_rows: 1 });
        let col = |k: u32| r.blocks()[t.nodes[k as usize].block].col as i64;
        for x in 0..8u32 {
            for y in x + 1..8 {
                assert_eq!(p.contains(x, y), (col(x) - col(y)).abs() <= 2, "{x} {y}");
            }
        }
        assert_eq!(p.n_prime(), 4);
    }

    #[test]
    fn reference_grid_neighbourhood() {
        let (r, t) = routed(8, 3);
        let p = window_pairs(&r, &t, WindowSpec { cols: 3, rows: 3, stride_cols: 1, stride_rows: 1 });
        assert_eq!(p.n_prime(), 14);
    }

    #[test]
    fn stride_adds_far_edge_window() {
        assert_eq!(origins(8, 3, 2), vec![0, 2, 4, 5]);
        assert_eq!(origins(8, 3, 1), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(origins(3, 3, 4), vec![0]);
    }

    #[test]
    fn star_and_symmetry() {
        let s = PairSet::star(4);
        assert_eq!(s.pairs(), &[(0, 3), (1, 3), (2, 3)]);
        let p = PairSet::from_pairs(3, [(2, 0), (0, 2), (1, 1)]);
        assert_eq!(p.pairs(), &[(0, 2)]);
        assert!(p.contains(2, 0));
    }
}
