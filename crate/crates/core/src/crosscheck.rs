//! Seeded random regions and the optimizer-versus-oracle comparison suite.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::delay::{arrival_times, natural_delays, DelayProfile};
use crate::floorplan::{EntryCorner, Floorplan, FloorplanDocument};
use crate::library::{BlockLibrary, BlockTypeDocument, ChordVariant, LibraryDocument, RowClass, Taps};
use crate::par::Execution;
use crate::region::{build_region, RegionModel};
use crate::route::{route_rct, RctTopology};
use crate::skew::{
    brute_force_oracle, global_optimize, ideal_taps_and_prune, local_optimize, PairSet, SearchOptions, TapAssignment,
};
use crate::units::{MeanFs, TimeFs};

pub const CORNER: &str = "TT";

/// A routed random region with its natural delays at [`CORNER`].
#[derive(Clone, Debug)]
pub struct Instance {
    pub seed: u64,
    pub library: BlockLibrary,
    pub floorplan: Floorplan,
    pub region: RegionModel,
    pub topology: RctTopology,
    pub profile: DelayProfile,
    pub taps: Taps,
}

fn ns(fs: i64) -> f64 {
    TimeFs(fs).to_ns_f64()
}

/// Random unit-block library: every chord variant and row class gets its own
/// positive delay, and the tap line is strictly increasing.
pub fn random_library(rng: &mut ChaCha8Rng, max_taps: usize) -> BlockLibrary {
    let mut chords = BTreeMap::new();
    for v in ChordVariant::ALL {
        let mut rows = BTreeMap::new();
        for r in [RowClass::Edge, RowClass::Middle] {
            rows.insert(r, BTreeMap::from([(CORNER.to_string(), ns(rng.gen_range(50_000..1_000_000)))]));
        }
        chords.insert(v, rows);
    }
    let m = rng.gen_range(1..=max_taps);
    let mut t = rng.gen_range(100_000..2_000_000);
    let mut taps = Vec::with_capacity(m);
    for _ in 0..m {
        taps.push(ns(t));
        t += rng.gen_range(10_000..800_000);
    }
    let doc = LibraryDocument {
        schema: None,
        corners: vec![CORNER.to_string()],
        types: vec![BlockTypeDocument {
            id: "t".into(),
            width: 1,
            height: 1,
            chords,
            taps: BTreeMap::from([(CORNER.to_string(), taps)]),
            fragment_cap_ff: 3.0,
            lct_cap_ff: 97.0,
            slew_ps: BTreeMap::from([(CORNER.to_string(), 67.0)]),
            max_slew_ps: 100.0,
        }],
    };
    BlockLibrary::from_document(doc).expect("generated library is valid")
}

/// [`random_library`] from a seed.
pub fn seeded_library(seed: u64, max_taps: usize) -> BlockLibrary {
    random_library(&mut ChaCha8Rng::seed_from_u64(seed), max_taps)
}

/// A random grid of at most `max_nodes` blocks with a random entry corner.
pub fn random_instance(seed: u64, max_nodes: usize, max_taps: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let library = random_library(&mut rng, max_taps);
    let n = rng.gen_range(1..=max_nodes) as u32;
    let divisors: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    let cols = divisors[rng.gen_range(0..divisors.len())];
    let rows = n / cols;
    let entry = EntryCorner::ALL[rng.gen_range(0..4)];
    let floorplan = Floorplan::from_document(FloorplanDocument::uniform("t", cols, rows, entry, CORNER), &library)
        .expect("generated floorplan is valid");
    let region = build_region(&floorplan, &library).expect("single type");
    let topology = route_rct(&region).expect("full grid routes");
    let corner = crate::library::CornerId::new(CORNER);
    let profile = natural_delays(&region, &topology, &corner).expect("all chords present");
    let taps = region.taps(&corner).expect("taps present").clone();
    Instance {
        seed,
        library,
        floorplan,
        region,
        topology,
        profile,
        taps,
    }
}

/// Comparison of every optimizer against the exhaustive oracle on one
/// instance.
#[derive(Clone, Debug)]
pub struct InstanceCheck {
    pub seed: u64,
    pub nodes: usize,
    pub taps: usize,
    pub l_local: MeanFs,
    pub l_full: MeanFs,
    pub g_full: MeanFs,
    pub g_pruned: MeanFs,
    pub g_local: MeanFs,
    pub full_assignment: TapAssignment,
    pub pruned_assignment: TapAssignment,
}

impl InstanceCheck {
    pub fn local_is_l_optimal(&self) -> bool {
        self.l_local == self.l_full
    }

    /// `full <= pruned <= local` for the all-pairs mean.
    pub fn ordering_holds(&self) -> bool {
        self.g_full <= self.g_pruned && self.g_pruned <= self.g_local
    }

    pub fn pruned_is_full(&self) -> bool {
        self.g_pruned == self.g_full
    }
}

pub fn check_instance(inst: &Instance, oracle_limit: u64) -> InstanceCheck {
    let n = inst.profile.len();
    let local = local_optimize(&inst.profile, &inst.taps);
    let local_arrivals = arrival_times(&inst.profile, &inst.taps, &local).expect("local in range");
    let star = PairSet::star(n);
    let all = PairSet::all(n);
    let l_full = brute_force_oracle(&inst.profile, &inst.taps, &star, oracle_limit, Execution::Sequential)
        .expect("instance within oracle limit");
    let g_full = brute_force_oracle(&inst.profile, &inst.taps, &all, oracle_limit, Execution::Sequential)
        .expect("instance within oracle limit");
    let candidates = ideal_taps_and_prune(&inst.profile, &inst.taps);
    let pruned = global_optimize(&inst.profile, &inst.taps, &candidates, &all, &SearchOptions::default())
        .expect("small instance");
    InstanceCheck {
        seed: inst.seed,
        nodes: n,
        taps: inst.taps.len(),
        l_local: crate::skew::l_abs_mean(&local_arrivals),
        l_full: l_full.cost,
        g_full: g_full.cost,
        g_pruned: pruned.cost,
        g_local: crate::skew::g_abs_mean(&local_arrivals, &all),
        full_assignment: g_full.assignment,
        pruned_assignment: pruned.assignment,
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteSummary {
    pub instances: usize,
    pub l_mismatches: Vec<u64>,
    pub ordering_violations: Vec<u64>,
    pub pruned_equal: usize,
    /// Instances where the pruned optimum is worse than the full optimum.
    pub divergences: Vec<InstanceCheck>,
}

/// Runs [`check_instance`] on seeds `base..base + count`.
pub fn run_suite(base: u64, count: u64, max_nodes: usize, max_taps: usize, exec: Execution) -> SuiteSummary {
    let limit = (max_taps as u64).pow(max_nodes.saturating_sub(1) as u32);
    let checks = exec.map_range(count as usize, |k| {
        check_instance(&random_instance(base + k as u64, max_nodes, max_taps), limit)
    });
    let mut s = SuiteSummary {
        instances: checks.len(),
        ..SuiteSummary::default()
    };
    for c in checks {
        if !c.local_is_l_optimal() {
            s.l_mismatches.push(c.seed);
        }
        if !c.ordering_holds() {
            s.ordering_violations.push(c.seed);
        }
        if c.pruned_is_full() {
            s.pruned_equal += 1;
        } else {
            s.divergences.push(c);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible() {
        let a = random_instance(11, 6, 8);
        let b = random_instance(11, 6, 8);
        assert_eq!(a.profile, b.profile);
        assert_eq!(a.taps, b.taps);
        assert!(a.profile.len() <= 6 && a.taps.len() <= 8);
    }

    #[test]
    fn small_suite() {
        let s = run_suite(0, 40, 5, 6, Execution::default());
        assert_eq!(s.instances, 40);
        assert!(s.l_mismatches.is_empty());
        assert!(s.ordering_violations.is_empty());
    }
}
