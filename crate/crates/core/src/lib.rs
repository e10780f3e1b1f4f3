//! Regional clock trees composed by abutment of pre-characterized blocks.
//!
//! A region is a grid of blocks, each carrying a fragment of the clock tree
//! and a programmable delay line. The crate validates floorplans, routes the
//! spine-and-branch tree, computes natural delays and arrival times exactly in
//! femtoseconds, and chooses delay-line taps that minimize arrival skew.

pub mod crosscheck;
pub mod delay;
pub mod floorplan;
pub mod library;
pub mod par;
pub mod reference;
pub mod render;
pub mod report;
pub mod region;
pub mod route;
pub mod skew;
pub mod units;

pub use delay::{
    aggregate_electrical, arrival_times, feasibility_max_size, natural_delays, natural_delays_all_corners,
    size_sweep, ArrivalProfile, DelayError, DelayProfile, ElectricalReport, FeasibilityReport,
};
pub use floorplan::{load_floorplan, EntryCorner, Floorplan, FloorplanDocument, FloorplanError, Orientation, WindowSpec};
pub use library::{load_block_library, BlockLibrary, BlockType, ChordVariant, CornerId, LibraryError, RowClass, Taps};
pub use par::Execution;
pub use region::{build_region, RegionError, RegionModel};
pub use route::{route_rct, verify_topology, NodeId, RctTopology, RouteError, StructuralReport};
pub use skew::{
    brute_force_oracle, brute_force_pruned, cost_report, g_abs_mean, global_optimize, ideal_taps_and_prune, l_abs_mean,
    local_optimize, window_pairs, CostReport, Objective, PairSet, PrunedCandidates, SearchOptions, TapAssignment,
};
pub use units::{MeanFs, TimeFs};
