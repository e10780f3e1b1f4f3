use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rct_core::crosscheck::{random_instance, random_library, CORNER};
use rct_core::reference::fixture;
use rct_core::*;

fn max_natural(lib: &BlockLibrary, cols: u32, rows: u32) -> TimeFs {
    let fp = Floorplan::from_document(FloorplanDocument::uniform("t", cols, rows, EntryCorner::TopLeft, CORNER), lib)
        .unwrap();
    let region = build_region(&fp, lib).unwrap();
    let topo = route_rct(&region).unwrap();
    natural_delays(&region, &topo, &CornerId::new(CORNER)).unwrap().max()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tap_shift_moves_arrivals_rigidly(seed in any::<u64>(), delta in 1i64..5_000_000) {
        let inst = random_instance(seed, 8, 8);
        let shifted = inst.taps.shifted(TimeFs(delta)).unwrap();
        let a = local_optimize(&inst.profile, &inst.taps);
        prop_assert_eq!(&a, &local_optimize(&inst.profile, &shifted));
        let before = arrival_times(&inst.profile, &inst.taps, &a).unwrap();
        let after = arrival_times(&inst.profile, &shifted, &a).unwrap();
        for (x, y) in before.arrival.iter().zip(&after.arrival) {
            prop_assert_eq!(*x + TimeFs(delta), *y);
        }
        let all = PairSet::all(inst.profile.len());
        prop_assert_eq!(l_abs_mean(&before), l_abs_mean(&after));
        prop_assert_eq!(g_abs_mean(&before, &all), g_abs_mean(&after, &all));
        let c0 = ideal_taps_and_prune(&inst.profile, &inst.taps);
        let c1 = ideal_taps_and_prune(&inst.profile, &shifted);
        let o0 = global_optimize(&inst.profile, &inst.taps, &c0, &all, &SearchOptions::default()).unwrap();
        let o1 = global_optimize(&inst.profile, &shifted, &c1, &all, &SearchOptions::default()).unwrap();
        prop_assert_eq!(o0.assignment, o1.assignment);
        prop_assert_eq!(o0.cost, o1.cost);
    }

    #[test]
    fn feasible_regions_have_ideals_in_range(seed in any::<u64>()) {
        let inst = random_instance(seed, 12, 16);
        let report = feasibility_max_size(&inst.profile, &inst.taps);
        if report.feasible {
            prop_assert!(report.offending.is_empty());
        }
    }

    #[test]
    fn adding_a_column_never_lowers_max_delay(seed in any::<u64>(), cols in 2u32..=20, rows in 1u32..=5) {
        let lib = random_library(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        prop_assert!(max_natural(&lib, cols + 1, rows) >= max_natural(&lib, cols, rows));
    }

    #[test]
    fn single_row_monotone_from_one_column(seed in any::<u64>(), cols in 1u32..=20) {
        let lib = random_library(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        prop_assert!(max_natural(&lib, cols + 1, 1) >= max_natural(&lib, cols, 1));
    }

    #[test]
    fn size_sweep_matches_rebuilt_regions(seed in any::<u64>(), rows in 1u32..=4) {
        let lib = random_library(&mut ChaCha8Rng::seed_from_u64(seed), 12);
        let t = &lib.types()[0];
        let c = CornerId::new(CORNER);
        let range = t.taps(&c).unwrap().range();
        let expected = (1..=60u32).take_while(|&cols| max_natural(&lib, cols, rows) <= range).last().unwrap_or(0);
        let got = size_sweep(t, rows, &c).unwrap();
        prop_assume!(expected < 60);
        prop_assert_eq!(got, expected);
    }
}

#[test]
fn reference_sweep_and_feasibility() {
    let (lib, fp) = fixture("region_8x3").unwrap().load();
    let region = build_region(&fp, &lib).unwrap();
    let topo = route_rct(&region).unwrap();
    let bc = CornerId::new("BC");
    let profile = natural_delays(&region, &topo, &bc).unwrap();
    let taps = region.taps(&bc).unwrap();
    assert_eq!(taps.range(), TimeFs::parse_ns("4.5").unwrap());
    // 2 * 0.617 + 7 * 0.469 exceeds the 4.5 ns range by 17 ps.
    let report = feasibility_max_size(&profile, taps);
    assert_eq!(profile.max(), TimeFs::parse_ns("4.517").unwrap());
    assert!(!report.feasible);
    assert_eq!(report.margin, TimeFs::from_ps(-17));
    assert_eq!(report.offending, vec![NodeId(1)]);
    assert_eq!(size_sweep(&lib.types()[0], 3, &bc).unwrap(), 7);
}

#[test]
fn all_ones_skew_is_natural_spread() {
    let (lib, fp) = fixture("region_8x3").unwrap().load();
    let region = build_region(&fp, &lib).unwrap();
    let topo = route_rct(&region).unwrap();
    let bc = CornerId::new("BC");
    let profile = natural_delays(&region, &topo, &bc).unwrap();
    let ones = TapAssignment::uniform(24, 1);
    let a = arrival_times(&profile, region.taps(&bc).unwrap(), &ones).unwrap();
    assert_eq!(a.skew(), profile.max());
}

#[test]
fn corners_evaluate_identically_in_both_modes() {
    let (lib, fp) = fixture("region_8x3").unwrap().load();
    let region = build_region(&fp, &lib).unwrap();
    let topo = route_rct(&region).unwrap();
    let seq = natural_delays_all_corners(&region, &topo, Execution::Sequential).unwrap();
    let par = natural_delays_all_corners(&region, &topo, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
    assert_eq!(seq.len(), 2);
}
