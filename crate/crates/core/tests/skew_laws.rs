use proptest::prelude::*;
use rct_core::crosscheck::{check_instance, random_instance};
use rct_core::reference::fixture;
use rct_core::skew::Strategy;
use rct_core::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn local_lies_in_pruned_space(seed in any::<u64>()) {
        let inst = random_instance(seed, 30, 32);
        let c = ideal_taps_and_prune(&inst.profile, &inst.taps);
        prop_assert!(c.contains(&local_optimize(&inst.profile, &inst.taps)));
        for n in &c.nodes {
            prop_assert!(!n.taps.is_empty() && n.taps.len() <= 2);
            prop_assert!(n.taps.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(n.taps.iter().all(|&t| t >= 1 && t as usize <= inst.taps.len()));
            if n.clamp.is_none() && n.taps.len() == 2 {
                prop_assert!(inst.taps.delay(n.taps[0] as usize).unwrap() <= n.ideal);
                prop_assert!(n.ideal <= inst.taps.delay(n.taps[1] as usize).unwrap());
            }
        }
    }

    #[test]
    fn oracle_orderings(seed in any::<u64>()) {
        let check = check_instance(&random_instance(seed, 5, 6), 6u64.pow(4));
        prop_assert!(check.local_is_l_optimal());
        prop_assert!(check.ordering_holds());
    }

    #[test]
    fn windowed_whole_grid_equals_all_pairs(seed in any::<u64>()) {
        let inst = random_instance(seed, 12, 8);
        let whole = WindowSpec::whole(inst.region.cols(), inst.region.rows());
        let pairs = window_pairs(&inst.region, &inst.topology, whole);
        let a = local_optimize(&inst.profile, &inst.taps);
        let arr = arrival_times(&inst.profile, &inst.taps, &a).unwrap();
        let all = PairSet::all(inst.profile.len());
        prop_assert_eq!(pairs.pairs(), all.pairs());
        prop_assert_eq!(g_abs_mean(&arr, &pairs), g_abs_mean(&arr, &all));
    }

    #[test]
    fn dp_and_branch_and_bound_agree(seed in any::<u64>(), w in 1u32..=3, s in 1u32..=2) {
        let inst = random_instance(seed, 16, 16);
        let window = WindowSpec { cols: w, rows: w, stride_cols: s, stride_rows: s };
        let pairs = window_pairs(&inst.region, &inst.topology, window);
        let c = ideal_taps_and_prune(&inst.profile, &inst.taps);
        let run = |strategy| {
            let opts = SearchOptions { strategy, ..SearchOptions::default() };
            global_optimize(&inst.profile, &inst.taps, &c, &pairs, &opts).unwrap()
        };
        let dp = run(Strategy::FrontierDp);
        let bb = run(Strategy::BranchAndBound);
        prop_assert_eq!(&dp.assignment, &bb.assignment);
        prop_assert_eq!(dp.cost, bb.cost);
        let again = run(Strategy::Auto);
        prop_assert_eq!(dp.assignment, again.assignment);
    }

    #[test]
    fn window_pairs_are_symmetric_and_irreflexive(seed in any::<u64>(), w in 1u32..=4, h in 1u32..=4, s in 1u32..=3) {
        let inst = random_instance(seed, 24, 2);
        let p = window_pairs(&inst.region, &inst.topology, WindowSpec { cols: w, rows: h, stride_cols: s, stride_rows: s });
        for &(x, y) in p.pairs() {
            prop_assert!(x < y);
            prop_assert!(p.contains(y, x));
        }
    }
}

#[test]
fn reference_local_within_half_pitch() {
    let (lib, fp) = fixture("region_8x3").unwrap().load();
    let region = build_region(&fp, &lib).unwrap();
    let topo = route_rct(&region).unwrap();
    let bc = CornerId::new("BC");
    let profile = natural_delays(&region, &topo, &bc).unwrap();
    let taps = region.taps(&bc).unwrap();
    let half = TimeFs((taps.max_pitch().fs() + 1) / 2);
    let local = local_optimize(&profile, taps);
    let arr = arrival_times(&profile, taps, &local).unwrap();
    let cands = ideal_taps_and_prune(&profile, taps);
    let last = *arr.arrival.last().unwrap();
    for (k, &a) in arr.arrival.iter().enumerate() {
        // Clamped nodes cannot reach their ideal.
        if cands.nodes[k].clamp.is_none() {
            assert!((a - last).abs() <= half, "node {}", k + 1);
        }
    }
}

#[test]
fn chain_fixture_values() {
    let (lib, fp) = fixture("chain_3x1").unwrap().load();
    let region = build_region(&fp, &lib).unwrap();
    let topo = route_rct(&region).unwrap();
    let tt = CornerId::new("TT");
    let profile = natural_delays(&region, &topo, &tt).unwrap();
    let taps = region.taps(&tt).unwrap();
    let local = local_optimize(&profile, taps);
    assert_eq!(local.indices(), &[6, 3, 1]);
    let c = ideal_taps_and_prune(&profile, taps);
    let g = global_optimize(&profile, taps, &c, &PairSet::all(3), &SearchOptions::default()).unwrap();
    assert_eq!(g.assignment.indices(), &[6, 3, 1]);
    assert_eq!(g.cost, MeanFs::new(400_000, 6));
    let o = brute_force_oracle(&profile, taps, &PairSet::star(3), 36, Execution::default()).unwrap();
    assert_eq!(o.assignment.indices(), &[6, 3, 1]);
    assert_eq!(o.cost, MeanFs::new(50_000, 1));
}

#[test]
fn small_fixture_full_enumeration() {
    let (lib, fp) = fixture("small_3x2").unwrap().load();
    let region = build_region(&fp, &lib).unwrap();
    let topo = route_rct(&region).unwrap();
    let tt = CornerId::new("TT");
    let profile = natural_delays(&region, &topo, &tt).unwrap();
    let taps = region.taps(&tt).unwrap();
    let all = PairSet::all(6);
    let full = brute_force_oracle(&profile, taps, &all, 32_768, Execution::default()).unwrap();
    assert_eq!(full.configurations, 32_768);
    let seq = brute_force_oracle(&profile, taps, &all, 32_768, Execution::Sequential).unwrap();
    assert_eq!(full, seq);
    let c = ideal_taps_and_prune(&profile, taps);
    let pruned = global_optimize(&profile, taps, &c, &all, &SearchOptions::default()).unwrap();
    assert!(full.cost <= pruned.cost);
    assert_eq!(
        pruned.cost,
        brute_force_pruned(&profile, taps, &c, &all, Execution::default()).unwrap().cost
    );
}
