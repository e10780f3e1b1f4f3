use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rct_core::crosscheck::{random_library, CORNER};
use rct_core::reference::fixture;
use rct_core::*;

fn routed(lib: &BlockLibrary, cols: u32, rows: u32, entry: EntryCorner) -> (RegionModel, RctTopology) {
    let fp = Floorplan::from_document(FloorplanDocument::uniform("t", cols, rows, entry, CORNER), lib).unwrap();
    let region = build_region(&fp, lib).unwrap();
    let topo = route_rct(&region).unwrap();
    (region, topo)
}

/// Walks parent links from `x` to the entry, charging each chord to the child.
fn path_sum(region: &RegionModel, topo: &RctTopology, x: NodeId, corner: &CornerId) -> TimeFs {
    let mut total = TimeFs::ZERO;
    let mut cur = x;
    while cur != NodeId::ENTRY {
        let e = topo.edges.iter().find(|e| e.child == cur).expect("driven");
        let block = topo.node(cur).block;
        let class = region.blocks()[block].row_class;
        total += region.block_type(block).chord_delay(e.variant, class, corner).unwrap();
        cur = e.parent;
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_grids_verify_clean(seed in any::<u64>(), cols in 1u32..=30, rows in 1u32..=6, corner in 0usize..4) {
        let lib = random_library(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let (region, topo) = routed(&lib, cols, rows, EntryCorner::ALL[corner]);
        let report = verify_topology(&topo, &region);
        prop_assert!(report.is_clean(), "{:?}", report.violations);
        prop_assert_eq!(topo.len(), (cols * rows) as usize);
        prop_assert_eq!(topo.branches().len(), rows as usize);
        let c = CornerId::new(CORNER);
        let profile = natural_delays(&region, &topo, &c).unwrap();
        prop_assert!(profile.furthest_is_max());
        for id in topo.ids() {
            prop_assert_eq!(profile.of(id), path_sum(&region, &topo, id, &c));
        }
    }

    #[test]
    fn mirrored_entries_share_delays(seed in any::<u64>(), cols in 1u32..=12, rows in 1u32..=5) {
        let lib = random_library(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let c = CornerId::new(CORNER);
        let mut sorted: Vec<Vec<TimeFs>> = EntryCorner::ALL
            .iter()
            .map(|&e| {
                let (region, topo) = routed(&lib, cols, rows, e);
                let mut d = natural_delays(&region, &topo, &c).unwrap().natural;
                d.sort();
                d
            })
            .collect();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), 1);
    }
}

#[test]
fn reference_region_shape() {
    let (lib, fp) = fixture("region_8x3").unwrap().load();
    let region = build_region(&fp, &lib).unwrap();
    let topo = route_rct(&region).unwrap();
    assert!(verify_topology(&topo, &region).is_clean());
    let branches = topo.branches();
    assert_eq!(branches.len(), 3);
    assert!(branches.iter().all(|b| b.len() == 8));
    let bc = CornerId::new("BC");
    let profile = natural_delays(&region, &topo, &bc).unwrap();
    let t = &lib.types()[0];
    let chord = |v| t.chord_delay(v, RowClass::Middle, &bc).unwrap();
    let middle_end = region.block_at(7, 1).unwrap();
    let id = topo.node_of_block()[&middle_end];
    let expected = chord(ChordVariant::VToH) + TimeFs(7 * chord(ChordVariant::HToH).fs());
    assert_eq!(profile.of(id), expected);
    assert_eq!(expected, TimeFs::parse_ns("3.9").unwrap());
}

#[test]
fn documents_round_trip() {
    for f in rct_core::reference::FIXTURES {
        let (lib, fp) = f.load();
        let lib2 = load_block_library(&lib.to_json()).unwrap();
        assert_eq!(lib2.to_json(), lib.to_json());
        let fp2 = load_floorplan(&fp.to_json(), &lib2).unwrap();
        assert_eq!(fp2.to_json(), fp.to_json());
    }
}
