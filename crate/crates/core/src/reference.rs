//! Shipped fixtures, embedded so tests and tools do not depend on paths.

use crate::floorplan::{load_floorplan, Floorplan};
use crate::library::{load_block_library, BlockLibrary};

pub const REFERENCE_LIBRARY: &str = include_str!("../fixtures/reference_library.json");
pub const REGION_8X3: &str = include_str!("../fixtures/region_8x3.json");
pub const REGION_25X3: &str = include_str!("../fixtures/region_25x3.json");
pub const CHAIN_LIBRARY: &str = include_str!("../fixtures/chain_library.json");
pub const CHAIN_3X1: &str = include_str!("../fixtures/chain_3x1.json");
pub const SMALL_LIBRARY: &str = include_str!("../fixtures/small_library.json");
pub const SMALL_3X2: &str = include_str!("../fixtures/small_3x2.json");

/// A library text paired with a floorplan text.
#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub library: &'static str,
    pub floorplan: &'static str,
}

impl Fixture {
    pub fn load(&self) -> (BlockLibrary, Floorplan) {
        let lib = load_block_library(self.library).expect("shipped library is valid");
        let fp = load_floorplan(self.floorplan, &lib).expect("shipped floorplan is valid");
        (lib, fp)
    }
}

pub const FIXTURES: [Fixture; 4] = [
    Fixture { name: "region_8x3", library: REFERENCE_LIBRARY, floorplan: REGION_8X3 },
    Fixture { name: "region_25x3", library: REFERENCE_LIBRARY, floorplan: REGION_25X3 },
    Fixture { name: "chain_3x1", library: CHAIN_LIBRARY, floorplan: CHAIN_3X1 },
    Fixture { name: "small_3x2", library: SMALL_LIBRARY, floorplan: SMALL_3X2 },
];

pub fn fixture(name: &str) -> Option<Fixture> {
    FIXTURES.iter().copied().find(|f| f.name == name)
}
