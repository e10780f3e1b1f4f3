//! The immutable region model: placed blocks, their row classes and the
//! library they are characterized by.

use thiserror::Error;

use crate::floorplan::{Floorplan, WindowSpec};
use crate::library::{BlockLibrary, BlockType, CornerId, RowClass, Taps};

/// A placed block instance. Indices into [`RegionModel::blocks`] are stable;
/// node ids are assigned later by routing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub type_index: usize,
    pub col: u32,
    pub row: u32,
    pub width: u32,
    pub height: u32,
    pub row_class: RowClass,
}

impl Block {
    pub fn covers(&self, col: u32, row: u32) -> bool {
        col >= self.col && col < self.col + self.width && row >= self.row && row < self.row + self.height
    }
}

/// Block extent in the propagation frame, where the entry corner is the
/// origin, `u` runs along row branches and `v` along the spine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientedSpan {
    pub u0: u32,
    pub u1: u32,
    pub v0: u32,
    pub v1: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegionError {
    #[error("floorplan references type index {0} missing from the library")]
    UnknownType(usize),
    #[error("block types `{first}` and `{other}` carry different tap lines; a region uses one delay line")]
    MixedTapLines { first: String, other: String },
}

#[derive(Clone, Debug)]
pub struct RegionModel {
    library: BlockLibrary,
    floorplan: Floorplan,
    blocks: Vec<Block>,
    occupancy: Vec<usize>,
}

/// Builds the region model from a validated floorplan.
pub fn build_region(floorplan: &Floorplan, library: &BlockLibrary) -> Result<RegionModel, RegionError> {
    let mut blocks = Vec::with_capacity(floorplan.placements.len());
    for p in &floorplan.placements {
        if p.type_index >= library.types().len() {
            return Err(RegionError::UnknownType(p.type_index));
        }
        let row_class = if p.row == 0 || p.row + p.height == floorplan.rows {
            RowClass::Edge
        } else {
            RowClass::Middle
        };
        blocks.push(Block {
            type_index: p.type_index,
            col: p.col,
            row: p.row,
            width: p.width,
            height: p.height,
            row_class,
        });
    }

    let mut used: Vec<usize> = blocks.iter().map(|b| b.type_index).collect();
    used.sort_unstable();
    used.dedup();
    if let Some((&first, rest)) = used.split_first() {
        let reference = &library.types()[first];
        for &other in rest {
            let t = &library.types()[other];
            if t.tap_line != reference.tap_line {
                return Err(RegionError::MixedTapLines {
                    first: reference.id.clone(),
                    other: t.id.clone(),
                });
            }
        }
    }

    let mut occupancy = vec![usize::MAX; (floorplan.cols as usize) * (floorplan.rows as usize)];
    for (i, b) in blocks.iter().enumerate() {
        for row in b.row..b.row + b.height {
            for col in b.col..b.col + b.width {
                occupancy[(row as usize) * (floorplan.cols as usize) + col as usize] = i;
            }
        }
    }

    Ok(RegionModel {
        library: library.clone(),
        floorplan: floorplan.clone(),
        blocks,
        occupancy,
    })
}

impl RegionModel {
    pub fn library(&self) -> &BlockLibrary {
        &self.library
    }

    pub fn floorplan(&self) -> &Floorplan {
        &self.floorplan
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `N`, the number of placed blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn cols(&self) -> u32 {
        self.floorplan.cols
    }

    pub fn rows(&self) -> u32 {
        self.floorplan.rows
    }

    pub fn corner_of_record(&self) -> &CornerId {
        &self.floorplan.corner_of_record
    }

    pub fn window(&self) -> Option<WindowSpec> {
        self.floorplan.window
    }

    pub fn block_type(&self, block: usize) -> &BlockType {
        &self.library.types()[self.blocks[block].type_index]
    }

    /// The delay line shared by every block at `corner`.
    pub fn taps(&self, corner: &CornerId) -> Option<&Taps> {
        self.blocks.first().and_then(|_| self.block_type(0).taps(corner))
    }

    /// Block covering grid cell `(col, row)`.
    pub fn block_at(&self, col: u32, row: u32) -> Option<usize> {
        if col >= self.cols() || row >= self.rows() {
            return None;
        }
        let b = self.occupancy[(row as usize) * (self.cols() as usize) + col as usize];
        (b != usize::MAX).then_some(b)
    }

    /// Index of the block covering the entry corner.
    pub fn entry_block(&self) -> Option<usize> {
        let (c, r) = self.floorplan.entry_corner.cell(self.cols(), self.rows());
        self.block_at(c, r)
    }

    pub fn oriented_span(&self, block: usize) -> OrientedSpan {
        let b = &self.blocks[block];
        let o = self.floorplan.orientation;
        let (u0, u1) = if o.right_to_left() {
            (self.cols() - b.col - b.width, self.cols() - b.col)
        } else {
            (b.col, b.col + b.width)
        };
        let (v0, v1) = if o.bottom_up() {
            (self.rows() - b.row - b.height, self.rows() - b.row)
        } else {
            (b.row, b.row + b.height)
        };
        OrientedSpan { u0, u1, v0, v1 }
    }

    /// Block covering oriented cell `(u, v)`.
    pub fn block_at_oriented(&self, u: u32, v: u32) -> Option<usize> {
        if u >= self.cols() || v >= self.rows() {
            return None;
        }
        let o = self.floorplan.orientation;
        let col = if o.right_to_left() { self.cols() - 1 - u } else { u };
        let row = if o.bottom_up() { self.rows() - 1 - v } else { v };
        self.block_at(col, row)
    }
}
