//! Floorplan documents and tiling validation.
//!
//! Grid coordinates are 0-based; column 0 is the left edge and row 0 the top
//! edge. A placement `[type_id, col, row]` anchors the block's top-left cell.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::library::{BlockLibrary, CornerId};

pub const FLOORPLAN_SCHEMA: &str = "rct-floorplan/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryCorner {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
}

impl EntryCorner {
    pub const ALL: [EntryCorner; 4] = [Self::TopLeft, Self::TopRight, Self::BottomLeft, Self::BottomRight];

    /// Grid cell at this corner of a `cols x rows` grid.
    pub fn cell(self, cols: u32, rows: u32) -> (u32, u32) {
        match self {
            Self::TopLeft => (0, 0),
            Self::TopRight => (cols - 1, 0),
            Self::BottomLeft => (0, rows - 1),
            Self::BottomRight => (cols - 1, rows - 1),
        }
    }
}

impl fmt::Display for EntryCorner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::TopLeft => "top_left",
            Self::TopRight => "top_right",
            Self::BottomLeft => "bottom_left",
            Self::BottomRight => "bottom_right",
        })
    }
}

/// Direction the clock propagates: vertically along the spine, then
/// horizontally along each row branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    TopDownLeftRight,
    TopDownRightLeft,
    BottomUpLeftRight,
    BottomUpRightLeft,
}

impl Orientation {
    /// The only orientation that starts at `corner`.
    pub fn for_corner(corner: EntryCorner) -> Self {
        match corner {
            EntryCorner::TopLeft => Self::TopDownLeftRight,
            EntryCorner::TopRight => Self::TopDownRightLeft,
            EntryCorner::BottomLeft => Self::BottomUpLeftRight,
            EntryCorner::BottomRight => Self::BottomUpRightLeft,
        }
    }

    pub fn bottom_up(self) -> bool {
        matches!(self, Self::BottomUpLeftRight | Self::BottomUpRightLeft)
    }

    pub fn right_to_left(self) -> bool {
        matches!(self, Self::TopDownRightLeft | Self::BottomUpRightLeft)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::TopDownLeftRight => "top_down_left_right",
            Self::TopDownRightLeft => "top_down_right_left",
            Self::BottomUpLeftRight => "bottom_up_left_right",
            Self::BottomUpRightLeft => "bottom_up_right_left",
        })
    }
}

/// Sliding window bounding the blocks that share combinational paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub cols: u32,
    pub rows: u32,
    pub stride_cols: u32,
    pub stride_rows: u32,
}

impl WindowSpec {
    pub fn whole(cols: u32, rows: u32) -> Self {
        WindowSpec {
            cols,
            rows,
            stride_cols: 1,
            stride_rows: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub type_id: String,
    pub type_index: usize,
    pub col: u32,
    pub row: u32,
    pub width: u32,
    pub height: u32,
}

impl Placement {
    pub fn covers(&self, col: u32, row: u32) -> bool {
        col >= self.col && col < self.col + self.width && row >= self.row && row < self.row + self.height
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Floorplan {
    pub cols: u32,
    pub rows: u32,
    pub placements: Vec<Placement>,
    pub entry_corner: EntryCorner,
    pub orientation: Orientation,
    pub window: Option<WindowSpec>,
    pub corner_of_record: CornerId,
}

impl Floorplan {
    pub fn to_document(&self) -> FloorplanDocument {
        FloorplanDocument {
            schema: Some(FLOORPLAN_SCHEMA.to_string()),
            cols: self.cols,
            rows: self.rows,
            placements: self
                .placements
                .iter()
                .map(|p| (p.type_id.clone(), p.col, p.row))
                .collect(),
            entry_corner: self.entry_corner,
            orientation: Some(self.orientation),
            corner_of_record: self.corner_of_record.0.clone(),
            window: self.window,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("floorplan document serializes")
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FloorplanDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub cols: u32,
    pub rows: u32,
    pub placements: Vec<(String, u32, u32)>,
    pub entry_corner: EntryCorner,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Orientation>,
    pub corner_of_record: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSpec>,
}

impl FloorplanDocument {
    /// A grid of `cols x rows` unit blocks of one type.
    pub fn uniform(type_id: &str, cols: u32, rows: u32, entry_corner: EntryCorner, corner: &str) -> Self {
        let placements = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (type_id.to_string(), c, r)))
            .collect();
        FloorplanDocument {
            schema: None,
            cols,
            rows,
            placements,
            entry_corner,
            orientation: None,
            corner_of_record: corner.to_string(),
            window: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FloorplanError {
    #[error("floorplan schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid floorplan: {}", join_issues(.0))]
    Invalid(Vec<FloorplanIssue>),
}

fn join_issues(issues: &[FloorplanIssue]) -> String {
    issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FloorplanIssue {
    #[error("grid must be at least 1x1")]
    EmptyGrid,
    #[error("placements[{index}]: unknown type_id `{type_id}`")]
    UnknownType { index: usize, type_id: String },
    #[error("placements[{index}]: block extends past the grid boundary")]
    OutOfBounds { index: usize },
    #[error("placements[{first}] and placements[{second}] overlap at cell ({col}, {row})")]
    Overlap {
        first: usize,
        second: usize,
        col: u32,
        row: u32,
    },
    #[error("uncovered cell ({col}, {row})")]
    Uncovered { col: u32, row: u32 },
    #[error("entry corner {corner} is not on a placed block")]
    EntryOffGrid { corner: EntryCorner },
    #[error("orientation {orientation} does not start at entry corner {corner}")]
    OrientationMismatch {
        orientation: Orientation,
        corner: EntryCorner,
    },
    #[error("corner_of_record `{0}` is not characterized by the library")]
    UnknownCorner(String),
    #[error("window dimensions and strides must be positive")]
    BadWindow,
}

/// Parses a floorplan document and validates it against `library`.
pub fn load_floorplan(text: &str, library: &BlockLibrary) -> Result<Floorplan, FloorplanError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: FloorplanDocument = serde_path_to_error::deserialize(de).map_err(|e| FloorplanError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    Floorplan::from_document(doc, library)
}

impl Floorplan {
    /// Validates a document, collecting every issue rather than stopping at the first.
    pub fn from_document(doc: FloorplanDocument, library: &BlockLibrary) -> Result<Floorplan, FloorplanError> {
        let mut issues = Vec::new();
        if doc.cols == 0 || doc.rows == 0 {
            return Err(FloorplanError::Invalid(vec![FloorplanIssue::EmptyGrid]));
        }
        let corner_of_record = CornerId::new(&doc.corner_of_record);
        if !library.has_corner(&corner_of_record) {
            issues.push(FloorplanIssue::UnknownCorner(doc.corner_of_record.clone()));
        }
        let orientation = match doc.orientation {
            Some(o) if o != Orientation::for_corner(doc.entry_corner) => {
                issues.push(FloorplanIssue::OrientationMismatch {
                    orientation: o,
                    corner: doc.entry_corner,
                });
                o
            }
            Some(o) => o,
            None => Orientation::for_corner(doc.entry_corner),
        };
        if let Some(w) = doc.window {
            if w.cols == 0 || w.rows == 0 || w.stride_cols == 0 || w.stride_rows == 0 {
                issues.push(FloorplanIssue::BadWindow);
            }
        }

        let mut placements = Vec::with_capacity(doc.placements.len());
        for (index, (type_id, col, row)) in doc.placements.iter().enumerate() {
            match library.type_index(type_id) {
                Some(ti) => {
                    let t = &library.types()[ti];
                    placements.push(Placement {
                        type_id: type_id.clone(),
                        type_index: ti,
                        col: *col,
                        row: *row,
                        width: t.width,
                        height: t.height,
                    });
                }
                None => issues.push(FloorplanIssue::UnknownType {
                    index,
                    type_id: type_id.clone(),
                }),
            }
        }
        if !issues.is_empty() {
            return Err(FloorplanError::Invalid(issues));
        }

        issues.extend(tiling_issues(doc.cols, doc.rows, &placements));
        let (ec, er) = doc.entry_corner.cell(doc.cols, doc.rows);
        if !placements.iter().any(|p| p.covers(ec, er)) {
            issues.push(FloorplanIssue::EntryOffGrid {
                corner: doc.entry_corner,
            });
        }
        if !issues.is_empty() {
            return Err(FloorplanError::Invalid(issues));
        }
        Ok(Floorplan {
            cols: doc.cols,
            rows: doc.rows,
            placements,
            entry_corner: doc.entry_corner,
            orientation,
            window: doc.window,
            corner_of_record,
        })
    }
}

/// Every tiling defect: out-of-bounds blocks, overlapping pairs and holes.
pub fn tiling_issues(cols: u32, rows: u32, placements: &[Placement]) -> Vec<FloorplanIssue> {
    let mut issues = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; (cols as usize) * (rows as usize)];
    let mut reported = BTreeSet::new();
    for (index, p) in placements.iter().enumerate() {
        let fits = u64::from(p.col) + u64::from(p.width) <= u64::from(cols)
            && u64::from(p.row) + u64::from(p.height) <= u64::from(rows);
        if !fits {
            issues.push(FloorplanIssue::OutOfBounds { index });
        }
        let col_end = (p.col.saturating_add(p.width)).min(cols);
        let row_end = (p.row.saturating_add(p.height)).min(rows);
        for row in p.row..row_end {
            for col in p.col..col_end {
                let cell = &mut owner[(row as usize) * (cols as usize) + col as usize];
                match *cell {
                    Some(first) => {
                        if reported.insert((first, index)) {
                            issues.push(FloorplanIssue::Overlap {
                                first,
                                second: index,
                                col,
                                row,
                            });
                        }
                    }
                    None => *cell = Some(index),
                }
            }
        }
    }
    for row in 0..rows {
        for col in 0..cols {
            if owner[(row as usize) * (cols as usize) + col as usize].is_none() {
                issues.push(FloorplanIssue::Uncovered { col, row });
            }
        }
    }
    issues
}
