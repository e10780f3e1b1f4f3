//! Characterized block library.
//!
//! A library document lists the corners it characterizes and one entry per
//! block type. Chord delays are keyed by variant, row class and corner; tap
//! lines and LCT-entry slews are keyed by corner. Every value is converted to
//! femtoseconds on load.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::units::{TimeFs, UnitError};

pub const LIBRARY_SCHEMA: &str = "rct-library/1";

/// The four input/output pairings of a fragment's chord.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ChordVariant {
    #[serde(rename = "H_to_H")]
    HToH,
    #[serde(rename = "H_to_V")]
    HToV,
    #[serde(rename = "V_to_H")]
    VToH,
    #[serde(rename = "V_to_V")]
    VToV,
}

impl ChordVariant {
    pub const ALL: [ChordVariant; 4] = [Self::HToH, Self::HToV, Self::VToH, Self::VToV];

    pub fn from_dirs(input: Dir, output: Dir) -> Self {
        match (input, output) {
            (Dir::H, Dir::H) => Self::HToH,
            (Dir::H, Dir::V) => Self::HToV,
            (Dir::V, Dir::H) => Self::VToH,
            (Dir::V, Dir::V) => Self::VToV,
        }
    }

    pub fn input(self) -> Dir {
        match self {
            Self::HToH | Self::HToV => Dir::H,
            Self::VToH | Self::VToV => Dir::V,
        }
    }

    pub fn output(self) -> Dir {
        match self {
            Self::HToH | Self::VToH => Dir::H,
            Self::HToV | Self::VToV => Dir::V,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::HToH => "H_to_H",
            Self::HToV => "H_to_V",
            Self::VToH => "V_to_H",
            Self::VToV => "V_to_V",
        }
    }
}

impl fmt::Display for ChordVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Horizontal or vertical fragment port.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    H,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowClass {
    Edge,
    Middle,
}

impl RowClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RowClass::Edge => "edge",
            RowClass::Middle => "middle",
        }
    }
}

impl fmt::Display for RowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Name of a characterization corner, e.g. `BC` or `WC`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CornerId(pub String);

impl CornerId {
    pub fn new(name: impl Into<String>) -> Self {
        CornerId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CornerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Tap delays of one delay line at one corner, strictly increasing.
///
/// Index `i` in the public API is 1-based, matching tap numbering in reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Taps(Vec<TimeFs>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TapsError {
    #[error("tap line is empty")]
    Empty,
    #[error("tap {index} has non-positive delay {delay}")]
    NonPositive { index: usize, delay: TimeFs },
    #[error("non-monotone tap line: tap {index} ({delay}) does not exceed tap {prev_index} ({prev})")]
    NonMonotone {
        index: usize,
        delay: TimeFs,
        prev_index: usize,
        prev: TimeFs,
    },
}

impl Taps {
    pub fn new(delays: Vec<TimeFs>) -> Result<Self, TapsError> {
        if delays.is_empty() {
            return Err(TapsError::Empty);
        }
        for (i, &d) in delays.iter().enumerate() {
            if !d.is_positive() {
                return Err(TapsError::NonPositive { index: i + 1, delay: d });
            }
            if i > 0 && d <= delays[i - 1] {
                return Err(TapsError::NonMonotone {
                    index: i + 1,
                    delay: d,
                    prev_index: i,
                    prev: delays[i - 1],
                });
            }
        }
        Ok(Taps(delays))
    }

    /// `M`, the number of taps.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Delay of 1-based tap `index`.
    pub fn delay(&self, index: usize) -> Option<TimeFs> {
        index.checked_sub(1).and_then(|i| self.0.get(i)).copied()
    }

    pub fn as_slice(&self) -> &[TimeFs] {
        &self.0
    }

    pub fn min(&self) -> TimeFs {
        self.0[0]
    }

    pub fn max(&self) -> TimeFs {
        self.0[self.0.len() - 1]
    }

    /// `t_tap_M - t_tap_1`.
    pub fn range(&self) -> TimeFs {
        self.max() - self.min()
    }

    /// Largest gap between consecutive taps.
    pub fn max_pitch(&self) -> TimeFs {
        self.0.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(TimeFs::ZERO)
    }

    /// The same line with every delay shifted by `delta`.
    pub fn shifted(&self, delta: TimeFs) -> Result<Self, TapsError> {
        Taps::new(self.0.iter().map(|&d| d + delta).collect())
    }
}

/// Tap lines of one block type, one per corner.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TapLine(pub BTreeMap<CornerId, Taps>);

impl TapLine {
    pub fn at(&self, corner: &CornerId) -> Option<&Taps> {
        self.0.get(corner)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockType {
    pub id: String,
    pub width: u32,
    pub height: u32,
    pub chords: BTreeMap<(ChordVariant, RowClass, CornerId), TimeFs>,
    pub tap_line: TapLine,
    pub fragment_cap_ff: f64,
    pub lct_cap_ff: f64,
    pub slew_at_lct_entry: BTreeMap<CornerId, TimeFs>,
    pub max_slew: TimeFs,
}

impl BlockType {
    pub fn chord_delay(&self, variant: ChordVariant, row: RowClass, corner: &CornerId) -> Option<TimeFs> {
        self.chords.get(&(variant, row, corner.clone())).copied()
    }

    pub fn taps(&self, corner: &CornerId) -> Option<&Taps> {
        self.tap_line.at(corner)
    }

    pub fn slew(&self, corner: &CornerId) -> Option<TimeFs> {
        self.slew_at_lct_entry.get(corner).copied()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockLibrary {
    corners: Vec<CornerId>,
    types: Vec<BlockType>,
}

impl BlockLibrary {
    pub fn corners(&self) -> &[CornerId] {
        &self.corners
    }

    pub fn has_corner(&self, corner: &CornerId) -> bool {
        self.corners.contains(corner)
    }

    pub fn types(&self) -> &[BlockType] {
        &self.types
    }

    pub fn type_index(&self, id: &str) -> Option<usize> {
        self.types.iter().position(|t| t.id == id)
    }

    pub fn block_type(&self, id: &str) -> Option<&BlockType> {
        self.types.iter().find(|t| t.id == id)
    }

    pub fn to_document(&self) -> LibraryDocument {
        LibraryDocument {
            schema: Some(LIBRARY_SCHEMA.to_string()),
            corners: self.corners.iter().map(|c| c.0.clone()).collect(),
            types: self.types.iter().map(type_document).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("library document serializes")
    }
}

fn type_document(t: &BlockType) -> BlockTypeDocument {
    let mut chords: BTreeMap<ChordVariant, BTreeMap<RowClass, BTreeMap<String, f64>>> = BTreeMap::new();
    for ((variant, row, corner), delay) in &t.chords {
        chords
            .entry(*variant)
            .or_default()
            .entry(*row)
            .or_default()
            .insert(corner.0.clone(), delay.to_ns_f64());
    }
    BlockTypeDocument {
        id: t.id.clone(),
        width: t.width,
        height: t.height,
        chords,
        taps: t
            .tap_line
            .0
            .iter()
            .map(|(c, taps)| (c.0.clone(), taps.as_slice().iter().map(|d| d.to_ns_f64()).collect()))
            .collect(),
        fragment_cap_ff: t.fragment_cap_ff,
        lct_cap_ff: t.lct_cap_ff,
        slew_ps: t.slew_at_lct_entry.iter().map(|(c, s)| (c.0.clone(), s.to_ps_f64())).collect(),
        max_slew_ps: t.max_slew.to_ps_f64(),
    }
}

/// Serialized form of a [`BlockLibrary`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LibraryDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub corners: Vec<String>,
    pub types: Vec<BlockTypeDocument>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockTypeDocument {
    pub id: String,
    pub width: u32,
    pub height: u32,
    /// variant -> row class -> corner -> ns
    pub chords: BTreeMap<ChordVariant, BTreeMap<RowClass, BTreeMap<String, f64>>>,
    /// corner -> tap delays in ns
    pub taps: BTreeMap<String, Vec<f64>>,
    pub fragment_cap_ff: f64,
    pub lct_cap_ff: f64,
    pub slew_ps: BTreeMap<String, f64>,
    pub max_slew_ps: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LibraryError {
    /// The text is not JSON or does not have the document shape.
    #[error("library schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    /// The document is well formed but breaks a model rule.
    #[error("invalid library at {path}: {problem}")]
    Invalid { path: String, problem: LibraryProblem },
}

impl LibraryError {
    fn invalid(path: impl Into<String>, problem: LibraryProblem) -> Self {
        LibraryError::Invalid {
            path: path.into(),
            problem,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LibraryProblem {
    #[error("no corners declared")]
    NoCorners,
    #[error("corner `{0}` declared twice")]
    DuplicateCorner(String),
    #[error("no block types")]
    NoTypes,
    #[error("block type `{0}` defined twice")]
    DuplicateType(String),
    #[error("block dimensions must be at least 1x1")]
    ZeroSize,
    #[error("corner `{0}` is not declared")]
    UnknownCorner(String),
    #[error("missing entry for corner `{0}`")]
    MissingCorner(String),
    #[error("delay must be strictly positive, got {0}")]
    NonPositiveDelay(TimeFs),
    #[error("no chord delays characterized")]
    NoChords,
    #[error(transparent)]
    Taps(#[from] TapsError),
    #[error(transparent)]
    Unit(#[from] UnitError),
    #[error("capacitance must be finite and non-negative, got {0}")]
    BadCapacitance(f64),
}

/// Parses and validates a library document.
pub fn load_block_library(text: &str) -> Result<BlockLibrary, LibraryError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: LibraryDocument = serde_path_to_error::deserialize(de).map_err(|e| LibraryError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    BlockLibrary::from_document(doc)
}

impl BlockLibrary {
    pub fn from_document(doc: LibraryDocument) -> Result<Self, LibraryError> {
        if doc.corners.is_empty() {
            return Err(LibraryError::invalid("corners", LibraryProblem::NoCorners));
        }
        let mut seen = BTreeSet::new();
        for (i, c) in doc.corners.iter().enumerate() {
            if !seen.insert(c.as_str()) {
                return Err(LibraryError::invalid(
                    format!("corners[{i}]"),
                    LibraryProblem::DuplicateCorner(c.clone()),
                ));
            }
        }
        if doc.types.is_empty() {
            return Err(LibraryError::invalid("types", LibraryProblem::NoTypes));
        }
        let corners: Vec<CornerId> = doc.corners.iter().map(CornerId::new).collect();
        let mut types = Vec::with_capacity(doc.types.len());
        let mut ids = BTreeSet::new();
        for (ti, t) in doc.types.into_iter().enumerate() {
            let base = format!("types[{ti}]");
            if !ids.insert(t.id.clone()) {
                return Err(LibraryError::invalid(
                    format!("{base}.id"),
                    LibraryProblem::DuplicateType(t.id),
                ));
            }
            types.push(validate_type(&base, t, &corners)?);
        }
        Ok(BlockLibrary { corners, types })
    }
}

/// Checks that a corner-keyed map covers exactly the declared corners.
fn check_corner_keys<V>(path: &str, map: &BTreeMap<String, V>, corners: &[CornerId]) -> Result<(), LibraryError> {
    for key in map.keys() {
        if !corners.iter().any(|c| c.0 == *key) {
            return Err(LibraryError::invalid(
                format!("{path}.{key}"),
                LibraryProblem::UnknownCorner(key.clone()),
            ));
        }
    }
    for c in corners {
        if !map.contains_key(&c.0) {
            return Err(LibraryError::invalid(path, LibraryProblem::MissingCorner(c.0.clone())));
        }
    }
    Ok(())
}

fn positive_ns(path: &str, value: f64) -> Result<TimeFs, LibraryError> {
    let t = TimeFs::from_ns_f64(value).map_err(|e| LibraryError::invalid(path, e.into()))?;
    if !t.is_positive() {
        return Err(LibraryError::invalid(path, LibraryProblem::NonPositiveDelay(t)));
    }
    Ok(t)
}

fn positive_ps(path: &str, value: f64) -> Result<TimeFs, LibraryError> {
    let t = TimeFs::from_ps_f64(value).map_err(|e| LibraryError::invalid(path, e.into()))?;
    if !t.is_positive() {
        return Err(LibraryError::invalid(path, LibraryProblem::NonPositiveDelay(t)));
    }
    Ok(t)
}

fn capacitance(path: &str, value: f64) -> Result<f64, LibraryError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(LibraryError::invalid(path, LibraryProblem::BadCapacitance(value)))
    }
}

fn validate_type(base: &str, t: BlockTypeDocument, corners: &[CornerId]) -> Result<BlockType, LibraryError> {
    if t.width == 0 || t.height == 0 {
        return Err(LibraryError::invalid(base, LibraryProblem::ZeroSize));
    }
    if t.chords.is_empty() {
        return Err(LibraryError::invalid(format!("{base}.chords"), LibraryProblem::NoChords));
    }
    let mut chords = BTreeMap::new();
    for (variant, rows) in &t.chords {
        for (row, per_corner) in rows {
            let path = format!("{base}.chords.{variant}.{row}");
            check_corner_keys(&path, per_corner, corners)?;
            for (corner, &ns) in per_corner {
                let delay = positive_ns(&format!("{path}.{corner}"), ns)?;
                chords.insert((*variant, *row, CornerId::new(corner)), delay);
            }
        }
    }

    let taps_path = format!("{base}.taps");
    check_corner_keys(&taps_path, &t.taps, corners)?;
    let mut tap_line = TapLine::default();
    for (corner, values) in &t.taps {
        let path = format!("{taps_path}.{corner}");
        let delays = values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                TimeFs::from_ns_f64(v).map_err(|e| LibraryError::invalid(format!("{path}[{i}]"), e.into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let taps = Taps::new(delays).map_err(|e| LibraryError::invalid(path.as_str(), e.into()))?;
        tap_line.0.insert(CornerId::new(corner), taps);
    }

    let slew_path = format!("{base}.slew_ps");
    check_corner_keys(&slew_path, &t.slew_ps, corners)?;
    let mut slew_at_lct_entry = BTreeMap::new();
    for (corner, &ps) in &t.slew_ps {
        slew_at_lct_entry.insert(CornerId::new(corner), positive_ps(&format!("{slew_path}.{corner}"), ps)?);
    }

    Ok(BlockType {
        max_slew: positive_ps(&format!("{base}.max_slew_ps"), t.max_slew_ps)?,
        fragment_cap_ff: capacitance(&format!("{base}.fragment_cap_ff"), t.fragment_cap_ff)?,
        lct_cap_ff: capacitance(&format!("{base}.lct_cap_ff"), t.lct_cap_ff)?,
        id: t.id,
        width: t.width,
        height: t.height,
        chords,
        tap_line,
        slew_at_lct_entry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(taps: &str) -> String {
        format!(
            r#"{{
  "corners": ["TT"],
  "types": [{{
    "id": "blk", "width": 1, "height": 1,
    "chords": {{"H_to_H": {{"edge": {{"TT": 1.0}}}}}},
    "taps": {{"TT": {taps}}},
    "fragment_cap_ff": 1.0, "lct_cap_ff": 2.0,
    "slew_ps": {{"TT": 50}}, "max_slew_ps": 100
  }}]
}}"#
        )
    }

    #[test]
    fn minimal_library_is_valid() {
        let lib = load_block_library(&minimal("[1.0]")).unwrap();
        let t = lib.block_type("blk").unwrap();
        let tt = CornerId::new("TT");
        assert_eq!(t.taps(&tt).unwrap().len(), 1);
        assert_eq!(t.chord_delay(ChordVariant::HToH, RowClass::Edge, &tt), Some(TimeFs::from_ns(1)));
        assert_eq!(t.slew(&tt), Some(TimeFs::from_ps(50)));
    }

    #[test]
    fn non_monotone_taps_rejected_with_path() {
        let err = load_block_library(&minimal("[2.0, 1.0]")).unwrap_err();
        match err {
            LibraryError::Invalid { path, problem } => {
                assert_eq!(path, "types[0].taps.TT");
                assert!(matches!(problem, LibraryProblem::Taps(TapsError::NonMonotone { index: 2, .. })));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(load_block_library(&minimal("[1.0, 1.0]")).is_err());
        assert!(load_block_library(&minimal("[]")).is_err());
    }

    #[test]
    fn missing_corner_reported() {
        let text = minimal("[1.0]").replace(r#""corners": ["TT"]"#, r#""corners": ["TT", "WC"]"#);
        let err = load_block_library(&text).unwrap_err();
        let LibraryError::Invalid { path, problem } = err else {
            panic!("expected invalid")
        };
        assert_eq!(path, "types[0].chords.H_to_H.edge");
        assert_eq!(problem, LibraryProblem::MissingCorner("WC".into()));
    }

    #[test]
    fn schema_errors_carry_path() {
        let text = minimal("[1.0]").replace(r#""width": 1"#, r#""width": "wide""#);
        let err = load_block_library(&text).unwrap_err();
        let LibraryError::Schema { path, .. } = err else {
            panic!("expected schema error")
        };
        assert_eq!(path, "types[0].width");
        assert!(matches!(load_block_library("{"), Err(LibraryError::Schema { .. })));
        let bad_variant = minimal("[1.0]").replace("H_to_H", "H_to_X");
        assert!(matches!(load_block_library(&bad_variant), Err(LibraryError::Schema { .. })));
    }

    #[test]
    fn sub_femtosecond_delay_rejected() {
        let text = minimal("[1.0000001]");
        let err = load_block_library(&text).unwrap_err();
        assert!(matches!(
            err,
            LibraryError::Invalid {
                problem: LibraryProblem::Unit(UnitError::TooPrecise(_)),
                ..
            }
        ));
    }

    #[test]
    fn zero_chord_rejected() {
        let text = minimal("[1.0]").replace(r#"{"TT": 1.0}"#, r#"{"TT": 0}"#);
        assert!(matches!(
            load_block_library(&text),
            Err(LibraryError::Invalid {
                problem: LibraryProblem::NonPositiveDelay(_),
                ..
            })
        ));
    }

    #[test]
    fn taps_accessors() {
        let taps = Taps::new(vec![TimeFs(10), TimeFs(25), TimeFs(30)]).unwrap();
        assert_eq!(taps.delay(1), Some(TimeFs(10)));
        assert_eq!(taps.delay(0), None);
        assert_eq!(taps.delay(4), None);
        assert_eq!(taps.range(), TimeFs(20));
        assert_eq!(taps.max_pitch(), TimeFs(15));
    }
}
