//! Dominos and tetrominos, their orientations, and tile-set specs.
//!
//! A tile-set spec is either a six-bit code (bits, left to right, enable
//! domino, straight, skew, L, square and T) or a comma-separated list of
//! shape names, each optionally restricted with `:h` / `:v` and weighted with
//! `*w`, e.g. `domino,square*-1` or `skew:h,square`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::grid::{Cell, Dihedral};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TileSpecError {
    #[error("unknown shape `{0}`")]
    UnknownShape(String),
    #[error("empty tile spec")]
    Empty,
    #[error("six-bit code must not be all zero")]
    ZeroCode,
    #[error("malformed tile spec entry `{0}`")]
    Malformed(String),
    #[error("bad weight `{0}`")]
    BadWeight(String),
    #[error("tile weight must be nonzero in `{0}`")]
    ZeroWeight(String),
    #[error("{0} has no horizontal/vertical distinction")]
    NoDirection(Shape),
    #[error("tile `{0}` listed more than once")]
    Duplicate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Domino,
    Straight,
    Skew,
    L,
    Square,
    T,
}

impl Shape {
    /// Bit order of the six-bit code.
    pub const ALL: [Shape; 6] = [
        Shape::Domino,
        Shape::Straight,
        Shape::Skew,
        Shape::L,
        Shape::Square,
        Shape::T,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Domino => "domino",
            Shape::Straight => "straight",
            Shape::Skew => "skew",
            Shape::L => "L",
            Shape::Square => "square",
            Shape::T => "T",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = TileSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "domino" => Ok(Shape::Domino),
            "straight" => Ok(Shape::Straight),
            "skew" => Ok(Shape::Skew),
            "l" => Ok(Shape::L),
            "square" => Ok(Shape::Square),
            "t" => Ok(Shape::T),
            _ => Err(TileSpecError::UnknownShape(s.to_string())),
        }
    }
}

/// A shape in one fixed orientation, stored as offsets normalized so the
/// minimum column and minimum row are both zero. Equality and hashing look at
/// the offsets only.
#[derive(Debug, Clone)]
pub struct OrientedTile {
    offsets: Vec<Cell>,
    shape: Shape,
    label: String,
}

impl PartialEq for OrientedTile {
    fn eq(&self, other: &Self) -> bool {
        self.offsets == other.offsets
    }
}

impl Eq for OrientedTile {}

impl std::hash::Hash for OrientedTile {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.offsets.hash(state);
    }
}

fn normalize(cells: impl IntoIterator<Item = Cell>) -> Vec<Cell> {
    let cells: Vec<Cell> = cells.into_iter().collect();
    let min_col = cells.iter().map(|c| c.col).min().unwrap_or(0);
    let min_row = cells.iter().map(|c| c.row).min().unwrap_or(0);
    let mut out: Vec<Cell> = cells
        .into_iter()
        .map(|c| Cell::new(c.col - min_col, c.row - min_row))
        .collect();
    out.sort();
    out
}

impl OrientedTile {
    fn new(shape: Shape, label: impl Into<String>, cells: impl IntoIterator<Item = Cell>) -> Self {
        OrientedTile {
            offsets: normalize(cells),
            shape,
            label: label.into(),
        }
    }

    /// Offsets in scan order; the first one is the tile's anchor.
    pub fn offsets(&self) -> &[Cell] {
        &self.offsets
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn size(&self) -> usize {
        self.offsets.len()
    }

    pub fn width(&self) -> i64 {
        self.offsets
            .iter()
            .map(|c| c.col)
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn height(&self) -> i64 {
        self.offsets
            .iter()
            .map(|c| c.row)
            .max()
            .map_or(0, |m| m + 1)
    }

    /// Image under a lattice symmetry, renormalized. The label is kept.
    pub fn transformed(&self, symmetry: Dihedral) -> OrientedTile {
        OrientedTile::new(
            self.shape,
            self.label.clone(),
            self.offsets.iter().map(|&c| symmetry.apply(c)),
        )
    }

    /// `shape:label`, unique across all 21 oriented tiles.
    pub fn name(&self) -> String {
        format!("{}:{}", self.shape, self.label)
    }
}

fn cells(coords: &[(i64, i64)]) -> Vec<Cell> {
    coords.iter().map(|&(c, r)| Cell::new(c, r)).collect()
}

pub fn base_shape(shape: Shape) -> OrientedTile {
    let coords: &[(i64, i64)] = match shape {
        Shape::Domino => &[(0, 0), (1, 0)],
        Shape::Straight => &[(0, 0), (1, 0), (2, 0), (3, 0)],
        Shape::Skew => &[(0, 0), (1, 0), (1, 1), (2, 1)],
        Shape::L => &[(0, 0), (0, 1), (0, 2), (1, 0)],
        Shape::Square => &[(0, 0), (1, 0), (0, 1), (1, 1)],
        Shape::T => &[(0, 0), (1, 0), (2, 0), (1, 1)],
    };
    let label = match shape {
        Shape::Domino | Shape::Straight => "h",
        Shape::Skew => "h1",
        Shape::L | Shape::Square | Shape::T => "r0",
    };
    OrientedTile::new(shape, label, cells(coords))
}

/// All translationally distinct orientations of `shape`.
///
/// Labels: `h`/`v` for dominos and straight tetrominos; `h1`, `h2`, `v1`,
/// `v2` for skew tetrominos (`h` = three wide, `v1` is the quarter turn of
/// `h1`); `r{k}` or `r{k}f` for the rest, where `k` counts quarter turns and
/// `f` marks a reflection applied first.
pub fn orientations(shape: Shape) -> Vec<OrientedTile> {
    let base = base_shape(shape);
    let quarter = base.transformed(Dihedral {
        quarter_turns: 1,
        reflect: false,
    });
    let mut seen: Vec<OrientedTile> = Vec::new();
    for symmetry in Dihedral::all() {
        let mut tile = base.transformed(symmetry);
        if seen.contains(&tile) {
            continue;
        }
        let horizontal = tile.width() > tile.height();
        tile.label = match shape {
            Shape::Domino | Shape::Straight => if horizontal { "h" } else { "v" }.to_string(),
            Shape::Skew => {
                let primary = tile == base || tile == quarter;
                format!(
                    "{}{}",
                    if horizontal { 'h' } else { 'v' },
                    if primary { 1 } else { 2 }
                )
            }
            _ => format!(
                "r{}{}",
                symmetry.quarter_turns,
                if symmetry.reflect { "f" } else { "" }
            ),
        };
        seen.push(tile);
    }
    seen
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Horizontal,
    Vertical,
}

/// Orientations of `shape` that are wider than tall (or taller than wide).
pub fn filter_direction(
    shape: Shape,
    tiles: &[OrientedTile],
    direction: Direction,
) -> Result<Vec<OrientedTile>, TileSpecError> {
    if !matches!(shape, Shape::Domino | Shape::Straight | Shape::Skew) {
        return Err(TileSpecError::NoDirection(shape));
    }
    Ok(tiles
        .iter()
        .filter(|t| t.shape == shape)
        .filter(|t| match direction {
            Direction::Horizontal => t.width() > t.height(),
            Direction::Vertical => t.height() > t.width(),
        })
        .cloned()
        .collect())
}

pub fn filter_horizontal(
    shape: Shape,
    tiles: &[OrientedTile],
) -> Result<Vec<OrientedTile>, TileSpecError> {
    filter_direction(shape, tiles, Direction::Horizontal)
}

/// A list of distinct oriented tiles, each carrying an integer weight.
#[derive(Debug, Clone)]
pub struct TileSet {
    entries: Vec<(OrientedTile, i64)>,
    descriptor: String,
}

impl PartialEq for TileSet {
    fn eq(&self, other: &Self) -> bool {
        self.sorted_entries() == other.sorted_entries()
    }
}

impl Eq for TileSet {}

impl TileSet {
    pub fn new(
        entries: impl IntoIterator<Item = (OrientedTile, i64)>,
        descriptor: impl Into<String>,
    ) -> Result<Self, TileSpecError> {
        let mut out: Vec<(OrientedTile, i64)> = Vec::new();
        for (tile, weight) in entries {
            if weight == 0 {
                return Err(TileSpecError::ZeroWeight(tile.name()));
            }
            if out.iter().any(|(t, _)| *t == tile) {
                return Err(TileSpecError::Duplicate(tile.name()));
            }
            out.push((tile, weight));
        }
        if out.is_empty() {
            return Err(TileSpecError::Empty);
        }
        Ok(TileSet {
            entries: out,
            descriptor: descriptor.into(),
        })
    }

    /// Tile set for a six-bit mask; bit 5 (the most significant) is the domino.
    pub fn from_code(code: u8) -> Result<Self, TileSpecError> {
        let text = format!("{:06b}", code & 0x3f);
        text.parse()
    }

    pub fn entries(&self) -> &[(OrientedTile, i64)] {
        &self.entries
    }

    pub fn tiles(&self) -> impl Iterator<Item = &OrientedTile> {
        self.entries.iter().map(|(t, _)| t)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    fn sorted_entries(&self) -> Vec<(Vec<Cell>, i64)> {
        let mut v: Vec<(Vec<Cell>, i64)> = self
            .entries
            .iter()
            .map(|(t, w)| (t.offsets.clone(), *w))
            .collect();
        v.sort();
        v
    }

    /// Order-independent text form, e.g. `domino:h,domino:v,square:r0*-1`.
    pub fn canonical(&self) -> String {
        let mut names: Vec<String> = self
            .entries
            .iter()
            .map(|(t, w)| {
                if *w == 1 {
                    t.name()
                } else {
                    format!("{}*{}", t.name(), w)
                }
            })
            .collect();
        names.sort();
        names.join(",")
    }

    /// Same tiles with every weight set to one.
    pub fn unweighted(&self) -> TileSet {
        TileSet {
            entries: self.entries.iter().map(|(t, _)| (t.clone(), 1)).collect(),
            descriptor: self.descriptor.clone(),
        }
    }

    pub fn transformed(&self, symmetry: Dihedral) -> TileSet {
        TileSet {
            entries: self
                .entries
                .iter()
                .map(|(t, w)| (t.transformed(symmetry), *w))
                .collect(),
            descriptor: self.descriptor.clone(),
        }
    }

    /// True when the symmetry maps the set (with its weights) onto itself.
    pub fn is_closed_under(&self, symmetry: Dihedral) -> bool {
        *self == self.transformed(symmetry)
    }

    pub fn max_height(&self) -> i64 {
        self.tiles().map(OrientedTile::height).max().unwrap_or(0)
    }

    /// Greatest common divisor of the tile sizes.
    pub fn size_gcd(&self) -> usize {
        self.tiles()
            .map(OrientedTile::size)
            .fold(0, num_integer::gcd)
    }

    /// The same set with one more tile.
    pub fn with_tile(&self, tile: OrientedTile, weight: i64) -> Result<TileSet, TileSpecError> {
        TileSet::new(
            self.entries.iter().cloned().chain([(tile, weight)]),
            self.descriptor.clone(),
        )
    }
}

impl fmt::Display for TileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor)
    }
}

fn parse_entry(entry: &str) -> Result<Vec<(OrientedTile, i64)>, TileSpecError> {
    let (body, weight) = match entry.split_once('*') {
        Some((body, w)) => {
            let weight: i64 = w
                .trim()
                .parse()
                .map_err(|_| TileSpecError::BadWeight(w.to_string()))?;
            if weight == 0 {
                return Err(TileSpecError::ZeroWeight(entry.to_string()));
            }
            (body.trim(), weight)
        }
        None => (entry, 1),
    };
    let (name, filter) = match body.split_once(':') {
        Some((name, f)) => (name.trim(), Some(f.trim())),
        None => (body, None),
    };
    if name.is_empty() {
        return Err(TileSpecError::Malformed(entry.to_string()));
    }
    let shape: Shape = name.parse()?;
    let all = orientations(shape);
    let chosen = match filter {
        None => all,
        Some("h") => filter_direction(shape, &all, Direction::Horizontal)?,
        Some("v") => filter_direction(shape, &all, Direction::Vertical)?,
        Some(label) => {
            let one: Vec<OrientedTile> = all.into_iter().filter(|t| t.label == label).collect();
            if one.is_empty() {
                return Err(TileSpecError::Malformed(entry.to_string()));
            }
            one
        }
    };
    Ok(chosen.into_iter().map(|t| (t, weight)).collect())
}

impl FromStr for TileSet {
    type Err = TileSpecError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Err(TileSpecError::Empty);
        }
        if spec.len() == 6 && spec.chars().all(|c| c == '0' || c == '1') {
            if !spec.contains('1') {
                return Err(TileSpecError::ZeroCode);
            }
            let entries = spec
                .chars()
                .zip(Shape::ALL)
                .filter(|(bit, _)| *bit == '1')
                .flat_map(|(_, shape)| orientations(shape))
                .map(|t| (t, 1));
            return TileSet::new(entries, spec);
        }
        if spec.chars().all(|c| c.is_ascii_digit()) {
            return Err(TileSpecError::Malformed(spec.to_string()));
        }
        let mut entries = Vec::new();
        for entry in spec.split(',') {
            let entry = entry.trim();
            if entry.is_empty() {
                return Err(TileSpecError::Malformed(spec.to_string()));
            }
            entries.extend(parse_entry(entry)?);
        }
        TileSet::new(entries, spec)
    }
}
