//! Lattice cells and the finite regions that get tiled.
//!
//! A cell is the unit square `[col, col+1] x [row, row+1]`, addressed by its
//! lower-left corner. Regions keep their cells in scan order: top row first,
//! left to right within a row.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A unit square identified by its lower-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub col: i64,
    pub row: i64,
}

impl Cell {
    pub const fn new(col: i64, row: i64) -> Self {
        Cell { col, row }
    }
}

impl Ord for Cell {
    /// Scan order: higher rows first, then increasing column.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .row
            .cmp(&self.row)
            .then_with(|| self.col.cmp(&other.col))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.col, self.row)
    }
}

/// One of the eight symmetries of the square lattice.
///
/// The map first optionally reflects `x -> -x`, then rotates a quarter turn
/// `(x, y) -> (y, -x)` the given number of times. On cells the point maps
/// become `(i, j) -> (-1-i, j)` and `(i, j) -> (j, -1-i)` because a cell is
/// named by its lower-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dihedral {
    pub quarter_turns: u8,
    pub reflect: bool,
}

impl Dihedral {
    pub const IDENTITY: Dihedral = Dihedral {
        quarter_turns: 0,
        reflect: false,
    };

    /// Reflection across the main diagonal, `(i, j) -> (j, i)`.
    pub const TRANSPOSE: Dihedral = Dihedral {
        quarter_turns: 1,
        reflect: true,
    };

    pub fn all() -> impl Iterator<Item = Dihedral> {
        [false, true].into_iter().flat_map(|reflect| {
            (0..4).map(move |quarter_turns| Dihedral {
                quarter_turns,
                reflect,
            })
        })
    }

    pub fn apply(self, cell: Cell) -> Cell {
        let mut c = if self.reflect {
            Cell::new(-1 - cell.col, cell.row)
        } else {
            cell
        };
        for _ in 0..self.quarter_turns % 4 {
            c = Cell::new(c.row, -1 - c.col);
        }
        c
    }
}

/// A maximal run of consecutive cells in one row, `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: i64,
    pub end: i64,
}

impl Span {
    pub fn len(&self) -> i64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

/// A finite set of cells with a descriptive name.
#[derive(Debug, Clone)]
pub struct Region {
    cells: BTreeSet<Cell>,
    descriptor: String,
    rows: BTreeMap<i64, Vec<Span>>,
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for Region {}

impl Region {
    pub fn from_cells(
        cells: impl IntoIterator<Item = Cell>,
        descriptor: impl Into<String>,
    ) -> Self {
        let cells: BTreeSet<Cell> = cells.into_iter().collect();
        let mut rows: BTreeMap<i64, Vec<Span>> = BTreeMap::new();
        // BTreeSet iterates in scan order, so columns arrive sorted within a row.
        for cell in &cells {
            let spans = rows.entry(cell.row).or_default();
            match spans.last_mut() {
                Some(last) if last.end == cell.col => last.end += 1,
                _ => spans.push(Span {
                    start: cell.col,
                    end: cell.col + 1,
                }),
            }
        }
        Region {
            cells,
            descriptor: descriptor.into(),
            rows,
        }
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.contains(&cell)
    }

    /// Cells in scan order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().copied()
    }

    /// Row index to the maximal spans in that row, lowest row first.
    pub fn rows(&self) -> &BTreeMap<i64, Vec<Span>> {
        &self.rows
    }

    /// Widest extent of any row, measured from its first to last cell.
    pub fn max_row_extent(&self) -> i64 {
        self.rows
            .values()
            .filter_map(|spans| Some(spans.last()?.end - spans.first()?.start))
            .max()
            .unwrap_or(0)
    }

    pub fn transformed(&self, symmetry: Dihedral) -> Region {
        Region::from_cells(
            self.cells.iter().map(|&c| symmetry.apply(c)),
            self.descriptor.clone(),
        )
    }

    pub fn with_descriptor(mut self, descriptor: impl Into<String>) -> Self {
        self.descriptor = descriptor.into();
        self
    }
}

/// The Aztec diamond of order `n`: every unit square inside `|x| + |y| <= n + 1`.
pub fn aztec_diamond(n: u32) -> Region {
    let n = i64::from(n);
    let mut cells = Vec::new();
    for row in -n..n {
        for col in -n..n {
            let dx = col.abs().max((col + 1).abs());
            let dy = row.abs().max((row + 1).abs());
            if dx + dy <= n + 1 {
                cells.push(Cell::new(col, row));
            }
        }
    }
    Region::from_cells(cells, format!("aztec:{n}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Top,
    Bottom,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Top => "top",
            Side::Bottom => "bottom",
        })
    }
}

impl FromStr for Side {
    type Err = RegionSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "top" => Ok(Side::Top),
            "bottom" => Ok(Side::Bottom),
            _ => Err(RegionSpecError::BadSide(s.to_string())),
        }
    }
}

/// The half of the Aztec diamond above (`row >= 0`) or below the x-axis.
pub fn aztec_half(n: u32, side: Side) -> Region {
    let full = aztec_diamond(n);
    let cells = full.cells().filter(|c| match side {
        Side::Top => c.row >= 0,
        Side::Bottom => c.row < 0,
    });
    Region::from_cells(cells, format!("aztechalf:{n}:{side}"))
}

/// The `w` by `h` rectangle with lower-left cell at the origin. A zero
/// dimension gives the empty region.
pub fn rectangle(w: u32, h: u32) -> Region {
    let cells =
        (0..i64::from(h)).flat_map(|row| (0..i64::from(w)).map(move |col| Cell::new(col, row)));
    Region::from_cells(cells, format!("rect:{w}x{h}"))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegionSpecError {
    #[error(
        "unrecognized region spec `{0}` (expected aztec:N, aztechalf:N:top|bottom or rect:WxH)"
    )]
    Unrecognized(String),
    #[error("bad number `{0}` in region spec")]
    BadNumber(String),
    #[error("bad side `{0}` (expected top or bottom)")]
    BadSide(String),
    #[error("region dimension must be positive in `{0}`")]
    ZeroDimension(String),
    #[error("unrecognized family `{0}` (expected aztec, aztechalf:top|bottom, rect2nx2n, rect2nx2n+2 or rect2nx4n)")]
    UnknownFamily(String),
}

fn parse_u32(s: &str) -> Result<u32, RegionSpecError> {
    s.parse()
        .map_err(|_| RegionSpecError::BadNumber(s.to_string()))
}

/// A parsed region spec, as accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionSpec {
    Aztec(u32),
    AztecHalf(u32, Side),
    Rect(u32, u32),
}

impl RegionSpec {
    pub fn build(self) -> Region {
        match self {
            RegionSpec::Aztec(n) => aztec_diamond(n),
            RegionSpec::AztecHalf(n, side) => aztec_half(n, side),
            RegionSpec::Rect(w, h) => rectangle(w, h),
        }
    }
}

impl FromStr for RegionSpec {
    type Err = RegionSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["aztec", n] => Ok(RegionSpec::Aztec(parse_u32(n)?)),
            ["aztechalf", n, side] => {
                let n = parse_u32(n)?;
                if n == 0 {
                    return Err(RegionSpecError::ZeroDimension(s.to_string()));
                }
                Ok(RegionSpec::AztecHalf(n, side.parse()?))
            }
            ["rect", dims] => {
                let (w, h) = dims
                    .split_once('x')
                    .ok_or_else(|| RegionSpecError::Unrecognized(s.to_string()))?;
                let (w, h) = (parse_u32(w)?, parse_u32(h)?);
                if w == 0 || h == 0 {
                    return Err(RegionSpecError::ZeroDimension(s.to_string()));
                }
                Ok(RegionSpec::Rect(w, h))
            }
            _ => Err(RegionSpecError::Unrecognized(s.to_string())),
        }
    }
}

/// A one-parameter family of regions, indexed by `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Aztec,
    AztecHalf(Side),
    /// `2n x 2n` square.
    Square2n,
    /// `2n x (2n+2)` rectangle.
    Rect2nBy2nPlus2,
    /// `2n x 4n` rectangle.
    Rect2nBy4n,
}

impl Family {
    pub fn region(self, n: u32) -> Region {
        match self {
            Family::Aztec => aztec_diamond(n),
            Family::AztecHalf(side) => aztec_half(n, side),
            Family::Square2n => rectangle(2 * n, 2 * n),
            Family::Rect2nBy2nPlus2 => rectangle(2 * n, 2 * n + 2),
            Family::Rect2nBy4n => rectangle(2 * n, 4 * n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Aztec => f.write_str("aztec"),
            Family::AztecHalf(side) => write!(f, "aztechalf:{side}"),
            Family::Square2n => f.write_str("rect2nx2n"),
            Family::Rect2nBy2nPlus2 => f.write_str("rect2nx2n+2"),
            Family::Rect2nBy4n => f.write_str("rect2nx4n"),
        }
    }
}

impl FromStr for Family {
    type Err = RegionSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "aztec" => Ok(Family::Aztec),
            "aztechalf:top" => Ok(Family::AztecHalf(Side::Top)),
            "aztechalf:bottom" => Ok(Family::AztecHalf(Side::Bottom)),
            "rect2nx2n" => Ok(Family::Square2n),
            "rect2nx2n+2" => Ok(Family::Rect2nBy2nPlus2),
            "rect2nx4n" => Ok(Family::Rect2nBy4n),
            _ => Err(RegionSpecError::UnknownFamily(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_lengths(region: &Region) -> Vec<i64> {
        // top row first
        region
            .rows()
            .values()
            .rev()
            .map(|spans| spans.iter().map(Span::len).sum())
            .collect()
    }

    #[test]
    fn aztec_small_orders() {
        assert!(aztec_diamond(0).is_empty());
        let one: Vec<Cell> = aztec_diamond(1).cells().collect();
        assert_eq!(
            one,
            vec![
                Cell::new(-1, 0),
                Cell::new(0, 0),
                Cell::new(-1, -1),
                Cell::new(0, -1)
            ]
        );
        assert_eq!(aztec_diamond(4).len(), 40);
    }

    #[test]
    fn aztec_sizes_and_rows() {
        for n in 0..=20u32 {
            let region = aztec_diamond(n);
            let n = i64::from(n);
            assert_eq!(region.len() as i64, 2 * n * (n + 1));
            let mut expected: Vec<i64> = (1..=n).map(|k| 2 * k).collect();
            expected.extend((1..=n).rev().map(|k| 2 * k));
            assert_eq!(row_lengths(&region), expected);
            assert!(region.rows().values().all(|spans| spans.len() == 1));
        }
    }

    #[test]
    fn aztec_dihedral_symmetry() {
        for n in 0..=8 {
            let region = aztec_diamond(n);
            for symmetry in Dihedral::all() {
                assert_eq!(region.transformed(symmetry), region, "n={n} {symmetry:?}");
            }
        }
    }

    #[test]
    fn dihedral_group_is_closed() {
        let probe = [Cell::new(2, 5), Cell::new(-3, 1), Cell::new(0, 0)];
        let images: BTreeSet<Vec<Cell>> = Dihedral::all()
            .map(|d| probe.iter().map(|&c| d.apply(c)).collect())
            .collect();
        assert_eq!(images.len(), 8);
        assert_eq!(Dihedral::TRANSPOSE.apply(Cell::new(2, 5)), Cell::new(5, 2));
    }

    #[test]
    fn halves_partition_diamond() {
        for n in 1..=10 {
            let top = aztec_half(n, Side::Top);
            let bottom = aztec_half(n, Side::Bottom);
            let n64 = i64::from(n);
            assert_eq!(top.len() as i64, n64 * (n64 + 1));
            assert_eq!(bottom.len() as i64, n64 * (n64 + 1));
            assert!(top.cells().all(|c| !bottom.contains(c)));
            let union = Region::from_cells(top.cells().chain(bottom.cells()), "");
            assert_eq!(union, aztec_diamond(n));
        }
        let top1: Vec<Cell> = aztec_half(1, Side::Top).cells().collect();
        assert_eq!(top1, vec![Cell::new(-1, 0), Cell::new(0, 0)]);
        assert_eq!(row_lengths(&aztec_half(2, Side::Top)), vec![2, 4]);
        assert_eq!(aztec_half(3, Side::Top).len(), 12);
    }

    #[test]
    fn rectangles() {
        assert_eq!(rectangle(2, 2).len(), 4);
        assert_eq!(rectangle(4, 4).len(), 16);
        assert_eq!(rectangle(2, 1).len(), 2);
        assert!(rectangle(0, 3).is_empty());
        assert_eq!(rectangle(3, 2).descriptor(), "rect:3x2");
    }

    #[test]
    fn rows_track_gaps() {
        let region = Region::from_cells(
            [
                Cell::new(0, 0),
                Cell::new(1, 0),
                Cell::new(3, 0),
                Cell::new(7, 1),
            ],
            "gappy",
        );
        assert_eq!(
            region.rows()[&0],
            vec![Span { start: 0, end: 2 }, Span { start: 3, end: 4 }]
        );
        assert_eq!(region.max_row_extent(), 4);
    }

    #[test]
    fn region_spec_parsing() {
        assert_eq!("aztec:3".parse(), Ok(RegionSpec::Aztec(3)));
        assert_eq!(
            "aztechalf:2:bottom".parse(),
            Ok(RegionSpec::AztecHalf(2, Side::Bottom))
        );
        assert_eq!("rect:4x6".parse(), Ok(RegionSpec::Rect(4, 6)));
        assert!("rect:0x6".parse::<RegionSpec>().is_err());
        assert!("aztec:-1".parse::<RegionSpec>().is_err());
        assert!("hexagon:3".parse::<RegionSpec>().is_err());
        for spec in ["aztec:3", "aztechalf:2:top", "rect:4x6"] {
            let region = spec.parse::<RegionSpec>().unwrap().build();
            assert_eq!(region.descriptor(), spec);
        }
    }

    #[test]
    fn family_round_trip() {
        for name in [
            "aztec",
            "aztechalf:top",
            "rect2nx2n",
            "rect2nx2n+2",
            "rect2nx4n",
        ] {
            assert_eq!(name.parse::<Family>().unwrap().to_string(), name);
        }
        assert_eq!(Family::Rect2nBy2nPlus2.region(2).descriptor(), "rect:4x6");
        assert_eq!(Family::Rect2nBy4n.region(0).len(), 0);
    }
}
