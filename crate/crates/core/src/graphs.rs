//! Brick graphs: tilings by horizontal tetrominos as perfect matchings.
//!
//! A region whose rows all split into even spans has exactly one tiling by
//! horizontal dominos ("bricks"). Any tiling by horizontal skew, horizontal
//! straight and square tetrominos cuts into two of those bricks per tile, so
//! such tilings are the perfect matchings of a graph on the bricks.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::enumerate::Count;
use crate::grid::Region;

/// Horizontal domino covering `(col, row)` and `(col + 1, row)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Brick {
    pub row: i64,
    pub col: i64,
}

impl Brick {
    pub fn dot_name(&self) -> String {
        format!("r{}c{}", self.row, self.col)
    }
}

/// The tetromino two bricks form together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Square,
    Skew,
    Straight,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 3] = [EdgeKind::Square, EdgeKind::Skew, EdgeKind::Straight];

    fn between(a: Brick, b: Brick) -> Option<EdgeKind> {
        let (dr, dc) = ((a.row - b.row).abs(), (a.col - b.col).abs());
        match (dr, dc) {
            (1, 0) => Some(EdgeKind::Square),
            (1, 1) => Some(EdgeKind::Skew),
            (0, 2) => Some(EdgeKind::Straight),
            _ => None,
        }
    }
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Square => "square",
            EdgeKind::Skew => "skew",
            EdgeKind::Straight => "straight",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("row {row} has a span of odd length starting at column {start}")]
    OddSpan { row: i64, start: i64 },
    #[error("no edge kinds selected")]
    NoKinds,
}

/// The unique tiling of `region` by horizontal dominos, in scan order.
pub fn horizontal_brick_tiling(region: &Region) -> Result<Vec<Brick>, GraphError> {
    let mut bricks = Vec::new();
    for (&row, spans) in region.rows().iter().rev() {
        for span in spans {
            if span.len() % 2 != 0 {
                return Err(GraphError::OddSpan {
                    row,
                    start: span.start,
                });
            }
            bricks.extend(
                (span.start..span.end)
                    .step_by(2)
                    .map(|col| Brick { row, col }),
            );
        }
    }
    Ok(bricks)
}

/// Graph on bricks with edges labelled by the tetromino they form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchGraph {
    vertices: Vec<Brick>,
    edges: Vec<(usize, usize, EdgeKind)>,
}

impl MatchGraph {
    pub fn vertices(&self) -> &[Brick] {
        &self.vertices
    }

    /// Edges as `(u, v, kind)` with `u < v` in scan order.
    pub fn edges(&self) -> &[(usize, usize, EdgeKind)] {
        &self.edges
    }
}

/// Brick graph of `region` keeping only edges whose kind is in `kinds`.
pub fn derived_graph(region: &Region, kinds: &[EdgeKind]) -> Result<MatchGraph, GraphError> {
    if kinds.is_empty() {
        return Err(GraphError::NoKinds);
    }
    let vertices = horizontal_brick_tiling(region)?;
    let mut edges = Vec::new();
    for (i, &a) in vertices.iter().enumerate() {
        for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
            if b.row < a.row - 1 {
                break;
            }
            if let Some(kind) = EdgeKind::between(a, b) {
                if kinds.contains(&kind) {
                    edges.push((i, j, kind));
                }
            }
        }
    }
    Ok(MatchGraph { vertices, edges })
}

/// Number of perfect matchings, by a row-layered transfer computation.
///
/// Edges of a brick graph only join bricks in the same or adjacent rows.
/// Rows are processed top to bottom; the state between two rows is the set
/// of bricks in the lower row already matched upward.
pub fn count_perfect_matchings(graph: &MatchGraph) -> Count {
    if !graph.vertices.len().is_multiple_of(2) {
        return Count::zero();
    }
    if graph.vertices.is_empty() {
        return Count::one();
    }

    let mut layers: BTreeMap<std::cmp::Reverse<i64>, Vec<usize>> = BTreeMap::new();
    for (i, b) in graph.vertices.iter().enumerate() {
        layers.entry(std::cmp::Reverse(b.row)).or_default().push(i);
    }
    let layers: Vec<(i64, Vec<usize>)> = layers.into_iter().map(|(r, v)| (r.0, v)).collect();
    assert!(
        layers.iter().all(|(_, v)| v.len() <= 128),
        "rows wider than 128 bricks are not supported"
    );
    let mut position = vec![(0usize, 0usize); graph.vertices.len()];
    for (l, (_, members)) in layers.iter().enumerate() {
        for (k, &v) in members.iter().enumerate() {
            position[v] = (l, k);
        }
    }

    // Per layer: same-row neighbours (later in the row) and next-row neighbours.
    let mut across: Vec<Vec<Vec<usize>>> = layers
        .iter()
        .map(|(_, m)| vec![Vec::new(); m.len()])
        .collect();
    let mut down: Vec<Vec<Vec<usize>>> = across.clone();
    for &(u, v, _) in &graph.edges {
        let (lu, ku) = position[u];
        let (lv, kv) = position[v];
        if lu == lv {
            let (lo, hi) = (ku.min(kv), ku.max(kv));
            across[lu][lo].push(hi);
        } else if lv == lu + 1 && layers[lu].0 == layers[lv].0 + 1 {
            down[lu][ku].push(kv);
        } else if lu == lv + 1 && layers[lv].0 == layers[lu].0 + 1 {
            down[lv][kv].push(ku);
        } else {
            panic!("edge joins non-adjacent rows");
        }
    }

    let mut states: FxHashMap<u128, BigInt> = FxHashMap::default();
    states.insert(0, BigInt::one());
    for l in 0..layers.len() {
        let width = layers[l].1.len();
        let mut next: FxHashMap<u128, BigInt> = FxHashMap::default();
        for (matched, count) in &states {
            fill_row(0, width, *matched, 0, &across[l], &down[l], &mut |below| {
                *next.entry(below).or_insert_with(BigInt::zero) += count;
            });
        }
        states = next;
    }
    states.remove(&0).unwrap_or_else(Count::zero)
}

/// Enumerates the ways to finish matching one row, reporting the set of
/// next-row bricks each way uses.
fn fill_row(
    k: usize,
    width: usize,
    matched: u128,
    below: u128,
    across: &[Vec<usize>],
    down: &[Vec<usize>],
    emit: &mut dyn FnMut(u128),
) {
    if k == width {
        emit(below);
        return;
    }
    if matched & (1 << k) != 0 {
        fill_row(k + 1, width, matched, below, across, down, emit);
        return;
    }
    for &j in &across[k] {
        if matched & (1 << j) == 0 {
            fill_row(k + 1, width, matched | (1 << j), below, across, down, emit);
        }
    }
    for &j in &down[k] {
        if below & (1 << j) == 0 {
            fill_row(k + 1, width, matched, below | (1 << j), across, down, emit);
        }
    }
}

/// Deterministic Graphviz text: one node line per brick in scan order, then
/// one line per edge.
pub fn emit_dot(graph: &MatchGraph) -> String {
    let mut out = String::from("graph bricks {\n");
    for v in &graph.vertices {
        let _ = writeln!(out, "  \"{}\";", v.dot_name());
    }
    for &(u, v, kind) in &graph.edges {
        let _ = writeln!(
            out,
            "  \"{}\" -- \"{}\" [label=\"{}\"];",
            graph.vertices[u].dot_name(),
            graph.vertices[v].dot_name(),
            kind
        );
    }
    out.push_str("}\n");
    out
}

/// The three brick-graph families studied on Aztec diamonds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFamily {
    /// Whole diamond, square and skew edges.
    DoubledDiagonal,
    /// Top half of the diamond, skew and straight edges.
    Triangle,
    /// Whole diamond, all three edge kinds.
    Superimposed,
}

impl GraphFamily {
    pub fn graph(self, n: u32) -> MatchGraph {
        use crate::grid::{aztec_diamond, aztec_half, Side};
        let built = match self {
            GraphFamily::DoubledDiagonal => {
                derived_graph(&aztec_diamond(n), &[EdgeKind::Square, EdgeKind::Skew])
            }
            GraphFamily::Triangle => derived_graph(
                &aztec_half(n, Side::Top),
                &[EdgeKind::Skew, EdgeKind::Straight],
            ),
            GraphFamily::Superimposed => derived_graph(&aztec_diamond(n), &EdgeKind::ALL),
        };
        built.expect("Aztec rows have even length")
    }

    /// The tile spec whose Aztec tilings this family's matchings count.
    /// For the triangle family the count is the square of the matchings.
    pub fn tile_spec(self) -> &'static str {
        match self {
            GraphFamily::DoubledDiagonal => "skew:h,square",
            GraphFamily::Triangle => "skew:h,straight:h",
            GraphFamily::Superimposed => "skew:h,straight:h,square",
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFamily::DoubledDiagonal => "doubled-diagonal",
            GraphFamily::Triangle => "triangle",
            GraphFamily::Superimposed => "superimposed",
        })
    }
}

impl std::str::FromStr for GraphFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "doubled-diagonal" => Ok(GraphFamily::DoubledDiagonal),
            "triangle" => Ok(GraphFamily::Triangle),
            "superimposed" => Ok(GraphFamily::Superimposed),
            _ => Err(format!(
                "unknown graph kind `{s}` (expected doubled-diagonal, triangle or superimposed)"
            )),
        }
    }
}
