//! Independent oracles and input generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use aztec_tilings::graphs::MatchGraph;
use aztec_tilings::grid::{Cell, Region};
use aztec_tilings::tiles::{orientations, OrientedTile, Shape, TileSet};
use num_bigint::BigInt;
use proptest::prelude::*;

pub type Pt = (i64, i64);

pub fn base_cells(shape: Shape) -> Vec<Pt> {
    match shape {
        Shape::Domino => vec![(0, 0), (1, 0)],
        Shape::Straight => vec![(0, 0), (1, 0), (2, 0), (3, 0)],
        Shape::Skew => vec![(0, 0), (1, 0), (1, 1), (2, 1)],
        Shape::L => vec![(0, 0), (0, 1), (0, 2), (1, 0)],
        Shape::Square => vec![(0, 0), (1, 0), (0, 1), (1, 1)],
        Shape::T => vec![(0, 0), (1, 0), (2, 0), (1, 1)],
    }
}

pub fn normalize(cells: impl IntoIterator<Item = Pt>) -> BTreeSet<Pt> {
    let cells: Vec<Pt> = cells.into_iter().collect();
    let x0 = cells.iter().map(|c| c.0).min().unwrap();
    let y0 = cells.iter().map(|c| c.1).min().unwrap();
    cells.into_iter().map(|(x, y)| (x - x0, y - y0)).collect()
}

/// All translation classes of a shape under the eight symmetries of the square.
pub fn oracle_orientations(shape: Shape) -> BTreeSet<BTreeSet<Pt>> {
    let maps: [fn(Pt) -> Pt; 8] = [
        |(x, y)| (x, y),
        |(x, y)| (-y, x),
        |(x, y)| (-x, -y),
        |(x, y)| (y, -x),
        |(x, y)| (-x, y),
        |(x, y)| (x, -y),
        |(x, y)| (y, x),
        |(x, y)| (-y, -x),
    ];
    maps.iter()
        .map(|f| normalize(base_cells(shape).into_iter().map(f)))
        .collect()
}

pub fn tile_cells(tile: &OrientedTile) -> BTreeSet<Pt> {
    normalize(tile.offsets().iter().map(|c| (c.col, c.row)))
}

/// Weighted count by covering the lexicographically least open cell.
pub fn brute(
    open: &mut BTreeSet<Pt>,
    tiles: &[(BTreeSet<Pt>, i64)],
    memo: &mut HashMap<Vec<Pt>, i128>,
) -> i128 {
    let Some(&first) = open.iter().next() else {
        return 1;
    };
    let key: Vec<Pt> = open.iter().copied().collect();
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0i128;
    for (cells, weight) in tiles {
        for &(ax, ay) in cells {
            let placed: Vec<Pt> = cells
                .iter()
                .map(|&(x, y)| (x - ax + first.0, y - ay + first.1))
                .collect();
            if placed.iter().all(|p| open.contains(p)) {
                for p in &placed {
                    open.remove(p);
                }
                total += *weight as i128 * brute(open, tiles, memo);
                for p in placed {
                    open.insert(p);
                }
            }
        }
    }
    memo.insert(key, total);
    total
}

pub fn oracle_count(region: &BTreeSet<Pt>, tiles: &[(BTreeSet<Pt>, i64)]) -> BigInt {
    let mut open = region.clone();
    BigInt::from(brute(&mut open, tiles, &mut HashMap::new()))
}

pub fn all_oriented() -> Vec<OrientedTile> {
    Shape::ALL.iter().flat_map(|&s| orientations(s)).collect()
}

pub fn to_region(cells: &BTreeSet<Pt>) -> Region {
    Region::from_cells(cells.iter().map(|&(col, row)| Cell { col, row }), "custom")
}

/// Row-span regions (mostly tileable) or scattered subsets of a 4x4 box, at
/// most 16 cells.
pub fn region_strategy() -> impl Strategy<Value = BTreeSet<Pt>> {
    let spans = prop::collection::vec((0i64..3, 0i64..6), 1..6).prop_map(|rows| {
        let mut cells = BTreeSet::new();
        for (y, (start, len)) in rows.into_iter().enumerate() {
            for x in start..start + len {
                if cells.len() < 16 {
                    cells.insert((x, y as i64));
                }
            }
        }
        cells
    });
    let scattered = any::<u16>().prop_map(|mask| {
        (0..16)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| (b % 4, b / 4))
            .collect::<BTreeSet<Pt>>()
    });
    prop_oneof![3 => spans, 1 => scattered]
}

pub fn tiles_strategy() -> impl Strategy<Value = Vec<(usize, i64)>> {
    let n = all_oriented().len();
    prop::collection::btree_map(0..n, prop::sample::select(vec![1i64, 1, 1, 2, -1]), 1..8)
        .prop_map(|m| m.into_iter().collect())
}

pub fn build_tiles(choice: &[(usize, i64)]) -> (TileSet, Vec<(BTreeSet<Pt>, i64)>) {
    let all = all_oriented();
    let set = TileSet::new(choice.iter().map(|&(i, w)| (all[i].clone(), w)), "random").unwrap();
    let cells = choice
        .iter()
        .map(|&(i, w)| (tile_cells(&all[i]), w))
        .collect();
    (set, cells)
}

/// Disjoint placements of the chosen tiles inside a 6x6 box, so the
/// region has at least one tiling.
pub fn plant(choice: &[(usize, i64)], seeds: &[(usize, i64, i64)]) -> BTreeSet<Pt> {
    let all = all_oriented();
    let mut cells = BTreeSet::new();
    for &(pick, x, y) in seeds {
        let tile = tile_cells(&all[choice[pick % choice.len()].0]);
        let placed: Vec<Pt> = tile.iter().map(|&(dx, dy)| (x + dx, y + dy)).collect();
        if cells.len() + placed.len() <= 16 && placed.iter().all(|p| !cells.contains(p)) {
            cells.extend(placed);
        }
    }
    cells
}

pub fn instance_strategy() -> impl Strategy<Value = (BTreeSet<Pt>, Vec<(usize, i64)>)> {
    let free = (region_strategy(), tiles_strategy());
    let planted = tiles_strategy().prop_flat_map(|choice| {
        prop::collection::vec((0usize..8, 0i64..5, 0i64..5), 1..10)
            .prop_map(move |seeds| (plant(&choice, &seeds), choice.clone()))
    });
    prop_oneof![1 => free, 1 => planted]
}

pub fn oracle_matchings(graph: &MatchGraph) -> BigInt {
    let n = graph.vertices().len();
    let mut adj = vec![Vec::new(); n];
    for &(u, v, _) in graph.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    fn go(used: &mut Vec<bool>, adj: &[Vec<usize>]) -> u64 {
        let Some(u) = used.iter().position(|&b| !b) else {
            return 1;
        };
        used[u] = true;
        let mut total = 0;
        for &v in &adj[u] {
            if !used[v] {
                used[v] = true;
                total += go(used, adj);
                used[v] = false;
            }
        }
        used[u] = false;
        total
    }
    BigInt::from(go(&mut vec![false; n], &adj))
}

/// Rows of even-length spans, at most 14 bricks.
pub fn brick_region_strategy() -> impl Strategy<Value = BTreeSet<Pt>> {
    prop::collection::vec((-2i64..3, 0i64..4), 1..6).prop_map(|rows| {
        let mut cells = BTreeSet::new();
        let mut bricks = 0;
        for (y, (start, half)) in rows.into_iter().enumerate() {
            let half = half.min(14 - bricks);
            bricks += half;
            for x in start..start + 2 * half {
                cells.insert((x, y as i64));
            }
        }
        cells
    })
}
