//! Exact weighted tiling counts by frontier dynamic programming.
//!
//! Cells are visited in scan order. A state is the position of the first
//! uncovered cell together with the occupancy of the cells after it that an
//! already-placed tile can reach. Every tile placed at a state covers that
//! first uncovered cell with the tile's own first cell, so each tiling is
//! produced exactly once.

use std::collections::HashMap;
use std::hash::Hash;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::grid::{Cell, Dihedral, Family, Region};
use crate::tiles::TileSet;

/// Exact signed tiling count.
pub type Count = BigInt;

/// Resource bounds for a single count.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    /// Abort once this many frontier states are alive at the same time.
    pub max_states: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Limits {
    pub const NONE: Limits = Limits {
        max_states: None,
        deadline: None,
    };
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("frontier state cap of {cap} entries exceeded")]
    StateCap { cap: usize },
    #[error("time limit exceeded")]
    TimeLimit,
}

#[derive(Debug, Clone)]
struct Placement {
    /// Region indices covered, anchor first.
    cells: Vec<usize>,
    weight: i64,
}

/// The region flattened to scan-order indices, with every legal tile
/// placement listed under the index of its anchor cell.
#[derive(Debug)]
struct Board {
    len: usize,
    placements: Vec<Vec<Placement>>,
    /// One more than the largest distance from an anchor to another cell of
    /// the same placement.
    window: usize,
}

impl Board {
    fn new(region: &Region, tiles: &TileSet) -> Board {
        let cells: Vec<Cell> = region.cells().collect();
        let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut placements = vec![Vec::new(); cells.len()];
        let mut window = 1;
        for (p, &at) in cells.iter().enumerate() {
            for (tile, weight) in tiles.entries() {
                let anchor = tile.offsets()[0];
                let covered: Option<Vec<usize>> = tile
                    .offsets()
                    .iter()
                    .map(|o| {
                        let c = Cell::new(at.col + o.col - anchor.col, at.row + o.row - anchor.row);
                        index.get(&c).copied()
                    })
                    .collect();
                if let Some(covered) = covered {
                    debug_assert!(covered[1..].iter().all(|&i| i > p));
                    let reach = covered.iter().max().map_or(p, |&m| m) - p + 1;
                    window = window.max(reach);
                    placements[p].push(Placement {
                        cells: covered,
                        weight: *weight,
                    });
                }
            }
        }
        Board {
            len: cells.len(),
            placements,
            window,
        }
    }
}

/// Occupancy of the cells from the current position onward; bit `i` is the
/// cell `i` places after it.
trait Frontier: Clone + Eq + Hash {
    fn empty(width: usize) -> Self;
    fn with_bits(width: usize, bits: impl Iterator<Item = usize>) -> Self;
    fn disjoint(&self, other: &Self) -> bool;
    fn union(&self, other: &Self) -> Self;
    /// Skips the run of occupied cells at the front. Returns how far the
    /// position moved and the shifted occupancy.
    fn advance(self) -> (usize, Self);
}

macro_rules! word_frontier {
    ($t:ty) => {
        impl Frontier for $t {
            fn empty(_: usize) -> Self {
                0
            }

            fn with_bits(_: usize, bits: impl Iterator<Item = usize>) -> Self {
                bits.fold(0, |m, b| m | (1 << b))
            }

            fn disjoint(&self, other: &Self) -> bool {
                self & other == 0
            }

            fn union(&self, other: &Self) -> Self {
                self | other
            }

            fn advance(self) -> (usize, Self) {
                let step = self.trailing_ones();
                (step as usize, self.checked_shr(step).unwrap_or(0))
            }
        }
    };
}

word_frontier!(u64);
word_frontier!(u128);

/// Occupancy for windows wider than 128 cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct WideFrontier(Box<[u64]>);

impl Frontier for WideFrontier {
    fn empty(width: usize) -> Self {
        WideFrontier(vec![0; width.div_ceil(64)].into_boxed_slice())
    }

    fn with_bits(width: usize, bits: impl Iterator<Item = usize>) -> Self {
        let mut words = vec![0u64; width.div_ceil(64)];
        for b in bits {
            words[b / 64] |= 1 << (b % 64);
        }
        WideFrontier(words.into_boxed_slice())
    }

    fn disjoint(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & b == 0)
    }

    fn union(&self, other: &Self) -> Self {
        WideFrontier(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a | b)
                .collect(),
        )
    }

    fn advance(self) -> (usize, Self) {
        let mut words = self.0;
        let mut step = 0usize;
        for w in words.iter() {
            let ones = w.trailing_ones() as usize;
            step += ones;
            if ones < 64 {
                break;
            }
        }
        let (word_shift, bit_shift) = (step / 64, step % 64);
        let n = words.len();
        for i in 0..n {
            let lo = words.get(i + word_shift).copied().unwrap_or(0);
            let hi = words.get(i + word_shift + 1).copied().unwrap_or(0);
            words[i] = if bit_shift == 0 {
                lo
            } else {
                (lo >> bit_shift) | (hi << (64 - bit_shift))
            };
        }
        (step, WideFrontier(words))
    }
}

/// Accumulated completion counts. Fixed-width accumulators report overflow
/// so the caller can retry with big integers.
trait Accumulator: Clone {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn add_scaled(&mut self, other: &Self, weight: i64) -> Option<()>;
    fn into_count(self) -> Count;
}

impl Accumulator for i128 {
    fn nil() -> Self {
        0
    }

    fn unit() -> Self {
        1
    }

    fn is_nil(&self) -> bool {
        *self == 0
    }

    fn add_scaled(&mut self, other: &Self, weight: i64) -> Option<()> {
        let term = other.checked_mul(i128::from(weight))?;
        *self = self.checked_add(term)?;
        Some(())
    }

    fn into_count(self) -> Count {
        BigInt::from(self)
    }
}

impl Accumulator for BigInt {
    fn nil() -> Self {
        BigInt::zero()
    }

    fn unit() -> Self {
        BigInt::one()
    }

    fn is_nil(&self) -> bool {
        self.is_zero()
    }

    fn add_scaled(&mut self, other: &Self, weight: i64) -> Option<()> {
        if weight == 1 {
            *self += other;
        } else {
            *self += other * weight;
        }
        Some(())
    }

    fn into_count(self) -> Count {
        self
    }
}

enum Failure {
    Overflow,
    Limit(EnumerateError),
}

const DEADLINE_STRIDE: usize = 1 << 14;

fn run<F: Frontier, A: Accumulator>(board: &Board, limits: &Limits) -> Result<Count, Failure> {
    let width = board.window;
    let masks: Vec<Vec<(F, i64)>> = board
        .placements
        .iter()
        .enumerate()
        .map(|(p, list)| {
            list.iter()
                .map(|pl| {
                    (
                        F::with_bits(width, pl.cells.iter().map(|&c| c - p)),
                        pl.weight,
                    )
                })
                .collect()
        })
        .collect();

    let mut layers: Vec<FxHashMap<F, A>> = (0..=board.len).map(|_| FxHashMap::default()).collect();
    layers[0].insert(F::empty(width), A::unit());
    let mut live = 1usize;
    let mut work = 0usize;

    for p in 0..board.len {
        let layer = std::mem::take(&mut layers[p]);
        live -= layer.len();
        for (state, count) in layer {
            if count.is_nil() {
                continue;
            }
            for (mask, weight) in &masks[p] {
                if !state.disjoint(mask) {
                    continue;
                }
                let (step, next) = state.union(mask).advance();
                let target = &mut layers[p + step];
                match target.get_mut(&next) {
                    Some(acc) => acc.add_scaled(&count, *weight).ok_or(Failure::Overflow)?,
                    None => {
                        let mut acc = A::nil();
                        acc.add_scaled(&count, *weight).ok_or(Failure::Overflow)?;
                        target.insert(next, acc);
                        live += 1;
                        if let Some(cap) = limits.max_states {
                            if live > cap {
                                return Err(Failure::Limit(EnumerateError::StateCap { cap }));
                            }
                        }
                    }
                }
                work += 1;
                if work.is_multiple_of(DEADLINE_STRIDE) {
                    if let Some(deadline) = limits.deadline {
                        if Instant::now() >= deadline {
                            return Err(Failure::Limit(EnumerateError::TimeLimit));
                        }
                    }
                }
            }
        }
    }
    Ok(layers[board.len]
        .remove(&F::empty(width))
        .map_or_else(Count::zero, A::into_count))
}

fn run_exact<F: Frontier>(board: &Board, limits: &Limits) -> Result<Count, EnumerateError> {
    match run::<F, i128>(board, limits) {
        Ok(count) => Ok(count),
        Err(Failure::Limit(e)) => Err(e),
        Err(Failure::Overflow) => match run::<F, BigInt>(board, limits) {
            Ok(count) => Ok(count),
            Err(Failure::Limit(e)) => Err(e),
            Err(Failure::Overflow) => unreachable!("big integers do not overflow"),
        },
    }
}

/// Picks between the region and its transpose, whichever gives the narrower
/// frontier. The transpose is only eligible when the tile set maps onto
/// itself under it.
fn oriented_board(region: &Region, tiles: &TileSet) -> Board {
    let board = Board::new(region, tiles);
    if !tiles.is_closed_under(Dihedral::TRANSPOSE) {
        return board;
    }
    let flipped = Board::new(&region.transformed(Dihedral::TRANSPOSE), tiles);
    if flipped.window < board.window {
        flipped
    } else {
        board
    }
}

/// Sum over all tilings of the product of tile weights, with resource limits.
pub fn count_weighted_limited(
    region: &Region,
    tiles: &TileSet,
    limits: &Limits,
) -> Result<Count, EnumerateError> {
    if region.is_empty() {
        return Ok(Count::one());
    }
    if !region.len().is_multiple_of(tiles.size_gcd()) {
        return Ok(Count::zero());
    }
    let board = oriented_board(region, tiles);
    match board.window {
        0..=64 => run_exact::<u64>(&board, limits),
        65..=128 => run_exact::<u128>(&board, limits),
        _ => run_exact::<WideFrontier>(&board, limits),
    }
}

/// Sum over all tilings of the product of tile weights.
pub fn count_weighted(region: &Region, tiles: &TileSet) -> Count {
    count_weighted_limited(region, tiles, &Limits::NONE).expect("no limits were set")
}

/// Number of tilings, ignoring any weights on the tile set.
pub fn count_tilings(region: &Region, tiles: &TileSet) -> Count {
    count_weighted(region, &tiles.unweighted())
}

/// Weighted count by plain backtracking over the same placement table, with
/// no memoization. Exponential; for cross-checking small regions.
pub fn count_unmemoized(region: &Region, tiles: &TileSet) -> Count {
    fn go(board: &Board, covered: &mut [bool], from: usize) -> Count {
        let Some(p) = (from..board.len).find(|&i| !covered[i]) else {
            return Count::one();
        };
        let mut total = Count::zero();
        for pl in &board.placements[p] {
            if pl.cells.iter().any(|&c| covered[c]) {
                continue;
            }
            pl.cells.iter().for_each(|&c| covered[c] = true);
            let sub = go(board, covered, p + 1);
            pl.cells.iter().for_each(|&c| covered[c] = false);
            total += sub * pl.weight;
        }
        total
    }
    let board = Board::new(region, tiles);
    go(&board, &mut vec![false; board.len], 0)
}

/// Weighted counts for `family(n)`, `n` in `n_min..=n_max`, in index order.
/// Indices are computed in parallel.
pub fn sequence_limited(
    family: Family,
    tiles: &TileSet,
    n_min: u32,
    n_max: u32,
    limits: &Limits,
) -> Result<Vec<Count>, EnumerateError> {
    (n_min..=n_max)
        .into_par_iter()
        .map(|n| count_weighted_limited(&family.region(n), tiles, limits))
        .collect()
}

pub fn sequence(family: Family, tiles: &TileSet, n_min: u32, n_max: u32) -> Vec<Count> {
    sequence_limited(family, tiles, n_min, n_max, &Limits::NONE).expect("no limits were set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{aztec_diamond, rectangle};
    use std::collections::BTreeSet;

    fn tiles(spec: &str) -> TileSet {
        spec.parse().unwrap()
    }

    /// Independent oracle: cover the smallest uncovered cell by any tile
    /// translate containing it, on raw cell sets.
    fn brute_force(cells: &BTreeSet<Cell>, set: &TileSet) -> BigInt {
        let Some(&first) = cells.iter().next() else {
            return BigInt::one();
        };
        let mut total = BigInt::zero();
        for (tile, weight) in set.entries() {
            for pivot in tile.offsets() {
                let placed: Vec<Cell> = tile
                    .offsets()
                    .iter()
                    .map(|o| {
                        Cell::new(first.col + o.col - pivot.col, first.row + o.row - pivot.row)
                    })
                    .collect();
                if placed.iter().all(|c| cells.contains(c)) {
                    let rest: BTreeSet<Cell> = cells
                        .iter()
                        .filter(|c| !placed.contains(c))
                        .copied()
                        .collect();
                    total += brute_force(&rest, set) * *weight;
                }
            }
        }
        total
    }

    #[test]
    fn oracle_values_on_small_cases() {
        let cases = [
            (aztec_diamond(1), "100010", 3),
            (aztec_diamond(2), "100010", 19),
            (aztec_diamond(2), "100000", 8),
            (rectangle(4, 4), "100000", 36),
            (aztec_diamond(3), "skew:h,square", 6),
            (aztec_diamond(1), "011000", 0),
            (aztec_diamond(3), "011000", -1),
        ];
        for (region, spec, expected) in cases {
            let cells: BTreeSet<Cell> = region.cells().collect();
            let oracle = brute_force(&cells, &tiles(spec));
            if expected >= 0 {
                assert_eq!(
                    oracle,
                    BigInt::from(expected),
                    "{} {spec}",
                    region.descriptor()
                );
            }
            assert_eq!(
                count_weighted(&region, &tiles(spec)),
                oracle,
                "{} {spec}",
                region.descriptor()
            );
        }
    }

    #[test]
    fn published_small_values() {
        assert_eq!(
            count_tilings(&aztec_diamond(2), &tiles("100010")),
            BigInt::from(19)
        );
        assert_eq!(
            count_tilings(&aztec_diamond(1), &tiles("100010")),
            BigInt::from(3)
        );
        assert_eq!(
            count_tilings(&aztec_diamond(3), &tiles("100010")),
            BigInt::from(293)
        );
        assert_eq!(
            count_tilings(&aztec_diamond(3), &tiles("skew:h,square")),
            BigInt::from(6)
        );
        assert_eq!(
            count_tilings(&aztec_diamond(1), &tiles("011000")),
            BigInt::zero()
        );
        assert_eq!(
            count_weighted(&aztec_diamond(4), &tiles("domino,square*-1")),
            BigInt::one()
        );
        assert_eq!(
            count_tilings(&aztec_diamond(2), &tiles("100010"))
                - count_tilings(&aztec_diamond(2), &tiles("100000")),
            BigInt::from(11)
        );
    }

    #[test]
    fn empty_region_counts_one() {
        for spec in ["100000", "011000", "skew:h,square", "111111"] {
            assert_eq!(
                count_tilings(&aztec_diamond(0), &tiles(spec)),
                BigInt::one()
            );
        }
    }

    #[test]
    fn aztec_domino_formula() {
        for n in 1..=8u32 {
            let expected = BigInt::one() << (n * (n + 1) / 2);
            assert_eq!(count_tilings(&aztec_diamond(n), &tiles("100000")), expected);
        }
    }

    #[test]
    fn weights_are_ignored_by_plain_count() {
        let region = aztec_diamond(3);
        assert_eq!(
            count_tilings(&region, &tiles("domino,square*-1")),
            count_tilings(&region, &tiles("100010"))
        );
        assert_eq!(
            count_weighted(&region, &tiles("domino,square*-1")),
            BigInt::one()
        );
    }

    #[test]
    fn memo_off_matches() {
        for n in 0..=4 {
            let region = aztec_diamond(n);
            for spec in [
                "100010",
                "skew:h,square",
                "011000",
                "domino,square*-1",
                "100001",
            ] {
                assert_eq!(
                    count_unmemoized(&region, &tiles(spec)),
                    count_weighted(&region, &tiles(spec)),
                    "n={n} {spec}"
                );
            }
        }
    }

    #[test]
    fn big_integer_fallback() {
        // Fibonacci numbers on a 2 x 200 strip run far past i128.
        let region = rectangle(2, 200);
        let board = Board::new(&region, &tiles("100000"));
        assert!(matches!(
            run::<u64, i128>(&board, &Limits::NONE),
            Err(Failure::Overflow)
        ));
        let mut a = (BigInt::one(), BigInt::one());
        for _ in 2..=200 {
            a = (a.1.clone(), &a.1 + &a.0);
        }
        assert_eq!(count_tilings(&region, &tiles("100000")), a.1);
    }

    /// One long row with a short row under its left end: the vertical
    /// dominos there reach a whole row ahead, yet few states are reachable.
    fn hook(width: i64, tail: i64) -> Region {
        let top = (0..width).map(|c| Cell::new(c, 1));
        let bottom = (0..tail).map(|c| Cell::new(c, 0));
        Region::from_cells(top.chain(bottom), "hook")
    }

    #[test]
    fn wide_frontier_matches_word_frontier() {
        let set = tiles("domino,square");
        let region = hook(71, 3);
        let board = Board::new(&region, &set);
        assert!(board.window > 64 && board.window <= 128);
        let narrow = run_exact::<u128>(&board, &Limits::NONE).unwrap();
        let wide = run_exact::<WideFrontier>(&board, &Limits::NONE).unwrap();
        assert_eq!(narrow, wide);
        assert_eq!(narrow, count_unmemoized(&region, &set));

        let region = hook(141, 5);
        let board = Board::new(&region, &set);
        assert!(board.window > 128);
        assert_eq!(
            count_weighted(&region, &set),
            count_unmemoized(&region, &set)
        );
        assert!(count_weighted(&region, &set) > BigInt::zero());
    }

    #[test]
    fn wide_frontier_shift() {
        let f = WideFrontier::with_bits(200, [0, 1, 2, 70, 130].into_iter());
        let (step, g) = f.advance();
        assert_eq!(step, 3);
        assert_eq!(g, WideFrontier::with_bits(200, [67, 127].into_iter()));
        let f = WideFrontier::with_bits(200, (0..65).chain([150]));
        let (step, g) = f.advance();
        assert_eq!(step, 65);
        assert_eq!(g, WideFrontier::with_bits(200, [85].into_iter()));
    }

    #[test]
    fn limits_abort() {
        let region = aztec_diamond(8);
        let set = tiles("100010");
        let capped = Limits {
            max_states: Some(10),
            deadline: None,
        };
        assert_eq!(
            count_weighted_limited(&region, &set, &capped),
            Err(EnumerateError::StateCap { cap: 10 })
        );
        let expired = Limits {
            max_states: None,
            deadline: Some(Instant::now()),
        };
        assert_eq!(
            count_weighted_limited(&region, &set, &expired),
            Err(EnumerateError::TimeLimit)
        );
    }

    #[test]
    fn odd_area_short_circuits() {
        assert_eq!(
            count_tilings(&rectangle(3, 3), &tiles("111111")),
            BigInt::zero()
        );
        assert_eq!(
            count_tilings(&rectangle(2, 3), &tiles("011111")),
            BigInt::zero()
        );
    }

    #[test]
    fn sequences_in_order() {
        let got = sequence(Family::Aztec, &tiles("skew:h,square"), 0, 5);
        let expected: Vec<BigInt> = [1, 1, 2, 6, 40, 364]
            .into_iter()
            .map(BigInt::from)
            .collect();
        assert_eq!(got, expected);
        let got = sequence(Family::Aztec, &tiles("100010"), 0, 4);
        let expected: Vec<BigInt> = [1, 3, 19, 293, 10917]
            .into_iter()
            .map(BigInt::from)
            .collect();
        assert_eq!(got, expected);
    }
}
