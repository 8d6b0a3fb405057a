mod common;

use std::collections::BTreeSet;

use aztec_tilings::enumerate::{count_tilings, count_weighted};
use aztec_tilings::graphs::{count_perfect_matchings, derived_graph, EdgeKind, GraphFamily};
use aztec_tilings::grid::Dihedral;
use aztec_tilings::tiles::{orientations, Shape, TileSet};
use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn orientation_sets_match_independent_generation() {
    let lib = all_oriented();
    assert_eq!(lib.len(), 21);
    for shape in Shape::ALL {
        let got: BTreeSet<BTreeSet<Pt>> = orientations(shape).iter().map(tile_cells).collect();
        assert_eq!(got, oracle_orientations(shape), "{shape:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enumerator_matches_brute_force((cells, choice) in instance_strategy()) {
        let (set, oracle_tiles) = build_tiles(&choice);
        let expected = oracle_count(&cells, &oracle_tiles);
        prop_assert_eq!(count_weighted(&to_region(&cells), &set), expected);
    }
}

#[test]
fn random_instances_are_not_mostly_empty() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    let strategy = instance_strategy();
    let mut nonzero = 0;
    for _ in 0..200 {
        let (cells, choice) = strategy.new_tree(&mut runner).unwrap().current();
        let (_, oracle_tiles) = build_tiles(&choice);
        if oracle_count(&cells, &oracle_tiles) != BigInt::from(0) {
            nonzero += 1;
        }
    }
    assert!(
        nonzero >= 60,
        "only {nonzero} of 200 sampled instances have tilings"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counts_are_dihedral_invariant((cells, choice) in instance_strategy()) {
        let region = to_region(&cells);
        let (set, _) = build_tiles(&choice);
        let base = count_weighted(&region, &set);
        for g in Dihedral::all() {
            prop_assert_eq!(count_weighted(&region.transformed(g), &set.transformed(g)), base.clone());
        }
    }

    #[test]
    fn more_tiles_never_fewer_tilings(cells in region_strategy(), a in 1u8..64, b in 0u8..64) {
        let region = to_region(&cells);
        let small = TileSet::from_code(a).unwrap();
        let big = TileSet::from_code(a | b).unwrap();
        prop_assert!(count_tilings(&region, &small) <= count_tilings(&region, &big));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matching_counter_matches_oracle(cells in brick_region_strategy(), kinds in 1u8..8) {
        let kinds: Vec<EdgeKind> = EdgeKind::ALL
            .iter()
            .enumerate()
            .filter(|(i, _)| kinds >> i & 1 == 1)
            .map(|(_, &k)| k)
            .collect();
        let graph = derived_graph(&to_region(&cells), &kinds).unwrap();
        prop_assert!(graph.vertices().len() <= 14);
        prop_assert_eq!(count_perfect_matchings(&graph), oracle_matchings(&graph));
    }
}

#[test]
fn family_graphs_match_oracle() {
    for family in [
        GraphFamily::DoubledDiagonal,
        GraphFamily::Triangle,
        GraphFamily::Superimposed,
    ] {
        for n in 1.. {
            let graph = family.graph(n);
            if graph.vertices().len() > 14 {
                break;
            }
            assert_eq!(
                count_perfect_matchings(&graph),
                oracle_matchings(&graph),
                "{family} {n}"
            );
        }
    }
}
