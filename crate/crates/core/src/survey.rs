//! Parity survey over the 63 unrestricted tile sets.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::enumerate::Count;
use crate::grid::aztec_diamond;
use crate::padic::{v2, Verdict, Witness};
use crate::store::{CountError, Counter};
use crate::tiles::TileSet;

/// Codes whose counts were reported even for every order tried.
pub const ALL_EVEN_CODES: [&str; 21] = [
    "001001", "001100", "001101", "011001", "011100", "011101", "100001", "100100", "100101",
    "101000", "101001", "101100", "101101", "110000", "110001", "110100", "110101", "111000",
    "111001", "111100", "111101",
];

/// Codes whose counts were reported even from order 2 on, with one tiling at order 1.
pub const EVEN_AFTER_FIRST_CODES: [&str; 4] = ["001010", "001110", "011010", "011110"];

/// Codes whose 2-adic valuation may grow without bound; reported raw.
pub const VALUATION_WATCH_CODES: [&str; 4] = ["001101", "100001", "100011", "111000"];

pub const DEFAULT_MAX_N: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    AllEven,
    AllOdd,
    EvenAfterFirst,
    DivisibleBy8,
    DivisibleBy8AfterFirst,
    Residue2Mod4,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::AllEven => "all-even",
            Tag::AllOdd => "all-odd",
            Tag::EvenAfterFirst => "even-after-first",
            Tag::DivisibleBy8 => "divisible-by-8",
            Tag::DivisibleBy8AfterFirst => "divisible-by-8-after-first",
            Tag::Residue2Mod4 => "residue-2-mod-4",
        })
    }
}

/// Counts for one tile set on Aztec diamonds of order `1..=counts.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyRow {
    pub code: String,
    pub counts: Vec<Count>,
}

fn all_mod(counts: &[Count], m: u32, r: u32) -> bool {
    let m = BigInt::from(m);
    let r = BigInt::from(r);
    counts.iter().all(|c| c.mod_floor(&m) == r)
}

impl SurveyRow {
    pub fn tags(&self) -> BTreeSet<Tag> {
        let c = &self.counts;
        let mut tags = BTreeSet::new();
        if c.is_empty() {
            return tags;
        }
        if all_mod(c, 2, 0) {
            tags.insert(Tag::AllEven);
        }
        if all_mod(c, 2, 1) {
            tags.insert(Tag::AllOdd);
        }
        if all_mod(c, 8, 0) {
            tags.insert(Tag::DivisibleBy8);
        }
        if all_mod(c, 4, 2) {
            tags.insert(Tag::Residue2Mod4);
        }
        if c.len() >= 2 {
            if c[0].is_odd() && all_mod(&c[1..], 2, 0) {
                tags.insert(Tag::EvenAfterFirst);
            }
            if all_mod(&c[1..], 8, 0) {
                tags.insert(Tag::DivisibleBy8AfterFirst);
            }
        }
        tags
    }

    /// Exponent of 2 in each count; `None` for a zero count.
    pub fn v2_sequence(&self) -> Vec<Option<u64>> {
        self.counts.iter().map(v2).collect()
    }

    pub fn max_n(&self) -> usize {
        self.counts.len()
    }
}

/// Counts every nonzero six-bit code on orders `1..=max_n`, ordered by code.
pub fn run_survey(max_n: u32, counter: &Counter) -> Result<Vec<SurveyRow>, CountError> {
    assert!(max_n >= 1, "survey needs max_n >= 1");
    (1u8..64)
        .into_par_iter()
        .map(|code| {
            let tiles = TileSet::from_code(code).expect("nonzero code");
            let counts = (1..=max_n)
                .map(|n| counter.count(&aztec_diamond(n), &tiles))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SurveyRow {
                code: tiles.descriptor().to_string(),
                counts,
            })
        })
        .collect()
}

fn first_where(row: &SurveyRow, from: usize, bad: impl Fn(&Count) -> bool) -> Option<usize> {
    row.counts
        .iter()
        .enumerate()
        .skip(from)
        .find(|(_, c)| bad(c))
        .map(|(i, _)| i)
}

/// Checks the published parity and divisibility classifications against
/// the survey rows.
pub fn compare_to_reported(rows: &[SurveyRow]) -> Verdict {
    let max_n = rows.iter().map(SurveyRow::max_n).min().unwrap_or(0);
    let verdict = Verdict::new("survey-classification").param("max-n", max_n);
    if max_n < 2 {
        return verdict.insufficient("need orders 1 and 2 at least");
    }
    let range = (1, max_n as i64);
    let find = |code: &str| rows.iter().find(|r| r.code == code);

    let m8 = BigInt::from(8);
    let m4 = BigInt::from(4);
    // (code, claim, first index checked, predicate that flags a mismatch)
    type Bad<'a> = Box<dyn Fn(&Count) -> bool + 'a>;
    let mut claims: Vec<(&str, &str, usize, Bad)> = Vec::new();
    for code in ALL_EVEN_CODES {
        claims.push((code, "all-even", 0, Box::new(|c: &Count| c.is_odd())));
    }
    for code in EVEN_AFTER_FIRST_CODES {
        claims.push((code, "odd first term", 0, Box::new(|c: &Count| c.is_even())));
        claims.push((
            code,
            "even-after-first",
            1,
            Box::new(|c: &Count| c.is_odd()),
        ));
    }
    claims.push((
        "011100",
        "divisible-by-8",
        0,
        Box::new(|c: &Count| !c.mod_floor(&m8).is_zero()),
    ));
    claims.push((
        "100001",
        "divisible-by-8-after-first",
        1,
        Box::new(|c: &Count| !c.mod_floor(&m8).is_zero()),
    ));
    claims.push((
        "110001",
        "residue-2-mod-4",
        0,
        Box::new(|c: &Count| c.mod_floor(&m4) != BigInt::from(2)),
    ));
    claims.push(("100010", "all-odd", 0, Box::new(|c: &Count| c.is_even())));

    for (code, claim, from, bad) in &claims {
        let Some(row) = find(code) else {
            return verdict.insufficient(format!("no survey row for {code}"));
        };
        let hit = if *claim == "odd first term" {
            bad(&row.counts[0]).then_some(0)
        } else {
            first_where(row, *from, bad)
        };
        if let Some(i) = hit {
            let n = i as i64 + 1;
            return verdict.fails(
                Some(range),
                Witness {
                    indices: vec![n],
                    values: vec![row.counts[i].to_string()],
                    detail: format!("code {code} breaks {claim} at n={n}"),
                },
            );
        }
    }
    verdict.param("claims", claims.len()).holds(range)
}
