//! Named verification checks run on freshly computed (or cached) data.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::enumerate::Count;
use crate::graphs::{count_perfect_matchings, GraphFamily};
use crate::grid::Family;
use crate::padic::{
    check_affine_mod8, check_conjecture1, check_conjecture2, check_conjecture3, check_period,
    check_square_factorization, derive_l0_l1, v2, AffineForm, Verdict, Witness,
};
use crate::store::{CountError, Counter};
use crate::tiles::TileSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckName {
    Conj1,
    Conj2,
    Conj3,
    Conj4,
    Olympiad,
    SignedOdd,
    RectMod8,
    SquareFactor,
    MatchingEquivalence,
    A356523Parity,
    A356514Div,
}

impl CheckName {
    pub const ALL: [CheckName; 11] = [
        CheckName::Conj1,
        CheckName::Conj2,
        CheckName::Conj3,
        CheckName::Conj4,
        CheckName::Olympiad,
        CheckName::SignedOdd,
        CheckName::RectMod8,
        CheckName::SquareFactor,
        CheckName::MatchingEquivalence,
        CheckName::A356523Parity,
        CheckName::A356514Div,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Conj1 => "conj1",
            CheckName::Conj2 => "conj2",
            CheckName::Conj3 => "conj3",
            CheckName::Conj4 => "conj4",
            CheckName::Olympiad => "olympiad",
            CheckName::SignedOdd => "signed-odd",
            CheckName::RectMod8 => "rect-mod8",
            CheckName::SquareFactor => "square-factor",
            CheckName::MatchingEquivalence => "matching-equivalence",
            CheckName::A356523Parity => "a356523-parity",
            CheckName::A356514Div => "a356514-div",
        }
    }

    /// Largest order used when none is given; sized to finish in seconds.
    pub fn default_max_n(self) -> u32 {
        match self {
            CheckName::Conj1 | CheckName::Conj2 => 8,
            CheckName::Conj3 | CheckName::Conj4 => 10,
            CheckName::Olympiad | CheckName::SignedOdd => 6,
            CheckName::RectMod8 => 8,
            CheckName::SquareFactor => 6,
            CheckName::MatchingEquivalence => 6,
            CheckName::A356523Parity => 7,
            CheckName::A356514Div => 10,
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown check `{0}`")]
pub struct UnknownCheck(pub String);

impl FromStr for CheckName {
    type Err = UnknownCheck;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownCheck(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckParams {
    pub max_n: Option<u32>,
    /// Restricts 2-adic checks to a single exponent.
    pub k: Option<u32>,
}

pub const M_TILES: &str = "100010";
pub const L_TILES: &str = "skew:h,square";
pub const OLYMPIAD_TILES: &str = "011000";
pub const SIGNED_TILES: &str = "domino,square*-1";
pub const A356523_TILES: &str = "domino,straight:h";

fn tiles(spec: &str) -> TileSet {
    spec.parse().expect("built-in tile spec parses")
}

fn witness(indices: Vec<i64>, values: Vec<String>, detail: String) -> Witness {
    Witness {
        indices,
        values,
        detail,
    }
}

pub fn run_check(
    name: CheckName,
    params: CheckParams,
    counter: &Counter,
) -> Result<Verdict, CountError> {
    let max_n = params.max_n.unwrap_or_else(|| name.default_max_n());
    let verdict = match name {
        CheckName::Conj1 => conj1(max_n, params.k, counter)?,
        CheckName::Conj2 => conj2(max_n, params.k, counter)?,
        CheckName::Conj3 => {
            let l = counter.sequence(Family::Aztec, &tiles(L_TILES), 0, max_n)?;
            check_conjecture3(&l)
        }
        CheckName::Conj4 => conj4(max_n, params.k, counter)?,
        CheckName::Olympiad => olympiad(max_n, counter)?,
        CheckName::SignedOdd => signed_odd(max_n, counter)?,
        CheckName::RectMod8 => rect_mod8(max_n, counter)?,
        CheckName::SquareFactor => square_factor(max_n, counter)?,
        CheckName::MatchingEquivalence => matching_equivalence(max_n, counter)?,
        CheckName::A356523Parity => a356523_parity(max_n, counter)?,
        CheckName::A356514Div => a356514_div(max_n),
    };
    let mut verdict = verdict.param("max-n", max_n);
    verdict.check = name.as_str().to_string();
    Ok(verdict)
}

fn exponents(k: Option<u32>, usable: impl Fn(u32) -> bool) -> Vec<u32> {
    match k {
        Some(k) => vec![k],
        None => {
            let ks: Vec<u32> = (1..63).take_while(|&k| usable(k)).collect();
            if ks.is_empty() {
                vec![1]
            } else {
                ks
            }
        }
    }
}

fn conj1(max_n: u32, k: Option<u32>, counter: &Counter) -> Result<Verdict, CountError> {
    let m = counter.sequence(Family::Aztec, &tiles(M_TILES), 0, max_n)?;
    let ks = exponents(k, |k| (1usize << k) < m.len());
    let parts = ks.iter().map(|&k| check_conjecture1(&m, k)).collect();
    Ok(Verdict::combine("conj1", parts).param("k", join(&ks)))
}

fn conj2(max_n: u32, k: Option<u32>, counter: &Counter) -> Result<Verdict, CountError> {
    let m = counter.sequence(Family::Aztec, &tiles(M_TILES), 0, max_n)?;
    let top = 2 * (m.len() as u64 - 1);
    let ks = exponents(k, |k| (1u64 << k).saturating_sub(3) <= top);
    let parts = ks.iter().map(|&k| check_conjecture2(&m, k)).collect();
    Ok(Verdict::combine("conj2", parts).param("k", join(&ks)))
}

fn conj4(max_n: u32, k: Option<u32>, counter: &Counter) -> Result<Verdict, CountError> {
    let l = counter.sequence(Family::Aztec, &tiles(L_TILES), 0, max_n)?;
    let (l0, l1) = match derive_l0_l1(&l) {
        Ok(pair) => pair,
        Err(e) => {
            return Ok(Verdict::new("conj4").fails(None, witness(vec![], vec![], e.to_string())));
        }
    };
    let shortest = l0.len().min(l1.len());
    let ks = exponents(k, |k| (1usize << k) < shortest);
    let mut parts = Vec::new();
    for &k in &ks {
        let p = 1usize << k;
        let mut a = check_period(&l0, 1, k, p);
        a.check = format!("L0-period-k{k}");
        let mut b = check_period(&l1, 1, k, p);
        b.check = format!("L1-period-k{k}");
        parts.push(a);
        parts.push(b);
    }
    Ok(Verdict::combine("conj4", parts).param("k", join(&ks)))
}

fn join(ks: &[u32]) -> String {
    ks.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn olympiad(max_n: u32, counter: &Counter) -> Result<Verdict, CountError> {
    let verdict = Verdict::new("olympiad");
    if max_n < 1 {
        return Ok(verdict.insufficient("need max-n >= 1"));
    }
    let counts = counter.sequence(Family::Aztec, &tiles(OLYMPIAD_TILES), 1, max_n)?;
    let mut nonzero = Vec::new();
    for (i, c) in counts.iter().enumerate() {
        let n = i as i64 + 1;
        if !c.is_zero() {
            nonzero.push(n.to_string());
        }
        if matches!(n % 4, 1 | 2) && !c.is_zero() {
            return Ok(verdict.fails(
                Some((1, n)),
                witness(
                    vec![n],
                    vec![c.to_string()],
                    format!("order {n} has tilings"),
                ),
            ));
        }
        if n == 3 && c.is_zero() {
            return Ok(verdict.fails(
                Some((1, n)),
                witness(vec![n], vec![c.to_string()], "order 3 has no tiling".into()),
            ));
        }
    }
    Ok(verdict
        .param("nonzero-at", nonzero.join(","))
        .holds((1, max_n as i64)))
}

fn signed_odd(max_n: u32, counter: &Counter) -> Result<Verdict, CountError> {
    let verdict = Verdict::new("signed-odd");
    if max_n < 1 {
        return Ok(verdict.insufficient("need max-n >= 1"));
    }
    let signed = counter.sequence(Family::Aztec, &tiles(SIGNED_TILES), 1, max_n)?;
    let plain = counter.sequence(Family::Aztec, &tiles(M_TILES), 1, max_n)?;
    for (i, (s, p)) in signed.iter().zip(&plain).enumerate() {
        let n = i as i64 + 1;
        if !s.is_one() {
            return Ok(verdict.fails(
                Some((1, n)),
                witness(
                    vec![n],
                    vec![s.to_string()],
                    format!("signed count at order {n} is not 1"),
                ),
            ));
        }
        if p.is_even() {
            return Ok(verdict.fails(
                Some((1, n)),
                witness(
                    vec![n],
                    vec![p.to_string()],
                    format!("plain count at order {n} is even"),
                ),
            ));
        }
    }
    Ok(verdict.holds((1, max_n as i64)))
}

fn rect_mod8(max_n: u32, counter: &Counter) -> Result<Verdict, CountError> {
    if max_n < 1 {
        return Ok(Verdict::new("rect-mod8").insufficient("need max-n >= 1"));
    }
    let ds = tiles("domino,square");
    let dom = tiles("domino");
    let mut parts = Vec::new();
    for family in [
        Family::Square2n,
        Family::Rect2nBy2nPlus2,
        Family::Rect2nBy4n,
    ] {
        let seq = counter.sequence(family, &ds, 1, max_n)?;
        let mut v = check_affine_mod8(&seq, 1, AffineForm::TwoNPlusOne);
        v.check = format!("{family}:domino,square");
        parts.push(v);
    }
    for family in [Family::Rect2nBy2nPlus2, Family::Rect2nBy4n] {
        let seq = counter.sequence(family, &dom, 1, max_n)?;
        let mut v = check_period(&seq, 1, 3, 4);
        v.check = format!("{family}:domino");
        parts.push(v);
    }
    Ok(Verdict::combine("rect-mod8", parts))
}

fn square_factor(max_n: u32, counter: &Counter) -> Result<Verdict, CountError> {
    let verdict = Verdict::new("square-factor");
    if max_n < 1 {
        return Ok(verdict.insufficient("need max-n >= 1"));
    }
    let counts = counter.sequence(Family::Square2n, &tiles("domino"), 1, max_n)?;
    let mut fs = Vec::new();
    for (i, x) in counts.iter().enumerate() {
        let n = i as u32 + 1;
        match check_square_factorization(x, n) {
            Ok(f) => fs.push(f.to_string()),
            Err(e) => {
                return Ok(verdict.fails(
                    Some((1, n as i64)),
                    witness(vec![n as i64], vec![x.to_string()], e.to_string()),
                ))
            }
        }
    }
    Ok(verdict.param("f", fs.join(",")).holds((1, max_n as i64)))
}

fn matching_equivalence(max_n: u32, counter: &Counter) -> Result<Verdict, CountError> {
    let verdict = Verdict::new("matching-equivalence");
    if max_n < 1 {
        return Ok(verdict.insufficient("need max-n >= 1"));
    }
    for family in [
        GraphFamily::DoubledDiagonal,
        GraphFamily::Triangle,
        GraphFamily::Superimposed,
    ] {
        let counts = counter.sequence(Family::Aztec, &tiles(family.tile_spec()), 1, max_n)?;
        let matchings: Vec<Count> = (1..=max_n)
            .into_par_iter()
            .map(|n| count_perfect_matchings(&family.graph(n)))
            .collect();
        for (i, (t, m)) in counts.iter().zip(&matchings).enumerate() {
            let n = i as i64 + 1;
            let expected = if family == GraphFamily::Triangle {
                m * m
            } else {
                m.clone()
            };
            if *t != expected {
                return Ok(verdict.fails(
                    Some((1, n)),
                    witness(
                        vec![n],
                        vec![t.to_string(), m.to_string()],
                        format!("{family}: tilings and matchings disagree at order {n}"),
                    ),
                ));
            }
        }
    }
    Ok(verdict.holds((1, max_n as i64)))
}

fn a356523_parity(max_n: u32, counter: &Counter) -> Result<Verdict, CountError> {
    let verdict = Verdict::new("a356523-parity");
    let counts = counter.sequence(Family::Aztec, &tiles(A356523_TILES), 0, max_n)?;
    for (n, c) in counts.iter().enumerate() {
        let n = n as i64;
        if c.is_even() != (n % 3 == 1) {
            return Ok(verdict.fails(
                Some((0, n)),
                witness(
                    vec![n],
                    vec![c.to_string()],
                    format!("order {n} has the wrong parity"),
                ),
            ));
        }
    }
    Ok(verdict.holds((0, max_n as i64)))
}

fn a356514_div(max_n: u32) -> Verdict {
    let verdict = Verdict::new("a356514-div");
    if max_n < 1 {
        return verdict.insufficient("need max-n >= 1");
    }
    let counts: Vec<Count> = (1..=max_n)
        .into_par_iter()
        .map(|n| count_perfect_matchings(&GraphFamily::Superimposed.graph(n)))
        .collect();
    for (i, c) in counts.iter().enumerate() {
        let n = i as i64 + 1;
        let need = (n / 2) as u64;
        let ok = match v2(c) {
            Some(got) => got >= need,
            None => true,
        };
        if !ok {
            return witness_fail(verdict, n, c, need);
        }
    }
    let last = counts.last().map(|c| c.to_string()).unwrap_or_default();
    verdict.param("last", last).holds((1, max_n as i64))
}

fn witness_fail(verdict: Verdict, n: i64, c: &BigInt, need: u64) -> Verdict {
    verdict.fails(
        Some((1, n)),
        witness(
            vec![n],
            vec![c.to_string()],
            format!("order {n} is not divisible by 2^{need}"),
        ),
    )
}
