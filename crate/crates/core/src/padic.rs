//! 2-adic valuations, residues and congruence checks on integer sequences.
//!
//! Every check works on a finite prefix and reports `holds-on-range` with the
//! indices it looked at, or `fails` with a witness.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::enumerate::Count;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("2-adic valuation of zero is undefined")]
    ZeroValuation,
    #[error("{sequence}({m}) = {numerator} / 2^{exponent} is not an integer")]
    InexactDivision {
        sequence: &'static str,
        m: u32,
        numerator: String,
        exponent: u32,
    },
    #[error("{0} is not positive")]
    NotPositive(String),
    #[error("{value} is not divisible by 2^{exponent}")]
    NotDivisible { value: String, exponent: u32 },
    #[error("{value} / 2^{exponent} = {quotient} is not a perfect square")]
    NotSquare {
        value: String,
        exponent: u32,
        quotient: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    HoldsOnRange,
    Fails,
    InsufficientData,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::HoldsOnRange => "holds-on-range",
            Status::Fails => "fails",
            Status::InsufficientData => "insufficient-data",
        })
    }
}

/// A reproducible counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Sequence index (or pair of indices) where the check broke.
    pub indices: Vec<i64>,
    /// Decimal values or residues at those indices.
    pub values: Vec<String>,
    pub detail: String,
}

/// Outcome of checking a claim on finite data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub parameters: BTreeMap<String, String>,
    /// First and last index examined; absent when nothing could be examined.
    pub range: Option<(i64, i64)>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn new(check: impl Into<String>) -> Self {
        Verdict {
            check: check.into(),
            parameters: BTreeMap::new(),
            range: None,
            status: Status::HoldsOnRange,
            witness: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn holds(mut self, range: (i64, i64)) -> Self {
        self.status = Status::HoldsOnRange;
        self.range = Some(range);
        self.witness = None;
        self
    }

    pub fn fails(mut self, range: Option<(i64, i64)>, witness: Witness) -> Self {
        self.status = Status::Fails;
        self.range = range;
        self.witness = Some(witness);
        self
    }

    pub fn insufficient(mut self, detail: impl Into<String>) -> Self {
        self.status = Status::InsufficientData;
        self.range = None;
        self.parameters.insert("note".into(), detail.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::HoldsOnRange
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdicts serialize")
    }

    /// Combines several verdicts for one named check: the first failure
    /// wins, otherwise insufficient data if nothing held, otherwise the
    /// union of the ranges.
    pub fn combine(check: impl Into<String>, parts: Vec<Verdict>) -> Verdict {
        let mut out = Verdict::new(check);
        if let Some(failed) = parts.iter().find(|v| v.status == Status::Fails) {
            out.parameters = failed.parameters.clone();
            out.parameters
                .insert("failed-check".into(), failed.check.clone());
            return out.fails(
                failed.range,
                failed.witness.clone().expect("failures carry witnesses"),
            );
        }
        let held: Vec<&Verdict> = parts.iter().filter(|v| v.is_holds()).collect();
        if held.is_empty() {
            return out.insufficient(
                parts
                    .iter()
                    .filter_map(|v| v.parameters.get("note").cloned())
                    .next()
                    .unwrap_or_else(|| "no sub-check had enough data".into()),
            );
        }
        let lo = held
            .iter()
            .filter_map(|v| v.range)
            .map(|r| r.0)
            .min()
            .unwrap_or(0);
        let hi = held
            .iter()
            .filter_map(|v| v.range)
            .map(|r| r.1)
            .max()
            .unwrap_or(0);
        out.parameters.insert(
            "sub-checks".into(),
            parts
                .iter()
                .map(|v| v.check.as_str())
                .collect::<Vec<_>>()
                .join(","),
        );
        out.holds((lo, hi))
    }
}

/// `x = 2^v2 * odd_part`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationSplit {
    pub v2: u64,
    pub odd_part: Count,
}

pub fn v2_split(x: &Count) -> Result<ValuationSplit, PadicError> {
    let v2 = x.trailing_zeros().ok_or(PadicError::ZeroValuation)?;
    Ok(ValuationSplit {
        v2,
        odd_part: x >> v2,
    })
}

pub fn v2(x: &Count) -> Option<u64> {
    x.trailing_zeros()
}

fn modulus(k: u32) -> BigInt {
    BigInt::one() << k
}

/// Each term reduced into `[0, 2^k)`.
pub fn residues(seq: &[Count], k: u32) -> Vec<Count> {
    let m = modulus(k);
    seq.iter().map(|x| x.mod_floor(&m)).collect()
}

fn residue_string(x: &Count, m: &BigInt) -> String {
    x.mod_floor(m).to_string()
}

fn to_i64(i: usize) -> i64 {
    i64::try_from(i).expect("index fits in i64")
}

/// `2^k` divides `M(n + 2^k) - M(n)` for every `n` with both terms present.
pub fn check_conjecture1(seq: &[Count], k: u32) -> Verdict {
    let verdict = Verdict::new("conj1").param("k", k);
    let period = 1usize << k;
    if seq.len() < period + 1 {
        return verdict.insufficient(format!(
            "need at least {} terms for k={k}, have {}",
            period + 1,
            seq.len()
        ));
    }
    let m = modulus(k);
    let last = seq.len() - 1 - period;
    for n in 0..=last {
        let diff = &seq[n + period] - &seq[n];
        if !diff.mod_floor(&m).is_zero() {
            return verdict.fails(
                Some((0, to_i64(n))),
                Witness {
                    indices: vec![to_i64(n), to_i64(n + period)],
                    values: vec![
                        residue_string(&seq[n], &m),
                        residue_string(&seq[n + period], &m),
                    ],
                    detail: format!("M({}) - M({n}) is not divisible by 2^{k}", n + period),
                },
            );
        }
    }
    verdict.holds((0, to_i64(last)))
}

/// `M(n) + M(n') = 0 mod 2^k` whenever `n + n' = -3 mod 2^k`, over every
/// in-range pair `n <= n'`.
pub fn check_conjecture2(seq: &[Count], k: u32) -> Verdict {
    let verdict = Verdict::new("conj2").param("k", k);
    let m = modulus(k);
    let period = 1u64 << k;
    // -3 mod 2^k, written as a nonnegative residue
    let target = (period - 3 % period) % period;
    let mut pairs = 0usize;
    for n in 0..seq.len() {
        for n2 in n..seq.len() {
            if ((n + n2) as u64) % period != target {
                continue;
            }
            pairs += 1;
            let sum = &seq[n] + &seq[n2];
            if !sum.mod_floor(&m).is_zero() {
                return verdict.fails(
                    Some((0, to_i64(seq.len() - 1))),
                    Witness {
                        indices: vec![to_i64(n), to_i64(n2)],
                        values: vec![residue_string(&seq[n], &m), residue_string(&seq[n2], &m)],
                        detail: format!("M({n}) + M({n2}) is not divisible by 2^{k}"),
                    },
                );
            }
        }
    }
    if pairs == 0 {
        return verdict.insufficient(format!("no index pair sums to -3 mod 2^{k}"));
    }
    verdict
        .param("pairs", pairs)
        .holds((0, to_i64(seq.len() - 1)))
}

/// Expected exponent of 2 in `L(n)`: `n - 1` for even `n`, `(n - 1) / 2` for odd.
pub fn conjectured_l_valuation(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        n - 1
    } else {
        (n - 1) / 2
    }
}

/// Checks the valuation pattern of `L(n)` for every in-range `n >= 1`.
pub fn check_conjecture3(seq: &[Count]) -> Verdict {
    let verdict = Verdict::new("conj3");
    if seq.len() < 2 {
        return verdict.insufficient("need L(1) at least");
    }
    for (n, x) in seq.iter().enumerate().skip(1) {
        let expected = conjectured_l_valuation(n as u64);
        match v2(x) {
            Some(got) if got == expected => {}
            got => {
                return verdict.fails(
                    Some((1, to_i64(n))),
                    Witness {
                        indices: vec![to_i64(n)],
                        values: vec![x.to_string()],
                        detail: match got {
                            Some(got) => format!("v2(L({n})) = {got}, expected {expected}"),
                            None => format!("L({n}) = 0 has no valuation"),
                        },
                    },
                );
            }
        }
    }
    verdict.holds((1, to_i64(seq.len() - 1)))
}

fn exact_shift(
    x: &Count,
    exponent: u32,
    sequence: &'static str,
    m: u32,
) -> Result<Count, PadicError> {
    let low = x.mod_floor(&modulus(exponent));
    if !low.is_zero() || x.is_zero() {
        return Err(PadicError::InexactDivision {
            sequence,
            m,
            numerator: x.to_string(),
            exponent,
        });
    }
    Ok(x >> exponent)
}

/// `L0(m) = L(2m) / 2^(2m-1)` and `L1(m) = L(2m-1) / 2^(m-1)` for `m >= 1`,
/// as far as `seq` (indexed from 0) reaches.
pub fn derive_l0_l1(seq: &[Count]) -> Result<(Vec<Count>, Vec<Count>), PadicError> {
    let mut l0 = Vec::new();
    let mut l1 = Vec::new();
    for m in 1u32.. {
        let odd_index = 2 * m as usize - 1;
        if odd_index >= seq.len() {
            break;
        }
        l1.push(exact_shift(&seq[odd_index], m - 1, "L1", m)?);
        if let Some(x) = seq.get(2 * m as usize) {
            l0.push(exact_shift(x, 2 * m - 1, "L0", m)?);
        }
    }
    Ok((l0, l1))
}

/// Whether `seq mod 2^k` repeats with period `p`. Terms are labelled from
/// `first_index` in the report.
pub fn check_period(seq: &[Count], first_index: i64, k: u32, p: usize) -> Verdict {
    let verdict = Verdict::new("period").param("k", k).param("p", p);
    assert!(p >= 1, "period must be positive");
    if seq.len() <= p {
        return verdict.insufficient(format!("need more than {p} terms, have {}", seq.len()));
    }
    let m = modulus(k);
    let last = seq.len() - 1 - p;
    for i in 0..=last {
        if !(&seq[i + p] - &seq[i]).mod_floor(&m).is_zero() {
            let a = first_index + to_i64(i);
            let b = a + to_i64(p);
            return verdict.fails(
                Some((first_index, a)),
                Witness {
                    indices: vec![a, b],
                    values: vec![residue_string(&seq[i], &m), residue_string(&seq[i + p], &m)],
                    detail: format!("terms {a} and {b} differ mod 2^{k}"),
                },
            );
        }
    }
    verdict.holds((first_index, first_index + to_i64(last)))
}

/// Closed forms compared against a sequence mod 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AffineForm {
    /// `2n + 1`
    TwoNPlusOne,
    /// `n + 1 + (1 + (-1)^(n+1)) / 2`
    ParityShifted,
}

impl AffineForm {
    pub fn eval(self, n: i64) -> BigInt {
        match self {
            AffineForm::TwoNPlusOne => BigInt::from(2 * n + 1),
            AffineForm::ParityShifted => {
                let sign: i64 = if (n + 1) % 2 == 0 { 1 } else { -1 };
                BigInt::from(n + 1 + (1 + sign) / 2)
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            AffineForm::TwoNPlusOne => "2n+1",
            AffineForm::ParityShifted => "n+1+(1+(-1)^(n+1))/2",
        }
    }
}

/// Every term `a(n)` agrees with `form(n)` mod 8; terms are labelled from
/// `first_index`.
pub fn check_affine_mod8(seq: &[Count], first_index: i64, form: AffineForm) -> Verdict {
    let verdict = Verdict::new("affine-mod8").param("form", form.name());
    if seq.is_empty() {
        return verdict.insufficient("empty sequence");
    }
    let m = BigInt::from(8);
    for (i, x) in seq.iter().enumerate() {
        let n = first_index + to_i64(i);
        let want = form.eval(n).mod_floor(&m);
        let got = x.mod_floor(&m);
        if want != got {
            return verdict.fails(
                Some((first_index, n)),
                Witness {
                    indices: vec![n],
                    values: vec![got.to_string(), want.to_string()],
                    detail: format!("term {n} is {got} mod 8, form gives {want}"),
                },
            );
        }
    }
    verdict.holds((first_index, first_index + to_i64(seq.len() - 1)))
}

/// Finds `f` with `x = 2^n f^2`.
pub fn check_square_factorization(x: &Count, n: u32) -> Result<Count, PadicError> {
    if !x.is_positive() {
        return Err(PadicError::NotPositive(x.to_string()));
    }
    if !x.mod_floor(&modulus(n)).is_zero() {
        return Err(PadicError::NotDivisible {
            value: x.to_string(),
            exponent: n,
        });
    }
    let quotient: BigInt = x >> n;
    let root = quotient.sqrt();
    if &root * &root != quotient {
        return Err(PadicError::NotSquare {
            value: x.to_string(),
            exponent: n,
            quotient: quotient.to_string(),
        });
    }
    Ok(root)
}
