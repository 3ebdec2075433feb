//! Deterministic sequence generators and the Rado/Cayley orbit structure.
//!
//! Digit-stream generators (Champernowne, p-normal) produce a one-sided
//! stream `digit(0), digit(1), ...` and are mirrored onto ℤ by `I(i) = digit(|i|)`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{MembershipRule, ShiftOrbitSystem};
use crate::error::{Error, Result};
use crate::seqcore::{BitSource, ChampernowneOrder, Polarity, SymbolicSource, Word};

/// Digit `k` (0-based) of the binary Champernowne stream.
pub fn champernowne_digit(order: ChampernowneOrder, k: u64) -> bool {
    // Length-L blocks hold `count(L)` words of L digits each.
    let (first, count): (fn(u32) -> u64, fn(u32) -> u64) = match order {
        ChampernowneOrder::Words => (|_| 0, |len| 1u64 << len),
        ChampernowneOrder::Integers => (|len| 1u64 << (len - 1), |len| 1u64 << (len - 1)),
    };
    let mut rem = k;
    let mut len = 1u32;
    loop {
        let block = count(len) * len as u64;
        if rem < block {
            let value = first(len) + rem / len as u64;
            let pos = (rem % len as u64) as u32;
            return (value >> (len - 1 - pos)) & 1 == 1;
        }
        rem -= block;
        len += 1;
    }
}

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The `k`-th output (0-based) of SplitMix64 seeded with `seed`.
pub fn splitmix64(seed: u64, k: u64) -> u64 {
    let mut z = seed.wrapping_add(k.wrapping_add(1).wrapping_mul(SPLITMIX_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Digit `k` of the seeded Bernoulli(p) stream: 1 iff the `k`-th uniform
/// draw (top 53 bits of SplitMix64) is below `p`.
pub fn pnormal_digit(p: f64, seed: u64, k: u64) -> bool {
    let u = (splitmix64(seed, k) >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    u < p
}

/// Coding of the rotation by `alpha` with respect to `[0, alpha)`.
pub fn sturmian_bit(alpha: f64, rho: f64, i: i64) -> bool {
    let x = rho + i as f64 * alpha;
    x - x.floor() < alpha
}

pub fn gen_champernowne() -> SymbolicSource {
    SymbolicSource::Champernowne(ChampernowneOrder::Words)
}

/// The classical constant 0.1 10 11 100 ..., concatenating numerals.
pub fn gen_champernowne_integers() -> SymbolicSource {
    SymbolicSource::Champernowne(ChampernowneOrder::Integers)
}

pub fn gen_pnormal(p: f64, seed: u64) -> Result<SymbolicSource> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidProbability(p.to_string()));
    }
    Ok(SymbolicSource::PNormal { p, seed })
}

/// Largest dyadic denominator exponent treated as degenerate for a rotation.
const DYADIC_GUARD_BITS: i32 = 32;

/// Sturmian coding of rotation by `alpha`. Values with a short dyadic
/// expansion (`alpha * 2^32` integral, e.g. `0.5`) code a periodic orbit and
/// are rejected.
pub fn gen_sturmian(alpha: f64, rho: f64) -> Result<SymbolicSource> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("rotation {alpha} outside (0, 1)")));
    }
    if !rho.is_finite() {
        return Err(Error::InvalidParameter(format!("phase {rho} is not finite")));
    }
    let scaled = alpha * 2f64.powi(DYADIC_GUARD_BITS);
    if scaled.fract() == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "rotation {alpha} is dyadic with denominator at most 2^{DYADIC_GUARD_BITS}; its coding is periodic"
        )));
    }
    Ok(SymbolicSource::Sturmian { alpha, rho })
}

pub fn gen_periodic(word: Word) -> SymbolicSource {
    SymbolicSource::Periodic(word)
}

pub fn gen_step(polarity: Polarity) -> SymbolicSource {
    SymbolicSource::Step(polarity)
}

pub fn gen_constant(bit: bool) -> SymbolicSource {
    SymbolicSource::Constant(bit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Champernowne,
    Pnormal,
    Sturmian,
    Periodic,
    Step,
    Constant,
}

/// JSON description of a source.
///
/// `order` (`"words"` | `"integers"`) selects the Champernowne enumeration;
/// `shift` and `complement` post-compose the generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    pub kind: SourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bit: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<bool>,
}

impl SourceSpec {
    pub fn of_kind(kind: SourceKind) -> Self {
        SourceSpec {
            kind,
            p: None,
            seed: None,
            alpha: None,
            rho: None,
            word: None,
            polarity: None,
            bit: None,
            order: None,
            shift: None,
            complement: None,
        }
    }

    pub fn build(&self) -> Result<SymbolicSource> {
        let missing = |field: &str| Error::InvalidParameter(format!("{:?} source needs {field:?}", self.kind));
        let base = match self.kind {
            SourceKind::Champernowne => match self.order.as_deref() {
                None | Some("words") => gen_champernowne(),
                Some("integers") => gen_champernowne_integers(),
                Some(other) => {
                    return Err(Error::InvalidParameter(format!("unknown champernowne order {other:?}")))
                }
            },
            SourceKind::Pnormal => gen_pnormal(self.p.ok_or_else(|| missing("p"))?, self.seed.unwrap_or(0))?,
            SourceKind::Sturmian => gen_sturmian(
                self.alpha.ok_or_else(|| missing("alpha"))?,
                self.rho.unwrap_or(0.0),
            )?,
            SourceKind::Periodic => gen_periodic(self.word.as_deref().ok_or_else(|| missing("word"))?.parse()?),
            SourceKind::Step => gen_step(match self.polarity.as_deref().unwrap_or("10") {
                "10" => Polarity::OnesThenZeros,
                "01" => Polarity::ZerosThenOnes,
                other => return Err(Error::InvalidParameter(format!("polarity {other:?}, expected \"10\" or \"01\""))),
            }),
            SourceKind::Constant => gen_constant(match self.bit.ok_or_else(|| missing("bit"))? {
                0 => false,
                1 => true,
                other => return Err(Error::InvalidParameter(format!("constant bit {other}"))),
            }),
        };
        let shifted = base.shift(self.shift.unwrap_or(0));
        Ok(if self.complement.unwrap_or(false) {
            shifted.complement()
        } else {
            shifted
        })
    }
}

/// Adjacency in the Cayley graph of `(ℤ, +, S)`: `x ~ y` iff `x != y` and `S(|x - y|) = 1`.
pub fn adjacent(graph: &SymbolicSource, x: i64, y: i64) -> bool {
    x != y && graph.eval((x - y).abs())
}

#[derive(Debug, Clone)]
pub struct RadoCayley {
    pub system: ShiftOrbitSystem,
    /// Words up to the checked length absent from `S` on `[1, window]`; empty when universal.
    pub missing_words: Vec<Word>,
}

/// Name under which the neighbourhood of `anchor` is registered.
pub fn neighbourhood_name(anchor: i64) -> String {
    format!("U_{anchor}")
}

/// Builds the Cayley-graph system for `S` with one neighbourhood set per anchor.
///
/// Universality of `S` is checked for word lengths up to `check_len` over
/// positive positions `[1, check_window]`; gaps are reported, not fatal.
pub fn rado_cayley(
    graph: SymbolicSource,
    anchors: impl IntoIterator<Item = i64>,
    check_len: usize,
    check_window: usize,
) -> Result<RadoCayley> {
    if check_len == 0 || check_len > 20 {
        return Err(Error::InvalidParameter(format!("universality check length {check_len}")));
    }
    let positive = graph.window(1, check_window as i64)?;
    let mut missing_words = Vec::new();
    for len in 1..=check_len.min(positive.len()) {
        let mut seen = vec![false; 1 << len];
        let mask = (1u64 << len) - 1;
        let mut code = 0u64;
        for (idx, &b) in positive.bits().iter().enumerate() {
            code = ((code << 1) | b as u64) & mask;
            if idx + 1 >= len {
                seen[code as usize] = true;
            }
        }
        missing_words.extend(
            seen.iter()
                .enumerate()
                .filter(|(_, &s)| !s)
                .map(|(c, _)| Word::from_code(c as u64, len)),
        );
    }
    let mut system = ShiftOrbitSystem::new();
    for anchor in anchors {
        system.insert_set(
            neighbourhood_name(anchor),
            MembershipRule::Neighbours {
                anchor,
                graph: graph.clone(),
            },
        );
        system.insert_anchor(format!("a{anchor}"), anchor);
    }
    Ok(RadoCayley { system, missing_words })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::BitSource;

    #[test]
    fn integer_champernowne_prefix() {
        let digits: Vec<bool> = (0..7).map(|k| champernowne_digit(ChampernowneOrder::Integers, k)).collect();
        assert_eq!(digits, [true, true, false, true, true, true, false]);
        // "1" "10" "11" "100" "101": digits 7..=12
        let more: Vec<bool> = (7..13).map(|k| champernowne_digit(ChampernowneOrder::Integers, k)).collect();
        assert_eq!(more, [false, true, false, true, true, true]);
    }

    #[test]
    fn word_champernowne_prefix() {
        // 0 1 00 01 10 11 000 ...
        let expect = "01000110110000";
        let got: String = (0..expect.len() as u64)
            .map(|k| if champernowne_digit(ChampernowneOrder::Words, k) { '1' } else { '0' })
            .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn champernowne_is_mirrored() {
        let src = gen_champernowne();
        for i in 0..500 {
            assert_eq!(src.eval(i), src.eval(-i));
        }
    }

    #[test]
    fn champernowne_is_universal_early() {
        let src = gen_champernowne();
        let win = src.window(0, 10_000).unwrap();
        for len in 1..=8 {
            for word in Word::all_of_length(len) {
                assert!(
                    win.bits().windows(len).any(|b| b == word.bits()),
                    "{word} missing"
                );
            }
        }
    }

    #[test]
    fn splitmix_reference_values() {
        // First outputs of SplitMix64 seeded with 0.
        assert_eq!(splitmix64(0, 0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(0, 1), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn pnormal_is_deterministic() {
        let a = gen_pnormal(0.3, 7).unwrap().symmetric_window(200).unwrap();
        let b = gen_pnormal(0.3, 7).unwrap().symmetric_window(200).unwrap();
        assert_eq!(a, b);
        let c = gen_pnormal(0.3, 8).unwrap().symmetric_window(200).unwrap();
        assert_ne!(a, c);
        assert!(gen_pnormal(1.0, 0).is_err());
        assert!(gen_pnormal(0.0, 0).is_err());
        assert!(gen_pnormal(f64::NAN, 0).is_err());
    }

    #[test]
    fn sturmian_rejects_dyadic() {
        assert!(gen_sturmian(0.5, 0.0).is_err());
        assert!(gen_sturmian(0.25, 0.0).is_err());
        assert!(gen_sturmian(1.2, 0.0).is_err());
        assert!(gen_sturmian((5f64.sqrt() - 1.0) / 2.0, 0.0).is_ok());
    }

    #[test]
    fn sturmian_block_census() {
        let alpha = (5f64.sqrt() - 1.0) / 2.0;
        let src = gen_sturmian(alpha, 0.0).unwrap();
        let win = src.symmetric_window(10_000).unwrap();
        for n in 1..=12 {
            let blocks: std::collections::HashSet<&[bool]> = win.bits().windows(n).collect();
            assert!(blocks.len() <= n + 1 + 2, "n = {n}: {} blocks", blocks.len());
        }
        let ones = win.ones() as f64 / win.len() as f64;
        assert!((ones - alpha).abs() < 0.01);
    }

    #[test]
    fn simple_generators() {
        let step = gen_step(Polarity::OnesThenZeros);
        assert!(step.eval(0));
        assert!(!step.eval(1));
        let per = gen_periodic("10".parse().unwrap());
        for k in -20..20 {
            assert!(per.eval(2 * k));
            assert!(!per.eval(2 * k + 1));
        }
        assert_eq!(gen_constant(true), SymbolicSource::Constant(true));
    }

    #[test]
    fn spec_json() {
        let spec: SourceSpec = serde_json::from_str(r#"{"kind":"periodic","word":"0101","shift":1}"#).unwrap();
        let src = spec.build().unwrap();
        assert!(src.eval(0));
        let spec: SourceSpec = serde_json::from_str(r#"{"kind":"step","polarity":"01"}"#).unwrap();
        assert_eq!(spec.build().unwrap(), gen_step(Polarity::ZerosThenOnes));
        let bad: SourceSpec = serde_json::from_str(r#"{"kind":"pnormal"}"#).unwrap();
        assert!(bad.build().is_err());
        assert!(serde_json::from_str::<SourceSpec>(r#"{"kind":"step","bogus":1}"#).is_err());
    }

    #[test]
    fn rado_neighbourhoods() {
        let rado = rado_cayley(gen_champernowne(), -2..=2, 6, 20_000).unwrap();
        assert!(rado.missing_words.is_empty());
        let g = gen_champernowne();
        for x in -30..30 {
            assert!(!adjacent(&g, x, x));
            for y in -30..30 {
                assert_eq!(adjacent(&g, x, y), adjacent(&g, y, x));
                assert_eq!(adjacent(&g, x, y), adjacent(&g, x + 1, y + 1));
            }
        }
        let per = rado_cayley(gen_periodic("10".parse().unwrap()), [0], 3, 1000).unwrap();
        assert!(!per.missing_words.is_empty());
    }
}
