//! Words, windows and symbolic sources over the two-sided binary shift.
//!
//! Two index conventions meet here. A [`Word`] is indexed `1..=len`, the way
//! cylinders are written; a [`BitWindow`] and a [`SymbolicSource`] are indexed
//! by arbitrary integers. [`cylinder_contains`] is the one place where the two
//! are compared directly.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::Num;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gen;

/// A nonempty finite binary word, indexed from 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<bool>);

impl Word {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit at 1-based position `j`.
    pub fn get(&self, j: usize) -> bool {
        assert!(j >= 1 && j <= self.0.len(), "word index {j} out of 1..={}", self.0.len());
        self.0[j - 1]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn zeros(&self) -> usize {
        self.len() - self.ones()
    }

    /// `self · bit`.
    pub fn push(&self, bit: bool) -> Word {
        let mut bits = self.0.clone();
        bits.push(bit);
        Word(bits)
    }

    /// All `2^len` words of the given length in lexicographic order.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        assert!((1..=24).contains(&len), "word length {len} out of enumerable range");
        (0u32..(1u32 << len)).map(move |code| Word::from_code(code as u64, len))
    }

    /// Word whose bits are the `len` low bits of `code`, most significant first.
    pub fn from_code(code: u64, len: usize) -> Word {
        Word((0..len).map(|t| (code >> (len - 1 - t)) & 1 == 1).collect())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::new(parse_bits(s.trim())?)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bits_to_string(&self.0))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub(crate) fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::InvalidBit(other)),
        })
        .collect()
}

pub(crate) fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Anything that can be read at integer positions.
///
/// `bit_at` returns `None` where the sequence is not known; symbolic sources
/// are total, windows only know their own span.
pub trait BitSource {
    fn bit_at(&self, i: i64) -> Option<bool>;

    /// Materializes `[lo, hi]`, failing if any position is unknown.
    fn window(&self, lo: i64, hi: i64) -> Result<BitWindow> {
        assert!(lo <= hi, "empty span [{lo}, {hi}]");
        let mut bits = Vec::with_capacity((hi - lo + 1) as usize);
        for i in lo..=hi {
            match self.bit_at(i) {
                Some(b) => bits.push(b),
                None => return Err(self.coverage_error(lo, hi)),
            }
        }
        Ok(BitWindow { lo, bits })
    }

    fn symmetric_window(&self, radius: usize) -> Result<BitWindow> {
        let n = radius as i64;
        self.window(-n, n)
    }

    fn coverage_error(&self, lo: i64, hi: i64) -> Error {
        Error::Coverage {
            need_lo: lo,
            need_hi: hi,
            have_lo: i64::MIN,
            have_hi: i64::MAX,
        }
    }
}

/// A finite slice `[lo, hi]` of a binary ℤ-sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitWindow {
    lo: i64,
    bits: Vec<bool>,
}

impl BitWindow {
    pub fn new(lo: i64, bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(BitWindow { lo, bits })
    }

    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> bool) -> Self {
        assert!(lo <= hi, "empty span [{lo}, {hi}]");
        BitWindow {
            lo,
            bits: (lo..=hi).map(f).collect(),
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.bits.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: i64) -> Option<bool> {
        if i < self.lo || i > self.hi() {
            None
        } else {
            Some(self.bits[(i - self.lo) as usize])
        }
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        self.lo <= lo && hi <= self.hi()
    }

    pub fn require(&self, lo: i64, hi: i64) -> Result<()> {
        if self.covers(lo, hi) {
            Ok(())
        } else {
            Err(BitSource::coverage_error(self, lo, hi))
        }
    }

    /// The largest `n` with `[-n, n]` inside the window, if the window contains 0.
    pub fn symmetric_radius(&self) -> Option<usize> {
        if self.lo > 0 || self.hi() < 0 {
            None
        } else {
            Some((-self.lo).min(self.hi()) as usize)
        }
    }

    pub fn slice(&self, lo: i64, hi: i64) -> Result<BitWindow> {
        self.require(lo, hi)?;
        let a = (lo - self.lo) as usize;
        let b = (hi - self.lo) as usize;
        Ok(BitWindow {
            lo,
            bits: self.bits[a..=b].to_vec(),
        })
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn zeros(&self) -> usize {
        self.len() - self.ones()
    }

    /// `(I + a)(i) = I(i - a)`: the bits move right by `a`, bounds follow.
    pub fn shift(&self, a: i64) -> BitWindow {
        BitWindow {
            lo: self.lo + a,
            bits: self.bits.clone(),
        }
    }

    pub fn complement(&self) -> BitWindow {
        BitWindow {
            lo: self.lo,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Swaps positions `k` and `k + 1`.
    pub fn switch_at(&self, k: i64) -> Result<BitWindow> {
        if k < self.lo || k + 1 > self.hi() {
            return Err(Error::OutOfBounds(if k < self.lo { k } else { k + 1 }));
        }
        let mut bits = self.bits.clone();
        let idx = (k - self.lo) as usize;
        bits.swap(idx, idx + 1);
        Ok(BitWindow { lo: self.lo, bits })
    }

    /// Reads the sequence text format: optional `# origin=<int>` header, then
    /// one line of `0`/`1` characters whose first character sits at `origin`.
    pub fn parse(text: &str) -> Result<BitWindow> {
        let mut origin = 0i64;
        let mut body: Option<(usize, &str)> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if body.is_some() {
                    return Err(parse_err(line_no, "header after sequence data"));
                }
                let rest = rest.trim();
                let value = rest
                    .strip_prefix("origin=")
                    .ok_or_else(|| parse_err(line_no, format!("unrecognized header {line:?}")))?;
                origin = value
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("origin {value:?} is not an integer")))?;
                continue;
            }
            if body.is_some() {
                return Err(parse_err(line_no, "more than one sequence line"));
            }
            body = Some((line_no, line));
        }
        let (line_no, line) = body.ok_or_else(|| parse_err(1, "no sequence line"))?;
        let bits = line.chars().enumerate().map(|(col, c)| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(parse_err(line_no, format!("column {}: invalid character {other:?}", col + 1))),
        });
        BitWindow::new(origin, bits.collect::<Result<_>>()?)
    }

    pub fn to_text(&self) -> String {
        format!("# origin={}\n{}\n", self.lo, bits_to_string(&self.bits))
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

impl BitSource for BitWindow {
    fn bit_at(&self, i: i64) -> Option<bool> {
        self.get(i)
    }

    fn window(&self, lo: i64, hi: i64) -> Result<BitWindow> {
        self.slice(lo, hi)
    }

    fn coverage_error(&self, lo: i64, hi: i64) -> Error {
        Error::Coverage {
            need_lo: lo,
            need_hi: hi,
            have_lo: self.lo,
            have_hi: self.hi(),
        }
    }
}

impl fmt::Display for BitWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}..{}] {}", self.lo, self.hi(), bits_to_string(&self.bits))
    }
}

impl Serialize for BitWindow {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("BitWindow", 3)?;
        st.serialize_field("lo", &self.lo)?;
        st.serialize_field("hi", &self.hi())?;
        st.serialize_field("bits", &bits_to_string(&self.bits))?;
        st.end()
    }
}

/// Which step sequence: `OnesThenZeros` is 1 on `i <= 0`, `ZerosThenOnes` is 1 on `i > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    OnesThenZeros,
    ZerosThenOnes,
}

/// Enumeration order behind the Champernowne digit stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ChampernowneOrder {
    /// Every binary word, shortest first, lexicographic within a length: 0, 1, 00, 01, ...
    #[default]
    Words,
    /// Binary numerals of 1, 2, 3, ...: 1, 10, 11, 100, ...
    Integers,
}

/// A total, deterministic rule `ℤ → {0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolicSource {
    Champernowne(ChampernowneOrder),
    PNormal { p: f64, seed: u64 },
    Sturmian { alpha: f64, rho: f64 },
    Periodic(Word),
    Step(Polarity),
    Constant(bool),
    Shifted { inner: Box<SymbolicSource>, by: i64 },
    Complement(Box<SymbolicSource>),
    Switched { inner: Box<SymbolicSource>, at: i64 },
}

impl SymbolicSource {
    pub fn eval(&self, i: i64) -> bool {
        match self {
            SymbolicSource::Champernowne(order) => gen::champernowne_digit(*order, i.unsigned_abs()),
            SymbolicSource::PNormal { p, seed } => gen::pnormal_digit(*p, *seed, i.unsigned_abs()),
            SymbolicSource::Sturmian { alpha, rho } => gen::sturmian_bit(*alpha, *rho, i),
            SymbolicSource::Periodic(word) => word.bits()[i.rem_euclid(word.len() as i64) as usize],
            SymbolicSource::Step(Polarity::OnesThenZeros) => i <= 0,
            SymbolicSource::Step(Polarity::ZerosThenOnes) => i > 0,
            SymbolicSource::Constant(bit) => *bit,
            SymbolicSource::Shifted { inner, by } => inner.eval(i - by),
            SymbolicSource::Complement(inner) => !inner.eval(i),
            SymbolicSource::Switched { inner, at } => {
                if i == *at {
                    inner.eval(at + 1)
                } else if i == at + 1 {
                    inner.eval(*at)
                } else {
                    inner.eval(i)
                }
            }
        }
    }

    /// `(I + a)(i) = I(i - a)`.
    pub fn shift(&self, a: i64) -> SymbolicSource {
        match (self, a) {
            (_, 0) => self.clone(),
            (SymbolicSource::Shifted { inner, by }, _) if by + a == 0 => (**inner).clone(),
            (SymbolicSource::Shifted { inner, by }, _) => SymbolicSource::Shifted {
                inner: inner.clone(),
                by: by + a,
            },
            _ => SymbolicSource::Shifted {
                inner: Box::new(self.clone()),
                by: a,
            },
        }
    }

    pub fn complement(&self) -> SymbolicSource {
        match self {
            SymbolicSource::Complement(inner) => (**inner).clone(),
            SymbolicSource::Constant(bit) => SymbolicSource::Constant(!bit),
            _ => SymbolicSource::Complement(Box::new(self.clone())),
        }
    }

    /// Swaps the values at `k` and `k + 1`; `switch_at(0)` is the basic switching map.
    pub fn switch_at(&self, k: i64) -> SymbolicSource {
        match self {
            SymbolicSource::Switched { inner, at } if *at == k => (**inner).clone(),
            _ => SymbolicSource::Switched {
                inner: Box::new(self.clone()),
                at: k,
            },
        }
    }
}

impl BitSource for SymbolicSource {
    fn bit_at(&self, i: i64) -> Option<bool> {
        Some(self.eval(i))
    }
}

impl<S: BitSource + ?Sized> BitSource for &S {
    fn bit_at(&self, i: i64) -> Option<bool> {
        (**self).bit_at(i)
    }

    fn window(&self, lo: i64, hi: i64) -> Result<BitWindow> {
        (**self).window(lo, hi)
    }

    fn coverage_error(&self, lo: i64, hi: i64) -> Error {
        (**self).coverage_error(lo, hi)
    }
}

/// Cantor distance `2^-t`, `t` the smallest `|i|` where two sequences differ.
///
/// `AgreeTo(L)` records that no difference was seen in `[-L, L]`; it orders
/// below every `Exact` value and evaluates to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CantorDistance {
    Exact { exponent: u32 },
    AgreeTo(u32),
}

impl CantorDistance {
    /// `2^-t` in any numeric type, exact for rationals; `AgreeTo` maps to zero.
    pub fn value<T: Num + Clone>(&self) -> T {
        match self {
            CantorDistance::AgreeTo(_) => T::zero(),
            CantorDistance::Exact { exponent } => {
                let two = T::one() + T::one();
                let mut denom = T::one();
                for _ in 0..*exponent {
                    denom = denom * two.clone();
                }
                T::one() / denom
            }
        }
    }
}

impl Ord for CantorDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (CantorDistance::AgreeTo(_), CantorDistance::AgreeTo(_)) => Ordering::Equal,
            (CantorDistance::AgreeTo(_), CantorDistance::Exact { .. }) => Ordering::Less,
            (CantorDistance::Exact { .. }, CantorDistance::AgreeTo(_)) => Ordering::Greater,
            (CantorDistance::Exact { exponent: a }, CantorDistance::Exact { exponent: b }) => b.cmp(a),
        }
    }
}

impl PartialOrd for CantorDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CantorDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CantorDistance::Exact { exponent } => write!(f, "2^-{exponent}"),
            CantorDistance::AgreeTo(l) => write!(f, "agree-to-{l}"),
        }
    }
}

pub fn cantor_distance(x: &BitWindow, y: &BitWindow, radius: u32) -> Result<CantorDistance> {
    let l = radius as i64;
    x.require(-l, l)?;
    y.require(-l, l)?;
    for t in 0..=l {
        if x.get(t) != y.get(t) || x.get(-t) != y.get(-t) {
            return Ok(CantorDistance::Exact { exponent: t as u32 });
        }
    }
    Ok(CantorDistance::AgreeTo(radius))
}

/// Is `x` in the cylinder `[W]`, i.e. `x(i) = W(i)` for `i = 1..=|W|`?
pub fn cylinder_contains(word: &Word, x: &BitWindow) -> Result<bool> {
    x.require(1, word.len() as i64)?;
    Ok((1..=word.len()).all(|j| x.get(j as i64) == Some(word.get(j))))
}

/// One step of the shift/switch search. Switch positions are in the
/// coordinates of the window the move is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "move", content = "at", rename_all = "lowercase")]
pub enum Move {
    Shift(i64),
    Switch(i64),
}

impl Move {
    pub fn apply(&self, window: &BitWindow) -> Result<BitWindow> {
        match *self {
            Move::Shift(a) => Ok(window.shift(a)),
            Move::Switch(k) => window.switch_at(k),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Shift(a) => write!(f, "shift({a:+})"),
            Move::Switch(k) => write!(f, "switch({k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ReachOutcome {
    Found { moves: Vec<Move>, explored: usize },
    BudgetExhausted { explored: usize },
}

pub fn replay(start: &BitWindow, moves: &[Move]) -> Result<BitWindow> {
    moves.iter().try_fold(start.clone(), |w, m| m.apply(&w))
}

/// Breadth-first search over unit shifts and adjacent switches for a window
/// whose positions `1..=|target|` read `target`.
///
/// Moves are tried in `Move` order, so among shortest paths the search is
/// deterministic. `max_steps` bounds the number of expanded states.
pub fn sw_reach(start: &BitWindow, target: &Word, max_steps: usize) -> Result<ReachOutcome> {
    let t = target.len() as i64;
    if start.ones() < target.ones() || start.zeros() < target.zeros() {
        return Err(Error::Infeasible {
            need_ones: target.ones(),
            need_zeros: target.zeros(),
            have_ones: start.ones(),
            have_zeros: start.zeros(),
        });
    }
    let len = start.len() as i64;
    if len < t {
        return Err(Error::Coverage {
            need_lo: 1,
            need_hi: t,
            have_lo: start.lo(),
            have_hi: start.hi(),
        });
    }
    let matches = |lo: i64, bits: &[bool]| -> bool {
        lo <= 1 && lo + len > t && (1..=t).all(|j| bits[(j - lo) as usize] == target.get(j as usize))
    };

    // Shifts only relabel positions, so a state is (lo, bits).
    struct Node {
        lo: i64,
        bits: Vec<bool>,
        parent: usize,
        mv: Option<Move>,
    }
    let mut nodes = vec![Node {
        lo: start.lo(),
        bits: start.bits().to_vec(),
        parent: usize::MAX,
        mv: None,
    }];
    let mut seen: HashMap<(i64, Vec<bool>), usize> = HashMap::new();
    seen.insert((start.lo(), start.bits().to_vec()), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut explored = 0usize;

    let path_to = |nodes: &[Node], mut idx: usize| -> Vec<Move> {
        let mut moves = Vec::new();
        while let Some(mv) = nodes[idx].mv {
            moves.push(mv);
            idx = nodes[idx].parent;
        }
        moves.reverse();
        moves
    };

    if matches(start.lo(), start.bits()) {
        return Ok(ReachOutcome::Found {
            moves: Vec::new(),
            explored,
        });
    }

    while let Some(idx) = queue.pop_front() {
        if explored >= max_steps {
            return Ok(ReachOutcome::BudgetExhausted { explored });
        }
        explored += 1;
        let lo = nodes[idx].lo;
        let mut candidates: Vec<(Move, i64, Vec<bool>)> = Vec::new();
        for a in [-1i64, 1] {
            let nlo = lo + a;
            if nlo <= 1 && nlo + len > t {
                candidates.push((Move::Shift(a), nlo, nodes[idx].bits.clone()));
            }
        }
        for off in 0..(len as usize - 1) {
            let bits = &nodes[idx].bits;
            if bits[off] != bits[off + 1] {
                let mut next = bits.clone();
                next.swap(off, off + 1);
                candidates.push((Move::Switch(lo + off as i64), lo, next));
            }
        }
        for (mv, nlo, bits) in candidates {
            let key = (nlo, bits);
            if seen.contains_key(&key) {
                continue;
            }
            let child = nodes.len();
            seen.insert(key.clone(), child);
            let done = matches(nlo, &key.1);
            nodes.push(Node {
                lo: nlo,
                bits: key.1,
                parent: idx,
                mv: Some(mv),
            });
            if done {
                return Ok(ReachOutcome::Found {
                    moves: path_to(&nodes, child),
                    explored,
                });
            }
            queue.push_back(child);
        }
    }
    Ok(ReachOutcome::BudgetExhausted { explored })
}

/// Finite shadow of orbit-closure membership: does the central block
/// `x[-L..=L]` occur somewhere in `J` restricted to `[-scan, scan]`?
///
/// Every shorter central block is a sub-block of that one, so a single
/// search settles all lengths up to `2L + 1`.
pub fn closure_contains<S: BitSource + ?Sized>(
    source: &S,
    x: &BitWindow,
    radius: usize,
    scan: usize,
) -> Result<bool> {
    let l = radius as i64;
    x.require(-l, l)?;
    if scan < 2 * radius + 1 {
        return Err(Error::InvalidParameter(format!(
            "scan window {scan} smaller than block length {}",
            2 * radius + 1
        )));
    }
    let hay = source.symmetric_window(scan)?;
    let pattern = x.slice(-l, l)?;
    Ok(hay.bits().windows(pattern.len()).any(|w| w == pattern.bits()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn step() -> SymbolicSource {
        SymbolicSource::Step(Polarity::OnesThenZeros)
    }

    #[test]
    fn empty_word_rejected() {
        assert_eq!(Word::new(vec![]), Err(Error::EmptyWord));
        assert!("".parse::<Word>().is_err());
        assert_eq!("012".parse::<Word>(), Err(Error::InvalidBit('2')));
    }

    #[test]
    fn word_is_one_indexed() {
        let word = w("100");
        assert!(word.get(1));
        assert!(!word.get(3));
        assert_eq!(word.ones(), 1);
        assert_eq!(word.zeros(), 2);
    }

    #[test]
    fn shifted_step() {
        let s = step().shift(1);
        for i in -10..10 {
            assert_eq!(s.eval(i), i <= 1, "i = {i}");
        }
        assert_eq!(step().shift(0), step());
        assert_eq!(step().shift(4).shift(-4), step());
    }

    #[test]
    fn complement_of_step_is_reverse_step() {
        let c = step().complement();
        let rev = SymbolicSource::Step(Polarity::ZerosThenOnes);
        for i in -10..10 {
            assert_eq!(c.eval(i), rev.eval(i));
        }
        assert_eq!(SymbolicSource::Constant(false).complement(), SymbolicSource::Constant(true));
        assert_eq!(step().complement().complement(), step());
    }

    #[test]
    fn switch_on_step() {
        let sw = step().switch_at(0);
        assert!(!sw.eval(0));
        assert!(sw.eval(1));
        for i in (-10..10).filter(|&i| i != 0 && i != 1) {
            assert_eq!(sw.eval(i), step().eval(i));
        }
        assert_eq!(sw.switch_at(0), step());
    }

    #[test]
    fn window_switch_bounds() {
        let win = BitWindow::new(-2, vec![false, true, true, false]).unwrap();
        assert_eq!(win.switch_at(-2).unwrap().bits(), &[true, false, true, false]);
        assert_eq!(win.switch_at(1), Err(Error::OutOfBounds(2)));
        assert_eq!(win.switch_at(-3), Err(Error::OutOfBounds(-3)));
        let back = win.switch_at(0).unwrap().switch_at(0).unwrap();
        assert_eq!(back, win);
    }

    #[test]
    fn window_shift_moves_bounds() {
        let win = step().window(-3, 3).unwrap();
        let moved = win.shift(2);
        assert_eq!((moved.lo(), moved.hi()), (-1, 5));
        for i in -3..=3 {
            assert_eq!(moved.get(i + 2), win.get(i));
        }
    }

    #[test]
    fn distance_of_steps_is_one() {
        let a = step().symmetric_window(5).unwrap();
        let b = SymbolicSource::Step(Polarity::ZerosThenOnes).symmetric_window(5).unwrap();
        let d = cantor_distance(&a, &b, 5).unwrap();
        assert_eq!(d, CantorDistance::Exact { exponent: 0 });
        assert_eq!(d.value::<f64>(), 1.0);
        assert_eq!(cantor_distance(&a, &a, 5).unwrap(), CantorDistance::AgreeTo(5));
    }

    #[test]
    fn distance_after_far_switch() {
        // J(4) != J(5) on this word, so the switch first differs at |i| = 4.
        let j = SymbolicSource::Periodic(w("0110")).symmetric_window(10).unwrap();
        assert_ne!(j.get(4), j.get(5));
        let sw = j.switch_at(4).unwrap();
        let d = cantor_distance(&j, &sw, 10).unwrap();
        assert_eq!(d, CantorDistance::Exact { exponent: 4 });
        let exact: num_rational::Ratio<i64> = d.value();
        assert_eq!(exact, num_rational::Ratio::new(1, 16));
    }

    #[test]
    fn distance_needs_coverage() {
        let a = step().window(-2, 5).unwrap();
        assert!(matches!(cantor_distance(&a, &a, 3), Err(Error::Coverage { .. })));
    }

    #[test]
    fn cylinders() {
        let x = BitWindow::new(0, vec![false, true, false, true]).unwrap();
        assert!(cylinder_contains(&w("101"), &x).unwrap());
        let zeros = SymbolicSource::Constant(false).symmetric_window(3).unwrap();
        assert!(!cylinder_contains(&w("1"), &zeros).unwrap());
        assert!(cylinder_contains(&w("1"), &BitWindow::new(2, vec![true]).unwrap()).is_err());
    }

    #[test]
    fn reach_immediate_and_short() {
        let start = step().symmetric_window(8).unwrap();
        match sw_reach(&start, &w("00"), 1000).unwrap() {
            ReachOutcome::Found { moves, .. } => assert!(moves.is_empty()),
            other => panic!("{other:?}"),
        }
        match sw_reach(&start, &w("10"), 1000).unwrap() {
            ReachOutcome::Found { moves, .. } => {
                assert_eq!(moves, vec![Move::Shift(1)]);
            }
            other => panic!("{other:?}"),
        }
        match sw_reach(&start, &w("01"), 1000).unwrap() {
            ReachOutcome::Found { moves, .. } => {
                let end = replay(&start, &moves).unwrap();
                assert!(cylinder_contains(&w("01"), &end).unwrap());
                assert!(moves.len() <= 3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reach_infeasible_count() {
        let start = SymbolicSource::Constant(false).symmetric_window(4).unwrap();
        assert!(matches!(sw_reach(&start, &w("1"), 100), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn reach_budget() {
        let start = step().symmetric_window(16).unwrap();
        assert_eq!(
            sw_reach(&start, &w("010101"), 3).unwrap(),
            ReachOutcome::BudgetExhausted { explored: 3 }
        );
    }

    #[test]
    fn closure_membership_examples() {
        let periodic = SymbolicSource::Periodic(w("10"));
        let ones = SymbolicSource::Constant(true).symmetric_window(3).unwrap();
        assert!(!closure_contains(&periodic, &ones, 3, 50).unwrap());
        let other = SymbolicSource::Periodic(w("01")).symmetric_window(3).unwrap();
        assert!(closure_contains(&periodic, &other, 3, 50).unwrap());
        assert!(closure_contains(&periodic, &other, 3, 5).is_err());
    }

    #[test]
    fn sequence_text_roundtrip() {
        let win = BitWindow::new(-3, vec![true, false, false, true, true]).unwrap();
        assert_eq!(BitWindow::parse(&win.to_text()).unwrap(), win);
        let plain = BitWindow::parse("0110\n").unwrap();
        assert_eq!(plain.lo(), 0);
        assert_eq!(plain.bits(), &[false, true, true, false]);
    }

    #[test]
    fn sequence_text_errors_name_line() {
        match BitWindow::parse("# origin=2\n01x1\n") {
            Err(Error::Parse { line: 2, message }) => assert!(message.contains("'x'")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(BitWindow::parse("# origin=a\n01\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(BitWindow::parse("01\n10\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(BitWindow::parse("\n"), Err(Error::Parse { .. })));
    }
}
