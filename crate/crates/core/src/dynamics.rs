//! ℤ-shift and finite-permutation dynamical systems, symbolic images and entropy.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freq::{self, FrequencyEstimate};
use crate::gen::SourceSpec;
use crate::scalar::{fixed6, Scalar};
use crate::seqcore::{BitSource, BitWindow, SymbolicSource, Word};

/// Membership rule for a named subset of ℤ.
#[derive(Debug, Clone, PartialEq)]
pub enum MembershipRule {
    /// `x ∈ U` iff the source reads 1 at `x`.
    Source(SymbolicSource),
    AtMost(i64),
    AtLeast(i64),
    All,
    Empty,
    Labels(BTreeSet<i64>),
    /// Neighbourhood of `anchor` in the Cayley graph of `(ℤ, +, graph)`.
    Neighbours { anchor: i64, graph: SymbolicSource },
}

impl MembershipRule {
    pub fn contains(&self, x: i64) -> bool {
        match self {
            MembershipRule::Source(src) => src.eval(x),
            MembershipRule::AtMost(k) => x <= *k,
            MembershipRule::AtLeast(k) => x >= *k,
            MembershipRule::All => true,
            MembershipRule::Empty => false,
            MembershipRule::Labels(set) => set.contains(&x),
            MembershipRule::Neighbours { anchor, graph } => crate::gen::adjacent(graph, x, *anchor),
        }
    }
}

/// Labels are the integers and the transformation is `x ↦ x + 1`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ShiftOrbitSystem {
    sets: BTreeMap<String, MembershipRule>,
    anchors: BTreeMap<String, i64>,
}

impl ShiftOrbitSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert_set(&mut self, name: impl Into<String>, rule: MembershipRule) {
        self.sets.insert(name.into(), rule);
    }

    pub fn with_set(mut self, name: impl Into<String>, rule: MembershipRule) -> Self {
        self.insert_set(name, rule);
        self
    }

    pub fn insert_anchor(&mut self, name: impl Into<String>, label: i64) {
        self.anchors.insert(name.into(), label);
    }

    pub fn set(&self, name: &str) -> Result<&MembershipRule> {
        self.sets.get(name).ok_or_else(|| Error::UnknownSet(name.to_string()))
    }

    pub fn set_names(&self) -> impl Iterator<Item = &str> {
        self.sets.keys().map(String::as_str)
    }

    pub fn anchor(&self, name: &str) -> Option<i64> {
        self.anchors.get(name).copied()
    }

    pub fn anchors(&self) -> &BTreeMap<String, i64> {
        &self.anchors
    }

    pub fn successor(&self, x: i64) -> i64 {
        x + 1
    }

    pub fn predecessor(&self, x: i64) -> i64 {
        x - 1
    }

    pub fn contains(&self, name: &str, x: i64) -> Result<bool> {
        Ok(self.set(name)?.contains(x))
    }
}

/// Symbolic image of `point` under the shift: bit `i` is 1 iff `σ^i(point) ∈ U`.
pub fn xi(system: &ShiftOrbitSystem, point: i64, set: &str, radius: usize) -> Result<BitWindow> {
    let n = radius as i64;
    xi_span(system, point, set, -n, n)
}

pub fn xi_span(system: &ShiftOrbitSystem, point: i64, set: &str, lo: i64, hi: i64) -> Result<BitWindow> {
    let rule = system.set(set)?;
    Ok(BitWindow::from_fn(lo, hi, |i| rule.contains(point + i)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Language {
    pub block_length: usize,
    pub words: BTreeSet<Word>,
    /// Every word of the block length occurs.
    pub dense: bool,
}

/// Union of length-`L` blocks over the symbolic images of the given inputs.
pub fn rho_language(inputs: &[(&ShiftOrbitSystem, i64, &str)], block_length: usize, radius: usize) -> Result<Language> {
    if block_length == 0 || block_length > 2 * radius + 1 || block_length > 24 {
        return Err(Error::InvalidParameter(format!("block length {block_length} for radius {radius}")));
    }
    let mut words = BTreeSet::new();
    for (system, point, set) in inputs {
        let win = xi(system, *point, set, radius)?;
        for block in win.bits().windows(block_length) {
            words.insert(Word::new(block.to_vec())?);
        }
    }
    let dense = words.len() == 1usize << block_length;
    Ok(Language {
        block_length,
        words,
        dense,
    })
}

/// Estimate of the pushforward measure of the cylinder `[W]`: the occurrence
/// density of `W` in the symbolic image of `point`.
pub fn pushforward_cylinder<T: Scalar>(
    system: &ShiftOrbitSystem,
    point: i64,
    set: &str,
    word: &Word,
    radius: usize,
) -> Result<FrequencyEstimate<T>> {
    let win = xi(system, point, set, radius)?;
    Ok(freq::occurrences(word, &win, radius)?.estimate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompactEntry<T: Scalar> {
    pub best_n: usize,
    #[serde(serialize_with = "fixed6")]
    pub symdiff: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompactnessReport<T: Scalar> {
    #[serde(serialize_with = "fixed6")]
    pub epsilon: T,
    pub max_n: usize,
    pub per_set: BTreeMap<String, CompactEntry<T>>,
    /// True iff every set returns within `epsilon` for some `1 <= n <= max_n`.
    /// False means "not compact at this budget".
    pub verdict: bool,
}

/// For each set, the smallest `μ(σ^n(U) △ U)` over `1 <= n <= max_n`, measured
/// along the orbit of label 0 at radius `N`.
pub fn compact_check<T: Scalar>(
    system: &ShiftOrbitSystem,
    sets: &[&str],
    epsilon: T,
    max_n: usize,
    radius: usize,
) -> Result<CompactnessReport<T>> {
    if max_n == 0 || max_n >= radius {
        return Err(Error::InvalidParameter(format!("need 1 <= max n ({max_n}) < radius ({radius})")));
    }
    let n = radius as i64;
    let m = max_n as i64;
    let total = 2 * radius + 1;
    let mut per_set = BTreeMap::new();
    for &name in sets {
        // x ∈ σ^k(U) iff x - k ∈ U.
        let win = xi_span(system, 0, name, -n - m, n)?;
        let bits = win.bits();
        let base = m as usize;
        let mut best: Option<CompactEntry<T>> = None;
        for k in 1..=max_n {
            let diff = (0..total).filter(|&t| bits[base + t] != bits[base + t - k]).count();
            let d = T::ratio(diff, total);
            if best.is_none_or(|b| d < b.symdiff) {
                best = Some(CompactEntry { best_n: k, symdiff: d });
            }
        }
        per_set.insert(name.to_string(), best.expect("max_n >= 1"));
    }
    let verdict = per_set.values().all(|e| e.symdiff < epsilon);
    Ok(CompactnessReport {
        epsilon,
        max_n,
        per_set,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EntropyEstimate<T: Scalar> {
    pub block_length: usize,
    #[serde(serialize_with = "fixed6")]
    pub block_entropy: T,
    #[serde(serialize_with = "fixed6")]
    pub rate: T,
    pub distinct_blocks: usize,
}

/// `-Σ p log2 p` with `0 log 0 = 0`.
pub fn partition_entropy<T: Scalar>(masses: &[T]) -> Result<T> {
    if masses.is_empty() {
        return Err(Error::InvalidDistribution("no masses".into()));
    }
    if let Some(bad) = masses.iter().find(|m| !(**m >= T::zero())) {
        return Err(Error::InvalidDistribution(format!("negative or undefined mass {bad}")));
    }
    let sum = masses.iter().fold(T::zero(), |a, &m| a + m);
    if (sum - T::one()).abs() > T::lit(1e-9) {
        return Err(Error::InvalidDistribution(format!("masses sum to {sum}")));
    }
    Ok(masses
        .iter()
        .filter(|m| **m > T::zero())
        .fold(T::zero(), |h, &m| h - m * m.log2()))
}

fn entropy_of_counts<T: Scalar>(counts: impl Iterator<Item = usize>, total: usize) -> T {
    counts.filter(|&c| c > 0).fold(T::zero(), |h, c| {
        let q = T::ratio(c, total);
        h - q * q.log2()
    })
}

/// Empirical entropy of length-`n` blocks.
///
/// Blocks start at every position of `[-N, N - 1]` (2N starts) and read
/// forward, so the source must be known on `[-N, N + n - 2]`. Using the same
/// starts for every `n` makes `H_n` nondecreasing in `n` exactly.
pub fn block_entropy<T: Scalar, S: BitSource + ?Sized>(source: &S, n: usize, radius: usize) -> Result<EntropyEstimate<T>> {
    if !(1..=16).contains(&n) {
        return Err(Error::InvalidParameter(format!("block length {n} outside 1..=16")));
    }
    if radius == 0 {
        return Err(Error::InvalidParameter("window radius must be at least 1".into()));
    }
    let r = radius as i64;
    let win = source.window(-r, r + n as i64 - 2)?;
    let mut counts = vec![0usize; 1 << n];
    for block in win.bits().windows(n).take(2 * radius) {
        let code = block.iter().fold(0usize, |c, &b| (c << 1) | b as usize);
        counts[code] += 1;
    }
    let total = 2 * radius;
    let h: T = entropy_of_counts(counts.iter().copied(), total);
    Ok(EntropyEstimate {
        block_length: n,
        block_entropy: h,
        rate: h / T::from_usize(n).expect("small"),
        distinct_blocks: counts.iter().filter(|&&c| c > 0).count(),
    })
}

/// A permutation of `0..len` with named subsets and a weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePermSystem<T: Scalar> {
    perm: Vec<usize>,
    sets: BTreeMap<String, Vec<usize>>,
    weights: Vec<T>,
    invariant: bool,
}

impl<T: Scalar> FinitePermSystem<T> {
    pub fn new(perm: Vec<usize>, weights: Vec<T>) -> Result<Self> {
        let k = perm.len();
        if k == 0 {
            return Err(Error::InvalidParameter("empty point set".into()));
        }
        let mut hit = vec![false; k];
        for &p in &perm {
            if p >= k || hit[p] {
                return Err(Error::InvalidParameter(format!("not a permutation of 0..{k}")));
            }
            hit[p] = true;
        }
        if weights.len() != k {
            return Err(Error::InvalidDistribution(format!("{} weights for {k} points", weights.len())));
        }
        let sum = weights.iter().fold(T::zero(), |a, &w| a + w);
        if weights.iter().any(|w| !(*w >= T::zero())) || (sum - T::one()).abs() > T::lit(1e-12) {
            return Err(Error::InvalidDistribution(format!("weights sum to {sum}")));
        }
        Ok(FinitePermSystem {
            perm,
            sets: BTreeMap::new(),
            weights,
            invariant: false,
        })
    }

    /// Uniform weights, which every permutation preserves.
    pub fn uniform(perm: Vec<usize>) -> Result<Self> {
        let k = perm.len().max(1);
        let w = T::ratio(1, k);
        Self::new(perm, vec![w; k])?.mark_invariant()
    }

    pub fn with_set(mut self, name: impl Into<String>, members: Vec<usize>) -> Result<Self> {
        let name = name.into();
        if let Some(&bad) = members.iter().find(|&&m| m >= self.perm.len()) {
            return Err(Error::InvalidParameter(format!("set {name:?} has point {bad} outside 0..{}", self.perm.len())));
        }
        self.sets.insert(name, members);
        Ok(self)
    }

    /// Checks `w(σ(x)) = w(x)` within `1e-12` and flags the weights invariant.
    pub fn mark_invariant(mut self) -> Result<Self> {
        for (x, &y) in self.perm.iter().enumerate() {
            if (self.weights[x] - self.weights[y]).abs() > T::lit(1e-12) {
                return Err(Error::NotInvariant(x));
            }
        }
        self.invariant = true;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn is_invariant(&self) -> bool {
        self.invariant
    }

    pub fn set(&self, name: &str) -> Result<&[usize]> {
        self.sets.get(name).map(Vec::as_slice).ok_or_else(|| Error::UnknownSet(name.to_string()))
    }
}

/// Cesàro average of the pushforwards of `initial` under the first
/// `iterations` powers of `perm`. Approximately invariant for large
/// `iterations`; exactly invariant when `iterations` is a multiple of every
/// cycle length.
pub fn cesaro_weights<T: Scalar>(perm: &[usize], initial: &[T], iterations: usize) -> Vec<T> {
    assert_eq!(perm.len(), initial.len(), "weight vector length");
    let mut current = initial.to_vec();
    let mut acc = vec![T::zero(); perm.len()];
    for _ in 0..iterations.max(1) {
        for (a, c) in acc.iter_mut().zip(&current) {
            *a = *a + *c;
        }
        let mut next = vec![T::zero(); perm.len()];
        for (x, &y) in perm.iter().enumerate() {
            next[y] = next[y] + current[x];
        }
        current = next;
    }
    let scale = T::from_usize(iterations.max(1)).expect("small");
    acc.into_iter().map(|a| a / scale).collect()
}

/// Entropy of the `n`-fold join of a partition under a finite permutation:
/// atoms are classes of equal itineraries over steps `0..n`.
pub fn finite_system_entropy<T: Scalar>(sys: &FinitePermSystem<T>, partition: &[&str], n: usize) -> Result<EntropyEstimate<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("join length must be at least 1".into()));
    }
    if !sys.invariant {
        return Err(Error::NotInvariant(0));
    }
    let mut cell = vec![usize::MAX; sys.len()];
    for (c, name) in partition.iter().enumerate() {
        for &x in sys.set(name)? {
            if cell[x] != usize::MAX {
                return Err(Error::NotPartition(format!("point {x} lies in two cells")));
            }
            cell[x] = c;
        }
    }
    if let Some(x) = cell.iter().position(|&c| c == usize::MAX) {
        return Err(Error::NotPartition(format!("point {x} lies in no cell")));
    }
    let mut atoms: HashMap<Vec<usize>, T> = HashMap::new();
    for x in 0..sys.len() {
        let mut itinerary = Vec::with_capacity(n);
        let mut y = x;
        for _ in 0..n {
            itinerary.push(cell[y]);
            y = sys.perm[y];
        }
        let slot = atoms.entry(itinerary).or_insert(T::zero());
        *slot = *slot + sys.weights[x];
    }
    let mut masses: Vec<(Vec<usize>, T)> = atoms.into_iter().collect();
    masses.sort_by(|a, b| a.0.cmp(&b.0));
    let masses: Vec<T> = masses.into_iter().map(|(_, m)| m).collect();
    let h = partition_entropy(&masses)?;
    Ok(EntropyEstimate {
        block_length: n,
        block_entropy: h,
        rate: h / T::from_usize(n).expect("small"),
        distinct_blocks: masses.iter().filter(|m| **m > T::zero()).count(),
    })
}

/// Set description inside a system file: a source, a predicate, or (for
/// finite systems) an index list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetSpec {
    Source(SourceSpec),
    Predicate(PredicateSpec),
    Indices(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredicateKind {
    Le,
    Ge,
    All,
    None,
    Labels,
    Neighbors,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredicateSpec {
    pub predicate: PredicateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<SourceSpec>,
}

impl PredicateSpec {
    pub fn build(&self) -> Result<MembershipRule> {
        let need = |field: &str| Error::InvalidParameter(format!("{:?} predicate needs {field:?}", self.predicate));
        Ok(match self.predicate {
            PredicateKind::Le => MembershipRule::AtMost(self.k.ok_or_else(|| need("k"))?),
            PredicateKind::Ge => MembershipRule::AtLeast(self.k.ok_or_else(|| need("k"))?),
            PredicateKind::All => MembershipRule::All,
            PredicateKind::None => MembershipRule::Empty,
            PredicateKind::Labels => MembershipRule::Labels(self.labels.clone().ok_or_else(|| need("labels"))?.into_iter().collect()),
            PredicateKind::Neighbors => MembershipRule::Neighbours {
                anchor: self.anchor.ok_or_else(|| need("anchor"))?,
                graph: self.graph.as_ref().ok_or_else(|| need("graph"))?.build()?,
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Zshift,
    Finite,
}

/// JSON system description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub kind: SystemKind,
    #[serde(default)]
    pub sets: BTreeMap<String, SetSpec>,
    #[serde(default)]
    pub anchors: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum System {
    Shift(ShiftOrbitSystem),
    Finite(FinitePermSystem<f64>),
}

impl SystemSpec {
    pub fn parse(text: &str) -> Result<SystemSpec> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<System> {
        match self.kind {
            SystemKind::Zshift => {
                let mut sys = ShiftOrbitSystem::new();
                for (name, spec) in &self.sets {
                    let rule = match spec {
                        SetSpec::Source(src) => MembershipRule::Source(src.build()?),
                        SetSpec::Predicate(pred) => pred.build()?,
                        SetSpec::Indices(_) => {
                            return Err(Error::InvalidParameter(format!("set {name:?}: index lists only apply to finite systems")))
                        }
                    };
                    sys.insert_set(name.clone(), rule);
                }
                for (name, &label) in &self.anchors {
                    sys.insert_anchor(name.clone(), label);
                }
                Ok(System::Shift(sys))
            }
            SystemKind::Finite => {
                let perm = self.perm.clone().ok_or_else(|| Error::InvalidParameter("finite system needs \"perm\"".into()))?;
                let mut sys = match &self.weights {
                    Some(w) => FinitePermSystem::new(perm, w.clone())?.mark_invariant()?,
                    None => FinitePermSystem::uniform(perm)?,
                };
                for (name, spec) in &self.sets {
                    match spec {
                        SetSpec::Indices(ix) => sys = sys.with_set(name.clone(), ix.clone())?,
                        _ => return Err(Error::InvalidParameter(format!("set {name:?}: finite systems take index lists"))),
                    }
                }
                Ok(System::Finite(sys))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_champernowne, gen_periodic, rado_cayley};
    use crate::seqcore::Polarity;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn staircase() -> ShiftOrbitSystem {
        ShiftOrbitSystem::new().with_set("U", MembershipRule::AtMost(0))
    }

    #[test]
    fn xi_of_staircase_is_step() {
        let win = xi(&staircase(), 0, "U", 20).unwrap();
        let step = SymbolicSource::Step(Polarity::OnesThenZeros).symmetric_window(20).unwrap();
        assert_eq!(win, step);
        assert!(matches!(xi(&staircase(), 0, "V", 2), Err(Error::UnknownSet(_))));
    }

    #[test]
    fn xi_commutes_with_successor() {
        let sys = staircase().with_set("C", MembershipRule::Source(gen_champernowne()));
        for set in ["U", "C"] {
            for a in -5..5 {
                let here = xi(&sys, a, set, 50).unwrap();
                let next = xi(&sys, sys.successor(a), set, 50).unwrap();
                let prev = xi(&sys, sys.predecessor(a), set, 50).unwrap();
                for i in -49..=49 {
                    assert_eq!(next.get(i), here.shift(-1).get(i));
                    assert_eq!(prev.get(i), here.shift(1).get(i));
                }
            }
        }
    }

    #[test]
    fn rado_xi_mirrors_graph() {
        let g = gen_champernowne();
        let rado = rado_cayley(g.clone(), [0], 4, 5000).unwrap();
        let win = xi(&rado.system, 0, "U_0", 100).unwrap();
        assert_eq!(win.get(0), Some(false));
        for n in (-100..=100i64).filter(|&n| n != 0) {
            assert_eq!(win.get(n), Some(g.eval(n.abs())));
        }
    }

    #[test]
    fn staircase_language_is_monotone() {
        let sys = staircase();
        let lang = rho_language(&[(&sys, 0, "U"), (&sys, 3, "U")], 4, 30).unwrap();
        assert!(!lang.dense);
        for word in &lang.words {
            assert!(!word.bits().windows(2).any(|p| !p[0] && p[1]), "{word}");
        }
        let empty = rho_language(&[], 3, 10).unwrap();
        assert!(empty.words.is_empty());
    }

    #[test]
    fn pushforward_refines() {
        let sys = ShiftOrbitSystem::new().with_set("C", MembershipRule::Source(gen_champernowne()));
        let n = 20_000;
        let tol = 2.0 * freq::default_tolerance(n);
        for word in Word::all_of_length(3) {
            let whole: FrequencyEstimate<f64> = pushforward_cylinder(&sys, 0, "C", &word, n).unwrap();
            let zero: FrequencyEstimate<f64> = pushforward_cylinder(&sys, 0, "C", &word.push(false), n).unwrap();
            let one: FrequencyEstimate<f64> = pushforward_cylinder(&sys, 0, "C", &word.push(true), n).unwrap();
            assert!((whole.point - zero.point - one.point).abs() <= tol);
        }
    }

    #[test]
    fn compact_examples() {
        let sys = ShiftOrbitSystem::new()
            .with_set("per", MembershipRule::Source(gen_periodic(w("110100"))))
            .with_set("all", MembershipRule::All);
        let rep: CompactnessReport<f64> = compact_check(&sys, &["per", "all"], 0.01, 12, 1000).unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.per_set["per"], CompactEntry { best_n: 6, symdiff: 0.0 });
        assert_eq!(rep.per_set["all"], CompactEntry { best_n: 1, symdiff: 0.0 });
        assert!(compact_check::<f64>(&sys, &["per"], 0.1, 0, 10).is_err());
    }

    #[test]
    fn entropy_examples() {
        let per: EntropyEstimate<f64> = block_entropy(&gen_periodic(w("10")), 8, 1000).unwrap();
        assert_eq!(per.distinct_blocks, 2);
        assert_eq!(per.block_entropy, 1.0);
        assert_eq!(per.rate, 0.125);
        assert!(block_entropy::<f64, _>(&gen_periodic(w("10")), 17, 1000).is_err());
        assert!(block_entropy::<f64, _>(&gen_periodic(w("10")), 0, 1000).is_err());
    }

    #[test]
    fn entropy_window_coverage() {
        let win = gen_periodic(w("10")).window(-10, 10).unwrap();
        assert!(block_entropy::<f64, _>(&win, 3, 9).is_ok());
        assert!(block_entropy::<f64, _>(&win, 3, 10).is_err());
    }

    #[test]
    fn partition_entropy_examples() {
        assert_eq!(partition_entropy(&[0.5f64, 0.5]).unwrap(), 1.0);
        assert_eq!(partition_entropy(&[1.0f64]).unwrap(), 0.0);
        assert_eq!(partition_entropy(&[0.25f32, 0.25, 0.5, 0.0]).unwrap(), 1.5);
        assert!(partition_entropy(&[0.5f64, 0.6]).is_err());
        assert!(partition_entropy(&[-0.5f64, 1.5]).is_err());
        assert!(partition_entropy::<f64>(&[]).is_err());
    }

    #[test]
    fn identity_join_never_refines() {
        let sys = FinitePermSystem::<f64>::uniform((0..6).collect())
            .unwrap()
            .with_set("a", vec![0, 1])
            .unwrap()
            .with_set("b", vec![2, 3, 4, 5])
            .unwrap();
        let h1 = finite_system_entropy(&sys, &["a", "b"], 1).unwrap().block_entropy;
        for n in 2..10 {
            let e = finite_system_entropy(&sys, &["a", "b"], n).unwrap();
            assert!((e.block_entropy - h1).abs() < 1e-12);
        }
    }

    #[test]
    fn cyclic_join_is_bounded() {
        let sys = FinitePermSystem::<f64>::uniform((0..8).map(|i| (i + 1) % 8).collect())
            .unwrap()
            .with_set("lo", (0..4).collect())
            .unwrap()
            .with_set("hi", (4..8).collect())
            .unwrap();
        // Itineraries of length n >= 4 separate all 8 points.
        let expected_atoms = [2, 4, 6, 8, 8, 8, 8, 8];
        for n in 1..=8 {
            let e = finite_system_entropy(&sys, &["lo", "hi"], n).unwrap();
            assert_eq!(e.distinct_blocks, expected_atoms[n - 1], "n = {n}");
            assert!(e.rate <= 3.0 / n as f64 + 1e-12);
        }
    }

    #[test]
    fn swap_entropy_is_one() {
        let sys = FinitePermSystem::<f64>::uniform(vec![1, 0])
            .unwrap()
            .with_set("x", vec![0])
            .unwrap()
            .with_set("y", vec![1])
            .unwrap();
        for n in 1..6 {
            let e = finite_system_entropy(&sys, &["x", "y"], n).unwrap();
            assert_eq!(e.block_entropy, 1.0);
            assert_eq!(e.rate, 1.0 / n as f64);
        }
    }

    #[test]
    fn finite_system_errors() {
        assert!(FinitePermSystem::<f64>::new(vec![0, 0], vec![0.5, 0.5]).is_err());
        assert!(FinitePermSystem::<f64>::new(vec![1, 0], vec![0.5, 0.6]).is_err());
        let skew = FinitePermSystem::<f64>::new(vec![1, 0], vec![0.25, 0.75]).unwrap();
        assert_eq!(skew.clone().mark_invariant(), Err(Error::NotInvariant(0)));
        let skew = skew.with_set("x", vec![0]).unwrap().with_set("y", vec![1]).unwrap();
        assert!(finite_system_entropy(&skew, &["x", "y"], 1).is_err());
        let sys = FinitePermSystem::<f64>::uniform(vec![1, 0]).unwrap().with_set("x", vec![0]).unwrap();
        assert!(matches!(finite_system_entropy(&sys, &["x"], 1), Err(Error::NotPartition(_))));
        let sys = sys.with_set("both", vec![0, 1]).unwrap();
        assert!(matches!(finite_system_entropy(&sys, &["x", "both"], 1), Err(Error::NotPartition(_))));
    }

    #[test]
    fn cesaro_over_full_cycles_is_invariant() {
        let perm = vec![1, 2, 0, 4, 3];
        let weights = cesaro_weights(&perm, &[1.0f64, 0.0, 0.0, 0.0, 0.0], 6);
        let sys = FinitePermSystem::new(perm, weights).unwrap();
        let sys = sys.mark_invariant().unwrap();
        assert!((sys.weights()[0] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn system_json() {
        let text = r#"{
            "kind": "zshift",
            "sets": {
                "C": {"kind": "champernowne"},
                "step": {"predicate": "le", "k": 0},
                "nb": {"predicate": "neighbors", "anchor": 1, "graph": {"kind": "champernowne"}}
            },
            "anchors": {"a": 0}
        }"#;
        let System::Shift(sys) = SystemSpec::parse(text).unwrap().build().unwrap() else {
            panic!("expected shift system")
        };
        assert_eq!(sys.anchor("a"), Some(0));
        assert!(sys.contains("step", -3).unwrap());
        assert!(!sys.contains("nb", 1).unwrap());
        let finite = r#"{"kind":"finite","perm":[1,0],"sets":{"x":[0],"y":[1]}}"#;
        let System::Finite(f) = SystemSpec::parse(finite).unwrap().build().unwrap() else {
            panic!("expected finite system")
        };
        assert_eq!(finite_system_entropy(&f, &["x", "y"], 3).unwrap().block_entropy, 1.0);
        assert!(SystemSpec::parse(r#"{"kind":"zshift","sets":{"x":[0]}}"#).unwrap().build().is_err());
        assert!(SystemSpec::parse(r#"{"kind":"weird"}"#).is_err());
    }
}
