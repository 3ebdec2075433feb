//! Window densities and the measures built from them.
//!
//! Every density here is a count over a symmetric window `[-N, N]`,
//! normalized by the number of positions counted. Limits are never
//! asserted: an estimate carries the extreme values of the same statistic
//! over radii in `[N/2, N]`, and consumers decide what spread they accept.

use std::collections::BTreeSet;

use num_traits::Num;
use serde::Serialize;

use crate::dynamics::{self, ShiftOrbitSystem};
use crate::error::{Error, Result};
use crate::scalar::{fixed6, fixed6_opt, Fixed6, Scalar};
use crate::seqcore::{BitSource, BitWindow, Word};

/// Density tolerance for a window of radius `n`: 0.02 at `n = 100000`,
/// scaling as `n^-1/2`.
pub fn default_tolerance(radius: usize) -> f64 {
    0.02 * (100_000.0 / radius.max(1) as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FrequencyEstimate<T: Scalar> {
    #[serde(serialize_with = "fixed6")]
    pub lower: T,
    #[serde(serialize_with = "fixed6")]
    pub point: T,
    #[serde(serialize_with = "fixed6")]
    pub upper: T,
    pub window_radius: usize,
}

impl<T: Scalar> FrequencyEstimate<T> {
    /// `upper - lower`: how far the window statistic wanders over `[N/2, N]`.
    pub fn spread(&self) -> T {
        self.upper - self.lower
    }

    /// True when the whole `[lower, upper]` band sits within `tol` of `target`.
    pub fn settled_near(&self, target: T, tol: T) -> bool {
        (self.lower - target).abs() <= tol && (self.upper - target).abs() <= tol
    }
}

/// Builds an estimate from hit/total counts available at every radius.
fn estimate<T: Scalar>(radius: usize, min_radius: usize, counts: impl Fn(usize) -> (usize, usize)) -> FrequencyEstimate<T> {
    let (hits, total) = counts(radius);
    let point = T::ratio(hits, total);
    let from = (radius / 2).max(min_radius).max(1).min(radius);
    let (mut lower, mut upper) = (point, point);
    for n in from..=radius {
        let (h, t) = counts(n);
        let v = T::ratio(h, t);
        lower = lower.min(v);
        upper = upper.max(v);
    }
    FrequencyEstimate {
        lower,
        point,
        upper,
        window_radius: radius,
    }
}

/// Prefix counts of a 0/1 indicator: `prefix[k]` = number of hits in `ind[..k]`.
fn prefix_counts(ind: impl Iterator<Item = bool>) -> Vec<usize> {
    let mut out = vec![0usize];
    let mut acc = 0;
    for b in ind {
        acc += b as usize;
        out.push(acc);
    }
    out
}

/// Estimate of the density of an indicator laid out over `[-N, N]` (index 0 = position `-N`).
fn symmetric_estimate<T: Scalar>(prefix: &[usize], radius: usize) -> FrequencyEstimate<T> {
    estimate(radius, 1, |n| {
        let a = radius - n;
        let b = radius + n + 1;
        (prefix[b] - prefix[a], 2 * n + 1)
    })
}

pub fn density<T: Scalar, S: BitSource + ?Sized>(source: &S, radius: usize) -> Result<FrequencyEstimate<T>> {
    if radius == 0 {
        return Err(Error::InvalidParameter("window radius must be at least 1".into()));
    }
    let win = source.symmetric_window(radius)?;
    Ok(window_density(&win, radius))
}

/// Density of an already materialized window covering `[-N, N]`.
pub(crate) fn window_density<T: Scalar>(win: &BitWindow, radius: usize) -> FrequencyEstimate<T> {
    let n = radius as i64;
    let prefix = prefix_counts((-n..=n).map(|i| win.get(i).unwrap_or(false)));
    symmetric_estimate(&prefix, radius)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Occurrences<T: Scalar> {
    pub indices: Vec<i64>,
    pub estimate: FrequencyEstimate<T>,
}

/// `⟨W, J⟩ ∩ [-N, N - |W|]`: positions `i` with `J(i + j) = W(j)` for `j = 1..=|W|`.
///
/// The estimate divides by the number of candidate positions, `2N - |W| + 1`.
pub fn occurrences<T: Scalar, S: BitSource + ?Sized>(word: &Word, source: &S, radius: usize) -> Result<Occurrences<T>> {
    let len = word.len();
    if radius < len {
        return Err(Error::InvalidParameter(format!("window radius {radius} shorter than word length {len}")));
    }
    let n = radius as i64;
    let win = source.window(-n, n)?;
    let bits = win.bits();
    let pattern = word.bits();
    // bits[k] is position k - N; occurrence at i reads bits[i + N + 1 ..= i + N + len].
    let hits: Vec<bool> = (0..=(2 * radius - len)).map(|k| &bits[k + 1..k + 1 + len] == pattern).collect();
    let indices = hits
        .iter()
        .enumerate()
        .filter(|(_, &h)| h)
        .map(|(k, _)| k as i64 - n)
        .collect();
    let prefix = prefix_counts(hits.iter().copied());
    let estimate = estimate(radius, len.div_ceil(2), |m| {
        // candidates i in [-m, m - len]
        let a = radius - m;
        let b = radius + m - len + 1;
        (prefix[b] - prefix[a], 2 * m - len + 1)
    });
    Ok(Occurrences { indices, estimate })
}

/// `⋂_j (I - j)^{W(j)}` over the candidate range `[-N, N - |W|]`, built from
/// explicit index sets. Independent route to [`occurrences`].
pub fn intersect_shifts<S: BitSource + ?Sized>(word: &Word, source: &S, radius: usize) -> Result<BTreeSet<i64>> {
    let len = word.len();
    if radius < len {
        return Err(Error::InvalidParameter(format!("window radius {radius} shorter than word length {len}")));
    }
    let n = radius as i64;
    let ones: BTreeSet<i64> = source.window(-n, n)?.bits().iter().zip(-n..).filter(|(b, _)| **b).map(|(_, i)| i).collect();
    let universe: BTreeSet<i64> = (-n..=n - len as i64).collect();
    let mut acc = universe.clone();
    for j in 1..=len {
        let shifted: BTreeSet<i64> = ones.iter().map(|i| i - j as i64).collect();
        let factor: BTreeSet<i64> = if word.get(j) {
            shifted.intersection(&universe).copied().collect()
        } else {
            universe.difference(&shifted).copied().collect()
        };
        acc = acc.intersection(&factor).copied().collect();
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WidenessReport<T: Scalar> {
    #[serde(serialize_with = "fixed6")]
    pub epsilon: T,
    #[serde(serialize_with = "fixed6")]
    pub tolerance: T,
    pub max_shift: usize,
    #[serde(serialize_with = "gap_list")]
    pub per_shift_gap: Vec<(i64, T)>,
    pub verdict: bool,
}

impl<T: Scalar> WidenessReport<T> {
    pub fn min_gap(&self) -> Option<(i64, T)> {
        self.per_shift_gap
            .iter()
            .copied()
            .fold(None, |best, (n, g)| match best {
                Some((_, b)) if b <= g => best,
                _ => Some((n, g)),
            })
    }
}

fn gap_list<T: Scalar, S: serde::Serializer>(gaps: &[(i64, T)], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(gaps.len()))?;
    for (n, g) in gaps {
        seq.serialize_element(&(n, Fixed6(*g)))?;
    }
    seq.end()
}

/// Wideness test: `gap(n) = dns(I) - dns(I ∩ I_n)` for `1 <= |n| <= max_shift`,
/// with `I_n = shift(I, n)`. The verdict holds when every gap is at least
/// `epsilon - tolerance`.
pub fn epsilon_wide<T: Scalar, S: BitSource + ?Sized>(
    source: &S,
    epsilon: T,
    max_shift: usize,
    radius: usize,
    tolerance: T,
) -> Result<WidenessReport<T>> {
    if max_shift == 0 || max_shift >= radius {
        return Err(Error::InvalidParameter(format!("need 1 <= max shift ({max_shift}) < radius ({radius})")));
    }
    let n = radius as i64;
    let m = max_shift as i64;
    let win = source.window(-n - m, n + m)?;
    let at = |i: i64| win.get(i).unwrap_or(false);
    let total = 2 * radius + 1;
    let ones = (-n..=n).filter(|&i| at(i)).count();
    let mut per_shift_gap = Vec::with_capacity(2 * max_shift);
    for s in (-m..=m).filter(|&s| s != 0) {
        let both = (-n..=n).filter(|&i| at(i) && at(i - s)).count();
        per_shift_gap.push((s, T::ratio(ones - both, total)));
    }
    let verdict = per_shift_gap.iter().all(|&(_, g)| g >= epsilon - tolerance);
    Ok(WidenessReport {
        epsilon,
        tolerance,
        max_shift,
        per_shift_gap,
        verdict,
    })
}

/// Mass of the cylinder `[W]` under the `p`-Bernoulli measure:
/// `p^(ones) (1 - p)^(zeros)`. Exact for rational scalars.
pub fn bernoulli_cylinder<T>(p: T, word: &Word) -> Result<T>
where
    T: Num + PartialOrd + Clone + std::fmt::Debug,
{
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::InvalidProbability(format!("{p:?}")));
    }
    let q = T::one() - p.clone();
    Ok(word
        .bits()
        .iter()
        .fold(T::one(), |acc, &b| acc * if b { p.clone() } else { q.clone() }))
}

/// Limit frequency measure of `set` along the orbit of `point`, at radius `N`.
pub fn frequency_measure<T: Scalar>(
    system: &ShiftOrbitSystem,
    point: i64,
    set: &str,
    radius: usize,
) -> Result<FrequencyEstimate<T>> {
    let win = dynamics::xi(system, point, set, radius)?;
    Ok(window_density(&win, radius))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AvgMembership {
    In,
    Out,
    Undetermined,
}

/// Finite proxy for "the failure set is finite" (the formula belongs to the
/// average type) and its mirror on non-failures. `In` requires no failures in
/// either tail of width `tail_guard` and at most `N/4` failures overall.
pub fn avg_membership(failures: &BTreeSet<i64>, radius: usize, tail_guard: usize) -> Result<AvgMembership> {
    if tail_guard >= radius {
        return Err(Error::InvalidParameter(format!("tail guard {tail_guard} must be below radius {radius}")));
    }
    let n = radius as i64;
    let g = tail_guard as i64;
    let in_tails = |i: i64| i <= -n + g || i >= n - g;
    let inside: Vec<i64> = failures.range(-n..=n).copied().collect();
    let fail_count = inside.len();
    let fail_in_tails = inside.iter().any(|&i| in_tails(i));
    let total = 2 * radius + 1;
    let pass_count = total - fail_count;
    let pass_in_tails = (-n..=-n + g).chain(n - g..=n).any(|i| !failures.contains(&i));
    Ok(if !fail_in_tails && fail_count <= radius / 4 {
        AvgMembership::In
    } else if !pass_in_tails && pass_count <= radius / 4 {
        AvgMembership::Out
    } else {
        AvgMembership::Undetermined
    })
}

/// Measure-algebra distance `μ(A △ B)` along the orbit of `point`.
pub fn malg_distance<T: Scalar>(
    a: &str,
    b: &str,
    system: &ShiftOrbitSystem,
    point: i64,
    radius: usize,
) -> Result<FrequencyEstimate<T>> {
    let wa = dynamics::xi(system, point, a, radius)?;
    let wb = dynamics::xi(system, point, b, radius)?;
    let prefix = prefix_counts(wa.bits().iter().zip(wb.bits()).map(|(x, y)| x != y));
    Ok(symmetric_estimate(&prefix, radius))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SeparationReport<T: Scalar> {
    pub set_names: Vec<String>,
    #[serde(serialize_with = "matrix6")]
    pub pairwise_distances: Vec<Vec<T>>,
    #[serde(serialize_with = "fixed6_opt")]
    pub bounded_away_at: Option<T>,
    #[serde(serialize_with = "net_list")]
    pub net_size_at: Vec<(T, usize)>,
}

impl<T: Scalar> SeparationReport<T> {
    pub fn min_off_diagonal(&self) -> Option<T> {
        let k = self.pairwise_distances.len();
        (0..k)
            .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| self.pairwise_distances[i][j])
            .fold(None, |m, d| Some(m.map_or(d, |m: T| m.min(d))))
    }
}

fn matrix6<T: Scalar, S: serde::Serializer>(rows: &[Vec<T>], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(rows.len()))?;
    for row in rows {
        seq.serialize_element(&row.iter().map(|v| Fixed6(*v)).collect::<Vec<_>>())?;
    }
    seq.end()
}

fn net_list<T: Scalar, S: serde::Serializer>(nets: &[(T, usize)], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = serializer.serialize_seq(Some(nets.len()))?;
    for (e, size) in nets {
        seq.serialize_element(&(Fixed6(*e), size))?;
    }
    seq.end()
}

/// Pairwise measure-algebra distances plus two summaries: the largest listed
/// `ε` that every off-diagonal distance reaches, and greedy `ε`-net sizes.
pub fn separation_report<T: Scalar>(
    names: &[&str],
    system: &ShiftOrbitSystem,
    point: i64,
    radius: usize,
    epsilons: &[T],
) -> Result<SeparationReport<T>> {
    if names.len() < 2 {
        return Err(Error::InvalidParameter("separation needs at least two sets".into()));
    }
    let windows = names
        .iter()
        .map(|name| dynamics::xi(system, point, name, radius))
        .collect::<Result<Vec<_>>>()?;
    let total = 2 * radius + 1;
    let k = names.len();
    let mut dist = vec![vec![T::zero(); k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let diff = windows[i].bits().iter().zip(windows[j].bits()).filter(|(a, b)| a != b).count();
            let d = T::ratio(diff, total);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let mut report = SeparationReport {
        set_names: names.iter().map(|s| s.to_string()).collect(),
        pairwise_distances: dist,
        bounded_away_at: None,
        net_size_at: Vec::new(),
    };
    let min_off = report.min_off_diagonal().expect("at least two sets");
    report.bounded_away_at = epsilons.iter().copied().filter(|&e| e <= min_off).fold(None, |m, e| Some(m.map_or(e, |m: T| m.max(e))));
    report.net_size_at = epsilons
        .iter()
        .map(|&eps| {
            let mut centers: Vec<usize> = Vec::new();
            for i in 0..k {
                if !centers.iter().any(|&c| report.pairwise_distances[i][c] <= eps) {
                    centers.push(i);
                }
            }
            (eps, centers.len())
        })
        .collect();
    Ok(report)
}
