//! Finite witnesses for the independence, order and strict order properties
//! on boolean relation matrices, plus the symbolic-image checks tied to them.
//!
//! Searches are exhaustive inside documented bounds and refuse outside them.
//! Every search enumerates candidates in lexicographic order and returns the
//! first hit, so outputs are reproducible.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::dynamics::{self, ShiftOrbitSystem};
use crate::error::{Error, Result};
use crate::seqcore::{bits_to_string, BitSource, BitWindow, Move};

/// `entries[i][j]` stands for `φ(a_i, b_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<bool>,
}

impl RelationMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::InvalidParameter("matrix needs at least one row and one column".into()));
        }
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::InvalidParameter(format!("row {bad} has {} entries, expected {c}", rows[bad].len())));
        }
        Ok(RelationMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix needs at least one row and one column");
        RelationMatrix {
            rows,
            cols,
            entries: (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect(),
        }
    }

    /// Bit `i * cols + j` of `code` is entry `(i, j)`.
    pub fn from_code(rows: usize, cols: usize, code: u64) -> Self {
        Self::from_fn(rows, cols, |i, j| (code >> (i * cols + j)) & 1 == 1)
    }

    /// Every one of the `2^rows` column patterns, column `j` reading the bits of `j`
    /// (row 0 is the least significant bit).
    pub fn full_shattering(rows: usize) -> Self {
        Self::from_fn(rows, 1 << rows, |i, j| (j >> i) & 1 == 1)
    }

    /// `entry[i][j] = (i <= j)`.
    pub fn linear_order(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i <= j)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.entries[i * self.cols + j]
    }

    /// Column `j` as the set of rows where it holds.
    pub fn column_rows(&self, j: usize) -> Vec<usize> {
        (0..self.rows).filter(|&i| self.get(i, j)).collect()
    }

    /// Matrix file format: a first line `r c`, then `r` lines of `c` characters over `{0,1}`.
    pub fn parse(text: &str) -> Result<RelationMatrix> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty matrix file"))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let parse_dim = |s: &str| s.parse::<usize>().ok().filter(|&d| d >= 1);
        let (r, c) = match dims.as_slice() {
            [a, b] => match (parse_dim(a), parse_dim(b)) {
                (Some(r), Some(c)) => (r, c),
                _ => return Err(parse_err(hline + 1, format!("bad dimensions {header:?}"))),
            },
            _ => return Err(parse_err(hline + 1, format!("expected \"r c\", found {header:?}"))),
        };
        let mut rows = Vec::with_capacity(r);
        for (idx, line) in lines {
            let line = line.trim();
            if rows.len() == r {
                return Err(parse_err(idx + 1, format!("more than {r} rows")));
            }
            let row = line
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(parse_err(idx + 1, format!("invalid character {other:?}"))),
                })
                .collect::<Result<Vec<bool>>>()?;
            if row.len() != c {
                return Err(parse_err(idx + 1, format!("row has {} entries, expected {c}", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != r {
            return Err(parse_err(text.lines().count().max(1), format!("expected {r} rows, found {}", rows.len())));
        }
        RelationMatrix::new(rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            out.push_str(&bits_to_string(&self.entries[i * self.cols..(i + 1) * self.cols]));
            out.push('\n');
        }
        out
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

impl fmt::Display for RelationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Selector {
    pub subset: Vec<usize>,
    pub column: usize,
}

/// Rows shattered by the selector columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IPWitness {
    pub row_set: Vec<usize>,
    /// One selector per subset of `row_set`, ordered by subset bitmask.
    pub selectors: Vec<Selector>,
}

impl IPWitness {
    pub fn verify(&self, m: &RelationMatrix) -> bool {
        let n = self.row_set.len();
        if n == 0 || self.selectors.len() != 1 << n || self.row_set.iter().any(|&r| r >= m.rows()) {
            return false;
        }
        let mut seen = HashSet::new();
        self.selectors.iter().all(|sel| {
            sel.column < m.cols()
                && sel.subset.iter().all(|s| self.row_set.contains(s))
                && seen.insert(sel.subset.clone())
                && self.row_set.iter().all(|&i| m.get(i, sel.column) == sel.subset.contains(&i))
        })
    }
}

/// `entry[row_seq[i]][col_seq[j]] = 1` iff `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OPWitness {
    pub row_seq: Vec<usize>,
    pub col_seq: Vec<usize>,
}

impl OPWitness {
    pub fn len(&self) -> usize {
        self.row_seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row_seq.is_empty()
    }

    pub fn verify(&self, m: &RelationMatrix) -> bool {
        let n = self.row_seq.len();
        n >= 1
            && self.col_seq.len() == n
            && self.row_seq.iter().all(|&r| r < m.rows())
            && self.col_seq.iter().all(|&c| c < m.cols())
            && (0..n).all(|i| (0..n).all(|j| m.get(self.row_seq[i], self.col_seq[j]) == (i <= j)))
    }
}

/// Columns whose row sets are strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SOPWitness {
    pub col_seq: Vec<usize>,
}

impl SOPWitness {
    pub fn verify(&self, m: &RelationMatrix) -> bool {
        self.col_seq.len() >= 2
            && self.col_seq.iter().all(|&c| c < m.cols())
            && self.col_seq.windows(2).all(|p| {
                let (a, b) = (p[0], p[1]);
                let subset = (0..m.rows()).all(|i| !m.get(i, a) || m.get(i, b));
                let strict = (0..m.rows()).any(|i| m.get(i, b) && !m.get(i, a));
                subset && strict
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", content = "witness")]
pub enum ShelahResult {
    IP(IPWitness),
    SOP(SOPWitness),
}

impl ShelahResult {
    pub fn verify(&self, m: &RelationMatrix) -> bool {
        match self {
            ShelahResult::IP(w) => w.verify(m),
            ShelahResult::SOP(w) => w.verify(m),
        }
    }
}

pub const IP_MAX_ROWS: usize = 20;
pub const IP_MAX_SIZE: usize = 4;
pub const OP_MAX_CELLS: usize = 400;
pub const OP_MAX_SIZE: usize = 5;
pub const SOP_MAX_COLS: usize = 20;
pub const SOP_MAX_LEN: usize = 6;

/// Lexicographic successor of a strictly increasing index tuple over `0..universe`.
fn next_combination(comb: &mut [usize], universe: usize) -> bool {
    let k = comb.len();
    for pos in (0..k).rev() {
        if comb[pos] < universe - (k - pos) {
            comb[pos] += 1;
            for q in pos + 1..k {
                comb[q] = comb[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Smallest (lexicographic) set of `n` rows shattered by the columns, with the
/// smallest selector column for every subset.
pub fn ip_witness(m: &RelationMatrix, n: usize) -> Result<Option<IPWitness>> {
    if n == 0 {
        return Err(Error::InvalidParameter("IP size must be at least 1".into()));
    }
    if n > m.rows() {
        return Err(Error::SizeExceeds {
            requested: n,
            available: m.rows(),
        });
    }
    if m.rows() > IP_MAX_ROWS || n > IP_MAX_SIZE {
        return Err(Error::SearchBounds(format!(
            "IP search supports rows <= {IP_MAX_ROWS} and size <= {IP_MAX_SIZE}"
        )));
    }
    let mut rows: Vec<usize> = (0..n).collect();
    loop {
        let mut first = vec![usize::MAX; 1 << n];
        for j in 0..m.cols() {
            let code = rows
                .iter()
                .enumerate()
                .fold(0usize, |c, (t, &i)| c | ((m.get(i, j) as usize) << t));
            if first[code] == usize::MAX {
                first[code] = j;
            }
        }
        if first.iter().all(|&c| c != usize::MAX) {
            let selectors = first
                .iter()
                .enumerate()
                .map(|(mask, &column)| Selector {
                    subset: rows.iter().enumerate().filter(|(t, _)| mask >> t & 1 == 1).map(|(_, &i)| i).collect(),
                    column,
                })
                .collect();
            return Ok(Some(IPWitness { row_set: rows, selectors }));
        }
        if !next_combination(&mut rows, m.rows()) {
            return Ok(None);
        }
    }
}

/// Lexicographically smallest staircase of length `n`.
pub fn op_witness(m: &RelationMatrix, n: usize) -> Result<Option<OPWitness>> {
    if n == 0 {
        return Err(Error::InvalidParameter("staircase length must be at least 1".into()));
    }
    let avail = m.rows().min(m.cols());
    if n > avail {
        return Err(Error::SizeExceeds {
            requested: n,
            available: avail,
        });
    }
    if m.rows() * m.cols() > OP_MAX_CELLS || n > OP_MAX_SIZE {
        return Err(Error::SearchBounds(format!(
            "OP search supports rows*cols <= {OP_MAX_CELLS} and length <= {OP_MAX_SIZE}"
        )));
    }
    let mut rows = Vec::with_capacity(n);
    Ok(op_extend(m, n, &mut rows).map(|row_seq| {
        let col_seq = (0..n)
            .map(|j| {
                (0..m.cols())
                    .find(|&c| (0..n).all(|i| m.get(row_seq[i], c) == (i <= j)))
                    .expect("feasible column")
            })
            .collect();
        OPWitness { row_seq, col_seq }
    }))
}

/// Column `c` is consistent with target step `j` on the chosen prefix of rows.
fn op_column_fits(m: &RelationMatrix, rows: &[usize], c: usize, j: usize) -> bool {
    rows.iter().enumerate().all(|(i, &r)| m.get(r, c) == (i <= j))
}

fn op_extend(m: &RelationMatrix, n: usize, rows: &mut Vec<usize>) -> Option<Vec<usize>> {
    let feasible = (0..n).all(|j| (0..m.cols()).any(|c| op_column_fits(m, rows, c, j)));
    if !feasible {
        return None;
    }
    if rows.len() == n {
        return Some(rows.clone());
    }
    for r in 0..m.rows() {
        if rows.contains(&r) {
            continue;
        }
        rows.push(r);
        if let Some(found) = op_extend(m, n, rows) {
            return Some(found);
        }
        rows.pop();
    }
    None
}

/// Lexicographically smallest strictly nested chain of `k` columns.
pub fn sop_witness(m: &RelationMatrix, k: usize) -> Result<Option<SOPWitness>> {
    if k < 2 {
        return Err(Error::InvalidParameter("SOP chain length must be at least 2".into()));
    }
    if k > m.cols() {
        return Err(Error::SizeExceeds {
            requested: k,
            available: m.cols(),
        });
    }
    if m.cols() > SOP_MAX_COLS || k > SOP_MAX_LEN {
        return Err(Error::SearchBounds(format!(
            "SOP search supports cols <= {SOP_MAX_COLS} and length <= {SOP_MAX_LEN}"
        )));
    }
    let sets: Vec<Vec<bool>> = (0..m.cols()).map(|j| (0..m.rows()).map(|i| m.get(i, j)).collect()).collect();
    let strictly_below = |a: usize, b: usize| {
        sets[a].iter().zip(&sets[b]).all(|(x, y)| !x || *y) && sets[a].iter().zip(&sets[b]).any(|(x, y)| !x && *y)
    };
    fn extend(chain: &mut Vec<usize>, k: usize, cols: usize, below: &dyn Fn(usize, usize) -> bool) -> bool {
        if chain.len() == k {
            return true;
        }
        for c in 0..cols {
            if chain.last().is_none_or(|&p| below(p, c)) {
                chain.push(c);
                if extend(chain, k, cols, below) {
                    return true;
                }
                chain.pop();
            }
        }
        false
    }
    let mut chain = Vec::with_capacity(k);
    Ok(extend(&mut chain, k, m.cols(), &strictly_below).then_some(SOPWitness { col_seq: chain }))
}

/// Given a staircase, look for an IP witness of `ip_size` rows or, failing
/// that, an SOP chain of `sop_len` columns. Sizes larger than the matrix
/// simply yield no witness of that kind.
pub fn shelah_decompose(
    m: &RelationMatrix,
    staircase: &OPWitness,
    ip_size: usize,
    sop_len: usize,
) -> Result<Option<ShelahResult>> {
    if !staircase.verify(m) {
        return Err(Error::InvalidWitness);
    }
    if ip_size >= 1 && ip_size <= m.rows() {
        if let Some(w) = ip_witness(m, ip_size)? {
            return Ok(Some(ShelahResult::IP(w)));
        }
    }
    if sop_len >= 2 && sop_len <= m.cols() {
        if let Some(w) = sop_witness(m, sop_len)? {
            return Ok(Some(ShelahResult::SOP(w)));
        }
    }
    Ok(None)
}

/// Longest staircase in `m` (0 when no entry is set).
pub fn max_staircase(m: &RelationMatrix) -> Result<Option<OPWitness>> {
    let mut best = None;
    for n in 1..=m.rows().min(m.cols()) {
        match op_witness(m, n)? {
            Some(w) => best = Some(w),
            None => break,
        }
    }
    Ok(best)
}

/// `table[r-1][c-1]`: the longest staircase over all `r x c` matrices with no
/// IP witness of size 2 and no SOP chain of length 3. Exhaustive, so both
/// bounds are capped at 4.
pub fn shelah_bound_table(max_rows: usize, max_cols: usize) -> Result<Vec<Vec<usize>>> {
    if max_rows == 0 || max_cols == 0 || max_rows > 4 || max_cols > 4 {
        return Err(Error::SearchBounds("bound table supports 1..=4 rows and columns".into()));
    }
    let mut table = vec![vec![0; max_cols]; max_rows];
    for r in 1..=max_rows {
        for c in 1..=max_cols {
            let mut best = 0;
            for code in 0..1u64 << (r * c) {
                let m = RelationMatrix::from_code(r, c, code);
                if r >= 2 && ip_witness(&m, 2)?.is_some() {
                    continue;
                }
                if c >= 3 && sop_witness(&m, 3)?.is_some() {
                    continue;
                }
                best = best.max(max_staircase(&m)?.map_or(0, |w| w.len()));
            }
            table[r - 1][c - 1] = best;
        }
    }
    Ok(table)
}

/// `entry[i][j] = J(i - j)` for `0 <= i < r`, `0 <= j < c`.
pub fn toeplitz_matrix<S: BitSource + ?Sized>(source: &S, rows: usize, cols: usize) -> Result<RelationMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter("matrix needs at least one row and one column".into()));
    }
    let win = source.window(-(cols as i64 - 1), rows as i64 - 1)?;
    Ok(RelationMatrix::from_fn(rows, cols, |i, j| win.get(i as i64 - j as i64).expect("covered")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterexampleKind {
    /// An adjacent switch inside the span left the set.
    Switch,
    /// A unit shift left the set; the bit entering at the span edge follows
    /// the requested [`EdgeFill`].
    ShiftAtSpanEdge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub member: BitWindow,
    #[serde(rename = "move")]
    pub mv: Move,
    /// For shifts, the entering edge bit is shown as 0.
    pub result: BitWindow,
    pub kind: CounterexampleKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SwCheck {
    Closed { moves_checked: usize },
    Counterexample(Counterexample),
    BudgetExhausted { moves_checked: usize },
}

/// Bit assumed to enter at the span edge when a window is shifted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeFill {
    /// The entering bit is 0.
    #[default]
    Zero,
    /// The shift is stable if either entering bit lands in the set.
    Either,
}

/// Checks a set of windows over one span for stability under adjacent
/// switches and, when `shifts` is given, unit shifts.
///
/// Members are visited in the given order, switches (ascending position)
/// before the shifts by -1 and +1. Each candidate move costs one unit of budget.
pub fn sw_closed_check(windows: &[BitWindow], shifts: Option<EdgeFill>, budget: usize) -> Result<SwCheck> {
    let Some(first) = windows.first() else {
        return Ok(SwCheck::Closed { moves_checked: 0 });
    };
    let (lo, hi) = (first.lo(), first.hi());
    if let Some(bad) = windows.iter().find(|w| w.lo() != lo || w.hi() != hi) {
        return Err(Error::InvalidParameter(format!(
            "window {bad} does not share the span [{lo}, {hi}]"
        )));
    }
    let members: HashSet<&[bool]> = windows.iter().map(|w| w.bits()).collect();
    let len = first.len();
    let mut checked = 0usize;
    let spend = |checked: &mut usize| -> bool {
        *checked += 1;
        *checked > budget
    };
    let mut visited: HashSet<&[bool]> = HashSet::new();
    for member in windows {
        if !visited.insert(member.bits()) {
            continue;
        }
        let bits = member.bits();
        for off in 0..len.saturating_sub(1) {
            if spend(&mut checked) {
                return Ok(SwCheck::BudgetExhausted { moves_checked: checked - 1 });
            }
            if bits[off] == bits[off + 1] {
                continue;
            }
            let k = lo + off as i64;
            let result = member.switch_at(k)?;
            if !members.contains(result.bits()) {
                return Ok(SwCheck::Counterexample(Counterexample {
                    member: member.clone(),
                    mv: Move::Switch(k),
                    result,
                    kind: CounterexampleKind::Switch,
                }));
            }
        }
        let Some(fill) = shifts else { continue };
        for a in [-1i64, 1] {
            if spend(&mut checked) {
                return Ok(SwCheck::BudgetExhausted { moves_checked: checked - 1 });
            }
            // (I + a)(i) = I(i - a), kept on the span.
            let mut shifted = vec![false; len];
            for (t, slot) in shifted.iter_mut().enumerate() {
                let src = t as i64 - a;
                if (0..len as i64).contains(&src) {
                    *slot = bits[src as usize];
                }
            }
            let edge = if a > 0 { 0 } else { len - 1 };
            let mut alt = shifted.clone();
            alt[edge] = true;
            let stable = members.contains(shifted.as_slice()) || (fill == EdgeFill::Either && members.contains(alt.as_slice()));
            if !stable {
                return Ok(SwCheck::Counterexample(Counterexample {
                    member: member.clone(),
                    mv: Move::Shift(a),
                    result: BitWindow::new(lo, shifted)?,
                    kind: CounterexampleKind::ShiftAtSpanEdge,
                }));
            }
        }
    }
    Ok(SwCheck::Closed { moves_checked: checked })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SopImageVerdict {
    /// No symbolic image contains the block `01`; constant images pass.
    pub containment: bool,
    /// Some symbolic image is a nonconstant step `1^a 0^b`.
    pub strictness: bool,
    pub sop_shadow: bool,
}

pub fn sop_image_check(system: &ShiftOrbitSystem, set: &str, points: &[i64], radius: usize) -> Result<SopImageVerdict> {
    let mut containment = true;
    let mut strictness = false;
    for &p in points {
        let win = dynamics::xi(system, p, set, radius)?;
        let bits = win.bits();
        let rises = bits.windows(2).any(|w| !w[0] && w[1]);
        if rises {
            containment = false;
        } else if bits.first() == Some(&true) && bits.last() == Some(&false) {
            strictness = true;
        }
    }
    Ok(SopImageVerdict {
        containment,
        strictness,
        sop_shadow: containment && strictness,
    })
}
