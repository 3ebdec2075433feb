//! Reading input files and resolving `--window` arguments.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use shiftlab::{BitWindow, RelationMatrix, System, SystemSpec};

/// A failure that maps to exit status 2.
#[derive(Debug)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<shiftlab::Error> for CliError {
    fn from(e: shiftlab::Error) -> Self {
        CliError(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn fail<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError(msg.into()))
}

/// `N` for `[-N, N]`, or `a:b` for `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowArg {
    Radius(usize),
    Span(i64, i64),
}

impl FromStr for WindowArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((a, b)) = s.split_once(':') {
            let a: i64 = a.trim().parse().map_err(|_| format!("bad window start {a:?}"))?;
            let b: i64 = b.trim().parse().map_err(|_| format!("bad window end {b:?}"))?;
            if a > b {
                return Err(format!("window {a}:{b} is empty"));
            }
            Ok(WindowArg::Span(a, b))
        } else {
            match s.trim().parse::<usize>() {
                Ok(n) if n >= 1 => Ok(WindowArg::Radius(n)),
                _ => Err(format!("window radius must be a positive integer, got {s:?}")),
            }
        }
    }
}

impl WindowArg {
    pub fn bounds(self) -> (i64, i64) {
        match self {
            WindowArg::Radius(n) => (-(n as i64), n as i64),
            WindowArg::Span(a, b) => (a, b),
        }
    }

    /// Center and radius of the largest symmetric window inside the span.
    pub fn centered(self) -> (i64, usize) {
        let (a, b) = self.bounds();
        let r = ((b - a) / 2) as usize;
        (a + r as i64, r)
    }

    /// Same as [`WindowArg::centered`], but the radius must be positive.
    pub fn centered_positive(self) -> CliResult<(i64, usize)> {
        match self.centered() {
            (_, 0) => fail("window must span at least three positions"),
            ok => Ok(ok),
        }
    }
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

/// Prefixes library errors with the file they came from.
pub fn in_file<T>(path: &Path, r: shiftlab::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError(format!("{}: {e}", path.display())))
}

pub fn read_sequence(path: &Path) -> CliResult<BitWindow> {
    let text = read_text(path)?;
    in_file(path, BitWindow::parse(&text))
}

pub fn read_matrix(path: &Path) -> CliResult<RelationMatrix> {
    let text = read_text(path)?;
    in_file(path, RelationMatrix::parse(&text))
}

pub fn read_system(path: &Path) -> CliResult<System> {
    let text = read_text(path)?;
    in_file(path, SystemSpec::parse(&text).and_then(|s| s.build()))
}

/// Window set file: optional `# origin=<int>` header, then one member per line.
pub fn read_window_set(path: &Path) -> CliResult<Vec<BitWindow>> {
    let text = read_text(path)?;
    let mut origin = String::new();
    let mut members = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if !members.is_empty() {
                return fail(format!("{}: line {}: header after window data", path.display(), idx + 1));
            }
            origin = format!("{line}\n");
            continue;
        }
        let parsed = BitWindow::parse(&format!("{origin}{line}\n")).map_err(|e| match e {
            shiftlab::Error::Parse { message, .. } => {
                CliError(format!("{}: line {}: {message}", path.display(), idx + 1))
            }
            other => CliError(format!("{}: line {}: {other}", path.display(), idx + 1)),
        })?;
        members.push(parsed);
    }
    if members.is_empty() {
        return fail(format!("{}: line 1: no windows", path.display()));
    }
    Ok(members)
}

/// Sequence re-indexed so that `center` sits at 0.
pub fn recenter(win: &BitWindow, center: i64) -> BitWindow {
    win.shift(-center)
}

/// Picks the analysis window for a sequence file: the explicit `--window`,
/// or the largest symmetric window leaving `margin` positions spare on
/// each side.
pub fn analysis_window(seq: &BitWindow, window: Option<WindowArg>, margin: usize, path: &Path) -> CliResult<(BitWindow, usize)> {
    match window {
        Some(w) => {
            let (center, radius) = w.centered_positive()?;
            Ok((recenter(seq, center), radius))
        }
        None => {
            let avail = seq.symmetric_radius().ok_or_else(|| {
                CliError(format!("{}: sequence does not contain position 0; pass --window a:b", path.display()))
            })?;
            if avail <= margin {
                return fail(format!(
                    "{}: sequence radius {avail} leaves no room for a margin of {margin}",
                    path.display()
                ));
            }
            Ok((seq.clone(), avail - margin))
        }
    }
}

pub fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}
