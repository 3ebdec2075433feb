//! `shiftlab`: command-line access to the generators, estimators, dynamical
//! checks and detectors.
//!
//! Exit status: 0 success, 1 a check ran and its verdict is negative,
//! 2 usage or data error.

mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use shiftlab::{
    bernoulli_cylinder, block_entropy, closure_contains, compact_check, default_tolerance, density, epsilon_wide,
    finite_system_entropy, ip_witness, max_staircase, occurrences, op_witness, pushforward_cylinder, rho_language,
    separation_report, shelah_decompose, sop_image_check, sop_witness, sw_closed_check, sw_reach, xi_span,
    BitSource, BitWindow, EdgeFill, FrequencyEstimateF64, Polarity, ReachOutcome, ShiftOrbitSystem, SourceKind, SourceSpec,
    SwCheck, System, SymbolicSource, Word,
};

use input::{
    analysis_window, fail, in_file, read_matrix, read_sequence, read_system, read_text, read_window_set, split_list,
    CliError, CliResult, WindowArg,
};
use render::{Format, Sink};

#[derive(Parser, Debug)]
#[command(name = "shiftlab", version, about = "Finite-window symbolic dynamics on binary Z-sequences")]
struct Cli {
    /// Output format; sequence-producing verbs default to the sequence text format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the report to this file instead of standard output.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a sequence window from a source description.
    Gen(GenArgs),
    /// Density estimate of the ones of a sequence.
    Density(SeqArgs),
    /// Occurrences of a word.
    Occur(OccurArgs),
    /// Epsilon-wideness check.
    Wide(WideArgs),
    /// Block entropy of a sequence, or join entropy of a finite system.
    Entropy(EntropyArgs),
    /// Symbolic image of a point for a named set.
    Xi(XiArgs),
    /// Pushforward estimate of a cylinder, optionally against a Bernoulli target.
    Pushforward(PushArgs),
    /// Compactness check over powers of the shift.
    Compact(CompactArgs),
    /// Search for switch/shift moves bringing a window into a cylinder.
    Swclose(SwcloseArgs),
    /// Does a window's central block occur in a sequence?
    Closure(ClosureArgs),
    /// Matrix detectors and symbolic-image checks.
    Detect(DetectArgs),
    /// Pairwise measure-algebra distances between named sets.
    Separation(SeparationArgs),
    /// Union of block languages of symbolic images.
    Rho(RhoArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Source description file (JSON); replaces the individual flags.
    #[arg(long, conflicts_with = "kind")]
    spec: Option<PathBuf>,
    #[arg(long, value_parser = parse_kind, required_unless_present = "spec")]
    kind: Option<SourceKind>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    word: Option<String>,
    /// "10" (ones then zeros) or "01".
    #[arg(long)]
    polarity: Option<String>,
    #[arg(long)]
    bit: Option<u8>,
    /// Champernowne enumeration: "words" or "integers".
    #[arg(long)]
    order: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    shift: Option<i64>,
    #[arg(long)]
    complement: bool,
    /// `N` for [-N, N] or `a:b`.
    #[arg(long, allow_hyphen_values = true)]
    window: WindowArg,
}

#[derive(Args, Debug)]
struct SeqArgs {
    input: PathBuf,
    /// `N` for [-N, N] or `a:b` (re-centered on its midpoint).
    #[arg(long, allow_hyphen_values = true)]
    window: Option<WindowArg>,
}

#[derive(Args, Debug)]
struct OccurArgs {
    #[command(flatten)]
    seq: SeqArgs,
    #[arg(long)]
    word: Word,
    /// Include the full index list.
    #[arg(long)]
    indices: bool,
}

#[derive(Args, Debug)]
struct WideArgs {
    #[command(flatten)]
    seq: SeqArgs,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 64)]
    max_shift: usize,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args, Debug)]
struct EntropyArgs {
    /// Sequence file, or a finite system description when --partition is given.
    input: PathBuf,
    #[arg(long)]
    block: usize,
    #[arg(long, allow_hyphen_values = true)]
    window: Option<WindowArg>,
    /// Comma-separated set names forming the partition.
    #[arg(long)]
    partition: Option<String>,
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Integer label or anchor name.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    point: String,
}

#[derive(Args, Debug)]
struct XiArgs {
    system: PathBuf,
    #[arg(long)]
    set: String,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, allow_hyphen_values = true)]
    window: WindowArg,
}

#[derive(Args, Debug)]
struct PushArgs {
    system: PathBuf,
    #[arg(long)]
    set: String,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long)]
    word: Word,
    #[arg(long, allow_hyphen_values = true)]
    window: WindowArg,
    /// Compare against the p-Bernoulli cylinder mass.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Args, Debug)]
struct CompactArgs {
    system: PathBuf,
    /// Comma-separated set names (default: every set).
    #[arg(long)]
    sets: Option<String>,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = 64)]
    max_n: usize,
    #[arg(long)]
    window: usize,
}

#[derive(Args, Debug)]
struct SwcloseArgs {
    /// Start window file (default: the step sequence 1̄0̄ on [-R, R]).
    start: Option<PathBuf>,
    #[arg(long)]
    target: Word,
    #[arg(long, default_value_t = 100_000)]
    max_steps: usize,
    /// R for the default start window.
    #[arg(long, default_value_t = 16)]
    radius: usize,
}

#[derive(Args, Debug)]
struct ClosureArgs {
    /// Sequence whose orbit closure is tested.
    input: PathBuf,
    /// Window file holding the candidate point.
    #[arg(long)]
    x: PathBuf,
    /// Central block half-length L.
    #[arg(long)]
    radius: usize,
    /// Search [-S, S] of the sequence (default: its symmetric radius).
    #[arg(long)]
    scan: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Ip,
    Op,
    Sop,
    Shelah,
    Swcheck,
    Sopimage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShiftMode {
    Zero,
    Either,
    None,
}

#[derive(Args, Debug)]
struct DetectArgs {
    /// Matrix file, window set file (swcheck) or system description (sopimage).
    input: PathBuf,
    #[arg(long, value_enum)]
    property: Property,
    /// IP size or staircase length.
    #[arg(long)]
    n: Option<usize>,
    /// SOP chain length.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 2)]
    ip_size: usize,
    #[arg(long, default_value_t = 3)]
    sop_len: usize,
    /// Edge rule for shifts in swcheck.
    #[arg(long, value_enum, default_value = "zero")]
    shifts: ShiftMode,
    #[arg(long, default_value_t = 1_000_000)]
    budget: usize,
    #[arg(long)]
    set: Option<String>,
    /// Points for sopimage: `a:b` or a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    #[arg(long)]
    window: Option<usize>,
}

#[derive(Args, Debug)]
struct SeparationArgs {
    system: PathBuf,
    #[arg(long)]
    sets: Option<String>,
    #[command(flatten)]
    point: PointArgs,
    #[arg(long)]
    window: usize,
    /// Comma-separated epsilon values.
    #[arg(long, default_value = "0.1")]
    epsilons: String,
}

#[derive(Args, Debug)]
struct RhoArgs {
    system: PathBuf,
    #[arg(long)]
    sets: Option<String>,
    /// Points: `a:b` or a comma-separated list of labels and anchor names.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    points: String,
    #[arg(long)]
    block: usize,
    #[arg(long)]
    window: usize,
}

fn parse_kind(s: &str) -> Result<SourceKind, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown kind {s:?} (champernowne, pnormal, sturmian, periodic, step, constant)"))
}

/// A report plus the verdict that decides the exit status.
struct Outcome {
    ok: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code.clamp(0, 255) as u8);
        }
    };
    match run(cli) {
        Ok(Outcome { ok: true }) => ExitCode::SUCCESS,
        Ok(Outcome { ok: false }) => ExitCode::from(1),
        Err(e) => {
            let line = e.0.replace('\n', " ");
            eprintln!("error: {line}");
            ExitCode::from(2)
        }
    }
}

fn tolerance(flag: Option<f64>, radius: usize) -> CliResult<f64> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("SHIFTLAB_TOLERANCE") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError(format!("SHIFTLAB_TOLERANCE={s:?} is not a number")))?,
            Err(_) => default_tolerance(radius),
        },
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return fail(format!("tolerance must be positive, got {tol}"));
    }
    Ok(tol)
}

fn shift_system(path: &std::path::Path) -> CliResult<ShiftOrbitSystem> {
    match read_system(path)? {
        System::Shift(s) => Ok(s),
        System::Finite(_) => fail(format!("{}: expected a \"zshift\" system", path.display())),
    }
}

fn resolve_point(sys: &ShiftOrbitSystem, p: &str) -> CliResult<i64> {
    if let Ok(v) = p.trim().parse::<i64>() {
        return Ok(v);
    }
    sys.anchor(p.trim())
        .ok_or_else(|| CliError(format!("point {p:?} is neither an integer nor a known anchor")))
}

fn resolve_points(sys: &ShiftOrbitSystem, spec: &str) -> CliResult<Vec<i64>> {
    if let Ok(WindowArg::Span(a, b)) = spec.parse::<WindowArg>() {
        return Ok((a..=b).collect());
    }
    let pts = split_list(spec).iter().map(|p| resolve_point(sys, p)).collect::<CliResult<Vec<_>>>()?;
    if pts.is_empty() {
        return fail("no points given");
    }
    Ok(pts)
}

fn set_names(sys: &ShiftOrbitSystem, sets: &Option<String>) -> Vec<String> {
    match sets {
        Some(s) => split_list(s),
        None => sys.set_names().map(str::to_string).collect(),
    }
}

fn sequence_output(sink: &Sink, win: &BitWindow) -> CliResult<Outcome> {
    match sink.format {
        Format::Json => sink.report(win)?,
        Format::Text => sink.write(&win.to_text())?,
    }
    Ok(Outcome { ok: true })
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let seq_sink = Sink {
        format: cli.format.unwrap_or(Format::Text),
        output: cli.output.clone(),
    };
    let sink = Sink {
        format: cli.format.unwrap_or(Format::Json),
        output: cli.output,
    };
    match cli.command {
        Command::Gen(a) => cmd_gen(a, &seq_sink),
        Command::Density(a) => {
            let seq = read_sequence(&a.input)?;
            let (win, n) = analysis_window(&seq, a.window, 0, &a.input)?;
            let est: FrequencyEstimateF64 = in_file(&a.input, density(&win, n))?;
            sink.report(&est)?;
            Ok(Outcome { ok: true })
        }
        Command::Occur(a) => cmd_occur(a, &sink),
        Command::Wide(a) => {
            let seq = read_sequence(&a.seq.input)?;
            let (win, n) = analysis_window(&seq, a.seq.window, a.max_shift, &a.seq.input)?;
            let tol = tolerance(a.tolerance, n)?;
            let rep = in_file(&a.seq.input, epsilon_wide::<f64, _>(&win, a.epsilon, a.max_shift, n, tol))?;
            sink.report(&rep)?;
            Ok(Outcome { ok: rep.verdict })
        }
        Command::Entropy(a) => cmd_entropy(a, &sink),
        Command::Xi(a) => {
            let sys = shift_system(&a.system)?;
            let point = resolve_point(&sys, &a.point.point)?;
            let (lo, hi) = a.window.bounds();
            let win = xi_span(&sys, point, &a.set, lo, hi)?;
            sequence_output(&seq_sink, &win)
        }
        Command::Pushforward(a) => cmd_pushforward(a, &sink),
        Command::Compact(a) => {
            let sys = shift_system(&a.system)?;
            let names = set_names(&sys, &a.sets);
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let rep = compact_check::<f64>(&sys, &refs, a.epsilon, a.max_n, a.window)?;
            sink.report(&rep)?;
            Ok(Outcome { ok: rep.verdict })
        }
        Command::Swclose(a) => {
            let start = match &a.start {
                Some(p) => read_sequence(p)?,
                None => shiftlab::gen_step(Polarity::OnesThenZeros).symmetric_window(a.radius)?,
            };
            let outcome = sw_reach(&start, &a.target, a.max_steps)?;
            let ok = matches!(outcome, ReachOutcome::Found { .. });
            sink.report(&outcome)?;
            Ok(Outcome { ok })
        }
        Command::Closure(a) => cmd_closure(a, &sink),
        Command::Detect(a) => cmd_detect(a, &sink),
        Command::Separation(a) => {
            let sys = shift_system(&a.system)?;
            let point = resolve_point(&sys, &a.point.point)?;
            let names = set_names(&sys, &a.sets);
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let eps = split_list(&a.epsilons)
                .iter()
                .map(|e| e.parse::<f64>().map_err(|_| CliError(format!("bad epsilon {e:?}"))))
                .collect::<CliResult<Vec<_>>>()?;
            let rep = separation_report::<f64>(&refs, &sys, point, a.window, &eps)?;
            sink.report(&rep)?;
            Ok(Outcome { ok: true })
        }
        Command::Rho(a) => {
            let sys = shift_system(&a.system)?;
            let names = set_names(&sys, &a.sets);
            let points = resolve_points(&sys, &a.points)?;
            let inputs: Vec<(&ShiftOrbitSystem, i64, &str)> = names
                .iter()
                .flat_map(|n| points.iter().map(|&p| (&sys, p, n.as_str())))
                .collect();
            let lang = rho_language(&inputs, a.block, a.window)?;
            sink.report(&lang)?;
            Ok(Outcome { ok: true })
        }
    }
}

fn cmd_gen(a: GenArgs, sink: &Sink) -> CliResult<Outcome> {
    let spec = match &a.spec {
        Some(path) => {
            let text = read_text(path)?;
            serde_json::from_str::<SourceSpec>(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))?
        }
        None => SourceSpec {
            p: a.p,
            seed: a.seed,
            alpha: a.alpha,
            rho: a.rho,
            word: a.word,
            polarity: a.polarity,
            bit: a.bit,
            order: a.order,
            shift: a.shift,
            complement: a.complement.then_some(true),
            ..SourceSpec::of_kind(a.kind.expect("required by clap"))
        },
    };
    let source: SymbolicSource = spec.build()?;
    let (lo, hi) = a.window.bounds();
    let win = BitWindow::from_fn(lo, hi, |i| source.eval(i));
    sequence_output(sink, &win)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct OccurReport {
    word: Word,
    count: usize,
    estimate: FrequencyEstimateF64,
    #[serde(skip_serializing_if = "Option::is_none")]
    indices: Option<Vec<i64>>,
}

fn cmd_occur(a: OccurArgs, sink: &Sink) -> CliResult<Outcome> {
    let seq = read_sequence(&a.seq.input)?;
    let (win, n) = analysis_window(&seq, a.seq.window, 0, &a.seq.input)?;
    let occ = in_file(&a.seq.input, occurrences::<f64, _>(&a.word, &win, n))?;
    // indices are reported in the file's own coordinates
    let offset = seq.lo() - win.lo();
    sink.report(&OccurReport {
        word: a.word,
        count: occ.indices.len(),
        estimate: occ.estimate,
        indices: a.indices.then(|| occ.indices.iter().map(|i| i + offset).collect()),
    })?;
    Ok(Outcome { ok: true })
}

fn cmd_entropy(a: EntropyArgs, sink: &Sink) -> CliResult<Outcome> {
    if let Some(partition) = &a.partition {
        let sys = match read_system(&a.input)? {
            System::Finite(f) => f,
            System::Shift(_) => return fail(format!("{}: --partition needs a \"finite\" system", a.input.display())),
        };
        let cells = split_list(partition);
        let refs: Vec<&str> = cells.iter().map(String::as_str).collect();
        let est = finite_system_entropy(&sys, &refs, a.block)?;
        sink.report(&est)?;
        return Ok(Outcome { ok: true });
    }
    let seq = read_sequence(&a.input)?;
    // blocks read forward n - 1 positions past the right edge
    let (win, n) = match a.window {
        Some(w) => {
            let (center, r) = w.centered_positive()?;
            (input::recenter(&seq, center), r)
        }
        None => {
            let lo = seq.lo();
            let hi = seq.hi() - (a.block as i64 - 1).max(0);
            let r = (-lo).min(hi + 1);
            if lo > 0 || r < 1 {
                return fail(format!("{}: sequence too short around 0 for blocks of {}", a.input.display(), a.block));
            }
            (seq.clone(), r as usize)
        }
    };
    let est = in_file(&a.input, block_entropy::<f64, _>(&win, a.block, n))?;
    sink.report(&est)?;
    Ok(Outcome { ok: true })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PushReport {
    word: Word,
    estimate: FrequencyEstimateF64,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt6")]
    bernoulli: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt6")]
    deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt6")]
    tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<bool>,
}

fn opt6<S: serde::Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => {
            let n: serde_json::Number = format!("{x:.6}").parse().map_err(serde::ser::Error::custom)?;
            n.serialize(s)
        }
        None => s.serialize_none(),
    }
}

fn cmd_pushforward(a: PushArgs, sink: &Sink) -> CliResult<Outcome> {
    let sys = shift_system(&a.system)?;
    let point = resolve_point(&sys, &a.point.point)?;
    let (center, n) = a.window.centered_positive()?;
    let est = pushforward_cylinder::<f64>(&sys, point + center, &a.set, &a.word, n)?;
    let mut rep = PushReport {
        word: a.word.clone(),
        estimate: est,
        bernoulli: None,
        deviation: None,
        tolerance: None,
        verdict: None,
    };
    if let Some(p) = a.p {
        let target = bernoulli_cylinder(p, &a.word)?;
        let tol = tolerance(a.tolerance, n)?;
        let dev = (est.point - target).abs();
        rep.bernoulli = Some(target);
        rep.deviation = Some(dev);
        rep.tolerance = Some(tol);
        rep.verdict = Some(dev <= tol);
    }
    sink.report(&rep)?;
    Ok(Outcome {
        ok: rep.verdict.unwrap_or(true),
    })
}

#[derive(Serialize)]
struct ClosureReport {
    radius: usize,
    scan: usize,
    contained: bool,
}

fn cmd_closure(a: ClosureArgs, sink: &Sink) -> CliResult<Outcome> {
    let seq = read_sequence(&a.input)?;
    let x = read_sequence(&a.x)?;
    let scan = match a.scan {
        Some(s) => s,
        None => seq
            .symmetric_radius()
            .ok_or_else(|| CliError(format!("{}: sequence does not contain position 0", a.input.display())))?,
    };
    let contained = closure_contains(&seq, &x, a.radius, scan)?;
    sink.report(&ClosureReport {
        radius: a.radius,
        scan,
        contained,
    })?;
    Ok(Outcome { ok: contained })
}

fn report_option<T: Serialize>(sink: &Sink, w: Option<T>) -> CliResult<Outcome> {
    let ok = w.is_some();
    sink.report(&w)?;
    Ok(Outcome { ok })
}

fn cmd_detect(a: DetectArgs, sink: &Sink) -> CliResult<Outcome> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError(format!("--property needs --{flag}")));
    match a.property {
        Property::Ip => {
            let m = read_matrix(&a.input)?;
            report_option(sink, ip_witness(&m, need(a.n, "n")?)?)
        }
        Property::Op => {
            let m = read_matrix(&a.input)?;
            report_option(sink, op_witness(&m, need(a.n, "n")?)?)
        }
        Property::Sop => {
            let m = read_matrix(&a.input)?;
            report_option(sink, sop_witness(&m, need(a.k, "k")?)?)
        }
        Property::Shelah => {
            let m = read_matrix(&a.input)?;
            let stair = match a.n {
                Some(n) => op_witness(&m, n)?,
                None => max_staircase(&m)?,
            };
            let Some(stair) = stair else {
                return report_option::<()>(sink, None);
            };
            report_option(sink, shelah_decompose(&m, &stair, a.ip_size, a.sop_len)?)
        }
        Property::Swcheck => {
            let set = read_window_set(&a.input)?;
            let shifts = match a.shifts {
                ShiftMode::Zero => Some(EdgeFill::Zero),
                ShiftMode::Either => Some(EdgeFill::Either),
                ShiftMode::None => None,
            };
            let res = in_file(&a.input, sw_closed_check(&set, shifts, a.budget))?;
            let ok = matches!(res, SwCheck::Closed { .. });
            sink.report(&res)?;
            Ok(Outcome { ok })
        }
        Property::Sopimage => {
            let sys = shift_system(&a.input)?;
            let set = a.set.as_deref().ok_or_else(|| CliError("--property sopimage needs --set".into()))?;
            let points = resolve_points(&sys, a.points.as_deref().unwrap_or("0"))?;
            let radius = need(a.window, "window")?;
            let v = sop_image_check(&sys, set, &points, radius)?;
            sink.report(&v)?;
            Ok(Outcome { ok: v.sop_shadow })
        }
    }
}
