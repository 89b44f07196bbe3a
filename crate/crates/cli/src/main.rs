use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use veronese_core::ci::{
    ci_hilbert_function, ci_hilbert_sequence, classify_threefold, format_gap_table, scan_surface_ci,
    threefold_gap_table, CIType, Evidence, ScanRecord, ScanStatus,
};
use veronese_core::realization::{embed_set, hilbert_function_of_points, roundtrip_check_with, PointSet};
use veronese_core::surface::{
    decide_surface, enumerate_completions, full_ramp_sum, landmarks, max_window_tail, bruteforce_window_tail,
    extremal_window, CompletionBudget, FailedCondition, WindowSearchBounds,
};
use veronese_core::veronese::{divisor_hf, rnc_points_sequence, veronese_hf};
use veronese_core::{Error, HilbertSequence, HilbertTail, VeroneseParams};

mod report;

const DEFAULT_MAX_ENTRIES: usize = 500_000;

#[derive(Parser)]
#[command(name = "veronese", version, about = "Hilbert functions of points on Veronese varieties")]
struct Cli {
    /// Run the reproduction manifest and exit.
    #[arg(long)]
    manifest: bool,

    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a Hilbert function is that of points on V(2,d).
    CheckSurface {
        /// Sequence file, or `-` for stdin.
        file: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// Realize an accepted Hilbert function and verify it by exact ranks.
    Realize {
        file: PathBuf,
        #[arg(long)]
        d: usize,
        /// Write the point set here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Largest evaluation matrix (entries) to row-reduce.
        #[arg(long, default_value_t = DEFAULT_MAX_ENTRIES)]
        max_entries: usize,
    },
    /// Tabulate closed-form Hilbert functions.
    Hf {
        #[command(subcommand)]
        kind: HfKind,
    },
    /// Classify complete-intersection types on V(2,d).
    CiScan {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 6)]
        a_max: usize,
        #[command(flatten)]
        budget: BudgetArg,
        /// Print admitted types only.
        #[arg(long)]
        admitted_only: bool,
    },
    /// Macaulay gap table for V(3,2), or the classification it implies.
    V32Table {
        #[arg(long)]
        classify: bool,
        #[arg(long, default_value_t = 6)]
        a_max: usize,
    },
    /// Brute-force oracles.
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },
    /// Run the reproduction manifest.
    Manifest {
        /// Also write the summary here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BudgetArg {
    /// Node cap for completion searches.
    #[arg(long)]
    budget: Option<u64>,
}

impl BudgetArg {
    fn get(&self) -> CompletionBudget {
        self.budget
            .map(CompletionBudget::with_nodes)
            .unwrap_or_default()
    }
}

#[derive(Subcommand)]
enum HfKind {
    /// H(t) = C(n + t d, n).
    Veronese {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        t_max: usize,
    },
    /// Image of a degree-e hypersurface of P^n.
    Divisor {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        e: usize,
        #[arg(long, default_value_t = 10)]
        t_max: usize,
    },
    /// s points on the rational normal curve of degree d.
    RncPoints {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t_max: Option<usize>,
    },
    /// Complete intersection of the given degrees in P^n.
    Ci {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<usize>,
        #[arg(long)]
        t_max: Option<usize>,
    },
}

#[derive(Subcommand)]
enum OracleKind {
    /// Every interpolating O-sequence, by exhaustive search.
    Completions {
        file: PathBuf,
        #[arg(long)]
        step: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Largest window tail by enumeration, next to the closed form.
    Tec {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        s: u64,
        #[arg(long, default_value_t = 8)]
        max_d: usize,
        #[arg(long, default_value_t = 8)]
        max_t: usize,
    },
    /// Hilbert function of a point set by exact ranks.
    Rank {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        t_max: usize,
        /// Embed by the degree-d Veronese map first.
        #[arg(long)]
        d: Option<usize>,
    },
}

struct Outcome {
    code: u8,
    text: String,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { code: 0, text }
    }
}

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CmdResult = Result<Outcome, Failure>;

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Io(e.to_string()))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }
}

fn read_sequence(path: &PathBuf) -> Result<HilbertSequence, Failure> {
    Ok(HilbertSequence::from_json(&read_input(path)?)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable") + "\n"
}

fn check_surface(path: &PathBuf, d: usize, format: Format) -> CmdResult {
    let h = read_sequence(path)?;
    if h.tail() != HilbertTail::Constant {
        return Err(Error::InvalidInput("check-surface needs a constant tail".into()).into());
    }
    let verdict = decide_surface(&h, d);
    let code = match &verdict.failed_condition {
        None => 0,
        Some(FailedCondition::NotPointHF { .. }) => 2,
        Some(_) => 1,
    };
    let text = match format {
        Format::Machine => to_json(&verdict),
        Format::Table => {
            let ctx = landmarks(&h, d).ok();
            let mut out = String::new();
            if let Some(ctx) = &ctx {
                out.push_str(&report::surface_report(&h, ctx, &verdict));
            }
            out.push_str(&report::verdict_line(&verdict, ctx.as_ref()));
            out.push('\n');
            if let Some(w) = &verdict.witness {
                out.push_str(&report::delta_line("witness Δk", w));
            }
            out
        }
    };
    Ok(Outcome { code, text })
}

fn realize(
    path: &PathBuf,
    d: usize,
    output: Option<&PathBuf>,
    max_entries: usize,
    format: Format,
) -> CmdResult {
    let h = read_sequence(path)?;
    let verdict = decide_surface(&h, d);
    match &verdict.failed_condition {
        Some(FailedCondition::NotPointHF { reason }) => {
            return Err(Error::InvalidInput(reason.clone()).into())
        }
        Some(_) => {
            return Ok(Outcome {
                code: 1,
                text: report::verdict_line(&verdict, landmarks(&h, d).ok().as_ref()) + "\n",
            })
        }
        None => {}
    }
    let trip = roundtrip_check_with(&h, d, max_entries)?;
    let points = trip.embedded.to_json();
    if let Some(out) = output {
        fs::write(out, &points).map_err(|e| Failure::Io(format!("{}: {e}", out.display())))?;
    }
    let code = if trip.matches { 0 } else { 1 };
    let text = match format {
        Format::Machine => to_json(&json!({
            "roundtrip": trip,
            "complete": trip.complete(),
            "points": serde_json::from_str::<serde_json::Value>(&points).expect("point json"),
        })),
        Format::Table => {
            let mut out = format!(
                "{} points in P^{}\n",
                trip.embedded.len(),
                trip.embedded.ambient_dim()
            );
            out.push_str(&report::grid(&[
                ("t".into(), trip.degrees.iter().map(|x| x.0.to_string()).collect()),
                ("rank".into(), trip.degrees.iter().map(|x| x.1.clone()).collect()),
                ("h".into(), trip.degrees.iter().map(|x| x.2.clone()).collect()),
            ]));
            out.push_str(&format!(
                "ranks {} h in degrees 0..={} (of 0..={}{})\n",
                if trip.matches { "match" } else { "DIFFER from" },
                trip.verified_through,
                trip.requested_through,
                if trip.complete() { "" } else { ", larger degrees exceed --max-entries" }
            ));
            if output.is_none() {
                out.push_str(&points);
                out.push('\n');
            }
            out
        }
    };
    Ok(Outcome { code, text })
}

fn hf(kind: &HfKind, format: Format) -> CmdResult {
    let (label, seq): (String, HilbertSequence) = match kind {
        HfKind::Veronese { n, d, t_max } => {
            let p = VeroneseParams::new(*n, *d)?;
            let values = (0..=*t_max).map(|t| veronese_hf(p, t)).collect();
            (format!("H_V({n},{d})"), HilbertSequence::new(values, HilbertTail::Unspecified)?)
        }
        HfKind::Divisor { n, d, e, t_max } => {
            let p = VeroneseParams::new(*n, *d)?;
            let values = (0..=*t_max)
                .map(|t| divisor_hf(p, *e, t))
                .collect::<Result<Vec<_>, _>>()?;
            (format!("H_D({n},{d},{e})"), HilbertSequence::new(values, HilbertTail::Unspecified)?)
        }
        HfKind::RncPoints { d, s, t_max } => {
            let full = rnc_points_sequence(*d, *s)?;
            (format!("H_X({d},{s})"), truncate(full, *t_max)?)
        }
        HfKind::Ci { n, degrees, t_max } => {
            let ty = CIType::new(*n, degrees.clone())?;
            let seq = if ty.is_zero_dimensional() {
                truncate(ci_hilbert_sequence(&ty, 0), *t_max)?
            } else {
                let len = t_max.unwrap_or(10) + 1;
                let values = (0..len).map(|t| ci_hilbert_function(&ty, t)).collect();
                HilbertSequence::new(values, HilbertTail::Unspecified)?
            };
            (format!("H{ty}"), seq)
        }
    };
    let text = match format {
        Format::Machine => seq.to_json() + "\n",
        Format::Table => {
            let mut out = report::sequence_table(&label, seq.values());
            if seq.tail() == HilbertTail::Constant {
                let m = seq.eventual_value().expect("nonempty");
                out.push_str(&format!("constant {m} from t = {}\n", seq.len() - 1));
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}

/// Cut a constant-tailed sequence at `t_max` when one is given.
fn truncate(seq: HilbertSequence, t_max: Option<usize>) -> Result<HilbertSequence, Error> {
    match t_max {
        None => Ok(seq),
        Some(t) => {
            let values: Vec<BigUint> = (0..=t)
                .map(|k| seq.value(k).or(seq.eventual_value()).expect("nonempty").clone())
                .collect();
            let tail = if t + 1 >= seq.len() { HilbertTail::Constant } else { HilbertTail::Unspecified };
            HilbertSequence::new(values, tail)
        }
    }
}

fn emit_records(records: &[ScanRecord], admitted_only: bool, format: Format) -> String {
    let shown: Vec<ScanRecord> = records
        .iter()
        .filter(|r| !admitted_only || r.status.is_admitted())
        .cloned()
        .collect();
    match format {
        Format::Machine => shown.iter().map(to_json).collect(),
        Format::Table => report::scan_table(&shown) + &report::scan_summary(records),
    }
}

fn ci_scan(d: usize, a_max: usize, budget: &CompletionBudget, admitted_only: bool, format: Format) -> CmdResult {
    let records = scan_surface_ci(d, a_max, budget)?;
    Ok(Outcome::ok(emit_records(&records, admitted_only, format)))
}

fn gap_table(classify: bool, a_max: usize, format: Format) -> CmdResult {
    if classify {
        let records = classify_threefold(a_max)?;
        return Ok(Outcome::ok(emit_records(&records, false, format)));
    }
    let rows = threefold_gap_table();
    let text = match format {
        Format::Table => format_gap_table(&rows),
        Format::Machine => rows.iter().map(to_json).collect(),
    };
    Ok(Outcome::ok(text))
}

fn oracle(kind: &OracleKind, format: Format) -> CmdResult {
    match kind {
        OracleKind::Completions { file, step, n, budget } => {
            let h = read_sequence(file)?;
            let found = enumerate_completions(&h, *step, *n, &budget.get())?;
            let text = match format {
                Format::Machine => to_json(&json!({ "count": found.len(), "completions": found })),
                Format::Table => {
                    let mut out = format!("{} completion(s)\n", found.len());
                    for (i, delta) in found.iter().enumerate() {
                        out.push_str(&report::delta_line(&format!("Δk[{i}]"), delta));
                    }
                    out
                }
            };
            Ok(Outcome {
                code: if found.is_empty() { 1 } else { 0 },
                text,
            })
        }
        OracleKind::Tec { d, t, s, max_d, max_t } => {
            let target = BigUint::from(*s);
            let full = full_ramp_sum(*d, *t);
            if target > full {
                return Err(Error::InvalidInput(format!("S = {s} exceeds the full ramp {full}")).into());
            }
            let bounds = WindowSearchBounds { max_d: *max_d, max_t: *max_t };
            let brute = bruteforce_window_tail(*d, *t, &target, bounds)?;
            let window = extremal_window(*d, *t, &target)?;
            let closed = if target == full {
                window.last().clone()
            } else {
                max_window_tail(*d, *t, &target)?
            };
            let agree = brute.map(BigUint::from).as_ref() == Some(&closed);
            let text = match format {
                Format::Machine => to_json(&json!({
                    "bruteforce": brute,
                    "mu2": closed.to_string(),
                    "window": window,
                    "agree": agree,
                })),
                Format::Table => {
                    let values: Vec<String> = window.values.iter().map(|v| v.to_string()).collect();
                    format!(
                        "brute force: {}\nmu2: {closed}\nextremal window: {}\n",
                        brute.map_or("none".into(), |b| b.to_string()),
                        values.join(" ")
                    )
                }
            };
            Ok(Outcome {
                code: if agree { 0 } else { 1 },
                text,
            })
        }
        OracleKind::Rank { file, t_max, d } => {
            let mut set = PointSet::parse(&read_input(file)?)?;
            if let Some(d) = d {
                set = embed_set(&set, *d);
            }
            let values: Vec<BigUint> = (0..=*t_max).map(|t| hilbert_function_of_points(&set, t)).collect();
            let text = match format {
                Format::Machine => HilbertSequence::new(values, HilbertTail::Unspecified)?.to_json() + "\n",
                Format::Table => report::sequence_table("rank", &values),
            };
            Ok(Outcome::ok(text))
        }
    }
}

fn admitted(records: &[ScanRecord]) -> Vec<String> {
    records
        .iter()
        .filter(|r| r.status.is_admitted())
        .map(|r| r.ci_type.to_string())
        .collect()
}

/// The two degree-7 sequences, the surface scans for d <= 5 and the threefold
/// table, each compared with its expected outcome.
fn manifest(output: Option<&PathBuf>) -> CmdResult {
    let mut lines = Vec::new();
    let mut all = true;
    let mut record = |name: &str, ok: bool, detail: String, started: Instant| {
        all &= ok;
        lines.push(format!(
            "{} {name} ({} ms): {detail}",
            if ok { "PASS" } else { "FAIL" },
            started.elapsed().as_millis()
        ));
    };

    let sequence = |h10: u64| {
        HilbertSequence::points(&[1, 36, 120, 253, 435, 666, 946, 1256, 1531, 1744, h10, 2022])
    };
    let start = Instant::now();
    let v = decide_surface(&sequence(1956), 7);
    let ok = !v.accepted
        && v.deficiency == Some(BigUint::from(19u32))
        && v.max_tail == Some(BigUint::from(44u32))
        && matches!(v.failed_condition, Some(FailedCondition::CondII { t: 9, .. }));
    record("h(10) = 1956 on V(2,7)", ok, report::verdict_line(&v, None), start);

    let start = Instant::now();
    let v = decide_surface(&sequence(1915), 7);
    let ok = v.accepted && v.witness.is_some();
    record("h(10) = 1915 on V(2,7)", ok, report::verdict_line(&v, None), start);

    let budget = CompletionBudget::default();
    for d in 2..=5usize {
        let start = Instant::now();
        let n = d * (d + 3) / 2;
        match scan_surface_ci(d, 6, &budget) {
            Ok(records) => {
                let got = admitted(&records);
                let mut want = vec![format!("(1^{n})"), format!("(1^{},2)", n - 1)];
                if d == 2 {
                    want.extend(["(1^3,2)".into(), "(1^3,2^2)".into()]);
                    want.extend((3..=6).map(|a| format!("(1^3,2,{a})")));
                }
                let mut got_sorted = got.clone();
                got_sorted.sort();
                want.sort();
                let mut ok = got_sorted == want;
                if d == 3 {
                    ok &= records.iter().any(|r| {
                        r.ci_type.to_string() == "(1^6,2^3)"
                            && r.status == ScanStatus::RejectedByUniqueCompletion
                            && matches!(r.evidence, Evidence::Completions { count: 1, .. })
                    });
                }
                record(
                    &format!("complete intersections on V(2,{d}), degrees <= 6"),
                    ok,
                    format!("admitted {}", got.join(" ")),
                    start,
                );
            }
            Err(e) => record(&format!("scan d = {d}"), false, e.to_string(), start),
        }
    }

    let start = Instant::now();
    let table = format_gap_table(&threefold_gap_table());
    let gaps: Vec<String> = threefold_gap_table().iter().map(|r| r.gap.to_string()).collect();
    let ok = gaps == ["-12", "-10", "-6", "-1", "-2", "-1", "1", "0"];
    record("threefold gap table", ok, format!("M - m = {}", gaps.join(" ")), start);

    let start = Instant::now();
    let mut got = classify_threefold(6).map(|r| admitted(&r)).unwrap_or_default();
    got.sort();
    let mut want: Vec<String> = ["(1^9)", "(1^8,2)", "(1^7,2)", "(1^7,2^2)"].map(String::from).into();
    want.extend((3..=6).map(|b| format!("(1^7,2,{b})")));
    want.sort();
    record("complete intersections on V(3,2)", got == want, format!("admitted {}", got.join(" ")), start);

    let mut text = lines.join("\n") + "\n\n" + &table;
    text.push_str(if all { "manifest: all passed\n" } else { "manifest: FAILURES\n" });
    if let Some(path) = output {
        fs::write(path, &text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome {
        code: if all { 0 } else { 1 },
        text,
    })
}

fn run(cli: &Cli) -> CmdResult {
    let format = cli.format;
    if cli.manifest {
        return manifest(None);
    }
    let Some(command) = &cli.command else {
        return Err(Failure::Io("no command given (see --help)".into()));
    };
    match command {
        Command::CheckSurface { file, d } => check_surface(file, *d, format),
        Command::Realize { file, d, output, max_entries } => {
            realize(file, *d, output.as_ref(), *max_entries, format)
        }
        Command::Hf { kind } => hf(kind, format),
        Command::CiScan { d, a_max, budget, admitted_only } => {
            ci_scan(*d, *a_max, &budget.get(), *admitted_only, format)
        }
        Command::V32Table { classify, a_max } => gap_table(*classify, *a_max, format),
        Command::Oracle { kind } => oracle(kind, format),
        Command::Manifest { output } => manifest(output.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(outcome.code)
        }
        Err(Failure::Core(Error::BudgetExceeded(msg))) => {
            eprintln!("budget exceeded: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
