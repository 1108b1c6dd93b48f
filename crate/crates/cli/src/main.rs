//! `dp3`: compute toric cluster variables by mutation, closed form and
//! perfect matchings, and cross-check them.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dp3::contour::phi;
use dp3::dimer::{self, Method, PointOutcome, RecurrenceKind};
use dp3::quiver::{initial_seed, Seed};
use dp3::walk::{apply_tau_word, prism_of, Locator, TauWord};
use dp3::{formula, tiling, DimerError, LatticePoint, TilingError, WalkError};

/// println that stops quietly when the reader has gone away.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(name = "dp3", version, about = "Toric cluster variables of the dP3 quiver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed form at (i, j, k): factored, expanded, and value at all ones.
    #[command(allow_negative_numbers = true)]
    Formula { i: i64, j: i64, k: i64 },
    /// Mutate the initial seed by a tau word ("t1 t2 t4") or a raw word ("m1 m4 m3").
    Mutate {
        word: String,
        /// Search radius for locating raw-word entries on the lattice.
        #[arg(long, default_value_t = 8)]
        window: i64,
    },
    /// Draw the subgraph cut out by phi(i, j, k) as SVG.
    #[command(allow_negative_numbers = true)]
    Render {
        i: i64,
        j: i64,
        k: i64,
        /// Output file; standard output if omitted.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Compare closed form and matchings on |i|,|j| <= window, kmin <= k <= kmax.
    #[command(allow_negative_numbers = true)]
    Verify {
        #[arg(long, default_value_t = 2)]
        window: i64,
        #[arg(long, default_value_t = -1)]
        kmin: i64,
        #[arg(long, default_value_t = 2)]
        kmax: i64,
        /// Skip points whose predicted matching count exceeds this.
        #[arg(long, default_value_t = dimer::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Number of perfect matchings of the core cut by phi(i, j, k).
    #[command(allow_negative_numbers = true)]
    Count {
        i: i64,
        j: i64,
        k: i64,
        #[arg(long, default_value_t = dimer::DEFAULT_BUDGET)]
        budget: u64,
        /// Use the transfer-matrix engine instead of enumeration.
        #[arg(long)]
        transfer: bool,
    },
    /// Partition function of the core cut by phi(i, j, k).
    #[command(allow_negative_numbers = true)]
    Pf {
        i: i64,
        j: i64,
        k: i64,
        #[arg(long, default_value_t = dimer::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        transfer: bool,
        /// Print only the value at x1 = ... = x6 = 1.
        #[arg(long)]
        at_ones: bool,
    },
    /// Verify graphical condensation for the exchange relations at (i, j, k).
    #[command(allow_negative_numbers = true)]
    Kuo {
        i: i64,
        j: i64,
        k: i64,
        #[arg(long, value_enum, default_value_t = Kind::R4)]
        kind: Kind,
        /// Only the move to this point, given as "i,j,k".
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: Option<LatticePoint>,
        /// Transfer-engine term limit.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    R1,
    R2,
    R4,
}

impl From<Kind> for RecurrenceKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::R1 => RecurrenceKind::R1,
            Kind::R2 => RecurrenceKind::R2,
            Kind::R4 => RecurrenceKind::R4,
        }
    }
}

fn parse_point(s: &str) -> Result<LatticePoint, String> {
    let v: Vec<i64> = s
        .trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [i, j, k] => Ok(LatticePoint::new(i, j, k)),
        _ => Err(format!("expected i,j,k, got {s:?}")),
    }
}

/// Machine-readable result of a run.
#[derive(Serialize)]
struct RunReport {
    command: String,
    points: Vec<PointRecord>,
    failures: Vec<String>,
}

#[derive(Serialize)]
struct PointRecord {
    i: i64,
    j: i64,
    k: i64,
    status: &'static str,
    formula: Option<String>,
    dimer: Option<String>,
    equal: Option<bool>,
    matchings: Option<String>,
    millis: Option<u128>,
    note: Option<String>,
}

impl PointRecord {
    fn new(p: LatticePoint, status: &'static str) -> Self {
        PointRecord {
            i: p.i,
            j: p.j,
            k: p.k,
            status,
            formula: None,
            dimer: None,
            equal: None,
            matchings: None,
            millis: None,
            note: None,
        }
    }
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<DimerError> for Failure {
    fn from(e: DimerError) -> Self {
        match e {
            DimerError::SkippedSelfIntersecting(_) | DimerError::Tiling(TilingError::SelfIntersecting(_)) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Run(e.to_string()),
        }
    }
}

impl From<TilingError> for Failure {
    fn from(e: TilingError) -> Self {
        DimerError::Tiling(e).into()
    }
}

fn method(budget: u64, transfer: bool) -> Method {
    if transfer {
        Method::Transfer(budget)
    } else {
        Method::Enumerate(budget)
    }
}

fn cmd_formula(p: LatticePoint) {
    let c = formula::cluster_variable(p);
    out!("point     {p}");
    out!("contour   {}", phi(p));
    out!("factored  {}", formula::factored_form(p));
    out!("expanded  {c}");
    out!("at ones   {}", c.eval_at_ones());
}

/// Raw mutation word: tokens `m1`..`m6` or bare vertex numbers.
fn parse_raw_word(s: &str) -> Result<Vec<usize>, String> {
    s.replace(['μ', ','], " ")
        .split_whitespace()
        .map(|tok| {
            let n = tok.trim_start_matches('m');
            match n.parse::<usize>() {
                Ok(v) if (1..=6).contains(&v) => Ok(v),
                _ => Err(format!("unknown mutation {tok:?}")),
            }
        })
        .collect()
}

fn print_cluster(seed: &Seed) {
    for (r, x) in seed.cluster.iter().enumerate() {
        out!("x{}' = {x}", r + 1);
    }
}

fn cmd_mutate(word: &str, window: i64) -> Result<(), Failure> {
    let trimmed = word.trim();
    if trimmed.is_empty() || trimmed.starts_with(['t', 'τ']) {
        let w: TauWord = trimmed.parse().map_err(|e: WalkError| Failure::Usage(e.to_string()))?;
        let seed = apply_tau_word(&initial_seed(), &w).map_err(|e| Failure::Run(e.to_string()))?;
        print_cluster(&seed);
        out!("prism {}", prism_of(&w));
        return Ok(());
    }
    let raw = parse_raw_word(trimmed).map_err(Failure::Usage)?;
    let seed = initial_seed().mutate_sequence(&raw).map_err(|e| Failure::Run(e.to_string()))?;
    print_cluster(&seed);
    let locator = Locator::new(window);
    for (r, x) in seed.cluster.iter().enumerate() {
        match locator.locate(x) {
            Ok(p) => out!("x{}' at {p}", r + 1),
            Err(e) => out!("x{}' not located: {e}", r + 1),
        }
    }
    Ok(())
}

fn cmd_render(p: LatticePoint, svg: Option<PathBuf>) -> Result<(), Failure> {
    let g = tiling::cut_contour(&phi(p))?;
    let text = g.to_svg(60.0);
    match svg {
        Some(path) => std::fs::write(&path, text).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))?,
        None => out!("{text}"),
    }
    Ok(())
}

fn cmd_verify(window: i64, kmin: i64, kmax: i64, budget: u64, json: bool, echo: String) -> Result<bool, Failure> {
    if window < 0 || kmin > kmax {
        return Err(Failure::Usage("need window >= 0 and kmin <= kmax".into()));
    }
    let points = if window == 0 { Vec::new() } else { LatticePoint::window(window, kmin, kmax) };
    let results = dimer::grand_equivalence(&points, budget as u128, Method::Enumerate(budget));
    let mut report = RunReport { command: echo, points: Vec::new(), failures: Vec::new() };
    for r in results {
        let p = r.point;
        let rec = match r.outcome {
            PointOutcome::Checked { formula, dimer, equal, matchings, millis } => {
                if !equal {
                    report.failures.push(format!("{p}: closed form and matchings differ"));
                }
                PointRecord {
                    formula: Some(formula.to_string()),
                    dimer: Some(dimer.to_string()),
                    equal: Some(equal),
                    matchings: Some(matchings.to_string()),
                    millis: Some(millis),
                    ..PointRecord::new(p, if equal { "equal" } else { "differ" })
                }
            }
            PointOutcome::SkippedSelfIntersecting(t) => {
                PointRecord { note: Some(t.to_string()), ..PointRecord::new(p, "self-intersecting") }
            }
            PointOutcome::SkippedOverBudget { predicted } => {
                PointRecord { matchings: Some(predicted.to_string()), ..PointRecord::new(p, "over-budget") }
            }
            PointOutcome::Failed(e) => {
                report.failures.push(format!("{p}: {e}"));
                PointRecord { note: Some(e), ..PointRecord::new(p, "failed") }
            }
        };
        report.points.push(rec);
    }
    if json {
        out!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        for rec in &report.points {
            let extra = match (&rec.matchings, rec.millis) {
                (Some(m), Some(ms)) => format!("{m} matchings, {ms} ms"),
                (Some(m), None) => format!("{m} matchings predicted"),
                _ => rec.note.clone().unwrap_or_default(),
            };
            out!("({},{},{}) {:<17} {extra}", rec.i, rec.j, rec.k, rec.status);
        }
        let count = |s: &str| report.points.iter().filter(|r| r.status == s).count();
        out!(
            "{} equal, {} self-intersecting, {} over budget, {} failures",
            count("equal"),
            count("self-intersecting"),
            count("over-budget"),
            report.failures.len()
        );
        for f in &report.failures {
            out!("FAIL {f}");
        }
    }
    Ok(report.failures.is_empty())
}

fn cmd_count(p: LatticePoint, m: Method) -> Result<(), Failure> {
    let pf = m.partition_function(&dimer::core_for_point(p)?)?;
    out!("{}", pf.matchings);
    Ok(())
}

fn cmd_pf(p: LatticePoint, m: Method, at_ones: bool) -> Result<(), Failure> {
    let pf = m.partition_function(&dimer::core_for_point(p)?)?;
    if at_ones {
        out!("{}", pf.value.eval_at_ones());
    } else {
        out!("{}", pf.value);
    }
    Ok(())
}

fn cmd_kuo(p: LatticePoint, kind: Kind, to: Option<LatticePoint>, budget: u64, json: bool, echo: String) -> Result<bool, Failure> {
    let targets: Vec<LatticePoint> = match to {
        Some(q) => vec![q],
        None => RecurrenceKind::from(kind)
            .moves()
            .into_iter()
            .map(|d| LatticePoint::new(p.i + d.0, p.j + d.1, p.k + d.2))
            .collect(),
    };
    let mut report = RunReport { command: echo, points: Vec::new(), failures: Vec::new() };
    for q in targets {
        let start = Instant::now();
        let rec = match dimer::build_kuo_instance(p, q) {
            // no condensation instance: check the exchange relation on the contour cores alone
            Err(_) => match dimer::check_recurrence(p, (q.i - p.i, q.j - p.j, q.k - p.k), Method::Transfer(budget)) {
                Ok(ok) => {
                    if !ok {
                        report.failures.push(format!("{p} -> {q}: exchange relation fails"));
                    }
                    PointRecord {
                        equal: Some(ok),
                        millis: Some(start.elapsed().as_millis()),
                        note: Some("relation on contour cores only".into()),
                        ..PointRecord::new(q, if ok { "relation holds" } else { "relation fails" })
                    }
                }
                Err(e) => PointRecord { note: Some(e.to_string()), ..PointRecord::new(q, "no set-up") },
            },
            Ok(inst) => match dimer::verify_kuo_instance(&inst, Method::Transfer(budget)) {
                Ok(r) => {
                    let ok = r.passed();
                    if !ok {
                        report.failures.push(format!("{p} -> {q}: {r:?}"));
                    }
                    PointRecord {
                        equal: Some(ok),
                        millis: Some(start.elapsed().as_millis()),
                        note: Some(format!("{} O={}", inst.variant, inst.outer)),
                        ..PointRecord::new(q, if ok { "holds" } else { "fails" })
                    }
                }
                Err(e) => {
                    report.failures.push(format!("{p} -> {q}: {e}"));
                    PointRecord { note: Some(e.to_string()), ..PointRecord::new(q, "failed") }
                }
            },
        };
        report.points.push(rec);
    }
    if json {
        out!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        for rec in &report.points {
            let ms = rec.millis.map(|m| format!(" [{m} ms]")).unwrap_or_default();
            out!("{p} -> ({},{},{}) {} {}{ms}", rec.i, rec.j, rec.k, rec.status, rec.note.as_deref().unwrap_or(""));
        }
    }
    if report.points.iter().all(|r| r.status == "no set-up") {
        return Err(Failure::Run(format!("no condensation set-up at {p}")));
    }
    Ok(report.failures.is_empty())
}

fn main() -> ExitCode {
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let cli = Cli::parse();
    let lp = LatticePoint::new;
    let outcome = match cli.command {
        Command::Formula { i, j, k } => {
            cmd_formula(lp(i, j, k));
            Ok(true)
        }
        Command::Mutate { word, window } => cmd_mutate(&word, window).map(|_| true),
        Command::Render { i, j, k, svg } => cmd_render(lp(i, j, k), svg).map(|_| true),
        Command::Verify { window, kmin, kmax, budget, json } => cmd_verify(window, kmin, kmax, budget, json, echo),
        Command::Count { i, j, k, budget, transfer } => cmd_count(lp(i, j, k), method(budget, transfer)).map(|_| true),
        Command::Pf { i, j, k, budget, transfer, at_ones } => {
            cmd_pf(lp(i, j, k), method(budget, transfer), at_ones).map(|_| true)
        }
        Command::Kuo { i, j, k, kind, to, budget, json } => cmd_kuo(lp(i, j, k), kind, to, budget, json, echo),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
