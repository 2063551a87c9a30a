//! Command line front end for the reduction and analysis library.
//!
//! `reduce` turns polynomial or bilinear systems into gadget games,
//! `check` decides a property of one profile, `solve` enumerates
//! equilibria, `lemmas` runs a claim suite, and `roundtrip` generates
//! planted systems and drives them through plant, reduce, lift, verify,
//! and project. Reports are plain text followed by one JSON line per
//! check; identical arguments and seed give byte-identical reports.
//! Exit status: 0 when every check passes, 1 on a failed or unresolved
//! check, 2 on usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use quadnash::analysis::{
    check_condition, check_ne, check_pareto, check_pareto_with_margin, check_strong,
    check_strong_with_margin, exists_second_ne, find_equilibria, ConditionParams,
    EnumerationOptions, Exactness, Verdict, Witness, CONDITION_IDS,
};
use quadnash::exact::{fmt_rational, parse_rational, QuadAlgebraic, Rational};
use quadnash::gadgets::{
    build_g0, build_g2, build_g5, build_h1, build_h2, build_h3, build_h4, build_h5,
    extend_with_hgadget, extend_with_simple_bot, lift_solution, project_profile, Projection,
};
use quadnash::game::format::{parse_game, parse_profile, write_game_with_comments};
use quadnash::game::{MixedProfile, StrategicGame};
use quadnash::plant::plant_system;
use quadnash::suites::{run_suite, SUITE_IDS};
use quadnash::symmetrize::{
    build_d0, build_gplus, build_gplus_prime, extend_symmetric, lift_role_assigned,
    lift_symmetric, project_symmetric, SymExtension, SymmetrizationInfo,
};
use quadnash::systems::{
    embed_corner, parse_bsys, parse_qsys, promise_point, write_bsys, BilinearSystem,
    QuadraticSystem,
};
use num_traits::{Signed, Zero};

#[derive(Parser)]
#[command(
    name = "quadnash",
    version,
    about = "Quadratic polynomial systems reduced to 3-player gadget games, with exact equilibrium analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a gadget game (or the bilinear system) from an input system
    Reduce(ReduceArgs),
    /// Decide a property of one profile in one game
    Check(CheckArgs),
    /// Enumerate Nash equilibria of a game file
    Solve(SolveArgs),
    /// Run a claim suite and report every claim
    Lemmas(LemmasArgs),
    /// Plant systems, reduce, lift, verify, and project back
    Roundtrip(RoundtripArgs),
}

#[derive(Args)]
struct ReduceArgs {
    /// Input `.qsys` or `.bsys` file (header-sniffed); the standalone
    /// h-gadgets take no input
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Write the artifact here; without it only the report is printed
    #[arg(long = "out", value_name = "PATH")]
    out: Option<PathBuf>,
    /// Target: g0 g1 g2 g3 g4 g5, h1 h2 h3 h4 h5, d0 d1 d4 dp0 dp1, or bsys
    #[arg(long)]
    gadget: String,
    /// Gadget parameter u >= 0 for h1/h3/h4 and their g-extensions
    /// (default 0)
    #[arg(long)]
    u: Option<String>,
    /// Cycle length k >= 2 for h2 (default 2)
    #[arg(long)]
    k: Option<usize>,
    /// Bilinearize the quadratic input directly, skipping the promise-box
    /// normalization
    #[arg(long)]
    no_normalize: bool,
    /// Append the irrationality equation to the quadratic input first
    #[arg(long)]
    augment: bool,
    /// Build g1 with the single shared opt-out action instead of the
    /// product form
    #[arg(long)]
    simple_bot: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Game file
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Mixed profile file
    #[arg(long, value_name = "PATH")]
    profile: Option<PathBuf>,
    /// Pure profile as comma-separated action labels
    #[arg(long, value_name = "LABELS")]
    pure: Option<String>,
    /// ne | pareto | strong | exists-second-ne | a condition id
    #[arg(long)]
    property: String,
    /// Rational threshold for the payoff, probability, and total-payoff
    /// conditions
    #[arg(long)]
    u: Option<String>,
    /// Support size bound for the support conditions
    #[arg(long)]
    k: Option<usize>,
    /// Action set for one player, comma-separated labels; repeat once per
    /// player for the support containment conditions
    #[arg(long = "t-set", value_name = "LABELS")]
    t_sets: Vec<String>,
    /// Strict-improvement margin for pareto and strong (default 1/1024)
    #[arg(long)]
    eps: Option<String>,
    /// Largest support size tried by exists-second-ne (default 2)
    #[arg(long)]
    max_support: Option<usize>,
    /// Numeric-path tolerance for exists-second-ne
    #[arg(long)]
    tolerance: Option<f64>,
    /// Numeric-path seed for exists-second-ne
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SolveArgs {
    /// Game file
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Largest support size per player (default 2)
    #[arg(long)]
    max_support: Option<usize>,
    /// Support pattern budget (default 200000)
    #[arg(long)]
    budget: Option<u128>,
    /// Numeric-path residual tolerance (default 1e-12)
    #[arg(long)]
    tolerance: Option<f64>,
    /// Numeric-path seed; exact paths ignore it
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct LemmasArgs {
    /// Suite id (h1 h2 h3 h4 h5 g1 d0 d1 dp1) or `all`
    #[arg(long)]
    suite: String,
}

#[derive(Args)]
struct RoundtripArgs {
    /// Variables per planted system
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Equations per planted system
    #[arg(long, default_value_t = 2)]
    l: usize,
    /// Number of instances
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Base seed; instance i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lift target: g1 (default), d0, or dp1
    #[arg(long, default_value = "g1")]
    gadget: String,
}

struct UsageError(String);

type CliResult<T> = std::result::Result<T, UsageError>;

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

impl From<quadnash::Error> for UsageError {
    fn from(e: quadnash::Error) -> Self {
        UsageError(e.to_string())
    }
}

#[derive(Default)]
struct Report {
    lines: Vec<String>,
    records: Vec<Value>,
    failed: bool,
}

impl Report {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn record(&mut self, v: Value) {
        self.records.push(v);
    }

    fn print(&self) {
        // A reader that stops consuming (head, grep -m) closes the pipe;
        // treat that as end of output, not a crash.
        use std::io::Write;
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        for l in &self.lines {
            if writeln!(out, "{l}").is_err() {
                return;
            }
        }
        for r in &self.records {
            if writeln!(out, "{r}").is_err() {
                return;
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            report.print();
            if report.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CliResult<Report> {
    match command {
        Command::Reduce(a) => cmd_reduce(a),
        Command::Check(a) => cmd_check(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Lemmas(a) => cmd_lemmas(a),
        Command::Roundtrip(a) => cmd_roundtrip(a),
    }
}

// -------------------------------------------------------------------
// shared plumbing
// -------------------------------------------------------------------

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_nonneg_rational(s: &str, what: &str) -> CliResult<Rational> {
    let r = parse_rational(s).map_err(|e| usage(format!("bad {what} `{s}`: {e}")))?;
    if r.is_negative() {
        return Err(usage(format!("{what} must be nonnegative, got {s}")));
    }
    Ok(r)
}

fn qa_vec(v: &[Rational]) -> Vec<QuadAlgebraic> {
    v.iter().cloned().map(QuadAlgebraic::rational).collect()
}

/// Rational without the `/1` that the canonical file form carries.
fn pretty_rational(r: &Rational) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        fmt_rational(r)
    }
}

fn fmt_qa(v: &QuadAlgebraic) -> String {
    if v.is_rational() {
        return pretty_rational(v.rational_part());
    }
    let b = v.radical_coeff();
    let (sign, mag) = if b.is_negative() {
        ("-", -b.clone())
    } else {
        ("+", b.clone())
    };
    format!(
        "{} {sign} {}*sqrt({}) (~{:.10})",
        pretty_rational(v.rational_part()),
        pretty_rational(&mag),
        v.radicand(),
        v.to_float()
    )
}

fn fmt_qa_list(vs: &[QuadAlgebraic]) -> String {
    vs.iter().map(fmt_qa).collect::<Vec<_>>().join(" ")
}

fn json_qa_list(vs: &[QuadAlgebraic]) -> Value {
    Value::Array(vs.iter().map(|v| Value::String(v.to_string())).collect())
}

enum LoadedSystem {
    Quadratic(QuadraticSystem),
    Bilinear(BilinearSystem),
}

fn load_system(path: &Path) -> CliResult<LoadedSystem> {
    let text = read_file(path)?;
    match text.split_whitespace().next() {
        Some("qsys") => Ok(LoadedSystem::Quadratic(parse_qsys(&text)?)),
        Some("bsys") => Ok(LoadedSystem::Bilinear(parse_bsys(&text)?)),
        _ => Err(usage(format!(
            "{}: expected a `qsys 1` or `bsys 1` header",
            path.display()
        ))),
    }
}

fn load_game(path: &Path) -> CliResult<StrategicGame> {
    Ok(parse_game(&read_file(path)?)?)
}

// -------------------------------------------------------------------
// reduce
// -------------------------------------------------------------------

fn cmd_reduce(args: ReduceArgs) -> CliResult<Report> {
    let mut report = Report::default();
    let gadget = args.gadget.as_str();
    let u = match &args.u {
        Some(s) => parse_nonneg_rational(s, "--u")?,
        None => Rational::zero(),
    };
    let k = args.k.unwrap_or(2);

    let standalone = matches!(gadget, "h1" | "h2" | "h3" | "h4" | "h5");
    if standalone && args.input.is_some() {
        return Err(usage(format!("gadget {gadget} takes no --in")));
    }
    if args.simple_bot && gadget != "g1" {
        return Err(usage("--simple-bot only applies to gadget g1"));
    }

    enum Artifact {
        Game(StrategicGame, Vec<String>),
        System(BilinearSystem),
    }

    let artifact = if standalone {
        let game = match gadget {
            "h1" => build_h1(&u),
            "h2" => build_h2(k)?,
            "h3" => build_h3(&u),
            "h4" => build_h4(&u),
            "h5" => build_h5(),
            _ => unreachable!(),
        };
        report.line(format!("gadget {gadget}: standalone"));
        Artifact::Game(game, Vec::new())
    } else {
        let path = args
            .input
            .as_deref()
            .ok_or_else(|| usage(format!("gadget {gadget} needs --in")))?;
        let (bsys, pipeline) = bilinear_input(path, &args)?;
        report.line(format!(
            "input {}: {}",
            path.display(),
            pipeline.join(" -> ")
        ));
        report.line(format!(
            "bilinear system: dim {}, matrices {}",
            bsys.dim(),
            bsys.matrix_count()
        ));
        match gadget {
            "bsys" => Artifact::System(bsys),
            "g0" => Artifact::Game(build_g0(&bsys), Vec::new()),
            "g1" | "g3" | "g4" => {
                let g0 = build_g0(&bsys);
                let game = if args.simple_bot {
                    extend_with_simple_bot(&g0)?
                } else {
                    let h = match gadget {
                        "g1" => build_h1(&u),
                        "g3" => build_h3(&u),
                        _ => build_h4(&u),
                    };
                    extend_with_hgadget(&g0, &h)?
                };
                Artifact::Game(game, Vec::new())
            }
            "g2" => {
                let g1 = extend_with_hgadget(&build_g0(&bsys), &build_h1(&u))?;
                Artifact::Game(build_g2(&g1)?, Vec::new())
            }
            "g5" => {
                let g1 = extend_with_hgadget(&build_g0(&bsys), &build_h1(&u))?;
                Artifact::Game(build_g5(&g1)?, Vec::new())
            }
            "d0" | "d1" | "d4" | "dp0" | "dp1" => {
                let g0 = build_g0(&bsys);
                let (shifted, info) = if gadget.starts_with("dp") {
                    build_gplus_prime(&g0)?
                } else {
                    build_gplus(&g0)?
                };
                let d0 = build_d0(&shifted)?;
                let game = match gadget {
                    "d0" | "dp0" => d0,
                    "d1" => extend_symmetric(&d0, &info, SymExtension::D1)?,
                    "d4" => extend_symmetric(&d0, &info, SymExtension::D4)?,
                    _ => extend_symmetric(&d0, &info, SymExtension::DPrime1)?,
                };
                Artifact::Game(game, d_comments(&info))
            }
            other => {
                return Err(usage(format!(
                    "unknown gadget `{other}` (expected g0..g5, h1..h5, d0, d1, d4, dp0, dp1, or bsys)"
                )))
            }
        }
    };

    match artifact {
        Artifact::Game(game, comments) => {
            let counts = game.action_counts();
            let zero_sum = game.is_zero_sum();
            report.line(format!(
                "game: players {}, actions {}, zero-sum: {}",
                game.player_count(),
                counts
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                if zero_sum { "yes" } else { "no" }
            ));
            for c in &comments {
                report.line(format!("  {c}"));
            }
            let text = write_game_with_comments(&game, &comments);
            if let Some(out) = &args.out {
                std::fs::write(out, &text)
                    .map_err(|e| usage(format!("cannot write {}: {e}", out.display())))?;
                report.line(format!("wrote {}", out.display()));
            }
            report.record(json!({
                "check": "reduce",
                "gadget": gadget,
                "actions": counts,
                "zero_sum": zero_sum,
                "out": args.out.as_ref().map(|p| p.display().to_string()),
            }));
        }
        Artifact::System(bsys) => {
            let text = write_bsys(&bsys);
            if let Some(out) = &args.out {
                std::fs::write(out, &text)
                    .map_err(|e| usage(format!("cannot write {}: {e}", out.display())))?;
                report.line(format!("wrote {}", out.display()));
            }
            report.record(json!({
                "check": "reduce",
                "gadget": "bsys",
                "dim": bsys.dim(),
                "matrices": bsys.matrix_count(),
                "out": args.out.as_ref().map(|p| p.display().to_string()),
            }));
        }
    }
    Ok(report)
}

fn d_comments(info: &SymmetrizationInfo) -> Vec<String> {
    vec![
        format!("M {}", info.m),
        format!("K {}", fmt_rational(&info.k)),
    ]
}

fn bilinear_input(path: &Path, args: &ReduceArgs) -> CliResult<(BilinearSystem, Vec<String>)> {
    match load_system(path)? {
        LoadedSystem::Quadratic(mut sys) => {
            let mut pipeline = vec!["parse".to_string()];
            if args.augment {
                sys = sys.augment_irrational();
                pipeline.push("augment".into());
            }
            if !args.no_normalize {
                sys = sys.normalize_to_promise();
                pipeline.push("normalize".into());
            }
            pipeline.push("bilinearize".into());
            Ok((sys.bilinearize_homogenize(), pipeline))
        }
        LoadedSystem::Bilinear(bsys) => {
            if args.augment || args.no_normalize {
                return Err(usage(
                    "--augment and --no-normalize only apply to quadratic input",
                ));
            }
            Ok((bsys, vec!["parse".into()]))
        }
    }
}

// -------------------------------------------------------------------
// check
// -------------------------------------------------------------------

fn cmd_check(args: CheckArgs) -> CliResult<Report> {
    let mut report = Report::default();
    let game = load_game(&args.input)?;
    let x = resolve_profile(&game, &args)?;
    let property = args.property.as_str();
    let eps = match &args.eps {
        Some(s) => {
            let e = parse_rational(s).map_err(|e| usage(format!("bad --eps `{s}`: {e}")))?;
            if !e.is_positive() {
                return Err(usage(format!("--eps must be positive, got {s}")));
            }
            Some(e)
        }
        None => None,
    };

    match property {
        "ne" => {
            let verdict = check_ne(&game, &x)?;
            report_verdict(&mut report, &game, "ne", &verdict);
        }
        "pareto" => {
            let verdict = match &eps {
                Some(e) => check_pareto_with_margin(&game, &x, Some(e))?,
                None => check_pareto(&game, &x)?,
            };
            report_verdict(&mut report, &game, "pareto", &verdict);
        }
        "strong" => {
            let verdict = match &eps {
                Some(e) => check_strong_with_margin(&game, &x, Some(e))?,
                None => check_strong(&game, &x)?,
            };
            report_verdict(&mut report, &game, "strong", &verdict);
        }
        "exists-second-ne" => {
            if !check_ne(&game, &x)?.is_yes() {
                report.line("property exists-second-ne: false (the profile is not an equilibrium)".to_string());
                report.record(json!({"check": "exists-second-ne", "holds": false}));
                report.failed = true;
            } else {
                let found = find_equilibria(&game, &enum_options_for_check(&args))?;
                let holds = exists_second_ne(&found, &x);
                report.line(format!("property exists-second-ne: {holds}"));
                report.record(json!({
                    "check": "exists-second-ne",
                    "holds": holds,
                    "enumerated": found.len(),
                }));
                report.failed |= !holds;
            }
        }
        id if CONDITION_IDS.contains(&id) => {
            let params = condition_params(&game, &args)?;
            match check_condition(&game, &x, id, &params) {
                Ok(holds) => {
                    report.line(format!("property {id}: {holds}"));
                    report.record(json!({"check": id, "holds": holds}));
                    report.failed |= !holds;
                }
                Err(quadnash::Error::Unresolved(msg)) => {
                    report.line(format!("property {id}: UNKNOWN ({msg})"));
                    report.record(json!({"check": id, "holds": Value::Null, "unresolved": msg}));
                    report.failed = true;
                }
                Err(e) => return Err(e.into()),
            }
        }
        other => {
            return Err(usage(format!(
                "unknown property `{other}` (expected ne, pareto, strong, exists-second-ne, or one of: {})",
                CONDITION_IDS.join(", ")
            )))
        }
    }
    Ok(report)
}

/// Split a label list on the commas outside parentheses, so composite
/// labels like `(+,1)` survive.
fn split_labels(spec: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in spec.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(spec[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(spec[start..].trim());
    parts
}

fn resolve_profile(game: &StrategicGame, args: &CheckArgs) -> CliResult<MixedProfile> {
    match (&args.profile, &args.pure) {
        (Some(path), None) => {
            let profile = parse_profile(&read_file(path)?)?;
            Ok(profile)
        }
        (None, Some(labels)) => {
            let parts: Vec<&str> = split_labels(labels);
            if parts.len() != game.player_count() {
                return Err(usage(format!(
                    "--pure needs {} labels, got {}",
                    game.player_count(),
                    parts.len()
                )));
            }
            let mut actions = Vec::with_capacity(parts.len());
            for (p, label) in parts.iter().enumerate() {
                let a = game.action_by_label(p, label).ok_or_else(|| {
                    usage(format!("player {} has no action labeled `{label}`", p + 1))
                })?;
                actions.push(a);
            }
            Ok(MixedProfile::pure(game, &actions)?)
        }
        _ => Err(usage("give exactly one of --profile or --pure")),
    }
}

fn condition_params(game: &StrategicGame, args: &CheckArgs) -> CliResult<ConditionParams> {
    let mut params = ConditionParams::default();
    if let Some(s) = &args.u {
        params.u = parse_rational(s).map_err(|e| usage(format!("bad --u `{s}`: {e}")))?;
    }
    if let Some(k) = args.k {
        params.k = k;
    }
    if !args.t_sets.is_empty() {
        let mut sets = Vec::with_capacity(args.t_sets.len());
        for (p, spec) in args.t_sets.iter().enumerate() {
            let mut set = Vec::new();
            for label in split_labels(spec).into_iter().filter(|s| !s.is_empty()) {
                let a = game.action_by_label(p, label).ok_or_else(|| {
                    usage(format!("player {} has no action labeled `{label}`", p + 1))
                })?;
                set.push(a);
            }
            sets.push(set);
        }
        params.t_sets = sets;
    }
    Ok(params)
}

fn enum_options_for_check(args: &CheckArgs) -> EnumerationOptions {
    let mut options = EnumerationOptions::default();
    if let Some(m) = args.max_support {
        options.max_support = m;
    }
    if let Some(t) = args.tolerance {
        options.tolerance = t;
    }
    if let Some(s) = args.seed {
        options.seed = s;
    }
    options
}

fn report_verdict(report: &mut Report, game: &StrategicGame, name: &str, verdict: &Verdict) {
    match verdict {
        Verdict::Yes { witness } => {
            report.line(format!("property {name}: YES"));
            if let Some(w) = witness {
                describe_witness(report, game, w);
            }
            report.record(json!({"check": name, "verdict": "yes"}));
        }
        Verdict::No { witness, margin } => {
            let margin_text = match margin {
                None => "unconditional".to_string(),
                Some(m) => format!("up to margin {}", pretty_rational(m)),
            };
            report.line(format!("property {name}: NO ({margin_text})"));
            if let Some(w) = witness {
                describe_witness(report, game, w);
            }
            report.record(json!({
                "check": name,
                "verdict": "no",
                "margin": margin.as_ref().map(fmt_rational),
                "witness": witness.as_ref().map(witness_json),
            }));
            report.failed = true;
        }
        Verdict::Unknown { resolution } => {
            report.line(format!(
                "property {name}: UNKNOWN (search stopped at resolution {})",
                pretty_rational(resolution)
            ));
            report.record(json!({
                "check": name,
                "verdict": "unknown",
                "resolution": fmt_rational(resolution),
            }));
            report.failed = true;
        }
    }
}

fn describe_witness(report: &mut Report, game: &StrategicGame, witness: &Witness) {
    match witness {
        Witness::Deviation {
            player,
            action,
            gain,
        } => {
            report.line(format!(
                "  witness: player {} deviates to `{}` and gains {}",
                player + 1,
                game.label(*player, *action),
                fmt_qa(gain)
            ));
        }
        Witness::Improvement {
            deviators,
            strategies,
            gains,
        } => {
            let who: Vec<String> = deviators.iter().map(|d| (d + 1).to_string()).collect();
            report.line(format!(
                "  witness: players {} jointly deviate, gaining {}",
                who.join(","),
                gains.iter().map(fmt_qa).collect::<Vec<_>>().join(", ")
            ));
            for (d, s) in deviators.iter().zip(strategies) {
                report.line(format!(
                    "    player {} -> {}",
                    d + 1,
                    s.iter().map(pretty_rational).collect::<Vec<_>>().join(" ")
                ));
            }
        }
    }
}

fn witness_json(witness: &Witness) -> Value {
    match witness {
        Witness::Deviation {
            player,
            action,
            gain,
        } => json!({
            "kind": "deviation",
            "player": player,
            "action": action,
            "gain": gain.to_string(),
        }),
        Witness::Improvement {
            deviators,
            strategies,
            gains,
        } => json!({
            "kind": "improvement",
            "deviators": deviators,
            "strategies": strategies
                .iter()
                .map(|s| s.iter().map(fmt_rational).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "gains": gains.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        }),
    }
}

// -------------------------------------------------------------------
// solve
// -------------------------------------------------------------------

fn cmd_solve(args: SolveArgs) -> CliResult<Report> {
    let mut report = Report::default();
    let game = load_game(&args.input)?;
    let mut options = EnumerationOptions::default();
    if let Some(m) = args.max_support {
        options.max_support = m;
    }
    if let Some(b) = args.budget {
        options.budget = b;
    }
    if let Some(t) = args.tolerance {
        options.tolerance = t;
    }
    if let Some(s) = args.seed {
        options.seed = s;
    }

    let counts = game.action_counts();
    report.line(format!(
        "game {}: players {}, actions {}",
        args.input.display(),
        game.player_count(),
        counts
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    ));
    let found = find_equilibria(&game, &options)?;
    report.line(format!(
        "found {} equilibria (max support {})",
        found.len(),
        options.max_support
    ));
    for (idx, f) in found.iter().enumerate() {
        let kind = match f.exactness {
            Exactness::Exact => "exact",
            Exactness::Numeric => "numeric",
        };
        let shape = if f.isolated {
            "isolated"
        } else {
            "component representative"
        };
        report.line(format!("equilibrium {}: {kind}, {shape}", idx + 1));
        for p in 0..game.player_count() {
            report.line(format!(
                "  player {}: {}",
                p + 1,
                fmt_qa_list(f.profile.strategy(p))
            ));
        }
        let payoffs = game.eval_payoff(&f.profile)?;
        report.line(format!("  payoffs: {}", fmt_qa_list(&payoffs)));
        report.record(json!({
            "check": "equilibrium",
            "index": idx + 1,
            "exactness": kind,
            "isolated": f.isolated,
            "strategies": (0..game.player_count())
                .map(|p| json_qa_list(f.profile.strategy(p)))
                .collect::<Vec<_>>(),
            "payoffs": json_qa_list(&payoffs),
        }));
    }
    report.record(json!({
        "check": "solve",
        "found": found.len(),
        "max_support": options.max_support,
    }));
    Ok(report)
}

// -------------------------------------------------------------------
// lemmas
// -------------------------------------------------------------------

fn cmd_lemmas(args: LemmasArgs) -> CliResult<Report> {
    let ids: Vec<&str> = if args.suite == "all" {
        SUITE_IDS.to_vec()
    } else {
        vec![args.suite.as_str()]
    };
    let mut report = Report::default();
    for id in ids {
        let suite = run_suite(id)?;
        report.line(format!("suite {}", suite.id));
        let mut passed = 0;
        for claim in &suite.claims {
            let tag = if claim.passed { "PASS" } else { "FAIL" };
            if claim.detail.is_empty() {
                report.line(format!("  {tag} {}", claim.name));
            } else {
                report.line(format!("  {tag} {}: {}", claim.name, claim.detail));
            }
            report.record(json!({
                "check": "claim",
                "suite": suite.id,
                "name": claim.name,
                "pass": claim.passed,
                "detail": claim.detail,
            }));
            if claim.passed {
                passed += 1;
            } else {
                report.failed = true;
            }
        }
        report.line(format!(
            "suite {}: {passed}/{} claims hold",
            suite.id,
            suite.claims.len()
        ));
    }
    Ok(report)
}

// -------------------------------------------------------------------
// roundtrip
// -------------------------------------------------------------------

fn cmd_roundtrip(args: RoundtripArgs) -> CliResult<Report> {
    if !matches!(args.gadget.as_str(), "g1" | "d0" | "dp1") {
        return Err(usage(format!(
            "roundtrip target must be g1, d0, or dp1, got `{}`",
            args.gadget
        )));
    }
    if args.count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let mut report = Report::default();
    report.line(format!(
        "roundtrip: {} instances of n={} l={} through {}, base seed {}",
        args.count, args.n, args.l, args.gadget, args.seed
    ));
    for i in 0..args.count {
        let seed = args.seed + i as u64;
        match roundtrip_instance(&args, seed) {
            Ok(outcome) => {
                let ok = outcome.ok();
                report.line(format!(
                    "instance {} (seed {seed}): dim {}, matrices {}; residuals {}; NE {}; payoffs {}; projection {}",
                    i + 1,
                    outcome.dim,
                    outcome.matrices,
                    if outcome.residuals_zero { "0" } else { "NONZERO" },
                    if outcome.ne { "yes" } else { "NO" },
                    outcome.payoff_text,
                    if outcome.projection_exact { "exact" } else { "MISMATCH" },
                ));
                report.record(json!({
                    "check": "roundtrip",
                    "instance": i + 1,
                    "seed": seed,
                    "gadget": args.gadget,
                    "residuals_zero": outcome.residuals_zero,
                    "ne": outcome.ne,
                    "payoffs_expected": outcome.payoffs_expected,
                    "projection_exact": outcome.projection_exact,
                }));
                report.failed |= !ok;
            }
            Err(e) => {
                report.line(format!("instance {} (seed {seed}): FAILED ({e})", i + 1));
                report.record(json!({
                    "check": "roundtrip",
                    "instance": i + 1,
                    "seed": seed,
                    "gadget": args.gadget,
                    "error": e.to_string(),
                }));
                report.failed = true;
            }
        }
    }
    Ok(report)
}

struct RoundtripOutcome {
    dim: usize,
    matrices: usize,
    residuals_zero: bool,
    ne: bool,
    payoffs_expected: bool,
    payoff_text: String,
    projection_exact: bool,
}

impl RoundtripOutcome {
    fn ok(&self) -> bool {
        self.residuals_zero && self.ne && self.payoffs_expected && self.projection_exact
    }
}

fn roundtrip_instance(args: &RoundtripArgs, seed: u64) -> quadnash::Result<RoundtripOutcome> {
    let planted = plant_system(args.n, args.l, seed);
    let promise = planted.system.normalize_to_promise();
    let bsys = promise.bilinearize_homogenize();
    let z = promise_point(&planted.solution);
    let e = embed_corner(&qa_vec(&z))?;
    let residuals = bsys.eval(&e, &e)?;
    let residuals_zero = residuals.iter().all(|r| r.is_zero());
    let g0 = build_g0(&bsys);

    match args.gadget.as_str() {
        "g1" => {
            let g1 = extend_with_hgadget(&g0, &build_h1(&Rational::zero()))?;
            let profile = lift_solution(&bsys, &e, &e, &g1)?;
            let ne = check_ne(&g1, &profile)?.is_yes();
            let payoffs = g1.eval_payoff(&profile)?;
            let payoffs_expected = payoffs.iter().all(|v| v.is_zero());
            let projection_exact = match project_profile(bsys.dim(), &profile)? {
                Projection::Vectors { x, y } => x == e && y == e,
                Projection::NoMass => false,
            };
            Ok(RoundtripOutcome {
                dim: bsys.dim(),
                matrices: bsys.matrix_count(),
                residuals_zero,
                ne,
                payoffs_expected,
                payoff_text: fmt_qa_list(&payoffs),
                projection_exact,
            })
        }
        "d0" => {
            let (shifted, info) = build_gplus(&g0)?;
            let d0 = build_d0(&shifted)?;
            let profile = lift_symmetric(&bsys, &e, &d0)?;
            let ne = check_ne(&d0, &profile)?.is_yes();
            let payoffs = d0.eval_payoff(&profile)?;
            let expected = QuadAlgebraic::rational(info.k.clone());
            let payoffs_expected =
                profile.is_symmetric() && payoffs.iter().all(|v| *v == expected);
            let proj = project_symmetric(&d0, profile.strategy(0))?;
            let projection_exact = proj.conditionals.get(1) == Some(&Some(e.clone()))
                && proj.conditionals.get(2) == Some(&Some(e.clone()));
            Ok(RoundtripOutcome {
                dim: bsys.dim(),
                matrices: bsys.matrix_count(),
                residuals_zero,
                ne,
                payoffs_expected,
                payoff_text: fmt_qa_list(&payoffs),
                projection_exact,
            })
        }
        _ => {
            let (shifted, info) = build_gplus_prime(&g0)?;
            let d0p = build_d0(&shifted)?;
            let dp1 = extend_symmetric(&d0p, &info, SymExtension::DPrime1)?;
            let profile = lift_role_assigned(&bsys, &e, &dp1)?;
            let ne = check_ne(&dp1, &profile)?.is_yes();
            let payoffs = dp1.eval_payoff(&profile)?;
            let expected = QuadAlgebraic::rational(info.m_rational());
            let payoffs_expected =
                !profile.is_symmetric() && payoffs.iter().all(|v| *v == expected);
            let proj = project_symmetric(&dp1, profile.strategy(1))?;
            let projection_exact = proj.conditionals.get(1) == Some(&Some(e.clone()));
            Ok(RoundtripOutcome {
                dim: bsys.dim(),
                matrices: bsys.matrix_count(),
                residuals_zero,
                ne,
                payoffs_expected,
                payoff_text: fmt_qa_list(&payoffs),
                projection_exact,
            })
        }
    }
}
