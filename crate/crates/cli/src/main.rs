//! Command-line front end for the reduction catalog.

use clap::{Args, Parser, Subcommand};
use levinlab::catalog::{entries, lookup, Expected};
use levinlab::file::InstanceFile;
use levinlab::harness::{generate, run_suite, write_reports, EntryReport, GeneratorProfile, SuiteConfig, SuiteEntry};
use levinlab::instance::{Presentation, Variant};
use levinlab::reduction::compose_chain;
use levinlab::stream::{default_budget, StreamHandle};
use levinlab::verify::{DEFAULT_BOUND, DEFAULT_HORIZON};
use levinlab::{Catalog, Error, Problem, ReductionRef, Witness};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DIVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(name = "levinlab", version, about = "Run and verify witnessed many-one reductions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List problems, reductions, or the reduction digraph.
    List {
        #[arg(long)]
        problems: bool,
        #[arg(long)]
        reductions: bool,
        /// DOT digraph of the reductions expected to pass.
        #[arg(long)]
        graph: bool,
    },
    /// Write a generated instance file.
    Gen {
        problem: String,
        /// Description shape, e.g. `seq`, `rat_seq`, `real_seq`.
        #[arg(long)]
        variant: Option<String>,
        #[arg(long, env = "LEVINLAB_SEED", default_value_t = 1)]
        seed: u64,
        /// Trial slot to draw.
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Take the first slot from `--trial` on with this membership.
        #[arg(long)]
        member: Option<bool>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Apply a reduction to an instance file.
    Run(RunArgs),
    /// Apply a composed chain; same as `run --chain`.
    Chain {
        /// Comma-separated reduction ids.
        chain: String,
        file: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Verify catalog entries on seeded instances and write reports.
    Verify {
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u64,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        #[arg(long, env = "LEVINLAB_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        entry: Vec<String>,
        #[arg(long)]
        all: bool,
        /// Report directory.
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
    /// Summarize a report directory as a table and a DOT digraph.
    Report {
        #[arg(default_value = "reports")]
        dir: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Comma-separated reduction ids, composed left to right.
    #[arg(long)]
    chain: Option<String>,
    /// `REDUCTION FILE`, or just `FILE` with `--chain`.
    #[arg(num_args = 1..=2, required = true)]
    args: Vec<String>,
    #[command(flatten)]
    opts: RunOpts,
}

#[derive(Args)]
struct RunOpts {
    /// Source witness to map forward.
    #[arg(long)]
    witness: Vec<String>,
    /// Target witness to map backward.
    #[arg(long)]
    back: Vec<String>,
    #[arg(long, default_value_t = 32)]
    horizon: u64,
}

/// A failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = if e.is_divergence() { EXIT_DIVERGENCE } else { EXIT_USAGE };
        Fail(code, e.to_string())
    }
}

type CmdResult = std::result::Result<u8, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::List {
            problems,
            reductions,
            graph,
        } => list(problems, reductions, graph),
        Command::Gen {
            problem,
            variant,
            seed,
            trial,
            member,
            out,
        } => gen(&problem, variant.as_deref(), seed, trial, member, out.as_deref()),
        Command::Run(a) => match (a.chain, a.args.as_slice()) {
            (Some(chain), [file]) => run(&chain, Path::new(file), &a.opts),
            (None, [id, file]) => run(id, Path::new(file), &a.opts),
            _ => Err(Fail(EXIT_USAGE, "expected REDUCTION FILE, or --chain LIST FILE".into())),
        },
        Command::Chain { chain, file, opts } => run(&chain, &file, &opts),
        Command::Verify {
            trials,
            horizon,
            bound,
            seed,
            entry,
            all,
            out,
        } => {
            let cfg = SuiteConfig {
                trials,
                horizon,
                bound,
                seed,
                continuity_every: 10,
            };
            verify(&entry, all, &cfg, &out)
        }
        Command::Report { dir } => report(&dir),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn list(problems: bool, reductions: bool, graph: bool) -> CmdResult {
    let all = !(problems || reductions || graph);
    let mut out = String::new();
    if problems || all {
        for c in Catalog::ALL {
            let _ = writeln!(out, "{:<12} {:<12} {}", c.key(), c.display_name(), c.summary());
        }
    }
    if reductions || all {
        if !out.is_empty() {
            out.push('\n');
        }
        for e in entries() {
            let r = &e.reduction;
            let _ = writeln!(
                out,
                "{:<22} {:>10} -> {:<12} {:<15} [{}]",
                e.id,
                r.source().id(),
                r.target().id(),
                e.expected.to_string(),
                e.statement
            );
        }
    }
    if graph {
        out.push_str(&dot(entries().iter().filter(|e| e.expected == Expected::Pass).map(|e| {
            let r = &e.reduction;
            (r.source().id(), r.target().id(), e.id.to_string(), None)
        })));
    }
    print!("{out}");
    Ok(0)
}

/// `(source, target, label, matched)` edges as a DOT digraph.
fn dot(edges: impl Iterator<Item = (String, String, String, Option<bool>)>) -> String {
    let mut out = String::from("digraph reductions {\n");
    for (s, t, label, matched) in edges {
        let style = match matched {
            Some(false) => ", color=red",
            _ => "",
        };
        let _ = writeln!(out, "  \"{s}\" -> \"{t}\" [label=\"{label}\"{style}];");
    }
    out.push_str("}\n");
    out
}

fn parse_variant(s: &str) -> Result<Variant, Fail> {
    const ALL: [Variant; 13] = [
        Variant::Seq,
        Variant::RatSeq,
        Variant::RealSeq,
        Variant::PreReal,
        Variant::Family,
        Variant::Graph(Presentation::Subset),
        Variant::Graph(Presentation::Function),
        Variant::Action,
        Variant::Poset,
        Variant::LinearOrder,
        Variant::BottomedPoset,
        Variant::Tree,
        Variant::Tagged,
    ];
    ALL.into_iter()
        .find(|v| v.to_string() == s)
        .ok_or_else(|| Fail(EXIT_USAGE, format!("unknown variant `{s}`")))
}

fn gen(problem: &str, variant: Option<&str>, seed: u64, trial: u64, member: Option<bool>, out: Option<&Path>) -> CmdResult {
    let problem = Catalog::parse(problem)?;
    let variant = match variant {
        Some(v) => parse_variant(v)?,
        None => GeneratorProfile::default_variant(problem),
    };
    if !problem.accepts(variant) {
        return Err(Error::mismatch(problem.key(), variant.to_string()).into());
    }
    let profile = GeneratorProfile::new(problem, variant, seed, DEFAULT_HORIZON);
    let k = (trial..)
        .find(|&k| member.is_none_or(|m| m != profile.non_member_slot(k)))
        .expect("both polarities recur");
    let text = InstanceFile::new(problem, generate(&profile, k)).to_json();
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn resolve(chain: &str) -> Result<ReductionRef, Fail> {
    let rs = chain
        .split(',')
        .map(|id| lookup(id.trim()).map(|e| e.reduction))
        .collect::<levinlab::Result<Vec<_>>>()?;
    Ok(compose_chain(&rs)?)
}

fn run(chain: &str, file: &Path, opts: &RunOpts) -> CmdResult {
    let r = resolve(chain)?;
    let text = fs::read_to_string(file).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", file.display())))?;
    let f = InstanceFile::parse(&text)?;
    let d = f.instance;
    r.source().check_variant(&d)?;
    if let Some(v) = r.input_variant().filter(|&v| v != d.variant()) {
        return Err(Error::mismatch(v.to_string(), d.variant().to_string()).into());
    }
    let budget = default_budget(opts.horizon, d.universe());
    let image = r.image(&d, opts.horizon)?;
    let mut out = String::new();
    let _ = writeln!(out, "reduction: {} ({} -> {})", r.id(), r.source().id(), r.target().id());
    let _ = writeln!(out, "image: {}", serde_json::to_string(&image).expect("instances serialize"));
    let prefix = r.image_prefix(&StreamHandle::of(&d, budget), opts.horizon)?;
    let shown: Vec<String> = prefix.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "prefix: {}", shown.join(" "));
    for token in &opts.witness {
        let w: Witness = token.parse()?;
        let v = r.forward(&w, &StreamHandle::of(&d, budget))?;
        let _ = writeln!(out, "forward {w} -> {v}");
    }
    for token in &opts.back {
        let v: Witness = token.parse()?;
        let w = r.backward(&v, &StreamHandle::of(&d, budget))?;
        let _ = writeln!(out, "backward {v} -> {w}");
    }
    print!("{out}");
    Ok(0)
}

fn verify(ids: &[String], all: bool, cfg: &SuiteConfig, out: &Path) -> CmdResult {
    let chosen = if all {
        entries()
    } else {
        ids.iter().map(|id| lookup(id)).collect::<levinlab::Result<Vec<_>>>()?
    };
    let suite = chosen
        .iter()
        .map(SuiteEntry::from_catalog)
        .collect::<levinlab::Result<Vec<_>>>()?;
    let reports = run_suite(&suite, cfg);
    write_reports(out, &reports)?;
    for r in &reports {
        println!("{}", summary_line(r));
    }
    let matched = reports.iter().all(|r| r.matched);
    println!(
        "{} of {} entries matched their expected verdict; reports in {}",
        reports.iter().filter(|r| r.matched).count(),
        reports.len(),
        out.display()
    );
    Ok(if matched { 0 } else { EXIT_MISMATCH })
}

fn summary_line(r: &EntryReport) -> String {
    let mut line = format!(
        "{:<22} expected {:<15} {:>4}/{:<4} passed, {:>3} non-members, {} divergences -> {}",
        r.entry,
        r.expected.to_string(),
        r.passed,
        r.trials,
        r.non_members,
        r.divergences,
        if r.matched { "matched" } else { "MISMATCH" }
    );
    if r.vacuous {
        line.push_str(" (no trials)");
    }
    if let Some(cx) = &r.counterexample {
        let _ = write!(
            line,
            "; counterexample: {} {} -> {} on {}",
            cx.check,
            cx.input,
            cx.output,
            serde_json::to_string(&cx.instance).expect("instances serialize")
        );
    }
    line
}

fn report(dir: &Path) -> CmdResult {
    let path = dir.join("summary.jsonl");
    let text = fs::read_to_string(&path).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    let reports = text
        .lines()
        .map(|l| serde_json::from_str::<EntryReport>(l).map_err(|e| Fail(EXIT_USAGE, format!("{}: {e}", path.display()))))
        .collect::<Result<Vec<_>, _>>()?;
    for r in &reports {
        println!("{}", summary_line(r));
    }
    let edges = reports.iter().filter_map(|r| {
        let e = lookup(&r.entry).ok()?;
        let sound = r.expected == Expected::Pass;
        sound.then(|| (e.reduction.source().id(), e.reduction.target().id(), r.entry.clone(), Some(r.matched)))
    });
    print!("{}", dot(edges));
    Ok(if reports.iter().all(|r| r.matched) { 0 } else { EXIT_MISMATCH })
}
