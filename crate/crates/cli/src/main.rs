use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use propchoose::{
    classify, index_to_assignment, verify_choosable, Color, EnumerationLimit, EnumerationMode,
    ListAssignment, Solver, SolverOptions, Status, VertexOrder, DEFAULT_ENUMERATION_CAP,
};
use propchoose_cli::{
    build_witness, exit, exit_code, parse_graph, reproduce_p7, survey, verdict_json, RunReport,
    SurveyOptions, UsageError,
};

/// Proportional list coloring with a bounded palette.
#[derive(Parser)]
#[command(name = "propchoose", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Full,
    Canonical,
}

impl From<Mode> for EnumerationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Full => EnumerationMode::Full,
            Mode::Canonical => EnumerationMode::Canonical,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Smart,
    Natural,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Look for a proportional coloring of one list assignment.
    Solve {
        #[arg(long)]
        graph: String,
        /// A JSON assignment file, or an assignment index (needs -k and -l).
        #[arg(long)]
        assignment: String,
        #[arg(short, long)]
        k: Option<usize>,
        #[arg(short = 'l', long = "ell")]
        ell: Option<Color>,
        #[arg(long, value_enum, default_value = "smart")]
        order: Order,
        #[arg(long, value_enum)]
        emit_coloring: Option<Emit>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check every (k, ell)-assignment of a graph.
    Verify {
        #[arg(long)]
        graph: String,
        #[arg(short, long)]
        k: usize,
        #[arg(short = 'l', long = "ell")]
        ell: Color,
        #[arg(long, value_enum, default_value = "full")]
        mode: Mode,
        #[arg(long, env = "PROPCHOOSE_JOBS", default_value_t = 1)]
        jobs: usize,
        /// Refuse to enumerate more assignments than this.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
        /// Enumerate even past the cap.
        #[arg(long)]
        force: bool,
        /// Count every failing assignment instead of stopping at the first.
        #[arg(long)]
        exhaustive: bool,
        /// No progress lines on standard error.
        #[arg(long)]
        quiet: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Decide choosability from structure alone, when a rule applies.
    Classify {
        #[arg(long)]
        graph: String,
        #[arg(short = 'l', long = "ell")]
        ell: Color,
        /// Print the rules tried and the evidence used.
        #[arg(long)]
        explain: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write a known bad assignment as JSON.
    Witness {
        /// star23, evencycle24:<n>, doubleclaw25, p3p3, p9 or cycle23:<n>
        #[arg(long)]
        name: String,
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-run a fixed computation and check its known answer.
    Reproduce {
        #[arg(value_parser = ["p7"])]
        target: String,
        #[arg(long, value_enum, default_value = "full")]
        mode: Mode,
        #[arg(long, env = "PROPCHOOSE_JOBS", default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        quiet: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare the classifier with exhaustive checks on all small labeled graphs.
    Survey {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(short, long, default_value_t = 2)]
        k: usize,
        /// Comma-separated palette bounds.
        #[arg(
            short = 'l',
            long = "ell",
            value_delimiter = ',',
            default_value = "2,3,4"
        )]
        ell: Vec<Color>,
        #[arg(long, value_enum, default_value = "canonical")]
        mode: Mode,
        #[arg(long, env = "PROPCHOOSE_JOBS", default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn write_report(path: Option<&PathBuf>, report: &RunReport) -> Result<()> {
    match path {
        Some(path) => report.write(path),
        None => Ok(()),
    }
}

fn load_assignment(
    arg: &str,
    n: usize,
    k: Option<usize>,
    ell: Option<Color>,
) -> Result<ListAssignment> {
    if let Ok(index) = arg.parse::<u64>() {
        let (Some(k), Some(ell)) = (k, ell) else {
            return Err(UsageError("an assignment index needs -k and -l".into()).into());
        };
        let g = propchoose::Graph::empty(n)?;
        return index_to_assignment(&g, k, ell, index)
            .map_err(|e| UsageError(e.to_string()).into());
    }
    let text = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
    let l: ListAssignment =
        serde_json::from_str(&text).map_err(|e| UsageError(format!("{arg}: {e}")))?;
    if k.is_some_and(|k| k != l.k()) || ell.is_some_and(|ell| ell != l.ell()) {
        return Err(UsageError(format!("{arg} is a ({},{})-assignment", l.k(), l.ell())).into());
    }
    Ok(l)
}

fn run(cli: Cli) -> Result<i32> {
    let started = Instant::now();
    match cli.command {
        Command::Solve {
            graph,
            assignment,
            k,
            ell,
            order,
            emit_coloring,
            report,
        } => {
            let (spec, g) = parse_graph(&graph)?;
            let l = load_assignment(&assignment, g.order(), k, ell)?;
            l.check_bound(&g).map_err(|e| UsageError(e.to_string()))?;
            let order = match order {
                Order::Smart => VertexOrder::Smart,
                Order::Natural => VertexOrder::Natural,
            };
            let outcome = Solver::new(
                &g,
                SolverOptions {
                    order,
                    ..SolverOptions::default()
                },
            )
            .solve(&l);
            match (&outcome.coloring, emit_coloring) {
                (Some(c), Some(Emit::Json)) => println!("{}", serde_json::to_string(c.colors())?),
                (Some(c), None) => {
                    let colors: Vec<String> = c.colors().iter().map(u16::to_string).collect();
                    println!("proportional coloring: {}", colors.join(" "));
                }
                (None, _) => println!(
                    "no proportional coloring ({} search nodes)",
                    outcome.nodes_explored
                ),
            }
            write_report(
                report.as_ref(),
                &RunReport::new(
                    "solve",
                    json!({"graph": spec.to_string(), "assignment": l}),
                    serde_json::to_value(&outcome)?,
                    started,
                ),
            )?;
            Ok(if outcome.is_found() {
                exit::OK
            } else {
                exit::NEGATIVE
            })
        }
        Command::Verify {
            graph,
            k,
            ell,
            mode,
            jobs,
            cap,
            force,
            exhaustive,
            quiet,
            report,
        } => {
            let (spec, g) = parse_graph(&graph)?;
            let options = propchoose::VerifyOptions {
                mode: mode.into(),
                jobs,
                limit: EnumerationLimit { cap, force },
                exhaustive,
                progress: !quiet,
                ..propchoose::VerifyOptions::default()
            };
            let verdict = verify_choosable(&g, k, ell, &options)?;
            if verdict.choosable {
                println!(
                    "{spec}: proportionally ({k},{ell})-choosable; {} assignments checked ({} mode)",
                    verdict.assignments_checked, verdict.mode
                );
            } else {
                let w = verdict.witness.as_ref().expect("witness");
                println!("{spec}: not proportionally ({k},{ell})-choosable");
                println!("witness #{}: {}", w.index, w.assignment);
            }
            if let Some(failing) = verdict.failing_assignments {
                println!("failing assignments: {failing}");
            }
            write_report(
                report.as_ref(),
                &RunReport::new(
                    "verify",
                    json!({"graph": spec.to_string(), "k": k, "ell": ell, "mode": verdict.mode, "jobs": jobs}),
                    verdict_json(&spec, &verdict),
                    started,
                ),
            )?;
            Ok(if verdict.choosable {
                exit::OK
            } else {
                exit::NEGATIVE
            })
        }
        Command::Classify {
            graph,
            ell,
            explain,
            report,
        } => {
            let (spec, g) = parse_graph(&graph)?;
            let c = classify(&g, ell).map_err(|e| UsageError(e.to_string()))?;
            let status = match c.status {
                Status::KnownYes => "proportionally (2,{ell})-choosable",
                Status::KnownNo => "not proportionally (2,{ell})-choosable",
                Status::Unknown => "unknown",
            }
            .replace("{ell}", &ell.to_string());
            match &c.rule {
                Some(rule) => println!("{spec}: {status} [{rule}]"),
                None => println!("{spec}: {status}"),
            }
            if explain {
                for line in &c.trace {
                    println!("  {line}");
                }
            }
            write_report(
                report.as_ref(),
                &RunReport::new(
                    "classify",
                    json!({"graph": spec.to_string(), "ell": ell}),
                    serde_json::to_value(&c)?,
                    started,
                ),
            )?;
            Ok(if c.status == Status::KnownNo {
                exit::NEGATIVE
            } else {
                exit::OK
            })
        }
        Command::Witness { name, graph, out } => {
            let host = graph.as_deref().map(parse_graph).transpose()?;
            let w = build_witness(&name, host.as_ref().map(|(_, g)| g))?;
            let holds = w.holds();
            std::fs::write(&out, serde_json::to_string_pretty(&w)? + "\n")
                .with_context(|| format!("writing {}", out.display()))?;
            println!("{}: {} ({})", w.name, w.assignment, w.source);
            println!("solver confirms no proportional coloring: {holds}");
            Ok(if holds { exit::OK } else { exit::NEGATIVE })
        }
        Command::Reproduce {
            target: _,
            mode,
            jobs,
            quiet,
            report,
        } => {
            let run = reproduce_p7(mode.into(), jobs, !quiet)?;
            println!(
                "P7 is proportionally (2,4)-choosable; {} assignments checked",
                run.result["assignments_checked"]
            );
            write_report(report.as_ref(), &run)?;
            Ok(exit::OK)
        }
        Command::Survey {
            max_n,
            k,
            ell,
            mode,
            jobs,
            csv,
            report,
        } => {
            let options = SurveyOptions {
                max_n,
                k,
                ells: ell,
                mode: mode.into(),
                jobs,
            };
            let result = survey(&options)?;
            print!("{}", result.to_csv());
            println!(
                "disagreements: {}, equitable mismatches: {}, unknown rate: {:.3}",
                result.total_disagreements(),
                result.total_equitable_mismatches(),
                result.unknown_rate()
            );
            if let Some(path) = csv {
                std::fs::write(&path, result.to_csv())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let clean =
                result.total_disagreements() == 0 && result.total_equitable_mismatches() == 0;
            write_report(
                report.as_ref(),
                &RunReport::new(
                    "survey",
                    serde_json::to_value(&options)?,
                    serde_json::to_value(&result)?,
                    started,
                ),
            )?;
            Ok(if clean { exit::OK } else { exit::NEGATIVE })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
