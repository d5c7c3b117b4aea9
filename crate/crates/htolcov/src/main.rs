//! Command-line interface: `measure` scores a test suite against
//! criterion objectives or a hyperlabel file; `bench` times the pipeline
//! over growing random suites.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use htolcov::bench::run_bench;
use htolcov::criteria::{annotate, CriterionId};
use htolcov::dnf::normalize_dnf;
use htolcov::htl::{check_well_formed, parse_htl, print_hyperlabel};
use htolcov::minilang::ast::Program;
use htolcov::minilang::parser::parse_program;
use htolcov::pipeline::{measure, MeasureConfig, MeasureItem};
use htolcov::trace::parse_suite;

#[derive(Parser)]
#[command(name = "htolcov", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Measure a suite against coverage objectives.
    Measure(MeasureArgs),
    /// Time the pipeline over random suites of growing size.
    Bench(BenchArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Program source file.
    #[arg(long)]
    program: PathBuf,
    /// Criteria to annotate, comma separated (e.g. `MCC,RACC`).
    #[arg(long, value_delimiter = ',')]
    criterion: Vec<CriterionId>,
    /// Entry function; defaults to the first one in the program.
    #[arg(long)]
    entry: Option<String>,
    /// Per-run step limit.
    #[arg(long, default_value_t = htolcov::trace::DEFAULT_STEP_LIMIT)]
    step_limit: usize,
    /// Guard-evaluation budget per objective during consolidation.
    #[arg(long, default_value_t = htolcov::coverage::DEFAULT_COMBINATION_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Test suite file, one `id | name=value, ...` line per test.
    #[arg(long)]
    suite: PathBuf,
    /// Extra hyperlabel objectives, a file of `name = <hyperlabel>;`
    /// definitions.
    #[arg(long)]
    htl: Option<PathBuf>,
    /// Print every objective's hyperlabel before measuring.
    #[arg(long)]
    dump_htl: bool,
    /// Print every objective's disjunctive normal form before measuring.
    #[arg(long)]
    dump_dnf: bool,
    /// Write the per-objective report as CSV to this path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Minimal passing score.
    #[arg(long, default_value_t = 1.0)]
    threshold: f64,
    /// Print the verdict of every objective, not just the summary.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Suite sizes as `start:stop:step`, inclusive.
    #[arg(long, default_value = "100:1000:100")]
    sizes: String,
    /// Repetitions per size; timings are medians.
    #[arg(long, default_value_t = 7)]
    reps: usize,
    /// Seed for the random suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().cmd {
        Cmd::Measure(args) => run_measure(args),
        Cmd::Bench(args) => run_bench_cmd(args),
    }
}

fn load_program(common: &CommonArgs) -> Result<Program> {
    let src = std::fs::read_to_string(&common.program)
        .with_context(|| format!("reading {}", common.program.display()))?;
    let mut p = parse_program(&src)
        .map_err(|e| anyhow::anyhow!("{}: {e}", common.program.display()))?;
    if let Some(name) = &common.entry {
        if !p.set_entry(name) {
            bail!("no function named `{name}` in {}", common.program.display());
        }
    }
    Ok(p)
}

fn objectives(p: &Program, common: &CommonArgs) -> Result<Vec<MeasureItem>> {
    let mut items = Vec::new();
    for &c in &common.criterion {
        let objs = annotate(p, c).with_context(|| format!("annotating {c}"))?;
        items.extend(objs.into_iter().map(MeasureItem::from));
    }
    Ok(items)
}

fn run_measure(args: MeasureArgs) -> Result<ExitCode> {
    let p = load_program(&args.common)?;
    let mut items = objectives(&p, &args.common)?;
    if let Some(path) = &args.htl {
        let src = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let defs =
            parse_htl(&src, &p).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        for d in &defs {
            let violations = check_well_formed(&d.hl);
            if !violations.is_empty() {
                bail!(
                    "{}: `{}` is ill-formed: {}",
                    path.display(),
                    d.name,
                    violations
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join("; ")
                );
            }
        }
        items.extend(defs.into_iter().map(MeasureItem::from));
    }
    if args.common.criterion.is_empty() && args.htl.is_none() {
        bail!("nothing to measure; pass --criterion and/or --htl");
    }

    if args.dump_htl {
        for item in &items {
            println!("{} = {};", item.id, print_hyperlabel(&item.hl));
        }
    }
    if args.dump_dnf {
        for item in &items {
            let dnf = normalize_dnf(&item.hl, htolcov::dnf::DEFAULT_DISJUNCT_CAP)
                .map_err(|e| anyhow::anyhow!("normalizing {}: {e}", item.id))?;
            println!(
                "{} = {};",
                item.id,
                print_hyperlabel(&htolcov::dnf::to_hyperlabel(&dnf))
            );
        }
    }

    let suite_text = std::fs::read_to_string(&args.suite)
        .with_context(|| format!("reading {}", args.suite.display()))?;
    let suite =
        parse_suite(&suite_text).map_err(|e| anyhow::anyhow!("{}: {e}", args.suite.display()))?;

    let cfg = MeasureConfig {
        step_limit: args.common.step_limit,
        budget: args.common.budget,
        ..MeasureConfig::default()
    };
    let report = measure(&p, &items, &suite.tests, &cfg)?;
    print!("{}", report.render_text(args.verbose));
    if let Some(path) = &args.report {
        std::fs::write(path, report.render_csv())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if report.passed(args.threshold) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn parse_sizes(spec: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        bail!("--sizes wants `start:stop:step`, got `{spec}`");
    };
    let (start, stop, step): (usize, usize, usize) =
        (start.parse()?, stop.parse()?, step.parse()?);
    if step == 0 || stop < start {
        bail!("--sizes wants a positive step and stop >= start");
    }
    Ok((start..=stop).step_by(step).collect())
}

fn run_bench_cmd(args: BenchArgs) -> Result<ExitCode> {
    let p = load_program(&args.common)?;
    if args.common.criterion.is_empty() {
        bail!("nothing to bench; pass --criterion");
    }
    if args.reps == 0 {
        bail!("--reps must be positive");
    }
    let sizes = parse_sizes(&args.sizes)?;
    let cfg = MeasureConfig {
        step_limit: args.common.step_limit,
        budget: args.common.budget,
        ..MeasureConfig::default()
    };
    println!("{:<10} {:>8} {:>12} {:>12} {:>9}", "criterion", "size", "baseline_s", "measure_s", "overhead");
    for &c in &args.common.criterion {
        let items: Vec<MeasureItem> = annotate(&p, c)
            .with_context(|| format!("annotating {c}"))?
            .into_iter()
            .map(MeasureItem::from)
            .collect();
        let series = run_bench(&p, c.name(), &items, &sizes, args.reps, args.seed, &cfg)?;
        for pt in &series.points {
            println!(
                "{:<10} {:>8} {:>12.6} {:>12.6} {:>8.2}x",
                series.tag,
                pt.size,
                pt.baseline_secs,
                pt.measure_secs,
                pt.overhead()
            );
        }
        let fit = series.fit();
        println!(
            "{:<10} fit: {:.3e} s/test + {:.3e} s, r2 {:.4}",
            series.tag, fit.slope, fit.intercept, fit.r2
        );
    }
    Ok(ExitCode::SUCCESS)
}
