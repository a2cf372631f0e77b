//! Command-line front end: parse input ideals, run the resolution
//! pipeline, and emit reports, chart-tree JSON, and DOT graphs.
//!
//! Exit codes: 0 success, 2 parse/input error, 3 center-strategy failure,
//! 4 resolution limit exceeded (a partial tree is still written),
//! 5 unsupported geometric shape, 1 any other error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use resingular::divisors::{collect_divisors, table_to_json, DivisorTable};
use resingular::ideal::Ideal;
use resingular::invariants::{
    bernstein_normal_crossing, discrepancies, dual_graph, dual_graph_dot, intersection_matrix,
    lct, multiplicities_n, multiplicities_nu, report_json, DiscrepancyKind,
};
use resingular::parse::parse_poly;
use resingular::resolve::{
    load, resolve_partial, save, tree_to_json, CenterStrategy, ChartTree, ResolutionLimits,
};
use resingular::ring::Ring;
use resingular::zeta::{monodromy_charpoly, zeta_report_json, zeta_top};
use resingular::Error;

#[derive(Parser)]
#[command(name = "resingular", version, about = "Embedded resolution of hypersurface singularities and its invariants")]
struct Cli {
    /// Number of worker threads (default: available cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve an input hypersurface and write the chart tree as JSON.
    Resolve(ResolveArgs),
    /// Identify the global exceptional divisors of a chart tree.
    Divisors(TreeArgs),
    /// Intersection matrix of the exceptional curves (surface pipeline).
    Intersections(TreeArgs),
    /// Dual graph of the exceptional curves.
    Dualgraph(DualGraphArgs),
    /// Multiplicities N and ν and the discrepancies.
    Discrepancy(DiscrepancyArgs),
    /// Log-canonical threshold.
    Lct(LctArgs),
    /// Topological zeta function and monodromy characteristic polynomial.
    Zeta(ZetaArgs),
    /// Bernstein–Sato polynomial of a normal-crossing product.
    Bernstein(BernsteinArgs),
}

#[derive(Args)]
struct ResolveArgs {
    /// Input file ("ring: x,y,z" then "ideal: <poly>").
    input: Option<PathBuf>,
    /// Inline ring variables, comma separated (with --ideal).
    #[arg(long, requires = "ideal", conflicts_with = "input")]
    ring: Option<String>,
    /// Inline ideal generator (with --ring).
    #[arg(long, requires = "ring")]
    ideal: Option<String>,
    /// Center strategy: "default", or a path to a JSON file mapping chart
    /// ids to scripted center generators.
    #[arg(long, default_value = "default")]
    strategy: String,
    #[arg(long, default_value_t = 12)]
    max_depth: usize,
    #[arg(long, default_value_t = 512)]
    max_charts: usize,
    /// Output path for the chart-tree JSON.
    #[arg(long, short, default_value = "tree.json")]
    out: PathBuf,
}

#[derive(Args)]
struct TreeArgs {
    /// Chart-tree JSON produced by `resolve`.
    #[arg(long)]
    tree: PathBuf,
    /// Output file (stdout when omitted).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DualGraphArgs {
    #[command(flatten)]
    common: TreeArgs,
    /// Emit DOT instead of JSON.
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct DiscrepancyArgs {
    #[command(flatten)]
    common: TreeArgs,
    /// Report log-discrepancies ν − N instead of plain ν − N − 1.
    #[arg(long)]
    log: bool,
}

#[derive(Args)]
struct LctArgs {
    #[command(flatten)]
    common: TreeArgs,
    /// Take the strict transform (ratio 1) into the infimum as well.
    #[arg(long)]
    include_strict: bool,
}

#[derive(Args)]
struct ZetaArgs {
    #[command(flatten)]
    common: TreeArgs,
    /// Restrict to subsets whose N-multiplicities d divides.
    #[arg(long, default_value_t = 1)]
    d: u32,
    /// Local zeta function (fiber over the origin).
    #[arg(long)]
    local: bool,
    /// Emit the full JSON report instead of the rational function.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BernsteinArgs {
    /// Normal-crossing multiplicities, comma separated (e.g. "2,3").
    #[arg(long)]
    r: String,
}

fn exit_for(e: &Error) -> ExitCode {
    let code = match e {
        Error::Parse { .. } | Error::Schema(_) | Error::Invalid(_) => 2,
        Error::StrategyFailure(_) => 3,
        Error::LimitExceeded(_) => 4,
        Error::UnsupportedShape(_) => 5,
        _ => 1,
    };
    ExitCode::from(code)
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    exit_for(e)
}

fn parse_input_text(text: &str) -> Result<Ideal, Error> {
    let mut vars: Option<Vec<String>> = None;
    let mut gens: Option<Vec<String>> = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("ring:") {
            vars = Some(rest.split(',').map(|v| v.trim().to_string()).collect());
        } else if let Some(rest) = line.strip_prefix("ideal:") {
            gens = Some(rest.split(',').map(|g| g.trim().to_string()).collect());
        } else {
            return Err(Error::Invalid(format!("unrecognized input line: {line}")));
        }
    }
    let vars = vars.ok_or_else(|| Error::Invalid("missing 'ring:' line".into()))?;
    let gens = gens.ok_or_else(|| Error::Invalid("missing 'ideal:' line".into()))?;
    build_ideal(vars, &gens)
}

fn build_ideal(vars: Vec<String>, gens: &[String]) -> Result<Ideal, Error> {
    if vars.is_empty() || vars.iter().any(String::is_empty) {
        return Err(Error::Invalid("empty ring variable list".into()));
    }
    let ring = Ring::new(vars);
    let polys = gens
        .iter()
        .map(|g| parse_poly(g, &ring))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Ideal::new(&ring, polys))
}

fn load_strategy(spec: &str) -> Result<CenterStrategy, Error> {
    if spec == "default" {
        return Ok(CenterStrategy::Default);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::Invalid(format!("cannot read strategy file {spec}: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Schema("strategy file must be a JSON object".into()))?;
    let mut centers: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (k, val) in obj {
        let id: usize = k
            .parse()
            .map_err(|_| Error::Schema(format!("bad chart id '{k}' in strategy file")))?;
        let gens = val
            .as_array()
            .ok_or_else(|| Error::Schema(format!("centers of chart {k} must be an array")))?
            .iter()
            .map(|g| {
                g.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Schema(format!("non-string center generator in chart {k}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        centers.insert(id, gens);
    }
    let name = Path::new(spec)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("scripted");
    let refs: Vec<(usize, Vec<&str>)> = centers
        .iter()
        .map(|(&id, gens)| (id, gens.iter().map(String::as_str).collect()))
        .collect();
    let slices: Vec<(usize, &[&str])> = refs.iter().map(|(id, g)| (*id, g.as_slice())).collect();
    Ok(CenterStrategy::scripted(name, &slices))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            // tolerate a closed pipe on the consuming side
            let _ = writeln!(std::io::stdout(), "{text}");
            Ok(())
        }
    }
}

fn load_tree(path: &Path) -> Result<(ChartTree, DivisorTable), Error> {
    let t = load(path)?;
    let d = collect_divisors(&t)?;
    Ok((t, d))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable value")
}

fn cmd_resolve(args: &ResolveArgs) -> Result<(), Error> {
    let input = match (&args.input, &args.ring, &args.ideal) {
        (Some(path), _, _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
            parse_input_text(&text)?
        }
        (None, Some(ring), Some(ideal)) => build_ideal(
            ring.split(',').map(|v| v.trim().to_string()).collect(),
            &[ideal.clone()],
        )?,
        _ => {
            return Err(Error::Invalid(
                "provide an input file or both --ring and --ideal".into(),
            ))
        }
    };
    let strategy = load_strategy(&args.strategy)?;
    let limits = ResolutionLimits {
        max_depth: args.max_depth,
        max_charts: args.max_charts,
    };
    let (tree, err) = resolve_partial(&input, &strategy, &limits);
    match err {
        None => {
            save_with_divisors(&tree, &args.out)?;
            println!(
                "resolved: {} charts, {} final",
                tree.charts.len(),
                tree.final_chart_ids().len()
            );
            Ok(())
        }
        Some(e @ Error::LimitExceeded(_)) => {
            // still write what was computed
            save(&tree, &args.out)?;
            eprintln!("partial tree written to {}", args.out.display());
            Err(e)
        }
        Some(e) => Err(e),
    }
}

fn save_with_divisors(tree: &ChartTree, out: &Path) -> Result<(), Error> {
    let mut v = tree_to_json(tree);
    if let Ok(d) = collect_divisors(tree) {
        v["divisors"] = table_to_json(&d);
    }
    std::fs::write(out, pretty(&v) + "\n")
        .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", out.display())))
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Resolve(args) => cmd_resolve(args),
        Command::Divisors(args) => {
            let (_, d) = load_tree(&args.tree)?;
            emit(&args.out, &pretty(&table_to_json(&d)))
        }
        Command::Intersections(args) => {
            let (t, d) = load_tree(&args.tree)?;
            let m = intersection_matrix(&t, &d)?;
            let v = serde_json::json!({
                "labels": m.labels.iter().map(|(l, c)| serde_json::json!([l, c])).collect::<Vec<_>>(),
                "entries": m.entries,
            });
            emit(&args.out, &pretty(&v))
        }
        Command::Dualgraph(args) => {
            let (t, d) = load_tree(&args.common.tree)?;
            let g = dual_graph(&intersection_matrix(&t, &d)?);
            if args.dot {
                emit(&args.common.out, dual_graph_dot(&g).trim_end())
            } else {
                let v = serde_json::json!({
                    "self_intersections": g.self_intersections,
                    "edges": g.edges,
                });
                emit(&args.common.out, &pretty(&v))
            }
        }
        Command::Discrepancy(args) => {
            let (t, d) = load_tree(&args.common.tree)?;
            let kind = if args.log {
                DiscrepancyKind::Log
            } else {
                DiscrepancyKind::Plain
            };
            let v = serde_json::json!({
                "N": multiplicities_n(&t, &d)?.0,
                "nu": multiplicities_nu(&t, &d)?.0,
                "discrepancy": discrepancies(&t, &d, kind)?,
                "report": report_json(&t, &d)?,
            });
            emit(&args.common.out, &pretty(&v))
        }
        Command::Lct(args) => {
            let (t, d) = load_tree(&args.common.tree)?;
            let l = lct(&t, &d, args.include_strict)?;
            emit(&args.common.out, &l.to_string())
        }
        Command::Zeta(args) => {
            let (t, d) = load_tree(&args.common.tree)?;
            if args.json {
                let v = zeta_report_json(&t, &d, args.d, args.local)?;
                emit(&args.common.out, &pretty(&v))
            } else {
                let z = zeta_top(&t, &d, args.d, args.local)?;
                let mono = monodromy_charpoly(&t, &d)?;
                emit(
                    &args.common.out,
                    &format!("{}\n{}", z.to_string_with("s"), mono.to_string_with("s")),
                )
            }
        }
        Command::Bernstein(args) => {
            let r = args
                .r
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<u32>()
                        .ok()
                        .filter(|&x| x >= 1)
                        .ok_or_else(|| Error::Invalid(format!("bad multiplicity '{v}'")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            emit(&None, &bernstein_normal_crossing(&r).to_string_with("s"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
