//! `odometer`: command-line access to the bigraph library.
//!
//! Exit codes: 0 success, 1 other failure, 2 syntax error, 3 structural or
//! invalid pair, 4 index limit not above the seed's index, 5 fixture mismatch.

use anyhow::{anyhow, bail, Context};
use bigraph_odometer::bigraph::annular_multiplicities;
use bigraph_odometer::classify::{compare_with_fixtures, run_index5_classification, Fixtures, PipelineConfig};
use bigraph_odometer::fixtures::parse_pairs;
use bigraph_odometer::obstructions::{
    associativity_check, dual_count_check, even_quadruple_prefix_check, triple_point_check, AssociativityScope,
    ObstructionReport,
};
use bigraph_odometer::odometer::{extend_graph, extend_pair_equal, extend_pair_unequal, DEFAULT_SLACK};
use bigraph_odometer::spectral::{dimension_vector, graph_norm, DimensionMode};
use bigraph_odometer::{parse_bigraph, run_odometer, BigraphPair, BigraphWithDuals, ClassificationStatement, Error, OdometerConfig};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "odometer", version, about = "Enumerate principal graph pairs below an index limit")]
struct Cli {
    /// Worker threads for parallel steps (default: all cores).
    #[arg(long, global = true, env = "ODOMETER_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a bigraph (or a pair) and describe it.
    Parse {
        graphs: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Graph norm and index.
    Norm {
        graph: String,
        #[arg(long)]
        json: bool,
    },
    /// Vertex dimensions at a value of q.
    Dims {
        graph: String,
        #[arg(long)]
        q: f64,
        #[arg(long, value_enum, default_value_t = Mode::Truncated)]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// One-depth extensions of a graph or a pair.
    Extend {
        #[arg(long)]
        index_limit: f64,
        #[arg(long, env = "ODOMETER_SLACK", default_value_t = DEFAULT_SLACK)]
        slack: f64,
        graphs: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run obstruction tests on a pair. With no test flags, runs them all.
    Check {
        #[arg(long, value_enum)]
        associativity: Option<Scope>,
        #[arg(long)]
        triple_point: bool,
        #[arg(long)]
        dual_counts: bool,
        #[arg(long)]
        even_quadruple: bool,
        first: String,
        second: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the odometer from a seed pair.
    Odometer {
        #[arg(long)]
        index_limit: f64,
        #[arg(long, env = "ODOMETER_SLACK", default_value_t = DEFAULT_SLACK)]
        slack: f64,
        /// Drop graphs whose index is not strictly below the limit.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        max_steps: Option<usize>,
        /// File of stop weeds, one pair per line.
        #[arg(long)]
        stop_weeds: Option<PathBuf>,
        /// Write the search tree in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        first: String,
        second: String,
    },
    /// Run the full classification below index 5.
    Classify {
        #[arg(long, default_value_t = 5.0)]
        index_limit: f64,
        #[arg(long, env = "ODOMETER_SLACK", default_value_t = DEFAULT_SLACK)]
        slack: f64,
        /// Directory of expected-result files; any difference exits with 5.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Write one DOT file per family run here.
        #[arg(long)]
        dot_dir: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Truncated,
    Finite,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    /// Skip pairs of deepest vertices.
    Local,
    /// Every pair.
    Global,
}

/// Failures that carry their own exit status.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(Exit(code, _)) = e.downcast_ref::<Exit>() {
        return *code;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Syntax { .. }) => 2,
        Some(Error::Structure(_)) | Some(Error::InvalidPair(_)) => 3,
        _ => 1,
    }
}

fn print_json<T: Serialize>(v: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn graph_arg(s: &str) -> anyhow::Result<BigraphWithDuals> {
    Ok(parse_bigraph(s)?)
}

fn pair_args(a: &str, b: &str) -> anyhow::Result<BigraphPair> {
    let first = graph_arg(a)?;
    let second = graph_arg(b)?;
    Ok(BigraphPair::new(first, second)?)
}

#[derive(Serialize)]
struct GraphInfo {
    graph: String,
    depth: usize,
    supertransitivity: usize,
    vertices: Vec<usize>,
    duals: Vec<Vec<usize>>,
    norm: f64,
    index: f64,
    annular_multiplicities: Vec<String>,
}

fn graph_info(g: &BigraphWithDuals) -> GraphInfo {
    let norm = graph_norm(g.graph());
    let annular = annular_multiplicities(g.graph(), g.depth())
        .map(|a| a.iter().map(|x| x.to_string()).collect())
        .unwrap_or_default();
    GraphInfo {
        graph: g.to_string(),
        depth: g.depth(),
        supertransitivity: g.supertransitivity(),
        vertices: g.graph().vertex_counts(),
        duals: g.duals().groups().iter().map(|grp| grp.iter().map(|&j| j + 1).collect()).collect(),
        norm,
        index: norm * norm,
        annular_multiplicities: annular,
    }
}

fn print_graph_info(label: &str, info: &GraphInfo) {
    println!("{label}{}", info.graph);
    println!("  depth              {}", info.depth);
    println!("  supertransitivity  {}", info.supertransitivity);
    let counts: Vec<String> = info.vertices.iter().map(|c| c.to_string()).collect();
    println!("  vertices by depth  {}", counts.join(" "));
    for (k, grp) in info.duals.iter().enumerate() {
        let g: Vec<String> = grp.iter().map(|j| j.to_string()).collect();
        println!("  duals at depth {:<3} {}", 2 * k, g.join(" "));
    }
    println!("  norm               {:.12}", info.norm);
    println!("  index              {:.12}", info.index);
    println!("  annular mult.      {}", info.annular_multiplicities.join(" "));
}

fn cmd_parse(graphs: &[String], json: bool) -> anyhow::Result<()> {
    match graphs {
        [g] => {
            let info = graph_info(&graph_arg(g)?);
            if json {
                print_json(&info)
            } else {
                print_graph_info("", &info);
                Ok(())
            }
        }
        [a, b] => {
            let p = pair_args(a, b)?;
            let infos = [graph_info(p.first()), graph_info(p.second())];
            if json {
                print_json(&infos)
            } else {
                print_graph_info("first  ", &infos[0]);
                print_graph_info("second ", &infos[1]);
                Ok(())
            }
        }
        _ => Err(Exit(1, "expected one graph or a pair".into()).into()),
    }
}

fn cmd_norm(graph: &str, json: bool) -> anyhow::Result<()> {
    let g = graph_arg(graph)?;
    let norm = graph_norm(g.graph());
    if json {
        print_json(&serde_json::json!({ "graph": g.to_string(), "norm": norm, "index": norm * norm }))
    } else {
        println!("norm  {norm:.15}");
        println!("index {:.15}", norm * norm);
        Ok(())
    }
}

fn cmd_dims(graph: &str, q: f64, mode: Mode, json: bool) -> anyhow::Result<()> {
    let g = graph_arg(graph)?;
    let mode = match mode {
        Mode::Truncated => DimensionMode::Truncated,
        Mode::Finite => DimensionMode::Finite,
    };
    let profile = dimension_vector(g.graph(), q, mode)?;
    if json {
        return print_json(&profile);
    }
    println!("q {q}  delta {}", profile.delta);
    for (d, row) in profile.dims.iter().enumerate() {
        let vals: Vec<String> = row.iter().map(|x| x.map_or("free".to_string(), |v| format!("{v:.9}"))).collect();
        println!("depth {d:<3} {}", vals.join("  "));
    }
    Ok(())
}

fn print_pairs(title: &str, pairs: &[BigraphPair]) {
    println!("{title} ({}):", pairs.len());
    for p in pairs {
        println!("{p}");
    }
}

fn cmd_extend(limit: f64, slack: f64, graphs: &[String], json: bool) -> anyhow::Result<()> {
    let cfg = OdometerConfig::new(limit).with_slack(slack);
    match graphs {
        [g] => {
            let exts: Vec<String> = extend_graph(&graph_arg(g)?, &cfg).iter().map(|e| e.to_string()).collect();
            if json {
                return print_json(&exts);
            }
            println!("extensions ({}):", exts.len());
            for e in exts {
                println!("{e}");
            }
            Ok(())
        }
        [a, b] => {
            let p = pair_args(a, b)?;
            let equal = extend_pair_equal(&p, &cfg)?;
            let unequal = extend_pair_unequal(&p, &cfg)?;
            if json {
                return print_json(&serde_json::json!({ "equal": equal, "unequal": unequal }));
            }
            print_pairs("equal depth", &equal);
            print_pairs("unequal depth", &unequal);
            Ok(())
        }
        _ => Err(Exit(1, "expected one graph or a pair".into()).into()),
    }
}

fn cmd_check(
    p: &BigraphPair,
    associativity: Option<Scope>,
    triple: bool,
    duals: bool,
    quadruple: bool,
    json: bool,
) -> anyhow::Result<()> {
    let all = associativity.is_none() && !triple && !duals && !quadruple;
    let mut results: Vec<(String, Result<ObstructionReport, String>)> = Vec::new();
    let scopes: Vec<Scope> = match associativity {
        Some(s) => vec![s],
        None if all => vec![Scope::Local, Scope::Global],
        None => vec![],
    };
    for s in scopes {
        let (name, scope) = match s {
            Scope::Local => ("associativity (local)", AssociativityScope::InteriorOnly),
            Scope::Global => ("associativity (global)", AssociativityScope::IncludeDeepest),
        };
        results.push((name.into(), Ok(associativity_check(p, scope))));
    }
    if triple || all {
        results.push(("triple point".into(), triple_point_check(p).map_err(|e| e.to_string())));
    }
    if duals || all {
        results.push(("dual counts".into(), dual_count_check(p).map_err(|e| e.to_string())));
    }
    if quadruple || all {
        results.push(("even quadruple prefix".into(), Ok(even_quadruple_prefix_check(p))));
    }
    if json {
        let doc: Vec<serde_json::Value> = results
            .iter()
            .map(|(name, r)| match r {
                Ok(rep) => serde_json::json!({ "test": name, "report": rep }),
                Err(e) => serde_json::json!({ "test": name, "skipped": e }),
            })
            .collect();
        return print_json(&doc);
    }
    for (name, r) in &results {
        match r {
            Ok(rep) if rep.passed() => println!("{name:<24} pass"),
            Ok(rep) => println!("{name:<24} FAIL {:?}", rep.witness),
            Err(e) => println!("{name:<24} skipped: {e}"),
        }
    }
    Ok(())
}

fn read_pairs(path: &PathBuf) -> anyhow::Result<Vec<BigraphPair>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_pairs(&text)?.into_iter().map(|(_, p)| p).collect())
}

#[allow(clippy::too_many_arguments)]
fn cmd_odometer(
    limit: f64,
    slack: f64,
    strict: bool,
    max_steps: Option<usize>,
    stop_weeds: Option<&PathBuf>,
    dot: Option<&PathBuf>,
    json: bool,
    seed: BigraphPair,
) -> anyhow::Result<()> {
    if !(limit > 0.0) || !(slack >= 0.0) {
        bail!(Exit(1, format!("index limit must be positive and slack non-negative, got {limit} and {slack}")));
    }
    let seed_index = graph_norm(seed.first().graph()).max(graph_norm(seed.second().graph())).powi(2);
    if limit <= seed_index {
        bail!(Exit(4, format!("index limit {limit} does not exceed the seed's index {seed_index:.9}")));
    }
    let stops = match stop_weeds {
        Some(path) => read_pairs(path)?,
        None => Vec::new(),
    };
    let cfg = OdometerConfig::new(limit).with_slack(slack).with_strict_limit(strict);
    let start = ClassificationStatement::new(seed, limit);
    let (statement, tree) = run_odometer(&start, &cfg, max_steps, &stops)?;
    if let Some(path) = dot {
        std::fs::write(path, tree.to_dot()).with_context(|| format!("writing {}", path.display()))?;
    }
    if json {
        println!("{}", statement.to_json());
    } else {
        print_pairs("vines", &statement.vines);
        print_pairs("weeds", &statement.weeds);
    }
    Ok(())
}

fn cmd_classify(
    limit: f64,
    slack: f64,
    fixtures: Option<&PathBuf>,
    dot_dir: Option<&PathBuf>,
    json: bool,
) -> anyhow::Result<()> {
    let cfg = PipelineConfig { index_limit: limit, slack, ..PipelineConfig::default() };
    let report = run_index5_classification(&cfg)?;
    if let Some(dir) = dot_dir {
        std::fs::create_dir_all(dir)?;
        for f in &report.families {
            std::fs::write(dir.join(format!("{}.dot", f.name)), f.tree.to_dot())?;
        }
    }
    if json {
        println!("{}", report.to_json());
    } else {
        for s in &report.stages {
            println!("stage {:<24} kept {:>3}  eliminated {:>3}", s.name, s.kept.len(), s.eliminated.len());
        }
        for f in &report.families {
            println!(
                "family {:<6} vines {:>3}  weeds {:>3}  nodes {:>3}",
                f.name,
                f.statement.vines.len(),
                f.statement.weeds.len(),
                f.tree.nodes.len()
            );
        }
        print_pairs("vines", &report.statement.vines);
        print_pairs("weeds", &report.statement.weeds);
    }
    if let Some(dir) = fixtures {
        let fx = Fixtures::from_dir(dir).with_context(|| format!("reading fixtures from {}", dir.display()))?;
        let diffs = compare_with_fixtures(&report, &fx)?;
        if !diffs.is_empty() {
            let mut text = String::new();
            for d in &diffs {
                text.push_str(&d.to_string());
            }
            eprint!("{text}");
            bail!(Exit(5, format!("{} mismatches against {}", diffs.len(), dir.display())));
        }
        eprintln!("fixtures match");
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| anyhow!(e))?;
    }
    match cli.command {
        Command::Parse { graphs, json } => cmd_parse(&graphs, json),
        Command::Norm { graph, json } => cmd_norm(&graph, json),
        Command::Dims { graph, q, mode, json } => cmd_dims(&graph, q, mode, json),
        Command::Extend { index_limit, slack, graphs, json } => cmd_extend(index_limit, slack, &graphs, json),
        Command::Check { associativity, triple_point, dual_counts, even_quadruple, first, second, json } => {
            let p = pair_args(&first, &second)?;
            cmd_check(&p, associativity, triple_point, dual_counts, even_quadruple, json)
        }
        Command::Odometer { index_limit, slack, strict, max_steps, stop_weeds, dot, json, first, second } => {
            let seed = pair_args(&first, &second)?;
            cmd_odometer(index_limit, slack, strict, max_steps, stop_weeds.as_ref(), dot.as_ref(), json, seed)
        }
        Command::Classify { index_limit, slack, fixtures, dot_dir, json } => {
            cmd_classify(index_limit, slack, fixtures.as_ref(), dot_dir.as_ref(), json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
