use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Instant;

use sha2::{Digest, Sha256};
use wimp_core::bounds::bound_report;
use wimp_core::decomposition::{build, Strategy, TreeDecomposition};
use wimp_core::exact::{exact_chi_w_with, OracleConfig, SolveResult};
use wimp_core::experiment::conjecture_search;
use wimp_core::fpt_budget::{check_fixed_point, minimal_bits, solve_fpt_budget, BudgetError};
use wimp_core::fpt_indegree::solve_fpt_indegree;
use wimp_core::generators::{
    complete_embed, partition_instance, random_instance, reduce_defective, WeightModel,
};
use wimp_core::graph::{UndirectedWeightedGraph, WeightedDigraph};
use wimp_core::io::{
    parse_coloring, parse_decomposition, parse_graph, serialize_coloring, serialize_decomposition,
    serialize_digraph, serialize_undirected, GraphFile,
};
use wimp_core::weight::WeightInt;

use crate::error::CliError;
use crate::{
    BoundsArgs, Command, DecompCommand, DecompositionArgs, ExperimentCommand, GenCommand, Method, SolveArgs,
    ValidateArgs,
};

/// Default cap on the estimated number of dynamic-programming states.
pub const DEFAULT_STATE_LIMIT: f64 = 1e12;

/// `auto` picks fpt-budget up to this precision.
pub const AUTO_MAX_BITS: u32 = 4;
/// `auto` picks fpt-indegree up to this unweighted indegree.
pub const AUTO_MAX_INDEGREE: usize = 3;

pub fn run<I: WeightInt>(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve(args) => solve::<I>(args),
        Command::Bounds(args) => bounds::<I>(args),
        Command::Gen(g) => generate::<I>(g),
        Command::Decomp(d) => decomp::<I>(d),
        Command::Validate(args) => validate::<I>(args),
        Command::Experiment(ExperimentCommand::Conjecture { max_n, trials, seed }) => {
            print!("{}", conjecture_search::<I>(max_n, trials, seed)?);
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph<I: WeightInt>(path: &Path) -> Result<GraphFile<I>, CliError> {
    parse_graph(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_digraph<I: WeightInt>(path: &Path) -> Result<WeightedDigraph<I>, CliError> {
    Ok(load_graph::<I>(path)?.into_digraph())
}

/// Reads `p wug`, `p wig` (as its underlying graph) or a DIMACS `p edge`
/// file. Repeated DIMACS edges are merged.
fn load_undirected<I: WeightInt>(path: &Path) -> Result<UndirectedWeightedGraph<I>, CliError> {
    let text = read(path)?;
    let is_dimacs = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('c') && !l.starts_with('#'))
        .is_some_and(|l| l.split_whitespace().take(2).eq(["p", "edge"]));
    if !is_dimacs {
        return match load_graph::<I>(path)? {
            GraphFile::Undirected(h) => Ok(h),
            GraphFile::Directed(g) => Ok(g.underlying_graph()),
        };
    }
    let bad =
        |ln: usize, l: &str| CliError::Input(format!("{}: line {ln}: malformed line `{l}`", path.display()));
    let mut n = None;
    let mut edges = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let l = raw.trim();
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            [c, ..] if c.starts_with('c') || c.starts_with('#') => {}
            ["p", "edge", nv, _] if n.is_none() => n = Some(nv.parse::<usize>().map_err(|_| bad(i + 1, l))?),
            ["e", u, v] if n.is_some() => {
                let u: usize = u.parse().map_err(|_| bad(i + 1, l))?;
                let v: usize = v.parse().map_err(|_| bad(i + 1, l))?;
                edges.insert((u.min(v), u.max(v)));
            }
            _ => return Err(bad(i + 1, l)),
        }
    }
    let n = n.expect("header found above");
    UndirectedWeightedGraph::unweighted(n, edges)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn digest<I: WeightInt>(g: &WeightedDigraph<I>) -> String {
    hex::encode(Sha256::digest(serialize_digraph(g).as_bytes()))
}

/// The supplied decomposition rooted and validated, or one built from `g`.
fn obtain_decomposition<I: WeightInt>(
    g: &WeightedDigraph<I>,
    args: &DecompositionArgs,
) -> Result<TreeDecomposition, CliError> {
    match &args.decomposition {
        Some(path) => {
            let d = parse_decomposition(&read(path)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            if args.root == 0 || args.root > d.bag_count() {
                return Err(CliError::Usage(format!(
                    "--root must be between 1 and {}, got {}",
                    d.bag_count(),
                    args.root
                )));
            }
            let d = d.root_at(args.root - 1)?;
            d.validate(g)?;
            Ok(d)
        }
        None => Ok(build(g, Strategy::from(args.strategy))?),
    }
}

/// Stirling numbers of the second kind `S(e, j)` summed over `j <= k`: the
/// number of canonical colorings of `e` vertices with at most `k` colors.
fn canonical_colorings(e: usize, k: usize) -> f64 {
    let mut row = vec![0f64; k + 1];
    row[0] = 1.0;
    for _ in 0..e {
        for j in (1..=k).rev() {
            row[j] = j as f64 * row[j] + row[j - 1];
        }
        row[0] = 0.0;
    }
    row.iter().sum()
}

fn palette(d: &TreeDecomposition) -> usize {
    (d.width() + 1).max(1) as usize
}

fn indegree_estimate<I: WeightInt>(g: &WeightedDigraph<I>, d: &TreeDecomposition) -> f64 {
    let k = palette(d);
    (0..d.bag_count()).map(|i| canonical_colorings(d.extended_bag(g, i).len(), k)).sum()
}

/// Budgets per vertex are capped by the units its in-arcs can charge.
fn budget_estimate<I: WeightInt>(g: &WeightedDigraph<I>, d: &TreeDecomposition, bits: u32) -> f64 {
    let k = palette(d);
    let options: Vec<f64> = g
        .vertices()
        .map(|v| {
            let need: f64 =
                g.in_arcs(v).map(|a| a.weight.dyadic_units(bits).unwrap_or(u64::MAX) as f64).sum();
            (need + 1.0).min(2f64.powi(bits as i32))
        })
        .collect();
    (0..d.bag_count())
        .map(|i| {
            let bag = d.bag(i);
            canonical_colorings(bag.len(), k) * bag.iter().map(|&v| options[v - 1]).product::<f64>()
        })
        .sum()
}

fn guard_states(method: Method, estimate: f64, limit: f64) -> Result<(), CliError> {
    if estimate > limit {
        Err(CliError::Resource(format!(
            "{} would explore about {estimate:.3e} states, above --state-limit {limit:.3e}",
            method.name()
        )))
    } else {
        Ok(())
    }
}

struct Outcome {
    method: Method,
    result: SolveResult,
    stats: Vec<(&'static str, String)>,
}

fn auto_method<I: WeightInt>(g: &WeightedDigraph<I>) -> Method {
    match minimal_bits(g) {
        Ok(b) if b <= AUTO_MAX_BITS => Method::FptBudget,
        _ if g.max_unweighted_indegree() <= AUTO_MAX_INDEGREE => Method::FptIndegree,
        _ => Method::Exact,
    }
}

fn run_method<I: WeightInt>(
    g: &WeightedDigraph<I>,
    d: &TreeDecomposition,
    method: Method,
    args: &SolveArgs,
) -> Result<Outcome, CliError> {
    let (result, stats) = match method {
        Method::Auto => return run_method(g, d, auto_method(g), args),
        Method::Exact => {
            let config = OracleConfig { max_vertices: args.max_vertices };
            let result = exact_chi_w_with(g, g.n(), &config)?
                .ok_or_else(|| CliError::Internal("n colors always suffice".into()))?;
            (result, Vec::new())
        }
        Method::FptIndegree => {
            guard_states(method, indegree_estimate(g, d), args.state_limit)?;
            let s = solve_fpt_indegree(g, d)?;
            let stats = vec![
                ("memo_entries", s.stats.entries.to_string()),
                ("memo_hits", s.stats.hits.to_string()),
                ("max_key_width", s.stats.max_key_width.to_string()),
            ];
            (s.result, stats)
        }
        Method::FptBudget => {
            let bits = match args.bits {
                Some(b) => {
                    check_fixed_point(g, b)?;
                    b
                }
                None => minimal_bits(g).map_err(|e| match e {
                    BudgetError::NotFixedPoint { tail, head, weight, .. } => CliError::Precondition(format!(
                        "fpt-budget needs dyadic weights; arc ({tail}, {head}) has weight {weight}"
                    )),
                    other => other.into(),
                })?,
            };
            guard_states(method, budget_estimate(g, d, bits), args.state_limit)?;
            let s = solve_fpt_budget(g, d, bits)?;
            let stats = vec![
                ("bits", bits.to_string()),
                ("color_entries", s.stats.color_entries.to_string()),
                ("distribute_entries", s.stats.distribute_entries.to_string()),
                ("memo_hits", s.stats.hits.to_string()),
                ("max_key_width", s.stats.max_key_width.to_string()),
            ];
            (s.result, stats)
        }
    };
    // every witness is re-checked before it is reported
    if !g.is_valid_coloring(&result.witness)? || result.witness.distinct_colors() > result.chromatic {
        return Err(CliError::Internal(format!("{} returned an invalid witness", method.name())));
    }
    Ok(Outcome { method, result, stats })
}

fn witness_path(out: &Path, method: Method, suffixed: bool) -> PathBuf {
    if !suffixed {
        return out.to_path_buf();
    }
    let mut s = out.as_os_str().to_os_string();
    s.push(".");
    s.push(method.name());
    PathBuf::from(s)
}

fn report(
    o: &Outcome,
    args: &SolveArgs,
    requested: Method,
    suffixed: bool,
    ms: f64,
) -> Result<String, CliError> {
    let mut text = String::new();
    let _ = writeln!(text, "method={}", o.method.name());
    if requested == Method::Auto {
        let _ = writeln!(text, "selected_by=auto");
    }
    let _ = writeln!(text, "chromatic={}", o.result.chromatic);
    if let Some(out) = &args.out {
        let path = witness_path(out, o.method, suffixed);
        write(&path, &serialize_coloring(&o.result.witness))?;
        let _ = writeln!(text, "witness={}", path.display());
    }
    let _ = writeln!(text, "wall_ms={ms:.3}");
    if args.stats {
        for (k, v) in &o.stats {
            let _ = writeln!(text, "{k}={v}");
        }
    }
    Ok(text)
}

fn solve<I: WeightInt>(args: SolveArgs) -> Result<(), CliError> {
    let g = load_digraph::<I>(&args.graph)?;
    let d = obtain_decomposition(&g, &args.decomposition)?;
    println!("instance={}", digest(&g));
    let mut failure = None;
    if args.all_methods {
        let methods = [Method::Exact, Method::FptBudget, Method::FptIndegree];
        let runs: Vec<(Result<Outcome, CliError>, f64)> = thread::scope(|s| {
            let handles: Vec<_> = methods
                .iter()
                .map(|&m| {
                    let (g, d, args) = (&g, &d, &args);
                    s.spawn(move || {
                        let start = Instant::now();
                        let r = run_method(g, d, m, args);
                        (r, start.elapsed().as_secs_f64() * 1e3)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
        });
        let mut values = BTreeSet::new();
        for (m, (run, ms)) in methods.iter().zip(runs) {
            println!();
            match run {
                Ok(o) => {
                    values.insert(o.result.chromatic);
                    print!("{}", report(&o, &args, *m, true, ms)?);
                }
                Err(e) => {
                    println!("method={}", m.name());
                    println!("error={e}");
                    failure.get_or_insert(e);
                }
            }
        }
        println!();
        println!("agree={}", values.len() <= 1);
        if values.len() > 1 {
            return Err(CliError::Internal(format!("methods disagree: {values:?}")));
        }
    } else {
        let start = Instant::now();
        let o = run_method(&g, &d, args.method, &args)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        print!("{}", report(&o, &args, args.method, false, ms)?);
    }
    match bound_report(&g, Some(&d)) {
        Ok(b) => print!("{b}"),
        Err(e) => println!("bounds_error={e}"),
    }
    failure.map_or(Ok(()), Err)
}

fn bounds<I: WeightInt>(args: BoundsArgs) -> Result<(), CliError> {
    let g = load_digraph::<I>(&args.graph)?;
    let d = obtain_decomposition(&g, &args.decomposition)?;
    print!("{}", bound_report(&g, Some(&d))?);
    Ok(())
}

fn generate<I: WeightInt>(command: GenCommand) -> Result<(), CliError> {
    match command {
        GenCommand::Defective { input, d, out } => {
            let h = load_undirected::<I>(&input)?;
            emit(out.as_deref(), &serialize_digraph(&reduce_defective(&h, d)?))
        }
        GenCommand::CompleteEmbed { input, out } => {
            let g = load_digraph::<I>(&input)?;
            emit(out.as_deref(), &serialize_digraph(&complete_embed(&g)))
        }
        GenCommand::Partition { values, out, td_out } => {
            let (g, d) = partition_instance::<I>(&values)?;
            let td_out = td_out.unwrap_or_else(|| out.with_extension("td"));
            if td_out == out {
                return Err(CliError::Usage("--td-out must differ from --out".into()));
            }
            // the gadget is symmetric, so it is written as an undirected graph
            write(&out, &serialize_undirected(&g.symmetric_core()))?;
            write(&td_out, &serialize_decomposition(&d, g.n()))
        }
        GenCommand::Random { n, p, seed, bits, max_den, out } => {
            let model = bits.map_or(WeightModel::Rational(max_den), WeightModel::Dyadic);
            emit(out.as_deref(), &serialize_digraph(&random_instance::<I>(n, p, model, seed)?))
        }
    }
}

fn decomp<I: WeightInt>(command: DecompCommand) -> Result<(), CliError> {
    match command {
        DecompCommand::Build { graph, strategy, out } => {
            let g = load_digraph::<I>(&graph)?;
            let d = build(&g, strategy.into())?;
            emit(out.as_deref(), &serialize_decomposition(&d, g.n()))
        }
        DecompCommand::Validate { graph, decomposition, root } => {
            let g = load_digraph::<I>(&graph)?;
            let args = DecompositionArgs {
                decomposition: Some(decomposition),
                root,
                strategy: crate::StrategyArg::MinFill,
            };
            match obtain_decomposition(&g, &args) {
                Ok(d) => {
                    println!("valid=true");
                    println!("bags={}", d.bag_count());
                    println!("width={}", d.width());
                    Ok(())
                }
                Err(e @ CliError::Precondition(_)) => {
                    println!("valid=false");
                    Err(e)
                }
                Err(e) => Err(e),
            }
        }
    }
}

fn validate<I: WeightInt>(args: ValidateArgs) -> Result<(), CliError> {
    let g = load_digraph::<I>(&args.graph)?;
    let c = parse_coloring(&read(&args.coloring)?, g.n())
        .map_err(|e| CliError::Input(format!("{}: {e}", args.coloring.display())))?;
    let violations = g.coloring_violations(&c)?;
    println!("valid={}", violations.is_empty());
    println!("colors={}", c.distinct_colors());
    for (v, indegree) in &violations {
        println!("violation vertex={v} same_color_indegree={indegree}");
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Precondition(format!("invalid coloring: {} violating vertices", violations.len())))
    }
}
