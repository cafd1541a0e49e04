use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use mdskit::{
    brute_force_mds, build_seth_instance, emit_path_decomposition, gen_instance, normalize_csp,
    partition_oracle, read_csp, read_graph, read_solution, read_td, reduce_eds_to_mds, solve_exact,
    solve_fpt, solve_treewidth, validate_mds, write_graph, write_solution, write_td, ExactOptions,
    FptOptions, GenKind, Graph, MixedSolution, OracleLimits, Violation,
};

const EXIT_NO_SOLUTION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(name = "mdskit", version, about = "Mixed Dominating Set solvers and instance generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Brute,
    Partition,
    Exact,
    Fpt,
    Treewidth,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Brute => "brute",
            Algo::Partition => "partition",
            Algo::Exact => "exact",
            Algo::Fpt => "fpt",
            Algo::Treewidth => "treewidth",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print the solution followed by a JSON report.
    Solve {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        algo: Algo,
        /// Budget for the fpt solver.
        #[arg(long, required_if_eq("algo", "fpt"))]
        k: Option<usize>,
        /// Tree decomposition for the treewidth solver.
        #[arg(long)]
        td: Option<PathBuf>,
        /// Disable pruning in the exact solver.
        #[arg(long)]
        faithful: bool,
        /// Make the fpt solver return a minimum solution within the budget.
        #[arg(long)]
        optimal: bool,
        /// Also write the solution to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        pretty: bool,
    },
    /// Check a solution file against a graph.
    Validate { graph: PathBuf, solution: PathBuf },
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        kind: GenCommand,
    },
    /// Run several solvers over every `.gr` file of a directory.
    Bench {
        corpus: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "partition,exact,fpt,treewidth")]
        algos: Vec<Algo>,
        #[arg(long)]
        faithful: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        pretty: bool,
    },
    /// Print the graph whose MDS optimum is one more than the EDS optimum of the input.
    ReduceEds { graph: PathBuf },
}

#[derive(Subcommand)]
enum GenCommand {
    Path {
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Cycle {
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Random {
        n: usize,
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Tree {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower-bound construction from a CSP file: writes `<prefix>.gr`,
    /// `<prefix>.td` and `<prefix>.json`.
    Seth {
        csp: PathBuf,
        /// Pendant set size, replacing the default 2k+1.
        #[arg(long)]
        pendant: Option<usize>,
        /// Output prefix; defaults to the CSP path without its extension.
        #[arg(long)]
        prefix: Option<PathBuf>,
    },
}

/// Input problems: bad files, bad arguments, instances over a solver's caps.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph> {
    read_graph(&read_text(path)?).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

struct Run {
    solution: Option<MixedSolution>,
    stats: Value,
    branches: u64,
}

fn run_algo(g: &Graph, algo: Algo, k: Option<usize>, td: Option<&mdskit::TreeDecomposition>, faithful: bool, optimal: bool) -> Result<Run> {
    let as_input = |e: mdskit::Error| input(e.to_string());
    Ok(match algo {
        Algo::Brute => Run {
            solution: Some(brute_force_mds(g, OracleLimits::default()).map_err(as_input)?),
            stats: json!({}),
            branches: 0,
        },
        Algo::Partition => Run {
            solution: Some(partition_oracle(g, OracleLimits::default()).map_err(as_input)?),
            stats: json!({}),
            branches: 0,
        },
        Algo::Exact => {
            let opts = if faithful { ExactOptions::faithful() } else { ExactOptions::default() };
            let out = solve_exact(g, opts);
            let branches = out.stats.branches;
            Run { solution: Some(out.solution), stats: serde_json::to_value(&out.stats)?, branches }
        }
        Algo::Fpt => {
            let k = k.ok_or_else(|| input("--k is required for the fpt solver"))?;
            let out = solve_fpt(g, k, FptOptions { optimal, ..FptOptions::default() });
            let branches = out.stats.branches;
            Run { solution: out.solution, stats: serde_json::to_value(&out.stats)?, branches }
        }
        Algo::Treewidth => {
            let out = solve_treewidth(g, td).map_err(as_input)?;
            Run { solution: Some(out.solution), stats: serde_json::to_value(&out.stats)?, branches: 0 }
        }
    })
}

fn describe(g: &Graph, v: &Violation) -> String {
    match *v {
        Violation::UndominatedVertex(x) => format!("vertex {} undominated", x + 1),
        Violation::UndominatedEdge(e) => {
            let (a, b) = g.edge(e);
            format!("edge ({}, {}) undominated", a + 1, b + 1)
        }
    }
}

fn cmd_solve(
    graph: &Path,
    algo: Algo,
    k: Option<usize>,
    td: Option<&Path>,
    flags: (bool, bool, bool),
    out: Option<&Path>,
    seed: u64,
) -> Result<u8> {
    let (faithful, optimal, pretty) = flags;
    let g = load_graph(graph)?;
    let td = match td {
        Some(p) => {
            let (td, n) = read_td(&read_text(p)?).map_err(|e| input(format!("{}: {e}", p.display())))?;
            if n != g.n() {
                bail!(input(format!("{}: decomposition is for {n} vertices, graph has {}", p.display(), g.n())));
            }
            Some(td)
        }
        None => None,
    };
    let start = Instant::now();
    let run = run_algo(&g, algo, k, td.as_ref(), faithful, optimal)?;
    let wall_ms = start.elapsed().as_millis() as u64;
    let (size, valid, code) = match &run.solution {
        Some(sol) => {
            let report = validate_mds(&g, sol).map_err(|e| anyhow!("solver returned bad ids: {e}"))?;
            let text = write_solution(&g, sol);
            if report.valid {
                print!("{text}");
                if let Some(p) = out {
                    fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
                }
            } else {
                for v in &report.violations {
                    eprintln!("solver output invalid: {}", describe(&g, v));
                }
            }
            (json!(sol.size()), report.valid, if report.valid { 0 } else { EXIT_INVALID })
        }
        None => (json!("none"), true, EXIT_NO_SOLUTION),
    };
    let report = json!({
        "algo": algo.name(),
        "instance": graph.display().to_string(),
        "size": size,
        "valid": valid,
        "stats": run.stats,
        "wall_ms": wall_ms,
        "seed": seed,
    });
    if pretty {
        println!("{:<10} {:>6} {:>6} {:>10}", "algo", "size", "valid", "wall_ms");
        println!("{:<10} {:>6} {:>6} {:>10}", algo.name(), size.to_string().trim_matches('"'), valid, wall_ms);
    } else {
        println!("{report}");
    }
    Ok(code)
}

fn cmd_validate(graph: &Path, solution: &Path) -> Result<u8> {
    let g = load_graph(graph)?;
    let sol = read_solution(&read_text(solution)?, &g).map_err(|e| input(format!("{}: {e}", solution.display())))?;
    let report = validate_mds(&g, &sol).map_err(|e| input(e.to_string()))?;
    if report.valid {
        println!("valid (size {})", sol.size());
        return Ok(0);
    }
    println!("invalid: {} violation(s)", report.violation_count);
    for v in &report.violations {
        println!("{}", describe(&g, v));
    }
    Ok(1)
}

fn cmd_gen(kind: GenCommand) -> Result<u8> {
    let (which, header, out) = match kind {
        GenCommand::Path { n, out } => (GenKind::Path(n), format!("path {n}"), out),
        GenCommand::Cycle { n, out } => (GenKind::Cycle(n), format!("cycle {n}"), out),
        GenCommand::Random { n, p, seed, out } => (GenKind::Random { n, p, seed }, format!("random {n} {p} seed {seed}"), out),
        GenCommand::Tree { n, seed, out } => (GenKind::Tree { n, seed }, format!("tree {n} seed {seed}"), out),
        GenCommand::Seth { csp, pendant, prefix } => return gen_seth(&csp, pendant, prefix),
    };
    let g = gen_instance(which).map_err(|e| input(e.to_string()))?;
    write_out(out.as_deref(), &write_graph(&g, &[header]))?;
    Ok(0)
}

fn gen_seth(csp: &Path, pendant: Option<usize>, prefix: Option<PathBuf>) -> Result<u8> {
    let parsed = read_csp(&read_text(csp)?).map_err(|e| input(format!("{}: {e}", csp.display())))?;
    let norm = normalize_csp(&parsed).map_err(|e| input(format!("{}: {e}", csp.display())))?;
    let out = build_seth_instance(&norm, pendant).map_err(|e| input(e.to_string()))?;
    let path = emit_path_decomposition(&out);
    let p = &out.params;
    let mut header = vec![format!("seth n {} m {} q {} k {}", p.n, p.m, p.q, p.k)];
    if !p.is_faithful() {
        header.push(format!("non-faithful: pendant sets of size {} instead of 2k+1 = {}", p.pendant_size, 2 * p.k + 1));
    }
    let prefix = prefix.unwrap_or_else(|| csp.with_extension(""));
    let with_ext = |ext: &str| {
        let mut s = prefix.clone().into_os_string();
        s.push(ext);
        PathBuf::from(s)
    };
    let sidecar = json!({
        "n": p.n, "m": p.m, "q": p.q, "F": p.f, "A": p.a, "C": p.c, "k": p.k,
        "pendant_multiplier": p.pendant_multiplier,
        "pendant_size": p.pendant_size,
        "faithful": p.is_faithful(),
        "vertex_count": out.graph.n(),
        "edge_count": out.graph.m(),
        "section_offsets": out.section_offsets(),
        "pathwidth_bound": path.width(),
        "pathwidth_excess": path.excess(),
    });
    fs::write(with_ext(".gr"), write_graph(&out.graph, &header))?;
    fs::write(with_ext(".td"), write_td(&path.td, out.graph.n()))?;
    fs::write(with_ext(".json"), format!("{sidecar}\n"))?;
    println!("{sidecar}");
    Ok(0)
}

fn cmd_bench(corpus: &Path, algos: &[Algo], faithful: bool, seed: u64, pretty: bool) -> Result<u8> {
    let entries = fs::read_dir(corpus).map_err(|e| input(format!("{}: {e}", corpus.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gr"))
        .collect();
    files.sort();
    let graphs = files.iter().map(|f| load_graph(f)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<Value>> = files
        .par_iter()
        .zip(graphs.par_iter())
        .map(|(file, g)| {
            let mut rows = Vec::with_capacity(algos.len());
            let mut sizes = Vec::with_capacity(algos.len());
            for &algo in algos {
                let start = Instant::now();
                let k = Some(g.n());
                let row = match run_algo(g, algo, k, None, faithful, true) {
                    Ok(run) => {
                        let sol = run.solution.expect("budget n always admits a solution");
                        let valid = validate_mds(g, &sol).map(|r| r.valid).unwrap_or(false);
                        sizes.push(Some(sol.size()));
                        json!({
                            "instance": file.display().to_string(), "algo": algo.name(),
                            "size": sol.size(), "valid": valid, "branches": run.branches,
                            "wall_ms": start.elapsed().as_millis() as u64, "seed": seed,
                        })
                    }
                    Err(e) => {
                        sizes.push(None);
                        json!({
                            "instance": file.display().to_string(), "algo": algo.name(),
                            "size": Value::Null, "valid": false, "error": e.to_string(), "seed": seed,
                        })
                    }
                };
                rows.push(row);
            }
            let known: Vec<usize> = sizes.iter().flatten().copied().collect();
            let agree = known.windows(2).all(|w| w[0] == w[1]);
            for (row, size) in rows.iter_mut().zip(&sizes) {
                let ok = agree && size.is_some() && row["valid"] == json!(true);
                row["agree"] = json!(ok);
            }
            rows
        })
        .collect();
    let mut disagreements = 0;
    if pretty {
        println!("{:<40} {:<10} {:>6} {:>6} {:>10} {:>10} {:>6}", "instance", "algo", "size", "valid", "branches", "wall_ms", "agree");
    }
    for row in rows.iter().flatten() {
        if row["agree"] != json!(true) {
            disagreements += 1;
        }
        if pretty {
            println!(
                "{:<40} {:<10} {:>6} {:>6} {:>10} {:>10} {:>6}",
                row["instance"].as_str().unwrap_or(""),
                row["algo"].as_str().unwrap_or(""),
                row["size"].to_string(),
                row["valid"].to_string(),
                row["branches"].to_string(),
                row["wall_ms"].to_string(),
                row["agree"].to_string(),
            );
        } else {
            println!("{row}");
        }
    }
    Ok(if disagreements == 0 { 0 } else { 1 })
}

fn cmd_reduce_eds(graph: &Path) -> Result<u8> {
    let g = load_graph(graph)?;
    let h = reduce_eds_to_mds(&g);
    print!("{}", write_graph(&h, &[format!("reduce-eds of {}", graph.display())]));
    Ok(0)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("MDSKIT_THREADS") {
        let n: usize = v.parse().map_err(|_| input(format!("MDSKIT_THREADS must be a positive integer, got `{v}`")))?;
        if n == 0 {
            bail!(input("MDSKIT_THREADS must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    configure_threads()?;
    match cli.command {
        Command::Solve { graph, algo, k, td, faithful, optimal, out, seed, pretty } => {
            cmd_solve(&graph, algo, k, td.as_deref(), (faithful, optimal, pretty), out.as_deref(), seed)
        }
        Command::Validate { graph, solution } => cmd_validate(&graph, &solution),
        Command::Gen { kind } => cmd_gen(kind),
        Command::Bench { corpus, algos, faithful, seed, pretty } => cmd_bench(&corpus, &algos, faithful, seed, pretty),
        Command::ReduceEds { graph } => cmd_reduce_eds(&graph),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
